import pytest

from nudgesim import corpus, graph, synthetic


@pytest.fixture(scope="session")
def fixture_articles():
    return corpus.load_articles(synthetic.fixture_articles_path())


@pytest.fixture(scope="session")
def fixture_tfidf(fixture_articles):
    return corpus.tfidf_vectors(fixture_articles)


@pytest.fixture(scope="session")
def fixture_pairs(fixture_tfidf, fixture_articles):
    return corpus.similar_pairs(fixture_tfidf, fixture_articles)


@pytest.fixture(scope="session")
def fixture_csn(fixture_pairs, fixture_articles):
    return graph.build_csn(fixture_pairs, fixture_articles.source_counts())


@pytest.fixture(scope="session")
def world_catalog():
    """The bundled 56-source catalog with trained vectors; built once
    (roughly three seconds) and shared read-only across the session."""
    return synthetic.world_catalog()


@pytest.fixture(scope="session")
def world_scores():
    return synthetic.world_scores()
