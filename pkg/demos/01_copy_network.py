"""Build a content-sharing network from the bundled article fixture.

Walks through the first pipeline stage end to end: load a JSONL corpus,
vectorize title+body with TF-IDF, find near-duplicate pairs across sources,
and assemble the directed copy graph with per-source normalization.

Run:  python3 demos/01_copy_network.py
"""

from pathlib import Path

from nudgesim import corpus, graph, synthetic

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def main() -> None:
    articles = corpus.load_articles(synthetic.fixture_articles_path())
    print(f"loaded {len(articles.articles)} articles from "
          f"{len(articles.source_counts())} sources ({articles.skipped} lines skipped)")

    tfidf = corpus.tfidf_vectors(articles)
    pairs = corpus.similar_pairs(tfidf, articles, threshold=0.85)
    print(f"\nnear-duplicate pairs at cosine >= 0.85: {len(pairs)}")
    for p in pairs:
        print(f"  {p.earlier:<8} -> {p.later:<8}  "
              f"{p.earlier_source:>17} -> {p.later_source:<17} sim={p.similarity:.4f}")

    csn = graph.build_csn(pairs, articles.source_counts())
    print(f"\ncopy graph: {len(csn.nodes)} sources, {len(csn.edges)} directed edges")
    print("edge weight = copies / articles published by the copying source:")
    for (src, dst), w in sorted(csn.edges.items()):
        raw = csn.raw_counts[(src, dst)]
        print(f"  {src:>17} -> {dst:<17} raw={raw} normalized={w:.4f}")

    communities = graph.detect_communities(csn)
    print(f"\ncommunity structure (directed modularity {communities.modularity:.4f}):")
    by_label: dict[int, list[str]] = {}
    for node, label in communities.labels.items():
        by_label.setdefault(label, []).append(node)
    for label in sorted(by_label):
        print(f"  community {label}: {', '.join(sorted(by_label[label]))}")

    corpus.write_pairs_tsv(pairs, OUT / "pairs.tsv")
    graph.save_graph(csn, OUT / "csn.tsv")
    print(f"\nwrote {OUT / 'pairs.tsv'} and {OUT / 'csn.tsv'}")


if __name__ == "__main__":
    main()
