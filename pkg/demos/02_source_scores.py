"""Derive quality and leaning scores for every source in the copy graph.

Shows the annotation rules in action: credibility flags pin quality to zero,
numeric ratings rescale to [0, 1], political leaning averages the available
categorical ratings, and sources nobody rated borrow the mean of their graph
neighbors (one hop, provider-backed donors only).

Run:  python3 demos/02_source_scores.py
"""

from pathlib import Path

from nudgesim import corpus, graph, groundtruth, synthetic

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def main() -> None:
    articles = corpus.load_articles(synthetic.fixture_articles_path())
    tfidf = corpus.tfidf_vectors(articles)
    pairs = corpus.similar_pairs(tfidf, articles)
    csn = graph.build_csn(pairs, articles.source_counts())

    labels = groundtruth.read_labels_csv(synthetic.fixture_labels_path())
    print(f"provider labels for {len(labels)} sources:")
    for item in labels:
        flags = sorted(item.os_flags | item.mbfc_flags)
        bits = []
        if item.newsguard is not None:
            bits.append(f"rating={item.newsguard}")
        if flags:
            bits.append(f"flags={','.join(flags)}")
        for name, value in (("allsides", item.allsides), ("buzzfeed", item.buzzfeed),
                            ("mbfc", item.mbfc_bias)):
            if value:
                bits.append(f"{name}={value}")
        print(f"  {item.source:<18} {'; '.join(bits) if bits else '(empty row)'}")

    scores = groundtruth.score_sources(labels, csn)
    print("\nderived scores (quality in [0,1], leaning in [-1,1]):")
    for source in sorted(scores):
        sc = scores[source]
        q = "  -  " if sc.quality is None else f"{sc.quality:.3f}"
        l = "  -   " if sc.leaning is None else f"{sc.leaning:+.3f}"
        print(f"  {source:<18} quality={q} leaning={l}  [{sc.provenance}]")

    print("\nnotes:")
    print("  northgate-news has no provider row; its one graph neighbor")
    print("  (quarry-press) donates both fields, so it lands as 'imputed'.")
    print("  orphan-press has a leaning but no quality and no graph edges,")
    print("  so it stays 'unavailable' and is excluded from simulation.")

    groundtruth.write_scores_csv(scores, OUT / "scores.csv")
    print(f"\nwrote {OUT / 'scores.csv'}")


if __name__ == "__main__":
    main()
