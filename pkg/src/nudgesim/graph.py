"""The source-level content sharing network (CSN).

Nodes are news sources; a directed edge A -> B with positive weight means B
published near-verbatim copies of A's articles. Raw edge weights count copy
pairs; normalized weights divide by the copier's total article output by
default ("what fraction of B's output came from A"), with an option to
normalize by the copied source instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import CopyPair

CSN_HEADER = "#csn v1"


@dataclass
class CsnGraph:
    """Directed weighted copy graph.

    ``edges`` holds normalized weights in (0, 1]; ``raw_counts`` the pair
    counts they were derived from; ``article_counts`` the per-source totals
    used for normalization (graph nodes only).
    """

    nodes: list[str] = field(default_factory=list)
    edges: dict[tuple[str, str], float] = field(default_factory=dict)
    raw_counts: dict[tuple[str, str], int] = field(default_factory=dict)
    article_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.nodes = sorted(self.nodes)
        node_set = set(self.nodes)
        for (src, dst), weight in self.edges.items():
            if src == dst:
                raise ValueError(f"self-loop on {src!r}")
            if src not in node_set or dst not in node_set:
                raise ValueError(f"edge endpoint missing from nodes: {src!r}->{dst!r}")
            if not (0.0 < weight <= 1.0):
                raise ValueError(
                    f"edge {src!r}->{dst!r} normalized weight {weight} outside (0, 1]"
                )

    def out_neighbors(self, node: str) -> list[str]:
        return sorted(dst for (src, dst) in self.edges if src == node)

    def in_neighbors(self, node: str) -> list[str]:
        return sorted(src for (src, dst) in self.edges if dst == node)

    def neighbors(self, node: str) -> list[str]:
        """Union of in- and out-neighbors, sorted."""
        out = {dst for (src, dst) in self.edges if src == node}
        out.update(src for (src, dst) in self.edges if dst == node)
        return sorted(out)


@dataclass
class CommunityAssignment:
    """Community label per node (contiguous small ints) plus the directed
    modularity of the partition."""

    labels: dict[str, int]
    modularity: float


def build_csn(
    pairs: list[CopyPair],
    article_counts: dict[str, int],
    normalize_side: str = "copier",
) -> CsnGraph:
    """Aggregate copy pairs into the CSN.

    raw weight(A -> B) counts pairs with earlier source A and later source B.
    With ``normalize_side="copier"`` (default) the normalized weight divides
    by the copier B's article count; ``"copied"`` divides by A's instead.
    Nodes are exactly the sources that appear in at least one pair; a node
    with a missing or zero article count is a fatal error.
    """
    if normalize_side not in ("copier", "copied"):
        raise ValueError(f"unknown normalize_side {normalize_side!r}")

    raw: dict[tuple[str, str], int] = {}
    nodes: set[str] = set()
    for p in pairs:
        key = (p.earlier_source, p.later_source)
        raw[key] = raw.get(key, 0) + 1
        nodes.add(p.earlier_source)
        nodes.add(p.later_source)

    for node in nodes:
        if article_counts.get(node, 0) < 1:
            raise ValueError(f"source {node!r} has no article count; cannot normalize")

    edges: dict[tuple[str, str], float] = {}
    for (src, dst), count in raw.items():
        denominator = article_counts[dst] if normalize_side == "copier" else article_counts[src]
        weight = count / denominator
        if weight > 1.0:
            raise ValueError(
                f"edge {src!r}->{dst!r}: {count} copy pairs exceed the "
                f"{denominator} articles used for normalization"
            )
        edges[(src, dst)] = weight

    return CsnGraph(
        nodes=sorted(nodes),
        edges=edges,
        raw_counts=raw,
        article_counts={n: article_counts[n] for n in sorted(nodes)},
    )


def save_graph(graph: CsnGraph, path) -> None:
    """Write the edge-list TSV.

    Header line, then one ``#node`` line per node carrying its article count,
    then ``from  to  raw_count  normalized_weight`` rows. Weights use
    full-precision decimal serialization so round-trips are exact.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSN_HEADER + "\n")
        for node in graph.nodes:
            fh.write(f"#node\t{node}\t{graph.article_counts.get(node, 0)}\n")
        for (src, dst) in sorted(graph.edges):
            fh.write(f"{src}\t{dst}\t{graph.raw_counts[(src, dst)]}\t{graph.edges[(src, dst)]!r}\n")


def load_graph(path) -> CsnGraph:
    """Read a graph written by :func:`save_graph`; malformed lines raise with
    their line number."""
    nodes: list[str] = []
    counts: dict[str, int] = {}
    edges: dict[tuple[str, str], float] = {}
    raw: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != CSN_HEADER:
            raise ValueError(f"{path}:1: expected header {CSN_HEADER!r}, got {first!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            try:
                if fields[0] == "#node":
                    if len(fields) != 3:
                        raise ValueError("expected '#node\\tsource\\tcount'")
                    nodes.append(fields[1])
                    counts[fields[1]] = int(fields[2])
                else:
                    if len(fields) != 4:
                        raise ValueError("expected 'from\\tto\\traw\\tweight'")
                    edges[(fields[0], fields[1])] = float(fields[3])
                    raw[(fields[0], fields[1])] = int(fields[2])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: malformed line ({exc})") from exc
    return CsnGraph(nodes=nodes, edges=edges, raw_counts=raw, article_counts=counts)


def directed_modularity(graph: CsnGraph, labels: dict[str, int]) -> float:
    """Q = (1/m) * sum_ij [w_ij - w_out(i) * w_in(j) / m] over same-community
    pairs, on the normalized edge weights. Zero for an edgeless graph."""
    m = sum(graph.edges.values())
    if m == 0:
        return 0.0
    out_s: dict[str, float] = {n: 0.0 for n in graph.nodes}
    in_s: dict[str, float] = {n: 0.0 for n in graph.nodes}
    for (src, dst), w in graph.edges.items():
        out_s[src] += w
        in_s[dst] += w
    q = 0.0
    for (src, dst), w in graph.edges.items():
        if labels[src] == labels[dst]:
            q += w
    for i in graph.nodes:
        for j in graph.nodes:
            if labels[i] == labels[j]:
                q -= out_s[i] * in_s[j] / m
    return q / m


class _LouvainLevel:
    """One aggregation level: integer-indexed directed multigraph with
    self-loops allowed."""

    def __init__(self, n: int, edges: dict[tuple[int, int], float]):
        self.n = n
        self.edges = edges
        self.m = sum(edges.values())
        self.out_strength = [0.0] * n
        self.in_strength = [0.0] * n
        self.out_adj: list[dict[int, float]] = [dict() for _ in range(n)]
        self.in_adj: list[dict[int, float]] = [dict() for _ in range(n)]
        for (i, j), w in edges.items():
            self.out_strength[i] += w
            self.in_strength[j] += w
            self.out_adj[i][j] = self.out_adj[i].get(j, 0.0) + w
            self.in_adj[j][i] = self.in_adj[j].get(i, 0.0) + w


def _local_moving(level: _LouvainLevel) -> list[int]:
    """Greedy node moves maximizing the directed modularity gain.

    Nodes are visited in index order; ties in gain go to the smallest
    community label. A zero-gain move is taken only when the node is a
    singleton moving into a community it shares an edge with (collapsing
    exact ties toward fewer communities); all other moves require strictly
    positive gain.
    """
    m = level.m
    comm = list(range(level.n))
    comm_in = list(level.in_strength)
    comm_out = list(level.out_strength)
    comm_size = [1] * level.n

    improved = True
    while improved:
        improved = False
        for node in range(level.n):
            c_old = comm[node]
            k_out = level.out_strength[node]
            k_in = level.in_strength[node]

            # take node out of its community
            comm_in[c_old] -= k_in
            comm_out[c_old] -= k_out
            comm_size[c_old] -= 1

            # weight from node to/from each neighboring community
            # (self-loops stay with the node whatever community it joins)
            links: dict[int, float] = {c_old: 0.0}
            for j, w in level.out_adj[node].items():
                if j != node:
                    links[comm[j]] = links.get(comm[j], 0.0) + w
            for j, w in level.in_adj[node].items():
                if j != node:
                    links[comm[j]] = links.get(comm[j], 0.0) + w

            def gain(c: int) -> float:
                return links.get(c, 0.0) / m - (
                    k_out * comm_in[c] + k_in * comm_out[c]
                ) / (m * m)

            stay_gain = gain(c_old)
            best_c, best_gain = c_old, stay_gain
            for c in sorted(links):
                if c == c_old:
                    continue
                g = gain(c)
                if g > best_gain + 1e-12 or (
                    g > best_gain - 1e-12 and c < best_c and best_c != c_old
                ):
                    best_c, best_gain = c, g

            if best_c == c_old and comm_size[c_old] == 0:
                # singleton: collapse an exact tie into a connected community
                for c in sorted(links):
                    if c != c_old and links[c] > 0.0 and gain(c) > stay_gain - 1e-12:
                        best_c = c
                        break

            comm[node] = best_c
            comm_in[best_c] += k_in
            comm_out[best_c] += k_out
            comm_size[best_c] += 1
            if best_c != c_old:
                improved = True
    return comm


def _aggregate(level: _LouvainLevel, comm: list[int]) -> tuple[_LouvainLevel, list[int]]:
    relabel: dict[int, int] = {}
    for node in range(level.n):
        c = comm[node]
        if c not in relabel:
            relabel[c] = len(relabel)
    edges: dict[tuple[int, int], float] = {}
    for (i, j), w in level.edges.items():
        key = (relabel[comm[i]], relabel[comm[j]])
        edges[key] = edges.get(key, 0.0) + w
    mapping = [relabel[comm[node]] for node in range(level.n)]
    return _LouvainLevel(len(relabel), edges), mapping


def detect_communities(graph: CsnGraph) -> CommunityAssignment:
    """Louvain-style greedy directed-modularity optimization.

    Deterministic: nodes are processed in sorted-id order and all ties break
    toward the smallest label, so repeated runs agree exactly. An edgeless
    graph yields one singleton community per node.
    """
    if not graph.nodes:
        raise ValueError("detect_communities requires a non-empty graph")
    index = {node: i for i, node in enumerate(graph.nodes)}
    if not graph.edges:
        return CommunityAssignment(
            labels={node: i for i, node in enumerate(graph.nodes)}, modularity=0.0
        )

    level = _LouvainLevel(
        len(graph.nodes),
        {(index[s], index[d]): w for (s, d), w in graph.edges.items()},
    )
    membership = list(range(level.n))  # original node -> current super-node
    while True:
        comm = _local_moving(level)
        if all(comm[i] == i for i in range(level.n)) or len(set(comm)) == level.n:
            break
        level, mapping = _aggregate(level, comm)
        membership = [mapping[membership[i]] for i in range(len(membership))]

    # contiguous labels ordered by smallest member node id
    first_member: dict[int, int] = {}
    for i, c in enumerate(membership):
        first_member.setdefault(c, i)
    order = sorted(first_member, key=lambda c: first_member[c])
    relabel = {c: rank for rank, c in enumerate(order)}
    labels = {node: relabel[membership[index[node]]] for node in graph.nodes}
    return CommunityAssignment(labels=labels, modularity=directed_modularity(graph, labels))


def write_communities_csv(assignment: CommunityAssignment, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("source,community\n")
        for node in sorted(assignment.labels):
            fh.write(f"{node},{assignment.labels[node]}\n")
