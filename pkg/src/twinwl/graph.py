"""Immutable undirected graph with discrete node labels.

Node identities are the local indices 0..n-1 and are never compared across
graphs; anything that crosses graph boundaries goes through a readout.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence


class GraphError(ValueError):
    """Base class for graph construction and validation errors."""


class SelfLoopError(GraphError):
    pass


class IndexOutOfRangeError(GraphError):
    pass


class LabelLengthMismatchError(GraphError):
    pass


class NotAPermutationError(GraphError):
    pass


@dataclass(frozen=True)
class Graph:
    """Undirected graph stored as sorted neighbor lists.

    ``adjacency[v]`` is an ascending tuple of neighbors of ``v``; the
    structure is symmetric, self-loop free and deduplicated when built via
    :func:`build_graph`.
    """

    id: str
    n: int
    adjacency: tuple  # tuple[tuple[int, ...], ...]
    node_labels: tuple  # tuple[int, ...]
    graph_label: Optional[int] = None

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def degree_sequence(self) -> list:
        return sorted(len(nbrs) for nbrs in self.adjacency)

    def edges(self):
        """Yield each undirected edge once as (u, v) with u < v."""
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield (u, v)


def build_graph(n, edges, labels=(), graph_label=None, graph_id="g"):
    """Build a validated Graph from an edge list.

    Empty ``labels`` means all-zero labels. Parallel edges collapse
    silently; self-loops are rejected.
    """
    if n < 0:
        raise IndexOutOfRangeError("node count must be non-negative")
    if labels is not None and len(labels) not in (0, n):
        raise LabelLengthMismatchError(
            f"got {len(labels)} labels for {n} nodes")
    neighbor_sets = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise IndexOutOfRangeError(f"edge ({u},{v}) outside [0,{n})")
        if u == v:
            raise SelfLoopError(f"self-loop at node {u}")
        neighbor_sets[u].add(v)
        neighbor_sets[v].add(u)
    adjacency = tuple(tuple(sorted(s)) for s in neighbor_sets)
    node_labels = tuple(labels) if labels else tuple([0] * n)
    for lab in node_labels:
        if lab < 0:
            raise GraphError(f"negative node label {lab}")
    return Graph(id=graph_id, n=n, adjacency=adjacency,
                 node_labels=node_labels, graph_label=graph_label)


def permute_graph(g: Graph, pi: Sequence[int], graph_id=None) -> Graph:
    """Relabel nodes of ``g`` by the bijection ``pi`` (v -> pi[v]).

    Edge (u, v) exists in ``g`` iff (pi[u], pi[v]) exists in the result, and
    the result's label at pi[v] is g's label at v.
    """
    if len(pi) != g.n or sorted(pi) != list(range(g.n)):
        raise NotAPermutationError(f"pi is not a permutation of 0..{g.n - 1}")
    adjacency = [None] * g.n
    labels = [0] * g.n
    for v in range(g.n):
        adjacency[pi[v]] = tuple(sorted(pi[u] for u in g.adjacency[v]))
        labels[pi[v]] = g.node_labels[v]
    return Graph(id=graph_id if graph_id is not None else g.id + "_perm",
                 n=g.n, adjacency=tuple(adjacency),
                 node_labels=tuple(labels), graph_label=g.graph_label)


def validate(g: Graph) -> list:
    """Return a list of invariant violations (empty iff the graph is valid).

    Violations are reported, not raised, so raw-constructed graphs can be
    inspected.
    """
    violations = []
    if g.n < 0:
        violations.append("negative node count")
        return violations
    if len(g.adjacency) != g.n:
        violations.append(f"adjacency has {len(g.adjacency)} rows, n={g.n}")
        return violations
    if len(g.node_labels) != g.n:
        violations.append(
            f"labels: {len(g.node_labels)} entries for {g.n} nodes")
    for v in range(g.n):
        nbrs = g.adjacency[v]
        for u in nbrs:
            if not (0 <= u < g.n):
                violations.append(f"range: node {v} lists neighbor {u}")
            elif v not in g.adjacency[u]:
                violations.append(f"symmetry: edge {v}->{u} not mirrored")
        if v in nbrs:
            violations.append(f"self-loop at node {v}")
        if len(set(nbrs)) != len(nbrs):
            violations.append(f"duplicate: node {v} neighbor list {nbrs}")
        if tuple(sorted(nbrs)) != tuple(nbrs):
            violations.append(f"order: node {v} neighbor list unsorted")
    for v, lab in enumerate(g.node_labels):
        if lab < 0:
            violations.append(f"label: node {v} has negative label {lab}")
    return violations


@dataclass(frozen=True)
class Corpus:
    """Ordered collection of graphs sharing one initial-label alphabet."""

    graphs: tuple
    label_alphabet_size: int
    class_count: int = 0

    @staticmethod
    def from_graphs(graphs):
        graphs = tuple(graphs)
        ids = [g.id for g in graphs]
        if len(set(ids)) != len(ids):
            raise GraphError("graph ids are not unique within the corpus")
        alphabet = 1 + max(
            (lab for g in graphs for lab in g.node_labels), default=-1)
        classes = {g.graph_label for g in graphs if g.graph_label is not None}
        # alphabet is 0 only for a corpus without any nodes, which then
        # embeds to the empty vector
        return Corpus(graphs=graphs, label_alphabet_size=alphabet,
                      class_count=len(classes))

    def __len__(self):
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)
