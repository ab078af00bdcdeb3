"""Identity-ball propagation in lockstep with color refinement.

Each node carries a set of node identities (local indices) stored as a
Python int used as a bitset; one propagation step unions the node's own
identity bit with all neighbors' previous sets, which yields exactly the
closed h-hop ball around the node after h steps.
"""

from dataclasses import dataclass
from typing import Optional

from .graph import Corpus, Graph
from .wl import IsoDecision, Refinement, wl_refine


class GraphMismatchError(ValueError):
    pass


@dataclass
class IdentityBalls:
    """Per-node identity sets of one graph at one iteration."""

    graph_id: str
    h: int
    bits: list  # list[int], bit v set <=> identity v in the set

    def sizes(self) -> list:
        return [b.bit_count() for b in self.bits]


def initial_balls(g: Graph) -> IdentityBalls:
    return IdentityBalls(graph_id=g.id, h=0,
                         bits=[1 << v for v in range(g.n)])


def identity_step(prev: IdentityBalls, g: Graph) -> IdentityBalls:
    """One propagation step: own identity union all neighbors' sets."""
    if prev.graph_id != g.id or len(prev.bits) != g.n:
        raise GraphMismatchError(
            f"identity sets of {prev.graph_id} applied to graph {g.id}")
    bits = []
    old = prev.bits
    for v in range(g.n):
        b = 1 << v
        for u in g.adjacency[v]:
            b |= old[u]
        bits.append(b)
    return IdentityBalls(graph_id=g.id, h=prev.h + 1, bits=bits)


def ball_sizes(balls: IdentityBalls) -> list:
    return balls.sizes()


def propagate_ball_sizes(g: Graph, iterations: int) -> list:
    """Ball-size lists for h=0..iterations; stops propagating once saturated."""
    balls = initial_balls(g)
    out = [balls.sizes()]
    full = (1 << g.n) - 1
    for _ in range(iterations):
        if all(b == full for b in balls.bits) or g.n == 0:
            out.append(out[-1])
            continue
        balls = identity_step(balls, g)
        out.append(balls.sizes())
    return out


@dataclass
class StwinEmbedding:
    """Per-iteration sparse feature map label id -> summed ball size."""

    graph_id: str
    per_iteration: list  # list[dict[int, int]]
    block_widths: list  # list[int], shared across the corpus

    def dense(self) -> list:
        out = []
        for sparse, width in zip(self.per_iteration, self.block_widths):
            block = [0] * width
            for label, value in sparse.items():
                block[label] = value
            out.extend(block)
        return out


@dataclass
class MatrixEmbedding:
    """Per-iteration sparse map (label id, readout bucket) -> node count.

    ``bucket_values[h]`` lists the distinct readout values at iteration h in
    ascending order; bucket j holds value ``bucket_values[h][j]``. The bucket
    dictionary is shared across the corpus.
    """

    graph_id: str
    per_iteration: list  # list[dict[tuple[int, int], int]]
    block_shapes: list  # list[(label count, bucket count)]
    bucket_values: list  # list[list[int]]

    def dense(self) -> list:
        out = []
        for cells, (labels, buckets) in zip(self.per_iteration,
                                            self.block_shapes):
            block = [0] * (labels * buckets)
            for (i, j), count in cells.items():
                block[i * buckets + j] = count
            out.extend(block)
        return out

    def collapse(self, h: int) -> dict:
        """Sum ball sizes per label: recovers the vector-form feature."""
        out = {}
        for (i, j), count in self.per_iteration[h].items():
            out[i] = out.get(i, 0) + count * self.bucket_values[h][j]
        return out


def _corpus_ball_sizes(corpus: Corpus, iterations: int, threads=None):
    if threads and threads > 1 and len(corpus.graphs) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(
                lambda g: propagate_ball_sizes(g, iterations),
                corpus.graphs))
    return [propagate_ball_sizes(g, iterations) for g in corpus.graphs]


def stwin_embed(corpus: Corpus, iterations: int, refinement=None,
                threads=None) -> list:
    """Collapsed-vector embeddings for every graph in the corpus.

    The iteration-h entry for label i sums the identity-ball sizes of the
    nodes carrying label i; iteration 0 reproduces the label histogram.
    """
    ref = refinement if refinement is not None \
        else wl_refine(corpus, iterations)
    sizes = _corpus_ball_sizes(corpus, iterations, threads)
    widths = [ref.width(h) for h in range(iterations + 1)]
    out = []
    for gi, g in enumerate(corpus.graphs):
        per_iteration = []
        for h in range(iterations + 1):
            labels = ref.colorings[h][gi]
            sparse = {}
            for v in range(g.n):
                lab = labels[v]
                sparse[lab] = sparse.get(lab, 0) + sizes[gi][h][v]
            per_iteration.append(sparse)
        out.append(StwinEmbedding(graph_id=g.id, per_iteration=per_iteration,
                                  block_widths=widths))
    return out


def twin_matrix_embed(corpus: Corpus, iterations: int,
                      refinement=None) -> list:
    """Matrix-form embeddings: node counts per (label, ball-size bucket)."""
    ref = refinement if refinement is not None \
        else wl_refine(corpus, iterations)
    sizes = _corpus_ball_sizes(corpus, iterations)
    bucket_values = []
    for h in range(iterations + 1):
        distinct = sorted({s for gi in range(len(corpus.graphs))
                           for s in sizes[gi][h]})
        bucket_values.append(distinct)
    shapes = [(ref.width(h), len(bucket_values[h]))
              for h in range(iterations + 1)]
    out = []
    for gi, g in enumerate(corpus.graphs):
        per_iteration = []
        for h in range(iterations + 1):
            bucket_of = {val: j for j, val in enumerate(bucket_values[h])}
            labels = ref.colorings[h][gi]
            cells = {}
            for v in range(g.n):
                key = (labels[v], bucket_of[sizes[gi][h][v]])
                cells[key] = cells.get(key, 0) + 1
            per_iteration.append(cells)
        out.append(MatrixEmbedding(graph_id=g.id, per_iteration=per_iteration,
                                   block_shapes=shapes,
                                   bucket_values=bucket_values))
    return out


def twin_iso_test(a: Graph, b: Graph, iterations: int) -> IsoDecision:
    """Compare multisets of (label, ball size) tuples per iteration.

    Strictly at least as discriminating as the plain histogram test: equal
    tuple multisets imply equal label histograms.
    """
    ga = Graph(id="a", n=a.n, adjacency=a.adjacency,
               node_labels=a.node_labels, graph_label=a.graph_label)
    gb = Graph(id="b", n=b.n, adjacency=b.adjacency,
               node_labels=b.node_labels, graph_label=b.graph_label)
    corpus = Corpus.from_graphs((ga, gb))
    ref = wl_refine(corpus, iterations)
    sizes = _corpus_ball_sizes(corpus, iterations)
    for h in range(iterations + 1):
        tuples = []
        for gi in range(2):
            labels = ref.colorings[h][gi]
            tuples.append(sorted(zip(labels, sizes[gi][h])))
        if tuples[0] != tuples[1]:
            return IsoDecision.non_isomorphic(
                h, f"(label, ball size) multisets differ at iteration {h}: "
                   f"{_fmt_tuples(tuples[0])} vs {_fmt_tuples(tuples[1])}")
    return IsoDecision.possibly_isomorphic(iterations)


def _fmt_tuples(pairs) -> str:
    from collections import Counter
    counts = Counter(pairs)
    return "{" + ", ".join(f"({i},{s})x{c}"
                           for (i, s), c in sorted(counts.items())) + "}"
