"""Forward-only neural graph representation with two branches per layer.

Layer k concatenates (a) a one-hot of each node's refined label at
iteration k with (b) a message-passing readout over the k-hop rooted
subgraph centered at the node, sum-pooled per layer and concatenated
across layers. Weights are seeded and never trained here.
"""

from dataclasses import dataclass, field

import numpy as np

from .graph import Corpus, Graph
from .wl import LabelDictionary, Refinement, wl_refine


class NodeOutOfRangeError(ValueError):
    pass


class ShapeMismatchError(ValueError):
    pass


class DepthMismatchError(ValueError):
    pass


class AlphabetMismatchError(ValueError):
    pass


class EmptySubgraphError(ValueError):
    pass


@dataclass(frozen=True)
class RootedSubgraph:
    """Induced subgraph on the closed k-ball around a center node.

    ``nodes`` lists parent indices ascending; local index i corresponds to
    ``nodes[i]``.
    """

    center: int
    nodes: tuple
    adjacency: tuple  # induced, in local indices
    hops: int

    @property
    def n(self):
        return len(self.nodes)

    @property
    def local_center(self):
        return self.nodes.index(self.center)


def extract_rooted_subgraph(g: Graph, v: int, k: int) -> RootedSubgraph:
    """Closed k-ball around v with induced adjacency, BFS from v."""
    if not (0 <= v < g.n):
        raise NodeOutOfRangeError(f"node {v} outside [0,{g.n})")
    seen = {v}
    frontier = [v]
    for _ in range(k):
        nxt = [u for w in frontier for u in g.adjacency[w] if u not in seen]
        seen.update(nxt)
        frontier = nxt
    nodes = tuple(sorted(seen))
    local = {p: i for i, p in enumerate(nodes)}
    adjacency = tuple(
        tuple(sorted(local[u] for u in g.adjacency[p] if u in seen))
        for p in nodes)
    return RootedSubgraph(center=v, nodes=nodes, adjacency=adjacency, hops=k)


def one_hot_labels(labels, alphabet_size: int) -> np.ndarray:
    """One-hot rows over alphabet_size known ids plus one 'unseen' slot."""
    width = alphabet_size + 1
    out = np.zeros((len(labels), width))
    for i, lab in enumerate(labels):
        out[i, lab if 0 <= lab < alphabet_size else alphabet_size] = 1.0
    return out


def subtree_encode(coloring, dictionary: LabelDictionary, h: int) -> np.ndarray:
    """One-hot node encodings over the corpus alphabet at iteration h."""
    size = dictionary.size(h)
    for lab in coloring:
        if lab >= size:
            raise AlphabetMismatchError(
                f"label {lab} outside alphabet of size {size} at iteration {h}")
    return one_hot_labels(coloring, size)


@dataclass
class GinMlp:
    """Two linear maps with a rectifier between (the per-round update map)."""

    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.w1.shape[0]:
            raise ShapeMismatchError(
                f"features of width {x.shape[-1]} into map expecting "
                f"{self.w1.shape[0]}")
        return np.maximum(x @ self.w1 + self.b1, 0.0) @ self.w2 + self.b2


def gin_forward(sub: RootedSubgraph, features: np.ndarray, round_maps) -> np.ndarray:
    """Message passing inside one rooted subgraph.

    Per round every node is updated to map(own + summed neighbor
    features); ``round_maps`` is one callable per round.
    """
    x = np.asarray(features, dtype=float)
    if x.shape[0] != sub.n:
        raise ShapeMismatchError(
            f"{x.shape[0]} feature rows for {sub.n} subgraph nodes")
    for fn in round_maps:
        agg = x.copy()
        for p in range(sub.n):
            for q in sub.adjacency[p]:
                agg[p] += x[q]
        x = fn(agg)
    return x


def subgraph_readout(node_features: np.ndarray) -> np.ndarray:
    if len(node_features) == 0:
        raise EmptySubgraphError("cannot read out an empty subgraph")
    return np.asarray(node_features, dtype=float).sum(axis=0)


@dataclass(frozen=True)
class NtwinConfig:
    layers: int = 2
    hidden: int = 64
    rounds_per_layer: int = 0  # 0 means k rounds at layer k
    seed: int = 0
    epsilon: float = 0.0  # center node weighted as-is in aggregation

    def rounds(self, k: int) -> int:
        return self.rounds_per_layer if self.rounds_per_layer >= 1 else k

    def __post_init__(self):
        if self.layers < 1 or self.hidden < 1:
            raise ValueError("layers and hidden width must be >= 1")
        if self.epsilon != 0.0:
            raise ValueError("the center-node weight offset is fixed at 0")


def _init_mlp(rng, d_in, d_out) -> GinMlp:
    def lin(fan_in, fan_out):
        lim = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-lim, lim, size=(fan_in, fan_out))
    return GinMlp(w1=lin(d_in, d_out),
                  b1=rng.uniform(-1, 1, size=d_out) / np.sqrt(d_in),
                  w2=lin(d_out, d_out),
                  b2=rng.uniform(-1, 1, size=d_out) / np.sqrt(d_out))


def init_params(cfg: NtwinConfig, input_width: int):
    """Per-layer lists of per-round update maps, seeded deterministically."""
    rng = np.random.default_rng(cfg.seed)
    params = []
    for k in range(1, cfg.layers + 1):
        maps = []
        for r in range(cfg.rounds(k)):
            d_in = input_width if r == 0 else cfg.hidden
            maps.append(_init_mlp(rng, d_in, cfg.hidden))
        params.append(maps)
    return params


def ntwin_embed(g: Graph, graph_index: int, refinement: Refinement,
                cfg: NtwinConfig, params) -> np.ndarray:
    """Graph representation: per-layer [one-hot branch, subgraph branch]
    node vectors, sum-pooled and concatenated across layers."""
    if refinement.iterations < cfg.layers:
        raise DepthMismatchError(
            f"refinement depth {refinement.iterations} < {cfg.layers} layers")
    if len(params) != cfg.layers:
        raise ShapeMismatchError(
            f"{len(params)} parameter groups for {cfg.layers} layers")
    dictionary = refinement.dictionary
    alphabet0 = dictionary.size(0)
    blocks = []
    for k in range(1, cfg.layers + 1):
        onehots = subtree_encode(refinement.colorings[k][graph_index],
                                 dictionary, k)
        pooled = np.zeros(onehots.shape[1] + cfg.hidden)
        for v in range(g.n):
            sub = extract_rooted_subgraph(g, v, k)
            feats = one_hot_labels(
                [g.node_labels[p] for p in sub.nodes], alphabet0)
            out = gin_forward(sub, feats, params[k - 1])
            pooled += np.concatenate([onehots[v], subgraph_readout(out)])
        blocks.append(pooled)
    return np.concatenate(blocks) if blocks else np.zeros(0)


def ntwin_embed_corpus(corpus: Corpus, cfg: NtwinConfig):
    """Embed every graph of a corpus under one shared refinement and one
    seeded parameter set; returns (list of vectors, refinement, params)."""
    ref = wl_refine(corpus, cfg.layers)
    params = init_params(cfg, corpus.label_alphabet_size + 1)
    vectors = [ntwin_embed(g, gi, ref, cfg, params)
               for gi, g in enumerate(corpus.graphs)]
    return vectors, ref, params


@dataclass
class NtwinEmbedding:
    """Adapter giving ntwin vectors the serialization surface of the
    other embeddings."""

    graph_id: str
    vector: np.ndarray

    def dense(self):
        return [float(x) for x in self.vector]
