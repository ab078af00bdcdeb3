"""Color refinement (1-WL) over a corpus with a shared label dictionary.

Each refinement iteration relabels every node by the signature
(previous label; ascending multiset of neighbor labels). New label ids are
assigned in lexicographic order of the distinct signatures present in the
iteration, so the result is independent of graph processing order.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .graph import Corpus, Graph


class IterationMismatchError(ValueError):
    pass


class LabelDictionary:
    """Corpus-shared injective signature -> compact label id map, per iteration.

    Iteration 0 is the identity on the initial label alphabet. For h >= 1 a
    signature is ``(prev_label, tuple(sorted neighbor labels))``.
    """

    def __init__(self, alphabet_size: int):
        self._sizes = [alphabet_size]
        self._maps = [None]

    @property
    def iterations(self) -> int:
        """Number of refined iterations recorded (excluding iteration 0)."""
        return len(self._sizes) - 1

    def size(self, h: int) -> int:
        """Alphabet size at iteration h; clamps past the last recorded one."""
        return self._sizes[min(h, len(self._sizes) - 1)]

    def signature_map(self, h: int) -> Optional[dict]:
        return self._maps[h] if h < len(self._maps) else self._maps[-1]

    def extend(self, signatures) -> dict:
        """Record one iteration: assign ids 0.. in sorted signature order."""
        table = {sig: i for i, sig in enumerate(sorted(set(signatures)))}
        self._maps.append(table)
        self._sizes.append(len(table))
        return table

    def repeat_last(self):
        """Record a stabilized iteration that reuses the previous alphabet."""
        self._maps.append(self._maps[-1])
        self._sizes.append(self._sizes[-1])


@dataclass(frozen=True)
class IsoDecision:
    """Outcome of a (Twin-)WL isomorphism test."""

    isomorphic_possible: bool
    iteration: int
    witness: Optional[str] = None

    @staticmethod
    def non_isomorphic(h: int, witness: str) -> "IsoDecision":
        return IsoDecision(False, h, witness)

    @staticmethod
    def possibly_isomorphic(iterations_run: int) -> "IsoDecision":
        return IsoDecision(True, iterations_run, None)

    @property
    def decision(self) -> str:
        return "possibly-isomorphic" if self.isomorphic_possible \
            else "non-isomorphic"


@dataclass
class Refinement:
    """Colorings, shared dictionary and per-graph histograms for h=0..H.

    ``colorings[h][gi][v]`` is the label of node v of graph gi at iteration
    h. Once refinement stabilizes, later iterations reuse the stable
    coloring (``stable_at`` records the first such iteration).
    """

    corpus: Corpus
    dictionary: LabelDictionary
    colorings: list
    histograms: list
    stable_at: Optional[int] = None

    @property
    def iterations(self) -> int:
        return len(self.colorings) - 1

    def width(self, h: int) -> int:
        return self.dictionary.size(h)


def node_signatures(g: Graph, labels):
    """Per-node (prev label; sorted neighbor labels) signatures."""
    return [(labels[v], tuple(sorted(labels[u] for u in g.adjacency[v])))
            for v in range(g.n)]


def wl_step(corpus: Corpus, prev, dictionary: LabelDictionary):
    """One refinement iteration over the whole corpus.

    Two-phase: signatures are computed per node (pure, parallelizable),
    then the dictionary is extended once over the sorted distinct
    signatures and every node is relabeled.
    """
    if len(prev) != len(corpus.graphs):
        raise IterationMismatchError(
            "previous colorings do not cover the corpus")
    per_graph_sigs = [node_signatures(g, labels)
                      for g, labels in zip(corpus.graphs, prev)]
    table = dictionary.extend(
        sig for sigs in per_graph_sigs for sig in sigs)
    return [[table[sig] for sig in sigs] for sigs in per_graph_sigs]


def label_histogram(labels) -> dict:
    return dict(Counter(labels))


def wl_refine(corpus: Corpus, iterations: int) -> Refinement:
    """Run refinement for h=0..iterations with early stabilization.

    Stops refining once the total number of distinct labels across the
    corpus is unchanged for one iteration (the partition of the corpus
    node set is then a fixed point); remaining iterations repeat the
    stable coloring.
    """
    if iterations < 0:
        raise ValueError("iteration count must be >= 0")
    dictionary = LabelDictionary(corpus.label_alphabet_size)
    coloring0 = [list(g.node_labels) for g in corpus.graphs]
    colorings = [coloring0]
    stable_at = None
    prev_distinct = len({lab for labels in coloring0 for lab in labels})
    for h in range(1, iterations + 1):
        if stable_at is not None:
            colorings.append(colorings[-1])
            dictionary.repeat_last()
            continue
        new = wl_step(corpus, colorings[-1], dictionary)
        colorings.append(new)
        # the corpus-wide partition refines monotonically, so an unchanged
        # distinct-label count means a fixed point
        if dictionary.size(h) == prev_distinct:
            stable_at = h
        prev_distinct = dictionary.size(h)
    histograms = [[label_histogram(labels) for labels in coloring]
                  for coloring in colorings]
    return Refinement(corpus=corpus, dictionary=dictionary,
                      colorings=colorings, histograms=histograms,
                      stable_at=stable_at)


def wl_feature_vector(ref: Refinement, graph_index: int) -> list:
    """Dense concatenated per-iteration label histogram for one graph."""
    out = []
    for h in range(ref.iterations + 1):
        hist = ref.histograms[h][graph_index]
        block = [0] * ref.width(h)
        for label, count in hist.items():
            block[label] = count
        out.extend(block)
    return out


def wl_iso_test(a: Graph, b: Graph, iterations: int) -> IsoDecision:
    """Histogram comparison test; sound but incomplete.

    Returns NonIsomorphic at the first iteration where the label
    histograms of the two graphs differ.
    """
    corpus = Corpus.from_graphs((
        _with_id(a, "a"), _with_id(b, "b")))
    ref = wl_refine(corpus, iterations)
    for h in range(ref.iterations + 1):
        ha, hb = ref.histograms[h]
        if ha != hb:
            return IsoDecision.non_isomorphic(
                h, f"label histograms differ at iteration {h}: "
                   f"{_fmt_hist(ha)} vs {_fmt_hist(hb)}")
    return IsoDecision.possibly_isomorphic(iterations)


def _with_id(g: Graph, new_id: str) -> Graph:
    return Graph(id=new_id, n=g.n, adjacency=g.adjacency,
                 node_labels=g.node_labels, graph_label=g.graph_label)


def _fmt_hist(h: dict) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(h.items())) + "}"
