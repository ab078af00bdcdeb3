"""Graph isomorphism testing and embeddings via lockstep label refinement
and node-identity propagation."""

from .graph import Corpus, Graph, build_graph, permute_graph, validate
from .wl import IsoDecision, wl_iso_test, wl_refine
from .twin import stwin_embed, twin_iso_test, twin_matrix_embed

__all__ = [
    "Corpus", "Graph", "build_graph", "permute_graph", "validate",
    "IsoDecision", "wl_iso_test", "wl_refine",
    "stwin_embed", "twin_iso_test", "twin_matrix_embed",
]

__version__ = "0.1.0"
