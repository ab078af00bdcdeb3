"""Wall-clock comparison of embedding methods with a significance test."""

import time

from scipy import stats

from .graph import Corpus
from .twin import stwin_embed
from .wl import wl_feature_vector, wl_refine

VARIANCE_FLOOR = 1e-12


class UnknownMethodError(ValueError):
    pass


def _embed_wl(corpus, iterations):
    ref = wl_refine(corpus, iterations)
    return [wl_feature_vector(ref, gi) for gi in range(len(corpus.graphs))]


def _embed_stwin(corpus, iterations):
    return [e.dense() for e in stwin_embed(corpus, iterations)]


_METHODS = {"wl": _embed_wl, "stwin": _embed_stwin}


def welch_t_test(sample_a, sample_b):
    """Unequal-variance two-sample test; returns (t, p).

    Sample variances are floored so identical or constant samples yield a
    finite statistic (t = 0, p = 1 for equal means).
    """
    import math
    na, nb = len(sample_a), len(sample_b)
    ma = sum(sample_a) / na
    mb = sum(sample_b) / nb
    va = max(sum((x - ma) ** 2 for x in sample_a) / (na - 1), VARIANCE_FLOOR)
    vb = max(sum((x - mb) ** 2 for x in sample_b) / (nb - 1), VARIANCE_FLOOR)
    se2 = va / na + vb / nb
    t = (ma - mb) / math.sqrt(se2)
    df = se2 ** 2 / ((va / na) ** 2 / (na - 1) + (vb / nb) ** 2 / (nb - 1))
    p = 2.0 * float(stats.t.sf(abs(t), df))
    return t, min(p, 1.0)


def bench_compare(corpus: Corpus, methods, repeats: int,
                  iterations: int = 3) -> dict:
    """Time each method ``repeats`` times over the same corpus.

    The report carries per-method mean/std seconds; when exactly two
    methods are requested it also carries the Welch p-value between their
    timing samples.
    """
    if repeats < 2:
        raise ValueError("need at least 2 repeats")
    for m in methods:
        if m not in _METHODS:
            raise UnknownMethodError(f"unknown method {m!r}")
    samples = {m: [] for m in methods}
    for _ in range(repeats):
        for m in methods:
            start = time.perf_counter()
            _METHODS[m](corpus, iterations)
            samples[m].append(time.perf_counter() - start)
    report = {"repeats": repeats, "iterations": iterations, "methods": {}}
    for m in methods:
        xs = samples[m]
        mean = sum(xs) / len(xs)
        var = sum((x - mean) ** 2 for x in xs) / (len(xs) - 1)
        report["methods"][m] = {"mean_seconds": mean,
                                "std_seconds": var ** 0.5,
                                "samples": xs}
    if len(methods) == 2:
        t, p = welch_t_test(samples[methods[0]], samples[methods[1]])
        report["welch_t"] = t
        report["welch_p"] = p
    return report
