"""Synthetic graph families and hard instance pairs.

All constructions are deterministic; the random family uses an explicit
splitmix64 stream (documented below) so corpora are reproducible across
implementations.
"""

from dataclasses import dataclass

from .graph import Graph, build_graph


class BadParamsError(ValueError):
    pass


def cycle(n: int, graph_id=None) -> Graph:
    if n < 3:
        raise BadParamsError(f"cycle needs n >= 3, got {n}")
    edges = [(v, (v + 1) % n) for v in range(n)]
    return build_graph(n, edges, graph_id=graph_id or f"cycle{n}")


def disjoint_cycles(counts, graph_id=None) -> Graph:
    """Disjoint union of cycles with the given lengths."""
    counts = list(counts)
    if not counts or any(c < 3 for c in counts):
        raise BadParamsError(f"cycle lengths must all be >= 3, got {counts}")
    edges = []
    base = 0
    for c in counts:
        edges.extend((base + v, base + (v + 1) % c) for v in range(c))
        base += c
    name = graph_id or "cycles" + "+".join(str(c) for c in counts)
    return build_graph(base, edges, graph_id=name)


def circulant(n: int, skips, graph_id=None) -> Graph:
    """Vertex i adjacent to i +- s (mod n) for every skip s."""
    skips = sorted(set(skips))
    if n < 3 or not skips:
        raise BadParamsError("circulant needs n >= 3 and at least one skip")
    for s in skips:
        if not (1 <= s <= (n - 1) // 2):
            raise BadParamsError(
                f"skip {s} outside [1, {(n - 1) // 2}] for n={n}")
    edges = [(v, (v + s) % n) for v in range(n) for s in skips]
    name = graph_id or f"circ{n}_" + "-".join(str(s) for s in skips)
    return build_graph(n, edges, graph_id=name)


def rook4x4(graph_id="rook4x4") -> Graph:
    """4x4 rook's graph: cells adjacent iff same row or same column."""
    edges = []
    for a in range(16):
        for b in range(a + 1, 16):
            if a // 4 == b // 4 or a % 4 == b % 4:
                edges.append((a, b))
    return build_graph(16, edges, graph_id=graph_id)


def shrikhande(graph_id="shrikhande") -> Graph:
    """Cayley graph on Z4 x Z4 with connection set +-{(1,0),(0,1),(1,1)}."""
    deltas = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    edges = []
    for x in range(4):
        for y in range(4):
            for dx, dy in deltas:
                u = 4 * x + y
                v = 4 * ((x + dx) % 4) + (y + dy) % 4
                edges.append((u, v))
    return build_graph(16, edges, graph_id=graph_id)


def _splitmix64(state: int):
    """One splitmix64 step; returns (new state, 64-bit output)."""
    state = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return state, z ^ (z >> 31)


def er_random(n: int, p: float, seed: int, graph_id=None) -> Graph:
    """Erdos-Renyi G(n, p) from a splitmix64 stream.

    Vertex pairs (u, v), u < v, are visited in lexicographic order; for
    each pair one splitmix64 output z is drawn from the stream seeded with
    ``seed`` and the edge is present iff z / 2**64 < p.
    """
    if n < 0 or not (0.0 <= p <= 1.0):
        raise BadParamsError(f"bad Erdos-Renyi parameters n={n}, p={p}")
    state = seed & 0xFFFFFFFFFFFFFFFF
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            state, z = _splitmix64(state)
            if z / 2.0 ** 64 < p:
                edges.append((u, v))
    return build_graph(n, edges, graph_id=graph_id or f"er{n}_{seed}")


def hard_pair_csl(n: int, s1: int, s2: int):
    """Two skip-link circulants of the same order and degree."""
    if s1 == s2:
        raise BadParamsError("the two skips must differ")
    return (circulant(n, [1, s1]), circulant(n, [1, s2]))


FAMILIES = ("cycle", "disjoint_cycles", "circulant", "rook4x4",
            "shrikhande", "er_random", "hard_pair_csl")


def generate(family: str, **params):
    """Dispatch by family tag; pair families return a (Graph, Graph) tuple."""
    if family == "cycle":
        return cycle(params["n"])
    if family == "disjoint_cycles":
        return disjoint_cycles(params["counts"])
    if family == "circulant":
        return circulant(params["n"], params["skips"])
    if family == "rook4x4":
        return rook4x4()
    if family == "shrikhande":
        return shrikhande()
    if family == "er_random":
        return er_random(params["n"], params["p"], params["seed"])
    if family == "hard_pair_csl":
        return hard_pair_csl(params["n"], params["s1"], params["s2"])
    raise BadParamsError(f"unknown family {family!r}")


@dataclass(frozen=True)
class GraphPair:
    a: Graph
    b: Graph
    isomorphic: bool
    family: str


def _bfs_ball_profile(g: Graph, max_h: int):
    """Sorted closed-ball-size multisets per hop count, by plain BFS.

    Differing profiles certify non-isomorphism independently of the
    propagation engine.
    """
    profile = []
    for h in range(max_h + 1):
        sizes = []
        for src in range(g.n):
            seen = {src}
            frontier = [src]
            for _ in range(h):
                nxt = [u for v in frontier for u in g.adjacency[v]
                       if u not in seen]
                seen.update(nxt)
                frontier = nxt
            sizes.append(len(seen))
        profile.append(sorted(sizes))
    return profile


def hard_pair_suite(count: int, max_h: int = 3) -> list:
    """Non-isomorphic, 1-WL-indistinguishable pairs of regular graphs.

    Members come from two families: one cycle versus a disjoint union of
    shorter cycles on the same node count (2-regular), and skip-link
    circulant pairs of the same order and degree (4-regular). Both graphs
    of a pair are regular with equal order and degree, so refinement stays
    monochromatic and plain histograms can never separate them; the pairs
    are kept only if their closed-ball-size profiles up to ``max_h`` hops
    differ, which certifies non-isomorphism by construction.
    """
    def partitions(total, max_part, min_part=3):
        if total == 0:
            yield ()
            return
        for part in range(min(total, max_part), min_part - 1, -1):
            if total - part in (1, 2):
                continue
            for rest in partitions(total - part, part, min_part):
                yield (part,) + rest

    def cycle_pairs():
        # single long cycle vs shorter disjoint cycles, plus distinct
        # partitions of the same total against each other
        for n in range(7, 60):
            parts_list = [p for p in partitions(n, 6) if len(p) >= 2]
            candidates = [tuple([n])] + parts_list
            for i in range(len(candidates)):
                for j in range(i + 1, len(candidates)):
                    pa, pb = candidates[i], candidates[j]
                    a = cycle(n) if len(pa) == 1 else disjoint_cycles(pa)
                    b = disjoint_cycles(pb)
                    if _bfs_ball_profile(a, max_h) != \
                            _bfs_ball_profile(b, max_h):
                        yield GraphPair(a, b, False, "cycles")

    def circulant_pairs():
        # skips s and s' give isomorphic circulants of prime order when
        # s' = +-s or +-1/s mod n; such pairs are excluded
        for n in (11, 13, 17, 19, 23, 29, 31, 37):
            for s1 in range(2, (n - 1) // 2 + 1):
                iso_class = {s1, n - s1, pow(s1, -1, n),
                             n - pow(s1, -1, n)}
                for s2 in range(s1 + 1, (n - 1) // 2 + 1):
                    if s2 in iso_class:
                        continue
                    a, b = hard_pair_csl(n, s1, s2)
                    if _bfs_ball_profile(a, max_h) != \
                            _bfs_ball_profile(b, max_h):
                        yield GraphPair(a, b, False, "circulant")

    pairs = []
    sources = [cycle_pairs(), circulant_pairs()]
    while len(pairs) < count and sources:
        for src in list(sources):
            item = next(src, None)
            if item is None:
                sources.remove(src)
            else:
                pairs.append(item)
            if len(pairs) >= count:
                break
    return pairs[:count]
