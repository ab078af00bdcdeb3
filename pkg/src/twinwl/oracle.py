"""Exact isomorphism testing by backtracking search (ground-truth oracle).

Exponential in the worst case; guarded to small graphs. Kept deliberately
independent of the refinement engines so it can certify their verdicts.
"""

from .graph import Graph

MAX_NODES = 12


class TooLargeError(ValueError):
    pass


def brute_force_isomorphic(a: Graph, b: Graph) -> bool:
    """True iff a label- and edge-preserving bijection a -> b exists."""
    if a.n > MAX_NODES or b.n > MAX_NODES:
        raise TooLargeError(
            f"oracle is limited to {MAX_NODES} nodes, got {a.n} and {b.n}")
    if a.n != b.n or a.edge_count != b.edge_count:
        return False
    if a.degree_sequence() != b.degree_sequence():
        return False
    if sorted(a.node_labels) != sorted(b.node_labels):
        return False

    adj_b = [set(nbrs) for nbrs in b.adjacency]
    # candidates pruned by (label, degree); ordered most-constrained first
    candidates = []
    for v in range(a.n):
        cand = [w for w in range(b.n)
                if b.node_labels[w] == a.node_labels[v]
                and b.degree(w) == a.degree(v)]
        if not cand:
            return False
        candidates.append(cand)
    order = sorted(range(a.n), key=lambda v: len(candidates[v]))

    mapping = [-1] * a.n
    used = [False] * b.n

    def extend(pos: int) -> bool:
        if pos == a.n:
            return True
        v = order[pos]
        for w in candidates[v]:
            if used[w]:
                continue
            ok = True
            for u in a.adjacency[v]:
                m = mapping[u]
                if m >= 0 and m not in adj_b[w]:
                    ok = False
                    break
            if ok:
                # mapped non-neighbors must stay non-neighbors
                for u in range(a.n):
                    m = mapping[u]
                    if m >= 0 and u not in a.adjacency[v] and m in adj_b[w]:
                        ok = False
                        break
            if not ok:
                continue
            mapping[v] = w
            used[w] = True
            if extend(pos + 1):
                return True
            mapping[v] = -1
            used[w] = False
        return False

    return extend(0)
