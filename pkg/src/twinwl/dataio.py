"""Dataset parsing and feature serialization.

Supports the multi-file TU benchmark convention (comma-separated edge
file, 1-based node and graph ids), a single-graph edge-list text format,
and line-delimited JSON feature records.
"""

import json
import os

from .graph import Corpus, Graph, build_graph


class DataError(ValueError):
    pass


class MissingFileError(DataError):
    pass


class MalformedLineError(DataError):
    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class CrossGraphEdgeError(DataError):
    pass


class NonContiguousIdsError(DataError):
    pass


class SchemaError(DataError):
    pass


def _read_lines(path):
    if not os.path.isfile(path):
        raise MissingFileError(f"required file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def _int_fields(path, required=True):
    """Parse one integer per non-empty line, tolerating stray whitespace."""
    out = []
    for i, line in enumerate(_read_lines(path), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            out.append(int(line))
        except ValueError:
            raise MalformedLineError(path, i, f"expected an integer, got {line!r}")
    return out


def _densify(values):
    """Map arbitrary integer values to contiguous 0..k-1, keeping order.

    Returns (dense values, original value per dense id) so the raw values
    stay available for diagnostics.
    """
    distinct = sorted(set(values))
    to_dense = {v: i for i, v in enumerate(distinct)}
    return [to_dense[v] for v in values], distinct


def parse_tu_dataset(directory, name) -> Corpus:
    """Load a TU-convention dataset directory as a Corpus.

    Node and graph ids are 1-based and must be contiguous; node indices
    are re-based per graph. Node and graph labels are densified to
    contiguous 0-based ids.
    """
    indicator = _int_fields(os.path.join(directory,
                                         f"{name}_graph_indicator.txt"))
    n_total = len(indicator)
    g_total = max(indicator, default=0)
    if sorted(set(indicator)) != list(range(1, g_total + 1)):
        raise NonContiguousIdsError(
            f"graph ids in {name}_graph_indicator.txt are not 1..{g_total}")

    graph_labels_raw = _int_fields(os.path.join(directory,
                                                f"{name}_graph_labels.txt"))
    if len(graph_labels_raw) != g_total:
        raise DataError(
            f"{name}_graph_labels.txt has {len(graph_labels_raw)} labels "
            f"for {g_total} graphs")
    graph_labels, _ = _densify(graph_labels_raw)

    node_labels_path = os.path.join(directory, f"{name}_node_labels.txt")
    if os.path.isfile(node_labels_path):
        node_labels_raw = _int_fields(node_labels_path)
        if len(node_labels_raw) != n_total:
            raise DataError(
                f"{name}_node_labels.txt has {len(node_labels_raw)} labels "
                f"for {n_total} nodes")
        node_labels, _ = _densify(node_labels_raw)
    else:
        node_labels = [0] * n_total

    # per-graph local index for each global node id
    local_index = [0] * (n_total + 1)
    sizes = [0] * (g_total + 1)
    for node_id, gid in enumerate(indicator, start=1):
        local_index[node_id] = sizes[gid]
        sizes[gid] += 1

    edge_path = os.path.join(directory, f"{name}_A.txt")
    per_graph_edges = [[] for _ in range(g_total + 1)]
    for i, line in enumerate(_read_lines(edge_path), start=1):
        line = line.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise MalformedLineError(edge_path, i,
                                     f"expected 'u, v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(edge_path, i,
                                     f"non-integer endpoint in {line!r}")
        if not (1 <= u <= n_total and 1 <= v <= n_total):
            raise MalformedLineError(edge_path, i,
                                     f"node id outside 1..{n_total}")
        if indicator[u - 1] != indicator[v - 1]:
            raise CrossGraphEdgeError(
                f"{edge_path}:{i}: edge ({u},{v}) spans graphs "
                f"{indicator[u - 1]} and {indicator[v - 1]}")
        gid = indicator[u - 1]
        per_graph_edges[gid].append((local_index[u], local_index[v]))

    per_graph_labels = [[] for _ in range(g_total + 1)]
    for node_id, gid in enumerate(indicator, start=1):
        per_graph_labels[gid].append(node_labels[node_id - 1])

    graphs = []
    for gid in range(1, g_total + 1):
        graphs.append(build_graph(
            sizes[gid], per_graph_edges[gid], per_graph_labels[gid],
            graph_label=graph_labels[gid - 1],
            graph_id=f"{name}_{gid}"))
    return Corpus.from_graphs(graphs)


class MalformedHeaderError(DataError):
    pass


class MalformedEdgeError(DataError):
    pass


class LabelCountMismatchError(DataError):
    pass


def parse_edgelist(path) -> Graph:
    """Single-graph text format: 'n m' header, m edge lines, optional
    trailing 'labels l0 l1 ...' line (0-based node indices throughout)."""
    lines = [ln.strip() for ln in _read_lines(path)]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MalformedHeaderError(f"{path}: empty file")
    header = lines[0].split()
    if len(header) != 2:
        raise MalformedHeaderError(f"{path}: header must be 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise MalformedHeaderError(f"{path}: non-integer header {lines[0]!r}")
    if len(lines) < 1 + m:
        raise MalformedEdgeError(f"{path}: expected {m} edge lines")
    edges = []
    for i in range(1, 1 + m):
        parts = lines[i].split()
        if len(parts) != 2:
            raise MalformedEdgeError(f"{path}: bad edge line {lines[i]!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedEdgeError(f"{path}: bad edge line {lines[i]!r}")
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedEdgeError(
                f"{path}: edge ({u},{v}) outside [0,{n})")
        edges.append((u, v))
    labels = ()
    rest = lines[1 + m:]
    if rest:
        parts = rest[0].split()
        if parts[0] != "labels" or len(rest) > 1:
            raise MalformedEdgeError(f"{path}: unexpected trailing content")
        if len(parts) - 1 != n:
            raise LabelCountMismatchError(
                f"{path}: {len(parts) - 1} labels for {n} nodes")
        labels = [int(x) for x in parts[1:]]
    name = os.path.splitext(os.path.basename(path))[0]
    return build_graph(n, edges, labels, graph_id=name)


def write_edgelist(path, g: Graph):
    """Inverse of parse_edgelist (labels line omitted when all zero)."""
    with open(path, "w", encoding="utf-8") as fh:
        edges = list(g.edges())
        fh.write(f"{g.n} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")
        if any(g.node_labels):
            fh.write("labels " + " ".join(str(l) for l in g.node_labels) + "\n")


def write_features(path, records):
    """Write feature records as line-delimited JSON.

    Each record is a dict with keys graph_id (str), method (str),
    iterations (int) and dense (list of numbers).
    """
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(
                {"graph_id": rec["graph_id"], "method": rec["method"],
                 "iterations": rec["iterations"], "dense": rec["dense"]},
                sort_keys=True) + "\n")


def read_features(path):
    """Exact inverse of write_features; validates the record schema."""
    records = []
    for i, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{i}: invalid JSON ({exc.msg})")
        if not isinstance(obj, dict):
            raise SchemaError(f"{path}:{i}: record is not an object")
        for key, kind in (("graph_id", str), ("method", str),
                          ("iterations", int), ("dense", list)):
            if key not in obj:
                raise SchemaError(f"{path}:{i}: missing {key!r} field")
            if not isinstance(obj[key], kind):
                raise SchemaError(f"{path}:{i}: field {key!r} has wrong type")
        if not all(isinstance(x, (int, float)) for x in obj["dense"]):
            raise SchemaError(f"{path}:{i}: non-numeric entry in 'dense'")
        records.append(obj)
    return records


def feature_records(embeddings, method, iterations):
    """Adapt engine embeddings (anything with graph_id and dense()) to
    serializable records."""
    return [{"graph_id": e.graph_id, "method": method,
             "iterations": iterations, "dense": list(e.dense())}
            for e in embeddings]
