"""Command-line front end.

Subcommands: gen, isotest, embed, classify, bench. All structured output
is JSON on stdout; errors go to stderr with an ``error:`` prefix and exit
codes 1 (usage), 2 (parse/data) or 3 (internal).
"""

import argparse
import glob
import json
import os
import sys

from . import bench as bench_mod
from . import dataio, generators
from .graph import Corpus, GraphError
from .mlp import TrainConfig, kfold_cv
from .ntwin import NtwinConfig, NtwinEmbedding, ntwin_embed_corpus
from .twin import stwin_embed, twin_iso_test, twin_matrix_embed
from .wl import wl_feature_vector, wl_iso_test, wl_refine


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    parser = _Parser(prog="twinwl", description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("TWINWL_THREADS", 0)) or None)
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate synthetic graphs")
    p.add_argument("--family", required=True, choices=generators.FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--skips", type=str, help="comma-separated skip lengths")
    p.add_argument("--counts", type=str, help="comma-separated cycle lengths")
    p.add_argument("--s1", type=int)
    p.add_argument("--s2", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("isotest", help="run an isomorphism test on two graphs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--method", choices=("wl", "stwin"), default="stwin")
    p.add_argument("--iters", type=int, default=3)

    p = sub.add_parser("embed", help="embed a dataset into feature records")
    p.add_argument("--dataset", required=True)
    p.add_argument("--format", choices=("tu", "edgelist"), default="tu")
    p.add_argument("--method",
                   choices=("wl", "stwin", "stwin-matrix", "ntwin"),
                   default="stwin")
    p.add_argument("--iters", type=int, default=3)
    p.add_argument("--ntwin-layers", type=int, default=2)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--out", required=True)
    p.add_argument("--labels-out",
                   help="optionally write graph class labels, one per line")

    p = sub.add_parser("classify", help="k-fold CV of an MLP over features")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True,
                   help="text file with one integer class label per record")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--patience", type=int, default=15)

    p = sub.add_parser("bench", help="compare embedding runtimes")
    p.add_argument("--dataset", required=True)
    p.add_argument("--format", choices=("tu", "edgelist"), default="tu")
    p.add_argument("--methods", default="wl,stwin")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--iters", type=int, default=3)
    return parser


def _load_corpus(path, fmt):
    if fmt == "tu":
        name = os.path.basename(os.path.normpath(path))
        return dataio.parse_tu_dataset(path, name)
    files = sorted(glob.glob(os.path.join(path, "*.edgelist")))
    if not files:
        raise dataio.MissingFileError(f"no .edgelist files in {path}")
    return Corpus.from_graphs(dataio.parse_edgelist(f) for f in files)


def _cmd_gen(args):
    result = {}
    if args.family == "cycle":
        result = generators.cycle(args.n)
    elif args.family == "disjoint_cycles":
        result = generators.disjoint_cycles(
            [int(c) for c in args.counts.split(",")])
    elif args.family == "circulant":
        result = generators.circulant(
            args.n, [int(s) for s in args.skips.split(",")])
    elif args.family == "rook4x4":
        result = generators.rook4x4()
    elif args.family == "shrikhande":
        result = generators.shrikhande()
    elif args.family == "er_random":
        result = generators.er_random(args.n, args.p, args.seed)
    elif args.family == "hard_pair_csl":
        result = generators.hard_pair_csl(args.n, args.s1, args.s2)
    graphs = list(result) if isinstance(result, tuple) else [result]
    os.makedirs(args.out, exist_ok=True)
    files = []
    for g in graphs:
        fname = f"{g.id}.edgelist"
        dataio.write_edgelist(os.path.join(args.out, fname), g)
        files.append(fname)
    manifest = {"family": args.family, "seed": args.seed, "files": files}
    with open(os.path.join(args.out, "manifest.json"), "w",
              encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
    if not args.quiet:
        print(json.dumps(manifest, sort_keys=True))
    return 0


def _cmd_isotest(args):
    a = dataio.parse_edgelist(args.a)
    b = dataio.parse_edgelist(args.b)
    test = wl_iso_test if args.method == "wl" else twin_iso_test
    decision = test(a, b, args.iters)
    print(json.dumps({"decision": decision.decision,
                      "iteration": decision.iteration,
                      "method": args.method}, sort_keys=True))
    return 0


def _cmd_embed(args):
    corpus = _load_corpus(args.dataset, args.format)
    if args.method == "wl":
        ref = wl_refine(corpus, args.iters)
        records = [{"graph_id": g.id, "method": "wl",
                    "iterations": args.iters,
                    "dense": wl_feature_vector(ref, gi)}
                   for gi, g in enumerate(corpus.graphs)]
    elif args.method == "stwin":
        embeddings = stwin_embed(corpus, args.iters, threads=args.threads)
        records = dataio.feature_records(embeddings, "stwin", args.iters)
    elif args.method == "stwin-matrix":
        embeddings = twin_matrix_embed(corpus, args.iters)
        records = dataio.feature_records(embeddings, "stwin-matrix",
                                         args.iters)
    else:
        cfg = NtwinConfig(layers=args.ntwin_layers, hidden=args.hidden,
                          seed=args.seed)
        vectors, _, _ = ntwin_embed_corpus(corpus, cfg)
        embeddings = [NtwinEmbedding(g.id, vec)
                      for g, vec in zip(corpus.graphs, vectors)]
        records = dataio.feature_records(embeddings, "ntwin", cfg.layers)
    dataio.write_features(args.out, records)
    if args.labels_out:
        with open(args.labels_out, "w", encoding="utf-8") as fh:
            for g in corpus.graphs:
                fh.write(f"{g.graph_label if g.graph_label is not None else 0}\n")
    if not args.quiet:
        print(json.dumps({"records": len(records), "method": args.method,
                          "out": args.out}, sort_keys=True))
    return 0


def _cmd_classify(args):
    records = dataio.read_features(args.features)
    with open(args.labels, "r", encoding="utf-8") as fh:
        labels = [int(line) for line in fh.read().split()]
    if len(labels) != len(records):
        raise dataio.DataError(
            f"{len(labels)} labels for {len(records)} feature records")
    features = [rec["dense"] for rec in records]
    cfg = TrainConfig(learning_rate=args.lr, batch_size=args.batch,
                      max_epochs=args.epochs, patience=args.patience,
                      seed=args.seed)
    report = kfold_cv(features, labels, args.folds, cfg)
    print(json.dumps(report.as_dict(), sort_keys=True))
    return 0


def _cmd_bench(args):
    corpus = _load_corpus(args.dataset, args.format)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    report = bench_mod.bench_compare(corpus, methods, args.repeats,
                                     args.iters)
    out = {"repeats": report["repeats"], "iterations": report["iterations"],
           "methods": {m: {"mean_seconds": round(v["mean_seconds"], 6),
                           "std_seconds": round(v["std_seconds"], 6)}
                       for m, v in report["methods"].items()}}
    if "welch_p" in report:
        out["welch_p"] = round(report["welch_p"], 6)
    print(json.dumps(out, sort_keys=True))
    return 0


_COMMANDS = {"gen": _cmd_gen, "isotest": _cmd_isotest, "embed": _cmd_embed,
             "classify": _cmd_classify, "bench": _cmd_bench}

_DATA_ERRORS = (dataio.DataError, GraphError, generators.BadParamsError,
                OSError, ValueError)


def run(argv) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _DATA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"error: internal: {exc!r}", file=sys.stderr)
        return 3


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
