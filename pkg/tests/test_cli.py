import json
import os

import pytest

from twinwl.bench import UnknownMethodError, bench_compare, welch_t_test
from twinwl.cli import run
from twinwl.graph import Corpus
from twinwl.generators import er_random

from test_dataio import write_tu_fixture


def run_capture(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_and_isotest_roundtrip(tmp_path, capsys):
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    assert run(["--quiet", "gen", "--family", "cycle", "--n", "6",
                "--out", out_a]) == 0
    assert run(["--quiet", "gen", "--family", "disjoint_cycles",
                "--counts", "3,3", "--out", out_b]) == 0
    capsys.readouterr()
    code, out, _ = run_capture(capsys, [
        "isotest", "--a", os.path.join(out_a, "cycle6.edgelist"),
        "--b", os.path.join(out_b, "cycles3+3.edgelist"),
        "--method", "stwin", "--iters", "3"])
    assert code == 0
    result = json.loads(out)
    assert result == {"decision": "non-isomorphic", "iteration": 2,
                      "method": "stwin"}


def test_isotest_wl_method_inconclusive(tmp_path, capsys):
    run(["--quiet", "gen", "--family", "cycle", "--n", "6",
         "--out", str(tmp_path)])
    run(["--quiet", "gen", "--family", "disjoint_cycles", "--counts", "3,3",
         "--out", str(tmp_path)])
    capsys.readouterr()
    code, out, _ = run_capture(capsys, [
        "isotest", "--a", str(tmp_path / "cycle6.edgelist"),
        "--b", str(tmp_path / "cycles3+3.edgelist"),
        "--method", "wl", "--iters", "5"])
    assert code == 0
    assert json.loads(out)["decision"] == "possibly-isomorphic"


def test_isotest_missing_file(tmp_path, capsys):
    code, _, err = run_capture(capsys, [
        "isotest", "--a", str(tmp_path / "nope.edgelist"),
        "--b", str(tmp_path / "nope.edgelist")])
    assert code == 2
    assert err.startswith("error:")


def test_usage_error_exit_code(capsys):
    code, _, err = run_capture(capsys, ["isotest"])
    assert code == 1
    assert err.startswith("error:")


def test_gen_writes_manifest(tmp_path):
    out = str(tmp_path / "pair")
    assert run(["--quiet", "gen", "--family", "hard_pair_csl", "--n", "11",
                "--s1", "2", "--s2", "3", "--out", out]) == 0
    manifest = json.loads((tmp_path / "pair" / "manifest.json").read_text())
    assert manifest["family"] == "hard_pair_csl"
    assert len(manifest["files"]) == 2
    for fname in manifest["files"]:
        assert (tmp_path / "pair" / fname).is_file()


def test_embed_tu_fixture(tmp_path, capsys):
    d = write_tu_fixture(str(tmp_path))
    out = str(tmp_path / "features.jsonl")
    code, _, _ = run_capture(capsys, [
        "--quiet", "embed", "--dataset", d, "--format", "tu",
        "--method", "wl", "--iters", "2", "--out", out])
    assert code == 0
    records = [json.loads(line)
               for line in open(out, encoding="utf-8") if line.strip()]
    assert len(records) == 2
    assert all(rec["method"] == "wl" for rec in records)


@pytest.mark.parametrize("method", ["stwin", "stwin-matrix", "ntwin"])
def test_embed_methods_produce_records(tmp_path, capsys, method):
    d = write_tu_fixture(str(tmp_path))
    out = str(tmp_path / f"{method}.jsonl")
    code, _, _ = run_capture(capsys, [
        "--quiet", "embed", "--dataset", d, "--format", "tu",
        "--method", method, "--iters", "2", "--ntwin-layers", "2",
        "--hidden", "8", "--out", out])
    assert code == 0
    records = [json.loads(line)
               for line in open(out, encoding="utf-8") if line.strip()]
    assert len(records) == 2


def test_embed_deterministic_output(tmp_path, capsys):
    d = write_tu_fixture(str(tmp_path))
    outs = []
    for name in ("one.jsonl", "two.jsonl"):
        out = str(tmp_path / name)
        run(["--quiet", "--seed", "5", "embed", "--dataset", d,
             "--method", "stwin", "--iters", "3", "--out", out])
        outs.append(open(out, encoding="utf-8").read())
    capsys.readouterr()
    assert outs[0] == outs[1]


def test_classify_separable_features(tmp_path, capsys):
    features = str(tmp_path / "features.jsonl")
    labels = str(tmp_path / "labels.txt")
    with open(features, "w") as fh:
        for i in range(30):
            cls = i % 2
            fh.write(json.dumps({
                "graph_id": f"g{i}", "method": "stwin", "iterations": 1,
                "dense": [4.0 * cls - 2.0, 0.5]}) + "\n")
    with open(labels, "w") as fh:
        fh.write("\n".join(str(i % 2) for i in range(30)))
    code, out, _ = run_capture(capsys, [
        "--seed", "1", "classify", "--features", features,
        "--labels", labels, "--folds", "5", "--epochs", "30"])
    assert code == 0
    report = json.loads(out)
    assert report["folds"] == 5
    assert report["mean_accuracy"] == 1.0


def test_classify_label_count_mismatch(tmp_path, capsys):
    features = str(tmp_path / "features.jsonl")
    labels = str(tmp_path / "labels.txt")
    with open(features, "w") as fh:
        fh.write(json.dumps({"graph_id": "g", "method": "m",
                             "iterations": 1, "dense": [1.0]}) + "\n")
    with open(labels, "w") as fh:
        fh.write("0\n1\n")
    code, _, err = run_capture(capsys, [
        "classify", "--features", features, "--labels", labels])
    assert code == 2
    assert err.startswith("error:")


def test_bench_cli_structure(tmp_path, capsys):
    d = write_tu_fixture(str(tmp_path))
    code, out, _ = run_capture(capsys, [
        "bench", "--dataset", d, "--methods", "wl,stwin",
        "--repeats", "3", "--iters", "2"])
    assert code == 0
    report = json.loads(out)
    assert set(report["methods"]) == {"wl", "stwin"}
    assert "welch_p" in report


def test_welch_identical_samples():
    t, p = welch_t_test([1.0, 1.0, 1.0, 1.0], [1.0, 1.0, 1.0, 1.0])
    assert t == 0.0
    assert p == 1.0


def test_welch_separated_samples():
    _, p = welch_t_test([1.0, 1.0, 1.0, 1.0], [2.0, 2.0, 2.0, 2.0])
    assert p < 0.01


def test_bench_single_method_no_pvalue():
    corpus = Corpus.from_graphs(
        [er_random(10, 0.3, s, graph_id=f"g{s}") for s in range(4)])
    report = bench_compare(corpus, ["wl"], 2, iterations=2)
    assert "welch_p" not in report
    assert set(report["methods"]) == {"wl"}


def test_bench_unknown_method():
    corpus = Corpus.from_graphs([er_random(6, 0.4, 0)])
    with pytest.raises(UnknownMethodError):
        bench_compare(corpus, ["nope"], 2)


def test_threads_env_var(tmp_path, capsys, monkeypatch):
    d = write_tu_fixture(str(tmp_path))
    out = str(tmp_path / "f.jsonl")
    monkeypatch.setenv("TWINWL_THREADS", "2")
    code, _, _ = run_capture(capsys, [
        "--quiet", "embed", "--dataset", d, "--method", "stwin",
        "--iters", "2", "--out", out])
    assert code == 0
