import hashlib
import json
import os
import subprocess
import sys

import pytest

from netaccess.cli import main

PATH6 = "0 1\n1 2\n2 3\n3 4\n4 5\n"


@pytest.fixture
def graph_file(tmp_path):
    f = tmp_path / "g.edges"
    f.write_text(PATH6)
    return str(f)


def run(*argv):
    return main(list(argv))


# --- estimate -------------------------------------------------------------

def test_estimate_outputs(graph_file, tmp_path):
    out = str(tmp_path / "out")
    assert run("estimate", "--input", graph_file, "--alpha", "0.5", "--R", "400",
               "--output-dir", out) == 0
    lines = (tmp_path / "out" / "access.csv").read_text().splitlines()
    assert lines[0] == "i,j,p"
    assert len(lines) == 1 + 15  # C(6,2)
    adv = (tmp_path / "out" / "advantage.csv").read_text().splitlines()
    assert adv[0] == "node,broadcast,influence"
    assert len(adv) == 7


def test_manifest_contents(graph_file, tmp_path):
    out = str(tmp_path / "out")
    run("estimate", "--input", graph_file, "--alpha", "0.5", "--R", "200",
        "--output-dir", out, "--seed", "3")
    man = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert man["command"] == "estimate"
    assert man["version"]
    digest = hashlib.sha256(open(graph_file, "rb").read()).hexdigest()
    assert man["input_sha256"] == digest
    cfg = man["config"]
    assert cfg["alpha"] == 0.5 and cfg["R"] == 200 and cfg["seed"] == 3
    assert cfg["input_sha256"] == digest


def test_estimate_deterministic_bytes(graph_file, tmp_path):
    blobs = []
    for sub in ("a", "b"):
        out = str(tmp_path / sub)
        run("estimate", "--input", graph_file, "--alpha", "0.4", "--R", "300",
            "--output-dir", out, "--workers", "1" if sub == "a" else "4")
        blobs.append((tmp_path / sub / "access.csv").read_bytes())
    assert blobs[0] == blobs[1]


def test_multi_alpha_subdirectories(graph_file, tmp_path):
    out = str(tmp_path / "out")
    assert run("estimate", "--input", graph_file, "--alpha", "0.3,0.7",
               "--R", "100", "--output-dir", out) == 0
    assert os.path.isdir(os.path.join(out, "alpha_0.3"))
    assert os.path.isdir(os.path.join(out, "alpha_0.7"))
    m3 = json.loads(open(os.path.join(out, "alpha_0.3", "manifest.json")).read())
    assert m3["config"]["alpha"] == 0.3


def test_no_lcc_keeps_all_components(graph_file, tmp_path):
    f = tmp_path / "two.edges"
    f.write_text("0 1\n1 2\n8 9\n")
    out_lcc = str(tmp_path / "lcc")
    out_all = str(tmp_path / "all")
    run("estimate", "--input", str(f), "--R", "50", "--output-dir", out_lcc)
    run("estimate", "--input", str(f), "--R", "50", "--output-dir", out_all, "--no-lcc")
    n_lcc = len(open(os.path.join(out_lcc, "access.csv")).readlines()) - 1
    n_all = len(open(os.path.join(out_all, "access.csv")).readlines()) - 1
    assert n_lcc == 3   # C(3,2)
    assert n_all == 10  # C(5,2)


# --- config handling ------------------------------------------------------

def test_config_file_with_flag_override(graph_file, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"alpha": 0.5, "R": 250, "seed": 4}))
    out = str(tmp_path / "out")
    assert run("estimate", "--input", graph_file, "--config", str(cfg),
               "--R", "600", "--output-dir", out) == 0
    man = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert man["config"]["R"] == 600      # flag wins
    assert man["config"]["seed"] == 4     # file value
    assert man["config"]["alpha"] == 0.5  # file value


def test_unknown_config_key_exits_2(graph_file, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"alhpa": 0.5}))
    assert run("estimate", "--input", graph_file, "--config", str(cfg),
               "--output-dir", str(tmp_path / "o")) == 2


def test_bad_alpha_exits_2(graph_file, tmp_path, capsys):
    assert run("estimate", "--input", graph_file, "--alpha", "1.5",
               "--output-dir", str(tmp_path / "o")) == 2
    assert "alpha" in capsys.readouterr().err


def test_odd_budget_for_paired_kind_exits_2(graph_file, tmp_path, capsys):
    assert run("augment", "--input", graph_file, "--heuristic", "bc-both",
               "--k", "3", "--output-dir", str(tmp_path / "o")) == 2
    assert "k" in capsys.readouterr().err


def test_unknown_heuristic_exits_2(graph_file, tmp_path):
    assert run("augment", "--input", graph_file, "--heuristic", "magic",
               "--k", "2", "--output-dir", str(tmp_path / "o")) == 2


def test_missing_input_exits_1(tmp_path):
    assert run("estimate", "--input", str(tmp_path / "nope.edges"),
               "--output-dir", str(tmp_path / "o")) == 1


def test_unparseable_input_exits_1(tmp_path):
    f = tmp_path / "bad.edges"
    f.write_text("0 1\nnot numbers\n")
    assert run("estimate", "--input", str(f),
               "--output-dir", str(tmp_path / "o")) == 1


# --- augment --------------------------------------------------------------

def test_augment_outputs(graph_file, tmp_path):
    out = str(tmp_path / "aug")
    assert run("augment", "--input", graph_file, "--alpha", "0.5", "--R", "300",
               "--k", "4", "--heuristic", "bc-chord", "--eval-every", "2",
               "--output-dir", out) == 0
    files = set(os.listdir(out))
    assert {"trace.csv", "augmented.edges", "manifest.json", "run_summary.json",
            "metrics_k0.json", "metrics_k4.json"} <= files
    trace = open(os.path.join(out, "trace.csv")).read().splitlines()
    assert trace[0] == "step,u,v,welfare,min_broadcast,min_influence"
    assert len(trace) == 5
    m0 = json.loads(open(os.path.join(out, "metrics_k0.json")).read())
    m4 = json.loads(open(os.path.join(out, "metrics_k4.json")).read())
    assert m0["k"] == 0 and m4["k"] == 4
    assert m4["welfare"]["value"] >= m0["welfare"]["value"]
    summary = json.loads(open(os.path.join(out, "run_summary.json")).read())
    assert summary["edges_added"] == 4
    aug_lines = open(os.path.join(out, "augmented.edges")).read().splitlines()
    assert len(aug_lines) == 5 + 4


def test_augment_trace_identical_across_worker_counts(graph_file, tmp_path):
    blobs = []
    for tag, workers in (("w1", "1"), ("w4", "4")):
        out = str(tmp_path / tag)
        assert run("augment", "--input", graph_file, "--alpha", "0.5",
                   "--R", "400", "--k", "4", "--heuristic", "bc-chord",
                   "--workers", workers, "--output-dir", out) == 0
        blobs.append(open(os.path.join(out, "trace.csv"), "rb").read())
    assert blobs[0] == blobs[1]


# --- evaluate / oracle / stability / control ------------------------------

def test_evaluate_from_graph(graph_file, tmp_path):
    out = str(tmp_path / "ev")
    assert run("evaluate", "--input", graph_file, "--alpha", "0.5", "--R", "200",
               "--output-dir", out) == 0
    bundle = json.loads(open(os.path.join(out, "metrics_k0.json")).read())
    assert bundle["k"] == 0 and "welfare" in bundle


def test_evaluate_round_trip_through_binary(graph_file, tmp_path):
    est_dir = str(tmp_path / "est")
    bin_path = os.path.join(est_dir, "est.bin")
    run("estimate", "--input", graph_file, "--alpha", "0.5", "--R", "300",
        "--output-dir", est_dir, "--estimate-out", bin_path)
    ev_dir = str(tmp_path / "ev")
    assert run("evaluate", "--estimate-in", bin_path, "--output-dir", ev_dir) == 0
    bundle = json.loads(open(os.path.join(ev_dir, "metrics_k0.json")).read())
    assert bundle["config"]["alpha"] == 0.5
    assert bundle["config"]["R"] == 300


def test_evaluate_rejects_both_sources(graph_file, tmp_path):
    assert run("evaluate", "--input", graph_file, "--estimate-in", graph_file,
               "--output-dir", str(tmp_path / "o")) == 2


def test_oracle_exact_triangle(tmp_path):
    f = tmp_path / "tri.edges"
    f.write_text("0 1\n1 2\n0 2\n")
    out = str(tmp_path / "or")
    assert run("oracle", "--input", str(f), "--alpha", "0.5",
               "--output-dir", out) == 0
    rows = open(os.path.join(out, "access.csv")).read().splitlines()[1:]
    assert [r.split(",")[2] for r in rows] == ["0.625000"] * 3


def test_oracle_cap_exits_1(tmp_path):
    f = tmp_path / "big.edges"
    f.write_text("".join(f"{i} {i + 1}\n" for i in range(25)))
    assert run("oracle", "--input", str(f), "--output-dir", str(tmp_path / "o")) == 1


def test_stability_json(graph_file, tmp_path):
    out = str(tmp_path / "st")
    assert run("stability", "--input", graph_file, "--alpha", "0.5", "--R", "150",
               "--reps", "3", "--output-dir", out) == 0
    st = json.loads(open(os.path.join(out, "stability.json")).read())
    assert set(st) == {"alpha", "R", "reps", "base_seed", "max_dev", "mean_dev"}
    assert 0.0 <= st["mean_dev"] <= st["max_dev"] <= 1.0


def test_control_selected_nodes(tmp_path):
    f = tmp_path / "tri.edges"
    f.write_text("0 1\n1 2\n")
    out = str(tmp_path / "ct")
    assert run("control", "--input", str(f), "--alpha", "0.5", "--R", "200",
               "--nodes", "1", "--output-dir", out) == 0
    rows = open(os.path.join(out, "control.csv")).read().splitlines()
    assert rows[0] == "node,cent_star,max_pair_control,raw_sum"
    node, cent, maxp, raw = rows[1].split(",")
    assert node == "1" and cent == "1.000000" and maxp == "1.000000"


def test_control_exact_flag(tmp_path):
    f = tmp_path / "tri.edges"
    f.write_text("0 1\n1 2\n0 2\n")
    out = str(tmp_path / "ct")
    assert run("control", "--input", str(f), "--alpha", "0.5", "--exact",
               "--nodes", "0", "--output-dir", out) == 0
    rows = open(os.path.join(out, "control.csv")).read().splitlines()
    assert rows[1].split(",")[1] == "0.200000"


def test_control_unknown_node_exits_2(tmp_path):
    f = tmp_path / "e.edges"
    f.write_text("0 1\n")
    assert run("control", "--input", str(f), "--nodes", "7",
               "--output-dir", str(tmp_path / "o")) == 2


# --- console entry point --------------------------------------------------

def test_console_script_runs(graph_file, tmp_path):
    out = str(tmp_path / "sub")
    proc = subprocess.run(
        [sys.executable, "-m", "netaccess.cli", "estimate", "--input", graph_file,
         "--R", "100", "--output-dir", out],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert os.path.exists(os.path.join(out, "access.csv"))
