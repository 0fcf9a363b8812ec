"""End-to-end smoke tests for the python bindings and the CLI."""

import json
import math
import os
import subprocess

import numpy as np
import pytest

import psdc


def benchmark(seed=7):
    return psdc.generate_synthetic(
        psdc.SyntheticSpec(k=10, dim=32, per_class=200, separation=8.0, sigma=1.0, seed=seed)
    )


def test_generate_shape_and_determinism():
    d = benchmark()
    assert len(d) == 2000
    assert d.features.shape == (2000, 32)
    assert d.true_labels == d.noisy_labels
    again = benchmark()
    np.testing.assert_array_equal(d.features, again.features)


def test_corrupt_and_select_pipeline():
    d = benchmark()
    t = psdc.make_transition("uniform", 0.4, 10)
    assert t.entries[0, 0] == pytest.approx(0.64)
    noisy = psdc.corrupt_labels(d, t, 99)
    flipped = sum(a != b for a, b in zip(noisy.noisy_labels, noisy.true_labels))
    assert 0.30 < flipped / len(noisy) < 0.42

    partition = psdc.psdc_select(noisy)
    report = psdc.evaluate_partition(partition, noisy)
    assert report.clean_purity >= 6.0 / 7.0
    assert report.clean_recall >= 0.8
    assert len(partition.clean_indices) + len(partition.noisy_indices) == len(noisy)


def test_jsd_values():
    assert psdc.jsd(np.array([0.5, 0.5]), np.array([0.5, 0.5])) == 0.0
    assert psdc.jsd(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == pytest.approx(math.log(2))
    assert psdc.jsd(np.array([0.5, 0.5]), np.array([1.0, 0.0])) == pytest.approx(
        0.21576155433883570, abs=1e-14
    )
    with pytest.raises(ValueError):
        psdc.jsd(np.array([0.7, 0.7]), np.array([0.5, 0.5]))


def test_gmm_fit():
    rng = np.random.default_rng(0)
    values = np.concatenate([rng.normal(0, 1, 400), rng.normal(6, 1, 400)])
    gmm = psdc.fit_gmm(values)
    lo, hi = sorted([gmm.mean_1, gmm.mean_2])
    assert abs(lo) < 0.3 and abs(hi - 6) < 0.3
    p1, p2 = psdc.posterior(gmm, hi)
    assert p1 + p2 == pytest.approx(1.0)


def test_theorem_oracles():
    reports = psdc.verify_theorem2("pairwise", [0.49, 0.51], 10)
    assert reports[0].ordering_holds and not reports[1].ordering_holds

    spec = psdc.SyntheticSpec(k=10, dim=32, per_class=100, separation=8.0, sigma=1.0, seed=1)
    t = psdc.make_transition("uniform", 0.4, 10)
    rep = psdc.verify_theorem1(spec, t, 2, 1)
    assert rep.ordering_holds and not rep.submerged


def test_hybrid_and_comparison_selectors():
    d = psdc.corrupt_labels(benchmark(), psdc.make_transition("uniform", 0.5, 10), 99)
    psdc_part = psdc.psdc_select(d)

    model = psdc.fit_prototypes_subsample(d.features, d.noisy_labels, d.k, 0.05, 3)
    preds = psdc.predict_soft_matrix(model, d.features)
    jsd_part = psdc.jsd_select(preds, d.noisy_labels)
    hybrid = psdc.hybrid_select(psdc_part, jsd_part)
    assert hybrid.method in ("psdc", "jsd")
    assert hybrid.agreement_ratio is not None

    km = psdc.kmeans_select(d, anchors=psdc.pick_clean_anchors(d, 3))
    ce = psdc.ce_select(preds, d.noisy_labels)
    raw = psdc.gmm_raw_select(d.features, d.noisy_labels)
    purity = lambda p: psdc.evaluate_partition(p, d).clean_purity
    assert purity(psdc_part) >= purity(ce) >= purity(raw)
    assert purity(psdc_part) > purity(km)


def test_losses_and_mixup():
    cfg = psdc.LoopConfig()
    assert psdc.total_loss(1, 2, 3, 4, cfg) == pytest.approx(1 + 60 + 3 + 0.1)
    assert psdc.loss_labeled([0.25, 0.75], [0.5, 0.5]) == pytest.approx(0.8369882167858556)
    assert psdc.loss_unlabeled([0.5, 0.5], [1.0, 0.0]) == pytest.approx(0.5)
    assert psdc.loss_reg([[0.25, 0.75]], psdc.uniform_prior(2)) == pytest.approx(0.1438410362258904)
    assert psdc.contrastive_loss(np.array([[1.0, 0.0], [1.0, 0.0]]), 1.0) == pytest.approx(0.0)

    x, p = psdc.mixup(np.array([1.0, 0.0]), [1.0, 0.0], np.array([0.0, 1.0]), [0.0, 1.0], 4.0, 7)
    assert x[0] >= 0.5 and sum(p) == pytest.approx(1.0)

    sims = psdc.affinity_group(benchmark(seed=2), 0, list(range(5)))
    assert sims.matrix.shape == (5, 5)
    assert sims.row_sums[0] == pytest.approx(sims.matrix[0].sum())


def test_run_loop():
    d = psdc.corrupt_labels(benchmark(), psdc.make_transition("uniform", 0.4, 10), 99)
    config = psdc.LoopConfig()
    config.rounds = 3
    config.seed = 7
    report = psdc.run_loop(d, config)
    assert not report.aborted
    assert [r.round for r in report.rounds] == [1, 2, 3]
    assert report.rounds[-1].clean_purity >= 6.0 / 7.0


def test_csv_roundtrip(tmp_path):
    d = benchmark(seed=3)
    path = str(tmp_path / "data.csv")
    psdc.save_dataset(d, path)
    back = psdc.load_dataset(path)
    np.testing.assert_array_equal(d.features, back.features)
    assert back.noisy_labels == d.noisy_labels


@pytest.fixture
def cli():
    path = os.environ.get("PSDC_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("PSDC_CLI not set")
    return path


def test_cli_pipeline(cli, tmp_path):
    data = str(tmp_path / "d.csv")
    noisy = str(tmp_path / "noisy.csv")
    part = str(tmp_path / "part.json")
    report = str(tmp_path / "report.json")

    def run(*args):
        return subprocess.run([cli, *args], capture_output=True, text=True, check=True)

    run("generate", "--k", "10", "--dim", "32", "--per-class", "50", "--separation", "8",
        "--seed", "7", "-o", data)
    run("corrupt", "-i", data, "--noise", "uniform", "--rate", "0.4", "--seed", "99", "-o", noisy)
    assert os.path.exists(noisy + ".matrix.json")
    run("select", "--method", "psdc", "--cutoff", "0.9", "-i", noisy, "-o", part,
        "--report", report)

    with open(part) as f:
        partition = json.load(f)
    assert partition["method"] == "psdc"
    assert len(partition["clean"]) + len(partition["noisy"]) == 500

    with open(report) as f:
        metrics = json.load(f)
    assert metrics["clean_purity"] >= 6.0 / 7.0

    out = run("verify", "--theorem", "2", "--noise", "pairwise", "--rates", "0.49,0.51",
              "--k", "10")
    assert "PASS" in out.stdout
    out = run("verify-theorem2", "--noise", "uniform", "--rates", "0.4", "--k", "10")
    assert "PASS" in out.stdout

    # overwrite guard: second write without --force must fail with code 1
    failed = subprocess.run([cli, "generate", "--k", "2", "--dim", "2", "--per-class", "2",
                             "-o", data], capture_output=True, text=True)
    assert failed.returncode == 1


def test_cli_predictions_file_and_evaluate(cli, tmp_path):
    data = str(tmp_path / "d.csv")
    noisy = str(tmp_path / "noisy.csv")
    preds = str(tmp_path / "preds.csv")
    part = str(tmp_path / "part.json")
    metrics = str(tmp_path / "metrics.json")

    def run(*args):
        return subprocess.run([cli, *args], capture_output=True, text=True, check=True)

    run("generate", "--k", "4", "--dim", "8", "--per-class", "25", "--separation", "8",
        "--seed", "2", "-o", data)
    run("corrupt", "-i", data, "--noise", "uniform", "--rate", "0.3", "--seed", "5", "-o", noisy)

    # Oracle predictions: the transition row of each sample's true class.
    d = psdc.load_dataset(noisy)
    t = psdc.make_transition("uniform", 0.3, 4)
    rows = ["id," + ",".join(f"p{c}" for c in range(4))]
    for i, sid in enumerate(d.ids):
        p = psdc.oracle_softmax(t, d.true_labels[i])
        rows.append(sid + "," + ",".join(repr(v) for v in p))
    with open(preds, "w") as f:
        f.write("\n".join(rows) + "\n")

    run("select", "--method", "jsd", "-i", noisy, "--predictions", preds, "-o", part)
    run("evaluate", "-i", noisy, "--partition", part, "-o", metrics)
    with open(metrics) as f:
        report = json.load(f)
    assert report["clean_purity"] >= 0.95

    # A predictions file that skips an id is rejected with exit code 1.
    with open(preds, "w") as f:
        f.write("\n".join(rows[:-1]) + "\n")
    failed = subprocess.run([cli, "select", "--method", "jsd", "-i", noisy, "--predictions",
                             preds, "-o", part, "--force"], capture_output=True, text=True)
    assert failed.returncode == 1
    assert "no prediction row" in failed.stderr


def test_cli_train_with_holdout(cli, tmp_path):
    data = str(tmp_path / "d.csv")
    noisy = str(tmp_path / "noisy.csv")
    heldout = str(tmp_path / "eval.csv")
    out = str(tmp_path / "train.json")

    def run(*args):
        return subprocess.run([cli, *args], capture_output=True, text=True, check=True)

    run("generate", "--k", "5", "--dim", "16", "--per-class", "40", "--separation", "8",
        "--seed", "7", "-o", data)
    run("generate", "--k", "5", "--dim", "16", "--per-class", "10", "--separation", "8",
        "--seed", "77", "-o", heldout)
    run("corrupt", "-i", data, "--noise", "uniform", "--rate", "0.4", "--seed", "9", "-o", noisy)
    out_text = run("train", "-i", noisy, "--rounds", "2", "--seed", "4", "--eval", heldout,
                   "-o", out).stdout
    assert "held-out nearest-centroid accuracy" in out_text
    with open(out) as f:
        report = json.load(f)
    assert report["final_accuracy"] >= 0.9


def test_cli_train_and_ablate(cli, tmp_path):
    data = str(tmp_path / "d.csv")
    noisy = str(tmp_path / "noisy.csv")
    out_json = str(tmp_path / "train.json")
    rounds_csv = str(tmp_path / "rounds.csv")
    table = str(tmp_path / "table.csv")

    def run(*args):
        return subprocess.run([cli, *args], capture_output=True, text=True, check=True)

    run("generate", "--k", "5", "--dim", "16", "--per-class", "40", "--separation", "8",
        "--seed", "7", "-o", data)
    run("corrupt", "-i", data, "--noise", "uniform", "--rate", "0.4", "--seed", "99", "-o", noisy)
    run("train", "-i", noisy, "--rounds", "3", "--seed", "7", "-o", out_json,
        "--rounds-csv", rounds_csv)
    with open(out_json) as f:
        report = json.load(f)
    assert len(report["rounds"]) == 3
    with open(rounds_csv) as f:
        header = f.readline().strip()
    assert header == "round,method,clean_purity,clean_recall,clean_size,total_loss"

    run("ablate", "--k", "5", "--dim", "16", "--per-class", "40", "--separation", "8",
        "--rates", "0.4", "--methods", "psdc,gmm_raw", "--seed", "7", "-o", table)
    with open(table) as f:
        lines = f.read().strip().splitlines()
    assert lines[0].startswith("method,noise,rate")
    assert len(lines) == 3
