import csv
import json
import math

import pytest

from lorentz_metrics.cli import main

DIAMOND = {"variant": "diamond", "a": [-1, 0], "b": [1, 0]}


def _write(tmp_path, name, cfg):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_distance_experiment(tmp_path):
    cfg = {"version": 1, "experiment": "distance", "domain": DIAMOND,
           "points": [[[0, 0], [0, 0.5]]], "mesh": {"k": 64}, "svg": True}
    path = _write(tmp_path, "c.json", cfg)
    out = tmp_path / "out"
    assert main(["distance", "--config", path, "--out", str(out)]) == 0
    rows = _rows(out / "distance.csv")
    kinds = {r["kind"]: float(r["value"]) for r in rows}
    assert {"upper", "lower", "exact"} <= set(kinds)
    assert kinds["exact"] == pytest.approx(math.log(9.0), rel=1e-9)
    assert kinds["lower"] - 1e-9 <= kinds["exact"] <= kinds["upper"] + 1e-9
    assert (out / "distance.svg").exists()


def test_malformed_json_exit_2_no_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    out = tmp_path / "out"
    assert main(["distance", "--config", str(p), "--out", str(out)]) == 2
    assert not out.exists()


def test_unknown_field_rejected(tmp_path):
    cfg = {"version": 1, "experiment": "distance", "domain": DIAMOND,
           "points": [], "bogus": 1}
    path = _write(tmp_path, "c.json", cfg)
    assert main(["distance", "--config", path, "--out", str(tmp_path)]) == 2


def test_version_required(tmp_path):
    cfg = {"experiment": "distance", "domain": DIAMOND, "points": []}
    path = _write(tmp_path, "c.json", cfg)
    assert main(["distance", "--config", path, "--out", str(tmp_path)]) == 2


def test_domain_failure_exit_3(tmp_path):
    cfg = {"version": 1, "experiment": "distance",
           "domain": {"variant": "diamond", "a": [0, 0], "b": [0, 0]},
           "points": []}
    path = _write(tmp_path, "c.json", cfg)
    assert main(["distance", "--config", path, "--out", str(tmp_path)]) == 3


def test_solver_failure_exit_4_diagnostic_row(tmp_path):
    cfg = {"version": 1, "experiment": "distance", "domain": DIAMOND,
           "points": [[[0, 0], [5, 5]]]}
    path = _write(tmp_path, "c.json", cfg)
    out = tmp_path / "out"
    assert main(["distance", "--config", path, "--out", str(out)]) == 4
    rows = _rows(out / "distance.csv")
    assert rows and rows[-1]["kind"] == "diagnostic"


def test_hyperbolicity_slab_growing(tmp_path):
    cfg = {"version": 1, "experiment": "hyperbolicity",
           "domain": {"variant": "slab", "height": 1.0, "n": 2},
           "scales": [1, 2, 4, 8, 16], "quadruples": 300,
           "points_per_scale": 24, "seed": 42}
    path = _write(tmp_path, "c.json", cfg)
    out = tmp_path / "out"
    assert main(["hyperbolicity", "--config", path, "--out", str(out)]) == 0
    rows = _rows(out / "hyperbolicity.csv")
    verdicts = [r for r in rows if r["metric"] == "growth_ratio"]
    assert verdicts and verdicts[0]["kind"] == "growing"
    series = [r for r in rows if "scale=" in r["mesh"]]
    assert len(series) == 5


def test_acausality_epsilon_hat(tmp_path):
    cfg = {"version": 1, "experiment": "acausality",
           "domain": {"variant": "graph_scaled_abs", "lipschitz": 0.25,
                      "n": 1}}
    path = _write(tmp_path, "c.json", cfg)
    out = tmp_path / "out"
    assert main(["acausality", "--config", path, "--out", str(out)]) == 0
    rows = _rows(out / "acausality.csv")
    eps = [r for r in rows if r["metric"] == "epsilon_hat"][0]
    assert float(eps["value"]) == pytest.approx(3.0, abs=1e-9)
    assert eps["kind"] == "stable"


def test_determinism_modulo_wall_ms(tmp_path, monkeypatch):
    monkeypatch.setenv("LORENTZ_METRICS_THREADS", "2")
    cfg = {"version": 1, "experiment": "distance", "domain": DIAMOND,
           "points": [[[0, 0], [0, 0.5]], [[-0.2, 0.1], [0.4, 0.3]]],
           "mesh": {"k": 64}, "seed": 5}
    path = _write(tmp_path, "c.json", cfg)
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert main(["distance", "--config", path, "--out", str(out)]) == 0
        rows = _rows(out / "distance.csv")
        outs.append([{k: v for k, v in r.items() if k != "wall_ms"}
                     for r in rows])
    assert outs[0] == outs[1]


def test_validate_subset(tmp_path):
    cfg = {"version": 1, "experiment": "validate",
           "criteria": ["stable_acausality_estimator"]}
    path = _write(tmp_path, "c.json", cfg)
    out = tmp_path / "out"
    assert main(["validate", "--config", path, "--out", str(out)]) == 0
    rows = _rows(out / "validate.csv")
    assert rows[0]["metric"] == "stable_acausality_estimator"
    assert rows[0]["kind"] == "pass"
