import json
import subprocess
import sys

import pytest

from densitylab import CapacityError, Schedule, density_report, from_elements
from densitylab.cli import main
from densitylab.harness import (
    EXPERIMENTS,
    ExperimentConfig,
    TableReport,
    emit_report,
    estimate_work,
    run_experiment,
)


def test_registry_names():
    assert set(EXPERIMENTS) == {"prop1", "prop3", "subset-sums", "classical", "product-alpha",
                                "omega-split", "sieve-cover", "cascade", "freiman-scan"}


def test_unknown_experiment_rejected_before_work():
    with pytest.raises(ValueError, match="unknown experiment"):
        run_experiment(ExperimentConfig("nope"))
    with pytest.raises(ValueError):
        run_experiment(ExperimentConfig("prop1", format="xml"))


def test_classical_squarefree_csv(tmp_path):
    cfg = ExperimentConfig("classical", 10**6, {"kind": "squarefree"}, output_path=str(tmp_path), format="csv")
    res = run_experiment(cfg)
    assert res.passed
    lines = (tmp_path / "classical_A.csv").read_text().splitlines()
    assert lines[0] == "checkpoint,count,ratio"
    assert abs(float(lines[-1].split(",")[2]) - 0.6079) <= 0.005
    sq = (tmp_path / "classical_square.csv").read_text().splitlines()
    assert abs(float(sq[-1].split(",")[2]) - 0.8319) <= 0.005


def test_product_alpha_selects_k3():
    res = run_experiment(ExperimentConfig("product-alpha", 10**6, {"alpha": 0.3}))
    assert res.passed
    assert res.reports["A"].meta["selected"] == "multiples(3)"
    assert res.reports["A"].final_ratio == pytest.approx(1 / 3, abs=1e-3)
    assert res.reports["square"].final_ratio == pytest.approx(1 / 9, abs=1e-3)


def test_budget_guard():
    cfg = ExperimentConfig("classical", 10**6, budget=1e5)
    with pytest.raises(CapacityError) as exc:
        run_experiment(cfg)
    assert exc.value.estimate == estimate_work(cfg) > 1e5


def test_json_reports_identical_modulo_run_block(tmp_path):
    outs = []
    for d in ("a", "b"):
        cfg = ExperimentConfig("prop3", None, {}, output_path=str(tmp_path / d))
        run_experiment(cfg)
        outs.append(json.loads((tmp_path / d / "prop3_A.json").read_text()))
    for o in outs:
        o["metadata"].pop("run")
    assert outs[0] == outs[1]
    assert {"label", "limit", "schedule", "ratios", "lower_est", "upper_est"} <= outs[0].keys()
    assert outs[0]["metadata"]["config"]["experiment"] == "prop3"
    assert "numpy" in outs[0]["metadata"]["engine"]


def test_csv_reports_byte_identical(tmp_path):
    texts = []
    for d in ("a", "b"):
        run_experiment(ExperimentConfig("cascade", 20000, {"stages": 4}, output_path=str(tmp_path / d), format="csv"))
        texts.append([(tmp_path / d / f"cascade_{n}.csv").read_bytes() for n in ("trace", "A", "square")])
    assert texts[0] == texts[1]


def test_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("DENSITYLAB_CACHE", str(tmp_path / "cache"))
    cfg = ExperimentConfig("classical", 10**5, {"kind": "coprime(6)"}, cache_dir=str(tmp_path / "ignored"))
    r1 = run_experiment(cfg)
    files = list((tmp_path / "cache").glob("*.dlps"))
    assert len(files) == 1 and not (tmp_path / "ignored").exists()
    r2 = run_experiment(cfg)
    assert r1.reports["A"].to_dict() == r2.reports["A"].to_dict()


def test_emit_report_contracts(tmp_path):
    r = density_report(from_elements(range(0, 1001, 2), 1000))
    p = emit_report(r, "csv", tmp_path / "r.csv")
    assert p.read_text().splitlines()[0] == "checkpoint,count,ratio"
    p = emit_report(r, "json", tmp_path / "r.json", {"config": {"x": 1}})
    d = json.loads(p.read_text())
    assert d["metadata"]["config"] == {"x": 1}
    empty = r.__class__(**{**r.__dict__, "checkpoints": [], "counts": [], "ratios": []})
    target = tmp_path / "empty.csv"
    with pytest.raises(ValueError):
        emit_report(empty, "csv", target)
    assert not target.exists()
    t = TableReport("t", ["a"], [[1]])
    assert emit_report(t, "csv", tmp_path / "t.csv").read_text() == "a\n1\n"


def test_emit_report_io_error_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    r = density_report(from_elements(range(0, 101, 2), 100), Schedule("geometric", 2.0))
    with pytest.raises(OSError, match="file"):
        emit_report(r, "json", blocker / "sub" / "r.json")


@pytest.mark.parametrize("name,limit,params", [
    ("prop1", 10**5, {"alpha": 0.25}),
    ("prop3", None, {}),
    ("subset-sums", 10**6, {}),
    ("omega-split", 20000, {}),
    ("sieve-cover", 10**5, {}),
    ("cascade", 10**5, {}),
])
def test_experiments_pass(name, limit, params):
    res = run_experiment(ExperimentConfig(name, limit, params))
    assert res.passed, res.failed


def test_failed_check_is_reported_not_raised():
    res = run_experiment(ExperimentConfig("prop1", 10**4, {"alpha": 0.1}, tail_fraction=1.0))
    assert not res.passed
    assert [c.name for c in res.failed] == ["density_tail_near_alpha"]


# --- CLI ---------------------------------------------------------------------

def test_cli_exit_codes(tmp_path, capsys):
    assert main(["prop1", "--alpha", "0.5", "--limit", "1e5"]) == 0
    assert "[PASS] sumset_is_full_interval" in capsys.readouterr().out
    assert main(["prop1", "--alpha", "0.1", "--limit", "10000", "--tail", "1"]) == 1
    assert main(["prop1", "--alpha", "3"]) == 2
    assert main(["classical", "--budget", "10"]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["not-an-experiment"])
    assert exc.value.code == 2


def test_cli_writes_files(tmp_path):
    assert main(["product-alpha", "--alpha", "3/10", "--limit", "100000", "--format", "json", "--out", str(tmp_path)]) == 0
    summary = json.loads((tmp_path / "product-alpha_summary.json").read_text())
    assert summary["passed"] and summary["files"]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "densitylab", "sieve-cover", "--limit", "20000"],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert "inclusion_exclusion_exact" in out.stdout
