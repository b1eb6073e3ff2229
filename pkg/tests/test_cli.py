import json

import pytest
from click.testing import CliRunner

from hamstab.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def test_analyze_json(runner):
    result = runner.invoke(main, ["analyze", "--catalog-id", "torus:n=2,r=1,1,p=1"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["label"] == "indefinite"
    assert payload["catalog_id"] == "torus:n=2,r=1,1,p=1"
    assert {w["probe_id"] for w in payload["witnesses"]} == {"mode:k=2,0", "mode:k=1,1"}


def test_analyze_csv(runner):
    result = runner.invoke(
        main, ["analyze", "--catalog-id", "hyperbola:n=2,r=1,3,eps=+,+", "--format", "csv"]
    )
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "catalog_id,label,strategy,probe_id,value"
    assert "negative_definite" in lines[1]


def test_analyze_strategy_override(runner):
    result = runner.invoke(
        main,
        ["analyze", "--catalog-id", "tube:S3:closed:G", "--strategy", "fourier_sweep"],
    )
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["strategy"] == "fourier_sweep"
    assert payload["label"] == "indefinite"


def test_analyze_unknown_id_is_usage_error(runner):
    result = runner.invoke(main, ["analyze", "--catalog-id", "bogus:x=1"])
    assert result.exit_code == 2
    assert "unknown catalog kind" in result.output


def test_sweep_modes(runner):
    result = runner.invoke(
        main, ["sweep", "--catalog-id", "torus:n=1,r=1,p=0", "--axis", "mode:kmax=4"]
    )
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0] == "k,value"
    import numpy as np

    values = [float(line.split(",")[1]) for line in lines[1:]]
    assert values == pytest.approx([np.pi * (k**4 - k**2) for k in range(1, 5)])


def test_sweep_radius_all_negative(runner):
    result = runner.invoke(
        main,
        ["sweep", "--catalog-id", "torus:n=2,r=1,1,p=1", "--axis", "radius:lo=0.5,hi=2,steps=7"],
    )
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()[1:]
    assert len(lines) == 7
    assert all(float(line.split(",")[1]) < 0 for line in lines)


def test_sweep_kappa_verdict_flip(runner):
    length = 4 * 3.141592653589793
    result = runner.invoke(
        main,
        [
            "sweep",
            "--catalog-id",
            f"tn:kappa=1,K=0,L={length:.17g}",
            "--axis",
            "kappa:lo=0,hi=2,steps=9",
        ],
    )
    assert result.exit_code == 0
    rows = [line.split(",") for line in result.output.strip().splitlines()[1:]]
    verdicts = [row[-1] for row in rows]
    assert "stable" in verdicts and "inconclusive" in verdicts
    flip = verdicts.index("inconclusive")
    # the threshold for L = 4 pi sits at kappa = 1
    assert float(rows[flip][0]) > 1.0
    assert all(v == "stable" for v in verdicts[:flip])


def test_sweep_bad_axis(runner):
    result = runner.invoke(
        main, ["sweep", "--catalog-id", "torus:n=1,r=1,p=0", "--axis", "nope:x=1"]
    )
    assert result.exit_code == 2


def test_tube_table_text(runner):
    result = runner.invoke(main, ["tube-table"])
    assert result.exit_code == 0
    assert "all rows match: True" in result.output
    assert result.output.count("stated unstable") == 12
    assert result.output.count("stated stable") == 4


def test_tube_table_json(runner):
    result = runner.invoke(main, ["tube-table", "--format", "json"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["all_match"] is True
    assert len(payload["rows"]) == 8


def test_verify_paper_subset(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(main, ["verify-paper", "--criteria", "5,12", "--out", str(out)])
    assert result.exit_code == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert [c["id"] for c in report["criteria"]] == [5, 12]


def test_verify_paper_csv(runner):
    result = runner.invoke(main, ["verify-paper", "--criteria", "5", "--format", "csv"])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert lines[0].startswith("criterion,check_id,")
    assert all(line.endswith(",True") for line in lines[1:])


def test_verify_paper_subset_determinism(runner, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    r1 = runner.invoke(main, ["verify-paper", "--criteria", "2,5,12", "--threads", "1", "--out", str(a)])
    r2 = runner.invoke(main, ["verify-paper", "--criteria", "2,5,12", "--threads", "3", "--out", str(b)])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_paper_coarse_grid_fails_with_diagnostics(runner, tmp_path):
    out = tmp_path / "coarse.json"
    result = runner.invoke(main, ["verify-paper", "--criteria", "6", "--grid", "8", "--out", str(out)])
    assert result.exit_code == 1
    assert "FAILED checks" in result.output
    report = json.loads(out.read_text())
    failing = [
        c for crit in report["criteria"] for c in crit["checks"] if not c["passed"]
    ]
    assert failing
    # the failing record carries the tolerance and the measured value
    assert any("rel 1e-9" in c["tolerance"] for c in failing)


def test_verify_paper_bad_criteria(runner):
    result = runner.invoke(main, ["verify-paper", "--criteria", "99"])
    assert result.exit_code == 2
    result = runner.invoke(main, ["verify-paper", "--criteria", "abc"])
    assert result.exit_code == 2


def test_bad_grid_option(runner):
    result = runner.invoke(main, ["verify-paper", "--criteria", "5", "--grid", "2"])
    assert result.exit_code == 2
