import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from polaritonrdmft.cli.main import build_parser, main
from polaritonrdmft.cli.runner import CACHE_ENV, CHECKPOINT_NAME, execute, write_outputs
from polaritonrdmft.common.configs import RunConfig
from polaritonrdmft.file.saver import ArtifactSaver

DATA = Path(__file__).parent.parent / "data"


@pytest.fixture(autouse=True)
def no_cache(monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)


def test_ip_run_writes_artifacts(tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", str(DATA / "he_ip.toml"), "--out", str(out)]) == 0
    report = json.loads((out / "energy_report.json").read_text())
    assert report["method"] == "ip"
    assert report["total"] == pytest.approx(2.0 * report["eigenvalues"][0])
    eigenvalues = pd.read_csv(out / "ip_eigenvalues.csv")
    assert list(eigenvalues["nodes"]) == [0, 1, 2]
    rho = pd.read_csv(out / "rho_x.csv")
    assert 0.3 * rho["value"].sum() == pytest.approx(2.0, abs=1e-10)
    assert (out / "natural_orbitals.csv").exists()
    assert (out / "checkpoint.prdm").exists()


def test_inspect_checkpoint(tmp_path, capsys):
    out = tmp_path / "out"
    main(["run", "--config", str(DATA / "he_ip.toml"), "--out", str(out)])
    capsys.readouterr()
    assert main(["inspect", str(out / "checkpoint.prdm")]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["header"]["kind"] == "orbital_set"
    assert summary["arrays"]["orbitals"]["shape"] == [3, 41]


def test_inspect_rejects_other_files(tmp_path):
    path = tmp_path / "energy.json"
    path.write_text("{}")
    assert main(["inspect", str(path)]) == 2


def test_malformed_config_writes_nothing(tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", str(DATA / "malformed.toml"), "--out", str(out)]) == 2
    assert not out.exists()


def test_missing_config_file(tmp_path):
    assert main(["run", "--config", str(tmp_path / "absent.toml")]) == 2


def test_empty_scan_is_rejected(tmp_path):
    out = tmp_path / "out"
    assert main(["scan", "--config", str(DATA / "empty_scan.toml"), "--out", str(out)]) == 2
    assert not out.exists()


def test_basis_series(tmp_path):
    out = tmp_path / "out"
    assert main(["series", "--config", str(DATA / "he_es_series.toml"), "--out", str(out), "--jobs", "2"]) == 0
    frame = pd.read_csv(out / "series.csv")
    assert list(frame["value"]) == [1.0, 2.0]
    assert "wall_time" not in frame.columns
    assert np.isnan(frame["delta_energy"][0])
    # the ip density only depends on the occupied orbitals
    assert frame["delta_energy"][1] == pytest.approx(0.0, abs=1e-12)
    assert list(frame["threshold_met"]) == [False, True]
    assert (out / "series_timing.json").exists()
    assert (out / "series" / "ES=1" / "energy_report.json").exists()
    assert (out / "series" / "ES=2" / "ip_eigenvalues.csv").exists()


def test_bond_scan(tmp_path):
    out = tmp_path / "out"
    assert main(["scan", "--config", str(DATA / "h2_hf_scan.toml"), "--out", str(out)]) == 0
    frame = pd.read_csv(out / "scan.csv")
    assert list(frame["value"]) == [1.4, 1.6, 1.8]
    np.testing.assert_allclose(frame["total"], frame["energy"] + frame["repulsion"])
    np.testing.assert_allclose(frame["repulsion"], 1.0 / np.sqrt(frame["value"] ** 2 + 1.0))
    assert frame["converged"].all()
    assert (frame["n1"] == 2.0).all()
    summary = json.loads((out / "scan_summary.json").read_text())
    assert summary["rows"] == 3
    assert "minimum" in summary


def test_cache_reuses_basis(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "cache"))
    config = RunConfig.from_file(DATA / "he_ip.toml").copy_with(solver__method="hf", solver__profile="desk")
    first = execute(config)
    assert len(list((tmp_path / "cache").iterdir())) == 2
    second = execute(config)
    assert second.energy == pytest.approx(first.energy, abs=1e-10)
    assert second.converged


def test_bare_protocol_ledger(tmp_path):
    out = tmp_path / "out"
    assert main(["protocol", "--config", str(DATA / "he_protocol.toml"), "--out", str(out)]) == 0
    report = json.loads((out / "protocol_report.json").read_text())
    assert report["passed"]
    assert report["selected_ES"] is None
    steps = report["steps"]
    assert [step["step"] for step in steps] == [1, 2, 3, 4]
    assert [step["skipped"] for step in steps] == [False, False, True, True]
    assert steps[0]["series"] == ["protocol_step1_Lx.csv", "protocol_step1_dx.csv"]
    assert {check["name"] for check in steps[1]["checks"]} >= {"HF basis vs grid HF energy"}
    step2 = pd.read_csv(out / "protocol_step2_ES.csv")
    assert list(step2["value"]) == [2.0, 3.0]
    assert step2["converged"].all()


def test_profile_choices(tmp_path):
    parser = build_parser()
    assert parser.parse_args(["run", "--config", "he.toml", "--profile", "paper"]).profile == "paper"
    with pytest.raises(SystemExit):
        parser.parse_args(["run", "--config", "he.toml", "--profile", "strict"])
    out = tmp_path / "out"
    assert main(["run", "--config", str(DATA / "he_ip.toml"), "--profile", "paper", "--out", str(out)]) == 0
    assert (out / "energy_report.json").exists()


def test_dryrun_leaves_no_checkpoint(tmp_path, capsys):
    config = RunConfig.from_file(DATA / "he_ip.toml")
    outcome = execute(config)
    assert outcome.checkpoint is not None
    saver = ArtifactSaver(tmp_path / "out", dryrun=True)
    write_outputs(outcome, saver, config)
    assert not (tmp_path / "out").exists()
    assert saver.path(CHECKPOINT_NAME) in saver.written
    assert f"[Dryrun] {saver.path(CHECKPOINT_NAME)}" in capsys.readouterr().out

    saver = ArtifactSaver(tmp_path / "out")
    write_outputs(outcome, saver, config)
    assert saver.path(CHECKPOINT_NAME).exists()


def test_series_output_independent_of_jobs(tmp_path):
    outputs = {}
    for jobs in (1, 3):
        out = tmp_path / f"jobs{jobs}"
        argv = ["series", "--config", str(DATA / "he_rdmft_series.toml"), "--out", str(out), "--jobs", str(jobs)]
        assert main(argv) == 0
        outputs[jobs] = out
    assert (outputs[1] / "series.csv").read_bytes() == (outputs[3] / "series.csv").read_bytes()
    for row in ("ES=2", "ES=3", "ES=4"):
        for name in ("energy_report.json", "rho_x.csv"):
            first = (outputs[1] / "series" / row / name).read_bytes()
            assert first == (outputs[3] / "series" / row / name).read_bytes()
