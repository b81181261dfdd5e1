import json
from pathlib import Path

import pandas as pd
import pytest

from gohberg_bench.__main__ import main
from gohberg_bench.errors import ConfigError
from gohberg_bench.runner import ExperimentExecutor, load_config, parse_config, run_config

EXPERIMENTS = Path(__file__).resolve().parent.parent / "experiments"

SMALL = {
    "group": {"factors": [{"torus": {"grid": 65, "window": 32}}]},
    "symbols": [{"name": "sign"}, {"name": "decay"}],
    "filters": [{"type": "full"}],
    "schedule": [16, 32],
    "svd_ranks": [1, 2],
    "seed": 0,
}


def _write(tmp_path, config, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(config, indent=2))
    return path


def test_run_writes_reports_and_summary(tmp_path):
    path = _write(tmp_path, SMALL)
    out = tmp_path / "out"
    assert main(["run", str(path), "--out", str(out)]) == 0
    summary = pd.read_csv(out / "summary.csv")
    assert list(summary["id"]) == ["sign__full__M16", "sign__full__M32", "decay__full__M16", "decay__full__M32"]
    assert set(summary["verdict"]) == {"PASS"}
    for experiment in summary["id"]:
        assert (out / f"{experiment}.json").exists()
        assert (out / f"{experiment}.csv").read_text().startswith("level,D_est,lower,upper\n")


def test_runs_are_byte_identical(tmp_path):
    path = _write(tmp_path, SMALL)
    run_config(path, tmp_path / "a")
    run_config(path, tmp_path / "b")
    for name in ["summary.csv", "sign__full__M32.csv", "decay__full__M16.csv"]:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_experiment_order(tmp_path):
    filters = [{"type": "full"}, {"type": "cone", "directions": [[1]], "name": "right"}]
    config = parse_config(json.dumps({**SMALL, "filters": filters}))
    ids = [e.id for e in ExperimentExecutor(config, tmp_path).experiments()]
    assert ids[:4] == ["sign__full__M16", "sign__full__M32", "sign__right__M16", "sign__right__M32"]
    assert len(ids) == 8


def test_negative_control_is_skipped_not_failed(tmp_path):
    path = _write(tmp_path, {**SMALL, "symbols": [{"name": "alternating"}]})
    code, rows = run_config(path, tmp_path / "out")
    assert code == 0
    assert [row["verdict"] for row in rows] == ["SKIP", "SKIP"]


def test_decreasing_schedule_is_a_config_error(tmp_path, capsys):
    path = _write(tmp_path, {**SMALL, "schedule": [32, 16]})
    with pytest.raises(ConfigError) as info:
        load_config(path)
    lines = path.read_text().splitlines()
    assert '"schedule"' in lines[info.value.line - 1]
    assert "strictly increasing" in str(info.value)
    assert main(["run", str(path), "--out", str(tmp_path / "out")]) == 2
    assert "strictly increasing" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


def test_malformed_json_reports_the_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "group": {},\n  "symbols": [\n}\n')
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.line == 4
    assert str(info.value).startswith(f"{path}:4:")


@pytest.mark.parametrize(
    "change",
    [
        {"symbols": [{"name": "nope"}]},
        {"symbols": []},
        {"filters": [{"type": "cone"}]},
        {"group": {"factors": [{"torus": {"grid": 10, "window": 32}}]}},
        {"symbols": [{"separable": {"psi": {"name": "sign"}, "phi": {"name": "sign"}}}]},
    ],
)
def test_invalid_configs_exit_2(tmp_path, change):
    path = _write(tmp_path, {**SMALL, **change})
    assert main(["run", str(path)]) == 2


def test_missing_config_file(tmp_path):
    assert main(["run", str(tmp_path / "missing.json")]) == 2


def test_selftest_command():
    assert main(["selftest"]) == 0
    assert main(["selftest", "--inject-fault", "adjoint"]) == 1


def test_gallery_listing(capsys):
    assert main(["gallery", "--list"]) == 0
    out = capsys.readouterr().out
    for name in ["sign", "cone", "alternating", "cos_sqrt"]:
        assert name in out


def test_gallery_requires_the_list_flag():
    with pytest.raises(SystemExit) as info:
        main(["gallery"])
    assert info.value.code == 2


def test_seed_override(tmp_path):
    path = _write(tmp_path, {**SMALL, "symbols": [{"name": "sign"}], "schedule": [16]})
    code, rows = run_config(path, tmp_path / "out", seed=7)
    assert code == 0
    report = json.loads((tmp_path / "out" / "sign__full__M16.json").read_text())
    assert report["verdict"] == rows[0]["verdict"] == "PASS"


@pytest.mark.slow
@pytest.mark.parametrize("name", ["standard", "anisotropic", "compactness", "negative_control"])
def test_bundled_experiments(tmp_path, name):
    code, rows = run_config(EXPERIMENTS / f"{name}.json", tmp_path / name)
    assert code == 0, rows
    expected = {"SKIP"} if name == "negative_control" else {"PASS"}
    assert {row["verdict"] for row in rows} == expected
