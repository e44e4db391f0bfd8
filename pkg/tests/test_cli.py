import csv
import json

import numpy as np
import pytest

from conftest import CONFIG_DIR
from src.core.exceptions import EXIT_CONFIG, EXIT_IO, EXIT_NOT_CONVERGED, EXIT_OK, ConfigError
from src.modules.cli.commands import main
from src.modules.cli.service import (
    example_config,
    load_config,
    load_config_text,
    parse_config,
    provenance,
    write_rows,
)
from src.modules.harness.schemas import StatRow
from src.shared.enums import OutputFormat

EXAMPLE2_TOML = CONFIG_DIR / "example2.toml"


def _read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return lines[0], list(csv.reader(lines[1:]))


def test_shipped_configs_parse():
    model, trigger, spec = parse_config(CONFIG_DIR / "example1.toml")
    assert model.n == 5
    assert model.cost.W[0, 0] == 3.919
    assert trigger.gamma == 0.3
    assert trigger.compulsory_period == 0.03
    assert spec.init_box.shape == (5, 2)

    model, trigger, spec = parse_config(EXAMPLE2_TOML)
    assert model.n == 3
    assert trigger.compulsory_period == 3.0
    assert spec.gamma_grid == (0.1, 0.2, 0.3, 0.4, 0.5)


def test_out_of_range_c_names_field_and_line():
    text = EXAMPLE2_TOML.read_text(encoding="utf-8").replace("c = 1.0", "c = 2.5")
    expected_line = text.splitlines().index("c = 2.5") + 1
    with pytest.raises(ConfigError) as caught:
        load_config_text(text)
    assert caught.value.field == "trigger.c"
    assert caught.value.line == expected_line
    assert "trigger.c" in str(caught.value)


def test_toml_syntax_error_reports_line():
    text = EXAMPLE2_TOML.read_text(encoding="utf-8") + "\n[broken\n"
    with pytest.raises(ConfigError) as caught:
        load_config_text(text)
    assert caught.value.line == len(text.splitlines())


def test_unknown_keys_are_rejected():
    text = EXAMPLE2_TOML.read_text(encoding="utf-8").replace("[trigger]\n", "[trigger]\nspeed = 1\n")
    with pytest.raises(ConfigError) as caught:
        load_config_text(text)
    assert caught.value.field == "trigger.speed"
    assert caught.value.line is not None


def test_wrong_x0_length_is_a_config_error(tmp_path):
    path = tmp_path / "short.toml"
    path.write_text(
        EXAMPLE2_TOML.read_text(encoding="utf-8").replace("x0 = [1.211, -0.772, -1.753]", "x0 = [1.0, 2.0]"),
        encoding="utf-8",
    )
    with pytest.raises(ConfigError) as caught:
        parse_config(path)
    assert caught.value.field == "experiment.x0"


def test_emit_config_round_trip(tmp_path):
    target = tmp_path / "resolved.toml"
    assert main(["emit-config", "--example", "example2", "--output", str(target)]) == EXIT_OK
    reloaded = load_config(target)
    assert reloaded == example_config("example2")
    assert reloaded.hash == example_config("example2").hash


def test_emit_config_to_stdout(capsys):
    assert main(["emit-config", "--config", str(EXAMPLE2_TOML)]) == EXIT_OK
    emitted = load_config_text(capsys.readouterr().out)
    assert emitted.hash == load_config(EXAMPLE2_TOML).hash


def test_shipped_config_matches_builtin_example():
    shipped = load_config(EXAMPLE2_TOML)
    builtin = example_config("example2")
    assert shipped.model == builtin.model


def test_run_writes_csv_and_json(tmp_path):
    out = tmp_path / "run"
    code = main(["run", "--config", str(EXAMPLE2_TOML), "--out", str(out), "--max-time", "5"])
    assert code == EXIT_OK

    first, rows = _read_csv(out / "events.csv")
    assert first.startswith("# config_hash=")
    assert "seed=20160101" in first and first.endswith("schema_version=1")
    assert rows[0] == ["neuron", "time", "cause", "state_1", "state_2", "state_3", "new_sampled_grad_component"]
    assert {row[2] for row in rows[1:]} <= {"autonomy", "compulsory"}

    _, trace = _read_csv(out / "trace.csv")
    assert trace[0] == ["t", "x_1", "x_2", "x_3", "lyapunov", "drift_sq", "fired"]
    times = [float(row[0]) for row in trace[1:]]
    assert times == sorted(times)
    assert times[-1] == 5.0

    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["header"]["schema_version"] == 1
    assert summary["header"]["config_hash"] == first.split()[1].removeprefix("config_hash=")
    row = summary["rows"][0]
    assert row["engine"] == "continuous"
    assert row["final_time"] == 5.0
    assert len(row["x_star"]) == 3

    events = json.loads((out / "events.json").read_text(encoding="utf-8"))
    assert len(events["rows"]) == len(rows) - 1


def test_run_outputs_are_byte_identical(tmp_path):
    argv = ["run", "--example", "example2", "--max-time", "5", "--dense"]
    assert main([*argv, "--out", str(tmp_path / "a")]) == EXIT_OK
    assert main([*argv, "--out", str(tmp_path / "b")]) == EXIT_OK
    for name in ("events.csv", "trace.csv", "summary.csv", "events.json", "trace.json", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_csv_floats_round_trip_exactly(tmp_path):
    out = tmp_path / "run"
    assert main(["run", "--config", str(EXAMPLE2_TOML), "--out", str(out), "--max-time", "2"]) == EXIT_OK
    _, csv_rows = _read_csv(out / "events.csv")
    json_rows = json.loads((out / "events.json").read_text(encoding="utf-8"))["rows"]
    for csv_row, json_row in zip(csv_rows[1:], json_rows):
        assert float(csv_row[1]) == json_row["time"]
        assert [float(v) for v in csv_row[3:6]] == json_row["state"]


def test_format_flag_limits_outputs(tmp_path):
    out = tmp_path / "csv-only"
    assert main(["run", "--example", "example2", "--max-time", "1", "--format", "csv", "--out", str(out)]) == EXIT_OK
    assert sorted(p.name for p in out.iterdir()) == ["events.csv", "summary.csv", "trace.csv"]


def test_discrete_engine_override(tmp_path):
    out = tmp_path / "discrete"
    argv = ["run", "--example", "example2", "--engine", "discrete", "--max-time", "3", "--format", "json"]
    assert main([*argv, "--out", str(out)]) == EXIT_OK
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["rows"][0]["engine"] == "discrete"


def test_empty_sweep_file_has_headers_only(tmp_path):
    header = provenance(example_config("example2"), 7)
    path = write_rows([], tmp_path / "sweep", OutputFormat.CSV, header, list(StatRow.model_fields))
    first, rows = _read_csv(path)
    assert first.endswith("seed=7 schema_version=1")
    assert rows == [list(StatRow.model_fields)]


def test_sweep_command_writes_one_row_per_gamma(tmp_path):
    out = tmp_path / "sweep"
    argv = ["sweep", "--example", "example2", "--runs", "1", "--max-time", "5", "--format", "csv", "--out", str(out)]
    assert main(argv) == EXIT_OK
    _, rows = _read_csv(out / "sweep.csv")
    assert rows[0][:3] == ["gamma", "eta_sim_mean", "eta_sim_min"]
    assert [float(row[0]) for row in rows[1:]] == [0.1, 0.2, 0.3, 0.4, 0.5]


def test_sweep_without_grid_is_a_config_error(tmp_path):
    argv = ["sweep", "--example", "example2_smalltheta", "--out", str(tmp_path)]
    assert main(argv) == EXIT_CONFIG


def test_require_convergence_exit_code(tmp_path):
    argv = ["run", "--example", "example2", "--max-time", "0.5", "--require-convergence", "--out", str(tmp_path)]
    assert main(argv) == EXIT_NOT_CONVERGED


def test_invalid_config_exit_code(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text(EXAMPLE2_TOML.read_text(encoding="utf-8").replace("c = 1.0", "c = 2.5"), encoding="utf-8")
    assert main(["validate", "--config", str(bad)]) == EXIT_CONFIG


def test_inadmissible_gamma_without_override_fails(tmp_path):
    strict = tmp_path / "strict.toml"
    strict.write_text(
        EXAMPLE2_TOML.read_text(encoding="utf-8").replace("allow_inadmissible_gamma = true", "allow_inadmissible_gamma = false"),
        encoding="utf-8",
    )
    assert main(["run", "--config", str(strict), "--out", str(tmp_path / "out")]) == EXIT_CONFIG
    argv = ["run", "--config", str(strict), "--allow-inadmissible-gamma", "--max-time", "1", "--out", str(tmp_path / "out")]
    assert main(argv) == EXIT_OK


def test_unwritable_output_exit_code(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    argv = ["run", "--example", "example2", "--max-time", "1", "--out", str(blocker / "nested")]
    assert main(argv) == EXIT_IO


def test_missing_config_exit_code(tmp_path):
    assert main(["validate", "--config", str(tmp_path / "absent.toml")]) == EXIT_IO


def test_validate_prints_hash(capsys):
    assert main(["validate", "--config", str(EXAMPLE2_TOML)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("ok: n=3")
    assert f"config_hash={load_config(EXAMPLE2_TOML).hash}" in out


def test_eta_command_prints_bound(capsys):
    assert main(["eta", "--config", str(EXAMPLE2_TOML)]) == EXIT_OK
    first = capsys.readouterr().out.splitlines()[0]
    assert first.startswith("eta=")
    assert 0 < float(first.removeprefix("eta=")) < 3.0


def test_override_m_bound_shrinks_eta(capsys):
    main(["eta", "--example", "example2"])
    default = float(capsys.readouterr().out.splitlines()[0].removeprefix("eta="))
    main(["eta", "--example", "example2", "--override-m-bound", "1000"])
    overridden = float(capsys.readouterr().out.splitlines()[0].removeprefix("eta="))
    assert overridden < default


def test_seed_override_changes_provenance(tmp_path):
    out = tmp_path / "seeded"
    argv = ["run", "--example", "example2", "--seed", "5", "--max-time", "1", "--format", "json", "--out", str(out)]
    assert main(argv) == EXIT_OK
    header = json.loads((out / "summary.json").read_text(encoding="utf-8"))["header"]
    assert header["seed"] == 5
    assert np.isfinite(json.loads((out / "summary.json").read_text(encoding="utf-8"))["rows"][0]["final_residual"])
