import json

import pytest

import main
from main import RunConfig, run, build_parser, config_from_args, EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_IO
from modules.errors import ConfigurationError
from modules.reporting import VerificationRecord
from modules.settings_manager import SettingsManager
from modules.verification import OracleSettings


@pytest.fixture
def settings(tmp_path):
    return SettingsManager(tmp_path / "settings.json", environ={})


def make_config(settings, subcommand, **options):
    fmt = options.pop("fmt", "csv")
    out = options.pop("out", None)
    tol = options.pop("tol", None)
    return RunConfig(subcommand, 60, format=fmt, output_path=out, tol=tol, jobs=1,
                     options=options, settings=settings)


def test_unknown_subcommand_rejected(settings):
    with pytest.raises(ConfigurationError):
        RunConfig("plot", 60, settings=settings)


def test_constants_table(settings, capsys):
    assert run(make_config(settings, "constants")) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "name,value"
    assert lines[1].startswith("pi,3.14159265358979")


def test_polylog_value_and_expansion(settings, capsys):
    assert run(make_config(settings, "polylog", m=2, z="2")) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[1].startswith("2,2.0,2.4674011")
    assert run(make_config(settings, "polylog", m=3, expansion_order=4)) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "w_power,L_power,coefficient"
    assert out[1].startswith("0,0,1.2020569")


def test_eulersum_closed_form_only(settings, capsys):
    assert run(make_config(settings, "eulersum", p=1, q=2, fmt="json")) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["label"] == "S+-(1,2)"
    assert rows[0]["oracle"] == ""


def test_eulersum_parity_violation_is_usage_error(settings):
    assert run(make_config(settings, "eulersum", p=2, q=2)) == EXIT_USAGE


def test_integral_rows(settings, capsys):
    assert run(make_config(settings, "integral", n_list=[10, 20], tol="1e-30")) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("n,I_n,I_n0")
    assert lines[1].startswith("10,")
    assert lines[2].endswith(",ok")


def test_coeffs_last_row_prints_known_value(settings, capsys):
    assert run(make_config(settings, "coeffs", m=3, n_min=100, n_max=100, k_max=3)) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[-1].startswith("100,0.7329")


def test_coeffs_k_max_limit(settings):
    assert run(make_config(settings, "coeffs", m=3, n_max=20, k_max=9)) == EXIT_USAGE


def test_derive_writes_file(settings, tmp_path):
    out = tmp_path / "d.csv"
    assert run(make_config(settings, "derive", m=3, eps_order=3, out=str(out))) == EXIT_OK
    assert out.read_text(encoding="utf-8").startswith("i,j,coefficient\n-1,0,")


def test_unwritable_output_is_io_error(settings, tmp_path):
    out = tmp_path / "missing" / "c.csv"
    assert run(make_config(settings, "constants", out=str(out))) == EXIT_IO


def test_verify_all_exit_code_follows_records(settings, monkeypatch, capsys):
    monkeypatch.setattr(main, "verify_all", lambda precision, jobs, oracle: [VerificationRecord.check("x", True)])
    assert run(make_config(settings, "verify-all")) == EXIT_OK
    monkeypatch.setattr(main, "verify_all", lambda precision, jobs, oracle: [VerificationRecord.check("x", False)])
    assert run(make_config(settings, "verify-all")) == EXIT_FAILED
    assert capsys.readouterr().out.count("x,") == 2


def test_parser_accepts_flags_on_either_side():
    parser = build_parser()
    args = parser.parse_args(["--precision", "40", "coeffs", "--m", "4", "--format", "json"])
    assert args.precision == 40
    assert args.format == "json"
    assert args.m == 4
    args = parser.parse_args(["integral", "--n-list", "100,200", "--tol", "1e-30"])
    assert args.n_list == [100, 200]


def test_config_from_args_resolves_settings(tmp_path):
    parser = build_parser()
    args = parser.parse_args(["derive", "--m", "3", "--config", str(tmp_path / "none.json")])
    config = config_from_args(args, environ={"POLYASYM_PRECISION": "45"})
    assert config.precision_digits == 45
    assert config.format == "csv"
    assert config.options == {"m": 3, "eps_order": None}


def test_main_rejects_bad_usage():
    assert main.main(["coeffs", "--m", "5"]) == EXIT_USAGE
    assert main.main(["--precision", "10", "constants"]) == EXIT_USAGE


def test_verify_all_receives_oracle_settings(tmp_path, monkeypatch):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"oracle_terms": 5000, "oracle_levels": 4}), encoding="utf-8")
    seen = {}

    def fake_verify_all(precision, jobs, oracle):
        seen["oracle"] = oracle
        return [VerificationRecord.check("x", True)]

    monkeypatch.setattr(main, "verify_all", fake_verify_all)
    settings = SettingsManager(path, environ={})
    assert run(make_config(settings, "verify-all")) == EXIT_OK
    assert seen["oracle"] == OracleSettings(5000, 4)


def test_coeffs_for_weight_six(tmp_path):
    out = tmp_path / "m6.csv"
    assert main.main(["coeffs", "--m", "6", "--n-max", "20", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("n,S_n,C_n0,C_n1,C_n2,C_n3,")
    assert len(lines) == 21


def test_malformed_z_is_usage_error():
    assert main.main(["polylog", "--m", "2", "--z", "abc"]) == EXIT_USAGE
