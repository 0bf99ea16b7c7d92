import json

import pytest

from fdsec.cli import (EXIT_CONFIG, EXIT_IO, EXIT_OK, ConfigError, emit_csv,
                       main, parse_config)
from fdsec.experiments import DEFAULT_SEED, OutputRow
from fdsec.svg_plot import render_svg


MINIMAL_SPEC = {
    "command": "sweep",
    "spec": {
        "sweep": "gamma_rr_db",
        "grid": [-10.0, 0.0, 10.0],
        "budget": {"gamma_sr_db": 40, "gamma_rd_db": 40, "gamma_se_db": 10,
                   "gamma_re_db": 10, "gamma_rr_db": 0},
        "schemes": [{"id": "hdr"}, {"id": "sbj", "alpha": 0.5}],
        "n_samples": 1000,
    },
}


def row(scheme="HDR", x=0.0, p=0.5):
    return OutputRow(scheme=scheme, x_name="gamma_rr_db", x_value=x,
                     p_hat=p, ci_lo=max(0.0, p - 0.01),
                     ci_hi=min(1.0, p + 0.01), n=1000, seed=7)


class TestParseConfig:
    def test_minimal_sweep_document(self):
        cfg = parse_config(json.dumps(MINIMAL_SPEC))
        assert cfg.command == "sweep"
        assert cfg.preset_name is None
        assert cfg.spec.x_name == "gamma_rr_db"
        assert len(cfg.spec.schemes) == 2
        assert cfg.seed == DEFAULT_SEED

    def test_preset_document(self):
        cfg = parse_config('{"command": "sweep", "preset": "fig3", "seed": 9}')
        assert cfg.preset_name == "fig3"
        assert cfg.seed == 9

    def test_error_names_the_bad_alpha(self):
        doc = json.loads(json.dumps(MINIMAL_SPEC))
        doc["spec"]["schemes"][1]["alpha"] = 1.5
        with pytest.raises(ConfigError, match="alpha"):
            parse_config(json.dumps(doc))

    def test_preset_and_spec_both_present(self):
        doc = json.loads(json.dumps(MINIMAL_SPEC))
        doc["preset"] = "fig3"
        with pytest.raises(ConfigError, match="exactly one"):
            parse_config(json.dumps(doc))

    def test_neither_preset_nor_spec(self):
        with pytest.raises(ConfigError, match="exactly one"):
            parse_config('{"command": "sweep"}')

    def test_unknown_key_rejected(self):
        doc = json.loads(json.dumps(MINIMAL_SPEC))
        doc["spec"]["samples"] = 100
        with pytest.raises(ConfigError, match="samples"):
            parse_config(json.dumps(doc))

    def test_unknown_budget_key_rejected(self):
        doc = json.loads(json.dumps(MINIMAL_SPEC))
        doc["spec"]["budget"]["gamma_xx_db"] = 1
        with pytest.raises(ConfigError, match="gamma_xx_db"):
            parse_config(json.dumps(doc))

    def test_json_syntax_error_reports_position(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config('{"command": "sweep",}')

    def test_seed_validation(self):
        for bad in ('-1', str(1 << 64), 'true', '"7"'):
            with pytest.raises(ConfigError, match="seed"):
                parse_config('{"command": "validate", "seed": %s}' % bad)

    def test_unknown_command(self):
        with pytest.raises(ConfigError, match="unknown command"):
            parse_config('{"command": "simulate"}')

    def test_unknown_preset_name(self):
        with pytest.raises(ConfigError, match="fig99"):
            parse_config('{"command": "sweep", "preset": "fig99"}')


class TestEmitCsv:
    def test_single_row_layout(self, tmp_path):
        path = tmp_path / "out.csv"
        emit_csv([row(p=1.0)], str(path))
        lines = path.read_text().split("\n")
        assert lines[0] == "scheme,x_name,x_value,sop,ci_lo,ci_hi,n,seed"
        assert lines[1] == "HDR,gamma_rr_db,0.000000,1.000000,0.990000,1.000000,1000,7"
        assert lines[2] == ""

    def test_metadata_comment_lines(self, tmp_path):
        path = tmp_path / "out.csv"
        emit_csv([row()], str(path), metadata={"seed": 7, "config": "{}"})
        lines = path.read_text().split("\n")
        assert lines[0] == "# config = {}"
        assert lines[1] == "# seed = 7"
        assert lines[2].startswith("scheme,")

    def test_repeat_writes_are_byte_identical(self, tmp_path):
        rows = [row(x=float(i), p=i / 10.0) for i in range(5)]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(rows, str(a))
        emit_csv(rows, str(b))
        assert a.read_bytes() == b.read_bytes()
        assert b"\r" not in a.read_bytes()

    def test_empty_rows_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_csv([], str(tmp_path / "out.csv"))


class TestRenderSvg:
    def test_one_polyline_per_scheme(self):
        rows = [row("SBJ", x, 0.01 * (i + 1)) for i, x in enumerate((0.0, 5.0))]
        rows += [row("C-FDR", x, 1.0) for x in (0.0, 5.0)]
        svg = render_svg(rows)
        assert svg.count("<polyline") == 2
        assert "SBJ" in svg and "C-FDR" in svg
        assert svg.startswith("<svg") or svg.startswith("<?xml")

    def test_empty_rows_rejected(self):
        with pytest.raises(ValueError):
            render_svg([])

    def test_mixed_sweep_variables_rejected(self):
        bad = [row("A", 0.0), OutputRow(scheme="A", x_name="alpha", x_value=0.5,
                                        p_hat=0.5, ci_lo=0.4, ci_hi=0.6,
                                        n=10, seed=0)]
        with pytest.raises(ValueError):
            render_svg(bad)


class TestMainEndToEnd:
    def test_sweep_config_to_files(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(MINIMAL_SPEC))
        out = tmp_path / "result.csv"
        code = main(["sweep", "--config", str(cfg_path),
                     "--out", str(out), "--svg"])
        assert code == EXIT_OK
        text = out.read_text()
        assert text.startswith("# config = ")
        # header + 3 grid points x 2 schemes + trailing newline + 2 comments
        assert len(text.strip().split("\n")) == 2 + 1 + 6
        svg = (tmp_path / "result.svg").read_text()
        assert svg.count("<polyline") == 2

    def test_preset_sweep_to_stdout(self, capsys):
        code = main(["sweep", "--preset", "fig6", "--seed", "3"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "scheme,x_name,x_value,sop,ci_lo,ci_hi,n,seed" in out
        assert out.count("\n") >= 23  # 22 rows + header

    def test_seed_override_changes_output(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(MINIMAL_SPEC))
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        main(["sweep", "--config", str(cfg_path), "--seed", "1", "--out", str(a)])
        main(["sweep", "--config", str(cfg_path), "--seed", "1", "--out", str(b)])
        main(["sweep", "--config", str(cfg_path), "--seed", "2", "--out", str(c)])
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() != c.read_bytes()

    def test_compare_command(self, tmp_path, capsys):
        cfg = {"command": "compare",
               "budget": {"gamma_sr_db": 40, "gamma_rd_db": 40,
                          "gamma_se_db": 10, "gamma_re_db": 10,
                          "gamma_rr_db": 0},
               "schemes": [{"id": "sbj", "alpha": 0.5},
                           {"id": "conventional-fdr"}],
               "n_samples": 2000}
        cfg_path = tmp_path / "cmp.json"
        cfg_path.write_text(json.dumps(cfg))
        assert main(["compare", "--config", str(cfg_path)]) == EXIT_OK
        out = capsys.readouterr().out
        assert "sop = 1.000000" in out  # the conventional scheme never hides

    def test_alpha_opt_command(self, tmp_path, capsys):
        cfg = {"command": "alpha-opt",
               "budget": {"gamma_sr_db": 40, "gamma_rd_db": 40,
                          "gamma_se_db": 10, "gamma_re_db": 10,
                          "gamma_rr_db": 0},
               "n_samples": 5000}
        cfg_path = tmp_path / "opt.json"
        cfg_path.write_text(json.dumps(cfg))
        assert main(["alpha-opt", "--config", str(cfg_path)]) == EXIT_OK
        out = capsys.readouterr().out
        alpha = float(out.split("alpha_star = ")[1].split("\n")[0])
        assert 0.0 < alpha < 1.0

    def test_bad_config_gives_exit_2(self, tmp_path, capsys):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text('{"command": "sweep", "preset": "fig99"}')
        assert main(["sweep", "--config", str(cfg_path)]) == EXIT_CONFIG
        assert "configuration error" in capsys.readouterr().err

    def test_missing_config_file_gives_exit_2(self, tmp_path):
        assert main(["sweep", "--config", str(tmp_path / "no.json")]) == EXIT_CONFIG

    def test_command_mismatch_gives_exit_2(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(MINIMAL_SPEC))
        assert main(["compare", "--config", str(cfg_path)]) == EXIT_CONFIG

    def test_unwritable_output_gives_exit_3(self, tmp_path, capsys):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(MINIMAL_SPEC))
        code = main(["sweep", "--config", str(cfg_path),
                     "--out", "/nonexistent-dir/out.csv"])
        assert code == EXIT_IO
        assert "I/O error" in capsys.readouterr().err

    def test_svg_without_out_gives_exit_2(self, capsys):
        assert main(["sweep", "--preset", "fig6", "--svg"]) == EXIT_CONFIG

    def test_validate_command_passes(self, capsys):
        assert main(["validate"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "[PASS]" in out
        assert "[FAIL]" not in out
