"""Config parsing, result tables, and the sweep CLI end to end."""

import json
import math

import pytest

from neontrap.cli import main
from neontrap.config import ConfigError, RunConfig, load_config
from neontrap.tables import (ResultTable, emit_quantity, format_value,
                             parse_quantity)

FAST_GRID = """\
[grid]
n_points = 4096
z_max = 40 nm
z_samples = 50
n_points_radial = 4096
"""


def write_config(tmp_path, body, name="run.ini"):
    path = tmp_path / name
    path.write_text(body)
    return str(path)


class TestQuantities:
    def test_parse_with_unit(self):
        assert parse_quantity("10 nm", "nm") == 10.0
        assert parse_quantity("-2.5e6 V/m", "V/m") == -2.5e6

    def test_inf_sentinel(self):
        assert parse_quantity("inf", "nm") == math.inf
        assert emit_quantity(math.inf, "nm") == "inf"

    def test_missing_unit_rejected(self):
        with pytest.raises(ValueError):
            parse_quantity("10", "nm")

    def test_wrong_unit_rejected(self):
        with pytest.raises(ValueError):
            parse_quantity("10 um", "nm")

    def test_dimensionless_must_be_bare(self):
        assert parse_quantity("1.244", None) == 1.244
        with pytest.raises(ValueError):
            parse_quantity("1.244 nm", None)

    def test_round_trip_lossless(self):
        for v in (0.23, 1.0 / 3.0, -44.3726, 9.12805346):
            assert parse_quantity(emit_quantity(v, "nm"), "nm") == pytest.approx(v, rel=1e-8)


class TestResultTable:
    def test_format_value(self):
        assert format_value(True) == "1"
        assert format_value(False) == "0"
        assert format_value(float("nan")) == "nan"
        assert format_value(-44.37264) == "-4.43726400e+01"
        assert format_value(3) == "3"

    def test_csv_round_trip(self):
        t = ResultTable(columns=[("L", "nm"), ("W_G", "meV"), ("bound", "")],
                        metadata={"command": "demo"})
        t.add_row(10.0, -44.3726, True)
        t.add_row(math.inf, float("nan"), False)
        back = ResultTable.from_csv(t.to_csv())
        assert back.columns == [("L", "nm"), ("W_G", "meV"), ("bound", "")]
        assert back.metadata["command"] == "demo"
        assert back.rows[0][0] == 10.0
        assert back.rows[0][1] == pytest.approx(-44.3726, rel=1e-8)
        assert math.isnan(back.rows[1][1])

    def test_row_arity_checked(self):
        t = ResultTable(columns=[("a", ""), ("b", "")])
        with pytest.raises(ValueError):
            t.add_row(1.0)

    def test_json_mirrors_schema(self):
        t = ResultTable(columns=[("z", "nm")], metadata={"command": "demo"})
        t.add_row(1.5)
        doc = json.loads(t.to_json())
        assert doc["columns"] == [{"name": "z", "unit": "nm"}]
        assert doc["metadata"]["command"] == "demo"
        assert doc["rows"] == [[1.5]]


class TestConfig:
    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.L == [10.0] and cfg.eps_neon == 1.244

    def test_full_parse(self, tmp_path):
        path = write_config(tmp_path, FAST_GRID + """
[sweep]
L = 5 nm, 10 nm, inf
E_ex = -1e6 V/m, 0 V/m, 1e6 V/m
""")
        cfg = load_config(path)
        assert cfg.L == [5.0, 10.0, math.inf]
        assert cfg.E_ex == [-1e6, 0.0, 1e6]
        assert cfg.n_points == 4096

    def test_unknown_section_rejected(self, tmp_path):
        path = write_config(tmp_path, "[plumbing]\nvalve = 3\n")
        with pytest.raises(ConfigError, match="unknown section"):
            load_config(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_config(tmp_path, "[sweep]\nwidth = 3 nm\n")
        with pytest.raises(ConfigError, match="unknown key"):
            load_config(path)

    def test_keys_case_sensitive(self, tmp_path):
        path = write_config(tmp_path, "[sweep]\nl = 10 nm\n")
        with pytest.raises(ConfigError, match="unknown key"):
            load_config(path)

    def test_missing_unit_rejected(self, tmp_path):
        path = write_config(tmp_path, "[sweep]\nL = 10\n")
        with pytest.raises(ConfigError, match=r"\[sweep\] L"):
            load_config(path)

    def test_semantic_validation(self, tmp_path):
        path = write_config(tmp_path, "[sweep]\nL0 = 5 nm\ndelta_L = 6 nm\n")
        with pytest.raises(ConfigError, match="delta_L"):
            load_config(path)

    def test_env_thread_override(self, monkeypatch):
        cfg = RunConfig(threads=2)
        monkeypatch.setenv("NEONTRAP_THREADS", "7")
        assert cfg.effective_threads() == 7
        monkeypatch.setenv("NEONTRAP_THREADS", "banana")
        with pytest.raises(ConfigError):
            cfg.effective_threads()

    def test_hash_ignores_output_and_threads(self):
        a = RunConfig(threads=1, out_path="a.csv")
        b = RunConfig(threads=8, out_path="b.json", out_format="json")
        c = RunConfig(L=[12.0])
        assert a.config_hash() == b.config_hash()
        assert a.config_hash() != c.config_hash()


class TestCliEndToEnd:
    def test_growth_runs(self, tmp_path):
        out = tmp_path / "growth.csv"
        assert main(["growth", "--out", str(out)]) == 0
        table = ResultTable.from_csv(out.read_text())
        assert table.metadata["command"] == "growth"
        names = table.column("quantity")
        assert "gibbs_thomson_coefficient" in names
        row = table.rows[names.index("gibbs_thomson_coefficient")]
        assert row[1] == pytest.approx(9.128, abs=0.01)
        assert (tmp_path / "growth.effective.ini").exists()

    def test_ground_sweep_values_and_order(self, tmp_path):
        cfg = write_config(tmp_path, FAST_GRID + "[sweep]\nL = 10 nm, 5 nm\nE_ex = 0 V/m\n")
        out = tmp_path / "sweep.csv"
        assert main(["ground-sweep", "--config", cfg, "--out", str(out)]) == 0
        table = ResultTable.from_csv(out.read_text())
        ls = table.column("L")
        assert ls == sorted(ls)  # rows emitted in sorted (L, E) order
        w10 = table.rows[ls.index(10.0)][2]
        assert w10 == pytest.approx(-44.6, abs=1.0)
        assert all(b == 1.0 for b in table.column("bound"))

    def test_unbound_row_flagged_not_dropped(self, tmp_path):
        cfg = write_config(tmp_path, FAST_GRID + "[sweep]\nL = 10 nm\nE_ex = -5e6 V/m\n")
        out = tmp_path / "sweep.csv"
        assert main(["ground-sweep", "--config", cfg, "--out", str(out)]) == 0
        table = ResultTable.from_csv(out.read_text())
        assert len(table.rows) == 1
        assert table.column("bound") == [0.0]
        assert math.isnan(table.rows[0][2])

    def test_potential_z_one_file_per_thickness(self, tmp_path):
        cfg = write_config(tmp_path, FAST_GRID + "[sweep]\nL = 5 nm, inf\n")
        out = tmp_path / "pot.csv"
        assert main(["potential-z", "--config", cfg, "--out", str(out)]) == 0
        assert (tmp_path / "pot_L5.csv").exists()
        assert (tmp_path / "pot_Linf.csv").exists()
        table = ResultTable.from_csv((tmp_path / "pot_L5.csv").read_text())
        z = table.column("z")
        v = table.column("V_total")
        assert z[0] == pytest.approx(0.23, rel=1e-6)
        assert all(a < 0.0 for a in v)

    def test_json_output(self, tmp_path):
        out = tmp_path / "growth.json"
        assert main(["growth", "--format", "json", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["metadata"]["command"] == "growth"

    def test_bad_config_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, "[sweep]\nL = ten nm\n")
        assert main(["growth", "--config", cfg]) == 2

    def test_missing_config_exits_2(self, tmp_path):
        assert main(["growth", "--config", str(tmp_path / "absent.ini")]) == 2

    def test_verify_round_trip_and_tamper(self, tmp_path):
        out = tmp_path / "growth.csv"
        assert main(["growth", "--out", str(out)]) == 0
        fresh = tmp_path / "fresh.csv"
        assert main(["verify", str(out), "--out", str(fresh)]) == 0
        text = out.read_text().replace("9.12805346e+00", "9.22805346e+00")
        out.write_text(text)
        assert main(["verify", str(out), "--out", str(fresh)]) == 3

    def test_byte_identical_across_thread_counts(self, tmp_path):
        cfg = write_config(tmp_path, FAST_GRID + "[sweep]\nL = 5 nm, 10 nm, 20 nm\nE_ex = 0 V/m, 1e6 V/m\n")
        out1, out4 = tmp_path / "t1.csv", tmp_path / "t4.csv"
        assert main(["ground-sweep", "--config", cfg, "--out", str(out1), "--threads", "1"]) == 0
        assert main(["ground-sweep", "--config", cfg, "--out", str(out4), "--threads", "4"]) == 0
        assert out1.read_bytes() == out4.read_bytes()

    def test_field_sweep_requires_single_geometry(self, tmp_path):
        cfg = write_config(tmp_path, FAST_GRID + "[sweep]\nR = 60 nm, 110 nm\n")
        assert main(["field-sweep", "--config", cfg,
                     "--out", str(tmp_path / "f.csv")]) == 2

    def test_lateral_profile_and_spectrum(self, tmp_path):
        cfg = write_config(tmp_path, FAST_GRID + """
[sweep]
R = 110 nm
delta_L = 0.5 nm
n_knots = 20
""")
        out = tmp_path / "lat.csv"
        assert main(["lateral", "--config", cfg, "--out", str(out)]) == 0
        spec = ResultTable.from_csv((tmp_path / "lat_spectrum.csv").read_text())
        assert spec.column("alpha") == [0.0, 1.0]
        du = spec.column("delta_U")[0]
        assert 1.0 <= du <= 100.0
        prof = ResultTable.from_csv((tmp_path / "lat_R110_dL0.5.csv").read_text())
        assert prof.column("V_par")[-1] == pytest.approx(0.0, abs=1e-4)

    def test_field_sweep_reports_asymmetry_and_fit(self, tmp_path):
        cfg = write_config(tmp_path, FAST_GRID + """
[sweep]
R = 110 nm
delta_L = 0.5 nm
n_knots = 20
E_ex = -1e6 V/m, 0 V/m, 1e6 V/m
""")
        out = tmp_path / "field.csv"
        assert main(["field-sweep", "--config", cfg, "--out", str(out)]) == 0
        table = ResultTable.from_csv(out.read_text())
        assert len(table.rows) == 3
        ratio = float(table.metadata["asymmetry_ratio"])
        assert ratio > 1.0  # negative fields tune the splitting harder
        assert float(table.metadata["harmonic_fit_hbar_omega0_ueV"]) > 0.0
