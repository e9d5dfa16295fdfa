import io
import math

import numpy as np
import pytest

from benford_laplace import DomainError, run_experiment
from benford_laplace.experiments import DEFAULTS, load_config, resolve_config


class TestTable:
    def test_rows(self):
        data = run_experiment("table1")
        assert data.header == ("digit", "benford_term", "delta_max", "relative_error")
        assert [r[0] for r in data.rows] == list(range(1, 10))
        digit, term, dmax, rel = data.rows[0]
        assert (round(100 * term, 2), round(100 * dmax, 2), round(100 * rel, 1)) == (30.10, 2.97, 9.9)

    def test_other_base(self):
        data = run_experiment("table1", {"base": 3, "grid_points": 512})
        assert len(data.rows) == 2
        assert math.fsum(data.column("benford_term")) == pytest.approx(1.0)


class TestSweeps:
    def test_fig6_defaults(self):
        data = run_experiment("fig6")
        sigma, p = data.column("sigma"), data.column("probability")
        assert sigma[0] == 0.01 and sigma[-1] == 1.5 and sigma.size == 150
        # independent high-precision value of the decade sum at sigma = 1
        assert p[sigma == 1.0][0] == pytest.approx(0.28913107363264550, abs=1e-12)
        assert np.abs(p[sigma >= 1.0] - 0.3010).max() < 0.02
        assert abs(p[-1] - 0.3010) < np.abs(p[sigma <= 0.3] - 0.3010).max()

    def test_fig8_defaults(self):
        data = run_experiment("fig8")
        a, p = data.column("a"), data.column("probability")
        assert a[0] == 1.1 and a[-1] == 50.0 and a.size == 490
        assert p[a == 10.0][0] == pytest.approx(1 / 9, abs=1e-12)
        assert np.any(np.diff(np.sign(p - 0.3010)) != 0)
        assert np.all(data.column("benford_term") == pytest.approx(math.log10(2)))

    def test_grid_has_no_drift(self):
        data = run_experiment("fig8", {"start": 2.0, "stop": 3.0, "step": 0.1})
        assert list(data.column("a")) == [round(2.0 + 0.1 * k, 12) for k in range(11)]

    def test_parallel_matches_serial(self):
        config = {"stop": 5.0}
        serial = run_experiment("fig8", config)
        parallel = run_experiment("fig8", config, jobs=2)
        out_s, out_p = io.StringIO(), io.StringIO()
        serial.to_csv(out_s)
        parallel.to_csv(out_p)
        assert out_s.getvalue() == out_p.getvalue()

    def test_fig8_rejects_a_below_one(self):
        with pytest.raises(DomainError):
            run_experiment("fig8", {"start": 0.5})


class TestConfig:
    def test_load_and_resolve(self, tmp_path):
        path = tmp_path / "sweep.toml"
        path.write_text("# narrower scan\nstart = 0.5\nstop = 1.0\nstep = 0.05\n")
        cfg = resolve_config("fig6", load_config(path))
        assert cfg["start"] == 0.5 and cfg["mu"] == DEFAULTS["fig6"]["mu"]
        assert len(run_experiment("fig6", load_config(path)).rows) == 11

    def test_integer_keys_stay_integers(self):
        assert resolve_config("table1", {"grid_points": 1024.0})["grid_points"] == 1024

    def test_unknown_key(self):
        with pytest.raises(DomainError, match="unknown config key"):
            resolve_config("fig6", {"sigma": 1})

    def test_unknown_experiment(self):
        with pytest.raises(DomainError):
            run_experiment("fig7")

    def test_nested_tables_rejected(self, tmp_path):
        path = tmp_path / "nested.toml"
        path.write_text("[fig6]\nstart = 0.5\n")
        with pytest.raises(DomainError, match="flat"):
            load_config(path)

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("start = \n")
        with pytest.raises(DomainError):
            load_config(path)

    def test_bad_grid(self):
        with pytest.raises(DomainError):
            run_experiment("fig6", {"step": 0.0})


def test_csv_format(tmp_path):
    path = tmp_path / "table.csv"
    run_experiment("table1", {"grid_points": 256}).to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "digit,benford_term,delta_max,relative_error"
    first = lines[1].split(",")
    assert first[0] == "1" and float(first[1]) == pytest.approx(math.log10(2))
