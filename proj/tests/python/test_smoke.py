import json
import math
from pathlib import Path

import pytest

import wallflux as w

ROOT = Path(__file__).resolve().parents[2]


def test_kernel_moments():
    assert w.kernel_moment("gas", 0) == pytest.approx(1.0, abs=1e-10)
    assert w.kernel_moment("monokinetic", 1) == pytest.approx(4.0 / 3.0, abs=1e-14)
    assert w.kernel_cumulative("monokinetic", 2.0) == pytest.approx(1.0, abs=1e-14)


def test_equilibrium_flux_is_constant():
    sol = w.solve(w.InitialData("equilibrium"), 10.0, 0.01)
    level = 1.0 / math.sqrt(2.0 * math.pi)
    assert max(abs(v - level) for v in sol.values) < 1e-6
    assert w.lp_error(sol, w.InitialData("equilibrium"), 5.0, 1.0) < 1e-8


def test_mass_is_conserved_by_the_limit():
    data = w.InitialData("bounded_bump")
    sol = w.solve(data, 20.0, 0.01)
    ball = 4.0 * math.pi / 3.0
    assert math.sqrt(2.0 * math.pi) * sol.mu_infinity * ball == pytest.approx(data.total_mass(), rel=1e-6)


def test_spectral_abscissa_matches_bisection():
    s = w.spectral_abscissa(3.0)
    assert s["alpha"] == pytest.approx(w.abscissa_by_bisection(3.0), abs=1e-8)
    assert w.count_zeros(-0.1, 0.1, -0.5, 0.5) == 1


def test_radiative_units():
    assert w.planck(1.0, 1.0) == pytest.approx(2.0 / (math.e - 1.0), rel=1e-14)
    assert w.stefan_boltzmann() == pytest.approx(2.0 * math.pi**5 / 15.0, rel=1e-14)
    assert w.temperature_from_flux(w.stefan_boltzmann() / math.pi) == pytest.approx(1.0, rel=1e-14)


def test_monte_carlo_total_weight():
    data = w.InitialData("concentrated_box", epsilon=0.3)
    tally = w.monte_carlo(data, 2000, seed=3, horizon=5.0)
    assert tally["total_weight"] == pytest.approx(data.total_mass(), rel=1e-12)
    assert len(tally["flux"]) == 10


def test_validation_error_names_the_field(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"problem": "gas", "horizon": 10.0}))
    with pytest.raises(w.ValidationError, match="dt"):
        w.run(cfg, tmp_path / "out")


def test_bounds_scenario_runs(tmp_path):
    summary = w.run(ROOT / "configs" / "bounds.json", tmp_path / "out")
    assert summary["problem"] == "bounds"
    assert summary["all_pass"] is True
    assert (tmp_path / "out" / "summary.json").exists()
