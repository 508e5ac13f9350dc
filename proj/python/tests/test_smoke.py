import math

import pytest

import henon


def test_exponents():
    assert henon.critical_exponent(3, 1.0) == 7.0
    assert henon.fractional_dimension(3, 0.0) == pytest.approx(3.0)
    assert henon.alpha_for_fast_decay(3, 6.0) == pytest.approx(1.0)
    assert henon.kelvin_beta(henon.ProblemParams(3, 1.0, 6.0)) == 0.0


def test_radial_solution():
    v = henon.solve_radial(henon.ProblemParams(3, 0.0, 3.0))
    assert len(v) == 2001
    assert v.u[-1] == pytest.approx(0.0, abs=1e-10)
    assert v.central_value > 0.0
    assert v.R0 == pytest.approx(6.89684862, rel=1e-8)
    assert henon.radial_residual_sup(v) <= 1e-7
    assert all(a > b for a, b in zip(v.u[1:-1], v.u[2:]))


def test_supercritical_is_rejected():
    with pytest.raises(henon.InvalidArgument):
        henon.solve_radial(henon.ProblemParams(3, 1.0, 7.5))


def test_spectral_sample_and_mode_zero():
    s = henon.spectral_sample(3, 1.0, 6.0)
    assert s.ok
    assert s.nu < 0.0
    assert s.gap <= 1e-6
    v = henon.solve_radial(henon.ProblemParams(3, 1.0, 6.0))
    assert abs(henon.mode_boundary_value(v, 0)) > 1e-3


def test_degenerate_exponent():
    ps = [5.0 + 0.025 * i for i in range(13)]
    entries = henon.find_pk(3, 2.05, ps, k_max=4)
    assert [e.k for e in entries] == [2]
    assert entries[0].p_k == pytest.approx(5.08906646, rel=1e-8)


def test_perturbed_solve():
    r = henon.perturbed_solve(henon.ProblemParams(3, 1.0, 5.0), kmax=8, rnodes=256)
    assert r.converged
    assert r.kappa < 1.0
    assert r.positivity_margin > 0.0
    with pytest.raises(henon.DegenerateExponent):
        henon.perturbed_solve(henon.ProblemParams(3, 2.05, 5.0890664639), map="bump(0,0,1)", kmax=8, rnodes=256)


def test_analysis():
    assert henon.pohozaev_residual(henon.ProblemParams(3, 2.0, 4.0)).relative_residual <= 1e-6
    r = henon.fast_decay_pipeline(3, 6.0)
    assert r.beta == 0.0
    assert math.isclose(r.decay_exponent, 1.0, rel_tol=0.01)


def test_cli(tmp_path):
    code, _, err = henon.run_cli(["radial", "--N", "3", "--alpha", "0", "--p", "3", "--out", str(tmp_path)])
    assert code == 0, err
    assert (tmp_path / "radial.csv").read_text().splitlines()[0] == "r,u,du"
    assert henon.run_cli(["radial", "--N", "3", "--alpha", "1", "--p", "7"])[0] == 4
