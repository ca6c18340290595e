import math

import pytest

import ubmot


def test_first_moment():
    assert ubmot.moment(30, 3.6, 1) == pytest.approx(math.exp(-1.8), rel=1e-14)
    assert ubmot.moment(10, 0.5, 25) == pytest.approx(-0.0055679099541118384, rel=1e-12)


def test_forms_agree():
    a = ubmot.moment(12, 2.0, 7)
    for form in ("a8", "a8a", "m1", "schur"):
        assert ubmot.moment(12, 2.0, 7, form) == pytest.approx(a, rel=1e-9)


def test_sff():
    r = ubmot.sff_exact(20, 2.0, 1)
    assert r["value"] == pytest.approx(1 - math.exp(-2.0), abs=1e-12)
    assert r["regime"] == "finite-N"
    assert ubmot.sff_exact(10, 2.0, 5)["value"] == pytest.approx(4.0230387267233142, rel=1e-12)
    assert ubmot.sff_scaled_limit(0.25, 2.0)["value"] == pytest.approx(0.20374419046635405, rel=1e-12)
    assert ubmot.sum_rule_integral(2.0) == pytest.approx(math.pi * (1 + math.tanh(0.5)), abs=1e-9)


def test_density():
    assert ubmot.density(6.0, 1.0) == pytest.approx(1.0576285433190543, rel=1e-10)
    assert ubmot.density(6.0, 1.0, "fourier") == pytest.approx(1.0576285433190543, rel=1e-10)
    assert ubmot.support_edge(2.0) == pytest.approx(1 + math.pi / 2)
    mu_r, mu_p = ubmot.critical_mus(2.0)
    assert mu_r is None and mu_p == pytest.approx(ubmot.density(2.0, 0.0), rel=1e-8)


def test_errors():
    with pytest.raises(ubmot.DomainError):
        ubmot.moment(0, 1.0, 1)
    with pytest.raises(ValueError):
        ubmot.density(2.0, 0.0, "fourier")
    assert issubclass(ubmot.ConvergenceError, ubmot.StabilityError)


def test_tables():
    cols = ubmot.drp_curve(20, 2.0, [0.1, 0.5, 1.0, 1.5])
    assert list(cols) == ["mu", "k", "sff_term", "moment_term", "value", "method", "err_estimate"]
    assert len(cols["value"]) == 4
    g = ubmot.gue_drp_curve(40, [0.2, 0.8, 1.2])
    assert g["sff_term"][-1] == 40


def test_simulate_deterministic():
    t1, a1 = ubmot.simulate(5, 0.05, 20, seed=4)
    t2, a2 = ubmot.simulate(5, 0.05, 20, seed=4)
    assert a1 == a2 and len(t1) == 21 and len(a1[0]) == 5


def test_validate_small_suite():
    rep = ubmot.validate("closed-forms")
    assert rep["pass"] is True
    assert [c["criterion"] for c in rep["criteria"]] == [1, 4]
