import numpy as np
import pytest

from transhilb.poly import ConfluentNodesError, Poly, roots
from transhilb.points import (
    AHPoint,
    CoeffChartPoint,
    Mode,
    RootsChartPoint,
    ah_from_roots,
    ah_to_roots,
    ah_unit_residual,
    coeff_chart_transition,
    coeff_to_roots,
    is_valid,
    random_scheme_point,
    roots_chart_transition,
    roots_to_coeff,
    validate,
)
from transhilb.surfaces import SurfaceKind


def test_roots_to_coeff_d2():
    b1, b2, t1, t2 = 0.3 + 1j, -1.1, 0.5, 2j
    c = roots_to_coeff(RootsChartPoint("flat", [b1, b2], [t1, t2]))
    np.testing.assert_allclose(c.Q, [-b1 * b2, b1 + b2])
    assert abs(c.t_poly(b1) - t1) < 1e-12 and abs(c.t_poly(b2) - t2) < 1e-12


def test_roots_to_coeff_d1():
    c = roots_to_coeff(RootsChartPoint("flat", [0.4j], [1.5]))
    np.testing.assert_allclose(c.Q, [0.4j])
    np.testing.assert_allclose(c.T, [1.5])


def test_coeff_to_roots_example():
    # q = z^2 - 3z + 2, T = z
    r = coeff_to_roots(CoeffChartPoint("flat", [-2, 3], [0, 1]))
    np.testing.assert_allclose(r.z, [1, 2])
    np.testing.assert_allclose(r.t, [1, 2])
    r1 = coeff_to_roots(CoeffChartPoint("flat", [0.7], [2j]))
    np.testing.assert_allclose([r1.z[0], r1.t[0]], [0.7, 2j])


def test_confluent_errors():
    with pytest.raises(ConfluentNodesError, match="use coefficient chart"):
        coeff_to_roots(CoeffChartPoint("flat", [-1, 2], [0, 1]))  # (z - 1)^2
    with pytest.raises(ConfluentNodesError):
        roots_to_coeff(RootsChartPoint("flat", [1, 1], [0, 2]))


def test_cstar_zero_fiber():
    # T vanishes at the root 1 of z^2 - 3z + 2
    pt = CoeffChartPoint("cstar", [-2, 3], [-1, 1])
    with pytest.raises(ValueError, match="fiber-nonzero"):
        coeff_to_roots(pt)
    assert not is_valid(pt)
    assert {c.name for c in validate(pt) if not c.passed} >= {"fiber-nonzero"}


@pytest.mark.parametrize("kind", list(SurfaceKind))
@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_round_trip(kind, d, rng):
    pt = random_scheme_point(kind, d, rng)
    if kind is SurfaceKind.AH:
        back = ah_from_roots(ah_to_roots(pt))
        np.testing.assert_allclose(back.coords(), pt.coords(), atol=1e-9)
        return
    back = coeff_to_roots(roots_to_coeff(pt), reference=pt.z)
    np.testing.assert_allclose(back.coords(), pt.coords(), atol=1e-9)


def test_generic_determinism_and_separation():
    a = random_scheme_point("flat", 3, np.random.default_rng(7))
    b = random_scheme_point("flat", 3, np.random.default_rng(7))
    np.testing.assert_array_equal(a.coords(), b.coords())
    diff = np.abs(a.z[:, None] - a.z[None, :]) + 10 * np.eye(3)
    assert diff.min() >= 0.1


@pytest.mark.parametrize("kind", ["flat", "cstar", "xy"])
def test_one_double(kind, rng):
    c = random_scheme_point(kind, 2, rng, Mode.ONE_DOUBLE)
    assert isinstance(c, CoeffChartPoint)
    Q0, Q1 = c.Q
    assert abs(Q1**2 + 4 * Q0) < 1e-12
    assert is_valid(c)
    c4 = random_scheme_point(kind, 4, rng, Mode.ONE_DOUBLE)
    r = roots(c4.q)
    close = np.abs(r[:, None] - r[None, :]) + np.eye(4)
    assert np.sum(close < 1e-6) == 2  # exactly one coincident pair


def test_one_double_needs_d2(rng):
    with pytest.raises(ValueError):
        random_scheme_point("flat", 1, rng, Mode.ONE_DOUBLE)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("mode", list(Mode))
def test_ah_construction(d, mode, rng):
    if mode is Mode.ONE_DOUBLE and d < 2:
        return
    pt = random_scheme_point("ah", d, rng, mode)
    assert isinstance(pt, AHPoint)
    assert pt.p.degree <= 2 * d - 1
    assert ah_unit_residual(pt) < 1e-8
    assert is_valid(pt)


def test_ah_perturbation_scales(rng):
    pt = random_scheme_point("ah", 2, rng)
    r3 = ah_unit_residual(AHPoint(pt.p + Poly([1e-3]), pt.q))
    r4 = ah_unit_residual(AHPoint(pt.p + Poly([1e-4]), pt.q))
    assert 1e-4 < r3 < 1e-2
    assert r3 / r4 == pytest.approx(10, rel=0.05)
    assert not is_valid(AHPoint(pt.p + Poly([1e-3]), pt.q))


def test_xy_coefficient_transition_matches_roots(rng):
    for _ in range(20):
        r = random_scheme_point("xy", 3, rng, chart="U1")
        c2 = coeff_chart_transition(roots_to_coeff(r), "U2")
        r2 = roots_chart_transition(r, "U2")
        np.testing.assert_allclose(coeff_to_roots(c2, reference=r.z).t, r2.t, atol=1e-9)
        back = coeff_chart_transition(c2, "U1")
        np.testing.assert_allclose(back.T, roots_to_coeff(r).T, atol=1e-10)


def test_xy_transition_at_double_point(rng):
    c = random_scheme_point("xy", 2, rng, Mode.ONE_DOUBLE, chart="U1")
    back = coeff_chart_transition(coeff_chart_transition(c, "U2"), "U1")
    np.testing.assert_allclose(back.T, c.T, atol=1e-6)


def test_coords_round_trip(rng):
    c = roots_to_coeff(random_scheme_point("cstar", 3, rng))
    same = CoeffChartPoint.from_coords(c.kind, c.coords(), c.chart)
    np.testing.assert_array_equal(same.coords(), c.coords())
    a = random_scheme_point("ah", 3, rng)
    np.testing.assert_array_equal(AHPoint.from_coords(a.coords()).coords(), a.coords())


def test_bad_shapes():
    with pytest.raises(ValueError):
        RootsChartPoint("flat", [1, 2], [1])
    with pytest.raises(ValueError):
        CoeffChartPoint("flat", [], [])
