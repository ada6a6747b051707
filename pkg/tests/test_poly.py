import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transhilb.poly import (
    ConfluentNodesError,
    MonicPoly,
    Poly,
    companion,
    coprime,
    divmod_monic,
    from_roots,
    hermite_interpolate,
    lagrange_interpolate,
    mult_matrix,
    reduce_mod,
    roots,
)

small = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


def q_chart(q1, q0):
    """z^2 - q1 z - q0."""
    return MonicPoly.from_chart_coeffs([q0, q1])


class TestPoly:
    def test_trimming_and_degree(self):
        assert Poly([1, 2, 0, 0]).degree == 1
        assert Poly([]).degree == -1
        assert Poly([0, 0]).degree == -1

    def test_arithmetic(self):
        a, b = Poly([1, 1]), Poly([-1, 1])
        np.testing.assert_allclose((a * b).coeffs, [-1, 0, 1])
        np.testing.assert_allclose((a + b).coeffs, [0, 2])
        assert (a - a).degree == -1

    def test_eval_derivative_reflect(self):
        p = Poly([1, 2, 3])
        assert p(2.0) == 17
        np.testing.assert_allclose(p.derivative().coeffs, [2, 6])
        np.testing.assert_allclose(p.reflect().coeffs, [1, -2, 3])
        np.testing.assert_allclose(p.in_square().coeffs, [1, 0, 2, 0, 3])

    def test_immutable(self):
        p = Poly([1, 2])
        with pytest.raises(ValueError):
            p.coeffs[0] = 5

    def test_monic_conventions(self):
        q = MonicPoly.from_chart_coeffs([2, 3])  # z^2 - 3z - 2
        np.testing.assert_allclose(q.coeffs, [-2, -3, 1])
        np.testing.assert_allclose(q.chart_coeffs, [2, 3])
        np.testing.assert_allclose(q.lower, [-2, -3])


class TestReduce:
    def test_square_reduces_to_modulus_tail(self):
        q1, q0 = 1.5 - 0.5j, 0.25 + 2j
        rep = reduce_mod(Poly.monomial(2), q_chart(q1, q0)).rep
        np.testing.assert_allclose(rep.padded(2), [q0, q1])

    def test_low_degree_unchanged(self):
        rep = reduce_mod(Poly.monomial(1), q_chart(3, 4)).rep
        np.testing.assert_allclose(rep.padded(2), [0, 1])

    def test_synthetic_division(self):
        q = MonicPoly([2, -3, 1])
        quo, rem = divmod_monic(Poly.monomial(3), q)
        np.testing.assert_allclose(rem.coeffs, [-6, 7])
        np.testing.assert_allclose(quo.coeffs, [3, 1])

    def test_trivial_modulus(self):
        with pytest.raises(ValueError, match="trivial modulus"):
            reduce_mod(Poly([1, 1]), MonicPoly([1]))

    @given(st.lists(small, min_size=1, max_size=9), st.lists(small, min_size=1, max_size=5))
    @settings(max_examples=60, deadline=None)
    def test_division_identity(self, a, lower):
        q = MonicPoly.from_lower(lower)
        A = Poly(a)
        quo, rem = divmod_monic(A, q)
        assert rem.degree < q.degree
        n = max(A.degree, 0) + 1
        np.testing.assert_allclose((quo * q + rem).padded(n), A.padded(n), atol=1e-9)


class TestMultMatrix:
    def test_companion_d2(self):
        q1, q0 = 0.7 + 0.1j, -1.2
        np.testing.assert_allclose(companion(q_chart(q1, q0)), [[0, q0], [1, q1]])

    def test_identity(self):
        q = MonicPoly([1, 2, 3, 1])
        np.testing.assert_allclose(mult_matrix(reduce_mod(Poly([1]), q)), np.eye(3))

    def test_eigenvalues(self):
        ev = np.sort_complex(np.linalg.eigvals(companion(MonicPoly([2, -3, 1]))))
        np.testing.assert_allclose(ev, [1, 2])

    @given(st.lists(small, min_size=2, max_size=5), st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=1, max_size=4))
    @settings(max_examples=40, deadline=None)
    def test_homomorphism(self, lower, f, g):
        q = MonicPoly.from_lower(lower)
        F, G = reduce_mod(Poly(f), q), reduce_mod(Poly(g), q)
        np.testing.assert_allclose(mult_matrix(F) @ mult_matrix(G), mult_matrix(F * G), atol=1e-8)


class TestRoots:
    def test_double_zero(self):
        np.testing.assert_allclose(roots(MonicPoly([0, 0, 1])), [0, 0], atol=1e-12)

    def test_quadratic(self):
        np.testing.assert_allclose(roots(MonicPoly([2, -3, 1])), [1, 2])

    @pytest.mark.parametrize("beta", [0.3, -2 + 1j, 10j, -7.5 + 6j])
    def test_double_root_reconstruction(self, beta):
        q = from_roots([beta, beta])
        r = roots(q)
        assert np.max(np.abs(from_roots(r).coeffs - q.coeffs)) < 1e-8

    def test_from_roots_chart_convention(self):
        b1, b2 = 0.5 + 1j, -1.5
        q = from_roots([b1, b2])
        np.testing.assert_allclose(q.chart_coeffs, [-b1 * b2, b1 + b2])
        np.testing.assert_allclose(from_roots([0, 0, 0]).coeffs, [0, 0, 0, 1])

    def test_round_trip_well_separated(self, rng):
        for _ in range(100):
            d = int(rng.integers(1, 9))
            # grid-jittered roots keep a separation of about 0.5
            base = np.arange(d) * 0.8 - 0.4 * d
            r = base + 0.1 * (rng.standard_normal(d) + 1j * rng.standard_normal(d))
            got = roots(from_roots(r))
            np.testing.assert_allclose(np.sort_complex(got), np.sort_complex(r), atol=1e-9)

    def test_sorted_output(self):
        r = roots(from_roots([2, -1j, 1j, -3]))
        assert list(r.real) == sorted(r.real)


class TestInterpolation:
    def test_linear(self):
        p = lagrange_interpolate([1 + 1j, -2], [3, 5j])
        assert p.degree <= 1
        assert abs(p(1 + 1j) - 3) < 1e-12 and abs(p(-2) - 5j) < 1e-12

    def test_constant(self):
        p = lagrange_interpolate([0.1, 0.7, -1j], [2.5, 2.5, 2.5])
        np.testing.assert_allclose(p.padded(3), [2.5, 0, 0], atol=1e-12)

    def test_quadratic(self):
        np.testing.assert_allclose(lagrange_interpolate([0, 1, 2], [1, 2, 5]).coeffs, [1, 0, 1], atol=1e-12)

    def test_confluent(self):
        with pytest.raises(ConfluentNodesError, match="confluent nodes"):
            lagrange_interpolate([1, 1], [0, 1])

    @given(st.lists(small, min_size=1, max_size=6, unique=True))
    @settings(max_examples=50, deadline=None)
    def test_interpolant_hits_values(self, nodes):
        x = np.array(nodes)
        if x.size > 1:
            diff = np.abs(x[:, None] - x[None, :]) + np.eye(x.size)
            if diff.min() < 0.2:
                return
        y = np.cos(x) + 1j * x
        p = lagrange_interpolate(x, y)
        np.testing.assert_allclose(p(x), y, atol=1e-8)

    def test_hermite(self):
        # f = z^3: f(1)=1, f'(1)=3, f(2)=8, f'(2)=12
        p = hermite_interpolate([1, 2], [[1, 3], [8, 12]])
        np.testing.assert_allclose(p.padded(4), [0, 0, 0, 1], atol=1e-10)


class TestCoprime:
    def test_simple(self):
        assert coprime(Poly([0, 1]), Poly([-1, 1]))
        assert not coprime(Poly([-1, 1]), from_roots([1, 2]))

    def test_shared_root(self, rng):
        r1 = np.concatenate([[0.5], rng.standard_normal(3)])
        r2 = np.concatenate([[0.5], rng.standard_normal(3) + 3])
        assert not coprime(from_roots(r1), from_roots(r2), 1e-8)
