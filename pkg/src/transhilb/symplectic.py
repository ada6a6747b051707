"""The induced symplectic form, Poisson brackets, compatibility with A, and flows.

Conventions: Omega(u, v) = u^T W v.  On the roots chart Omega is the sum of
the surface forms of the points, so in Darboux charts W pairs (z_i, t_i) with
+1.  The Poisson tensor is P = -W^{-1}, which makes {z_i, t_i} = +1, and the
Hamiltonian vector field of f is P grad f.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from . import fd
from .endo import EndoMatrix, ah_tangent_basis, build_endo
from .points import (
    AHPoint,
    CoeffChartPoint,
    RootsChartPoint,
    ah_from_roots,
    ah_to_roots,
    coeff_to_roots,
)
from .poly import (
    ConfluentNodesError,
    MonicPoly,
    Poly,
    companion,
    divmod_monic,
    from_roots,
    lagrange_interpolate,
    reduce_mod,
)
from .surfaces import STANDARD_FORM, SurfaceKind, is_darboux

TOL_DET = 1e-10


class FlowError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SympMatrix:
    """Antisymmetric matrix of Omega; built from its strict upper triangle."""

    W: np.ndarray
    chart: str

    def __post_init__(self):
        U = np.triu(np.asarray(self.W, dtype=complex), 1)
        object.__setattr__(self, "W", U - U.T)

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.W))

    def inverse(self) -> np.ndarray:
        if abs(self.det) <= TOL_DET:
            raise np.linalg.LinAlgError("singular symplectic matrix")
        return np.linalg.inv(self.W)

    def poisson_tensor(self) -> np.ndarray:
        return -self.inverse()


# -- the form in the two charts --------------------------------------------------------


def omega_roots(pt: RootsChartPoint) -> SympMatrix:
    """Block-diagonal sum of the surface form at each point of the scheme."""
    W = np.zeros((2 * pt.d, 2 * pt.d), dtype=complex)
    for i in range(pt.d):
        blk = STANDARD_FORM if is_darboux(pt.kind) else STANDARD_FORM / pt.t[i]
        W[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = blk
    return SympMatrix(W, "roots")


def coeff_to_roots_jacobian(pt: CoeffChartPoint, rel_step: float = fd.REL_STEP) -> tuple[np.ndarray, RootsChartPoint]:
    """Finite-difference Jacobian of (Q, T) -> (z_1, t_1, ..., z_d, t_d)."""
    base = coeff_to_roots(pt)

    def f(x):
        moved = CoeffChartPoint.from_coords(pt.kind, x, pt.chart)
        return coeff_to_roots(moved, reference=base.z).coords()

    return fd.jacobian(f, pt.coords(), rel_step), base


def coeff_to_roots_jacobian_exact(pt: CoeffChartPoint) -> tuple[np.ndarray, RootsChartPoint]:
    """Jacobian of the same map from implicit differentiation of q(z_i) = 0.

    dz_i/dQ_j = z_i^j / q'(z_i), dt_i/dT_j = z_i^j, dt_i/dQ_j = T'(z_i) dz_i/dQ_j.
    """
    base = coeff_to_roots(pt)
    d = pt.d
    z = base.z
    powers = z[:, None] ** np.arange(d)[None, :]
    dz = powers / pt.q.derivative()(z)[:, None]
    J = np.zeros((2 * d, 2 * d), dtype=complex)
    J[0::2, :d] = dz
    J[1::2, :d] = pt.t_poly.derivative()(z)[:, None] * dz
    J[1::2, d:] = powers
    return J, base


def omega_pullback(pt: CoeffChartPoint, method: str = "exact") -> SympMatrix:
    """J^T W_roots J with J the Jacobian of the chart change.

    ``method="fd"`` uses finite differences (an independent oracle),
    ``"exact"`` the implicit-function formula.
    """
    if method == "fd":
        J, base = coeff_to_roots_jacobian(pt)
    elif method == "exact":
        J, base = coeff_to_roots_jacobian_exact(pt)
    else:
        raise ValueError(f"unknown method {method!r}")
    return SympMatrix(J.T @ omega_roots(base).W @ J, "coeff")


def omega_closed_form_d2(pt: CoeffChartPoint, printed_sign: bool = False) -> SympMatrix:
    """Closed form for d = 2 in coordinates (Q_0, Q_1, T_0, T_1).

    The pullback of dz_1^dt_1 + dz_2^dt_2 is dQ_0^dT_1 + dQ_1^dT_0 + Q_1 dQ_1^dT_1.
    ``printed_sign=True`` gives the opposite overall sign,
    Q_1 dT_1^dQ_1 + dT_1^dQ_0 + dT_0^dQ_1.
    """
    if pt.d != 2:
        raise ValueError("closed form is for d = 2")
    Q1 = pt.Q[1]
    W = np.zeros((4, 4), dtype=complex)
    W[0, 3] = 1.0
    W[1, 2] = 1.0
    W[1, 3] = Q1
    W = W - W.T
    return SympMatrix(-W if printed_sign else W, "coeff")


def power_sum_gradients(Q) -> np.ndarray:
    """Row k: gradient in Q of tr(C^(k+1)) / (k+1), C the companion matrix."""
    q = MonicPoly.from_chart_coeffs(Q)
    d = q.degree
    C = companion(q)
    G = np.zeros((d, d), dtype=complex)
    Ck = np.eye(d, dtype=complex)
    for k in range(d):
        # dC/dQ_j is the unit matrix at (j, d-1)
        G[k] = Ck[d - 1, :]
        Ck = Ck @ C
    return G


def omega_trace_form(pt: CoeffChartPoint) -> SympMatrix:
    """sum_k dP_k ^ dT_k with P_k = tr(C^(k+1))/(k+1); any d, Darboux fibers only.

    Since sum_i z_i^k dz_i = dP_k, this equals the pullback of sum dz_i ^ dt_i
    and stays defined on the discriminant.
    """
    if not is_darboux(pt.kind):
        raise ValueError("trace form needs a Darboux fiber coordinate")
    d = pt.d
    G = power_sum_gradients(pt.Q)
    W = np.zeros((2 * d, 2 * d), dtype=complex)
    W[:d, d:] = G.T
    return SympMatrix(W - W.T, "coeff")


def omega_coeff(pt: CoeffChartPoint) -> SympMatrix:
    """Omega in the coefficient chart.

    Off the discriminant: pullback from the roots chart.
    On it: the d = 2 closed form (Darboux fibers); otherwise an error.
    """
    try:
        return omega_pullback(pt)
    except ConfluentNodesError:
        if pt.d == 2 and is_darboux(pt.kind):
            return omega_closed_form_d2(pt)
        raise ValueError("no closed form implemented; sample away from discriminant") from None


# -- the ah model -------------------------------------------------------------------------


def ah_tangent_correction(pt: AHPoint, v: np.ndarray) -> np.ndarray:
    """Map a coordinate tangent (dp, dc) to the (p', q') solving p'p(-u)+p p'(-u) = 0.

    With p(u)p(-u) = 1 + k(u) q(u^2), a variation satisfies the condition after
    p' = dp - k p dq(u^2) / 2 (mod q(u^2)); q' = dq.
    """
    d = pt.d
    q2 = pt.q_u2
    k, _ = divmod_monic(pt.p * pt.p.reflect() - Poly([1.0]), q2)
    dp = Poly(v[: 2 * d])
    dq2 = Poly(v[2 * d :]).in_square()
    sigma = reduce_mod(dp - k * pt.p * dq2 * 0.5, q2).vector()
    return np.concatenate([sigma, v[2 * d :]])


def ah_from_roots_jacobian(r: RootsChartPoint) -> np.ndarray:
    """Exact Jacobian of (z_i, t_i) -> ambient coordinates (p, q lower coefficients).

    p interpolates a_i = exp(u_i t_i) at u_i and 1/a_i at -u_i, u_i = sqrt(z_i).
    Moving a node x_k changes p by -p'(x_k) L_k; changing a value y_k by L_k.
    """
    d = r.d
    u = np.sqrt(r.z)
    a = np.exp(u * r.t)
    nodes = np.concatenate([u, -u])
    p = lagrange_interpolate(nodes, np.concatenate([a, 1.0 / a]))
    dp = p.derivative()
    q = from_roots(r.z)
    J = np.zeros((3 * d, 2 * d), dtype=complex)
    for i in range(d):
        Lp = lagrange_interpolate(nodes, np.eye(2 * d)[i]).padded(2 * d)
        Lm = lagrange_interpolate(nodes, np.eye(2 * d)[d + i]).padded(2 * d)
        du = (r.t[i] * a[i] - dp(u[i])) * Lp + (dp(-u[i]) - r.t[i] / a[i]) * Lm
        J[: 2 * d, 2 * i] = du / (2 * u[i])
        J[: 2 * d, 2 * i + 1] = u[i] * a[i] * Lp - (u[i] / a[i]) * Lm
        # d q / d z_i = -q / (x - z_i)
        quo, _ = divmod_monic(q, MonicPoly.from_lower([-r.z[i]]))
        J[2 * d :, 2 * i] = -quo.padded(d)
    return J


def ah_chart_matrix(pt: AHPoint) -> tuple[np.ndarray, RootsChartPoint, np.ndarray]:
    """Matrix taking roots-chart tangent coordinates to coordinates in the ah basis.

    Returns (M, roots point, basis B).
    """
    r = ah_to_roots(pt)
    B = ah_tangent_basis(pt)
    J = ah_from_roots_jacobian(r)
    V = np.stack([ah_tangent_correction(pt, J[:, k]) for k in range(J.shape[1])], axis=1)
    return B.conj().T @ V, r, B


def omega_ah(pt: AHPoint) -> SympMatrix:
    """Omega expressed in the ah tangent basis used by ``build_endo``."""
    M, r, _ = ah_chart_matrix(pt)
    Minv = np.linalg.inv(M)
    return SympMatrix(Minv.T @ omega_roots(r).W @ Minv, "ah")


def omega(pt) -> SympMatrix:
    if isinstance(pt, RootsChartPoint):
        return omega_roots(pt)
    if isinstance(pt, CoeffChartPoint):
        return omega_coeff(pt)
    if isinstance(pt, AHPoint):
        return omega_ah(pt)
    raise TypeError(type(pt).__name__)


# -- structural checks ----------------------------------------------------------------------


def check_compatibility(E: EndoMatrix | np.ndarray, W: SympMatrix | np.ndarray) -> float:
    """||E^T W - W E||_F / (1 + ||W||_F); zero iff Omega(A., .) = Omega(., A.)."""
    M = E.M if isinstance(E, EndoMatrix) else np.asarray(E)
    Wm = W.W if isinstance(W, SympMatrix) else np.asarray(W)
    return float(np.linalg.norm(M.T @ Wm - Wm @ M) / (1.0 + np.linalg.norm(Wm)))


def closedness_residual(form: Callable[[np.ndarray], np.ndarray], x, rel_step: float = 1e-4) -> float:
    """max |d_a W_bc + d_b W_ca + d_c W_ab| over coordinate triples."""
    x = np.asarray(x, dtype=complex)
    n = x.size
    dW = fd.jacobian(lambda y: np.asarray(form(y)).ravel(), x, rel_step).reshape(n, n, n)
    worst = 0.0
    for a, b, c in combinations(range(n), 3):
        worst = max(worst, abs(dW[b, c, a] + dW[c, a, b] + dW[a, b, c]))
    return float(worst)


def lagrangian_residual(W: SympMatrix | np.ndarray, d: int) -> float:
    """Largest entry of the T-T block (fibers of Q are isotropic)."""
    Wm = W.W if isinstance(W, SympMatrix) else np.asarray(W)
    return float(np.max(np.abs(Wm[d:, d:])))


def roots_lagrangian_residual(W: SympMatrix) -> float:
    """Same check on the roots chart: the t-directions are isotropic."""
    Wm = W.W
    return float(np.max(np.abs(Wm[1::2, 1::2])))


# -- Poisson brackets and flows ------------------------------------------------------------


def coordinate(j: int) -> Callable[[CoeffChartPoint], complex]:
    """The j-th coefficient-chart coordinate as a function (Q_j for j < d)."""
    return lambda pt: pt.coords()[j]


def Q(j: int) -> Callable[[CoeffChartPoint], complex]:
    return lambda pt: pt.Q[j]


def _as_vector_fn(f, kind, chart):
    return lambda x: f(CoeffChartPoint.from_coords(kind, x, chart))


def poisson_bracket(f, g, pt: CoeffChartPoint, W: SympMatrix | None = None) -> complex:
    """{f, g} = grad f . P . grad g with P = -W^{-1}, gradients by finite differences."""
    W = omega_coeff(pt) if W is None else W
    P = W.poisson_tensor()
    x = pt.coords()
    gf = fd.gradient(_as_vector_fn(f, pt.kind, pt.chart), x)
    gg = fd.gradient(_as_vector_fn(g, pt.kind, pt.chart), x)
    return complex(gf @ P @ gg)


def bracket_table(pt: CoeffChartPoint, W: SympMatrix | None = None) -> np.ndarray:
    """Matrix of {Q_i, Q_j}."""
    W = omega_coeff(pt) if W is None else W
    P = W.poisson_tensor()
    x = pt.coords()
    G = np.stack([fd.gradient(_as_vector_fn(Q(i), pt.kind, pt.chart), x) for i in range(pt.d)])
    return G @ P @ G.T


def hamiltonian_vector_field(f, pt: CoeffChartPoint, form=omega_coeff) -> np.ndarray:
    try:
        W = form(pt)
        P = W.poisson_tensor()
    except (ConfluentNodesError, ValueError, np.linalg.LinAlgError) as exc:
        raise FlowError("flow crossed discriminant") from exc
    grad = fd.gradient(_as_vector_fn(f, pt.kind, pt.chart), pt.coords())
    return P @ grad


def rk4(field: Callable[[np.ndarray], np.ndarray], x0, time: float, steps: int) -> np.ndarray:
    """Classical fixed-step fourth-order Runge-Kutta."""
    x = np.asarray(x0, dtype=complex).copy()
    if time == 0 or steps == 0:
        return x
    h = time / steps
    for _ in range(steps):
        k1 = field(x)
        k2 = field(x + 0.5 * h * k1)
        k3 = field(x + 0.5 * h * k2)
        k4 = field(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def hamiltonian_flow(f, pt: CoeffChartPoint, time: float, steps: int, form=omega_coeff) -> CoeffChartPoint:
    """Integrate x' = P(x) grad f(x) in the coefficient chart."""
    kind, chart = pt.kind, pt.chart

    def field(x):
        return hamiltonian_vector_field(f, CoeffChartPoint.from_coords(kind, x, chart), form)

    return CoeffChartPoint.from_coords(kind, rk4(field, pt.coords(), time, steps), chart)


def ah_vector_field(j: int, pt: AHPoint) -> np.ndarray:
    """Flow of Q_j pushed into the ambient coordinates (p coefficients, q coefficients)."""
    try:
        r = ah_to_roots(pt)
    except ConfluentNodesError as exc:
        raise FlowError("flow crossed discriminant") from exc
    x = r.coords()
    H = lambda y: from_roots(y[0::2]).chart_coeffs[j]
    X = omega_roots(r).poisson_tensor() @ fd.gradient(H, x)
    F = lambda y: ah_from_roots(RootsChartPoint.from_coords(SurfaceKind.AH, y)).coords()
    return fd.directional(F, x, X)


def ah_flow(j: int, pt: AHPoint, time: float, steps: int) -> AHPoint:
    """Q_j-flow on the ah model, integrated in ambient polynomial coefficients."""
    x = rk4(lambda y: ah_vector_field(j, AHPoint.from_coords(y)), pt.coords(), time, steps)
    return AHPoint.from_coords(x)


def ah_compatibility(pt: AHPoint) -> tuple[float, float]:
    """(compatibility residual in the ah basis, mismatch between A_ah and M diag(z) M^-1)."""
    E = build_endo(pt)
    M, r, _ = ah_chart_matrix(pt)
    Minv = np.linalg.inv(M)
    W = SympMatrix(Minv.T @ omega_roots(r).W @ Minv, "ah")
    transported = M @ build_endo(r).M @ Minv
    mismatch = float(np.linalg.norm(transported - E.M) / (1.0 + np.linalg.norm(E.M)))
    return check_compatibility(E, W), mismatch


__all__ = [
    "SympMatrix",
    "FlowError",
    "omega_roots",
    "omega_coeff",
    "omega_pullback",
    "omega_closed_form_d2",
    "omega_trace_form",
    "omega_ah",
    "omega",
    "coeff_to_roots_jacobian",
    "coeff_to_roots_jacobian_exact",
    "check_compatibility",
    "closedness_residual",
    "lagrangian_residual",
    "poisson_bracket",
    "bracket_table",
    "hamiltonian_flow",
    "ah_flow",
    "ah_compatibility",
    "ah_chart_matrix",
    "ah_from_roots_jacobian",
    "ah_vector_field",
    "coordinate",
    "Q",
    "hamiltonian_vector_field",
    "rk4",
    "power_sum_gradients",
    "roots_lagrangian_residual",
]
