"""Rebuilding the surface from (W, A, Omega): the fibration mu, the incidence cover,
the distribution D = Im(z - A), its leaf invariants and the recovered 2-form."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from . import fd
from .endo import TOL_RANK, build_endo, poly_residual, spectral_analysis
from .points import CoeffChartPoint
from .poly import MonicPoly, Poly, companion, divmod_monic, roots
from .surfaces import symplectic_form_chart
from .symplectic import FlowError, SympMatrix, omega_coeff, rk4

TOL_MU = 1e-6
FROBENIUS_STEP = 1e-5


class LiftError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class IncidencePoint:
    z: complex
    w: CoeffChartPoint
    multiplicity: int = 1


@dataclass(frozen=True, eq=False)
class DistributionFrame:
    base: IncidencePoint
    vectors: np.ndarray  # columns, orthonormal
    dim: int


class LeafCoordinates(NamedTuple):
    z: complex
    t: complex


def endo_matrix(x: np.ndarray) -> np.ndarray:
    """blockdiag(C, C) as a function of the coefficient-chart coordinates."""
    d = x.size // 2
    C = companion(MonicPoly.from_chart_coeffs(x[:d]))
    return scipy.linalg.block_diag(C, C)


def mu(pt: CoeffChartPoint, tol: float = TOL_MU) -> MonicPoly:
    """Minimal polynomial of A, read off the chart and checked against the spectrum."""
    q = pt.q
    spec = spectral_analysis(build_endo(pt))
    if spec.min_poly.degree != q.degree or poly_residual(spec.min_poly, q) > tol:
        raise ValueError("μ inconsistent with spectrum")
    return q


def incidence_fiber(pt: CoeffChartPoint) -> list[IncidencePoint]:
    """One incidence point per eigenvalue cluster of A."""
    spec = spectral_analysis(build_endo(pt))
    rts = roots(pt.q)
    out = []
    for c in spec.clusters:
        mult = c.algebraic // 2
        z = c.value
        if mult == 1:
            # polished root of q is more accurate than the eigenvalue mean
            z = complex(rts[np.argmin(np.abs(rts - z))])
        out.append(IncidencePoint(z, pt, mult))
    return out


def _require_simple(ip: IncidencePoint) -> None:
    if ip.multiplicity != 1:
        raise ValueError("only simple eigenvalues are supported")


def distribution_frame(ip: IncidencePoint, tol_rank: float = TOL_RANK) -> DistributionFrame:
    """Orthonormal basis of Im(z - A) at the base point."""
    _require_simple(ip)
    d = ip.w.d
    N = ip.z * np.eye(2 * d) - endo_matrix(ip.w.coords())
    U, s, _ = np.linalg.svd(N)
    ref = max(1.0, s[0]) if s.size else 1.0
    rank = int(np.sum(s > tol_rank * ref))
    if rank != 2 * d - 2:
        raise ValueError(f"distribution rank {rank}, expected {2 * d - 2}")
    return DistributionFrame(ip, U[:, :rank], rank)


def eigenvector_poly(q: MonicPoly, z: complex) -> Poly:
    """q(x) / (x - z): spans ker(z - C), normalized so that it takes value q'(z) at z."""
    quo, _ = divmod_monic(q, MonicPoly.from_lower([-z]))
    return quo


def kernel_basis(ip: IncidencePoint) -> np.ndarray:
    """Columns (r, 0) and (0, r) with r = q / (x - z); they span ker(z - A)."""
    d = ip.w.d
    r = eigenvector_poly(ip.w.q, ip.z).padded(d)
    K = np.zeros((2 * d, 2), dtype=complex)
    K[:d, 0] = r
    K[d:, 1] = r
    return K


# -- continued eigenvalue and leaf map -------------------------------------------------


def continued_root(x: np.ndarray, z_ref: complex, guard: float = 0.0) -> complex:
    """Root of q(x) nearest to ``z_ref``; FlowError if another root lies within ``guard``."""
    d = x.size // 2
    rts = roots(MonicPoly.from_chart_coeffs(x[:d]))
    dist = np.abs(rts - z_ref)
    k = int(np.argmin(dist))
    if guard > 0 and d > 1 and np.partition(np.abs(rts - rts[k]), 1)[1] < guard:
        raise FlowError("eigenvalue collision during continuation")
    return complex(rts[k])


def leaf_map(x: np.ndarray, z_ref: complex) -> np.ndarray:
    """(z, T(z)) with z the root continued from ``z_ref``."""
    d = x.size // 2
    z = continued_root(x, z_ref)
    return np.array([z, Poly(x[d:])(z)], dtype=complex)


def leaf_invariants(ip: IncidencePoint) -> LeafCoordinates:
    _require_simple(ip)
    z, t = leaf_map(ip.w.coords(), ip.z)
    return LeafCoordinates(complex(z), complex(t))


def leaf_drift(
    ip: IncidencePoint, direction: np.ndarray, time: float = 0.05, steps: int = 50
) -> float:
    """Change of the leaf invariants along the flow of w -> (z(w) - A(w)) u.

    The eigenvalue is continued by nearest matching at every stage; the flow is
    aborted if two roots come within ten steps of each other.
    """
    _require_simple(ip)
    u = np.asarray(direction, dtype=complex)
    h = abs(time) / max(steps, 1)
    state = {"z": ip.z}

    def field(x):
        z = continued_root(x, state["z"], guard=10 * h)
        return (z * np.eye(x.size) - endo_matrix(x)) @ u

    x = ip.w.coords()
    for _ in range(steps):
        x = rk4(field, x, time / steps, 1)
        state["z"] = continued_root(x, state["z"])
    start = leaf_map(ip.w.coords(), ip.z)
    end = leaf_map(x, state["z"])
    return float(np.max(np.abs(end - start)))


# -- Frobenius ------------------------------------------------------------------------


def _frame_columns(ip: IncidencePoint) -> np.ndarray:
    """Pivot columns of z - A at the base spanning D."""
    d = ip.w.d
    N = ip.z * np.eye(2 * d) - endo_matrix(ip.w.coords())
    _, _, piv = scipy.linalg.qr(N, pivoting=True)
    return piv[: 2 * d - 2]


def frobenius_residual(
    ip: IncidencePoint,
    h: float = FROBENIUS_STEP,
    extra: tuple[np.ndarray, np.ndarray] | None = None,
) -> float:
    """Largest part of a bracket of frame fields leaving the distribution.

    Frame fields are V_k(w) = (z(w) - A(w)) e_k for fixed pivot columns k;
    their Jacobians use central differences with absolute step ``h``.
    ``extra = (v, R)`` appends the affine field v + R (w - w0) to the frame
    (a negative control).
    """
    _require_simple(ip)
    d = ip.w.d
    if d == 1:
        return 0.0
    x0 = ip.w.coords()
    cols = _frame_columns(ip)
    base = ip.z * np.eye(2 * d) - endo_matrix(x0)
    scale = np.linalg.norm(base[:, cols], axis=0)

    def field(k, x):
        z = continued_root(x, ip.z)
        return (z * np.eye(2 * d) - endo_matrix(x))[:, cols[k]] / scale[k]

    vals = [field(k, x0) for k in range(cols.size)]
    jacs = [fd.jacobian(lambda x, k=k: field(k, x), x0, h, absolute=True) for k in range(cols.size)]
    if extra is not None:
        v, R = (np.asarray(a, dtype=complex) for a in extra)
        vals.append(v)
        jacs.append(R)
    span = np.stack(vals, axis=1)
    Qb, _ = np.linalg.qr(span)
    worst = 0.0
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            br = jacs[j] @ vals[i] - jacs[i] @ vals[j]
            leak = br - Qb @ (Qb.conj().T @ br)
            worst = max(worst, float(np.linalg.norm(leak)))
    return worst


def sabotaged_frobenius_residual(ip: IncidencePoint, rng: np.random.Generator, h: float = FROBENIUS_STEP) -> float:
    """Frobenius residual of D enlarged by a random affine vector field."""
    n = 2 * ip.w.d
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    R = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return frobenius_residual(ip, h, extra=(v / np.linalg.norm(v), R))


# -- linear-algebra consistency checks ------------------------------------------------


def left_annihilation_residual(ip: IncidencePoint) -> float:
    """Left eigenvectors of A for z paired (bilinearly) with the D frame."""
    frame = distribution_frame(ip)
    if frame.dim == 0:
        return 0.0
    A = endo_matrix(ip.w.coords())
    N = ip.z * np.eye(A.shape[0]) - A
    # y^T N = 0  <=>  N^T y = 0
    Y = np.linalg.svd(N.T)[2][frame.dim :].conj().T
    return float(np.max(np.abs(Y.T @ frame.vectors)))


def dmu_residual(ip: IncidencePoint, h: float = fd.REL_STEP) -> float:
    """How much moving along D changes mu(w)(z), by directional differences."""
    frame = distribution_frame(ip)
    d = ip.w.d
    x0 = ip.w.coords()

    def q_at_z(x):
        return MonicPoly.from_chart_coeffs(x[:d])(ip.z)

    worst = 0.0
    for v in frame.vectors.T:
        worst = max(worst, abs(complex(fd.directional(q_at_z, x0, v, h))))
    return worst


def omega_orthogonality_residual(ip: IncidencePoint, W: SympMatrix | None = None) -> float:
    """max |Omega(u, v)| over u in the D frame and v in ker(z - A) (unit vectors)."""
    W = omega_coeff(ip.w) if W is None else W
    K = kernel_basis(ip)
    K = K / np.linalg.norm(K, axis=0)
    frame = distribution_frame(ip)
    if frame.dim == 0:
        return 0.0
    return float(np.max(np.abs(frame.vectors.T @ W.W @ K)))


def eigenspace_transversality(pt: CoeffChartPoint) -> float:
    """Smallest, over eigenvalues, of the largest dmu-image of a unit eigenvector.

    A value above 1e-6 means no eigenspace sits inside ker(dmu).
    """
    d = pt.d
    worst = np.inf
    for ip in incidence_fiber(pt):
        if ip.multiplicity != 1:
            continue
        K = kernel_basis(ip)
        K = K / np.linalg.norm(K, axis=0)
        # dmu reads off the Q-block
        worst = min(worst, float(np.max(np.linalg.norm(K[:d], axis=0))))
    return float(worst)


# -- recovered form --------------------------------------------------------------------


def lift(ip: IncidencePoint, kernel_shift: complex = 0.0) -> np.ndarray:
    """A vector V in ker(z - A) moving the eigenvalue at unit speed.

    ``kernel_shift`` adds that multiple of the ker(dmu) direction (0, r).
    """
    _require_simple(ip)
    d = ip.w.d
    K = kernel_basis(ip)
    V = K[:, 0] + kernel_shift * K[:, 1]
    x0 = ip.w.coords()
    speed = complex(fd.directional(lambda x: continued_root(x, ip.z), x0, V))
    if abs(speed) < 1e-6 or np.linalg.norm(V[:d]) < 1e-12:
        raise LiftError("lift failure")
    return V / speed


def recovered_form(
    ip: IncidencePoint, W: SympMatrix | None = None, kernel_shift: complex = 0.0
) -> np.ndarray:
    """2x2 matrix of tau-bar in leaf coordinates (z, T(z)).

    tau(X, Y) = dz(X) alpha(Y) - dz(Y) alpha(X) with alpha = Omega(V, .), and
    X, Y are preimages of the leaf coordinate directions.
    """
    _require_simple(ip)
    W = omega_coeff(ip.w) if W is None else W
    V = lift(ip, kernel_shift)
    x0 = ip.w.coords()
    JL = fd.jacobian(lambda x: leaf_map(x, ip.z), x0)
    X = np.linalg.pinv(JL)  # columns map to e_z, e_t
    dz = JL[0]
    alpha = V @ W.W
    tau = np.outer(dz, alpha) - np.outer(alpha, dz)
    return X.T @ tau @ X


def surface_form(ip: IncidencePoint) -> np.ndarray:
    """The surface form in leaf coordinates, for comparison with ``recovered_form``."""
    t = leaf_invariants(ip).t
    return symplectic_form_chart(ip.w.kind, ip.w.chart, fiber=t)


def lift_independence(ip: IncidencePoint, shift: complex, W: SympMatrix | None = None) -> float:
    W = omega_coeff(ip.w) if W is None else W
    a = recovered_form(ip, W)
    b = recovered_form(ip, W, kernel_shift=shift)
    return float(np.max(np.abs(a - b)))


__all__ = [
    "IncidencePoint",
    "DistributionFrame",
    "LeafCoordinates",
    "LiftError",
    "mu",
    "incidence_fiber",
    "distribution_frame",
    "kernel_basis",
    "frobenius_residual",
    "sabotaged_frobenius_residual",
    "leaf_invariants",
    "leaf_drift",
    "left_annihilation_residual",
    "dmu_residual",
    "omega_orthogonality_residual",
    "eigenspace_transversality",
    "lift",
    "recovered_form",
    "surface_form",
    "lift_independence",
]
