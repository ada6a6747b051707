"""The tangent endomorphism A (multiplication by the base coordinate) and its spectrum."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .points import AHPoint, CoeffChartPoint, RootsChartPoint, SchemePoint
from .poly import MonicPoly, Poly, companion, from_roots, mult_matrix, reduce_mod

TOL_RANK = 1e-8
TOL_CLUSTER = 1e-6


class TangentDimensionError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class EndoMatrix:
    """Matrix of A at a point.

    ``basis`` is ``"coeff"`` (coordinates Q then T), ``"roots"`` (interleaved
    z_i, t_i), ``"ah"`` (orthonormal basis of the tangent solution space) or
    ``"std"`` for synthetic examples.
    """

    M: np.ndarray
    point: SchemePoint | None = None
    basis: str = "coeff"
    ah_basis: np.ndarray | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.M.shape[0]


def build_endo(pt: SchemePoint) -> EndoMatrix:
    if isinstance(pt, CoeffChartPoint):
        C = companion(pt.q)
        return EndoMatrix(scipy.linalg.block_diag(C, C), pt, "coeff")
    if isinstance(pt, RootsChartPoint):
        return EndoMatrix(np.diag(np.repeat(pt.z, 2)), pt, "roots")
    if isinstance(pt, AHPoint):
        B = ah_tangent_basis(pt)
        M = B.conj().T @ ah_ambient_endo(pt) @ B
        return EndoMatrix(M, pt, "ah", B)
    raise TypeError(f"not a scheme point: {type(pt).__name__}")


# -- the ah model ------------------------------------------------------------------


def ah_tangent_system(pt: AHPoint) -> np.ndarray:
    """Linear map (p', q') -> coefficients of p'(u)p(-u) + p(u)p'(-u) mod q(u^2).

    Unknowns: the 2d coefficients of p' then the d coefficients of q'.  Rows:
    the 2d residue coefficients (even and odd powers).
    """
    d = pt.d
    q2 = pt.q_u2
    p, pm = pt.p, pt.p.reflect()
    L = np.zeros((2 * d, 3 * d), dtype=complex)
    for k in range(2 * d):
        e = Poly.monomial(k)
        g = e * pm + p * e.reflect()
        L[:, k] = reduce_mod(g, q2).vector()
    return L


def ah_tangent_basis(pt: AHPoint, tol_rank: float = TOL_RANK) -> np.ndarray:
    """Orthonormal basis (columns, length 3d) of the tangent solution space."""
    L = ah_tangent_system(pt)
    _, s, vh = np.linalg.svd(L)
    rank = int(np.sum(s > tol_rank * s[0])) if s[0] > 0 else 0
    dim = L.shape[1] - rank
    if dim != 2 * pt.d:
        raise TangentDimensionError(
            f"tangent-space dimension failure: got {dim}, expected {2 * pt.d}"
        )
    return vh[rank:].conj().T


def ah_ambient_endo(pt: AHPoint) -> np.ndarray:
    """Multiplication by u^2 mod q(u^2) on p', by z mod q on q'."""
    u2 = reduce_mod(Poly.monomial(2), pt.q_u2)
    return scipy.linalg.block_diag(mult_matrix(u2), companion(pt.q))


def ah_invariance_residual(pt: AHPoint, B: np.ndarray | None = None) -> float:
    """Size of the part of A(span B) leaving span B."""
    B = ah_tangent_basis(pt) if B is None else B
    M = ah_ambient_endo(pt)
    MB = M @ B
    leak = MB - B @ (B.conj().T @ MB)
    return float(np.linalg.norm(leak, 2) / max(1.0, np.linalg.norm(M, 2)))


# -- spectra ---------------------------------------------------------------------------


class Cluster(NamedTuple):
    value: complex
    algebraic: int
    geometric: int
    blocks: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SpectralReport:
    eigenvalues: np.ndarray
    clusters: tuple[Cluster, ...]
    char_poly: MonicPoly
    min_poly: MonicPoly

    @property
    def geometric_multiplicities(self) -> list[int]:
        return [c.geometric for c in self.clusters]

    def to_dict(self) -> dict:
        return {
            "clusters": [
                {
                    "value": [c.value.real, c.value.imag],
                    "algebraic": c.algebraic,
                    "geometric": c.geometric,
                    "blocks": list(c.blocks),
                }
                for c in self.clusters
            ],
            "char_poly": [[c.real, c.imag] for c in self.char_poly.coeffs],
            "min_poly": [[c.real, c.imag] for c in self.min_poly.coeffs],
        }


def cluster_values(vals: np.ndarray, radius: float) -> list[np.ndarray]:
    """Single-linkage clusters of complex values at the given radius."""
    n = len(vals)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) < radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = [vals[idx] for idx in groups.values()]
    out.sort(key=lambda g: (g.mean().real, g.mean().imag))
    return out


def numerical_rank(M: np.ndarray, tol_rank: float = TOL_RANK, scale: float | None = None) -> int:
    """Count of singular values above ``tol_rank * scale`` (default: the largest)."""
    s = np.linalg.svd(M, compute_uv=False)
    ref = s[0] if scale is None else scale
    if s.size == 0 or ref == 0:
        return 0
    return int(np.sum(s > tol_rank * ref))


def spectral_analysis(
    E: EndoMatrix | np.ndarray, tol_cluster: float = TOL_CLUSTER, tol_rank: float = TOL_RANK
) -> SpectralReport:
    """Eigenvalue clusters, multiplicities, Jordan block sizes, char/min polynomials.

    Eigenvalues closer than ``tol_cluster * max(1, ||E||)`` are merged.  Block
    sizes come from the nullities of (E - lambda)^k, stopping once the nullity
    reaches the cluster size.
    """
    M = E.M if isinstance(E, EndoMatrix) else np.asarray(E, dtype=complex)
    n = M.shape[0]
    try:
        eig = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("eigensolver failure") from exc
    clusters = []
    min_factors = []
    eye = np.eye(n)
    radius = tol_cluster * max(1.0, np.linalg.norm(M, 2))
    for group in cluster_values(eig, radius):
        lam = complex(group.mean())
        m = len(group)
        N = M - lam * eye
        norm = max(np.linalg.norm(N, 2), np.linalg.norm(M, 2))
        P = eye.astype(complex)
        nullities = [0]
        while nullities[-1] < m and len(nullities) <= m:
            P = P @ N
            # powers of a near-nilpotent part shrink; compare against the k-th power scale
            k = len(nullities)
            nullities.append(n - numerical_rank(P, tol_rank, norm**k))
        # blocks of size >= k: nullity_k - nullity_{k-1}
        ge = [nullities[k] - nullities[k - 1] for k in range(1, len(nullities))] + [0]
        blocks = []
        for k in range(1, len(ge)):
            blocks += [k] * max(ge[k - 1] - ge[k], 0)
        blocks.sort(reverse=True)
        clusters.append(Cluster(lam, m, nullities[1], tuple(blocks)))
        min_factors += [lam] * (blocks[0] if blocks else 1)
    return SpectralReport(eig, tuple(clusters), from_roots(eig), from_roots(min_factors))


class SquareCheck(NamedTuple):
    passed: bool
    residual: float
    geometric: list[int]


def poly_residual(a: Poly, b: Poly) -> float:
    """Coefficient-wise difference scaled by 1 + max |coefficient|."""
    n = max(a.degree, b.degree) + 1
    diff = a.padded(n) - b.padded(n)
    return float(np.max(np.abs(diff)) / (1.0 + max(a.norm_inf(), b.norm_inf())))


def check_square_property(report: SpectralReport, tol: float = 1e-8) -> SquareCheck:
    """char(A) = min(A)^2 and every eigenspace has dimension 2."""
    sq = report.min_poly * report.min_poly
    if sq.degree != report.char_poly.degree:
        res = float("inf")
    else:
        res = poly_residual(report.char_poly, sq)
    geo = report.geometric_multiplicities
    return SquareCheck(res < tol and all(g == 2 for g in geo), res, geo)


def negative_diag_example(d: int, zvals) -> EndoMatrix:
    """diag(z_1, z_1, ..., z_d, z_d) on C^{2d} with its standard projection."""
    z = np.asarray(zvals, dtype=complex).ravel()
    if d < 2 or z.size != d:
        raise ValueError("need d >= 2 values")
    return EndoMatrix(np.diag(np.repeat(z, 2)), None, "std")
