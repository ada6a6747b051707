"""Points of the transverse Hilbert scheme in the roots and coefficient charts.

Roots chart: d pairs (z_i, t_i) with distinct base values.  Coefficient
chart: q(z) = z^d - sum(Q_j z^j) and the fiber polynomial T(z) = sum(T_j z^j)
with T(z_i) = t_i.  The ``ah`` surface is modelled by pairs (p(u), q(u^2))
with p(u) p(-u) = 1 mod q(u^2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .poly import (
    ConfluentNodesError,
    MonicPoly,
    Poly,
    companion,
    coprime,
    from_roots,
    hermite_interpolate,
    lagrange_interpolate,
    reduce_mod,
    roots,
)
from .surfaces import (
    SurfaceKind,
    default_chart,
    sample_disk,
    sample_fiber_values,
    xy_fiber_shift,
)

TOL_SEP = 1e-6
#: separation of sampled base values
SAMPLE_SEP = 0.1
BASE_RADIUS = 2.0
#: AH base values stay this far from the branch point z = 0
AH_MIN_BASE = 0.25


class Mode(str, enum.Enum):
    GENERIC = "generic"
    ONE_DOUBLE = "one_double"


def _arr(x) -> np.ndarray:
    a = np.array(x, dtype=complex).ravel()
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RootsChartPoint:
    kind: SurfaceKind
    z: np.ndarray
    t: np.ndarray
    chart: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", SurfaceKind(self.kind))
        object.__setattr__(self, "z", _arr(self.z))
        object.__setattr__(self, "t", _arr(self.t))
        if not self.chart:
            object.__setattr__(self, "chart", default_chart(self.kind))
        if self.z.shape != self.t.shape or self.z.size == 0:
            raise ValueError("need d >= 1 pairs (z_i, t_i)")

    @property
    def d(self) -> int:
        return self.z.size

    def coords(self) -> np.ndarray:
        """Interleaved (z_1, t_1, ..., z_d, t_d)."""
        out = np.empty(2 * self.d, dtype=complex)
        out[0::2] = self.z
        out[1::2] = self.t
        return out

    @classmethod
    def from_coords(cls, kind, x, chart: str = "") -> "RootsChartPoint":
        x = np.asarray(x, dtype=complex)
        return cls(kind, x[0::2], x[1::2], chart)


@dataclass(frozen=True, eq=False)
class CoeffChartPoint:
    kind: SurfaceKind
    Q: np.ndarray
    T: np.ndarray
    chart: str = ""

    def __post_init__(self):
        object.__setattr__(self, "kind", SurfaceKind(self.kind))
        object.__setattr__(self, "Q", _arr(self.Q))
        object.__setattr__(self, "T", _arr(self.T))
        if not self.chart:
            object.__setattr__(self, "chart", default_chart(self.kind))
        if self.Q.shape != self.T.shape or self.Q.size == 0:
            raise ValueError("Q and T must both have d >= 1 coefficients")

    @property
    def d(self) -> int:
        return self.Q.size

    @property
    def q(self) -> MonicPoly:
        return MonicPoly.from_chart_coeffs(self.Q)

    @property
    def t_poly(self) -> Poly:
        return Poly(self.T)

    def coords(self) -> np.ndarray:
        """(Q_0, ..., Q_{d-1}, T_0, ..., T_{d-1})."""
        return np.concatenate([self.Q, self.T])

    @classmethod
    def from_coords(cls, kind, x, chart: str = "") -> "CoeffChartPoint":
        x = np.asarray(x, dtype=complex)
        d = x.size // 2
        return cls(kind, x[:d], x[d:], chart)


@dataclass(frozen=True, eq=False)
class AHPoint:
    """(p(u), q) with deg p <= 2d - 1 and p(u) p(-u) = 1 mod q(u^2)."""

    p: Poly
    q: MonicPoly
    kind: SurfaceKind = field(default=SurfaceKind.AH)
    chart: str = "ah"

    @property
    def d(self) -> int:
        return self.q.degree

    @property
    def q_u2(self) -> MonicPoly:
        return self.q.in_square()

    def p_vector(self) -> np.ndarray:
        return self.p.padded(2 * self.d)

    def coords(self) -> np.ndarray:
        """(p_0, ..., p_{2d-1}, c_0, ..., c_{d-1}) with q = z^d + sum(c_j z^j)."""
        return np.concatenate([self.p_vector(), self.q.lower])

    @classmethod
    def from_coords(cls, x) -> "AHPoint":
        x = np.asarray(x, dtype=complex)
        d = x.size // 3
        return cls(Poly(x[: 2 * d]), MonicPoly.from_lower(x[2 * d :]))


SchemePoint = Union[RootsChartPoint, CoeffChartPoint, AHPoint]


def _match(values: np.ndarray, reference: np.ndarray) -> np.ndarray:
    cost = np.abs(reference[:, None] - values[None, :])
    _, cols = linear_sum_assignment(cost)
    return values[cols]


def _separation_ok(z: np.ndarray, tol: float) -> bool:
    try:
        lagrange_interpolate(z, np.zeros_like(z), tol=tol)
    except ConfluentNodesError:
        return False
    return True


def roots_to_coeff(pt: RootsChartPoint, tol_sep: float = TOL_SEP) -> CoeffChartPoint:
    """Vieta expansion of the base values and Lagrange interpolation of the fibers."""
    if pt.kind is SurfaceKind.AH:
        raise ValueError("ah points use ah_from_roots")
    try:
        T = lagrange_interpolate(pt.z, pt.t, tol=tol_sep)
    except ConfluentNodesError as exc:
        raise ConfluentNodesError("confluent point: use coefficient chart") from exc
    q = from_roots(pt.z)
    return CoeffChartPoint(pt.kind, q.chart_coeffs, T.padded(pt.d), pt.chart)


def coeff_to_roots(
    pt: CoeffChartPoint, tol_sep: float = TOL_SEP, reference: np.ndarray | None = None
) -> RootsChartPoint:
    """Roots of q paired with the fiber values T(root).

    Roots are sorted by (real, imag); with ``reference`` they are instead
    matched to the nearest reference base values (used by finite differences).
    """
    z = roots(pt.q)
    if reference is not None:
        z = _match(z, np.asarray(reference, dtype=complex))
    if not _separation_ok(z, tol_sep):
        raise ConfluentNodesError("confluent point: use coefficient chart")
    t = pt.t_poly(z)
    if pt.kind is SurfaceKind.CSTAR and np.min(np.abs(t)) <= tol_sep:
        raise ValueError("fiber-nonzero constraint violated: T vanishes at a root of Q")
    return RootsChartPoint(pt.kind, z, t, pt.chart)


# -- the ah model ---------------------------------------------------------------


def ah_from_roots(pt: RootsChartPoint) -> AHPoint:
    """(z_i, t_i) -> (p(u), q) with u_i = sqrt(z_i), p(+-u_i) = exp(+-u_i t_i)."""
    u = np.sqrt(pt.z)
    a = np.exp(u * pt.t)
    p = lagrange_interpolate(np.concatenate([u, -u]), np.concatenate([a, 1.0 / a]))
    return AHPoint(p, from_roots(pt.z))


def ah_to_roots(pt: AHPoint, reference: np.ndarray | None = None, tol_sep: float = TOL_SEP) -> RootsChartPoint:
    z = roots(pt.q)
    if reference is not None:
        z = _match(z, np.asarray(reference, dtype=complex))
    if not _separation_ok(z, tol_sep):
        raise ConfluentNodesError("confluent point: use coefficient chart")
    u = np.sqrt(z)
    t = np.log(pt.p(u)) / u
    return RootsChartPoint(SurfaceKind.AH, z, t)


def ah_unit_residual(pt: AHPoint) -> float:
    """Largest coefficient of p(u) p(-u) - 1 reduced mod q(u^2).

    Scaled by max(1, |p(u) p(-u)|): for clustered nodes p has large
    coefficients and the reduction loses digits in proportion.
    """
    prod = pt.p * pt.p.reflect()
    rem = reduce_mod(prod - Poly([1.0]), pt.q_u2).rep
    return rem.norm_inf() / max(1.0, prod.norm_inf())


# -- chart changes on the xy surface ------------------------------------------------


def log_residue(q: MonicPoly) -> np.ndarray:
    """Coefficients of Log(z) mod q (principal branch at each root)."""
    C = companion(q)
    e0 = np.zeros(q.degree, dtype=complex)
    e0[0] = 1.0
    return scipy.linalg.logm(C) @ e0


def coeff_chart_transition(pt: CoeffChartPoint, target_chart: str) -> CoeffChartPoint:
    """Move an ``xy`` coefficient-chart point between charts U1 and U2.

    chi2 = chi1 + Log z pointwise, so T2 = T1 + (Log z mod q); this also holds
    at confluent points where the roots chart is unavailable.
    """
    if pt.kind is not SurfaceKind.XY:
        raise ValueError("only the xy surface has several charts")
    if target_chart == pt.chart:
        return pt
    L = log_residue(pt.q)
    T = pt.T + L if pt.chart == "U1" else pt.T - L
    return CoeffChartPoint(pt.kind, pt.Q, T, target_chart)


def roots_chart_transition(pt: RootsChartPoint, target_chart: str) -> RootsChartPoint:
    if pt.kind is not SurfaceKind.XY:
        raise ValueError("only the xy surface has several charts")
    t = xy_fiber_shift(pt.z, pt.t, pt.chart, target_chart)
    return RootsChartPoint(pt.kind, pt.z, t, target_chart)


# -- sampling -----------------------------------------------------------------------


def _sample_bases(kind: SurfaceKind, count: int, rng: np.random.Generator) -> np.ndarray:
    out: list[complex] = []
    while len(out) < count:
        z = sample_disk(rng, 1, BASE_RADIUS)[0]
        if kind is SurfaceKind.AH and abs(z) < AH_MIN_BASE:
            continue
        if all(abs(z - w) >= SAMPLE_SEP for w in out):
            out.append(z)
    return np.array(out, dtype=complex)


def random_scheme_point(
    kind: SurfaceKind,
    d: int,
    rng: np.random.Generator,
    mode: Mode = Mode.GENERIC,
    chart: str = "",
) -> SchemePoint:
    """Random point on the GENERIC or ONE_DOUBLE stratum.

    GENERIC gives a roots-chart point (an ``AHPoint`` for ``ah``).  ONE_DOUBLE
    gives a coefficient-chart point whose q has exactly one double root.
    """
    kind = SurfaceKind(kind)
    mode = Mode(mode)
    if d < 1:
        raise ValueError("d must be >= 1")
    chart = chart or default_chart(kind)
    if mode is Mode.GENERIC:
        z = _sample_bases(kind, d, rng)
        t = sample_fiber_values(kind, chart, rng, d)
        rp = RootsChartPoint(kind, z, t, chart)
        return ah_from_roots(rp) if kind is SurfaceKind.AH else rp
    if d < 2:
        raise ValueError("a double point needs d >= 2")
    z = _sample_bases(kind, d - 1, rng)
    beta, simple = z[0], z[1:]
    q = from_roots(np.concatenate([[beta, beta], simple]))
    if kind is SurfaceKind.AH:
        return _ah_double(q, beta, simple, rng)
    vals = sample_fiber_values(kind, chart, rng, d - 1)
    slope = sample_disk(rng, 1, 1.0)[0]
    data = [[vals[0], slope]] + [[v] for v in vals[1:]]
    T = hermite_interpolate(np.concatenate([[beta], simple]), data)
    return CoeffChartPoint(kind, q.chart_coeffs, T.padded(d), chart)


def _ah_double(q: MonicPoly, beta: complex, simple: np.ndarray, rng) -> AHPoint:
    d = q.degree
    u0 = np.sqrt(beta)
    us = np.sqrt(simple)
    a = np.exp(u0 * sample_fiber_values(SurfaceKind.AH, "log", rng, 1)[0])
    b = sample_disk(rng, 1, 1.0)[0]
    nodes = [u0, -u0]
    data = [[a, b], [1.0 / a, b / a**2]]
    for u, tt in zip(us, sample_fiber_values(SurfaceKind.AH, "log", rng, d - 2) if d > 2 else []):
        ai = np.exp(u * tt)
        nodes += [u, -u]
        data += [[ai], [1.0 / ai]]
    return AHPoint(hermite_interpolate(nodes, data), q)


# -- validation ------------------------------------------------------------------------


class Constraint(NamedTuple):
    name: str
    residual: float
    passed: bool


def validate(pt: SchemePoint, tol: float = 1e-8, tol_sep: float = TOL_SEP) -> list[Constraint]:
    """Named constraint residuals; failures are reported, never raised."""
    out: list[Constraint] = []
    if isinstance(pt, AHPoint):
        out.append(Constraint("degree", float(pt.p.degree), pt.p.degree <= 2 * pt.d - 1))
        res = ah_unit_residual(pt)
        out.append(Constraint("unit-constraint", res, res < tol))
        return out
    finite = bool(np.all(np.isfinite(pt.coords())))
    out.append(Constraint("finite", 0.0 if finite else float("inf"), finite))
    if isinstance(pt, RootsChartPoint):
        diff = np.abs(pt.z[:, None] - pt.z[None, :])
        np.fill_diagonal(diff, np.inf)
        sep = float(diff.min()) if pt.d > 1 else float("inf")
        out.append(Constraint("separation", sep, sep > tol_sep))
        if pt.kind is SurfaceKind.CSTAR:
            m = float(np.min(np.abs(pt.t)))
            out.append(Constraint("fiber-nonzero", m, m > tol))
        return out
    if pt.kind is SurfaceKind.CSTAR:
        q, T = pt.q, pt.t_poly
        m = float(np.min(np.abs(T(roots(q))))) if T.degree >= 0 else 0.0
        out.append(Constraint("fiber-nonzero", m, m > tol))
        ok = T.degree >= 0 and coprime(T, q, tol)
        out.append(Constraint("coprime", m, bool(ok)))
    return out


def is_valid(pt: SchemePoint, tol: float = 1e-8) -> bool:
    return all(c.passed for c in validate(pt, tol))

