"""Dense complex polynomials and arithmetic in the quotient ring C[z]/(q).

Coefficients are stored lowest degree first.  The zero polynomial has
degree -1.  All objects are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Poly",
    "MonicPoly",
    "Residue",
    "ConfluentNodesError",
    "reduce_mod",
    "mult_matrix",
    "companion",
    "divmod_monic",
    "roots",
    "from_roots",
    "lagrange_interpolate",
    "hermite_interpolate",
    "coprime",
]


class ConfluentNodesError(ValueError):
    """Raised when interpolation or root separation needs distinct nodes."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Poly:
    """Univariate polynomial with complex coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray = ()):
        c = np.array(coeffs, dtype=complex).ravel()
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        self._c = _frozen(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "Poly":
        a = np.zeros(k + 1, dtype=complex)
        a[k] = c
        return cls(a)

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        out = np.zeros_like(x)
        for c in self._c[::-1]:
            out = out * x + c
        return out

    def padded(self, n: int) -> np.ndarray:
        """Coefficient vector of length ``n`` (zero padded)."""
        if self.degree >= n:
            raise ValueError(f"degree {self.degree} does not fit in {n} coefficients")
        out = np.zeros(n, dtype=complex)
        out[: len(self._c)] = self._c
        return out

    def __add__(self, other: "Poly") -> "Poly":
        other = as_poly(other)
        n = max(len(self._c), len(other._c))
        return Poly(_pad(self._c, n) + _pad(other._c, n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-self._c)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        if np.isscalar(other):
            return Poly(self._c * other)
        other = as_poly(other)
        if self.degree < 0 or other.degree < 0:
            return Poly()
        return Poly(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        if self.degree < 1:
            return Poly()
        return Poly(self._c[1:] * np.arange(1, len(self._c)))

    def reflect(self) -> "Poly":
        """The polynomial ``u -> p(-u)``."""
        signs = (-1.0) ** np.arange(len(self._c))
        return Poly(self._c * signs)

    def in_square(self) -> "Poly":
        """The polynomial ``u -> p(u**2)``."""
        if self.degree < 0:
            return Poly()
        c = np.zeros(2 * len(self._c) - 1, dtype=complex)
        c[::2] = self._c
        return Poly(c)

    def norm_inf(self) -> float:
        return float(np.max(np.abs(self._c))) if self.degree >= 0 else 0.0

    def __repr__(self) -> str:
        return f"{type(self).__name__}({np.array2string(self._c, precision=6)})"


class MonicPoly(Poly):
    """Monic polynomial; the leading coefficient is set to exactly 1."""

    __slots__ = ()

    def __init__(self, coeffs: Iterable[complex] | np.ndarray):
        c = np.array(coeffs, dtype=complex).ravel()
        nz = np.flatnonzero(c)
        if not nz.size:
            raise ValueError("zero polynomial cannot be monic")
        c = c[: nz[-1] + 1] / c[nz[-1]]
        c[-1] = 1.0
        self._c = _frozen(c)

    @classmethod
    def from_lower(cls, lower: Sequence[complex]) -> "MonicPoly":
        """``z**d + sum(lower[j] z**j)``."""
        return cls(np.append(np.asarray(lower, dtype=complex), 1.0))

    @classmethod
    def from_chart_coeffs(cls, Q: Sequence[complex]) -> "MonicPoly":
        """``z**d - sum(Q[j] z**j)``, the sign convention of the coefficient chart."""
        return cls.from_lower(-np.asarray(Q, dtype=complex))

    @property
    def lower(self) -> np.ndarray:
        return self._c[:-1]

    @property
    def chart_coeffs(self) -> np.ndarray:
        """``Q_0..Q_{d-1}`` with ``q = z**d - sum(Q_j z**j)``."""
        return -self._c[:-1]

    def in_square(self) -> "MonicPoly":
        return MonicPoly(Poly.in_square(self).coeffs)


def as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly(np.atleast_1d(np.asarray(x, dtype=complex)))


def _pad(c: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=complex)
    out[: len(c)] = c
    return out


@dataclass(frozen=True, eq=False)
class Residue:
    """An element of C[z]/(modulus), represented with degree < deg(modulus)."""

    modulus: MonicPoly
    rep: Poly

    def __post_init__(self):
        if self.rep.degree >= self.modulus.degree:
            raise ValueError("residue representative must have degree < modulus degree")

    @property
    def d(self) -> int:
        return self.modulus.degree

    def vector(self) -> np.ndarray:
        return self.rep.padded(self.d)

    def __mul__(self, other: "Residue") -> "Residue":
        return reduce_mod(self.rep * other.rep, self.modulus)

    def __add__(self, other: "Residue") -> "Residue":
        return Residue(self.modulus, self.rep + other.rep)


def _divmod_monic(a: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d = len(q) - 1
    rem = np.array(a, dtype=complex)
    if len(rem) <= d:
        return np.zeros(0, dtype=complex), rem
    quot = np.zeros(len(rem) - d, dtype=complex)
    for k in range(len(rem) - 1, d - 1, -1):
        c = rem[k]
        quot[k - d] = c
        rem[k - d : k + 1] -= c * q
        rem[k] = 0.0
    return quot, rem[:d]


def divmod_monic(a: Poly, q: MonicPoly) -> tuple[Poly, Poly]:
    """Quotient and remainder of ``a`` by the monic ``q``."""
    if q.degree < 1:
        raise ValueError("trivial modulus")
    quot, rem = _divmod_monic(as_poly(a).coeffs, q.coeffs)
    return Poly(quot), Poly(rem)


def reduce_mod(a: Poly, q: MonicPoly) -> Residue:
    """Remainder of ``a`` modulo the monic polynomial ``q``."""
    if q.degree < 1:
        raise ValueError("trivial modulus")
    return Residue(q, divmod_monic(a, q)[1])


def mult_matrix(f: Residue) -> np.ndarray:
    """Matrix of multiplication by ``f`` on C[z]/(q) in the basis 1, z, ..., z^(d-1).

    Column ``j`` holds the coefficients of ``f * z**j mod q``.  For ``f = z``
    this is the companion matrix of ``q``.
    """
    q = f.modulus
    d = q.degree
    M = np.zeros((d, d), dtype=complex)
    col = f.vector()
    for j in range(d):
        M[:, j] = col
        # multiply by z and reduce: shift up, fold the overflow back with q
        top = col[-1]
        col = np.concatenate(([0.0], col[:-1])) - top * q.coeffs[:-1]
    return M


def companion(q: MonicPoly) -> np.ndarray:
    """Companion matrix of ``q`` (multiplication by z)."""
    return mult_matrix(reduce_mod(Poly([0.0, 1.0]), q))


def roots(q: MonicPoly) -> np.ndarray:
    """Roots of ``q`` with multiplicity, sorted by (real, imag).

    Eigenvalues of the companion matrix, polished by one guarded Newton step.
    """
    if q.degree < 1:
        raise ValueError("trivial modulus")
    try:
        r = np.linalg.eigvals(companion(q))
    except np.linalg.LinAlgError as exc:
        raise RuntimeError("root extraction failed") from exc
    if not np.all(np.isfinite(r)):
        raise RuntimeError("root extraction failed")
    dq = q.derivative()
    val = q(r)
    der = dq(r)
    ok = np.abs(der) > 1e-8 * (1.0 + q.norm_inf())
    step = np.where(ok, val / np.where(ok, der, 1.0), 0.0)
    cand = r - step
    better = np.abs(q(cand)) < np.abs(val)
    r = np.where(better, cand, r)
    return r[np.lexsort((r.imag, r.real))]


def from_roots(rts: Sequence[complex]) -> MonicPoly:
    """Monic polynomial ``prod(z - r)``."""
    rts = np.asarray(rts, dtype=complex).ravel()
    if rts.size == 0:
        raise ValueError("need at least one root")
    c = np.array([1.0 + 0j])
    for r in rts:
        # c(z) * (z - r), coefficients lowest first
        c = np.concatenate(([0.0], c)) - r * np.concatenate((c, [0.0]))
    return MonicPoly(c)


def _check_distinct(nodes: np.ndarray, tol: float) -> None:
    if nodes.size < 2:
        return
    diff = np.abs(nodes[:, None] - nodes[None, :])
    np.fill_diagonal(diff, np.inf)
    scale = 1.0 + np.max(np.abs(nodes))
    if diff.min() <= tol * scale:
        raise ConfluentNodesError("confluent nodes")


def lagrange_interpolate(
    nodes: Sequence[complex], values: Sequence[complex], tol: float = 1e-12
) -> Poly:
    """Unique polynomial of degree < n through ``(nodes[i], values[i])``.

    Newton divided differences, expanded into the monomial basis.
    """
    x = np.asarray(nodes, dtype=complex).ravel()
    y = np.asarray(values, dtype=complex).ravel()
    if x.size != y.size or x.size == 0:
        raise ValueError("nodes and values must be nonempty and of equal length")
    _check_distinct(x, tol)
    n = x.size
    dd = y.copy()
    for k in range(1, n):
        dd[k:] = (dd[k:] - dd[k - 1 : -1]) / (x[k:] - x[: n - k])
    c = np.array([dd[-1]])
    for k in range(n - 2, -1, -1):
        # c(z) * (z - x_k) + dd_k
        c = np.concatenate(([0.0], c)) - x[k] * np.concatenate((c, [0.0]))
        c[0] += dd[k]
    return Poly(c)


def hermite_interpolate(
    nodes: Sequence[complex], data: Sequence[Sequence[complex]], tol: float = 1e-12
) -> Poly:
    """Polynomial matching value and derivatives at each node.

    ``data[i] = [f(x_i), f'(x_i), ...]``.  Solves the confluent Vandermonde
    system; intended for the small sizes used here.
    """
    x = np.asarray(nodes, dtype=complex).ravel()
    _check_distinct(x, tol)
    n = sum(len(row) for row in data)
    V = np.zeros((n, n), dtype=complex)
    rhs = np.zeros(n, dtype=complex)
    powers = np.arange(n)
    row = 0
    for xi, vals in zip(x, data):
        for k, v in enumerate(vals):
            # k-th derivative of z**j at xi
            coef = np.ones(n)
            for m in range(k):
                coef = coef * (powers - m)
            expo = np.maximum(powers - k, 0)
            V[row] = np.where(powers >= k, coef * xi**expo, 0.0)
            rhs[row] = v
            row += 1
    return Poly(np.linalg.solve(V, rhs))


def coprime(a: Poly, b: Poly, tol: float = 1e-8) -> bool:
    """True when ``a`` and ``b`` share no root, judged at tolerance ``tol``."""
    a, b = as_poly(a), as_poly(b)
    if a.degree < 0 or b.degree < 0:
        raise ValueError("coprime needs nonzero polynomials")

    def clear(f: Poly, g: Poly) -> bool:
        if g.degree < 1:
            return True
        r = roots(MonicPoly(g.coeffs))
        return bool(np.min(np.abs(f(r))) > tol * (1.0 + f.norm_inf()))

    return clear(a, b) and clear(b, a)
