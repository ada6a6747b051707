"""Example symplectic surfaces (S, p, omega) with Darboux charts adapted to p.

Every chart has coordinates (z, fiber) with z = p.  The fiber coordinate is:

* ``flat``  -- S = C x C, fiber t, omega = dz ^ dt.
* ``cstar`` -- S = C x C*, fiber w (nonzero), omega = dz ^ dw / w.
* ``xy``    -- S = C^2, z = xy, omega = dx ^ dy.  Chart ``U1`` (x != 0) uses
  chi1 = -log x, chart ``U2`` (y != 0) uses chi2 = log y; omega = dz ^ dchi.
* ``ah``    -- S = {x^2 - z y^2 = 1}.  With z = u^2 and a = x + u y the
  fiber coordinate is t = log(a) / u and omega = dz ^ dt = dz ^ da / (u a).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

STANDARD_FORM = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)

#: minimum ambient distance of samples from the critical set / fiber cuts
MARGIN = 0.1
FIBER_RADIUS = 2.0


class SurfaceKind(str, enum.Enum):
    FLAT = "flat"
    CSTAR = "cstar"
    XY = "xy"
    AH = "ah"


CHARTS = {
    SurfaceKind.FLAT: ("std",),
    SurfaceKind.CSTAR: ("lin",),
    SurfaceKind.XY: ("U1", "U2"),
    SurfaceKind.AH: ("log",),
}

#: critical sets B, for reports
CRITICAL_SETS = {
    SurfaceKind.FLAT: "empty",
    SurfaceKind.CSTAR: "empty",
    SurfaceKind.XY: "{(0, 0)}",
    SurfaceKind.AH: "ramification of z = u^2 at u = 0",
}


def default_chart(kind: SurfaceKind) -> str:
    return CHARTS[SurfaceKind(kind)][0]


def is_darboux(kind: SurfaceKind) -> bool:
    """Whether the stored fiber coordinate already gives omega = dz ^ dfiber."""
    return SurfaceKind(kind) is not SurfaceKind.CSTAR


@dataclass(frozen=True)
class SurfacePoint:
    kind: SurfaceKind
    chart: str
    base: complex
    fiber: complex


def _check_chart(kind: SurfaceKind, chart: str) -> None:
    kind = SurfaceKind(kind)
    if chart not in CHARTS[kind]:
        raise ValueError(f"chart {chart!r} does not belong to surface {kind.value!r}")


def xy_to_ambient(pt: SurfacePoint) -> tuple[complex, complex]:
    """Ambient (x, y) of an ``xy`` chart point."""
    z, chi = pt.base, pt.fiber
    if pt.chart == "U1":
        x = np.exp(-chi)
        return complex(x), complex(z * np.exp(chi))
    y = np.exp(chi)
    return complex(z * np.exp(-chi)), complex(y)


def xy_from_ambient(x: complex, y: complex, chart: str) -> SurfacePoint:
    if chart == "U1":
        if x == 0:
            raise ValueError("not in chart U1")
        return SurfacePoint(SurfaceKind.XY, "U1", x * y, complex(-np.log(x)))
    if y == 0:
        raise ValueError("not in chart U2")
    return SurfacePoint(SurfaceKind.XY, "U2", x * y, complex(np.log(y)))


def xy_fiber_shift(z, chi, source: str, target: str):
    """Fiber coordinate after changing chart; chi2 = chi1 + Log z."""
    if source == target:
        return chi
    return chi + np.log(z) if source == "U1" else chi - np.log(z)


def chart_transition(pt: SurfacePoint, target_chart: str) -> SurfacePoint:
    """Re-express ``pt`` in ``target_chart`` (principal branch of log)."""
    _check_chart(pt.kind, target_chart)
    if target_chart == pt.chart:
        return pt
    # only xy has more than one chart
    x, y = xy_to_ambient(pt)
    if min(abs(x), abs(y)) < MARGIN:
        raise ValueError("not in overlap")
    chi = xy_fiber_shift(pt.base, pt.fiber, pt.chart, target_chart)
    return SurfacePoint(pt.kind, target_chart, pt.base, complex(chi))


def symplectic_form_chart(kind: SurfaceKind, chart: str, fiber: complex | None = None) -> np.ndarray:
    """Matrix of omega in chart coordinates (z, fiber).

    Constant standard form for Darboux charts; for ``cstar`` the fiber is the
    linear coordinate w and the form is dz ^ dw / w, so ``fiber`` is required.
    """
    _check_chart(kind, chart)
    if is_darboux(kind):
        return STANDARD_FORM.copy()
    if fiber is None:
        raise ValueError("cstar form depends on the fiber value")
    return STANDARD_FORM / fiber


def sample_disk(rng: np.random.Generator, count: int, radius: float = FIBER_RADIUS) -> np.ndarray:
    r = radius * np.sqrt(rng.random(count))
    th = 2 * np.pi * rng.random(count)
    return r * np.exp(1j * th)


def sample_fiber_values(kind: SurfaceKind, chart: str, rng: np.random.Generator, count: int) -> np.ndarray:
    """Fiber coordinates uniform in the disk of radius 2, respecting chart domains."""
    _check_chart(kind, chart)
    if count < 1:
        raise ValueError("count must be >= 1")
    kind = SurfaceKind(kind)
    if kind is not SurfaceKind.CSTAR:
        if kind is SurfaceKind.AH:
            # |u t| < pi keeps a = exp(u t) on the principal log branch
            return sample_disk(rng, count, 1.5)
        return sample_disk(rng, count)
    out = np.empty(count, dtype=complex)
    n = 0
    while n < count:
        w = sample_disk(rng, 1)[0]
        if abs(w) >= MARGIN:
            out[n] = w
            n += 1
    return out
