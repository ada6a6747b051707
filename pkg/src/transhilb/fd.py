"""Central finite differences for holomorphic maps of complex coordinates."""

from __future__ import annotations

from typing import Callable

import numpy as np

REL_STEP = 1e-5


def _steps(x: np.ndarray, rel_step: float) -> np.ndarray:
    return rel_step * (1.0 + np.abs(x))


def jacobian(
    f: Callable[[np.ndarray], np.ndarray],
    x,
    rel_step: float = REL_STEP,
    direction: complex = 1.0,
    absolute: bool = False,
) -> np.ndarray:
    """Complex Jacobian of ``f`` at ``x``, stepping along ``direction`` (1 or 1j).

    Five-point central stencil, so the truncation error is O(h^4).  For
    holomorphic ``f`` both directions give the same matrix.  With
    ``absolute=True`` the step is ``rel_step`` itself, not scaled by 1 + |x|.
    """
    x = np.asarray(x, dtype=complex)
    h = (np.full(x.shape, rel_step) if absolute else _steps(x, rel_step)) * direction
    cols = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h[k]
        cols.append(_central(f, x, e).ravel() / h[k])
    return np.stack(cols, axis=1)


def _central(f, x, e) -> np.ndarray:
    """h * f'(x) along e, fourth order."""
    f1 = np.asarray(f(x + e)) - np.asarray(f(x - e))
    f2 = np.asarray(f(x + 2 * e)) - np.asarray(f(x - 2 * e))
    return (8 * f1 - f2) / 12


def gradient(f: Callable[[np.ndarray], complex], x, rel_step: float = REL_STEP) -> np.ndarray:
    return jacobian(lambda y: np.atleast_1d(f(y)), x, rel_step)[0]


def directional(f: Callable[[np.ndarray], np.ndarray], x, v, h: float = REL_STEP) -> np.ndarray:
    """Derivative of ``f`` at ``x`` along ``v``."""
    x = np.asarray(x, dtype=complex)
    v = np.asarray(v, dtype=complex)
    return _central(f, x, h * v) / h


def holomorphy_defect(f: Callable[[np.ndarray], np.ndarray], x, rel_step: float = REL_STEP) -> float:
    """Largest disagreement between real-direction and imaginary-direction Jacobians."""
    Jr = jacobian(f, x, rel_step, 1.0)
    Ji = jacobian(f, x, rel_step, 1j)
    return float(np.max(np.abs(Jr - Ji)))
