"""Shared numerical helpers: differentiation, quadrature, phase unwrapping.

Energy derivatives use central differences with one Richardson step (the
five-point stencil), which keeps the truncation error at O(h^4) without
requiring analytic derivatives.  Quadrature is adaptive Simpson with
explicit subdivision at caller-supplied breakpoints, so piecewise-smooth
integrands (wavefunction density across layer interfaces) never straddle a
kink.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Sequence

import numpy as np

from .errors import NumericError

__all__ = [
    "derivative",
    "second_derivative",
    "adaptive_simpson",
    "unwrap_phases",
]


def derivative(f: Callable[[float], complex], x: float, h: float) -> complex:
    """d f / d x via the 5-point Richardson-extrapolated central difference.

    Works for real- or complex-valued f; error O(h^4) for smooth f.
    """
    if h <= 0:
        raise NumericError(f"step must be positive, got {h}")
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12.0 * h)


def second_derivative(f: Callable[[float], float], x: float, h: float) -> float:
    """d^2 f / d x^2, central five-point stencil, error O(h^4)."""
    if h <= 0:
        raise NumericError(f"step must be positive, got {h}")
    return (
        -f(x + 2 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2 * h)
    ) / (12.0 * h * h)


def _simpson(fa: complex, fm: complex, fb: complex, width: float) -> complex:
    return width / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    if depth <= 0:
        raise NumericError(f"quadrature failed to converge on [{a}, {b}]")
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + _adaptive(
        f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1
    )


def adaptive_simpson(
    f: Callable[[float], complex],
    a: float,
    b: float,
    *,
    tol: float = 1e-6,
    breakpoints: Sequence[float] = (),
    max_depth: int = 40,
) -> complex:
    """Integral of f over [a, b] to absolute tolerance tol.

    ``breakpoints`` inside (a, b) force panel boundaries there; pass layer
    interface positions so the integrand is smooth within every panel.
    """
    if not b > a:
        raise NumericError(f"need b > a, got [{a}, {b}]")
    knots = [a] + sorted(x for x in set(breakpoints) if a < x < b) + [b]
    total = 0.0 + 0.0j
    for lo, hi in zip(knots[:-1], knots[1:]):
        fa, fb = f(lo), f(hi)
        fm = f(0.5 * (lo + hi))
        whole = _simpson(fa, fm, fb, hi - lo)
        panel_tol = tol * (hi - lo) / (b - a)
        total += _adaptive(f, lo, hi, fa, fm, fb, whole, panel_tol, max_depth)
    return total


def unwrap_phases(phases: np.ndarray, *, max_jump: float = 0.5 * math.pi) -> np.ndarray:
    """Continuous phase from principal values sampled on a fine grid.

    After 2*pi unwrapping, any remaining step larger than ``max_jump``
    means the sampling was too coarse to track the phase; that is reported
    rather than silently smoothed over.
    """
    out = np.unwrap(np.asarray(phases, dtype=float))
    jumps = np.abs(np.diff(out))
    if jumps.size and float(jumps.max()) > max_jump:
        i = int(np.argmax(jumps))
        raise NumericError(
            f"phase jump {jumps[i]:.3f} rad between samples {i} and {i + 1} "
            f"exceeds {max_jump:.3f}; refine the energy grid"
        )
    return out
