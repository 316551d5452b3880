"""Transmission extrema of N-cell arrays and analytic lineshapes there.

An N-cell array transmits perfectly where N phi = m pi (m = 1 .. N-1) and
least where N phi = (p + 1/2) pi.  Around each extremum the exact curves
collapse onto two-parameter shapes built purely from single-cell
quantities evaluated at the extremum:

    peaks:    |t_N|^2 ~ [1 + x^2]^(-1),      x = (E - E_m)/(Gamma_m/2),
              Gamma_m = 2 / (N sinh(mu_m) phi_m')
              tau_ph  ~ N tau_Bl cosh(mu) (1 + 2 b_m x)/(1 + x^2)   (Fano)

    valleys:  tau_ph  ~ (N tau_Bl / cosh mu) (1 + C_p y)
                        / [1 + 2 D_p y + (D_p^2 - 1) y^2],
              y = (E - E_p)/(Gamma_p/2),  Gamma_p = 2/(N phi_p' tanh mu_p)

No curve fitting happens anywhere: every parameter is an analytic
expression in (phi, mu, phi', phi'', mu') at the extremum.  Extrema are
found by root-solving phi(E) on the monotone trace, which stays robust as
the peaks sharpen like 1/N.

The valley shape truncates a quadratic expansion whose denominator
vanishes at |y| = 1, so it degrades rapidly toward its window edges; the
peak shapes assume sin(N phi) is linear across the window, which holds
well only when sinh(mu) is large.  Both limitations are intrinsic to the
shapes, not to this implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import NumericError, ValidationError
from .kard import Band, CellModel, as_model, energy_at_phase, kard_derivatives
from .medium import CONSTANTS, CellSpec, EnergyGrid, Layer, PhysConstants

__all__ = [
    "PeakFit",
    "ValleyFit",
    "locate_extrema",
    "fit_peak",
    "fit_valley",
    "ApproxCurves",
    "approx_curves",
]


@dataclass(frozen=True)
class PeakFit:
    """Breit-Wigner/Fano parameters at the m-th unit-transmission peak."""

    m: int
    E_m: float  # meV
    Gamma_m: float  # meV, full width at half maximum of the BW shape
    b_m: float  # Fano asymmetry, dimensionless
    tau_peak: float  # fs, N tau_Bl cosh(mu) at E_m

    def t2(self, E: float) -> float:
        """Breit-Wigner transmission at energy E."""
        x = (E - self.E_m) / (0.5 * self.Gamma_m)
        return 1.0 / (1.0 + x * x)

    def tau(self, E: float) -> float:
        """Fano phase-time shape at energy E."""
        x = (E - self.E_m) / (0.5 * self.Gamma_m)
        return self.tau_peak * (1.0 + 2.0 * self.b_m * x) / (1.0 + x * x)


@dataclass(frozen=True)
class ValleyFit:
    """Lineshape parameters at the p-th transmission minimum.

    The two valleys nearest the band edges carry edge_degraded = True: mu
    diverges there and the quadratic expansion behind the shape is poor.
    """

    p: int
    E_p: float  # meV
    Gamma_p: float  # meV
    C_p: float  # dimensionless, O(1/N)
    D_p: float  # dimensionless, O(1/N)
    tau_valley: float  # fs, N tau_Bl / cosh(mu) at E_p
    edge_degraded: bool = False

    def tau(self, E: float) -> float:
        """Valley phase-time shape at energy E (meaningful for |y| < 1)."""
        y = (E - self.E_p) / (0.5 * self.Gamma_p)
        den = 1.0 + 2.0 * self.D_p * y + (self.D_p * self.D_p - 1.0) * y * y
        return self.tau_valley * (1.0 + self.C_p * y) / den


def locate_extrema(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    N: int = 2,
    band: Band | None = None,
    consts: PhysConstants = CONSTANTS,
) -> tuple[list[float], list[float]]:
    """Energies of all transmission peaks and minima of an N-cell array.

    Peaks solve phi = m pi/N for m = 1 .. N-1.  Valley phase points solve
    phi = (p + 1/2) pi/N; all N in-band solutions (p = 0 .. N-1) are
    returned, of which only p = 1 .. N-2 are interior -- the outermost two
    hug the band edges and are flagged when fitted.
    """
    if N < 2:
        raise ValidationError(f"extrema need at least 2 cells, got N = {N}")
    if band is None:
        raise ValidationError("locate_extrema needs the band (run band_structure first)")
    model = as_model(cell, outside, consts)
    peaks = [energy_at_phase(model, band, m * math.pi / N) for m in range(1, N)]
    valleys = [energy_at_phase(model, band, (p + 0.5) * math.pi / N) for p in range(N)]
    return peaks, valleys


def fit_peak(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    N: int = 2,
    m: int = 1,
    *,
    band: Band | None = None,
    h: float | None = None,
    consts: PhysConstants = CONSTANTS,
) -> PeakFit:
    """Analytic lineshape parameters at the m-th peak (m = 1 .. N-1)."""
    if not 1 <= m <= N - 1:
        raise ValidationError(f"peak index m = {m} outside 1..{N - 1}")
    if band is None:
        raise ValidationError("fit_peak needs the band")
    model = as_model(cell, outside, consts)
    E_m = energy_at_phase(model, band, m * math.pi / N)
    d = kard_derivatives(model, None, E_m, h, band=band, consts=consts)
    mu = d.params.mu
    if mu <= 0.0:
        raise NumericError(f"transparent cell at E = {E_m} meV: no resonance width")
    gamma = 2.0 / (N * math.sinh(mu) * d.phi_p)
    b = 0.5 * (2.0 * d.mu_p + d.phi_pp / (math.tanh(mu) * d.phi_p)) / (N * d.phi_p * math.cosh(mu))
    tau_peak = N * consts.hbar * d.phi_p * math.cosh(mu)
    return PeakFit(m=m, E_m=E_m, Gamma_m=gamma, b_m=b, tau_peak=tau_peak)


def fit_valley(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    N: int = 2,
    p: int = 0,
    *,
    band: Band | None = None,
    h: float | None = None,
    consts: PhysConstants = CONSTANTS,
) -> ValleyFit:
    """Analytic lineshape parameters at the p-th minimum (p = 0 .. N-1)."""
    if not 0 <= p <= N - 1:
        raise ValidationError(f"valley index p = {p} outside 0..{N - 1}")
    if band is None:
        raise ValidationError("fit_valley needs the band")
    model = as_model(cell, outside, consts)
    E_p = energy_at_phase(model, band, (p + 0.5) * math.pi / N)
    d = kard_derivatives(model, None, E_p, h, band=band, consts=consts)
    mu = d.params.mu
    if mu <= 0.0:
        raise NumericError(f"transparent cell at E = {E_p} meV: no contrast at minimum")
    gamma = 2.0 / (N * d.phi_p * math.tanh(mu))
    C = 0.5 * gamma * d.phi_pp / d.phi_p
    D = d.mu_p / (N * d.phi_p)
    tau_valley = N * consts.hbar * d.phi_p / math.cosh(mu)
    return ValleyFit(
        p=p,
        E_p=E_p,
        Gamma_p=gamma,
        C_p=C,
        D_p=D,
        tau_valley=tau_valley,
        edge_degraded=(p == 0 or p == N - 1),
    )


@dataclass(frozen=True)
class ApproxCurves:
    """Piecewise analytic approximation sampled on a grid.

    Around each peak the Breit-Wigner/Fano shapes are used for
    |E - E_m| <= Gamma_m; around each valley (peak windows taking
    precedence where they overlap) the valley shape is used for
    |E - E_p| <= Gamma_p/2; gaps in between are bridged by horizontal
    connectors.  For the transmission the connector level is the common
    window-edge value 1/5; for the phase time the flanking edge values
    differ slightly and the bridge takes their mean.
    """

    energies: np.ndarray
    t2: np.ndarray
    tau_ph: np.ndarray
    peaks: tuple[PeakFit, ...]
    valleys: tuple[ValleyFit, ...]


def approx_curves(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    N: int = 2,
    band: Band | None = None,
    grid: EnergyGrid | None = None,
    *,
    h: float | None = None,
    consts: PhysConstants = CONSTANTS,
) -> ApproxCurves:
    """Build the piecewise peak/valley approximation over a grid."""
    if band is None or grid is None:
        raise ValidationError("approx_curves needs the band and an energy grid")
    model = as_model(cell, outside, consts)
    peaks = tuple(
        fit_peak(model, None, N, m, band=band, h=h, consts=consts) for m in range(1, N)
    )
    valleys = tuple(
        fit_valley(model, None, N, p, band=band, h=h, consts=consts) for p in range(N)
    )

    # Window table: (lo, hi, kind, fit), peaks first so they win overlaps.
    windows: list[tuple[float, float, str, object]] = []
    for pk in peaks:
        windows.append((pk.E_m - pk.Gamma_m, pk.E_m + pk.Gamma_m, "peak", pk))
    for vl in valleys:
        windows.append((vl.E_p - 0.5 * vl.Gamma_p, vl.E_p + 0.5 * vl.Gamma_p, "valley", vl))

    def shapes_at(E: float) -> tuple[float | None, float | None]:
        for lo, hi, kind, fit in windows:
            if lo <= E <= hi:
                if kind == "peak":
                    return fit.t2(E), fit.tau(E)
                return None, fit.tau(E)
        return None, None

    energies = np.asarray(grid.samples, dtype=float)
    t2 = np.empty(len(energies))
    tau = np.empty(len(energies))
    covered_t2 = np.zeros(len(energies), dtype=bool)
    covered_tau = np.zeros(len(energies), dtype=bool)
    for i, E in enumerate(energies):
        s_t2, s_tau = shapes_at(float(E))
        if s_t2 is not None:
            t2[i] = s_t2
            covered_t2[i] = True
        if s_tau is not None:
            tau[i] = s_tau
            covered_tau[i] = True

    _bridge(energies, t2, covered_t2, windows, "t2")
    _bridge(energies, tau, covered_tau, windows, "tau")
    return ApproxCurves(energies=energies, t2=t2, tau_ph=tau, peaks=peaks, valleys=valleys)


def _bridge(
    energies: np.ndarray,
    values: np.ndarray,
    covered: np.ndarray,
    windows: list,
    which: str,
) -> None:
    """Fill uncovered stretches with horizontal connectors (in place)."""

    def edge_value(fit, kind: str, E: float) -> float:
        if which == "t2":
            # Valley windows never define t2; the BW value at |x| = 2 is 1/5
            # for every peak, so that is the universal connector level.
            return fit.t2(E) if kind == "peak" else 0.2
        return fit.tau(E)

    n = len(energies)
    i = 0
    while i < n:
        if covered[i]:
            i += 1
            continue
        j = i
        while j < n and not covered[j]:
            j += 1
        # nearest covering windows on each side of the gap [i, j)
        left = _nearest_window(windows, energies[i], side="left")
        right = _nearest_window(windows, energies[j - 1], side="right")
        vals = []
        if left is not None:
            lo, hi, kind, fit = left
            vals.append(edge_value(fit, kind, hi))
        if right is not None:
            lo, hi, kind, fit = right
            vals.append(edge_value(fit, kind, lo))
        if not vals:
            raise NumericError("no fitted windows to bridge from")
        values[i:j] = sum(vals) / len(vals)
        i = j


def _nearest_window(windows: list, E: float, side: str):
    best = None
    best_gap = math.inf
    for lo, hi, kind, fit in windows:
        if side == "left" and hi <= E:
            gap = E - hi
        elif side == "right" and lo >= E:
            gap = lo - E
        else:
            continue
        if gap < best_gap:
            best_gap = gap
            best = (lo, hi, kind, fit)
    return best
