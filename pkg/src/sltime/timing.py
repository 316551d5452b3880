"""Phase time, Bloch time, and the envelope loci for N-cell arrays.

With the cell angles (phi, mu) and their energy derivatives in hand, the
stationary-phase traversal time of N identical cells is elementary:

    tau_Bl = hbar phi'                      (per-cell Bloch time)

    tau_ph = N tau_Bl cosh(mu)
             * [1 + sin(2 N phi) tanh(mu) mu' / (2 N phi')]
             / [1 + sinh^2(mu) sin^2(N phi)]

tau_ph oscillates between two smooth envelopes that touch it at every
transmission maximum (N phi = m pi) and minimum (N phi = (p + 1/2) pi):

    env_max = N tau_Bl cosh(mu),    env_min = N tau_Bl / cosh(mu),

whose geometric mean is exactly N tau_Bl: a wave packet tuned to a
resonance dwells cosh(mu) times longer than the Bloch estimate, one tuned
to a transmission valley escapes cosh(mu) times faster.

Everything here is closed-form in the angles; numerical differentiation of
the N-cell transmission phase is relegated to the test suite (phase
unwrapping across sharp resonances is exactly the fragility this module
exists to avoid).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import NumericError, ValidationError
from .kard import (
    Band,
    CellModel,
    KardDerivatives,
    PotentialCell,
    as_model,
    decompose,
    kard_derivatives,
)
from .medium import CONSTANTS, CellSpec, EnergyGrid, Layer, PhysConstants, local_wavenumber
from .tmatrix import amplitudes

__all__ = [
    "free_time",
    "bloch_time",
    "phase_time",
    "envelopes",
    "TransmissionSweep",
    "transmission_sweep",
    "TimingCurve",
    "timing_curve",
]


def free_time(width: float, E: float, outside: Layer, consts: PhysConstants = CONSTANTS) -> float:
    """Classical crossing time (fs) of a free slab of lead material."""
    k = local_wavenumber(E, outside, consts)
    if k.real <= 0.0:
        raise NumericError(f"no propagating lead wave at E = {E} meV")
    return width / consts.velocity(k.real, outside.mass_ratio)


def _derivs(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None,
    E: float,
    h: float | None,
    band: Band | None,
    consts: PhysConstants,
) -> KardDerivatives:
    return kard_derivatives(cell, outside, E, h, band=band, consts=consts)


def bloch_time(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    E: float = 0.0,
    h: float | None = None,
    *,
    band: Band | None = None,
    consts: PhysConstants = CONSTANTS,
) -> float:
    """Per-cell traversal time hbar phi' (fs) at band-interior energy E."""
    d = _derivs(cell, outside, E, h, band, consts)
    tau = consts.hbar * d.phi_p
    if tau <= 0.0:
        raise NumericError(f"nonpositive Bloch time at E = {E} meV: phi' = {d.phi_p}")
    return tau


def _phase_time_from(d: KardDerivatives, N: int) -> float:
    phi, mu = d.params.phi, d.params.mu
    n_bloch = N * CONSTANTS.hbar * d.phi_p
    sin_n = math.sin(N * phi)
    # tanh(mu) mu' -> 0 whenever mu -> 0, so a transparent cell is safe here.
    ripple = math.sin(2.0 * N * phi) * math.tanh(mu) * d.mu_p / (2.0 * N * d.phi_p)
    return n_bloch * math.cosh(mu) * (1.0 + ripple) / (1.0 + math.sinh(mu) ** 2 * sin_n**2)


def phase_time(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    N: int = 1,
    E: float = 0.0,
    h: float | None = None,
    *,
    band: Band | None = None,
    consts: PhysConstants = CONSTANTS,
) -> float:
    """Stationary-phase time hbar d(arg t_N)/dE (fs) for the N-cell array."""
    if N < 1:
        raise ValidationError(f"need at least one cell, got N = {N}")
    return _phase_time_from(_derivs(cell, outside, E, h, band, consts), N)


def envelopes(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    N: int = 1,
    E: float = 0.0,
    h: float | None = None,
    *,
    band: Band | None = None,
    consts: PhysConstants = CONSTANTS,
) -> tuple[float, float, float]:
    """(env_max, env_min, N tau_Bl) at energy E, all in fs.

    env_min is cross-evaluated through the matrix-element identity
    N hbar (d cos phi / dE) / Im M11 = N tau_Bl / cosh mu, which holds
    because Im M11 = -sin(phi) cosh(mu); disagreement beyond 1e-8 relative
    means the decomposition and the matrix have drifted apart.
    """
    model = as_model(cell, outside, consts)
    d = _derivs(model, None, E, h, band, consts)
    ch = math.cosh(d.params.mu)
    bloch_total = N * consts.hbar * d.phi_p
    env_max = bloch_total * ch
    env_min = bloch_total / ch
    c_p = -d.phi_p * math.sin(d.params.phi)
    m_form = N * consts.hbar * c_p / model.matrix(E).m11.imag
    if abs(m_form - env_min) > 1e-8 * abs(env_min):
        raise NumericError(
            f"envelope cross-check failed at E = {E} meV: "
            f"{m_form} (matrix form) vs {env_min} (cosh form)"
        )
    return env_max, env_min, bloch_total


@dataclass(frozen=True)
class TransmissionSweep:
    """|t_N|^2 over a grid, with the envelope of its minima.

    envelope = 1/cosh^2(mu) is only defined inside allowed bands; forbidden
    or edge samples carry nan there (t2 itself is fine everywhere).
    """

    energies: np.ndarray
    t2: np.ndarray
    envelope: np.ndarray


def transmission_sweep(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    N: int = 1,
    grid: EnergyGrid | None = None,
    consts: PhysConstants = CONSTANTS,
) -> TransmissionSweep:
    """N-cell transmission over a grid, via the angle closed form.

    In-band samples use |t_N|^2 = [1 + sinh^2(mu) sin^2(N phi)]^(-1) and are
    verified against the explicit N-fold matrix product to 1e-10 relative;
    out-of-band samples take the matrix-product value directly.
    """
    if grid is None:
        raise ValidationError("transmission_sweep needs an energy grid")
    if N < 1:
        raise ValidationError(f"need at least one cell, got N = {N}")
    model = as_model(cell, outside, consts)
    n = grid.count
    t2 = np.empty(n)
    env = np.full(n, math.nan)
    for i, E in enumerate(grid.samples):
        M = model.matrix(float(E))
        direct = amplitudes(M.power(N)).T
        p = decompose(M)
        if p.band == "allowed":
            closed = 1.0 / (1.0 + math.sinh(p.mu) ** 2 * math.sin(N * p.phi) ** 2)
            if abs(closed - direct) > 1e-10 * max(closed, direct):
                raise NumericError(
                    f"closed-form |t_N|^2 = {closed} disagrees with the "
                    f"matrix product {direct} at E = {E} meV"
                )
            t2[i] = closed
            env[i] = 1.0 / math.cosh(p.mu) ** 2
        else:
            t2[i] = direct
    return TransmissionSweep(energies=grid.samples.copy(), t2=t2, envelope=env)


@dataclass(frozen=True)
class TimingCurve:
    """Timing quantities per band-interior energy sample, all times in fs.

    tau_ph_delay subtracts the free flight over the array's physical width
    (nan when the model has no spatial extent).  env_max * env_min equals
    tau_bloch_total^2 identically.
    """

    energies: np.ndarray
    t2: np.ndarray
    tau_ph: np.ndarray
    tau_ph_delay: np.ndarray
    tau_bloch_total: np.ndarray
    env_max: np.ndarray
    env_min: np.ndarray


def _refined_samples(
    grid: EnergyGrid, refine: Sequence[tuple[float, float]], lo: float, hi: float
) -> np.ndarray:
    """Merge the base grid with dense windows around sharp features.

    Each (center, width) pair contributes a local grid of 40 samples per
    width over +-3 widths, clipped to (lo, hi); duplicates are dropped.
    """
    pieces = [np.asarray(grid.samples, dtype=float)]
    for center, width in refine:
        if width <= 0.0:
            raise ValidationError(f"nonpositive refinement width {width}")
        local = np.arange(center - 3.0 * width, center + 3.0 * width, width / 40.0)
        pieces.append(local[(local > lo) & (local < hi)])
    merged = np.unique(np.concatenate(pieces))
    return merged[(merged >= lo) & (merged <= hi)]


def timing_curve(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    N: int = 1,
    grid: EnergyGrid | None = None,
    *,
    band: Band | None = None,
    refine: Sequence[tuple[float, float]] = (),
    h: float | None = None,
    consts: PhysConstants = CONSTANTS,
) -> TimingCurve:
    """Evaluate the timing quantities across a band-interior grid.

    ``refine`` takes (energy, width) pairs -- typically resonance positions
    and their widths -- around which the base grid is locally densified so
    sharp peaks are actually resolved (40 samples per width).
    """
    if grid is None:
        raise ValidationError("timing_curve needs an energy grid")
    if N < 1:
        raise ValidationError(f"need at least one cell, got N = {N}")
    model = as_model(cell, outside, consts)
    lo = band.lower if band is not None else float(grid.samples[0])
    hi = band.upper if band is not None else float(grid.samples[-1])
    samples = _refined_samples(grid, refine, lo, hi)

    if isinstance(model, PotentialCell):
        width_total = N * model.cell.width
        lead = model.outside
    else:
        width_total = None
        lead = None

    n = len(samples)
    t2 = np.empty(n)
    tau_ph = np.empty(n)
    tau_delay = np.full(n, math.nan)
    bloch = np.empty(n)
    env_hi = np.empty(n)
    env_lo = np.empty(n)
    for i, E in enumerate(samples):
        E = float(E)
        d = _derivs(model, None, E, h, band, consts)
        phi, mu = d.params.phi, d.params.mu
        ch = math.cosh(mu)
        bloch[i] = N * consts.hbar * d.phi_p
        env_hi[i] = bloch[i] * ch
        env_lo[i] = bloch[i] / ch
        tau_ph[i] = _phase_time_from(d, N)
        t2[i] = 1.0 / (1.0 + math.sinh(mu) ** 2 * math.sin(N * phi) ** 2)
        if width_total is not None:
            tau_delay[i] = tau_ph[i] - free_time(width_total, E, lead, consts)
    return TimingCurve(
        energies=samples,
        t2=t2,
        tau_ph=tau_ph,
        tau_ph_delay=tau_delay,
        tau_bloch_total=bloch,
        env_max=env_hi,
        env_min=env_lo,
    )
