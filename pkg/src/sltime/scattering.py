"""Stationary scattering observables of a finite stack.

Everything here works in a fixed coordinate frame with the stack centered
on the origin: the scattering region occupies [-W/2, +W/2] where W is the
total stack width, and the uniform leads extend to either side.  Two phase
conventions coexist:

- *cell-referenced* amplitudes (what ``tmatrix.amplitudes`` returns) take
  the incident wave to have zero phase at the left face and the transmitted
  wave zero phase at the right face.  Convenient for matrix algebra, but
  the phases carry no information about where the stack sits.
- *origin-referenced* amplitudes describe the actual solution
  psi = e^{ikx} + r e^{-ikx} (left), t e^{ikx} (right).  Energy derivatives
  of these phases are the ones with a time interpretation, because moving
  the stack moves the arrival events.

``shift_convention`` converts between the two.  The S-matrix, the Smith
lifetime matrix Q = -i hbar S^dagger dS/dE, and the dwell-time formula all
require origin-referenced input and raise otherwise instead of silently
producing phases with the wrong reference.

The interior wavefunction is reconstructed by back-propagating the
transmitted plane wave through the layer sequence with the same
(psi, psi'/m*) propagators used for the transfer matrix.  Backward
propagation through a barrier grows the evanescent component, which is the
numerically stable direction (the forward problem would difference two
growing exponentials); for the layer thicknesses and barrier heights this
package targets the growth factors are modest anyway.

The dwell time over a window [x_L, x_R] enclosing the stack splits into
three named pieces:

- a smooth, window-independent part  hbar (|t|^2 eta' + |r|^2 delta')
  built from origin-referenced phase derivatives; it equals the (1,1)
  element of the Smith matrix,
- an oscillatory part  -(hbar |r| / 2E) sin(2 k x_L - delta)  from the
  standing-wave pattern the reflected wave sets up in the left lead,
- a classical crossing part  (x_R - x_L)|t|^2/v - 2 x_L |r|^2/v : the
  transmitted fraction crosses the whole window, the reflected fraction
  travels from x_L to the stack and back.

Their sum is the integral of |psi|^2 over the window for the
flux-normalized stationary state, which ``dwell_time`` also evaluates by
adaptive quadrature of the reconstructed density as an independent check.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError
from .medium import CONSTANTS, Layer, PhysConstants, StackSpec, _layers_mirror_equal
from .numerics import adaptive_simpson, derivative
from .tmatrix import (
    CELL_REFERENCED,
    ORIGIN_REFERENCED,
    Amplitudes,
    _cos_and_sinc,
    amplitudes,
    stack_matrix,
)

__all__ = [
    "shift_convention",
    "unshift_convention",
    "SMatrix",
    "s_matrix",
    "SmithMatrix",
    "smith_matrix",
    "interior_wavefunction",
    "probability_current",
    "DwellResult",
    "dwell_time",
]


# ---------------------------------------------------------------------------
# phase conventions


def _check_shift_args(k: float, a: float, w: float) -> None:
    if not (math.isfinite(k) and k > 0.0):
        raise ValidationError(f"lead wavenumber must be positive and finite, got {k}")
    if not (math.isfinite(a) and math.isfinite(w)) or w < 0.0:
        raise ValidationError(f"bad geometry: left face {a}, width {w}")


def shift_convention(amp: Amplitudes, k: float, a: float, w: float) -> Amplitudes:
    """Re-reference cell-edge amplitudes to the coordinate origin.

    ``a`` is the position of the left face of the scattering region and
    ``w`` its width, so the right face sits at a + w.  The transmitted
    amplitude picks up the propagation phase across the region,
    t -> t e^{-ikw}, and the reflected amplitude the round trip to the left
    face, r -> r e^{2ika}.  Moduli are untouched.
    """
    if amp.convention == ORIGIN_REFERENCED:
        raise ValidationError("amplitudes are already origin-referenced")
    _check_shift_args(k, a, w)
    return Amplitudes(
        t=amp.t * cmath.exp(-1j * k * w),
        r=amp.r * cmath.exp(2j * k * a),
        convention=ORIGIN_REFERENCED,
    )


def unshift_convention(amp: Amplitudes, k: float, a: float, w: float) -> Amplitudes:
    """Inverse of :func:`shift_convention` (same k, a, w)."""
    if amp.convention == CELL_REFERENCED:
        raise ValidationError("amplitudes are already cell-referenced")
    _check_shift_args(k, a, w)
    return Amplitudes(
        t=amp.t * cmath.exp(1j * k * w),
        r=amp.r * cmath.exp(-2j * k * a),
        convention=CELL_REFERENCED,
    )


# ---------------------------------------------------------------------------
# S-matrix and Smith lifetime matrix


@dataclass(frozen=True)
class SMatrix:
    """2x2 unitary scattering matrix ((r, t), (t, r_bar)) for identical leads.

    ``r_bar`` is the reflection amplitude for incidence from the right; for
    a spatially asymmetric stack it differs from r in phase (never in
    modulus, since transmission is reciprocal).
    """

    r: complex
    t: complex
    r_bar: complex

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.r, self.t], [self.t, self.r_bar]], dtype=complex)

    @property
    def unitarity_defect(self) -> float:
        s = self.matrix
        return float(np.abs(s.conj().T @ s - np.eye(2)).max())


def s_matrix(amp: Amplitudes) -> SMatrix:
    """S-matrix from origin-referenced amplitudes.

    The right-incidence reflection follows from unitarity and reciprocity:
    r_bar = -conj(r) t / conj(t).  Cell-referenced input is rejected
    because its phases would put the stack in the wrong place.
    """
    if amp.convention != ORIGIN_REFERENCED:
        raise ValidationError(
            "S-matrix entries need origin-referenced phases; apply shift_convention first"
        )
    if amp.t == 0:
        raise NumericError("transmission amplitude underflowed to zero; cannot form S")
    r_bar = -amp.r.conjugate() * amp.t / amp.t.conjugate()
    return SMatrix(r=amp.r, t=amp.t, r_bar=r_bar)


def _origin_amplitudes(
    stack: StackSpec, E: float, consts: PhysConstants
) -> tuple[Amplitudes, float, float]:
    """Origin-referenced amplitudes plus lead wavenumber and velocity."""
    amp = amplitudes(stack_matrix(E, stack, consts))
    k = math.sqrt(
        (E - stack.outside.potential) * stack.outside.mass_ratio / consts.hbar2_over_2m0
    )
    v = consts.velocity(k, stack.outside.mass_ratio)
    w = stack.width
    return shift_convention(amp, k, -0.5 * w, w), k, v


def _s_entries(stack: StackSpec, E: float, consts: PhysConstants) -> np.ndarray:
    amp, _, _ = _origin_amplitudes(stack, E, consts)
    s = s_matrix(amp)
    return s.matrix


@dataclass(frozen=True)
class SmithMatrix:
    """Lifetime matrix Q = -i hbar S^dagger dS/dE, in fs.

    Q is Hermitian for a unitary S, so the diagonal entries are real delay
    times (tau11 for left incidence, tau22 for right) and the channel
    coupling is carried by the single complex off-diagonal tau12.
    """

    tau11: float
    tau22: float
    tau12: complex


def smith_matrix(
    stack: StackSpec,
    E: float,
    h: float = 1e-3,
    consts: PhysConstants = CONSTANTS,
) -> SmithMatrix:
    """Smith lifetime matrix of a stack at energy E.

    dS/dE is taken entrywise with the five-point stencil (step ``h`` in
    meV), which sidesteps phase unwrapping entirely: the entries of S are
    smooth complex functions of energy even where the reflection phase is
    undefined.  All five stencil energies must lie above the lead band
    bottom.  For a mirror-symmetric stack tau11 = tau22 and tau12 is real
    up to stencil error; asymmetric stacks go through the same algebra but
    are outside the validated regime, so they are flagged with a warning.
    """
    if not _layers_mirror_equal(stack.segments()):
        warnings.warn(
            "Smith matrix for a spatially asymmetric stack: the general formula "
            "is used but this regime has no independent cross-check here",
            stacklevel=2,
        )
    s = _s_entries(stack, E, consts)
    ds = derivative(lambda e: _s_entries(stack, e, consts), E, h)
    q = -1j * consts.hbar * (s.conj().T @ ds)
    defect = float(np.abs(q - q.conj().T).max())
    scale = max(1.0, float(np.abs(q).max()))
    if defect > 1e-3 * scale:
        raise NumericError(
            f"lifetime matrix is not Hermitian (defect {defect:.3e} fs); "
            f"the stencil step {h} meV is too coarse for this feature"
        )
    q = 0.5 * (q + q.conj().T)
    return SmithMatrix(tau11=q[0, 0].real, tau22=q[1, 1].real, tau12=q[0, 1])


# ---------------------------------------------------------------------------
# interior wavefunction


class _WaveField:
    """Flux-normalized stationary state for a unit wave incident from the left.

    Built once per (stack, E); evaluating psi at a point costs one partial
    layer propagation from the nearest interface to its left.
    """

    def __init__(self, stack: StackSpec, E: float, consts: PhysConstants = CONSTANTS):
        self.E = E
        self.consts = consts
        self.amp = amplitudes(stack_matrix(E, stack, consts))
        self.mass_out = stack.outside.mass_ratio
        self.k = math.sqrt(
            (E - stack.outside.potential) * self.mass_out / consts.hbar2_over_2m0
        )
        self.v = consts.velocity(self.k, self.mass_out)
        self.layers = stack.segments()
        widths = np.array([layer.width for layer in self.layers])
        edges = -0.5 * stack.width + np.concatenate([[0.0], np.cumsum(widths)])
        self.edges = edges  # len(layers) + 1 interface positions
        self.a = float(edges[0])
        self.b = float(edges[-1])
        # u = (psi, psi'/m*) at the right face, then backward through every
        # layer; det-1 inverses are written out to avoid a solve per layer.
        norm = 1.0 / math.sqrt(self.v)
        t = self.amp.t * norm
        u = np.array([t, 1j * self.k * t / self.mass_out])
        us = [u]
        for layer in reversed(self.layers):
            p = self._propagator(layer, layer.width)
            u = np.array(
                [p[1, 1] * u[0] - p[0, 1] * u[1], -p[1, 0] * u[0] + p[0, 0] * u[1]]
            )
            us.append(u)
        us.reverse()
        self.us = us  # u at every interface, left to right

    def _propagator(self, layer: Layer, dx: float) -> np.ndarray:
        ksq = (self.E - layer.potential) * layer.mass_ratio / self.consts.hbar2_over_2m0
        c, s = _cos_and_sinc(ksq, dx)
        m = layer.mass_ratio
        return np.array([[c, m * s], [-ksq * s / m, c]], dtype=float)

    def u(self, x: float) -> np.ndarray:
        """(psi, psi'/m*) at x, any region."""
        norm = 1.0 / math.sqrt(self.v)
        if x <= self.a:
            fwd = cmath.exp(1j * self.k * (x - self.a))
            bwd = self.amp.r / fwd
            psi = (fwd + bwd) * norm
            slope = 1j * self.k * (fwd - bwd) * norm / self.mass_out
            return np.array([psi, slope])
        if x >= self.b:
            psi = self.amp.t * cmath.exp(1j * self.k * (x - self.b)) * norm
            return np.array([psi, 1j * self.k * psi / self.mass_out])
        j = int(np.searchsorted(self.edges, x, side="right")) - 1
        j = min(max(j, 0), len(self.layers) - 1)
        dx = x - self.edges[j]
        if dx == 0.0:
            return self.us[j]
        return self._propagator(self.layers[j], dx) @ self.us[j]

    def psi(self, x: float) -> complex:
        return complex(self.u(x)[0])

    def density(self, x: float) -> float:
        return abs(self.psi(x)) ** 2

    def current(self, x: float) -> float:
        """Probability current normalized so the incident wave carries 1."""
        u = self.u(x)
        raw = (u[0].conjugate() * u[1]).imag
        # incident current of e^{ikx}/sqrt(v): k/(m v) in these units
        return float(raw * self.v * self.mass_out / self.k)


def interior_wavefunction(
    stack: StackSpec,
    E: float,
    x_grid: np.ndarray,
    consts: PhysConstants = CONSTANTS,
) -> np.ndarray:
    """psi(x) on x_grid for a flux-normalized wave incident from the left.

    The stack occupies [-W/2, +W/2]; the grid may extend into either lead.
    Densities come out in units of inverse velocity, so a free stack gives
    |psi|^2 = 1/v everywhere and resonant states show up as interior
    density exceeding the lead value.
    """
    field = _WaveField(stack, E, consts)
    return np.array([field.psi(x) for x in np.asarray(x_grid, dtype=float)])


def probability_current(
    stack: StackSpec,
    E: float,
    x_grid: np.ndarray,
    consts: PhysConstants = CONSTANTS,
) -> np.ndarray:
    """Probability current at each grid point, unit incident flux.

    Stationarity makes this x-independent and equal to the transmission
    probability; deviations measure reconstruction error.
    """
    field = _WaveField(stack, E, consts)
    return np.array([field.current(x) for x in np.asarray(x_grid, dtype=float)])


# ---------------------------------------------------------------------------
# dwell time


@dataclass(frozen=True)
class DwellResult:
    """Dwell time of the stationary state over a window [x_left, x_right].

    ``tau_dwell_delay`` is the smooth phase-derivative part
    hbar (|t|^2 eta' + |r|^2 delta') with origin-referenced phases -- the
    piece that does not depend on where the window ends sit, equal to the
    Smith tau11.  ``oscillatory_term`` tracks the standing-wave fringe at
    the left window edge and ``free_passage`` the classical crossing times.
    The three sum to the density integral over the window, which
    ``tau_numeric`` re-derives by adaptive quadrature of |psi|^2.
    All times in fs.
    """

    tau_dwell_delay: float
    oscillatory_term: float
    free_passage: float
    uniform_passage: float
    tau_numeric: float
    x_left: float
    x_right: float

    @property
    def dwell_time(self) -> float:
        """Closed-form integral of |psi|^2 over the window."""
        return self.tau_dwell_delay + self.oscillatory_term + self.free_passage

    @property
    def delay(self) -> float:
        """Excess of the dwell time over uniform free passage of the window."""
        return self.dwell_time - self.uniform_passage


def dwell_time(
    stack: StackSpec,
    E: float,
    x_left: float | None = None,
    x_right: float | None = None,
    h: float = 1e-3,
    consts: PhysConstants = CONSTANTS,
) -> DwellResult:
    """Dwell time of the left-incident state over [x_left, x_right].

    The window must strictly enclose the stack ([-W/2, +W/2]); the defaults
    put each end one core-cell width outside the corresponding face.  The
    phase derivatives are taken as Im(conj(t) t') and Im(conj(r) r'), which
    stay finite at perfect transmission where the reflection phase itself
    is undefined.  ``h`` is the stencil step in meV; all five stencil
    energies must be above the lead band bottom.

    The quadrature cross-check integrates the reconstructed density with
    interface positions as forced panel boundaries and is returned in
    ``tau_numeric``; a gross mismatch with the closed form raises, finer
    comparisons are left to the caller.
    """
    half_w = 0.5 * stack.width
    if x_left is None:
        x_left = -half_w - stack.core.width
    if x_right is None:
        x_right = half_w + stack.core.width
    if not (x_left < -half_w and x_right > half_w):
        raise ValidationError(
            f"window [{x_left}, {x_right}] must strictly enclose the stack "
            f"[{-half_w}, {half_w}]"
        )

    amp, k, v = _origin_amplitudes(stack, E, consts)

    def t_and_r(e: float) -> np.ndarray:
        a, _, _ = _origin_amplitudes(stack, e, consts)
        return np.array([a.t, a.r])

    dt, dr = derivative(t_and_r, E, h)
    smooth = consts.hbar * ((amp.t.conjugate() * dt).imag + (amp.r.conjugate() * dr).imag)

    e_kin = E - stack.outside.potential
    r_abs = abs(amp.r)
    if r_abs == 0.0:
        oscillatory = 0.0
    else:
        delta = cmath.phase(amp.r)
        oscillatory = -(consts.hbar * r_abs / (2.0 * e_kin)) * math.sin(
            2.0 * k * x_left - delta
        )

    T, R = amp.T, amp.R
    free_passage = (x_right - x_left) * T / v - 2.0 * x_left * R / v
    uniform = (x_right - x_left) / v

    field = _WaveField(stack, E, consts)
    interior = [x for x in field.edges if x_left < x < x_right]
    numeric = adaptive_simpson(
        lambda x: field.density(x), x_left, x_right, tol=1e-6, breakpoints=interior
    ).real

    closed = smooth + oscillatory + free_passage
    if abs(numeric - closed) > max(1e-2 * abs(closed), 0.1):
        raise NumericError(
            f"dwell-time closed form ({closed:.6f} fs) and density integral "
            f"({numeric:.6f} fs) disagree at E = {E} meV"
        )
    return DwellResult(
        tau_dwell_delay=smooth,
        oscillatory_term=oscillatory,
        free_passage=free_passage,
        uniform_passage=uniform,
        tau_numeric=numeric,
        x_left=x_left,
        x_right=x_right,
    )
