"""Plane-wave transfer matrices for piecewise-constant structures.

Inside the structure the wavefunction is propagated as u = (psi, psi'/m*),
which is continuous across mass steps.  A cell embedded between identical
leads is then summarized by the 2x2 matrix M acting on plane-wave
coefficients,

    (A, B)_left = M (C, D)_right,

where the left coefficients are phase-referenced to the cell's left edge and
the right ones to its right edge, i.e. psi = A e^{ik(x-a)} + B e^{-ik(x-a)}
on the left of a cell spanning [a, b].  With this reference choice the
matrix of n abutting cells is the ordered product M_1 ... M_n, and a free
cell gives exactly diag(e^{-ikw}, e^{+ikw}).

Because the interior propagator is real and the leads are identical, M
always satisfies M22 = conj(M11), M12 = conj(M21), det M = 1 (equivalently
M sigma_z M^dag = sigma_z).  Only m11 and m21 are stored; the conjugate
pair is exact by construction and compositions stay in this form.

For left incidence (D = 0) the cell-referenced amplitudes are t = 1/M11 and
r = M21/M11; |t|^2 + |r|^2 = 1 follows from det M = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import NoTransmissionError, NumericError, ValidationError
from .medium import CONSTANTS, CellSpec, EnergyGrid, Layer, PhysConstants, StackSpec
from .numerics import unwrap_phases

__all__ = [
    "CELL_REFERENCED",
    "ORIGIN_REFERENCED",
    "TransferMatrix",
    "Amplitudes",
    "layer_matrix",
    "cell_matrix",
    "stack_matrix",
    "compose",
    "amplitudes",
    "SweepResult",
    "sweep",
]

CELL_REFERENCED = "cell-referenced"
ORIGIN_REFERENCED = "origin-referenced"


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 coefficient transfer matrix in its time-reversal-symmetric form.

    ref_energy and cell_width tag where the matrix came from; matrices made
    by abstract reconstruction (no underlying potential) leave them None.
    """

    m11: complex
    m21: complex
    ref_energy: float | None = None
    cell_width: float | None = None

    @property
    def m12(self) -> complex:
        return self.m21.conjugate()

    @property
    def m22(self) -> complex:
        return self.m11.conjugate()

    @property
    def det(self) -> float:
        return abs(self.m11) ** 2 - abs(self.m21) ** 2

    @property
    def trace(self) -> float:
        return 2.0 * self.m11.real

    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return compose(self, other)

    def power(self, n: int) -> "TransferMatrix":
        """M^n by binary exponentiation (n >= 0)."""
        if n < 0:
            raise NumericError(f"negative power {n}")
        width = None if self.cell_width is None else n * self.cell_width
        result = TransferMatrix(1.0 + 0.0j, 0.0 + 0.0j, self.ref_energy, None)
        base = self
        m = n
        while m:
            if m & 1:
                result = result @ base
            base = base @ base
            m >>= 1
        return replace(result, cell_width=width)


def compose(left: TransferMatrix, right: TransferMatrix) -> TransferMatrix:
    """Matrix product left @ right; widths add, energies must agree."""
    ea, eb = left.ref_energy, right.ref_energy
    if ea is not None and eb is not None and not math.isclose(ea, eb, rel_tol=1e-12, abs_tol=1e-12):
        raise ValidationError(f"composing matrices at different energies: {ea} vs {eb}")
    energy = ea if ea is not None else eb
    wa, wb = left.cell_width, right.cell_width
    width = wa + wb if (wa is not None and wb is not None) else None
    return TransferMatrix(
        m11=left.m11 * right.m11 + left.m21.conjugate() * right.m21,
        m21=left.m21 * right.m11 + left.m11.conjugate() * right.m21,
        ref_energy=energy,
        cell_width=width,
    )


@dataclass(frozen=True)
class Amplitudes:
    """Transmission/reflection amplitudes for left incidence, with phases.

    eta = arg t and delta = arg r are principal values; delta is nan at
    perfect transmission where the reflection phase is undefined.  The
    convention flag records whether phases are referenced to the cell edges
    or to the coordinate origin (the two differ by propagation phases; see
    scattering.shift_convention).
    """

    t: complex
    r: complex
    convention: str = CELL_REFERENCED

    def __post_init__(self) -> None:
        if self.convention not in (CELL_REFERENCED, ORIGIN_REFERENCED):
            raise ValidationError(f"unknown convention {self.convention!r}")

    @property
    def eta(self) -> float:
        return cmath.phase(self.t)

    @property
    def delta(self) -> float:
        if self.r == 0:
            return math.nan
        return cmath.phase(self.r)

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    @property
    def R(self) -> float:
        return abs(self.r) ** 2

    @property
    def unitarity_defect(self) -> float:
        return abs(self.T + self.R - 1.0)


def _cos_and_sinc(ksq: float, w: float) -> tuple[float, float]:
    """cos(kw) and sin(kw)/k as functions of k^2, valid for either sign.

    For k^2 < 0 these are cosh(|k|w) and sinh(|k|w)/|k|.  Near k^2 = 0 a
    series in k^2 w^2 avoids the 0/0.
    """
    x = ksq * w * w
    if abs(x) < 1e-6:
        c = 1.0 - x / 2.0 + x * x / 24.0
        s = w * (1.0 - x / 6.0 + x * x / 120.0)
        return c, s
    if ksq > 0.0:
        k = math.sqrt(ksq)
        return math.cos(k * w), math.sin(k * w) / k
    kappa = math.sqrt(-ksq)
    return math.cosh(kappa * w), math.sinh(kappa * w) / kappa


def layer_matrix(E: float, layer: Layer, consts: PhysConstants = CONSTANTS) -> np.ndarray:
    """Propagator for u = (psi, psi'/m*) across one uniform layer; real, det 1."""
    ksq = (E - layer.potential) * layer.mass_ratio / consts.hbar2_over_2m0
    c, s = _cos_and_sinc(ksq, layer.width)
    m = layer.mass_ratio
    return np.array([[c, m * s], [-ksq * s / m, c]], dtype=float)


def _interior_propagator(E: float, cell: CellSpec, consts: PhysConstants) -> np.ndarray:
    T = np.eye(2)
    for layer in cell.layers:
        T = layer_matrix(E, layer, consts) @ T
    return T


def cell_matrix(
    E: float, cell: CellSpec, outside: Layer, consts: PhysConstants = CONSTANTS
) -> TransferMatrix:
    """Coefficient transfer matrix of one cell between identical leads.

    Requires a propagating lead channel (E above the lead band bottom).
    """
    if E <= outside.potential:
        raise NoTransmissionError(
            f"E = {E} meV is at or below the lead band bottom ({outside.potential} meV)"
        )
    k0 = math.sqrt((E - outside.potential) * outside.mass_ratio / consts.hbar2_over_2m0)
    q = k0 / outside.mass_ratio
    T = _interior_propagator(E, cell, consts)
    # M = W^{-1} T^{-1} W with W = [[1, 1], [iq, -iq]]; written out, with
    # T^{-1} = [[T22, -T12], [-T21, T11]] (det T = 1), this is:
    m11 = complex(0.5 * (T[0, 0] + T[1, 1]), 0.5 * (T[1, 0] / q - q * T[0, 1]))
    m21 = complex(0.5 * (T[1, 1] - T[0, 0]), -0.5 * (T[1, 0] / q + q * T[0, 1]))
    return TransferMatrix(m11, m21, ref_energy=E, cell_width=cell.width)


def stack_matrix(E: float, stack: StackSpec, consts: PhysConstants = CONSTANTS) -> TransferMatrix:
    """Total transfer matrix of a stack, ordered left cell first."""
    total = TransferMatrix(1.0 + 0.0j, 0.0 + 0.0j, ref_energy=E, cell_width=0.0)
    for cell in stack.cells():
        total = total @ cell_matrix(E, cell, stack.outside, consts)
    return total


def amplitudes(M: TransferMatrix) -> Amplitudes:
    """Cell-referenced t, r for left incidence."""
    return Amplitudes(t=1.0 / M.m11, r=M.m21 / M.m11, convention=CELL_REFERENCED)


@dataclass(frozen=True)
class SweepResult:
    """Amplitudes over an energy grid, with a continuous transmission phase.

    ``eta`` is the unwrapped phase of the cell-referenced t; the grid must be
    fine enough that the phase moves by less than pi/2 between samples.
    """

    energies: np.ndarray
    t: np.ndarray
    r: np.ndarray
    eta: np.ndarray

    @property
    def T(self) -> np.ndarray:
        return np.abs(self.t) ** 2


def sweep(stack: StackSpec, grid: EnergyGrid, consts: PhysConstants = CONSTANTS) -> SweepResult:
    """Evaluate amplitudes across an energy grid."""
    n = grid.count
    t = np.empty(n, dtype=complex)
    r = np.empty(n, dtype=complex)
    for i, E in enumerate(grid.samples):
        amp = amplitudes(stack_matrix(float(E), stack, consts))
        t[i] = amp.t
        r[i] = amp.r
    eta = unwrap_phases(np.angle(t))
    return SweepResult(energies=grid.samples.copy(), t=t, r=r, eta=eta)
