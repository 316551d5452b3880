"""Angle parameterization of a unit-cell transfer matrix, and band structure.

Inside an allowed band (|Tr M| < 2) a cell matrix in the time-reversal form
is fixed by three real angles (phi, mu, chi):

    M11 = cos(phi) - i sin(phi) cosh(mu)
    M21 = -i e^{i chi} sin(phi) sinh(mu)

phi is the Bloch phase per cell, mu >= 0 measures cell reflectivity (mu = 0
is a transparent cell), chi rotates the eigenvector basis and is 0 or pi
for mirror-symmetric cells.  The power law is what makes the form useful:
the N-cell matrix is the same expression with phi -> N phi at fixed mu,
chi, so every N-cell observable is elementary in these angles.

In a forbidden band the Bloch phase picks up an imaginary part,
phi -> p*pi + i*theta with cosh(theta) = |Tr M|/2; decompose classifies
rather than fails there, and the angle machinery applies only to the
allowed classification.

Energy derivatives are taken through the two smooth real functions
c = Tr M / 2 and g = |M21|^2 rather than through phi and mu directly,
which avoids branch cuts and |.| kinks entirely.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Protocol, Union

import numpy as np
from scipy.optimize import brentq

from .errors import NearBandEdgeError, NumericError
from .medium import CONSTANTS, CellSpec, EnergyGrid, Layer, PhysConstants
from .numerics import derivative, second_derivative
from .tmatrix import TransferMatrix, cell_matrix

__all__ = [
    "KardParams",
    "KardDerivatives",
    "CellModel",
    "PotentialCell",
    "as_model",
    "decompose",
    "reconstruct",
    "bloch_eigen",
    "Band",
    "band_structure",
    "band_phase",
    "energy_at_phase",
    "kard_derivatives",
]

#: |Tr M|/2 within this distance of 1 is classified as a band edge.
EDGE_TOL = 1e-9


@dataclass(frozen=True)
class KardParams:
    """Angles of one cell matrix, with its band classification.

    band is one of 'allowed', 'forbidden', 'edge'.  In an allowed band,
    (phi, mu, chi) are as in the module docstring and theta = 0.  In a
    forbidden band phi is the real part p*pi of the complex Bloch phase and
    theta > 0 its imaginary part; mu and chi are meaningless there (nan).
    """

    phi: float
    mu: float
    chi: float
    band: str = "allowed"
    theta: float = 0.0

    def scaled(self, n: int) -> "KardParams":
        """Angles of the n-cell matrix M^n (allowed band only)."""
        if self.band != "allowed":
            raise NearBandEdgeError(f"no n-cell angle scaling in a {self.band} region")
        return KardParams(n * self.phi, self.mu, self.chi)


def decompose(M: TransferMatrix, prev: KardParams | None = None) -> KardParams:
    """Angles and band classification of a cell matrix.

    In an allowed band phi is placed in (0, 2*pi): arccos of the half-trace
    gives (0, pi) and the sign of Im M11 = -sin(phi) cosh(mu) selects the
    half-plane.  When ``prev`` (the decomposition at a neighboring energy)
    is supplied, phi is additionally lifted by a multiple of 2*pi to the
    branch nearest prev.phi, so a sweep across many bands stays continuous.
    """
    c = 0.5 * M.trace
    if abs(abs(c) - 1.0) <= EDGE_TOL:
        p = 0.0 if c > 0 else math.pi
        return KardParams(phi=p, mu=math.nan, chi=math.nan, band="edge")
    if abs(c) > 1.0:
        p = 0.0 if c > 0 else math.pi
        return KardParams(phi=p, mu=math.nan, chi=math.nan, band="forbidden", theta=math.acosh(abs(c)))
    phi = math.acos(c)
    if M.m11.imag > 0.0:
        phi = 2.0 * math.pi - phi
    if prev is not None and prev.band == "allowed":
        phi += 2.0 * math.pi * round((prev.phi - phi) / (2.0 * math.pi))
    s = math.sin(phi)
    mu = math.asinh(abs(M.m21) / abs(s))
    if abs(M.m21) == 0.0:
        chi = 0.0
    elif s > 0.0:
        chi = cmath.phase(1j * M.m21)
    else:
        chi = cmath.phase(-1j * M.m21)
    return KardParams(phi, mu, chi)


def reconstruct(params: KardParams) -> TransferMatrix:
    """Cell matrix with the given allowed-band angles (inverse of decompose
    up to the 2*pi branch of phi)."""
    if params.band != "allowed":
        raise NearBandEdgeError(f"cannot reconstruct a matrix from {params.band} parameters")
    phi, mu, chi = params.phi, params.mu, params.chi
    m11 = complex(math.cos(phi), -math.sin(phi) * math.cosh(mu))
    m21 = -1j * cmath.exp(1j * chi) * math.sin(phi) * math.sinh(mu)
    return TransferMatrix(m11, m21)


def bloch_eigen(params: KardParams) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (e^{-i phi}, e^{+i phi}) and eigenvector matrix U.

    U diagonalizes the cell matrix, M U = U diag(e^{-i phi}, e^{+i phi}),
    and factorizes as a chi rotation times a mu boost; det U = 1.
    """
    if params.band != "allowed":
        raise NearBandEdgeError(f"no Bloch eigenbasis in a {params.band} region")
    phi, mu, chi = params.phi, params.mu, params.chi
    values = np.array([cmath.exp(-1j * phi), cmath.exp(1j * phi)])
    ch, sh = math.cosh(0.5 * mu), math.sinh(0.5 * mu)
    zm = cmath.exp(-0.5j * chi)
    zp = cmath.exp(0.5j * chi)
    U = np.array([[zm * ch, zm * sh], [zp * sh, zp * ch]], dtype=complex)
    return values, U


class CellModel(Protocol):
    """Anything that produces an in-band cell matrix as a function of energy.

    Band structure, timing curves, and resonance analysis are written
    against this interface, so a potential cell and a closed-form model cell
    are interchangeable.  ``trace`` must be smooth across band edges (the
    matrix itself need not exist there).
    """

    def trace(self, E: float) -> float: ...

    def matrix(self, E: float) -> TransferMatrix: ...


@dataclass(frozen=True)
class PotentialCell:
    """CellModel backed by an actual layered potential between given leads."""

    cell: CellSpec
    outside: Layer
    consts: PhysConstants = CONSTANTS

    def matrix(self, E: float) -> TransferMatrix:
        return cell_matrix(E, self.cell, self.outside, self.consts)

    def trace(self, E: float) -> float:
        return self.matrix(E).trace

    def kard(self, E: float) -> KardParams:
        return decompose(self.matrix(E))


def as_model(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    consts: PhysConstants = CONSTANTS,
) -> CellModel:
    """Accept either a CellModel or a raw (CellSpec, outside) pair."""
    if isinstance(cell, CellSpec):
        if outside is None:
            raise NumericError("a CellSpec needs its lead layer ('outside')")
        return PotentialCell(cell, outside, consts)
    return cell


@dataclass(frozen=True)
class Band:
    """One allowed band (or the part of it inside the scanned window).

    parity is the sign s in Tr M / 2 = s * cos(phi_local), where phi_local
    runs 0 -> pi across the band as E increases; odd-numbered bands have
    s = +1.  ``lower_is_edge``/``upper_is_edge`` distinguish true band edges
    from window truncation.
    """

    index: int
    lower: float
    upper: float
    parity: int
    lower_is_edge: bool = True
    upper_is_edge: bool = True

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def interior(self, margin: float = 1e-6) -> tuple[float, float]:
        pad = margin * self.width
        return self.lower + pad, self.upper - pad


def band_structure(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    grid: EnergyGrid | None = None,
    *,
    edge_tol: float = 1e-12,
) -> list[Band]:
    """Allowed bands of the periodic crystal built from this cell.

    Scans the half-trace on the grid samples, brackets every crossing of
    +-1, and polishes each edge with a root finder.  Bands cut by the scan
    window are included with the corresponding ``*_is_edge`` flag cleared.
    """
    model = as_model(cell, outside)
    if grid is None:
        raise NumericError("band_structure needs an energy grid to scan")
    samples = grid.samples
    half = np.array([0.5 * model.trace(float(E)) for E in samples])

    f = lambda E: abs(0.5 * model.trace(E)) - 1.0
    vals = np.abs(half) - 1.0
    edges: list[float] = []
    for i in range(len(samples) - 1):
        if vals[i] == 0.0:
            edges.append(float(samples[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            edges.append(float(brentq(f, samples[i], samples[i + 1], xtol=edge_tol, rtol=8.9e-16)))
    if vals[-1] == 0.0:
        edges.append(float(samples[-1]))

    e_lo, e_hi = float(samples[0]), float(samples[-1])
    bounds = [e_lo] + edges + [e_hi]
    bands: list[Band] = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi - lo < 10 * edge_tol:
            continue
        mid = 0.5 * (lo + hi)
        if abs(0.5 * model.trace(mid)) >= 1.0:
            continue
        # The half-trace is monotone across a band (parity * cos(phi_local)
        # with phi_local increasing), so its direction fixes the parity even
        # when the window truncates the band.
        delta = 1e-6 * (hi - lo)
        parity = 1 if model.trace(lo + delta) > model.trace(hi - delta) else -1
        bands.append(
            Band(
                index=len(bands) + 1,
                lower=lo,
                upper=hi,
                parity=parity,
                lower_is_edge=lo != e_lo,
                upper_is_edge=hi != e_hi,
            )
        )
    return bands


def band_phase(model: CellModel, band: Band, E: float) -> float:
    """Local Bloch phase in (0, pi), increasing across the band."""
    if not band.lower <= E <= band.upper:
        raise NumericError(f"E = {E} outside band [{band.lower}, {band.upper}]")
    c = 0.5 * model.trace(E) * band.parity
    return math.acos(max(-1.0, min(1.0, c)))


def energy_at_phase(model: CellModel, band: Band, phi_local: float) -> float:
    """Energy where the local Bloch phase reaches phi_local (root of the trace)."""
    if not 0.0 < phi_local < math.pi:
        raise NumericError(f"phi_local must be in (0, pi), got {phi_local}")
    target = math.cos(phi_local) * band.parity
    f = lambda E: 0.5 * model.trace(E) - target
    return float(brentq(f, band.lower, band.upper, xtol=1e-13, rtol=8.9e-16))


@dataclass(frozen=True)
class KardDerivatives:
    """Energy derivatives of the angles at one in-band energy (per meV)."""

    params: KardParams
    phi_p: float
    phi_pp: float
    mu_p: float


def default_step(band: Band | None = None) -> float:
    """Derivative step: 1e-3 of the band width, clamped to [1e-4, 1e-1] meV."""
    width = band.width if band is not None else 25.0
    return min(1e-1, max(1e-4, 1e-3 * width))


def kard_derivatives(
    cell: Union[CellModel, CellSpec],
    outside: Layer | None = None,
    E: float = 0.0,
    h: float | None = None,
    *,
    band: Band | None = None,
    consts: PhysConstants = CONSTANTS,
) -> KardDerivatives:
    """phi', phi'', mu' at energy E, via the smooth functions c(E) and g(E).

    c = Tr M / 2 = cos(phi) and g = |M21|^2 = sin^2(phi) sinh^2(mu) are
    smooth across the whole band, so five-point stencils on them give clean
    derivatives even where phi or |M21| would have branch issues:

        phi'  = -c' / sin(phi)
        phi'' = -(c'' + cos(phi) phi'^2) / sin(phi)
        mu'   = [g' (1 - c^2) + 2 c c' g] / [(1 - c^2)^2 sinh(2 mu)]

    The stencil must stay inside the band: E +- 2h is checked first.
    """
    model = as_model(cell, outside, consts)
    if h is None:
        h = default_step(band)
    for probe in (E - 2 * h, E + 2 * h):
        if abs(model.trace(probe)) >= 2.0:
            raise NearBandEdgeError(
                f"derivative stencil at E = {E} +- {2 * h} meV leaves the band"
            )
    params = decompose(model.matrix(E))
    if params.band != "allowed":
        raise NearBandEdgeError(f"E = {E} meV is in a {params.band} region")
    c = math.cos(params.phi)
    s = math.sin(params.phi)
    cfun = lambda x: 0.5 * model.trace(x)
    gfun = lambda x: abs(model.matrix(x).m21) ** 2
    c_p = derivative(cfun, E, h).real
    c_pp = second_derivative(cfun, E, h)
    g = gfun(E)
    g_p = derivative(gfun, E, h).real
    phi_p = -c_p / s
    phi_pp = -(c_pp + c * phi_p * phi_p) / s
    sinh2mu = math.sinh(2.0 * params.mu)
    one_m_c2 = 1.0 - c * c
    if sinh2mu == 0.0:
        # mu = 0 means |M21| = 0 exactly.  For a cell with no reflection at
        # any energy (a free cell) mu' = 0; for a cell transparent at an
        # isolated energy, mu has a kink and only the combination
        # tanh(mu) mu' -> 0 is meaningful, so 0 is the right limit either way.
        mu_p = 0.0
    else:
        mu_p = (g_p * one_m_c2 + 2.0 * c * c_p * g) / (one_m_c2 * one_m_c2 * sinh2mu)
    return KardDerivatives(params=params, phi_p=phi_p, phi_pp=phi_pp, mu_p=mu_p)
