"""A closed-form single-band cell model for exercising the angle machinery.

Instead of a layered potential, the cell is specified directly by two
elementary laws on its band [50, 75] meV:

    cos(phi) = lam * (E_bragg - E),        lam = 0.08 / meV
    |t|^(-2) = 1 + t2_strength / E,        t2_strength = 160 meV

Everything else follows: sin(phi) sinh(mu) = |m21| = sqrt(t2_strength / E),
so mu comes for free, and chi = 0 by symmetry.  Because phi(E) and mu(E)
are elementary, their energy derivatives are available in closed form,
which makes this model the gold standard for validating the
finite-difference derivative machinery in kard.kard_derivatives.

The model satisfies the CellModel protocol (trace is the linear law above,
defined at every energy; matrix exists only on the open band interior), so
band structure, timing curves, and resonance analysis all run on it
unchanged.  It has no spatial profile, so nothing that needs V(x)
(dwell-time integrals, wave-packet runs) can consume it: those operations
take a layered stack and there is none here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NearBandEdgeError
from .kard import KardDerivatives, KardParams, reconstruct
from .tmatrix import TransferMatrix

__all__ = [
    "PlayModelSpec",
    "PLAY_MODEL",
    "play_kard",
    "play_matrix",
    "play_eta",
    "play_derivatives",
]


@dataclass(frozen=True)
class PlayModelSpec:
    """Parameters of the closed-form model; defaults are the standard set."""

    lam: float = 0.08  # 1/meV, slope of cos(phi) in energy
    e_bragg: float = 62.5  # meV, band-center energy where phi = pi/2
    t2_strength: float = 160.0  # meV, in |t|^-2 = 1 + t2_strength/E

    @property
    def band(self) -> tuple[float, float]:
        """Band edges, where cos(phi) reaches +-1."""
        return (self.e_bragg - 1.0 / self.lam, self.e_bragg + 1.0 / self.lam)

    def _require_interior(self, E: float) -> None:
        lo, hi = self.band
        if not lo < E < hi:
            raise NearBandEdgeError(
                f"E = {E} meV is not inside the open band ({lo}, {hi}) meV"
            )
        if E <= 0.0:
            raise NearBandEdgeError(f"E = {E} meV must be positive")

    # -- CellModel protocol ------------------------------------------------

    def trace(self, E: float) -> float:
        """2 cos(phi), extended by the same linear law at every energy."""
        return 2.0 * self.lam * (self.e_bragg - E)

    def matrix(self, E: float) -> TransferMatrix:
        return play_matrix(E, self)

    def kard(self, E: float) -> KardParams:
        return play_kard(E, self)


PLAY_MODEL = PlayModelSpec()


def play_kard(E: float, spec: PlayModelSpec = PLAY_MODEL) -> KardParams:
    """Cell angles at energy E, from the two closed-form laws.

    The transmission law fixes the cell reflectivity through
    sinh(mu) = sqrt(t2_strength/E) / sin(phi); mu diverges at both band
    edges, where sin(phi) -> 0 while the numerator stays finite.
    """
    spec._require_interior(E)
    cos_phi = spec.lam * (spec.e_bragg - E)
    phi = math.acos(cos_phi)
    sinh_mu = math.sqrt(spec.t2_strength / E) / math.sin(phi)
    return KardParams(phi=phi, mu=math.asinh(sinh_mu), chi=0.0)


def play_matrix(E: float, spec: PlayModelSpec = PLAY_MODEL) -> TransferMatrix:
    """Cell transfer matrix carrying the model's angles.

    Feeds every downstream consumer identically to a potential-derived
    matrix; it just has no cell_width, having no spatial extent.
    """
    return replace(reconstruct(play_kard(E, spec)), ref_energy=E)


def play_eta(E: float, spec: PlayModelSpec = PLAY_MODEL) -> float:
    """Single-cell transmission phase, on the branch with eta(E_bragg) = pi/2.

    cos(eta) = |t| cos(phi) leaves a quadrant choice; taking eta in (0, pi)
    makes it continuous and increasing across the band and equal to phi at
    the band center, where both pass through pi/2.
    """
    spec._require_interior(E)
    cos_phi = spec.lam * (spec.e_bragg - E)
    t_abs = 1.0 / math.sqrt(1.0 + spec.t2_strength / E)
    return math.acos(t_abs * cos_phi)


def play_derivatives(E: float, spec: PlayModelSpec = PLAY_MODEL) -> KardDerivatives:
    """Closed-form energy derivatives of the angles.

    Differentiating cos(phi) = lam (E_bragg - E):

        phi'  = lam / sin(phi)
        phi'' = -lam^2 cos(phi) / sin^3(phi)

    and sinh(mu) = sqrt(t2_strength/E)/sin(phi) gives, after dividing by
    cosh(mu),

        mu' = -tanh(mu) [ 1/(2E) + lam cos(phi)/sin^2(phi) ].
    """
    params = play_kard(E, spec)
    s = math.sin(params.phi)
    c = math.cos(params.phi)
    phi_p = spec.lam / s
    phi_pp = -spec.lam * spec.lam * c / (s * s * s)
    mu_p = -math.tanh(params.mu) * (0.5 / E + spec.lam * c / (s * s))
    return KardDerivatives(params=params, phi_p=phi_p, phi_pp=phi_pp, mu_p=mu_p)
