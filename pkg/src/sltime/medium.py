"""Units, physical constants, and validated structure descriptions.

Unit conventions, fixed project-wide: energy in meV, length in nm, time in
fs, effective mass as a ratio to the bare electron mass.  The energy zero is
the conduction-band bottom of the (identical) semi-infinite leads, so any
E > 0 is a propagating lead channel.

A superlattice is described bottom-up: a ``Layer`` is a piecewise-constant
slab, a ``CellSpec`` is one unit cell (an ordered stack of layers), and a
``StackSpec`` is N replicas of a core cell with optional matching cells on
each end, embedded between the leads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ValidationError

__all__ = [
    "PhysConstants",
    "CONSTANTS",
    "Layer",
    "CellSpec",
    "StackSpec",
    "EnergyGrid",
    "local_wavenumber",
    "validate_stack",
    "stack_to_dict",
    "stack_from_dict",
    "load_stack",
    "save_stack",
    "representative_cell",
    "representative_stack",
]


@dataclass(frozen=True)
class PhysConstants:
    """Fundamental constants in the package units (meV, nm, fs).

    hbar            : reduced Planck constant, meV*fs
    hbar2_over_2m0  : hbar^2 / (2 m_e), meV*nm^2
    """

    hbar: float = 658.2119569
    hbar2_over_2m0: float = 38.0998

    def __post_init__(self) -> None:
        if self.hbar <= 0 or self.hbar2_over_2m0 <= 0:
            raise ValidationError("physical constants must be positive")

    def velocity(self, k: float, mass_ratio: float) -> float:
        """Group velocity hbar*k/m* in nm/fs for a plane wave in a uniform layer."""
        return 2.0 * self.hbar2_over_2m0 * k / (self.hbar * mass_ratio)


CONSTANTS = PhysConstants()


@dataclass(frozen=True)
class Layer:
    """One uniform slab: width (nm), band offset V (meV), m*/m_e ratio."""

    width: float
    potential: float
    mass_ratio: float

    def __post_init__(self) -> None:
        if not (self.width > 0):
            raise ValidationError(f"nonpositive width {self.width}")
        if not (self.mass_ratio > 0):
            raise ValidationError(f"nonpositive mass_ratio {self.mass_ratio}")
        if not math.isfinite(self.potential):
            raise ValidationError(f"non-finite potential {self.potential}")


def _layers_mirror_equal(layers: Sequence[Layer], rtol: float = 1e-12) -> bool:
    for a, b in zip(layers, reversed(layers)):
        for x, y in ((a.width, b.width), (a.potential, b.potential), (a.mass_ratio, b.mass_ratio)):
            scale = max(abs(x), abs(y), 1.0)
            if abs(x - y) > rtol * scale:
                return False
    return True


@dataclass(frozen=True)
class CellSpec:
    """A unit potential cell: ordered layers, plus a declared mirror symmetry."""

    layers: tuple[Layer, ...]
    symmetric: bool = False

    def __post_init__(self) -> None:
        layers = tuple(self.layers)
        object.__setattr__(self, "layers", layers)
        if len(layers) == 0:
            raise ValidationError("cell needs at least one layer")
        if self.symmetric and not _layers_mirror_equal(layers):
            raise ValidationError("symmetry flag contradicts layers")

    @property
    def width(self) -> float:
        return sum(l.width for l in self.layers)

    def mirrored(self) -> "CellSpec":
        """The cell traversed in the opposite direction."""
        return CellSpec(tuple(reversed(self.layers)), symmetric=self.symmetric)


@dataclass(frozen=True)
class StackSpec:
    """A finite superlattice: N core replicas, optional end cells, uniform leads.

    The leads are identical on both sides (no bias), described by ``outside``:
    its potential sets the energy reference and is normally 0.
    """

    core: CellSpec
    replicas: int
    outside: Layer
    left_arc: CellSpec | None = None
    right_arc: CellSpec | None = None

    def __post_init__(self) -> None:
        if self.replicas < 1:
            raise ValidationError(f"replicas must be >= 1, got {self.replicas}")

    @property
    def width(self) -> float:
        w = self.replicas * self.core.width
        if self.left_arc is not None:
            w += self.left_arc.width
        if self.right_arc is not None:
            w += self.right_arc.width
        return w

    def cells(self) -> list[CellSpec]:
        """All cells left to right, end cells included."""
        out: list[CellSpec] = []
        if self.left_arc is not None:
            out.append(self.left_arc)
        out.extend([self.core] * self.replicas)
        if self.right_arc is not None:
            out.append(self.right_arc)
        return out

    def segments(self) -> list[Layer]:
        """Flat layer sequence of the scattering region, left to right."""
        out: list[Layer] = []
        for cell in self.cells():
            out.extend(cell.layers)
        return out


def validate_stack(stack: StackSpec, consts: PhysConstants = CONSTANTS) -> StackSpec:
    """Check every invariant of a stack and return it unchanged.

    Dataclass constructors already reject most malformed input; this gathers
    all violations (useful when a stack comes from a file) and raises one
    ValidationError listing them.  Idempotent.
    """
    problems: list[str] = []
    try:
        if stack.replicas < 1:
            problems.append(f"replicas must be >= 1, got {stack.replicas}")
    except TypeError:
        problems.append("replicas is not an integer")
    for name, cell in (("core", stack.core), ("left_arc", stack.left_arc), ("right_arc", stack.right_arc)):
        if cell is None:
            continue
        for i, layer in enumerate(cell.layers):
            if not layer.width > 0:
                problems.append(f"{name} layer {i}: nonpositive width")
            if not layer.mass_ratio > 0:
                problems.append(f"{name} layer {i}: nonpositive mass_ratio")
        if cell.symmetric and not _layers_mirror_equal(cell.layers):
            problems.append(f"{name}: symmetry flag contradicts layers")
    if not stack.outside.mass_ratio > 0:
        problems.append("outside: nonpositive mass_ratio")
    if problems:
        raise ValidationError("; ".join(problems))
    return stack


def local_wavenumber(E: float, layer: Layer, consts: PhysConstants = CONSTANTS) -> complex:
    """Complex wavenumber in a uniform layer at energy E.

    Branch convention: positive real part for a propagating wave (E > V),
    positive imaginary part for an evanescent one (E < V).  E exactly at the
    layer band bottom returns 0.
    """
    if not math.isfinite(E):
        raise ValidationError(f"non-finite energy {E}")
    ksq = (E - layer.potential) * layer.mass_ratio / consts.hbar2_over_2m0
    if ksq >= 0.0:
        return complex(math.sqrt(ksq), 0.0)
    return complex(0.0, math.sqrt(-ksq))


@dataclass(frozen=True)
class EnergyGrid:
    """Strictly increasing energy samples, all above the lead band bottom."""

    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size < 2:
            raise ValidationError("grid needs at least 2 samples")
        if not np.all(np.diff(samples) > 0):
            raise ValidationError("grid samples must be strictly increasing")
        if samples[0] <= 0:
            raise ValidationError("grid samples must be positive (above lead band bottom)")

    @classmethod
    def linear(cls, e_min: float, e_max: float, count: int) -> "EnergyGrid":
        if not e_min < e_max:
            raise ValidationError(f"need e_min < e_max, got [{e_min}, {e_max}]")
        if count < 2:
            raise ValidationError(f"count must be >= 2, got {count}")
        return cls(np.linspace(e_min, e_max, count))

    @property
    def e_min(self) -> float:
        return float(self.samples[0])

    @property
    def e_max(self) -> float:
        return float(self.samples[-1])

    @property
    def count(self) -> int:
        return int(self.samples.size)


# --- stack file format -----------------------------------------------------

def _layer_to_dict(layer: Layer) -> dict:
    return {"width_nm": layer.width, "V_meV": layer.potential, "mass_ratio": layer.mass_ratio}


def _layer_from_dict(d: dict) -> Layer:
    try:
        return Layer(float(d["width_nm"]), float(d["V_meV"]), float(d["mass_ratio"]))
    except KeyError as exc:
        raise ValidationError(f"layer entry missing key {exc}") from exc


def _cell_to_dict(cell: CellSpec) -> dict:
    return {"layers": [_layer_to_dict(l) for l in cell.layers], "symmetric": cell.symmetric}


def _cell_from_dict(d: dict) -> CellSpec:
    if "layers" not in d:
        raise ValidationError("cell entry missing 'layers'")
    return CellSpec(tuple(_layer_from_dict(l) for l in d["layers"]), symmetric=bool(d.get("symmetric", False)))


def stack_to_dict(stack: StackSpec) -> dict:
    return {
        "outside": _layer_to_dict(stack.outside),
        "core": _cell_to_dict(stack.core),
        "replicas": stack.replicas,
        "left_arc": None if stack.left_arc is None else _cell_to_dict(stack.left_arc),
        "right_arc": None if stack.right_arc is None else _cell_to_dict(stack.right_arc),
    }


def stack_from_dict(d: dict) -> StackSpec:
    for key in ("outside", "core", "replicas"):
        if key not in d:
            raise ValidationError(f"stack file missing key '{key}'")
    stack = StackSpec(
        core=_cell_from_dict(d["core"]),
        replicas=int(d["replicas"]),
        outside=_layer_from_dict(d["outside"]),
        left_arc=None if d.get("left_arc") is None else _cell_from_dict(d["left_arc"]),
        right_arc=None if d.get("right_arc") is None else _cell_from_dict(d["right_arc"]),
    )
    return validate_stack(stack)


def load_stack(path: str | Path) -> StackSpec:
    path = Path(path)
    if not path.exists():
        raise ValidationError(f"stack file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"stack file {path} is not valid JSON: {exc}") from exc
    return stack_from_dict(data)


def save_stack(stack: StackSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(stack_to_dict(stack), indent=2) + "\n")


# --- representative structure ----------------------------------------------

#: Lead layer used by the representative stack: GaAs, energy zero at its
#: conduction-band bottom.  The width only sets a default cell-scale margin
#: for dwell integrals; leads are semi-infinite.
GAAS_MASS = 0.067
ALGAAS_MASS = 0.0919
ALGAAS_OFFSET_MEV = 290.0


def representative_cell() -> CellSpec:
    """A representative GaAs/AlGaAs superlattice unit cell.

    Well-centered and mirror symmetric: half well / barrier / half well.
    Centering the barrier makes the single cell strictly reflective below
    the barrier top (no cell-internal resonator), so its reflectivity angle
    stays positive across the low bands; and since the well material equals
    the lead material, an N-cell array is physically just N barriers, the
    outermost half wells blending into the leads.  The numbers are
    representative of GaAs/Al(0.3)Ga(0.7)As transport structures, not a
    published device.
    """
    half_well = Layer(3.25, 0.0, GAAS_MASS)
    barrier = Layer(3.0, ALGAAS_OFFSET_MEV, ALGAAS_MASS)
    return CellSpec((half_well, barrier, half_well), symmetric=True)


def representative_stack(replicas: int = 5) -> StackSpec:
    """The representative N-cell array between GaAs leads, no end cells."""
    return StackSpec(
        core=representative_cell(),
        replicas=replicas,
        outside=Layer(9.5, 0.0, GAAS_MASS),
    )
