"""Host-material parameters and effective atomic scales.

A semiconductor host renormalizes the hydrogenic scales that set every
detector figure of merit in this package: the effective Rydberg shrinks
by (m*/m_e)/epsilon_r**2 and the effective Bohr radius grows by
epsilon_r/(m*/m_e).  ``effective_scales`` applies that scaling once so
the device models never touch the raw material numbers.

Materials are looked up by name from a small built-in table (see
``data/materials.tab``); extra tables can be merged in from files of the
same format, e.g. via the CHARGE_LIMIT_MATERIALS environment variable
handled by the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from .constants import CONSTANTS
from .errors import ParameterError

__all__ = [
    "Material",
    "EffectiveScales",
    "effective_scales",
    "parse_materials_table",
    "load_materials_file",
    "builtin_materials",
    "canonical_name",
    "VACUUM",
    "GAAS_LIKE",
]


@dataclass(frozen=True)
class Material:
    """A host medium for the conduction electrons.

    Parameters
    ----------
    name : str
        Identifier used for table lookup and reporting.
    mass_ratio : float
        Effective mass over the free-electron mass, m*/m_e.  > 0.
    epsilon_r : float
        Relative (static) dielectric constant.  >= 1.
    """

    name: str
    mass_ratio: float
    epsilon_r: float

    def __post_init__(self) -> None:
        if not (self.mass_ratio > 0.0 and math.isfinite(self.mass_ratio)):
            raise ParameterError(
                f"mass_ratio must be > 0 and finite, got {self.mass_ratio!r}"
            )
        if not (self.epsilon_r >= 1.0 and math.isfinite(self.epsilon_r)):
            raise ParameterError(
                f"epsilon_r must be >= 1 (vacuum), got {self.epsilon_r!r}"
            )


@dataclass(frozen=True)
class EffectiveScales:
    """Hydrogenic scales rescaled for a host material (SI units)."""

    rydberg_energy: float    # effective Rydberg [J]
    rydberg_frequency: float  # effective Rydberg / h [Hz]
    bohr_radius: float       # effective Bohr radius [m]
    scale_factor: float      # (m*/m_e) / epsilon_r^2, dimensionless


def effective_scales(material: Material) -> EffectiveScales:
    """Return the effective Rydberg and Bohr radius inside a material.

    The binding-energy scale picks up (m*/m_e)/epsilon_r**2 and the
    length scale the inverse, epsilon_r/(m*/m_e).  For vacuum
    (mass_ratio = 1, epsilon_r = 1) the returned values equal the
    vacuum constants exactly, not merely to rounding.
    """
    scale = material.mass_ratio / material.epsilon_r**2
    if material.mass_ratio == 1.0 and material.epsilon_r == 1.0:
        # Exact degeneracy with vacuum; skip the multiply/divide round trips.
        return EffectiveScales(
            rydberg_energy=CONSTANTS.rydberg_energy,
            rydberg_frequency=CONSTANTS.rydberg_frequency,
            bohr_radius=CONSTANTS.bohr_radius,
            scale_factor=1.0,
        )
    return EffectiveScales(
        rydberg_energy=CONSTANTS.rydberg_energy * scale,
        rydberg_frequency=CONSTANTS.rydberg_frequency * scale,
        bohr_radius=CONSTANTS.bohr_radius * material.epsilon_r / material.mass_ratio,
        scale_factor=scale,
    )


def canonical_name(name: str) -> str:
    """Normalize a material name for lookup (case- and '-like'-insensitive)."""
    out = name.strip().lower()
    if out.endswith("-like"):
        out = out[: -len("-like")]
    return out


def parse_materials_table(lines: Iterable[str], source: str = "<table>") -> dict[str, Material]:
    """Parse a whitespace-delimited materials table.

    Each non-blank, non-comment line is ``name  m_star_ratio  epsilon_r``.
    ``#`` starts a comment (full-line or trailing).  Returns a dict keyed
    by canonical name; later duplicate names override earlier ones.
    """
    table: dict[str, Material] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParameterError(
                f"{source}:{lineno}: expected 'name m_star_ratio epsilon_r', got {raw.rstrip()!r}"
            )
        name = parts[0]
        try:
            mass_ratio = float(parts[1])
            epsilon_r = float(parts[2])
        except ValueError as exc:
            raise ParameterError(f"{source}:{lineno}: {exc}") from None
        try:
            mat = Material(name=name, mass_ratio=mass_ratio, epsilon_r=epsilon_r)
        except ParameterError as exc:
            raise ParameterError(f"{source}:{lineno}: {exc}") from None
        table[canonical_name(name)] = mat
    return table


def load_materials_file(path: str | Path) -> dict[str, Material]:
    """Load a materials table from a file path."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParameterError(f"cannot read materials table {p}: {exc}") from None
    return parse_materials_table(text.splitlines(), source=str(p))


def builtin_materials() -> dict[str, Material]:
    """Return the table shipped with the package."""
    text = (
        resources.files("chargelimit")
        .joinpath("data/materials.tab")
        .read_text()
    )
    return parse_materials_table(text.splitlines(), source="builtin materials.tab")


#: Free electrons in vacuum — the reference host.
VACUUM = Material(name="vacuum", mass_ratio=1.0, epsilon_r=1.0)

#: Illustrative GaAs-like host (light effective mass, strong screening).
GAAS_LIKE = Material(name="gaas", mass_ratio=0.067, epsilon_r=12.9)
