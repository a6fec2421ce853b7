"""Speed and sensitivity limits for three single-electron charge detectors.

Each detector senses one elementary charge through the current change it
induces in a nearby channel, and each is reduced here to the same two
numbers: the bandwidth at which the amplitude SNR crosses unity
(``f_unity``) and the equivalent charge sensitivity 1/sqrt(f_unity) in
e/sqrt(Hz).

Three archetypes are modeled:

* **wire** — a cylindrical-channel FET biased at the largest voltage the
  sensed charge can still pinch off, e/(epsilon_r * R) in Gaussian form.
  Channel radius and bias cancel out of the SNR, which lands on the
  square root of the material's effective Rydberg frequency over the
  bandwidth.
* **qpc** — a quantum point contact one spin-degenerate sub-band wide;
  the energy window is the sub-band spacing of the confining well.
* **set** — a single-electron transistor whose island is a thin
  conducting disk; the energy window is the charging energy e^2/2C.

Every device exposes both a closed-form SNR and a step-by-step pipeline
(bias -> conductance -> current -> generic noise SNR); the two routes
agree to relative 1e-12 and the tests enforce it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Union

from .constants import CONSTANTS
from .errors import ParameterError
from .materials import Material, effective_scales
from .noise import NoiseBreakdown, OperatingPoint, noise_breakdown
from .noise import snr as amplitude_snr

__all__ = [
    "WireGeometry",
    "QpcGeometry",
    "SetGeometry",
    "WireDevice",
    "QpcDevice",
    "SetDevice",
    "DeviceSpec",
    "TransportState",
    "SetElectrostatics",
    "SnrResult",
    "ModelValidityWarning",
    "wire_optimal_bias",
    "wire_mode_count",
    "wire_sense_current",
    "wire_snr",
    "wire_pipeline_snr",
    "qpc_subband_spacing",
    "qpc_snr",
    "qpc_pipeline_snr",
    "set_island_capacitance",
    "set_blockade",
    "set_snr",
    "set_pipeline_snr",
    "device_snr",
    "device_operating_point",
    "unity_snr_bandwidth",
    "sensitivity",
]

# --------------------------------------------------------------------------
# Spin-degeneracy bookkeeping, kept in one block so the conventions can be
# audited (or flipped) together:
#   * wire: the 2D density of states m*/(pi*hbar^2) counts both spin
#     orientations already, so each of the N modes it yields carries e^2/h.
#   * qpc: one spatial sub-band with an explicit spin factor 2 -> G = 2e^2/h.
#   * set: the on-state conductance is likewise taken as 2e^2/h.  A stricter
#     convention caps a sequential-tunneling SET at e^2/h (one spin-split
#     level conducts at a time); we keep the factor 2 because only then does
#     the charging-energy form of the SNR reduce exactly to the Rydberg form
#     that the identity tests check.  Flipping SET_SPIN_DEGENERACY to 1.0
#     costs sqrt(2) in SNR and breaks that reduction.
# --------------------------------------------------------------------------
WIRE_CONDUCTANCE_PER_MODE = CONSTANTS.e**2 / CONSTANTS.h  # [S]
QPC_SPIN_DEGENERACY = 2.0
SET_SPIN_DEGENERACY = 2.0


class ModelValidityWarning(UserWarning):
    """A parameter choice leaves the regime where the model is trustworthy."""


def _require_positive(value: float, name: str) -> None:
    if not (value > 0.0 and math.isfinite(value)):
        raise ParameterError(f"{name} must be > 0 and finite, got {value!r}")


@dataclass(frozen=True)
class WireGeometry:
    """Cylindrical FET channel of radius ``radius`` (m, > 0)."""

    radius: float

    def __post_init__(self) -> None:
        _require_positive(self.radius, "radius")


@dataclass(frozen=True)
class QpcGeometry:
    """Point-contact constriction of width ``width`` (m, > 0).

    The single-mode picture assumes the width is about half the carrier
    de Broglie wavelength, so only the lowest sub-band conducts.
    """

    width: float

    def __post_init__(self) -> None:
        _require_positive(self.width, "width")


@dataclass(frozen=True)
class SetGeometry:
    """Thin conducting disk island of radius ``island_radius`` (m, > 0)."""

    island_radius: float

    def __post_init__(self) -> None:
        _require_positive(self.island_radius, "island_radius")


@dataclass(frozen=True)
class WireDevice:
    geometry: WireGeometry
    material: Material


@dataclass(frozen=True)
class QpcDevice:
    geometry: QpcGeometry
    material: Material


@dataclass(frozen=True)
class SetDevice:
    """A metallic-island SET; only the dielectric environment matters."""

    geometry: SetGeometry
    epsilon_r: float

    def __post_init__(self) -> None:
        if not (self.epsilon_r >= 1.0 and math.isfinite(self.epsilon_r)):
            raise ParameterError(
                f"epsilon_r must be >= 1 (vacuum), got {self.epsilon_r!r}"
            )


DeviceSpec = Union[WireDevice, QpcDevice, SetDevice]


@dataclass(frozen=True)
class TransportState:
    """Channel transport quantities behind an SNR figure (SI units).

    ``conductance`` always equals ``n_modes * e^2/h`` under the
    spin-counting conventions at the top of this module.
    """

    n_modes: float        # spin-resolved conducting modes, >= 0
    kinetic_energy: float  # carrier kinetic-energy window e*bias [J]
    bias: float           # source-drain bias [V]
    conductance: float    # [S]
    current: float        # sense current [A]


@dataclass(frozen=True)
class SetElectrostatics:
    """Island electrostatics of an SET (SI units)."""

    capacitance: float       # island self-capacitance [F]
    charging_energy: float   # e^2/(2C) [J]
    blockade_voltage: float  # e/(2C) [V]


@dataclass(frozen=True)
class SnrResult:
    """SNR of a detector at one bandwidth, plus its unity-SNR summary.

    Attributes
    ----------
    snr : float
        Amplitude SNR at the requested bandwidth.
    f_unity : float
        Bandwidth (Hz) where the SNR crosses 1; snr = sqrt(f_unity/df).
    sensitivity : float
        Equivalent charge sensitivity 1/sqrt(f_unity) in e/sqrt(Hz).
    breakdown : NoiseBreakdown
        Shot/thermal noise split at the operating point used.
    transport : TransportState or SetElectrostatics
        The physical state behind the numbers.
    flags : tuple of str
        Model-validity annotations (e.g. ``"bias-above-optimal"``);
        empty when the result is inside the model's comfort zone.
    """

    snr: float
    f_unity: float
    sensitivity: float
    breakdown: NoiseBreakdown
    transport: TransportState | SetElectrostatics
    flags: tuple[str, ...] = ()


def _check_modulation(modulation: float) -> None:
    if not (0.0 < modulation <= 1.0):
        raise ParameterError(
            f"modulation depth must be in (0, 1], got {modulation!r}"
        )


def _sensitivity_from_unity(f_unity: float) -> float:
    return 1.0 / math.sqrt(f_unity) if f_unity > 0.0 else math.inf


def _pipeline_result(
    *,
    conductance: float,
    bias: float,
    temperature: float,
    bandwidth: float,
    modulation: float,
    transport: TransportState | SetElectrostatics,
    flags: tuple[str, ...],
) -> SnrResult:
    """Generic pipeline tail: operating point -> SNR -> unity bandwidth.

    The signal is ``modulation`` times the sense current while the noise
    is evaluated at the full current, so a partial modulation depth
    scales the SNR linearly and f_unity quadratically.  Both intrinsic
    noise terms grow linearly with bandwidth, hence snr^2 * bandwidth is
    bandwidth-independent and equals f_unity at any temperature.
    """
    op = OperatingPoint(
        conductance=conductance,
        bias=bias,
        temperature=temperature,
        bandwidth=bandwidth,
    )
    value = modulation * amplitude_snr(op)
    f_unity = value * value * bandwidth
    return SnrResult(
        snr=value,
        f_unity=f_unity,
        sensitivity=_sensitivity_from_unity(f_unity),
        breakdown=noise_breakdown(op),
        transport=transport,
        flags=flags,
    )


# --------------------------------------------------------------------------
# Case 1: cylindrical-wire FET
# --------------------------------------------------------------------------

def wire_optimal_bias(geometry: WireGeometry, material: Material) -> float:
    """Largest useful source-drain bias for a wire channel, in volts.

    One sensed electron at the surface can pinch the channel off only
    while the drain pull on carriers stays below its own potential,
    which caps the bias at e/(epsilon_r * R) (Gaussian form); in SI that
    is e/(4*pi*eps0*epsilon_r*R).
    """
    return CONSTANTS.e_sq_gauss / (
        CONSTANTS.e * material.epsilon_r * geometry.radius
    )


def wire_mode_count(
    geometry: WireGeometry,
    material: Material,
    bias: float,
    *,
    floor_modes: bool = False,
) -> float:
    """Number of conducting modes of a wire channel at a given bias.

    The carrier kinetic-energy window is e*bias, and the 2D density of
    states m*/(pi*hbar^2) (spin included) over the cross-section
    pi*R^2 gives

        N = (m*/(pi*hbar^2)) * pi*R^2 * e*bias

    which at the optimal bias collapses to R / a_star with a_star the
    material's effective Bohr radius.

    Parameters
    ----------
    bias : float
        Source-drain bias in V, >= 0.  A bias above the optimal value
        triggers a ModelValidityWarning: the drain then overwhelms the
        pinch-off potential of the sensed charge and the on/off picture
        degrades.
    floor_modes : bool, optional
        If True, floor the continuous mode count to an integer.  The
        closed-form cancellations hold only in the continuous default.
    """
    if not (bias >= 0.0 and math.isfinite(bias)):
        raise ParameterError(f"bias must be >= 0 and finite, got {bias!r}")
    if bias > wire_optimal_bias(geometry, material):
        warnings.warn(
            "bias exceeds the pinch-off-limited optimum; mode count is "
            "evaluated anyway but single-charge switching is no longer assured",
            ModelValidityWarning,
            stacklevel=2,
        )
    mass = material.mass_ratio * CONSTANTS.m_e
    count = mass * geometry.radius**2 * CONSTANTS.e * bias / CONSTANTS.hbar**2
    return float(math.floor(count)) if floor_modes else count


def wire_sense_current(material: Material) -> float:
    """On-state sense current of an optimally biased wire, in amperes.

    The channel-radius and bias dependencies cancel, leaving twice the
    elementary charge per period of the material's effective Rydberg
    frequency: I = 2*e*f_Ry_star.  Vacuum value ~1.05 mA.
    """
    return 2.0 * CONSTANTS.e * effective_scales(material).rydberg_frequency


def wire_snr(
    material: Material,
    bandwidth: float,
    *,
    modulation: float = 1.0,
) -> SnrResult:
    """Closed-form wire-FET SNR at a given bandwidth.

    snr = sqrt(f_Ry_star / bandwidth): the unity-SNR bandwidth of the
    wire detector is the effective Rydberg frequency of its host,
    independent of channel radius.  The transport state reported uses
    the reference radius R = a_star where exactly one mode conducts.
    """
    _check_modulation(modulation)
    if not (bandwidth > 0.0 and math.isfinite(bandwidth)):
        raise ParameterError(f"bandwidth must be > 0 and finite, got {bandwidth!r}")
    scales = effective_scales(material)
    f_unity = modulation**2 * scales.rydberg_frequency
    value = modulation * math.sqrt(scales.rydberg_frequency / bandwidth)
    reference = WireGeometry(radius=scales.bohr_radius)
    bias = wire_optimal_bias(reference, material)
    current = wire_sense_current(material)
    conductance = current / bias
    op = OperatingPoint(
        conductance=conductance, bias=bias, temperature=0.0, bandwidth=bandwidth
    )
    transport = TransportState(
        n_modes=conductance / WIRE_CONDUCTANCE_PER_MODE,
        kinetic_energy=CONSTANTS.e * bias,
        bias=bias,
        conductance=conductance,
        current=current,
    )
    return SnrResult(
        snr=value,
        f_unity=f_unity,
        sensitivity=_sensitivity_from_unity(f_unity),
        breakdown=noise_breakdown(op),
        transport=transport,
        flags=(),
    )


def wire_pipeline_snr(
    geometry: WireGeometry,
    material: Material,
    bandwidth: float,
    *,
    bias: float | None = None,
    temperature: float = 0.0,
    modulation: float = 1.0,
    floor_modes: bool = False,
) -> SnrResult:
    """Step-by-step wire-FET SNR: bias -> modes -> conductance -> current.

    With the default optimal bias and T = 0 this reproduces
    :func:`wire_snr` to relative 1e-12 for any radius — the geometry
    dependence cancels.  An explicit ``bias`` or finite temperature
    moves the result off the closed form, which is the point of having
    the pipeline.
    """
    _check_modulation(modulation)
    optimal = wire_optimal_bias(geometry, material)
    flags: tuple[str, ...] = ()
    if bias is None:
        bias = optimal
    elif bias > optimal:
        flags = ("bias-above-optimal",)
    modes = wire_mode_count(geometry, material, bias, floor_modes=floor_modes)
    if floor_modes:
        flags = flags + ("floored-modes",)
    conductance = modes * WIRE_CONDUCTANCE_PER_MODE
    transport = TransportState(
        n_modes=modes,
        kinetic_energy=CONSTANTS.e * bias,
        bias=bias,
        conductance=conductance,
        current=conductance * bias,
    )
    return _pipeline_result(
        conductance=conductance,
        bias=bias,
        temperature=temperature,
        bandwidth=bandwidth,
        modulation=modulation,
        transport=transport,
        flags=flags,
    )


# --------------------------------------------------------------------------
# Case 2: quantum point contact
# --------------------------------------------------------------------------

def qpc_subband_spacing(geometry: QpcGeometry, material: Material) -> float:
    """Energy spacing between the two lowest sub-bands of the constriction, J.

    For hard-wall confinement of width W the levels go as n^2, so the
    spacing is three times the ground level:

        spacing = 3*pi^2*hbar^2 / (2*m* *W^2)
    """
    mass = material.mass_ratio * CONSTANTS.m_e
    return (
        3.0 * math.pi**2 * CONSTANTS.hbar**2 / (2.0 * mass * geometry.width**2)
    )


def _qpc_transport(geometry: QpcGeometry, material: Material) -> TransportState:
    spacing = qpc_subband_spacing(geometry, material)
    bias = spacing / CONSTANTS.e
    conductance = QPC_SPIN_DEGENERACY * WIRE_CONDUCTANCE_PER_MODE
    return TransportState(
        n_modes=QPC_SPIN_DEGENERACY,
        kinetic_energy=spacing,
        bias=bias,
        conductance=conductance,
        current=conductance * bias,
    )


def qpc_snr(
    geometry: QpcGeometry,
    material: Material,
    bandwidth: float,
    *,
    modulation: float = 1.0,
) -> SnrResult:
    """Closed-form QPC SNR at a given bandwidth.

    One spin-degenerate sub-band (G = 2e^2/h) biased across the sub-band
    spacing gives snr = sqrt(spacing/(h*bandwidth)), i.e. f_unity is the
    sub-band spacing expressed as a frequency.  Equivalently, in terms
    of hydrogenic scales,

        snr^2 = 3*pi^2 * (Ry/(h*df)) * (m_e/m*) * (a0/W)^2

    and the tests hold the two forms together to relative 1e-12.
    """
    _check_modulation(modulation)
    if not (bandwidth > 0.0 and math.isfinite(bandwidth)):
        raise ParameterError(f"bandwidth must be > 0 and finite, got {bandwidth!r}")
    spacing = qpc_subband_spacing(geometry, material)
    f_base = spacing / CONSTANTS.h
    f_unity = modulation**2 * f_base
    value = modulation * math.sqrt(f_base / bandwidth)
    transport = _qpc_transport(geometry, material)
    op = OperatingPoint(
        conductance=transport.conductance,
        bias=transport.bias,
        temperature=0.0,
        bandwidth=bandwidth,
    )
    return SnrResult(
        snr=value,
        f_unity=f_unity,
        sensitivity=_sensitivity_from_unity(f_unity),
        breakdown=noise_breakdown(op),
        transport=transport,
        flags=(),
    )


def qpc_pipeline_snr(
    geometry: QpcGeometry,
    material: Material,
    bandwidth: float,
    *,
    bias: float | None = None,
    temperature: float = 0.0,
    modulation: float = 1.0,
) -> SnrResult:
    """Step-by-step QPC SNR through the generic noise machinery.

    The default bias drops the full sub-band spacing across the
    constriction; T = 0 with that default matches :func:`qpc_snr` to
    relative 1e-12.
    """
    _check_modulation(modulation)
    reference = _qpc_transport(geometry, material)
    if bias is None:
        bias = reference.bias
    if not (bias >= 0.0 and math.isfinite(bias)):
        raise ParameterError(f"bias must be >= 0 and finite, got {bias!r}")
    conductance = reference.conductance
    transport = TransportState(
        n_modes=reference.n_modes,
        kinetic_energy=CONSTANTS.e * bias,
        bias=bias,
        conductance=conductance,
        current=conductance * bias,
    )
    return _pipeline_result(
        conductance=conductance,
        bias=bias,
        temperature=temperature,
        bandwidth=bandwidth,
        modulation=modulation,
        transport=transport,
        flags=(),
    )


# --------------------------------------------------------------------------
# Case 3: single-electron transistor
# --------------------------------------------------------------------------

def set_island_capacitance(geometry: SetGeometry, epsilon_r: float) -> float:
    """Self-capacitance of a thin conducting disk island, in farads.

    The Gaussian-units disk capacitance 2*epsilon_r*R/pi (a length)
    becomes C = 8*eps0*epsilon_r*R in SI.
    """
    if not (epsilon_r >= 1.0 and math.isfinite(epsilon_r)):
        raise ParameterError(f"epsilon_r must be >= 1 (vacuum), got {epsilon_r!r}")
    return 8.0 * CONSTANTS.eps0 * epsilon_r * geometry.island_radius


def set_blockade(geometry: SetGeometry, epsilon_r: float) -> SetElectrostatics:
    """Charging energy and blockade voltage of the disk island.

    V_blockade = e/(2C) is the drain bias that just lifts the Coulomb
    blockade; the charging energy is e*V_blockade = e^2/(2C).
    """
    capacitance = set_island_capacitance(geometry, epsilon_r)
    blockade_voltage = CONSTANTS.e / (2.0 * capacitance)
    return SetElectrostatics(
        capacitance=capacitance,
        charging_energy=CONSTANTS.e * blockade_voltage,
        blockade_voltage=blockade_voltage,
    )


def set_snr(
    geometry: SetGeometry,
    epsilon_r: float,
    bandwidth: float,
    *,
    modulation: float = 1.0,
) -> SnrResult:
    """Closed-form SET SNR at a given bandwidth.

    Biased at the blockade voltage with on-state conductance 2e^2/h, the
    SNR is sqrt(E_charging/(h*bandwidth)); f_unity is the charging
    energy as a frequency.  With the thin-disk capacitance this is
    identical to the hydrogenic form

        snr^2 = (Ry/(h*df)) * pi*a0 / (2*epsilon_r*R_island)

    which the tests hold to relative 1e-12.
    """
    _check_modulation(modulation)
    if not (bandwidth > 0.0 and math.isfinite(bandwidth)):
        raise ParameterError(f"bandwidth must be > 0 and finite, got {bandwidth!r}")
    electrostatics = set_blockade(geometry, epsilon_r)
    f_base = electrostatics.charging_energy / CONSTANTS.h
    f_unity = modulation**2 * f_base
    value = modulation * math.sqrt(f_base / bandwidth)
    conductance = SET_SPIN_DEGENERACY * WIRE_CONDUCTANCE_PER_MODE
    op = OperatingPoint(
        conductance=conductance,
        bias=electrostatics.blockade_voltage,
        temperature=0.0,
        bandwidth=bandwidth,
    )
    return SnrResult(
        snr=value,
        f_unity=f_unity,
        sensitivity=_sensitivity_from_unity(f_unity),
        breakdown=noise_breakdown(op),
        transport=electrostatics,
        flags=(),
    )


def set_pipeline_snr(
    geometry: SetGeometry,
    epsilon_r: float,
    bandwidth: float,
    *,
    bias: float | None = None,
    temperature: float = 0.0,
    modulation: float = 1.0,
) -> SnrResult:
    """Step-by-step SET SNR through the generic noise machinery.

    Defaults to the blockade-voltage bias; with T = 0 that matches
    :func:`set_snr` to relative 1e-12.
    """
    _check_modulation(modulation)
    electrostatics = set_blockade(geometry, epsilon_r)
    if bias is None:
        bias = electrostatics.blockade_voltage
    if not (bias >= 0.0 and math.isfinite(bias)):
        raise ParameterError(f"bias must be >= 0 and finite, got {bias!r}")
    conductance = SET_SPIN_DEGENERACY * WIRE_CONDUCTANCE_PER_MODE
    return _pipeline_result(
        conductance=conductance,
        bias=bias,
        temperature=temperature,
        bandwidth=bandwidth,
        modulation=modulation,
        transport=electrostatics,
        flags=(),
    )


# --------------------------------------------------------------------------
# Dispatch over device kinds
# --------------------------------------------------------------------------

def device_snr(
    device: DeviceSpec, bandwidth: float, *, modulation: float = 1.0
) -> SnrResult:
    """Closed-form SNR for any device kind at the given bandwidth."""
    if isinstance(device, WireDevice):
        return wire_snr(device.material, bandwidth, modulation=modulation)
    if isinstance(device, QpcDevice):
        return qpc_snr(device.geometry, device.material, bandwidth, modulation=modulation)
    if isinstance(device, SetDevice):
        return set_snr(device.geometry, device.epsilon_r, bandwidth, modulation=modulation)
    raise TypeError(f"unknown device kind: {type(device).__name__}")


def device_operating_point(
    device: DeviceSpec, bandwidth: float, temperature: float = 0.0
) -> OperatingPoint:
    """On-state operating point (G, V) of a device, for noise or Monte Carlo."""
    if isinstance(device, WireDevice):
        bias = wire_optimal_bias(device.geometry, device.material)
        conductance = wire_sense_current(device.material) / bias
    elif isinstance(device, QpcDevice):
        state = _qpc_transport(device.geometry, device.material)
        bias, conductance = state.bias, state.conductance
    elif isinstance(device, SetDevice):
        electrostatics = set_blockade(device.geometry, device.epsilon_r)
        bias = electrostatics.blockade_voltage
        conductance = SET_SPIN_DEGENERACY * WIRE_CONDUCTANCE_PER_MODE
    else:
        raise TypeError(f"unknown device kind: {type(device).__name__}")
    return OperatingPoint(
        conductance=conductance,
        bias=bias,
        temperature=temperature,
        bandwidth=bandwidth,
    )


def unity_snr_bandwidth(device: DeviceSpec) -> float:
    """Bandwidth (Hz) at which the device's amplitude SNR equals 1."""
    if isinstance(device, WireDevice):
        return effective_scales(device.material).rydberg_frequency
    if isinstance(device, QpcDevice):
        return qpc_subband_spacing(device.geometry, device.material) / CONSTANTS.h
    if isinstance(device, SetDevice):
        return (
            set_blockade(device.geometry, device.epsilon_r).charging_energy
            / CONSTANTS.h
        )
    raise TypeError(f"unknown device kind: {type(device).__name__}")


def sensitivity(device: DeviceSpec) -> float:
    """Charge sensitivity 1/sqrt(f_unity) in e/sqrt(Hz)."""
    return _sensitivity_from_unity(unity_snr_bandwidth(device))
