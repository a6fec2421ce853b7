"""Stochastic electron-counting simulator that cross-checks the SNR formulas.

The analytic engine says an on-state current I measured in a bandwidth
df at T = 0 has amplitude SNR sqrt(I/(2*e*df)).  This module tests that
claim from the other direction: count discrete electrons through an
on/off channel over the Nyquist integration window

    window = 1 / (2 * df)

so the open-state count is Poisson with mean lam = I*window/e and its
counting SNR converges to sqrt(lam) — the same number the formula gives.
That coincidence is exactly why the Nyquist window is the convention
here; any other window would test a rival bandwidth bookkeeping instead
of the one the closed forms use.

Thermal noise enters as a zero-mean Gaussian charge of standard
deviation sqrt(4*k_B*T*G*df)*window (in coulombs; divided by e in count
units) added to both channel states.  The blocked state carries no shot
noise — perfect pinch-off by the sensed charge is assumed, matching the
full-modulation assumption of the closed forms.

Detection uses an explicit count threshold: decide "open" when the
measured charge is at least ``threshold`` electrons.  The resulting
error rates are reported as simulator outputs; the closed forms define
no error criterion of their own, so nothing is asserted against them.

Reproducibility contract: outcomes are a pure function of the config.
Randomness is keyed by (seed, role, block-of-trials) with a fixed block
size, partial results are reduced in block order, and the per-trial
arithmetic is bit-identical across the numba and numpy backends (see
:mod:`chargelimit.kernels`), so the worker count and backend choice can
never change a single output bit.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels, rng
from .constants import CONSTANTS
from .devices import DeviceSpec, ModelValidityWarning, device_operating_point
from .errors import ParameterError
from .noise import OperatingPoint
from .noise import snr as analytic_amplitude_snr

__all__ = [
    "SimConfig",
    "Ci95",
    "SimOutcome",
    "DeviceValidation",
    "simulate_detection",
    "validate_device",
]

#: Two-sided 95% normal quantile used for all confidence half-widths.
Z95 = 1.959963984540054

_OPEN_STREAM = 0
_BLOCKED_STREAM = 1


@dataclass(frozen=True, kw_only=True)
class SimConfig:
    """Inputs of one detection simulation.

    Parameters
    ----------
    on_current : float
        Mean current of the open (unblocked) channel in A, >= 0.
    bandwidth : float
        Measurement bandwidth in Hz, > 0; the integration window is
        1/(2*bandwidth).
    temperature : float, optional
        Temperature in K for the thermal-noise term.  Default 0.
    conductance : float, optional
        Channel conductance in S for the thermal-noise term; ``None``
        means no Johnson noise (equivalent to 0 S or T = 0).
    trials : int
        Number of independent windows simulated per state, >= 1.
    seed : int
        RNG seed, 0 <= seed < 2**64.
    threshold : float, optional
        Decision threshold in electron counts; decide "open" when the
        measured charge is >= threshold.  Default 0.5.
    fano : float, optional
        Shot-noise Fano factor, > 0.  Values other than 1 force the
        Gaussian sampling path (no exact discrete law is implied).
    """

    on_current: float
    bandwidth: float
    temperature: float = 0.0
    conductance: float | None = None
    trials: int
    seed: int
    threshold: float = 0.5
    fano: float = 1.0

    def __post_init__(self) -> None:
        if not (self.on_current >= 0.0 and math.isfinite(self.on_current)):
            raise ParameterError(
                f"on_current must be >= 0 and finite, got {self.on_current!r}"
            )
        if not (self.bandwidth > 0.0 and math.isfinite(self.bandwidth)):
            raise ParameterError(
                f"bandwidth must be > 0 and finite, got {self.bandwidth!r}"
            )
        if not (self.temperature >= 0.0 and math.isfinite(self.temperature)):
            raise ParameterError(
                f"temperature must be >= 0 and finite, got {self.temperature!r}"
            )
        if self.conductance is not None and not (
            self.conductance >= 0.0 and math.isfinite(self.conductance)
        ):
            raise ParameterError(
                f"conductance must be >= 0 and finite, got {self.conductance!r}"
            )
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ParameterError(f"trials must be an int >= 1, got {self.trials!r}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ParameterError(
                f"seed must be an int in [0, 2**64), got {self.seed!r}"
            )
        if not (self.threshold >= 0.0 and math.isfinite(self.threshold)):
            raise ParameterError(
                f"threshold must be >= 0 and finite, got {self.threshold!r}"
            )
        if not (self.fano > 0.0 and math.isfinite(self.fano)):
            raise ParameterError(f"fano must be > 0 and finite, got {self.fano!r}")


class Ci95(NamedTuple):
    """95% confidence half-widths of the headline estimates."""

    snr: float
    err_open: float
    err_blocked: float


@dataclass(frozen=True)
class SimOutcome:
    """Results of one detection simulation.

    ``empirical_snr`` is the sample mean over sample standard deviation
    of the open-state measured charge; ``analytic_snr`` is the noise
    module's prediction for the same operating point.  Error rates are
    the misclassification probabilities of the threshold rule in each
    true state.
    """

    empirical_snr: float
    analytic_snr: float
    err_open: float
    err_blocked: float
    balanced_err: float
    snr_stderr: float
    ci95: Ci95
    mean_charge: float
    std_charge: float
    expected_count: float
    trials: int
    threshold: float
    gaussian_fallback: bool
    seed_used: int
    generator: str

    def as_dict(self) -> dict:
        """Plain-types view in a fixed key order, ready for JSON."""
        return {
            "empirical_snr": self.empirical_snr,
            "analytic_snr": self.analytic_snr,
            "err_open": self.err_open,
            "err_blocked": self.err_blocked,
            "balanced_err": self.balanced_err,
            "snr_stderr": self.snr_stderr,
            "ci95": {
                "snr": self.ci95.snr,
                "err_open": self.ci95.err_open,
                "err_blocked": self.ci95.err_blocked,
            },
            "mean_charge": self.mean_charge,
            "std_charge": self.std_charge,
            "expected_count": self.expected_count,
            "trials": self.trials,
            "threshold": self.threshold,
            "gaussian_fallback": self.gaussian_fallback,
            "seed_used": self.seed_used,
            "generator": self.generator,
        }


@dataclass(frozen=True)
class DeviceValidation:
    """Side-by-side analytic vs simulated SNR for one device."""

    analytic_snr: float
    empirical_snr: float
    stderr: float
    n_sigma: float
    passed: bool
    outcome: SimOutcome


def _central_moments(shift: float, n: int, s1: float, s2: float, s3: float, s4: float):
    """Mean and central moments m2..m4 from shifted power sums."""
    d = s1 / n
    r2 = s2 / n
    r3 = s3 / n
    r4 = s4 / n
    mean = shift + d
    m2 = r2 - d * d
    m3 = r3 - 3.0 * d * r2 + 2.0 * d**3
    m4 = r4 - 4.0 * d * r3 + 6.0 * d * d * r2 - 3.0 * d**4
    return mean, m2, m3, m4


def _snr_stderr(n: int, mean: float, m2: float, m3: float, m4: float) -> float:
    """Delta-method standard error of the mean/stddev ratio estimator.

    Var(snr_hat) ~ [1 + mean^2 (m4 - m2^2)/(4 m2^3) - mean*m3/m2^2] / n;
    for a Poisson sample this reduces to (1 + 2*lam)/(4*n).
    """
    if n < 2 or m2 <= 0.0:
        return 0.0
    variance = (
        1.0
        + mean * mean * (m4 - m2 * m2) / (4.0 * m2**3)
        - mean * m3 / (m2 * m2)
    ) / n
    return math.sqrt(max(variance, 0.0))


def simulate_detection(cfg: SimConfig, workers: int = 1) -> SimOutcome:
    """Run the counting simulation for one config.

    Parameters
    ----------
    cfg : SimConfig
    workers : int, optional
        Thread count for block-parallel execution.  Any value >= 1
        produces bit-identical results; the default is serial.

    Returns
    -------
    SimOutcome
    """
    if not (isinstance(workers, int) and workers >= 1):
        raise ParameterError(f"workers must be an int >= 1, got {workers!r}")
    window = 1.0 / (2.0 * cfg.bandwidth)
    lam = cfg.on_current * window / CONSTANTS.e
    conductance = 0.0 if cfg.conductance is None else cfg.conductance
    thermal_sq = 4.0 * CONSTANTS.k_B * cfg.temperature * conductance * cfg.bandwidth
    sigma = math.sqrt(thermal_sq) * window / CONSTANTS.e
    gaussian = lam > kernels.LAMBDA_GAUSSIAN_CUTOFF or cfg.fano != 1.0
    sqrt_shot = math.sqrt(cfg.fano * lam)
    if gaussian:
        k_lo, cdf = 0, np.empty(0, dtype=np.float64)
    else:
        k_lo, cdf = kernels.poisson_cdf_table(lam)
    open_block, blocked_block = kernels.block_kernels()

    trials = cfg.trials
    n_blocks = (trials + rng.BLOCK - 1) // rng.BLOCK
    shift = lam
    no_thermal = np.empty(0, dtype=np.float64)

    def run_block(index: int):
        n_b = min(rng.BLOCK, trials - index * rng.BLOCK)
        if sigma > 0.0:
            u_open = rng.uniform_block(cfg.seed, _OPEN_STREAM, index, 2 * n_b)
            u_count, u_thermal = u_open[:n_b], u_open[n_b:]
        else:
            u_count = rng.uniform_block(cfg.seed, _OPEN_STREAM, index, n_b)
            u_thermal = no_thermal
        stats = open_block(
            u_count, u_thermal, cdf, k_lo, gaussian, lam, sqrt_shot,
            sigma, shift, cfg.threshold,
        )
        if sigma > 0.0:
            u_blocked = rng.uniform_block(cfg.seed, _BLOCKED_STREAM, index, n_b)
            false_open = blocked_block(u_blocked, sigma, cfg.threshold)
        else:
            false_open = 0
        return stats + (false_open,)

    if workers == 1 or n_blocks == 1:
        partials = [run_block(index) for index in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run_block, range(n_blocks)))

    s1 = s2 = s3 = s4 = 0.0
    below = false_open = 0
    for p1, p2, p3, p4, p_below, p_false in partials:  # fixed block order
        s1 += p1
        s2 += p2
        s3 += p3
        s4 += p4
        below += p_below
        false_open += p_false

    mean, m2, m3, m4 = _central_moments(shift, trials, s1, s2, s3, s4)
    sample_var = m2 * trials / (trials - 1) if trials > 1 else 0.0
    std = math.sqrt(max(sample_var, 0.0))
    empirical_snr = mean / std if std > 0.0 else 0.0
    stderr = _snr_stderr(trials, mean, m2, m3, m4)

    err_open = below / trials
    if sigma > 0.0:
        err_blocked = false_open / trials
    else:
        # Perfect pinch-off and no thermal noise: the blocked charge is
        # exactly zero, so the decision is deterministic.
        err_blocked = 1.0 if cfg.threshold <= 0.0 else 0.0

    analytic = analytic_amplitude_snr(
        OperatingPoint(
            current=cfg.on_current,
            conductance=cfg.conductance,
            temperature=cfg.temperature,
            bandwidth=cfg.bandwidth,
        ),
        fano=cfg.fano,
    )

    def _binomial_half_width(p: float) -> float:
        return Z95 * math.sqrt(p * (1.0 - p) / trials)

    return SimOutcome(
        empirical_snr=empirical_snr,
        analytic_snr=analytic,
        err_open=err_open,
        err_blocked=err_blocked,
        balanced_err=0.5 * (err_open + err_blocked),
        snr_stderr=stderr,
        ci95=Ci95(
            snr=Z95 * stderr,
            err_open=_binomial_half_width(err_open),
            err_blocked=_binomial_half_width(err_blocked),
        ),
        mean_charge=mean,
        std_charge=std,
        expected_count=lam,
        trials=trials,
        threshold=cfg.threshold,
        gaussian_fallback=gaussian,
        seed_used=cfg.seed,
        generator=rng.GENERATOR_ID,
    )


def validate_device(
    device: DeviceSpec,
    bandwidth: float,
    trials: int,
    seed: int,
    *,
    threshold: float = 0.5,
    workers: int = 1,
) -> DeviceValidation:
    """Simulate a device at its on-state operating point and compare SNRs.

    Runs the counting simulation at T = 0 with the device's own current
    and conductance, then scores the empirical SNR against the analytic
    value in units of the estimator's standard error; ``passed`` means
    agreement within 3 sigma.  Warns when the expected count per window
    is below 10, where the Poisson law is visibly non-Gaussian and the
    comparison is loose.
    """
    op = device_operating_point(device, bandwidth)
    current = op.sense_current()
    expected = current / (2.0 * bandwidth * CONSTANTS.e)
    if expected < 10.0:
        warnings.warn(
            f"expected count per window is {expected:.3g} (< 10); the "
            "sqrt-count comparison is only loosely meaningful here",
            ModelValidityWarning,
            stacklevel=2,
        )
    cfg = SimConfig(
        on_current=current,
        bandwidth=bandwidth,
        temperature=0.0,
        conductance=op.channel_conductance(),
        trials=trials,
        seed=seed,
        threshold=threshold,
    )
    outcome = simulate_detection(cfg, workers=workers)
    if outcome.snr_stderr > 0.0:
        n_sigma = abs(outcome.empirical_snr - outcome.analytic_snr) / outcome.snr_stderr
    elif outcome.empirical_snr == outcome.analytic_snr:
        n_sigma = 0.0
    else:
        n_sigma = math.inf
    return DeviceValidation(
        analytic_snr=outcome.analytic_snr,
        empirical_snr=outcome.empirical_snr,
        stderr=outcome.snr_stderr,
        n_sigma=n_sigma,
        passed=n_sigma <= 3.0,
        outcome=outcome,
    )
