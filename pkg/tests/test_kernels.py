"""Numeric kernels: accuracy against scipy and bitwise backend equality."""

import math

import numpy as np
import pytest
from scipy.special import ndtri
from scipy.stats import poisson as scipy_poisson

from chargelimit import ParameterError
from chargelimit.kernels import (
    LAMBDA_GAUSSIAN_CUTOFF,
    active_backend,
    available_backends,
    block_kernels,
    inverse_normal,
    poisson_cdf_table,
    portable_log,
)
from chargelimit.rng import BLOCK, GENERATOR_ID, uniform_block

HAVE_NUMBA = "numba" in available_backends()
needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


# ----------------------------------------------------------- basic pieces


def test_module_constants():
    assert LAMBDA_GAUSSIAN_CUTOFF == 1.0e7
    assert BLOCK == 65536
    assert GENERATOR_ID == "philox4x64-seedseq-v1"


def test_portable_log_accuracy():
    rng = np.random.default_rng(7)
    x = np.exp(rng.uniform(-700.0, 700.0, size=20000))
    ours = portable_log(x)
    reference = np.array([math.log(v) for v in x])
    scale = np.maximum(1.0, np.abs(reference))
    assert np.max(np.abs(ours - reference) / scale) < 1e-15


def test_portable_log_exact_points():
    assert portable_log(np.array([1.0]))[0] == 0.0


def test_inverse_normal_accuracy():
    rng = np.random.default_rng(11)
    u = rng.uniform(1e-12, 1.0 - 1e-12, size=20000)
    u = np.concatenate([u, [1e-300, 1e-16, 0.025, 0.5 - 1e-17, 0.975, 1.0 - 1e-16]])
    ours = inverse_normal(u)
    reference = ndtri(np.maximum(u, 2.0**-54))
    mask = reference != 0.0
    assert np.max(np.abs(ours[mask] - reference[mask]) / np.abs(reference[mask])) < 5e-15
    assert abs(ours[~mask]).max(initial=0.0) < 1e-15


def test_inverse_normal_clamps_zero():
    lo = inverse_normal(np.array([0.0]))[0]
    tiny = inverse_normal(np.array([2.0**-54]))[0]
    assert lo == tiny
    assert math.isfinite(lo)


def test_inverse_normal_center_and_monotonic():
    assert inverse_normal(np.array([0.5]))[0] == 0.0
    u = np.linspace(1e-6, 1.0 - 1e-6, 1001)
    z = inverse_normal(u)
    assert np.all(np.diff(z) > 0.0)


@pytest.mark.parametrize("lam", [0.5, 10.0, 1000.0, 12345.6])
def test_poisson_cdf_table_matches_scipy(lam):
    k_lo, cdf = poisson_cdf_table(lam)
    k = np.arange(k_lo, k_lo + cdf.size)
    reference = scipy_poisson.cdf(k, lam)
    # Inversion sampling cares about absolute CDF placement: a uniform is
    # compared against these values directly.  The windowed cumsum is good
    # to ~1e-11 even for a 9000-entry window.
    assert np.max(np.abs(cdf - reference)) < 1e-10
    # Around the bulk the relative error is tight too.
    bulk = reference > 1e-6
    assert np.max(np.abs(cdf[bulk] - reference[bulk]) / reference[bulk]) < 1e-9
    # The window must cover essentially all the mass on both sides; the
    # truncated tail itself is ~1e-300, far below the cumsum rounding.
    assert cdf[-1] > 1.0 - 1e-10
    if k_lo > 0:
        assert reference[0] < 1e-200


def test_poisson_cdf_table_small_lambda_zero_bin():
    k_lo, cdf = poisson_cdf_table(10.0)
    assert k_lo == 0
    assert abs(cdf[0] - math.exp(-10.0)) / math.exp(-10.0) < 1e-13


def test_poisson_cdf_table_lambda_zero():
    k_lo, cdf = poisson_cdf_table(0.0)
    assert k_lo == 0
    assert cdf.tolist() == [1.0]


@pytest.mark.parametrize("bad", [-1.0, math.nan, math.inf])
def test_poisson_cdf_table_rejects_bad_mean(bad):
    with pytest.raises(ParameterError):
        poisson_cdf_table(bad)


# --------------------------------------------------------------- backends


def test_available_backends_include_numpy():
    assert "numpy" in available_backends()


def test_active_backend_env_override(monkeypatch):
    monkeypatch.setenv("CHARGE_LIMIT_BACKEND", "numpy")
    assert active_backend() == "numpy"
    monkeypatch.setenv("CHARGE_LIMIT_BACKEND", "bogus")
    with pytest.raises(ParameterError):
        active_backend()


def test_active_backend_default(monkeypatch):
    monkeypatch.delenv("CHARGE_LIMIT_BACKEND", raising=False)
    assert active_backend() == ("numba" if HAVE_NUMBA else "numpy")


def test_block_kernels_rejects_unknown():
    with pytest.raises(ParameterError):
        block_kernels("fortran")


# ----------------------------------------------------------- RNG streams


def test_uniform_block_deterministic():
    a = uniform_block(42, 0, 0, 1000)
    b = uniform_block(42, 0, 0, 1000)
    assert np.array_equal(a, b)
    assert a.dtype == np.float64
    assert np.all((a >= 0.0) & (a < 1.0))


def test_uniform_block_streams_are_distinct():
    base = uniform_block(42, 0, 0, 1000)
    assert not np.array_equal(base, uniform_block(42, 1, 0, 1000))
    assert not np.array_equal(base, uniform_block(42, 0, 1, 1000))
    assert not np.array_equal(base, uniform_block(43, 0, 0, 1000))


def test_uniform_block_empty():
    assert uniform_block(1, 0, 0, 0).size == 0


@pytest.mark.parametrize(
    "seed,stream,block,count",
    [(-1, 0, 0, 1), (2**64, 0, 0, 1), (0, -1, 0, 1), (0, 0, -1, 1), (0, 0, 0, -1)],
)
def test_uniform_block_validation(seed, stream, block, count):
    with pytest.raises(ParameterError):
        uniform_block(seed, stream, block, count)


# ------------------------------------------------- open/blocked kernels


def _case(gaussian, with_thermal, n=4096, lam=100.0, seed=9):
    """Inputs for one open-block call, shared across backend comparisons."""
    sigma = 3.7 if with_thermal else 0.0
    if gaussian:
        k_lo, cdf = 0, np.empty(0, dtype=np.float64)
    else:
        k_lo, cdf = poisson_cdf_table(lam)
    u_count = uniform_block(seed, 0, 0, n)
    u_thermal = uniform_block(seed, 1, 0, n) if with_thermal else np.empty(0)
    return (
        u_count,
        u_thermal,
        cdf,
        k_lo,
        gaussian,
        lam,
        math.sqrt(lam),
        sigma,
        lam,
        0.5,
    )


def _reference_charges(args):
    """Recompute the per-trial charges with plain numpy + public helpers."""
    u_count, u_thermal, cdf, k_lo, gaussian, lam, sqrt_shot, sigma, _, _ = args
    if gaussian:
        q = lam + sqrt_shot * inverse_normal(u_count)
    else:
        idx = np.minimum(np.searchsorted(cdf, u_count, side="right"), cdf.size - 1)
        q = (k_lo + idx).astype(np.float64)
    if sigma > 0.0:
        q = q + sigma * inverse_normal(u_thermal)
    return q


@pytest.mark.parametrize("gaussian", [False, True])
@pytest.mark.parametrize("with_thermal", [False, True])
def test_open_block_against_reference(gaussian, with_thermal):
    args = _case(gaussian, with_thermal)
    open_block, _ = block_kernels("numpy")
    s1, s2, s3, s4, below = open_block(*args)
    q = _reference_charges(args)
    d = q - args[8]  # shifted by lam
    assert abs(s1 - math.fsum(d)) <= 1e-9 * max(1.0, abs(math.fsum(d)))
    assert abs(s2 - math.fsum(d * d)) <= 1e-9 * math.fsum(d * d)
    assert abs(s3 - math.fsum(d**3)) <= 1e-8 * max(1.0, abs(math.fsum(d**3)))
    assert abs(s4 - math.fsum(d**4)) <= 1e-9 * math.fsum(d**4)
    assert below == int(np.count_nonzero(q < args[9]))


def test_blocked_block_against_reference():
    u = uniform_block(21, 1, 0, 8192)
    sigma, threshold = 0.4, 0.5
    _, blocked_block = block_kernels("numpy")
    count = blocked_block(u, sigma, threshold)
    expected = int(np.count_nonzero(sigma * inverse_normal(u) >= threshold))
    assert count == expected
    assert 0 < count < u.size  # threshold at 1.25 sigma: both outcomes occur


@needs_numba
@pytest.mark.parametrize("gaussian", [False, True])
@pytest.mark.parametrize("with_thermal", [False, True])
def test_backends_bitwise_identical_open(gaussian, with_thermal):
    args = _case(gaussian, with_thermal)
    numba_open, _ = block_kernels("numba")
    numpy_open, _ = block_kernels("numpy")
    a = numba_open(*args)
    b = numpy_open(*args)
    assert tuple(a) == tuple(b)  # exact float equality, not approximate


@needs_numba
def test_backends_bitwise_identical_partial_block():
    # A block length that is not a power of two exercises the padding.
    args = _case(False, True, n=12345)
    numba_open, _ = block_kernels("numba")
    numpy_open, _ = block_kernels("numpy")
    assert tuple(numba_open(*args)) == tuple(numpy_open(*args))


@needs_numba
def test_backends_bitwise_identical_blocked():
    u = uniform_block(33, 1, 5, 10000)
    _, numba_blocked = block_kernels("numba")
    _, numpy_blocked = block_kernels("numpy")
    assert numba_blocked(u, 1.3, 0.5) == numpy_blocked(u, 1.3, 0.5)
