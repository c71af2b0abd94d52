import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from ftrfading.errors import DomainError
from ftrfading.ftr import FtrParams, SeriesControl, build_coefficients, twdp_pdf
from ftrfading.metrics import BPSK, DBPSK, ber_exact, capacity
from ftrfading.montecarlo import (
    CHUNK,
    EmpiricalDistribution,
    critical_value,
    ks_statistic,
    ks_test,
    mc_ber,
    mc_capacity,
    read_samples,
    recover_k_delta,
    sample_channel,
    simulate_shadowing,
    simulate_snr,
    specular_amplitudes,
    write_samples,
)
from ftrfading.presets import TABLE1

CTL = SeriesControl(max_terms=5000, rel_tol=1e-13)
RAYLEIGH_CAPACITY = 0.8603473822708843
# sqrt(-ln(0.025) / 20000)
CRITICAL_1E4 = 0.013581015157406196


def within(est, ref, k=3.0):
    return abs(est.value - ref) <= k * est.stderr


# ---------------------------------------------------------------------------
# Channel geometry and streams
# ---------------------------------------------------------------------------

@given(st.floats(0.1, 50), st.floats(0, 100), st.floats(0, 1), st.floats(1e-3, 1e3))
def test_specular_amplitude_closure(m, K, delta, snr):
    p = FtrParams(m, K, delta, snr)
    v1, v2 = specular_amplitudes(p)
    k_rec, d_rec = recover_k_delta(v1, v2, p.two_sigma_sq)
    assert k_rec == pytest.approx(K, rel=1e-12, abs=1e-300)
    if K > 0:
        assert d_rec == pytest.approx(delta, abs=1e-12)


@pytest.mark.parametrize("workers", [1, 3])
def test_streams_are_deterministic(workers):
    p = FtrParams(5.5, 15.0, 0.4)
    n = 2 * CHUNK + 123
    a = simulate_snr(p, n, seed=42, workers=1)
    b = simulate_snr(p, n, seed=42, workers=workers)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, simulate_snr(p, n, seed=43))


def test_prefix_stability():
    # a longer run extends a shorter one chunk by chunk
    p = FtrParams(2.0, 3.0, 0.5)
    short = simulate_snr(p, CHUNK, seed=5)
    long = simulate_snr(p, 3 * CHUNK, seed=5)
    assert np.array_equal(short, long[:CHUNK])


def test_bad_sample_counts():
    p = FtrParams(1.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        simulate_snr(p, 0, seed=1)
    with pytest.raises(DomainError):
        mc_capacity(p, 999, seed=1)
    with pytest.raises(DomainError):
        ks_test(p, v=99)


@pytest.mark.parametrize("m", [0.5, 1.5, 10.0])
def test_shadowing_has_unit_mean(m):
    z = simulate_shadowing(m, 10 ** 6, seed=3)
    stderr = z.std(ddof=1) / math.sqrt(z.size)
    assert abs(z.mean() - 1) < 3 * stderr
    assert z.var() == pytest.approx(1 / m, rel=0.02)


@pytest.mark.parametrize("params", [FtrParams(1.0, 0.0, 0.0, 2.5), FtrParams(10.0, 10.0, 0.5, 1.0)])
def test_mean_snr_matches_average(params):
    x = simulate_snr(params, 10 ** 6, seed=9)
    assert abs(x.mean() - params.avg_snr) < 3 * x.std(ddof=1) / math.sqrt(x.size)


def test_rayleigh_samples_are_exponential():
    emp = sample_channel(FtrParams(3.0, 0.0, 0.7, 2.0), 10 ** 4, seed=1)
    assert ks_statistic(emp, lambda x: -np.expm1(-x / 2.0)) < CRITICAL_1E4


def test_large_m_approaches_twdp():
    # m = 500 makes the shadowing nearly constant; conditional model is TWDP
    K, delta = 5.0, 1.0
    p = FtrParams(500.0, K, delta)
    emp = sample_channel(p, 10 ** 4, seed=21)
    grid = np.linspace(0.0, emp.samples[-1] * 1.01, 8001)
    dens = twdp_pdf(grid, K, delta, p.two_sigma_sq)
    cdf = integrate.cumulative_trapezoid(dens, grid, initial=0.0)
    t = ks_statistic(emp, lambda x: np.interp(x, grid, cdf))
    assert t < CRITICAL_1E4


# ---------------------------------------------------------------------------
# KS statistic
# ---------------------------------------------------------------------------

def test_critical_value():
    assert critical_value(10 ** 4) == pytest.approx(CRITICAL_1E4, rel=1e-15)
    assert critical_value(10 ** 4) < 0.0136
    with pytest.raises(DomainError):
        critical_value(100, alpha=1.5)


def test_ks_self_midpoints():
    rng = np.random.default_rng(0)
    emp = EmpiricalDistribution.from_samples(rng.exponential(size=500))
    s = emp.samples
    # cdf that sits at the midpoint of each step
    mid = lambda x: (np.searchsorted(s, x, side="right") - 0.5) / emp.count
    assert ks_statistic(emp, mid) <= 1 / (2 * emp.count) + 1e-15


def test_ks_uniform_nine_brute_force():
    xs = np.arange(1, 10) / 10
    emp = EmpiricalDistribution.from_samples(xs)
    # enumerate both one-sided gaps at every step by hand
    gaps = [max(abs(i / 9 - x), abs((i - 1) / 9 - x)) for i, x in enumerate(xs, start=1)]
    assert ks_statistic(emp, lambda x: np.asarray(x)) == pytest.approx(max(gaps), abs=1e-15)
    assert max(gaps) == pytest.approx(0.1, abs=1e-15)
    assert max(gaps) >= 1 / 18


def test_ks_understated_by_one_sided_formula():
    xs = np.array([0.5, 0.6, 0.7])
    emp = EmpiricalDistribution.from_samples(xs)
    t = ks_statistic(emp, lambda x: np.asarray(x))
    assert t == pytest.approx(0.5)
    one_sided = np.max(np.abs(np.arange(1, 4) / 3 - xs))
    assert one_sided < t


@pytest.mark.parametrize("row", [(5.5, 15.0, 0.4), (9.2, 3.0, 1.0)])
def test_ks_accepts_table_rows(row):
    report = ks_test(FtrParams(*row), v=10 ** 4, alpha=0.05, seed=7)
    assert report.accepted
    assert report.statistic < 0.0136
    assert report.critical == pytest.approx(CRITICAL_1E4)


def test_ks_rejects_wrong_model():
    p = FtrParams(5.5, 15.0, 0.4)
    report = ks_test(p, v=10 ** 4, seed=7, model=p.with_snr(2.0))
    assert not report.accepted
    assert report.statistic > 10 * report.critical


def test_ks_table1_acceptance_across_seeds():
    # every row accepted together, for at least 9 of 10 seeds
    accepted_seeds = 0
    for seed in range(10):
        if all(ks_test(FtrParams(*row), seed=seed).accepted for row in TABLE1):
            accepted_seeds += 1
    assert accepted_seeds >= 9


def test_ks_rejection_rate_is_nominal():
    # exact exponential CDF: the rejection rate must sit near alpha
    runs = 400
    rejected = sum(
        ks_statistic(sample_channel(FtrParams(1.0, 0.0, 0.0), 10 ** 4, seed), lambda x: -np.expm1(-x)) >= CRITICAL_1E4
        for seed in range(runs)
    )
    # two-sided binomial 99.9% band around 0.05 * 400 = 20
    assert 6 <= rejected <= 36


# ---------------------------------------------------------------------------
# Monte Carlo metrics
# ---------------------------------------------------------------------------

def test_mc_capacity_rayleigh():
    est = mc_capacity(FtrParams(1.0, 0.0, 0.0), 10 ** 6, seed=1)
    assert within(est, RAYLEIGH_CAPACITY)


def test_mc_capacity_fig3_point():
    p = FtrParams(25.5, 10.0, 0.9, 10.0)
    est = mc_capacity(p, 10 ** 6, seed=2)
    assert within(est, capacity(build_coefficients(p, CTL)).value)


def test_mc_stderr_scaling():
    p = FtrParams(1.5, 15.0, 0.5)
    small = mc_capacity(p, 10 ** 4, seed=4)
    large = mc_capacity(p, 10 ** 6, seed=4)
    assert small.stderr / large.stderr == pytest.approx(10.0, rel=0.2)


def test_mc_ber_rayleigh_dbpsk():
    est = mc_ber(FtrParams(1.0, 0.0, 0.0, 9.0), DBPSK, 10 ** 6, seed=5)
    assert within(est, 0.05)


@pytest.mark.parametrize("db, n", [(10, 10 ** 6), (20, 10 ** 7), (30, 10 ** 7)])
def test_mc_ber_fig4_point(db, n):
    # high SNR errors come from rare deep fades, so n grows with SNR
    p = FtrParams.from_db(10.5, 30.0, 0.45, db)
    est = mc_ber(p, BPSK, n, seed=db)
    assert within(est, ber_exact(build_coefficients(p, CTL), BPSK).value)


def test_mc_ber_zero_snr():
    est = mc_ber(FtrParams(5.5, 15.0, 0.4, 1e-9), BPSK, 10 ** 4, seed=6)
    assert abs(est.value - 0.5) <= max(3 * est.stderr, 1e-4)


def test_mc_identical_across_workers():
    p = FtrParams(9.2, 3.0, 1.0)
    a = mc_capacity(p, 3 * CHUNK, seed=8, workers=1)
    b = mc_capacity(p, 3 * CHUNK, seed=8, workers=4)
    assert a == b


# ---------------------------------------------------------------------------
# Sample dumps
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("fmt", ["csv", "binary"])
def test_sample_dump_round_trip(tmp_path, fmt):
    p = FtrParams(1.5, 15.0, 0.5)
    x = simulate_snr(p, 1000, seed=12)
    path = tmp_path / f"snr.{fmt}"
    write_samples(path, x, p, seed=12, fmt=fmt)
    header, back = read_samples(path)
    assert np.array_equal(back, x)
    assert header["seed"] == 12
    assert FtrParams(**header["params"]) == p


def test_sample_dump_rejects_unknown_format(tmp_path):
    with pytest.raises(DomainError):
        write_samples(tmp_path / "x", [1.0], FtrParams(1, 1, 0.5), 0, fmt="parquet")
