"""Embedded oracle suite run by ``ftr selftest``.

Each check is small enough that the whole suite finishes in a few seconds.
"""
from __future__ import annotations

import contextlib
import math
import time
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import ftr, metrics, montecarlo, specfun
from .errors import FtrError
from .ftr import FtrParams, SeriesControl, build_coefficients

_CTL = SeriesControl(max_terms=3000, rel_tol=1e-13)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _gamma_recurrence():
    xs = np.linspace(0.1, 50, 200)
    err = max(abs(specfun.log_gamma(x + 1) - specfun.log_gamma(x) - math.log(x)) for x in xs)
    return err <= 1e-12, f"max error {err:.2e}"


def _gamma_complement():
    x = np.linspace(0.0, 60.0, 121)
    err = max(float(np.max(np.abs(specfun.lower_regularized_gamma(n, x) + special.gammaincc(n, x) - 1.0)))
              for n in (1, 2, 7, 25, 40))
    return err <= 1e-12, f"max |P + Q - 1| {err:.2e}"


def _hypergeometric_binomial():
    err = max(abs(specfun.gauss_2f1(a, b, b, z) / (1 - z) ** -a - 1)
              for a in (0.5, 1.0, 3.3) for b in (1.5, 12.0) for z in (0.1, 0.6, 0.95))
    return err <= 1e-10, f"max rel error {err:.2e}"


def _bessel_parity():
    ok = all(specfun.bessel_i(n, -x) == (-1) ** n * specfun.bessel_i(n, x)
             and specfun.bessel_i(-n, x) == specfun.bessel_i(n, x)
             for n in range(6) for x in (0.3, 2.0, 17.5))
    return ok, "I_n(-x) = (-1)^n I_n(x), I_-n = I_n"


def _legendre_recurrence():
    worst = 0.0
    for nu, mu, x in ((2.3, -1, 1.25), (7.5, -3, 1.8), (12.2, 2, 1.05), (20.5, -4, 3.0)):
        p = [specfun.assoc_legendre_p(nu + d, mu, x) for d in (-1, 0, 1)]
        lhs = (nu - mu + 1) * p[2]
        rhs = (2 * nu + 1) * x * p[1] - (nu + mu) * p[0]
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    return worst <= 1e-9, f"max rel defect {worst:.2e}"


def _coefficient_reality():
    worst = 0.0
    for m in (0.5, 1.5, 10.0):
        for K in (1.0, 15.0):
            for delta in (0.35, 0.9, 1.0):
                params = FtrParams(m, K, delta)
                for j in range(0, 41, 3):
                    asm = ftr._assemble_closed_form(j, params)
                    worst = max(worst, asm.residue)
                    ftr._check_residue(j, asm)
    return worst < 1e-10, f"max imaginary residue {worst:.2e}"


def _coefficient_paths_agree():
    params = FtrParams(5.5, 15.0, 0.4)
    js = np.arange(10)
    closed = np.array([ftr.dj_coefficient(int(j), params).log_magnitude for j in js])
    err = float(np.max(np.abs(closed - ftr.dj_phase_average(js, params))))
    return err < 1e-10, f"max log difference {err:.2e}"


def _normalization():
    table = build_coefficients(FtrParams(1.5, 15.0, 0.5), _CTL)
    total, _ = integrate.quad(lambda x: ftr.ftr_pdf(x, table), 0, np.inf, limit=200)
    err = max(abs(total - 1.0), abs(table.total - 1.0))
    return err < 1e-6, f"|integral - 1| {err:.2e}"


def _rayleigh():
    table = build_coefficients(FtrParams(2.0, 0.0, 0.3, 1.7))
    x = np.linspace(0, 20, 81)
    err = max(float(np.max(np.abs(ftr.ftr_pdf(x, table) - np.exp(-x / 1.7) / 1.7))),
              float(np.max(np.abs(ftr.ftr_cdf(x, table) + np.expm1(-x / 1.7)))))
    return err < 1e-12, f"max deviation {err:.2e}"


def _cdf_monotone_and_derivative():
    table = build_coefficients(FtrParams(9.2, 3.0, 1.0), _CTL)
    x = np.linspace(0.05, 4.0, 80)
    cdf = ftr.ftr_cdf(np.linspace(0, 10, 500), table)
    h = 1e-4
    fd = (ftr.ftr_cdf(x + h, table) - ftr.ftr_cdf(x - h, table)) / (2 * h)
    pdf = ftr.ftr_pdf(x, table)
    rel = float(np.max(np.abs(fd - pdf) / pdf))
    return bool(np.all(np.diff(cdf) >= 0)) and rel < 1e-4, f"monotone, d/dx CDF vs PDF {rel:.2e}"


def _rayleigh_capacity():
    table = build_coefficients(FtrParams(1.0, 0.0, 0.0, 1.0))
    value = metrics.capacity(table).value
    exact = math.e * special.exp1(1.0) / math.log(2.0)
    return abs(value / exact - 1) < 1e-12, f"{value:.12f} vs {exact:.12f}"


def _rayleigh_dbpsk():
    err = 0.0
    for snr in (0.1, 1.0, 9.0, 1e3):
        table = build_coefficients(FtrParams(1.0, 0.0, 0.0, snr))
        err = max(err, abs(metrics.ber_exact(table, metrics.DBPSK).value * 2 * (1 + snr) - 1))
    return err < 1e-10, f"max rel error {err:.2e}"


def _ber_quadrature():
    table = build_coefficients(FtrParams.from_db(10.5, 25.0, 0.35, 10.0), _CTL)
    mod = metrics.BPSK
    scale = mod.alpha ** mod.beta / (2 * math.gamma(mod.beta))
    f = lambda x: x ** (mod.beta - 1) * math.exp(-mod.alpha * x) * ftr.ftr_cdf(x, table)
    quad = scale * sum(integrate.quad(f, a, b, limit=200, epsrel=1e-12, epsabs=0)[0]
                       for a, b in ((0, 1), (1, 10), (10, 100), (100, np.inf)))
    value = metrics.ber_exact(table, mod).value
    rel = abs(value / quad - 1)
    return rel < 1e-8, f"rel difference {rel:.2e}"


def _asymptote_scaling():
    p = FtrParams.from_db(10.5, 30.0, 0.45, 30.0)
    a1 = metrics.ber_asymptotic(p, metrics.BPSK)
    a2 = metrics.ber_asymptotic(p.with_snr(2 * p.avg_snr), metrics.BPSK)
    table = build_coefficients(p, _CTL)
    lead = table.weights[0] * math.gamma(1.5) / (2 * math.gamma(0.5) * p.two_sigma_sq)
    ok = abs(a1 / (2 * a2) - 1) < 1e-12 and abs(a1 / lead - 1) < 1e-12
    return ok, f"halving {a1 / (2 * a2) - 1:.1e}, leading term {a1 / lead - 1:.1e}"


def _specular_closure():
    worst = 0.0
    for K, delta in ((1.0, 0.0), (10.0, 0.5), (30.0, 1.0), (3.0, 0.45)):
        p = FtrParams(2.0, K, delta, 3.0)
        k2, d2 = montecarlo.recover_k_delta(*montecarlo.specular_amplitudes(p), p.two_sigma_sq)
        worst = max(worst, abs(k2 - K) / K, abs(d2 - delta))
    return worst < 1e-12, f"max mismatch {worst:.2e}"


def _mc_determinism():
    p = FtrParams(10.0, 10.0, 0.5)
    a = montecarlo.simulate_snr(p, 150_000, 11, workers=1)
    b = montecarlo.simulate_snr(p, 150_000, 11, workers=3)
    return bool(np.array_equal(a, b)), "1 worker vs 3 workers"


def _ks_geometry():
    emp = montecarlo.EmpiricalDistribution.from_samples(np.arange(1, 101, dtype=float))
    t = montecarlo.ks_statistic(emp, lambda x: (np.asarray(x) - 0.5) / 100)
    return abs(t - 1 / 200) < 1e-15, f"T = {t:.6f}"


CHECKS = (
    ("log_gamma recurrence", _gamma_recurrence),
    ("regularized gamma complement", _gamma_complement),
    ("2F1 binomial identity", _hypergeometric_binomial),
    ("bessel parity", _bessel_parity),
    ("legendre degree recurrence", _legendre_recurrence),
    ("d_j coefficient reality", _coefficient_reality),
    ("d_j closed form vs phase average", _coefficient_paths_agree),
    ("pdf normalization", _normalization),
    ("rayleigh pdf/cdf reduction", _rayleigh),
    ("cdf monotone and consistent with pdf", _cdf_monotone_and_derivative),
    ("rayleigh capacity", _rayleigh_capacity),
    ("rayleigh dbpsk ber", _rayleigh_dbpsk),
    ("ber vs quadrature", _ber_quadrature),
    ("asymptote scaling", _asymptote_scaling),
    ("specular amplitude closure", _specular_closure),
    ("monte carlo determinism", _mc_determinism),
    ("ks step geometry", _ks_geometry),
)


@contextlib.contextmanager
def flipped_legendre_branch():
    """Drop the continuation phase on positive Legendre orders (mutation test)."""
    old = ftr._FLIP_POSITIVE_ORDER_BRANCH
    ftr._FLIP_POSITIVE_ORDER_BRANCH = True
    try:
        yield
    finally:
        ftr._FLIP_POSITIVE_ORDER_BRANCH = old


def run(flip_branch: bool = False) -> list[CheckResult]:
    results = []
    ctx = flipped_legendre_branch() if flip_branch else contextlib.nullcontext()
    with ctx, warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for name, check in CHECKS:
            start = time.perf_counter()
            try:
                passed, detail = check()
            except FtrError as exc:
                passed, detail = False, f"{type(exc).__name__} in {exc.kernel}: {exc}"
            results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))
    return results
