"""Link metrics over FTR fading: ergodic capacity and binary-modulation BER."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import specfun
from .errors import ConsistencyError, DomainError
from .ftr import CoefficientTable, FtrParams, SeriesControl

LN2 = math.log(2.0)

# Above this 2F1 argument the 1 - z transformation is attempted.
BER_2F1_TRANSFORM_ABOVE = 0.75

# Below this alpha * s * (j + 1) a BER kernel uses its small-SNR expansion.
BER_SMALL_SNR = 1e-4

#: Below this average SNR (dB) the high-SNR asymptote is flagged as out of regime.
ASYMPTOTE_REGIME_DB = 15.0


@dataclass(frozen=True)
class ModulationScheme:
    """Binary modulation described by the conditional BEP Gamma(beta, alpha x)/(2 Gamma(beta))."""

    alpha: float
    beta: float
    name: str = ""

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError("alpha and beta must be positive", "ModulationScheme")


BPSK = ModulationScheme(1.0, 0.5, "bpsk")
BFSK = ModulationScheme(0.5, 0.5, "bfsk")
DBPSK = ModulationScheme(1.0, 1.0, "dbpsk")

MODULATIONS = {mod.name: mod for mod in (BPSK, BFSK, DBPSK)}


def modulation(name: str) -> ModulationScheme:
    try:
        return MODULATIONS[name.lower()]
    except KeyError:
        raise DomainError(f"unknown modulation {name!r}; choose from {sorted(MODULATIONS)}", "modulation") from None


@dataclass(frozen=True)
class MetricResult:
    value: float
    truncation_bound: float
    terms_used: int

    def __float__(self):
        return float(self.value)


def conditional_bep(x, mod: ModulationScheme):
    """Bit error probability at instantaneous SNR ``x``."""
    xs = np.asarray(x, dtype=float)
    if np.any(np.isnan(xs)) or np.any(xs < 0):
        raise DomainError("SNR must be >= 0", "conditional_bep")
    out = 0.5 * special.gammaincc(mod.beta, mod.alpha * xs)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Capacity
# ---------------------------------------------------------------------------

def capacity_kernels(n_terms: int, two_sigma_sq: float) -> np.ndarray:
    """``E[log2(1 + X)]`` for ``X ~ Gamma(j + 1, two_sigma_sq)``, j = 0..n_terms-1.

    Written as ``(1/ln 2) sum_{k<=j} h_k`` with
    ``h_k = x^k e^x Gamma(-k, x)``, ``x = 1/two_sigma_sq``; the scaled form
    never forms ``e^x`` or ``Gamma(-k, x)`` separately.
    """
    h = specfun.scaled_upper_gamma_nonpos(n_terms - 1, 1.0 / two_sigma_sq)
    return np.cumsum(h) / LN2


def capacity(table: CoefficientTable, ctl: SeriesControl | None = None) -> MetricResult:
    """Ergodic capacity in bits/s/Hz.

    ``ctl`` is accepted for symmetry with the other metrics; the number of
    terms is fixed by the table.
    """
    n = len(table)
    kernels = capacity_kernels(n, table.two_sigma_sq)
    value = float(math.fsum(table.weights * kernels))
    if not value > 0:
        raise ConsistencyError(f"capacity {value} is not positive", "capacity")
    # missing components have larger means than any kept one
    bound = table.truncation_error_bound * float(kernels[-1] + 1.0)
    return MetricResult(value, bound, n)


# ---------------------------------------------------------------------------
# BER
# ---------------------------------------------------------------------------

def ber_kernels(n_terms: int, two_sigma_sq: float, mod: ModulationScheme) -> np.ndarray:
    """Average conditional BEP against ``Gamma(j + 1, two_sigma_sq)``, j = 0..n_terms-1.

    Each kernel is

        alpha^beta Gamma(beta+j+1) s^beta / (2 Gamma(beta) j! (j+1) (1+alpha s)^(beta+j+1))
            * 2F1(1, beta+j+1; j+2; 1/(1+alpha s))

    with ``s = two_sigma_sq``; the prefactor is formed in log space.
    """
    a, b, s = mod.alpha, mod.beta, two_sigma_sq
    log_as = math.log(a * s)
    log_1as = math.log1p(a * s)
    z = 1.0 / (1.0 + a * s)
    out = np.empty(n_terms)
    for j in range(n_terms):
        y = a * s * (j + 1.0)
        if y < BER_SMALL_SNR:
            # the 2F1 path loses ~eps/y here; expand gamma(b, t) = sum (-1)^n t^(b+n) / (n! (b+n))
            # and average with E[X^p] = s^p Gamma(j+1+p)/j!
            lower = math.fsum(
                (-1) ** n * math.exp((b + n) * log_as + math.lgamma(j + 1.0 + b + n) - math.lgamma(j + 1.0)
                                     - math.lgamma(n + 1.0) - math.log(b + n))
                for n in range(4)
            )
            out[j] = 0.5 - lower / (2.0 * math.gamma(b))
            continue
        log_pref = (
            math.lgamma(b + j + 1.0) - math.lgamma(j + 1.0) - math.lgamma(b)
            + b * log_as - (b + j + 1.0) * log_1as - math.log(2.0 * (j + 1.0))
        )
        f = specfun.gauss_2f1(1.0, b + j + 1.0, j + 2.0, z, transform_above=BER_2F1_TRANSFORM_ABOVE)
        out[j] = math.exp(log_pref) * f
    return out


def ber_exact(table: CoefficientTable, mod: ModulationScheme, ctl: SeriesControl | None = None) -> MetricResult:
    """Average bit error rate of a binary modulation over FTR fading."""
    n = len(table)
    value = float(math.fsum(table.weights * ber_kernels(n, table.two_sigma_sq, mod)))
    if not 0.0 < value <= 0.5 * (1.0 + 1e-12):
        raise ConsistencyError(f"BER {value!r} outside (0, 0.5]", "ber_exact")
    value = min(value, 0.5)
    # each kernel is a probability below 1/2
    return MetricResult(value, 0.5 * table.truncation_error_bound, n)


def ber_asymptotic(params: FtrParams, mod: ModulationScheme) -> float:
    """High-SNR approximation of :func:`ber_exact`, proportional to ``1/avg_snr``.

    This is the j = 0 mixture weight times the leading ``1/s`` term of the
    j = 0 BER kernel.
    """
    m, K, delta = params.m, params.K, params.delta
    p = m + K
    r = p * p - (K * delta) ** 2
    z = p / math.sqrt(r)
    # P_nu = P_{-nu-1}; the reflected degree keeps tiny m away from nu = -1
    leg = specfun.log_assoc_legendre_p(m - 1.0 if m >= 0.5 else -m, 0, z)
    log_w0 = m * math.log(m) - 0.5 * m * math.log(r) + leg.log_magnitude
    log_val = (
        log_w0 + math.lgamma(mod.beta + 1.0) - math.log(2.0) - math.lgamma(mod.beta)
        - math.log(mod.alpha * params.two_sigma_sq)
    )
    return leg.sign * math.exp(log_val)


def asymptote_in_regime(params: FtrParams) -> bool:
    return params.avg_snr_db >= ASYMPTOTE_REGIME_DB
