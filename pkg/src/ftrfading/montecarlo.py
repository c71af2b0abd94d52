"""Monte Carlo simulation of the physical FTR channel and KS goodness of fit.

One channel realization is

    V = sqrt(zeta) V1 e^{i phi1} + sqrt(zeta) V2 e^{i phi2} + X + iY

with ``zeta ~ Gamma(m, 1/m)``, uniform phases and ``X, Y ~ N(0, sigma^2)``.
The instantaneous SNR is ``|V|^2``.

Draws are produced in fixed-size chunks; chunk ``i`` uses its own stream
``SeedSequence(seed, spawn_key=(i,))``.  Results therefore depend only on
``(seed, n)``, not on how many workers ran the chunks.
"""
from __future__ import annotations

import io
import json
import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DomainError
from .ftr import FtrParams, SeriesControl, build_coefficients, ftr_cdf
from .metrics import ModulationScheme, conditional_bep

CHUNK = 1 << 16
DEFAULT_KS_CONTROL = SeriesControl(max_terms=5000, rel_tol=1e-12)
_BINARY_MAGIC = b"FTRSNR1\n"


def specular_amplitudes(params: FtrParams) -> tuple[float, float]:
    """(V1, V2) with V1^2 + V2^2 = 2 sigma^2 K and 2 V1 V2 = delta (V1^2 + V2^2)."""
    scale = params.sigma * math.sqrt(0.5 * params.K)
    a = math.sqrt(1.0 + params.delta)
    b = math.sqrt(1.0 - params.delta)
    return scale * (a + b), scale * (a - b)


def recover_k_delta(v1: float, v2: float, two_sigma_sq: float) -> tuple[float, float]:
    power = v1 * v1 + v2 * v2
    return power / two_sigma_sq, (2.0 * v1 * v2 / power if power > 0 else 0.0)


@dataclass(frozen=True)
class ChannelDraw:
    """A batch of channel realizations (array fields share one length)."""

    zeta: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    x_diffuse: np.ndarray
    y_diffuse: np.ndarray
    v1: float
    v2: float

    @property
    def snr(self) -> np.ndarray:
        root = np.sqrt(self.zeta)
        re = root * (self.v1 * np.cos(self.phi1) + self.v2 * np.cos(self.phi2)) + self.x_diffuse
        im = root * (self.v1 * np.sin(self.phi1) + self.v2 * np.sin(self.phi2)) + self.y_diffuse
        return re * re + im * im


def draw_channel(params: FtrParams, n: int, rng: np.random.Generator) -> ChannelDraw:
    v1, v2 = specular_amplitudes(params)
    # numpy's gamma sampler handles shape < 1 (Marsaglia-Tsang with a boost)
    zeta = rng.standard_gamma(params.m, n) / params.m
    phi = rng.uniform(0.0, 2.0 * math.pi, (2, n))
    xy = rng.normal(0.0, params.sigma, (2, n))
    return ChannelDraw(zeta, phi[0], phi[1], xy[0], xy[1], v1, v2)


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _chunks(n: int):
    return [(i, min(CHUNK, n - i * CHUNK)) for i in range((n + CHUNK - 1) // CHUNK)]


def _map_chunks(fn, n: int, workers: int):
    chunks = _chunks(n)
    if workers <= 1 or len(chunks) == 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def _check_n(n, minimum=1):
    if int(n) != n or n < minimum:
        raise DomainError(f"sample count must be an integer >= {minimum}, got {n!r}", "montecarlo")


def simulate_snr(params: FtrParams, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """``n`` instantaneous SNR draws in generation order."""
    _check_n(n)
    parts = _map_chunks(lambda c: draw_channel(params, c[1], _chunk_rng(seed, c[0])).snr, n, workers)
    return np.concatenate(parts)


def simulate_shadowing(m: float, n: int, seed: int) -> np.ndarray:
    """Draws of the unit-mean shadowing factor alone."""
    _check_n(n)
    return np.concatenate([_chunk_rng(seed, i).standard_gamma(m, size) / m for i, size in _chunks(n)])


@dataclass(frozen=True)
class EmpiricalDistribution:
    samples: np.ndarray
    count: int

    @classmethod
    def from_samples(cls, samples) -> "EmpiricalDistribution":
        arr = np.sort(np.asarray(samples, dtype=float))
        if arr.size == 0:
            raise DomainError("need at least one sample", "EmpiricalDistribution")
        return cls(arr, int(arr.size))

    def cdf(self, x):
        """Right-continuous empirical CDF."""
        return np.searchsorted(self.samples, x, side="right") / self.count

    @property
    def mean(self) -> float:
        return float(np.mean(self.samples))


def sample_channel(params: FtrParams, n: int, seed: int, workers: int = 1) -> EmpiricalDistribution:
    return EmpiricalDistribution.from_samples(simulate_snr(params, n, seed, workers))


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov
# ---------------------------------------------------------------------------

def critical_value(v: int, alpha: float = 0.05) -> float:
    """Large-sample KS threshold ``sqrt(-ln(alpha/2) / (2 v))``."""
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)", "critical_value")
    _check_n(v)
    return math.sqrt(-math.log(alpha / 2.0) / (2.0 * v))


@dataclass(frozen=True)
class KsReport:
    statistic: float
    critical: float
    sample_count: int
    significance: float
    accepted: bool
    seed: int | None = None


def ks_statistic(emp: EmpiricalDistribution, cdf: Callable) -> float:
    """Sup distance between the empirical CDF and ``cdf``, checked on both sides of each step."""
    n = emp.count
    f = np.asarray(cdf(emp.samples), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n), 0.0))


def ks_test(params: FtrParams, v: int = 10_000, alpha: float = 0.05, seed: int = 0, *,
            model: FtrParams | None = None, ctl: SeriesControl | None = None,
            workers: int = 1) -> KsReport:
    """Simulate ``v`` draws at ``params`` and test them against the analytic CDF.

    ``model`` (default ``params``) selects the parameters of the analytic
    CDF, which lets a power check feed deliberately wrong ones.
    """
    _check_n(v, 100)
    table = build_coefficients(model or params, ctl or DEFAULT_KS_CONTROL)
    emp = sample_channel(params, v, seed, workers)
    t = ks_statistic(emp, lambda x: ftr_cdf(x, table))
    crit = critical_value(v, alpha)
    return KsReport(t, crit, v, alpha, t < crit, seed)


# ---------------------------------------------------------------------------
# Monte Carlo metric estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    n: int


def _mc_mean(params, n, seed, workers, fn) -> McEstimate:
    def chunk(c):
        y = fn(draw_channel(params, c[1], _chunk_rng(seed, c[0])).snr)
        return float(np.sum(y)), float(np.sum(y * y))

    parts = _map_chunks(chunk, n, workers)
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0) * n / (n - 1) if n > 1 else 0.0
    return McEstimate(mean, math.sqrt(var / n), n)


def mc_capacity(params: FtrParams, n: int, seed: int, workers: int = 1) -> McEstimate:
    _check_n(n, 1000)
    return _scaled(_mc_mean(params, n, seed, workers, np.log1p), 1.0 / math.log(2.0))


def _scaled(est: McEstimate, factor: float) -> McEstimate:
    return McEstimate(est.value * factor, est.stderr * factor, est.n)


def mc_ber(params: FtrParams, mod: ModulationScheme, n: int, seed: int, workers: int = 1) -> McEstimate:
    """Average of the conditional BEP over simulated SNR draws."""
    _check_n(n, 1000)
    return _mc_mean(params, n, seed, workers, lambda x: conditional_bep(x, mod))


# ---------------------------------------------------------------------------
# Sample dumps
# ---------------------------------------------------------------------------

def _header(params: FtrParams, seed: int) -> dict:
    return {"params": asdict(params), "seed": seed}


def write_samples(path, samples, params: FtrParams, seed: int, fmt: str = "csv") -> None:
    """Write one SNR value per record; the header carries params and seed.

    ``csv``: ``#``-prefixed JSON header line, a ``snr`` column header, then
    values.  ``binary``: magic line, 4-byte little-endian header length,
    JSON header, then little-endian float64 values.
    """
    header = json.dumps(_header(params, seed), sort_keys=True)
    data = np.asarray(samples, dtype=float)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            fh.write(f"# {header}\nsnr\n")
            for value in data:
                fh.write(f"{float(value)!r}\n")
    elif fmt == "binary":
        raw = header.encode()
        with open(path, "wb") as fh:
            fh.write(_BINARY_MAGIC)
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
            fh.write(data.astype("<f8").tobytes())
    else:
        raise DomainError(f"unknown sample format {fmt!r}", "write_samples")


def read_samples(path) -> tuple[dict, np.ndarray]:
    raw = Path(path).read_bytes()
    if raw.startswith(_BINARY_MAGIC):
        off = len(_BINARY_MAGIC)
        (size,) = struct.unpack_from("<I", raw, off)
        off += 4
        header = json.loads(raw[off:off + size])
        return header, np.frombuffer(raw[off + size:], dtype="<f8").copy()
    lines = io.StringIO(raw.decode())
    first = lines.readline()
    if not first.startswith("# "):
        raise DomainError("missing sample header", "read_samples")
    header = json.loads(first[2:])
    lines.readline()
    return header, np.loadtxt(lines, ndmin=1)
