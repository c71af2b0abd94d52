"""FTR distribution: parameters, gamma-mixture coefficients, PDF and CDF.

The SNR of the fluctuating two-ray channel is a mixture of gamma (Erlang)
densities with shape ``j + 1`` and scale ``2 sigma^2``.  The mixture
weights are

    w_j = m^m / Gamma(m) * K^j d_j / j!

where ``d_j`` is a double binomial sum of Legendre functions of degree
``j + m - 1`` (see :func:`dj_coefficient`).
"""
from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import ConsistencyError, ConvergenceError, DomainError, RangeError, TruncationWarning
from .specfun import LogSigned

#: Closed-form d_j values whose estimated relative rounding error exceeds
#: this are recomputed from the phase-average integral instead.
CLOSED_FORM_RTOL = 1e-10

#: Largest relative imaginary part tolerated when assembling d_j.
RESIDUE_TOL = 1e-10

_EPS = np.finfo(float).eps
# observed closed-form error is ~80 ulps times the condition number (the
# Legendre inputs carry ~1e-14 each); keep a margin above that
_ROUNDING_ULPS = 128.0

# quarter-turn index -> (real, imag) of i**q
_QUARTER_TURNS = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True)
class FtrParams:
    """FTR channel parameters.

    Attributes:
        m: shadowing severity of the specular fluctuation (> 0).
        K: ratio of specular to diffuse average power (>= 0).
        delta: balance of the two specular waves, 0 (one wave) to 1 (equal).
        avg_snr: average SNR, linear scale (> 0).
    """

    m: float
    K: float
    delta: float
    avg_snr: float = 1.0

    def __post_init__(self):
        for name in ("m", "K", "delta", "avg_snr"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite real, got {value!r}", "FtrParams")
        if not self.m > 0:
            raise DomainError(f"m must be > 0, got {self.m}", "FtrParams")
        if not self.K >= 0:
            raise DomainError(f"K must be >= 0, got {self.K}", "FtrParams")
        if not 0 <= self.delta <= 1:
            raise DomainError(f"delta must lie in [0, 1], got {self.delta}", "FtrParams")
        if not self.avg_snr > 0:
            raise DomainError(f"avg_snr must be > 0, got {self.avg_snr}", "FtrParams")

    @classmethod
    def from_db(cls, m, K, delta, avg_snr_db):
        return cls(m, K, delta, db_to_linear(avg_snr_db))

    @property
    def two_sigma_sq(self) -> float:
        """Diffuse power ``2 sigma^2`` with the transmit SNR normalised to one."""
        return self.avg_snr / (1.0 + self.K)

    @property
    def sigma(self) -> float:
        return math.sqrt(0.5 * self.two_sigma_sq)

    @property
    def avg_snr_db(self) -> float:
        return linear_to_db(self.avg_snr)

    def with_snr(self, avg_snr: float) -> "FtrParams":
        return FtrParams(self.m, self.K, self.delta, avg_snr)


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0) if np.ndim(value_db) else 10.0 ** (value_db / 10.0)


def linear_to_db(value):
    return 10.0 * np.log10(value) if np.ndim(value) else 10.0 * math.log10(value)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the infinite mixture series.

    The series stops at the first index where ``tail_window`` consecutive
    weights are below ``rel_tol`` times the running sum, or at
    ``max_terms`` terms, whichever comes first.
    """

    max_terms: int = 40
    rel_tol: float = 1e-9
    tail_window: int = 3

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}", "SeriesControl")
        if not 0 < self.rel_tol < 1:
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}", "SeriesControl")
        if int(self.tail_window) != self.tail_window or self.tail_window < 1:
            raise DomainError("tail_window must be a positive integer", "SeriesControl")

    @classmethod
    def from_env(cls, **overrides) -> "SeriesControl":
        """Defaults overridden by ``FTR_MAX_TERMS`` / ``FTR_REL_TOL``, then by kwargs."""
        kwargs = {}
        if os.environ.get("FTR_MAX_TERMS"):
            kwargs["max_terms"] = int(os.environ["FTR_MAX_TERMS"])
        if os.environ.get("FTR_REL_TOL"):
            kwargs["rel_tol"] = float(os.environ["FTR_REL_TOL"])
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kwargs)


@dataclass(frozen=True)
class CoefficientTable:
    """Folded mixture weights ``w_j`` for one parameter set.

    ``log_weights``/``signs`` hold the weights in log/sign form.
    ``methods`` records how each d_j was obtained (``"closed"`` for the
    Legendre double sum, ``"phase"`` for the phase-average integral,
    ``"reduced"`` for the K = 0 or delta = 0 shortcuts) and ``residues`` the
    relative imaginary part left over from the complex assembly.
    """

    params: FtrParams
    log_weights: np.ndarray
    signs: np.ndarray
    truncation_error_bound: float
    converged: bool
    methods: tuple = field(default=())
    residues: tuple = field(default=())

    @property
    def terms(self) -> tuple:
        return tuple(LogSigned(float(lw), int(s)) for lw, s in zip(self.log_weights, self.signs))

    @property
    def weights(self) -> np.ndarray:
        return self.signs * np.exp(self.log_weights)

    @property
    def total(self) -> float:
        return float(math.fsum(self.weights))

    @property
    def two_sigma_sq(self) -> float:
        return self.params.two_sigma_sq

    def __len__(self):
        return len(self.log_weights)


# ---------------------------------------------------------------------------
# d_j coefficients
# ---------------------------------------------------------------------------

def _log_binom(n, k):
    return math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)


@dataclass(frozen=True)
class _Assembly:
    value: LogSigned
    residue: float  # |imag| / |real|
    condition: float  # sum |terms| / |real|


# Test hook: when True, positive-order Legendre terms skip the continuation
# phase, which is exactly the kind of branch slip the residue check exists
# to catch.  Only the self-test touches this.
_FLIP_POSITIVE_ORDER_BRANCH = False


def _legendre_terms(j: int, params: FtrParams):
    """log|Gamma(j+m+2l-k) P^{k-2l}_{j+m-1}(z)| and its sign, keyed by 2l-k."""
    m = params.m
    # P_nu = P_{-nu-1}; the reflected degree keeps tiny m away from nu = -1
    nu = j + m - 1.0 if j + m >= 0.5 else -m
    p = m + params.K
    c = params.K * params.delta
    r = p * p - c * c
    z = p / math.sqrt(r)
    log_p_neg = specfun.log_legendre_p_negative_orders(nu, j, z)  # index n -> P^{-n}
    out = {}
    for n in range(-j, j + 1):
        if n >= 0:
            # order k-2l = -n <= 0
            lp = LogSigned(float(log_p_neg[n]), 1) if math.isfinite(log_p_neg[n]) else LogSigned.zero()
        else:
            # order k-2l = |n| > 0, from the reflection on (1, inf)
            base = LogSigned(float(log_p_neg[-n]), 1) if math.isfinite(log_p_neg[-n]) else LogSigned.zero()
            lp = specfun.legendre_reflection(nu, -n) * base
        out[n] = specfun.gamma_signed((j + n) + m) * lp  # integer part first
    return out, r


def _assemble_closed_form(j: int, params: FtrParams) -> _Assembly:
    m, K, delta = params.m, params.K, params.delta
    leg, r = _legendre_terms(j, params)
    log_r_pow = -0.5 * (j + m) * math.log(r)
    log_half_delta = math.log(0.5 * delta)
    mags, turns, signs = [], [], []
    for k in range(j + 1):
        lk = _log_binom(j, k) + k * log_half_delta
        for l in range(k + 1):
            n = 2 * l - k
            g = leg[n]
            if g.is_zero:
                continue
            # e^{i pi (2l-k)/2} from the series, times the continuation phase
            # e^{-i pi mu/2} (mu = k-2l) that carries the Ferrers function
            # from the cut onto (1, inf)
            q = n
            if not (_FLIP_POSITIVE_ORDER_BRANCH and n < 0):
                q += n
            mags.append(lk + _log_binom(k, l) + g.log_magnitude + log_r_pow)
            signs.append(g.sign)
            turns.append(q % 4)
    mags = np.array(mags)
    rot = _QUARTER_TURNS[np.array(turns)] * np.array(signs, dtype=float)[:, None]
    top = mags.max()
    scaled = np.exp(mags - top)
    re = float(np.sum(rot[:, 0] * scaled))
    im = float(np.sum(rot[:, 1] * scaled))
    magnitude = float(np.sum(scaled))
    if re == 0.0:
        return _Assembly(LogSigned.zero(), math.inf if im else 0.0, math.inf)
    value = LogSigned(top + math.log(abs(re)), 1 if re > 0 else -1)
    return _Assembly(value, abs(im) / abs(re), magnitude / abs(re))


def _reduced_dj(j: int, params: FtrParams):
    """d_j for K = 0 or delta = 0, where no non-zero Legendre order survives."""
    m, K, delta = params.m, params.K, params.delta
    if delta == 0 or K == 0:
        # only k = 2l survives; for delta = 0 only k = 0
        base = math.lgamma(j + m) - (j + m) * math.log(m + K)
        if delta == 0:
            return LogSigned(base, 1)
        logs = [_log_binom(j, k) + k * math.log(0.5 * delta) + _log_binom(k, k // 2)
                for k in range(0, j + 1, 2)]
        top = max(logs)
        return LogSigned(base + top + math.log(math.fsum(math.exp(v - top) for v in logs)), 1)
    return None


def dj_coefficient(j: int, params: FtrParams) -> LogSigned:
    """Mixture coefficient d_j from the Legendre double sum.

    Each term carries the phase ``exp(i pi (2l - k)/2)`` and a Legendre
    function of order ``k - 2l``.  The Legendre function is read as the
    Ferrers function continued onto (1, inf), i.e. ``exp(-i pi mu / 2)``
    times the real function returned by :func:`specfun.assoc_legendre_p`.
    The sum is assembled in complex arithmetic and its imaginary part must
    vanish; a residue above ``RESIDUE_TOL`` raises
    :class:`ConsistencyError`.

    The double sum alternates in sign and loses roughly
    ``log10(condition)`` digits; see :func:`dj_closed_form_condition`.
    """
    if int(j) != j or j < 0:
        raise DomainError(f"j must be a non-negative integer, got {j!r}", "dj_coefficient")
    j = int(j)
    reduced = _reduced_dj(j, params)
    if reduced is not None:
        return reduced
    asm = _assemble_closed_form(j, params)
    _check_residue(j, asm)
    return asm.value


def dj_imaginary_residue(j: int, params: FtrParams) -> float:
    """|Im d_j| / |Re d_j| of the complex double sum (0 on the real K = 0 or delta = 0 paths)."""
    if int(j) != j or j < 0:
        raise DomainError(f"j must be a non-negative integer, got {j!r}", "dj_imaginary_residue")
    if _reduced_dj(int(j), params) is not None:
        return 0.0
    return _assemble_closed_form(int(j), params).residue


def _check_residue(j, asm):
    if not asm.residue <= RESIDUE_TOL:
        raise ConsistencyError(
            f"d_{j} has relative imaginary residue {asm.residue:.3g}; "
            "the Legendre branch is inconsistent",
            "dj_coefficient",
        )


def dj_closed_form_condition(j: int, params: FtrParams) -> float:
    """Ratio of the summed term magnitudes to |d_j| for the double sum."""
    if _reduced_dj(j, params) is not None:
        return 1.0
    return _assemble_closed_form(int(j), params).condition


def dj_phase_average(js, params: FtrParams, max_nodes: int = 1 << 16) -> np.ndarray:
    """log d_j from the phase-average form of the same integral.

    Averaging the Bessel generating function over the phase difference
    theta gives

        d_j = Gamma(j+m) * mean_theta (1 + D cos t)^j / (m + K + K D cos t)^(j+m),

    a positive periodic integrand, so the trapezoid rule on a uniform grid
    converges geometrically.  Nodes are doubled until successive estimates
    agree to 1e-14.
    """
    js = np.atleast_1d(np.asarray(js, dtype=float))
    m, K, delta = params.m, params.K, params.delta
    n_nodes = 64
    prev = None
    while True:
        theta = (np.arange(n_nodes) + 0.5) * (2.0 * math.pi / n_nodes)
        w = 1.0 + delta * np.cos(theta)
        with np.errstate(divide="ignore"):
            log_w = np.log(w)
        log_den = np.log(m + K * w)
        log_f = np.where(js[:, None] == 0, 0.0, js[:, None] * log_w[None, :]) - (js[:, None] + m) * log_den[None, :]
        top = log_f.max(axis=1)
        est = top + np.log(np.mean(np.exp(log_f - top[:, None]), axis=1))
        if prev is not None and np.all(np.abs(est - prev) < 1e-14 * np.maximum(1.0, np.abs(est))):
            break
        if n_nodes >= max_nodes:
            raise ConvergenceError("phase-average quadrature did not converge", "dj_phase_average")
        prev = est
        n_nodes *= 2
    lg = np.array([math.lgamma(j + m) for j in js])
    return lg + est


def build_coefficients(params: FtrParams, ctl: SeriesControl | None = None) -> CoefficientTable:
    """Fold the prefactor into d_j and truncate the mixture adaptively.

    d_j is taken from the Legendre double sum while its estimated rounding
    error stays below ``CLOSED_FORM_RTOL``; past that index (the
    alternating sum degrades as j grows) the remaining coefficients come
    from :func:`dj_phase_average`.  If the tail criterion is not met within
    ``ctl.max_terms`` terms a :class:`TruncationWarning` is issued and the
    table is returned with ``converged=False``.

    ``truncation_error_bound`` is the largest weight in the final window,
    or the missing probability mass ``1 - sum(w)`` if that is larger.
    """
    ctl = ctl or SeriesControl()
    m, K = params.m, params.K
    if K == 0:
        return CoefficientTable(params, np.array([0.0]), np.array([1]), 0.0, True, ("reduced",), (0.0,))

    log_pref = m * math.log(m) - math.lgamma(m)
    log_k = math.log(K)
    reduced = params.delta == 0
    use_closed = not reduced
    log_w, signs, methods, residues = [], [], [], []
    running = 0.0
    quiet = 0
    phase_cache = {}
    converged = False

    def phase_value(j):
        if j not in phase_cache:
            block = np.arange(j, min(j + 64, ctl.max_terms))
            for jj, v in zip(block, dj_phase_average(block, params)):
                phase_cache[int(jj)] = float(v)
        return phase_cache[j]

    for j in range(ctl.max_terms):
        if reduced:
            d = _reduced_dj(j, params)
            method, residue = "reduced", 0.0
        else:
            d = None
            if use_closed:
                asm = _assemble_closed_form(j, params)
                _check_residue(j, asm)
                if _ROUNDING_ULPS * _EPS * asm.condition <= CLOSED_FORM_RTOL:
                    d, method, residue = asm.value, "closed", asm.residue
                else:
                    use_closed = False
            if d is None:
                d, method, residue = LogSigned(phase_value(j), 1), "phase", 0.0
        lw = log_pref + j * log_k - math.lgamma(j + 1.0) + d.log_magnitude
        log_w.append(lw)
        signs.append(d.sign)
        methods.append(method)
        residues.append(residue)
        w = d.sign * math.exp(lw) if d.sign else 0.0
        running += w
        if abs(w) <= ctl.rel_tol * abs(running):
            quiet += 1
            if quiet >= ctl.tail_window:
                converged = True
                break
        else:
            quiet = 0

    weights = np.array(signs) * np.exp(np.array(log_w))
    window = np.abs(weights[-ctl.tail_window:])
    bound = float(max(window.max(), 1.0 - math.fsum(weights), 0.0))
    if not converged:
        warnings.warn(
            f"FTR mixture for {params} not converged after {ctl.max_terms} terms "
            f"(tail bound {bound:.3g})",
            TruncationWarning,
            stacklevel=2,
        )
    return CoefficientTable(
        params=params,
        log_weights=np.array(log_w),
        signs=np.array(signs, dtype=int),
        truncation_error_bound=bound,
        converged=converged,
        methods=tuple(methods),
        residues=tuple(residues),
    )


# ---------------------------------------------------------------------------
# PDF / CDF
# ---------------------------------------------------------------------------

def _as_grid(x):
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError("x must be >= 0", "ftr")
    return arr


def _log_gamma_kernel(x: np.ndarray, n_terms: int, scale: float) -> np.ndarray:
    """log f_G(x; j+1, scale) for j = 0..n_terms-1, shape (n_terms, len(x))."""
    j = np.arange(n_terms, dtype=float)[:, None]
    lg = np.array([math.lgamma(k + 1.0) for k in range(n_terms)])[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        xlog = np.where(j == 0, 0.0, j * np.log(x)[None, :])
    return xlog - lg - (j + 1.0) * math.log(scale) - x[None, :] / scale


def ftr_pdf(x, table: CoefficientTable):
    """Density of the instantaneous SNR at ``x`` (scalar or array)."""
    scalar = np.ndim(x) == 0
    xs = _as_grid(x)
    out = np.empty_like(xs)
    n = len(table)
    for start in range(0, len(xs), 4096):
        chunk = xs[start:start + 4096]
        logs = table.log_weights[:, None] + _log_gamma_kernel(chunk, n, table.two_sigma_sq)
        top = np.max(logs, axis=0)
        top = np.where(np.isfinite(top), top, 0.0)
        out[start:start + 4096] = np.exp(top) * np.sum(table.signs[:, None] * np.exp(logs - top), axis=0)
    out = np.maximum(out, 0.0)
    return float(out[0]) if scalar else out


def ftr_cdf(x, table: CoefficientTable):
    """Distribution function of the instantaneous SNR (scalar or array)."""
    scalar = np.ndim(x) == 0
    xs = _as_grid(x)
    out = np.empty_like(xs)
    w = table.weights
    for start in range(0, len(xs), 2048):
        chunk = xs[start:start + 2048]
        p = specfun.regularized_gamma_p_table(len(table), chunk / table.two_sigma_sq)
        # fixed-order accumulation; BLAS rounds identical columns differently by position
        acc = np.zeros(len(chunk))
        for wj, pj in zip(w, p):
            acc += wj * pj
        out[start:start + 2048] = acc
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# TWDP mixture (conditional model given the shadowing variable)
# ---------------------------------------------------------------------------

def twdp_weights(k_cond: float, delta: float, ctl: SeriesControl | None = None) -> np.ndarray:
    """Gamma-mixture weights ``exp(-K) K^j t_j / j!`` of the TWDP SNR.

    ``t_j = sum_k C(j,k) (delta/2)^k S_k`` with
    ``S_k = sum_l C(k,l) I_{2l-k}(-K delta)``.  All terms of ``S_k`` share
    the sign ``(-1)^k``, so the outer sum alternates and loses about
    ``2 K delta / ln 10`` digits; a :class:`ConvergenceError` is raised when
    the estimated rounding error exceeds ``ctl.rel_tol`` or the tail
    criterion is not met.
    """
    ctl = ctl or SeriesControl(max_terms=400, rel_tol=1e-9)
    if k_cond < 0 or not 0 <= delta <= 1:
        raise DomainError("need K >= 0 and 0 <= delta <= 1", "twdp_pdf")
    if k_cond == 0:
        return np.array([1.0])
    n = ctl.max_terms
    y = k_cond * delta
    log_pois = -k_cond + np.arange(n) * math.log(k_cond) - np.array([math.lgamma(j + 1.0) for j in range(n)])
    if delta == 0:
        weights = np.exp(log_pois)
        cond = np.ones(n)
    else:
        # e^{-y} I_|n|(y), sign (-1)^n restored below through (-1)^k
        ie = np.array([specfun.bessel_i(v, y) for v in range(n)]) * math.exp(-y) if y < 700 else None
        if ie is None:
            raise RangeError(f"Bessel argument {y} too large", "twdp_pdf")
        ks = np.arange(n)
        log_binom = (np.array([math.lgamma(v + 1.0) for v in range(n)]))
        s = np.empty(n)
        for k in range(n):
            l = np.arange(k + 1)
            c = np.exp(log_binom[k] - log_binom[l] - log_binom[k - l] - k * math.log(2.0))
            s[k] = float(np.sum(c * ie[np.abs(2 * l - k)]))  # S_k / 2^k, scaled by e^{-y}
        # t_j e^{-y} = sum_k C(j,k) delta^k (-1)^k (S_k / 2^k)
        weights = np.empty(n)
        cond = np.empty(n)
        for j in range(n):
            k = ks[: j + 1]
            mag = np.exp(log_binom[j] - log_binom[k] - log_binom[j - k] + k * math.log(delta)) * s[: j + 1]
            terms = np.where(k % 2 == 0, mag, -mag)
            total = math.fsum(terms)
            weights[j] = total
            cond[j] = float(np.sum(mag)) / abs(total) if total != 0 else math.inf
        weights = weights * np.exp(log_pois + y)
    running = np.cumsum(weights)
    quiet = 0
    for j in range(n):
        if abs(weights[j]) <= ctl.rel_tol * abs(running[j]):
            quiet += 1
            if quiet >= ctl.tail_window:
                w = weights[: j + 1]
                worst = float(np.max(np.abs(w) * cond[: j + 1] * _EPS) / abs(np.sum(w)))
                if not worst <= ctl.rel_tol:
                    raise ConvergenceError(
                        f"TWDP series for K={k_cond}, delta={delta} loses too many digits "
                        f"(rounding ~{worst:.1e})",
                        "twdp_pdf", partial=float(np.sum(w)), bound=worst,
                    )
                return w
        else:
            quiet = 0
    raise ConvergenceError(
        f"TWDP series for K={k_cond}, delta={delta} did not converge",
        "twdp_pdf",
        partial=float(running[-1]),
        bound=abs(float(weights[-1])),
    )


def twdp_pdf(x, k_cond: float, delta: float, two_sigma_sq: float, ctl: SeriesControl | None = None):
    """TWDP SNR density as a gamma mixture with scale ``two_sigma_sq``."""
    if not two_sigma_sq > 0:
        raise DomainError("two_sigma_sq must be > 0", "twdp_pdf")
    scalar = np.ndim(x) == 0
    xs = _as_grid(x)
    w = twdp_weights(k_cond, delta, ctl)
    kernel = np.exp(_log_gamma_kernel(xs, len(w), two_sigma_sq))
    out = np.zeros(len(xs))
    for wj, kj in zip(w, kernel):
        out += wj * kj
    return float(out[0]) if scalar else out
