"""Special functions needed by the FTR closed forms.

Everything here works on plain floats or numpy arrays and has no
dependency beyond numpy and the standard library.  Values that can leave
the double range (gamma functions of large arguments, Legendre functions
of high degree) are produced in log-magnitude/sign form via
:class:`LogSigned`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, RangeError

EULER_GAMMA = 0.57721566490153286061

#: Largest |order| accepted by the Legendre routines.
MAX_LEGENDRE_ORDER = 2000

_SERIES_CAP_2F1 = 200_000
_LEGENDRE_SERIES_CAP = 100_000
_RESCALE = 1e200


@dataclass(frozen=True)
class LogSigned:
    """A real number stored as ``sign * exp(log_magnitude)``.

    ``sign == 0`` encodes an exact zero; ``log_magnitude`` is then ``-inf``
    and carries no information.
    """

    log_magnitude: float
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")

    @classmethod
    def from_value(cls, value: float) -> "LogSigned":
        if value == 0:
            return cls(-math.inf, 0)
        if not math.isfinite(value):
            raise DomainError(f"cannot encode non-finite value {value!r}", "LogSigned")
        return cls(math.log(abs(value)), 1 if value > 0 else -1)

    @classmethod
    def zero(cls) -> "LogSigned":
        return cls(-math.inf, 0)

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def value(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_magnitude)
        except OverflowError:
            raise RangeError(
                f"exp({self.log_magnitude:.6g}) overflows a double", "LogSigned"
            ) from None

    __float__ = value

    def __neg__(self) -> "LogSigned":
        return LogSigned(self.log_magnitude, -self.sign)

    def __mul__(self, other) -> "LogSigned":
        if not isinstance(other, LogSigned):
            other = LogSigned.from_value(float(other))
        if self.sign == 0 or other.sign == 0:
            return LogSigned.zero()
        return LogSigned(self.log_magnitude + other.log_magnitude, self.sign * other.sign)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogSigned":
        if not isinstance(other, LogSigned):
            other = LogSigned.from_value(float(other))
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogSigned")
        if self.sign == 0:
            return LogSigned.zero()
        return LogSigned(self.log_magnitude - other.log_magnitude, self.sign * other.sign)

    def __pow__(self, exponent: float) -> "LogSigned":
        if self.sign < 0:
            raise DomainError("fractional power of a negative LogSigned", "LogSigned")
        if self.sign == 0:
            return LogSigned.zero() if exponent > 0 else LogSigned(0.0, 1)
        return LogSigned(self.log_magnitude * exponent, 1)


def logsigned_sum(log_mags, signs):
    """Sum ``signs * exp(log_mags)`` without overflow.

    Returns ``(log|sum|, sign(sum), log(sum of |terms|))``; the last entry
    lets callers estimate how much cancellation took place.
    """
    log_mags = np.asarray(log_mags, dtype=float)
    signs = np.asarray(signs, dtype=float)
    live = signs != 0
    if not np.any(live):
        return -math.inf, 0, -math.inf
    top = np.max(log_mags[live])
    scaled = np.where(live, np.exp(np.where(live, log_mags - top, 0.0)), 0.0)
    total = float(np.sum(signs * scaled))
    abs_total = float(np.sum(scaled))
    log_abs = top + math.log(abs_total)
    if total == 0.0:
        return -math.inf, 0, log_abs
    return top + math.log(abs(total)), (1 if total > 0 else -1), log_abs


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}", "log_gamma")
    return math.lgamma(x)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gamma_signed(x: float) -> LogSigned:
    """Gamma function of any real non-pole argument, in log/sign form."""
    if _is_nonpositive_integer(x):
        raise DomainError(f"gamma has a pole at {x!r}", "gamma")
    lg = math.lgamma(x)
    if x > 0:
        return LogSigned(lg, 1)
    return LogSigned(lg, -1 if math.floor(x) % 2 else 1)


def rgamma_signed(x: float) -> LogSigned:
    """Reciprocal gamma ``1/Gamma(x)``; exactly zero at the poles."""
    if _is_nonpositive_integer(x):
        return LogSigned.zero()
    g = gamma_signed(x)
    return LogSigned(-g.log_magnitude, g.sign)


def digamma(x: float) -> float:
    """Digamma function for real ``x`` away from the poles."""
    if _is_nonpositive_integer(x):
        raise DomainError(f"digamma has a pole at {x!r}", "digamma")
    if x < 0:
        return digamma(1.0 - x) - math.pi / math.tan(math.pi * x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = inv2 * (1 / 12 - inv2 * (1 / 120 - inv2 * (1 / 252 - inv2 * (
        1 / 240 - inv2 * (1 / 132 - inv2 * (691 / 32760 - inv2 / 12))))))
    return acc + math.log(x) - 0.5 / x - series


def _log_poisson_pmf(i, y):
    # log(e^-y y^i / i!) with the y = 0 case handled explicitly
    i = np.asarray(i, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = i * np.log(y) - y - _lgamma_vec(i + 1.0)
    out = np.where(y == 0, np.where(i == 0, 0.0, -np.inf), out)
    return out


_lgamma_vec = np.vectorize(math.lgamma, otypes=[float])


def _p_series(n: int, y: np.ndarray) -> np.ndarray:
    """P(n, y) by the ascending series; intended for ``y < n``."""
    y = np.asarray(y, dtype=float)
    lead = np.exp(_log_poisson_pmf(n, y))
    total = np.ones_like(y)
    term = np.ones_like(y)
    t = 1
    while True:
        term = term * y / (n + t)
        total = total + term
        t += 1
        if np.all(term <= 1e-17 * total) or t > 100_000:
            break
    return lead * total


def regularized_gamma_p_table(n_max: int, y) -> np.ndarray:
    """P(n, y) for every integer shape ``n = 1..n_max`` at once.

    Returns an array of shape ``(n_max, len(y))``.  Small values (``y < n``)
    are accumulated downward from the top shape by adding Poisson masses,
    large ones as ``1 - Q`` with ``Q`` accumulated upward, so no entry is
    formed by subtracting nearly equal numbers.
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if n_max < 1:
        raise DomainError("shape must be >= 1", "regularized_gamma_p")
    if np.any(y < 0) or np.any(np.isnan(y)):
        raise DomainError("regularized gamma requires x >= 0", "regularized_gamma_p")
    idx = np.arange(n_max + 1, dtype=float)[:, None]
    pmf = np.exp(_log_poisson_pmf(idx, y[None, :]))
    q_up = np.cumsum(pmf[:-1], axis=0)  # Q(n, y) for n = 1..n_max
    low = y < n_max
    p_top = np.zeros_like(y)
    if np.any(low):
        p_top[low] = _p_series(n_max, y[low])
    # P(n) = P(n_max) + sum_{i=n}^{n_max-1} pmf_i
    tail = np.cumsum(pmf[1:n_max][::-1], axis=0)[::-1]
    p_down = np.vstack([tail + p_top[None, :], p_top[None, :]]) if n_max > 1 else p_top[None, :]
    n_col = np.arange(1, n_max + 1, dtype=float)[:, None]
    out = np.where(y[None, :] < n_col, p_down, 1.0 - q_up)
    inf = np.isinf(y)
    if np.any(inf):
        out[:, inf] = 1.0
    return np.clip(out, 0.0, 1.0)


def lower_regularized_gamma(shape: int, x):
    """Regularized lower incomplete gamma ``P(shape, x)`` for integer shape."""
    if int(shape) != shape or shape < 1:
        raise DomainError(f"shape must be a positive integer, got {shape!r}", "lower_regularized_gamma")
    scalar = np.ndim(x) == 0
    out = regularized_gamma_p_table(int(shape), x)[-1]
    return float(out[0]) if scalar else out


def upper_regularized_gamma(shape: int, x):
    """``Q(shape, x) = 1 - P(shape, x)`` summed directly (integer shape)."""
    if int(shape) != shape or shape < 1:
        raise DomainError(f"shape must be a positive integer, got {shape!r}", "upper_regularized_gamma")
    scalar = np.ndim(x) == 0
    y = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(y < 0):
        raise DomainError("x must be >= 0", "upper_regularized_gamma")
    big = y >= shape
    out = np.empty_like(y)
    if np.any(big):
        i = np.arange(shape, dtype=float)[:, None]
        out[big] = np.exp(_log_poisson_pmf(i, y[big][None, :])).sum(axis=0)
    if np.any(~big):
        out[~big] = 1.0 - _p_series(int(shape), y[~big])
    return float(out[0]) if scalar else out


def exp1(x: float) -> float:
    """Exponential integral ``E1(x) = Gamma(0, x)`` for ``x > 0``."""
    if not x > 0:
        raise DomainError(f"E1 requires x > 0, got {x!r}", "exp1")
    if x < 1.0:
        total, term, k = 0.0, 1.0, 1
        while True:
            term *= -x / k
            contrib = term / k
            total += contrib
            if abs(contrib) < 1e-17 * abs(total):
                break
            k += 1
        return -EULER_GAMMA - math.log(x) - total
    return math.exp(-x) * _upper_gamma_cf_scaled(0.0, x)


def _upper_gamma_cf_scaled(a: float, x: float) -> float:
    """``exp(x) * x**(-a) * Gamma(a, x)`` by the Legendre continued fraction.

    Modified Lentz evaluation; converges for any real ``a`` when ``x`` is not
    small (callers use it for ``x >= 1``).
    """
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 100_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ConvergenceError(
        f"continued fraction for Gamma({a}, {x}) did not converge", "upper_incomplete_gamma", h
    )


def scaled_upper_gamma_nonpos(kmax: int, x: float) -> np.ndarray:
    """``h_k = x**k * exp(x) * Gamma(-k, x)`` for ``k = 0..kmax``.

    The scaling removes both the ``exp(-x)`` underflow and the ``x**-k``
    growth.  The downward recurrence ``h_{k+1} = (1 - x h_k)/(k + 1)`` is
    contracting once ``k + 1 > x``; orders below that are taken from the
    continued fraction directly.
    """
    if not x > 0:
        raise DomainError(f"Gamma(-k, x) requires x > 0, got {x!r}", "upper_incomplete_gamma_nonpos")
    if kmax < 0:
        raise DomainError("kmax must be >= 0", "upper_incomplete_gamma_nonpos")
    h = np.empty(kmax + 1)
    if x < 1.0:
        h[0] = math.exp(x) * exp1(x)
        start = 1
    else:
        direct = min(kmax, int(math.ceil(x)))
        for k in range(direct + 1):
            h[k] = _upper_gamma_cf_scaled(-float(k), x)
        start = direct + 1
    for k in range(start, kmax + 1):
        h[k] = (1.0 - x * h[k - 1]) / k
    return h


def log_upper_incomplete_gamma_nonpos(order: int, x: float) -> float:
    """``log Gamma(order, x)`` for ``order in {0, -1, -2, ...}``, ``x > 0``."""
    if int(order) != order or order > 0:
        raise DomainError(f"order must be a non-positive integer, got {order!r}", "upper_incomplete_gamma_nonpos")
    k = -int(order)
    h = scaled_upper_gamma_nonpos(k, x)[k]
    return math.log(h) - x - k * math.log(x)


def upper_incomplete_gamma_nonpos(order: int, x: float) -> float:
    """``Gamma(order, x)`` for non-positive integer ``order`` and ``x > 0``.

    Underflows to 0.0 for large ``x``; use
    :func:`log_upper_incomplete_gamma_nonpos` when that matters.
    """
    lg = log_upper_incomplete_gamma_nonpos(order, x)
    if lg > 709.0:
        raise RangeError(f"Gamma({order}, {x}) overflows", "upper_incomplete_gamma_nonpos")
    return math.exp(lg)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

def _series_2f1(a, b, c, z, tol, max_terms):
    """Plain power series; returns ``(sum, sum of |terms|)``."""
    total = 1.0
    magnitude = 1.0
    term = 1.0
    quiet = 0
    # before a+n, b+n, c+n have all turned positive the terms can shrink
    # and then grow again, so small terms there prove nothing
    settled = max(0.0, -a, -b, -c) + 1.0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        magnitude += abs(term)
        if term == 0.0:
            return total, magnitude
        if n >= settled and abs(term) <= tol * abs(total):
            quiet += 1
            if quiet >= 3:
                return total, magnitude
        else:
            quiet = 0
    bound = abs(term) / (1.0 - z) if z < 1 else math.inf
    raise ConvergenceError(
        f"2F1({a}, {b}; {c}; {z}) series did not converge in {max_terms} terms",
        "gauss_2f1",
        partial=total,
        bound=bound,
    )


def _poch_ratio_sum(a, b, m, w):
    # sum_{n<m} (a)_n (b)_n / (n! (1-m)_n) w^n, with the sum of |terms|
    total, magnitude, term = 1.0, 1.0, 1.0
    for n in range(m - 1):
        term *= (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * w
        total += term
        magnitude += abs(term)
    return total, magnitude


def _log_series_2f1(a, b, m, w, tol, max_terms):
    """sum_n (a)_n (b)_n / (n! (n+m)!) w^n [ln w - psi(n+1) - psi(n+m+1) + psi(a+n) + psi(b+n)]."""
    lw = math.log(w)
    psi1 = -EULER_GAMMA
    psi2 = digamma(m + 1.0)
    psia = digamma(a)
    psib = digamma(b)
    coef = 1.0 / math.factorial(m)
    total = coef * (lw - psi1 - psi2 + psia + psib)
    magnitude = abs(total)
    quiet = 0
    settled = max(0.0, -a, -b) + 1.0
    for n in range(max_terms):
        coef *= (a + n) * (b + n) / ((n + 1) * (n + m + 1)) * w
        psi1 += 1.0 / (n + 1)
        psi2 += 1.0 / (n + m + 1)
        psia += 1.0 / (a + n)
        psib += 1.0 / (b + n)
        term = coef * (lw - psi1 - psi2 + psia + psib)
        total += term
        magnitude += abs(term)
        if n >= settled and abs(term) <= tol * abs(total):
            quiet += 1
            if quiet >= 3:
                return total, magnitude
        else:
            quiet = 0
    raise ConvergenceError("logarithmic 2F1 series did not converge", "gauss_2f1", partial=total)


def _2f1_one_minus_z(a, b, c, z, tol, max_terms):
    """Linear transformation z -> 1 - z.

    Returns ``(value, condition)`` where ``condition`` is the ratio of the
    summed magnitudes of every individual term to the magnitude of the
    result, i.e. an estimate of the relative error amplification.
    """
    w = 1.0 - z
    s = c - a - b
    si = round(s)
    parts = []
    g_c = gamma_signed(c)
    if abs(s - si) > 1e-12 * max(1.0, abs(s)):
        coef1 = g_c * gamma_signed(s) * rgamma_signed(c - a) * rgamma_signed(c - b)
        coef2 = g_c * gamma_signed(-s) * rgamma_signed(a) * rgamma_signed(b) * LogSigned(s * math.log(w), 1)
        if not coef1.is_zero:
            parts.append((coef1.value(), _series_2f1(a, b, 1.0 - s, w, tol, max_terms)))
        if not coef2.is_zero:
            parts.append((coef2.value(), _series_2f1(c - a, c - b, 1.0 + s, w, tol, max_terms)))
    elif si >= 0:
        m = int(si)
        if m >= 1:
            coef1 = gamma_signed(float(m)) * g_c * rgamma_signed(a + m) * rgamma_signed(b + m)
            if not coef1.is_zero:
                parts.append((coef1.value(), _poch_ratio_sum(a, b, m, w)))
        coef2 = -(g_c * rgamma_signed(a) * rgamma_signed(b)) * ((-1.0) ** m * w ** m)
        if not coef2.is_zero:
            parts.append((coef2.value(), _log_series_2f1(a + m, b + m, m, w, tol, max_terms)))
    else:
        m = int(-si)
        coef1 = gamma_signed(float(m)) * g_c * rgamma_signed(a) * rgamma_signed(b) * LogSigned(-m * math.log(w), 1)
        if not coef1.is_zero:
            parts.append((coef1.value(), _poch_ratio_sum(a - m, b - m, m, w)))
        coef2 = -(g_c * rgamma_signed(a - m) * rgamma_signed(b - m)) * ((-1.0) ** m)
        if not coef2.is_zero:
            parts.append((coef2.value(), _log_series_2f1(a, b, m, w, tol, max_terms)))
    value = math.fsum(coef * total for coef, (total, _) in parts)
    magnitude = sum(abs(coef) * mag for coef, (_, mag) in parts)
    condition = magnitude / abs(value) if value != 0 else math.inf
    return value, condition


def gauss_2f1(a: float, b: float, c: float, z: float, *, transform_above: float = 0.5,
              max_terms: int = _SERIES_CAP_2F1, tol: float = 1e-16) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real ``0 <= z < 1``.

    For ``z > transform_above`` the ``1 - z`` linear transformation is tried
    first (including the logarithmic cases where ``c - a - b`` is an
    integer).  If its two parts cancel badly the plain power series is used
    instead, which always converges for ``z < 1`` but may need many terms.
    Convergence is declared after three consecutive terms below
    ``tol * |partial sum|``.
    """
    if _is_nonpositive_integer(c):
        raise DomainError(f"2F1 undefined for c = {c!r}", "gauss_2f1")
    if not (0.0 <= z < 1.0):
        raise DomainError(f"2F1 requires 0 <= z < 1, got {z!r}", "gauss_2f1")
    if z == 0.0 or a == 0.0 or b == 0.0:
        return 1.0
    polynomial = _is_nonpositive_integer(a) or _is_nonpositive_integer(b)
    if z > transform_above and not polynomial:
        try:
            value, condition = _2f1_one_minus_z(a, b, c, z, tol, max_terms)
        except ConvergenceError:
            pass
        else:
            if condition < 1e3 and math.isfinite(value):
                return value
    return _series_2f1(a, b, c, z, tol, max_terms)[0]


# ---------------------------------------------------------------------------
# Modified Bessel function of the first kind
# ---------------------------------------------------------------------------

def bessel_i(order: int, x: float) -> float:
    """Modified Bessel function ``I_order(x)`` for integer order, real x."""
    if int(order) != order:
        raise DomainError(f"bessel_i needs an integer order, got {order!r}", "bessel_i")
    n = abs(int(order))
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    ax = abs(x)
    half = 0.5 * ax
    q = half * half
    total, term, k = 1.0, 1.0, 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if term < 1e-17 * total:
            break
    # half underflows for denormal x; its log does not
    log_half = math.log(ax) - math.log(2.0)
    log_val = (n * log_half if n else 0.0) - math.lgamma(n + 1.0) + math.log(total)
    if log_val > 709.0:
        raise RangeError(f"I_{order}({x}) overflows a double", "bessel_i")
    val = math.exp(log_val)
    if x < 0 and n % 2:
        val = -val
    return val


# ---------------------------------------------------------------------------
# Associated Legendre functions on (1, inf)
# ---------------------------------------------------------------------------

def log_legendre_p_negative_orders(degree: float, max_order: int, x: float):
    """``log P^{-n}_degree(x)`` for ``n = 0..max_order`` and ``x >= 1``.

    Uses the representation

        P^{-n}_v(x) = ((x-1)/(x+1))^{n/2} ((1+x)/2)^v / n!
                      * 2F1(-v, n-v; 1+n; (x-1)/(x+1)),

    whose argument stays in [0, 1) for every ``x >= 1``.  Past the index
    ``i > v`` the series terms shrink monotonically, so the sums are formed
    without significant cancellation.  All values are positive; entries for
    ``n > 0`` at ``x = 1`` are ``-inf`` (the function vanishes there).
    """
    if not degree > -1:
        raise DomainError(f"Legendre degree must exceed -1, got {degree!r}", "assoc_legendre_p")
    if not x >= 1.0:
        raise DomainError(f"Legendre argument must be >= 1, got {x!r}", "assoc_legendre_p")
    if max_order > MAX_LEGENDRE_ORDER:
        raise DomainError(f"|order| above {MAX_LEGENDRE_ORDER} not supported", "assoc_legendre_p")
    n = np.arange(max_order + 1, dtype=float)
    if x == 1.0:
        return np.where(n == 0, 0.0, -np.inf)
    y = (x - 1.0) / (x + 1.0)
    nu = float(degree)
    total = np.ones_like(n)
    term = np.ones_like(n)
    log_scale = 0.0
    i = 0
    while True:
        term = term * ((i - nu) * (i + n - nu) / ((i + 1.0 + n) * (i + 1.0)) * y)
        total = total + term
        i += 1
        big = np.max(np.abs(total))
        if big > _RESCALE:
            total /= _RESCALE
            term /= _RESCALE
            log_scale += math.log(_RESCALE)
        if i > nu + 1 and np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
        if i > _LEGENDRE_SERIES_CAP:
            raise ConvergenceError(
                f"Legendre series for degree {degree} at x={x} did not converge",
                "assoc_legendre_p",
            )
    if np.any(total <= 0):
        raise ConvergenceError("Legendre series lost positivity", "assoc_legendre_p")
    lgam = np.array([math.lgamma(k + 1.0) for k in n])
    return (0.5 * n * math.log(y) + nu * math.log(0.5 * (1.0 + x)) - lgam
            + np.log(total) + log_scale)


def legendre_reflection(degree: float, order: int) -> LogSigned:
    """Connection coefficient ``Gamma(v+n+1)/Gamma(v-n+1)`` with ``n = order > 0``.

    On (1, inf) and for integer order, ``P^{n}_v = coef * P^{-n}_v``.
    """
    return gamma_signed(degree + order + 1.0) * rgamma_signed(degree - order + 1.0)


def log_assoc_legendre_p(degree: float, order: int, x: float) -> LogSigned:
    """``P^order_degree(x)`` for ``x >= 1`` as a :class:`LogSigned`."""
    if int(order) != order:
        raise DomainError("Legendre order must be an integer", "assoc_legendre_p")
    order = int(order)
    if order > 0 and x == 1.0:
        raise DomainError("P^mu_v(1) diverges for positive order", "assoc_legendre_p")
    n = abs(order)
    lp = float(log_legendre_p_negative_orders(degree, n, x)[n])
    base = LogSigned(lp, 1) if math.isfinite(lp) else LogSigned.zero()
    if order <= 0:
        return base
    return legendre_reflection(degree, n) * base


def assoc_legendre_p(degree: float, order: int, x: float) -> float:
    """Associated Legendre function of the first kind on ``[1, inf)``.

    This is the real-valued ("type 3") function.  ``degree`` is any real
    number above -1 and ``order`` any integer with ``|order| <=
    MAX_LEGENDRE_ORDER``.  Positive orders are obtained from the negative
    order through :func:`legendre_reflection`.
    """
    return log_assoc_legendre_p(degree, order, x).value()
