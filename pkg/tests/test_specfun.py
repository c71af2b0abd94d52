import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, example, given, settings, strategies as st
from scipy import integrate, special

from ftrfading import specfun
from ftrfading.errors import ConvergenceError, DomainError, RangeError
from ftrfading.specfun import LogSigned

# Frozen reference values, computed with mpmath at 50 digits
LOGGAMMA_10_5 = 13.94062521940376363316124
P_4_3P7 = 0.505846755849581568541431  # quadrature of t^3 e^-t on [0, 3.7] / 3!
E1_OF_1 = 0.2193839343955202736771638  # quadrature of e^-t / t on [1, inf)
GAMMA_M40_0P04 = 1.984830323505450586509557e54  # split-interval quadrature
HYP_1_11P5_12_0P6 = 2.365355835492009009668842  # 50,000-term direct series
I2_7P5 = 201.6054807358058619235827  # power series to the machine tail
P_2P3_M1_1P25 = 0.5101703065397443983635339  # Laplace-type integral


def laplace_legendre(nu, mu, x):
    """P^{-mu}_nu(x) for x > 1, mu > -1/2, from the Laplace-type integral."""
    with mp.workdps(40):
        eta = mp.acosh(x)
        integral = mp.quad(lambda t: (mp.cosh(eta) - mp.cosh(t)) ** (mu - 0.5) * mp.cosh((nu + 0.5) * t), [0, eta])
        return mp.sqrt(2 / mp.pi) * mp.sinh(eta) ** (-mu) / mp.gamma(mu + 0.5) * integral


# ---------------------------------------------------------------------------
# LogSigned
# ---------------------------------------------------------------------------

@given(st.floats(min_value=-1e300, max_value=1e300, allow_nan=False).filter(lambda v: abs(v) > 1e-300))
def test_logsigned_round_trip(value):
    enc = LogSigned.from_value(value)
    again = LogSigned.from_value(enc.value())
    assert again.sign == enc.sign == (1 if value > 0 else -1)
    assert again.log_magnitude == pytest.approx(enc.log_magnitude, abs=1e-15 * max(1.0, abs(enc.log_magnitude)))


def test_logsigned_zero_and_arithmetic():
    zero = LogSigned.from_value(0.0)
    assert zero.is_zero and zero.value() == 0.0
    a, b = LogSigned.from_value(-3.0), LogSigned.from_value(4.0)
    assert (a * b).value() == pytest.approx(-12.0)
    assert (a / b).value() == pytest.approx(-0.75)
    assert (b ** 0.5).value() == pytest.approx(2.0)
    assert (-a).sign == 1
    assert (zero * a).is_zero


def test_logsigned_guards():
    with pytest.raises(ValueError):
        LogSigned(0.0, 2)
    with pytest.raises(RangeError):
        LogSigned(1000.0, 1).value()
    with pytest.raises(DomainError):
        LogSigned.from_value(math.inf)


def test_logsigned_sum_reports_cancellation():
    log_sum, sign, log_abs = specfun.logsigned_sum([math.log(5.0), math.log(3.0)], [1, -1])
    assert sign == 1 and math.exp(log_sum) == pytest.approx(2.0)
    assert math.exp(log_abs) == pytest.approx(8.0)
    assert specfun.logsigned_sum([0.0], [0])[1] == 0


# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24.0)), (10.5, LOGGAMMA_10_5)])
def test_log_gamma_examples(x, expected):
    assert specfun.log_gamma(x) == pytest.approx(expected, rel=1e-12, abs=1e-15)


@settings(max_examples=200)
@given(st.floats(min_value=1e-6, max_value=1e6))
def test_log_gamma_matches_mpmath(x):
    ref = float(mp.loggamma(x))
    assert abs(specfun.log_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_log_gamma_recurrence():
    for x in np.linspace(0.1, 50, 400):
        assert abs(specfun.log_gamma(x + 1) - specfun.log_gamma(x) - math.log(x)) <= 1e-12


@pytest.mark.parametrize("bad", [0.0, -1.0, -2.5])
def test_log_gamma_domain(bad):
    with pytest.raises(DomainError):
        specfun.log_gamma(bad)


def test_digamma_against_mpmath():
    for x in (0.3, 1.0, 2.5, 11.0, 250.0):
        assert specfun.digamma(x) == pytest.approx(float(mp.digamma(x)), rel=1e-13)


def test_lower_regularized_gamma_examples():
    x = np.linspace(0, 30, 61)
    np.testing.assert_allclose(specfun.lower_regularized_gamma(1, x), -np.expm1(-x), rtol=1e-14, atol=1e-16)
    assert specfun.lower_regularized_gamma(7, 0.0) == 0.0
    assert specfun.lower_regularized_gamma(4, 3.7) == pytest.approx(P_4_3P7, rel=1e-13)
    quad = integrate.quad(lambda t: t ** 3 * math.exp(-t), 0, 3.7)[0] / 6
    assert specfun.lower_regularized_gamma(4, 3.7) == pytest.approx(quad, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 40, 120])
def test_regularized_gamma_complement(n):
    x = np.sort(np.concatenate([np.linspace(0, 3 * n + 30, 200), [1e-8, 1e3]]))
    p = specfun.lower_regularized_gamma(n, x)
    q = specfun.upper_regularized_gamma(n, x)
    np.testing.assert_allclose(p + q, 1.0, atol=1e-12)
    np.testing.assert_allclose(q, special.gammaincc(n, x), atol=1e-13, rtol=1e-11)
    assert np.all(np.diff(p) >= 0)


def test_regularized_gamma_table_matches_rows():
    y = np.array([0.0, 0.3, 4.0, 25.0, 90.0])
    table = specfun.regularized_gamma_p_table(60, y)
    for j in (0, 1, 10, 59):
        np.testing.assert_allclose(table[j], special.gammainc(j + 1, y), atol=1e-14, rtol=1e-12)


@pytest.mark.parametrize("order, x, expected", [(0, 1.0, E1_OF_1), (-40, 0.04, GAMMA_M40_0P04)])
def test_upper_gamma_nonpos_examples(order, x, expected):
    assert specfun.upper_incomplete_gamma_nonpos(order, x) == pytest.approx(expected, rel=1e-10)


def test_upper_gamma_nonpos_recurrence_step():
    # Gamma(s-1, x) = (Gamma(s, x) - x^(s-1) e^-x) / (s-1) at s = 0
    lhs = specfun.upper_incomplete_gamma_nonpos(-1, 2.0)
    rhs = math.exp(-2.0) / 2.0 - specfun.upper_incomplete_gamma_nonpos(0, 2.0)
    assert lhs == pytest.approx(rhs, rel=1e-14)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=60), st.floats(min_value=-3, max_value=3))
def test_upper_gamma_nonpos_against_mpmath(k, log10_x):
    x = 10.0 ** log10_x
    # mpmath's own recurrence needs many guard digits at large order and x
    with mp.workdps(250):
        ref = mp.log(mp.gammainc(-k, x))
    got = specfun.log_upper_incomplete_gamma_nonpos(-k, x)
    assert abs(got - float(ref)) <= 1e-10 * max(1.0, abs(float(ref))) + 1e-10


def test_upper_gamma_nonpos_scaled_underflow_safe():
    # Gamma(-5, 800) underflows, but its log and the scaled form are finite
    h = specfun.scaled_upper_gamma_nonpos(5, 800.0)
    assert np.all(np.isfinite(h)) and np.all(h > 0)
    with mp.workdps(60):
        ref = float(mp.log(mp.gammainc(-5, 800)))
    assert specfun.log_upper_incomplete_gamma_nonpos(-5, 800.0) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("order, x", [(0, 0.0), (-2, -1.0), (1, 1.0)])
def test_upper_gamma_nonpos_domain(order, x):
    with pytest.raises(DomainError):
        specfun.upper_incomplete_gamma_nonpos(order, x)


def test_exp1_matches_scipy():
    for x in (1e-6, 0.3, 0.99, 1.0, 5.0, 40.0):
        assert specfun.exp1(x) == pytest.approx(special.exp1(x), rel=1e-13)


# ---------------------------------------------------------------------------
# Gauss hypergeometric
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("a, b, c", [(1.0, 2.0, 3.0), (0.5, 11.5, 12.0), (-2.5, 1.0, 0.7)])
def test_2f1_at_zero(a, b, c):
    assert specfun.gauss_2f1(a, b, c, 0.0) == 1.0


@pytest.mark.parametrize("a", [0.5, 1.0, 2.7, 12.0])
@pytest.mark.parametrize("b", [0.5, 3.0, 25.5])
@pytest.mark.parametrize("z", [0.2, 0.55, 0.8, 0.97])
def test_2f1_binomial_identity(a, b, z):
    assert specfun.gauss_2f1(a, b, b, z) == pytest.approx((1 - z) ** -a, rel=1e-10)


def test_2f1_brute_force_example():
    assert specfun.gauss_2f1(1.0, 11.5, 12.0, 0.6) == pytest.approx(HYP_1_11P5_12_0P6, rel=1e-12)


@settings(max_examples=150, deadline=None)
@given(
    st.floats(min_value=0.1, max_value=20),
    st.floats(min_value=0.1, max_value=60),
    st.floats(min_value=0.5, max_value=60),
    st.floats(min_value=0.0, max_value=0.98),
)
def test_2f1_matches_mpmath(a, b, c, z):
    ref = float(mp.hyp2f1(a, b, c, z))
    assert specfun.gauss_2f1(a, b, c, z) == pytest.approx(ref, rel=1e-10)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=1.1, max_value=15),
    st.floats(min_value=0.1, max_value=30),
    st.floats(min_value=0.5, max_value=40),
    st.floats(min_value=0.01, max_value=0.95),
)
def test_2f1_contiguous_relation(a, b, c, z):
    # (c-a)F(a-1) + (2a-c+(b-a)z)F(a) + a(z-1)F(a+1) = 0
    f_lo = specfun.gauss_2f1(a - 1, b, c, z)
    f_0 = specfun.gauss_2f1(a, b, c, z)
    f_hi = specfun.gauss_2f1(a + 1, b, c, z)
    terms = [(c - a) * f_lo, (2 * a - c + (b - a) * z) * f_0, a * (z - 1) * f_hi]
    assert abs(sum(terms)) <= 1e-9 * max(abs(t) for t in terms)


def test_2f1_transformation_agrees_with_series():
    for b, z in ((11.5, 0.9), (40.5, 0.8), (3.0, 0.95)):
        direct = specfun.gauss_2f1(1.0, b, b - 0.5 + 1.0, z, transform_above=1.0)
        transformed = specfun.gauss_2f1(1.0, b, b - 0.5 + 1.0, z, transform_above=0.5)
        assert transformed == pytest.approx(direct, rel=1e-10)


@pytest.mark.parametrize("z", [1.0, 1.5, -0.1])
def test_2f1_domain(z):
    with pytest.raises(DomainError):
        specfun.gauss_2f1(1.0, 2.0, 3.0, z)


def test_2f1_nonpositive_c():
    with pytest.raises(DomainError):
        specfun.gauss_2f1(1.0, 2.0, -3.0, 0.5)


def test_2f1_convergence_error_carries_partial():
    with pytest.raises(ConvergenceError) as info:
        specfun.gauss_2f1(1.0, 50.0, 2.0, 0.3, max_terms=5)
    assert info.value.partial is not None and info.value.bound > 0
    assert info.value.kernel == "gauss_2f1"


# ---------------------------------------------------------------------------
# Bessel
# ---------------------------------------------------------------------------

def test_bessel_examples():
    assert specfun.bessel_i(0, 0.0) == 1.0
    assert specfun.bessel_i(3, -2.0) == -specfun.bessel_i(3, 2.0)
    assert specfun.bessel_i(2, 7.5) == pytest.approx(I2_7P5, rel=1e-13)


@given(st.integers(min_value=-30, max_value=30), st.floats(min_value=-50, max_value=50))
@example(0, 5e-324)
@example(3, -5e-324)
def test_bessel_parity_and_negation_exact(n, x):
    assert specfun.bessel_i(n, -x) == (-1) ** n * specfun.bessel_i(n, x)
    assert specfun.bessel_i(-n, x) == specfun.bessel_i(n, x)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=60), st.floats(min_value=-50, max_value=50).filter(lambda v: abs(v) > 1e-3))
def test_bessel_matches_mpmath(n, x):
    ref = float(mp.besseli(n, x))
    if ref == 0.0:
        return
    assert specfun.bessel_i(n, x) == pytest.approx(ref, rel=1e-10)


def test_bessel_overflow():
    with pytest.raises(RangeError):
        specfun.bessel_i(0, 800.0)
    with pytest.raises(DomainError):
        specfun.bessel_i(0.5, 1.0)


# ---------------------------------------------------------------------------
# Legendre
# ---------------------------------------------------------------------------

def test_legendre_oracle_is_consistent():
    # the oracle itself against mpmath's type-3 function
    assert float(laplace_legendre(2.3, 1, 1.25)) == pytest.approx(P_2P3_M1_1P25, rel=1e-15)
    assert float(mp.legenp(2.3, -1, 1.25, type=3)) == pytest.approx(P_2P3_M1_1P25, rel=1e-15)


def test_legendre_examples():
    assert specfun.assoc_legendre_p(3.7, 0, 1.0) == 1.0
    assert specfun.assoc_legendre_p(7.2, -2, 1.0) == 0.0
    for x in (1.0, 1.3, 4.0):
        assert specfun.assoc_legendre_p(1.0, 0, x) == pytest.approx(x, rel=1e-14)
    assert specfun.assoc_legendre_p(2.3, -1, 1.25) == pytest.approx(P_2P3_M1_1P25, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=-0.9, max_value=60),
    st.integers(min_value=0, max_value=12),
    st.floats(min_value=1.001, max_value=6.0),
)
def test_legendre_negative_order_against_integral(nu, n, x):
    ref = laplace_legendre(mp.mpf(nu), n, mp.mpf(x))
    got = specfun.log_assoc_legendre_p(nu, -n, x)
    assert got.sign == 1
    assert got.log_magnitude == pytest.approx(float(mp.log(ref)), abs=1e-11 * max(1.0, abs(float(mp.log(ref)))))


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.0, max_value=40),
    st.integers(min_value=1, max_value=10),
    st.floats(min_value=1.001, max_value=10.0),
)
def test_legendre_positive_order_reflection(nu, n, x):
    # at integer degree below the order the function vanishes; the float
    # argument nu - n + 1 cannot resolve distances below one ulp of n
    assume(n <= nu or abs(nu - round(nu)) > 1e-6)
    with mp.workdps(40):
        ref = mp.legenp(nu, n, x, type=3)
    got = specfun.log_assoc_legendre_p(nu, n, x)
    if abs(ref) < mp.mpf(10) ** -250:
        return
    assert got.sign == (1 if ref > 0 else -1)
    assert got.log_magnitude == pytest.approx(float(mp.log(abs(ref))), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=1.0, max_value=40),
    st.integers(min_value=-8, max_value=8),
    st.floats(min_value=1.001, max_value=10.0),
)
def test_legendre_degree_recurrence(nu, mu, x):
    assume(mu <= 0 or abs(nu - round(nu)) > 1e-6)
    p = [specfun.assoc_legendre_p(nu + d, mu, x) for d in (-1, 0, 1)]
    lhs = (nu - mu + 1) * p[2]
    rhs = (2 * nu + 1) * x * p[1] - (nu + mu) * p[0]
    scale = max(abs(lhs), abs((2 * nu + 1) * x * p[1]), abs((nu + mu) * p[0]))
    assert abs(lhs - rhs) <= 1e-9 * scale


def test_legendre_domain():
    with pytest.raises(DomainError):
        specfun.assoc_legendre_p(2.0, 1, 1.0)
    with pytest.raises(DomainError):
        specfun.assoc_legendre_p(2.0, 0, 0.5)
    with pytest.raises(DomainError):
        specfun.assoc_legendre_p(-1.5, 0, 2.0)
    with pytest.raises(DomainError):
        specfun.assoc_legendre_p(2.0, specfun.MAX_LEGENDRE_ORDER + 1, 2.0)
