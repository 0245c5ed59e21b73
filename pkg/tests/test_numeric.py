import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import exp, ldexp, mpf, sin, workprec

from hpcert import (
    BasisConstant,
    BasisError,
    ClosedForm,
    DomainError,
    HPReal,
    Precision,
    cf_add,
    cf_mul_ln2,
    cf_scale,
    const_catalan,
    const_ln2,
    const_pi,
    eval_closed_form,
    ulp,
)
from hpcert.accel import euler_sum
from oracle_values import CATALAN, LN2, PI, SIGMA, I3, assert_close, oracle

ONE = BasisConstant.ONE
LN2_T = BasisConstant.LN2
LN2_SQ = BasisConstant.LN2_SQ
PI_T = BasisConstant.PI
PI_LN2 = BasisConstant.PI_LN2
PI_SQ = BasisConstant.PI_SQ
CATALAN_T = BasisConstant.CATALAN


def test_precision_validation():
    assert Precision(64).bits == 64
    with pytest.raises(ValueError):
        Precision(63)
    with pytest.raises(ValueError):
        Precision(-10)


def test_hpreal_rejects_nonfinite(p64):
    with pytest.raises(DomainError):
        HPReal.from_raw(mpf("inf"), p64)
    with pytest.raises(DomainError):
        HPReal.from_raw(mpf("nan"), p64)


def test_rounding_monotone_in_error(p64, p128, p256):
    x = const_pi(p256).value
    e128 = abs(HPReal.from_raw(x, p128).value - x)
    e64 = abs(HPReal.from_raw(x, p64).value - x)
    assert e64 >= e128


# --- constants -------------------------------------------------------------


@pytest.mark.parametrize("bits", [64, 128, 256])
def test_const_pi_within_4ulp(bits):
    p = Precision(bits)
    v = const_pi(p).value
    assert abs(v - oracle(PI)) <= 4 * ulp(v, bits)


def test_const_pi_two_independent_formulas(p128):
    # Euler's arctangent split and mpmath's own constant as the two oracles
    v = const_pi(p128).value
    with workprec(256):
        euler_pi = 4 * (mpmath.atan(mpf(1) / 2) + mpmath.atan(mpf(1) / 3))
        assert abs(v - euler_pi) <= 8 * ulp(v, 128)
        assert abs(v - mpmath.pi) <= 8 * ulp(v, 128)


def test_const_pi_sine_is_tiny(p256):
    v = const_pi(p256).value
    with workprec(300):
        assert abs(sin(v)) < ldexp(1, -250)


@pytest.mark.parametrize("bits", [64, 128, 256])
def test_const_ln2_within_4ulp(bits):
    p = Precision(bits)
    v = const_ln2(p).value
    assert abs(v - oracle(LN2)) <= 4 * ulp(v, bits)


def test_const_ln2_euler_transform_oracle(p64):
    # the defining alternating harmonic series, Euler-accelerated in-test
    with workprec(200):
        accelerated = euler_sum(lambda k: mpf(1) / (k + 1), 90)
    v = const_ln2(p64).value
    assert abs(v - accelerated) <= 8 * ulp(v, 64)


def test_const_ln2_exponentiates_to_two(p128):
    v = const_ln2(p128).value
    with workprec(160):
        assert abs(exp(v) - 2) <= ldexp(1, -(128 - 6))


def test_const_ln2_precision_doubling():
    v128 = const_ln2(Precision(128)).value
    v256 = const_ln2(Precision(256)).value
    assert abs(v128 - v256) <= ldexp(1, -124)


@pytest.mark.parametrize("bits", [64, 128, 256])
def test_const_catalan_within_4ulp(bits):
    p = Precision(bits)
    v = const_catalan(p).value
    assert abs(v - oracle(CATALAN)) <= 4 * ulp(v, bits)


def test_const_catalan_series_first_term(p64):
    # k=0 term of the odd-square alternating series is exactly 1
    from hpcert import Direct, sum_alternating

    r = sum_alternating(lambda k: mpf(1) / (2 * k + 1) ** 2, Direct(1), p64)
    assert r.value.value == 1


def test_const_catalan_direct_summation_bracket():
    # 10^6 terms of sum (-1)^k/(2k+1)^2 plus the alternating remainder bound
    m = 10**6
    with workprec(80):
        s = mpf(0)
        for k in range(0, m, 2):  # fold consecutive +/- pairs
            a = 2 * k + 1
            s += mpf(4 * (a + 1)) / (a * a * (a + 2) * (a + 2))
        bound = mpf(1) / (2 * m + 1) ** 2
    v = const_catalan(Precision(64)).value
    assert abs(v - s) <= bound + ldexp(1, -60)


@pytest.mark.parametrize("tag", list(BasisConstant))
def test_constant_precision_doubling(tag):
    from hpcert.numeric import constant_value

    p = 96
    lo = constant_value(tag, p)
    hi = constant_value(tag, 2 * p)
    assert abs(lo - hi) <= ldexp(1, -(p - 4))


def test_basis_tags_distinct():
    assert len({t.value for t in BasisConstant}) == 7


def test_ulp_scaling():
    assert ulp(mpf(1), 64) == ldexp(1, -63)
    assert ulp(mpf(0), 64) == ldexp(1, -64)
    assert ulp(mpf(8), 64) == 8 * ulp(mpf(1), 64)


# --- closed forms ----------------------------------------------------------


def test_closed_form_normalization():
    cf = ClosedForm({LN2_T: Fraction(2, 4), PI_T: 0})
    assert cf.coefficient(LN2_T) == Fraction(1, 2)
    assert cf.coefficient(PI_T) == 0
    assert PI_T not in cf.coefficients


def test_closed_form_rejects_non_basis_keys():
    with pytest.raises(BasisError):
        ClosedForm({"pi": 1})


def test_eval_closed_form_identity(p128):
    assert eval_closed_form(ClosedForm({ONE: 1}), p128).value == 1
    assert eval_closed_form(ClosedForm.zero(), p128).value == 0


def test_eval_closed_form_sigma(p256):
    cf = ClosedForm(
        {CATALAN_T: Fraction(1, 2), PI_SQ: Fraction(1, 48),
         LN2_SQ: Fraction(-7, 8), PI_LN2: Fraction(-1, 8)}
    )
    v = eval_closed_form(cf, p256).value
    assert_close(v, SIGMA, ldexp(1, -250))


def test_eval_closed_form_i3(p256):
    v = eval_closed_form(ClosedForm({PI_LN2: Fraction(1, 8)}), p256).value
    assert_close(v, I3, ldexp(1, -250))


def test_cf_add_zero_and_scale_zero():
    x = ClosedForm({LN2_T: Fraction(3, 4), PI_T: Fraction(-1, 8)})
    assert cf_add(x, ClosedForm.zero()) == x
    assert cf_scale(x, 0) == ClosedForm.zero()
    assert cf_scale(x, 1) == x


def test_cf_algebra_properties_random():
    rng = random.Random(20240917)
    tags = list(BasisConstant)

    def rand_cf():
        return ClosedForm(
            {t: Fraction(rng.randint(-9, 9), rng.randint(1, 12)) for t in rng.sample(tags, 3)}
        )

    for _ in range(25):
        a, b, c = rand_cf(), rand_cf(), rand_cf()
        r = Fraction(rng.randint(-7, 7), rng.randint(1, 9))
        assert cf_add(a, b) == cf_add(b, a)
        assert cf_add(cf_add(a, b), c) == cf_add(a, cf_add(b, c))
        assert cf_scale(cf_add(a, b), r) == cf_add(cf_scale(a, r), cf_scale(b, r))


def test_eval_closed_form_additive(p64):
    rng = random.Random(7)
    tags = list(BasisConstant)
    for _ in range(15):
        a = ClosedForm({t: Fraction(rng.randint(-5, 5), rng.randint(1, 7)) for t in tags[:4]})
        b = ClosedForm({t: Fraction(rng.randint(-5, 5), rng.randint(1, 7)) for t in tags[3:]})
        with workprec(128):  # compose sides without re-rounding them at 53 bits
            lhs = eval_closed_form(cf_add(a, b), p64).value
            ea = eval_closed_form(a, p64).value
            eb = eval_closed_form(b, p64).value
            rhs = ea + eb
            scale = max(abs(lhs), abs(ea), abs(eb), mpf(1))
            assert abs(lhs - rhs) <= 8 * ulp(scale, 64)


def test_ln2_slot_composition():
    a = ClosedForm({ONE: Fraction(2), LN2_T: Fraction(3, 4), PI_T: Fraction(-1, 8)})
    out = cf_mul_ln2(a)
    assert out == ClosedForm(
        {LN2_T: Fraction(2), LN2_SQ: Fraction(3, 4), PI_LN2: Fraction(-1, 8)}
    )


@pytest.mark.parametrize("tag", [LN2_SQ, PI_LN2, PI_SQ, CATALAN_T])
def test_ln2_slot_composition_leaves_basis(tag):
    with pytest.raises(BasisError):
        cf_mul_ln2(ClosedForm({tag: 1}))


def test_assembly_identity_exact_rational():
    # A*ln2 + B/2 + C must equal the negated series closed form, slot by slot
    a_cf = ClosedForm({LN2_T: Fraction(3, 4), PI_T: Fraction(-1, 8)})
    b_cf = ClosedForm(
        {LN2_SQ: Fraction(1, 4), PI_SQ: Fraction(-1, 96),
         PI_LN2: Fraction(1, 4), CATALAN_T: Fraction(-1, 2)}
    )
    c_cf = ClosedForm(
        {PI_LN2: Fraction(1, 8), PI_SQ: Fraction(-1, 64), CATALAN_T: Fraction(-1, 4)}
    )
    sigma_cf = ClosedForm(
        {CATALAN_T: Fraction(1, 2), PI_SQ: Fraction(1, 48),
         LN2_SQ: Fraction(-7, 8), PI_LN2: Fraction(-1, 8)}
    )
    lhs = cf_add(cf_add(cf_mul_ln2(a_cf), cf_scale(b_cf, Fraction(1, 2))), c_cf)
    assert lhs == cf_scale(sigma_cf, -1)
