from fractions import Fraction

import pytest
from mpmath import mpf

from naraforge.tools.error_handler import NotReached, PrecisionExhausted
from naraforge.tools.hp_arith import (
    BINET_A_MINIMAL_POLY,
    CHARACTERISTIC_POLY,
    PrecisionReal,
    alpha,
    binet_coefficient_a,
    cf_expand,
    convergent_exceeding,
    eval_poly,
    isolate_real_root,
    log_alpha,
    nearest_int_distance,
    real_root_alpha,
    with_precision_escalation,
)


def golden_ratio(bits):
    return (PrecisionReal.exact(5, bits).sqrt() + 1) / 2


def test_exact_integers_carry_no_radius():
    x = PrecisionReal.exact(2, 128) ** 100
    assert x.radius == 0
    assert int(x.value) == 2 ** 100


def test_enclosure_contains_true_value():
    third = PrecisionReal.from_fraction(Fraction(1, 3), 128)
    assert third.contains(Fraction(1, 3))
    assert (third * 3).contains(1)
    assert PrecisionReal.from_string("0.1", 64).contains(Fraction(1, 10))
    lo, hi = third.enclosure()
    assert lo <= Fraction(1, 3) <= hi
    assert third.lower <= third.upper


def test_mixed_operands_and_reflected_operators():
    x = PrecisionReal.exact(3, 128)
    assert (1 - x).contains(-2)
    assert (2 / x).contains(Fraction(2, 3))
    assert (x + Fraction(1, 2)).contains(Fraction(7, 2))
    assert (-x).is_negative()
    assert abs(-x).is_positive()


def test_sign_changes_keep_full_precision():
    minus_third = PrecisionReal.from_fraction(Fraction(-1, 3), 1024)
    assert abs(minus_third).contains(Fraction(1, 3))
    assert (-minus_third).contains(Fraction(1, 3))
    assert (-(-minus_third)).value == minus_third.value
    assert (1 - minus_third).contains(Fraction(4, 3))


def test_enclosure_is_exact_at_working_precision():
    third = PrecisionReal.from_fraction(Fraction(1, 3), 1024)
    assert third.contains(Fraction(1, 3))
    lo, hi = third.enclosure()
    assert 0 < hi - lo < Fraction(1, 2 ** 1000)
    assert type(lo.numerator) is int
    assert type(hi.denominator) is int


def test_integer_like_operands_are_exact():
    gmpy2 = pytest.importorskip("gmpy2")
    x = PrecisionReal.exact(3, 256) * gmpy2.mpz(10 ** 40)
    assert x.radius == 0
    assert x.contains(3 * 10 ** 40)


def test_division_by_ball_around_zero():
    straddling = PrecisionReal(mpf(0), 64, mpf(1))
    with pytest.raises(PrecisionExhausted):
        PrecisionReal.exact(1, 64) / straddling


def test_log_and_sqrt():
    assert float(PrecisionReal.exact(2, 128).log()) == pytest.approx(0.6931471805599453, rel=1e-15)
    assert float(PrecisionReal.exact(2, 128).sqrt()) == pytest.approx(1.4142135623730951, rel=1e-15)
    with pytest.raises(ValueError):
        PrecisionReal.exact(-1, 128).log()
    with pytest.raises(ValueError):
        PrecisionReal.exact(-4, 128).sqrt()


def test_floor_and_ceil_bracket_the_value():
    x = PrecisionReal.from_fraction(Fraction(7, 2), 128)
    assert x.floor_lower() == 3
    assert x.ceil_upper() == 4
    y = PrecisionReal.from_fraction(Fraction(-7, 2), 128)
    assert y.floor_lower() == -4


def test_agreement_in_leading_bits():
    x = PrecisionReal.from_fraction(Fraction(1, 3), 256)
    y = PrecisionReal.from_fraction(Fraction(1, 3), 512)
    assert x.agrees_with(y, 200)
    z = PrecisionReal.from_fraction(Fraction(1, 3) + Fraction(1, 2 ** 30), 256)
    assert not x.agrees_with(z, 40)


def test_alpha_bracket():
    bracket = real_root_alpha(256)
    assert bracket.is_certified()
    assert bracket.width < Fraction(1, 2 ** 250)
    assert float(alpha(256)) == pytest.approx(1.465571231876768, rel=1e-15)
    assert eval_poly(CHARACTERISTIC_POLY, alpha(512)).contains(0)


def test_log_alpha_and_binet_coefficient():
    assert float(log_alpha(256)) == pytest.approx(0.382245085840, rel=1e-9)
    a = binet_coefficient_a(256)
    assert float(a) == pytest.approx(0.41724, abs=1e-5)
    assert eval_poly(BINET_A_MINIMAL_POLY, a).contains(0)
    with pytest.raises(ValueError):
        binet_coefficient_a(32)


def test_isolate_square_root_of_two():
    bracket = isolate_real_root((-2, 0, 1), 1, 2, 128)
    assert bracket.is_certified()
    assert float(bracket.midpoint()) == pytest.approx(2 ** 0.5, rel=1e-15)


def test_isolate_rejects_bad_intervals():
    with pytest.raises(ValueError):
        isolate_real_root(CHARACTERISTIC_POLY, 2, 3, 128)
    with pytest.raises(ValueError):
        isolate_real_root(CHARACTERISTIC_POLY, 2, 1, 128)
    with pytest.raises(ValueError):
        isolate_real_root(CHARACTERISTIC_POLY, 1, 2, 32)


def test_precision_escalation_doubles_until_success():
    seen = []

    def needs_512(bits):
        seen.append(bits)
        if bits < 512:
            raise PrecisionExhausted("too small")
        return bits

    assert with_precision_escalation(needs_512, 128) == 512
    assert seen == [128, 256, 512]
    with pytest.raises(PrecisionExhausted):
        with_precision_escalation(needs_512, 128, max_bits=256)


def test_cf_of_rational_terminates():
    cf = cf_expand(Fraction(415, 93), 10)
    assert cf.partial_quotients == (4, 2, 6, 7)
    assert cf.convergents[-1] == (415, 93)
    assert cf.terminated
    assert str(cf) == "[4; 2, 6, 7]"


def test_cf_golden_ratio_all_ones():
    cf = cf_expand(golden_ratio(256), 50)
    assert cf.partial_quotients == (1,) * 50
    assert cf.determinant_holds()


def test_cf_square_root_of_two():
    cf = cf_expand(PrecisionReal.exact(2, 256).sqrt(), 40)
    assert cf.partial_quotients == (1,) + (2,) * 39


def test_cf_reports_certified_terms_when_precision_runs_out():
    with pytest.raises(PrecisionExhausted) as info:
        cf_expand(golden_ratio(64), 200)
    assert 20 < info.value.certified_terms < 200
    short = cf_expand(golden_ratio(64), 200, strict=False)
    assert short.exhausted
    assert len(short) == info.value.certified_terms


def test_cf_rejects_non_positive_input():
    with pytest.raises(ValueError):
        cf_expand(Fraction(-1, 2), 5)
    with pytest.raises(ValueError):
        cf_expand(Fraction(1, 2), 0)


def test_convergent_exceeding_threshold():
    cf = cf_expand(golden_ratio(256), 50)
    number, conv = convergent_exceeding(cf, 100)
    assert number == 12
    assert cf.convergents[number - 1] == conv
    assert convergent_exceeding(cf, 0)[0] == 1
    assert conv.q == 144
    with pytest.raises(NotReached):
        convergent_exceeding(cf, 10 ** 40)


def test_convergents_are_best_approximations():
    x = PrecisionReal.exact(3, 512).sqrt()
    lo, hi = x.enclosure()
    cf = cf_expand(x, 100)
    for p, q in cf.convergents[1:]:
        bound = Fraction(1, q * q)
        assert abs(lo - Fraction(p, q)) < bound
        assert abs(hi - Fraction(p, q)) < bound


def test_nearest_int_distance():
    assert nearest_int_distance(Fraction(7, 2)).contains(Fraction(1, 2))
    assert nearest_int_distance(Fraction(10, 3)).contains(Fraction(1, 3))
    assert nearest_int_distance(Fraction(11, 3)).contains(Fraction(1, 3))
    assert nearest_int_distance(5).contains(0)
