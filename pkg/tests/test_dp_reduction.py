from fractions import Fraction

import pytest

from naraforge.tools.dp_reduction import (
    DEFAULT_BIG_M,
    CaseLabel,
    ReductionCase,
    build_case,
    full_reduction,
    reduce_case,
    step1,
    step2,
    step3,
    tau_for_base,
    w_floor,
)
from naraforge.tools.error_handler import EpsilonNeverPositive
from naraforge.tools.export import STEP_COLUMNS
from naraforge.tools.hp_arith import PrecisionReal, cf_expand, convergent_exceeding
from naraforge.tools.repdigit import search_hits


def test_tau_expansion_for_base_two():
    cf = cf_expand(tau_for_base(2, 512), 4)
    assert cf.partial_quotients == (1, 1, 4, 2)


@pytest.mark.parametrize("rho", range(2, 11))
def test_tau_convergents(rho):
    tau = tau_for_base(rho, 1024)
    cf = cf_expand(tau, 200)
    assert len(cf) == 200
    assert not cf.terminated
    assert cf.determinant_holds()
    lo, hi = tau.enclosure()
    assert 0 < hi - lo < Fraction(1, 2 ** 1000)
    for p, q in cf.convergents[1:]:
        assert abs(lo - Fraction(p, q)) < Fraction(1, q * q)
        assert abs(hi - Fraction(p, q)) < Fraction(1, q * q)


@pytest.mark.parametrize("rho, number", [(2, 115), (10, 93)])
def test_first_convergent_past_six_m(rho, number):
    cf = cf_expand(tau_for_base(rho, 1024), 200)
    found, conv = convergent_exceeding(cf, 6 * DEFAULT_BIG_M)
    assert found == number
    assert cf.convergents[number - 2].q <= 6 * DEFAULT_BIG_M < conv.q


def test_case_arguments():
    assert CaseLabel(1, 10, 7).argument() == 7
    assert CaseLabel(2, 10, 3, 2, ell=3).argument() == 2999
    # 58425 = 3332200_5: (rho - 1) N = X rho^k - d3
    x = CaseLabel(3, 5, 3, 2, 0, ell=3, m=2).argument()
    assert x == 9348
    assert 4 * 58425 == x * 5 ** 2 - 0


def test_w_floor():
    assert [w_floor(step, 2) for step in (1, 2, 3)] == [3, 3, 4]
    assert w_floor(1, 10) == 1
    assert w_floor(3, 2, base_mode="alpha") == 7


def test_case_validation():
    tau = tau_for_base(2, 256)
    one = PrecisionReal.exact(1, 256)
    with pytest.raises(ValueError):
        reduce_case(ReductionCase(tau, one, -one, PrecisionReal.exact(2, 256), 10))
    with pytest.raises(ValueError):
        reduce_case(ReductionCase(tau, one, one, one, 10))
    with pytest.raises(ValueError):
        reduce_case(ReductionCase(tau, one, one, PrecisionReal.exact(2, 256), 0))


def test_epsilon_never_positive_when_mu_is_an_integer():
    tau = tau_for_base(2, 512)
    case = ReductionCase(tau, PrecisionReal.exact(0, 512), PrecisionReal.exact(6, 512),
                         PrecisionReal.exact(2, 512), 10 ** 6)
    with pytest.raises(EpsilonNeverPositive) as info:
        reduce_case(case, max_extra_convergents=3)
    assert info.value.attempts == 4


def test_single_case_reduction_is_certified():
    case = build_case(CaseLabel(1, 2, 1), DEFAULT_BIG_M, 1024)
    outcome = reduce_case(case)
    assert outcome.certified
    assert outcome.q > 6 * DEFAULT_BIG_M
    assert outcome.epsilon.lower > 1e-12
    assert 160 < outcome.w_max < 190


def test_small_m_gives_small_bounds():
    report = step1(3, M=1, precision=512)
    assert report.certified
    assert report.bound < 40


def test_step1_base_two():
    report = step1(2)
    assert report.certified
    assert report.cases_evaluated == 1
    assert report.worst_outcome.q > 6 * DEFAULT_BIG_M
    assert report.worst_outcome.convergent_index == 115
    assert 179 <= report.bound <= 189
    assert report.min_epsilon.lower >= 0.28
    assert set(report.to_row()) == set(STEP_COLUMNS)
    assert report.to_row()["variable"] == "ell"


def test_step1_base_ten():
    report = step1(10)
    assert report.certified
    assert report.cases_evaluated == 9
    assert report.worst_outcome.convergent_index == 93
    assert 51 <= report.bound <= 61


def test_step_argument_checks():
    with pytest.raises(ValueError):
        step1(1)
    with pytest.raises(ValueError):
        step2(2, DEFAULT_BIG_M, 0)
    with pytest.raises(ValueError):
        step3(2, DEFAULT_BIG_M, 10, 10, step3_base="beta")


def test_sweep_is_independent_of_worker_count():
    serial = step2(3, DEFAULT_BIG_M, 20, workers=1)
    parallel = step2(3, DEFAULT_BIG_M, 20, workers=2)
    assert serial.to_row() == parallel.to_row()
    assert serial.worst_case == parallel.worst_case
    assert serial.min_epsilon_case == parallel.min_epsilon_case


def test_strict_digit_range_sweeps_fewer_cases():
    full = step2(3, DEFAULT_BIG_M, 10)
    strict = step2(3, DEFAULT_BIG_M, 10, strict_paper=True)
    assert strict.cases_evaluated < full.cases_evaluated
    assert strict.bound <= full.bound


@pytest.mark.slow
def test_full_reduction_base_two():
    summary = full_reduction(2)
    assert 179 <= summary.ell_max <= 189
    assert 187 <= summary.m_max <= 197
    assert 196 <= summary.n_max <= 206
    assert [s.step for s in summary.steps] == [1, 2, 3]
    assert len(summary.to_rows()) == 3
    assert all(s.certified for s in summary.steps)


@pytest.mark.slow
@pytest.mark.parametrize("rho, limit", [(5, 92), (9, 68), (10, 69)])
def test_full_reduction_published_scale(rho, limit):
    assert full_reduction(rho, workers=4).n_max <= limit


@pytest.mark.slow
def test_step2_base_ten_from_base_two_ell_bound():
    report = step2(10, DEFAULT_BIG_M, 184, workers=4)
    assert report.certified
    assert 54 <= report.bound <= 64


@pytest.mark.slow
@pytest.mark.parametrize("rho", [2, 3])
def test_search_hits_lie_within_reduced_bounds(rho):
    summary = full_reduction(rho)
    for hit in search_hits([rho], range(1, 601)):
        assert hit.n <= summary.n_max
        assert any(p.ell <= summary.ell_max and p.m <= summary.m_max for p in hit.patterns)
