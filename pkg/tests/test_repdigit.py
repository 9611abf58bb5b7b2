import random

import pytest

from naraforge.tools.error_handler import BaseTooSmall
from naraforge.tools.repdigit import (
    ConcatPattern,
    DigitString,
    digit_count,
    group_hits_by_value,
    maximal_runs,
    reconstruct,
    search_hits,
    three_block_patterns,
    to_digits,
)


def test_to_digits():
    assert str(to_digits(58425, 5)) == "3332200_5"
    assert str(to_digits(58425, 7)) == "332223_7"
    assert str(to_digits(2745, 7)) == "11001_7"
    assert to_digits(0, 2).digits == (0,)
    assert to_digits(255, 16).digits == (15, 15)
    assert digit_count(18560, 8) == 5


def test_digit_string_validation():
    with pytest.raises(BaseTooSmall):
        to_digits(5, 1)
    with pytest.raises(ValueError):
        to_digits(-1, 10)
    with pytest.raises(ValueError):
        DigitString(10, (0, 1))
    with pytest.raises(ValueError):
        DigitString(3, (1, 3))
    with pytest.raises(ValueError):
        to_digits(10, 65)
    assert DigitString(10, (4, 2)).value == 42


def test_maximal_runs():
    assert maximal_runs(to_digits(58425, 5)) == [(3, 3), (2, 2), (0, 2)]
    assert maximal_runs(to_digits(7, 2)) == [(1, 3)]


def test_three_runs_give_one_pattern():
    patterns = three_block_patterns(to_digits(58425, 5))
    assert patterns == [ConcatPattern(5, 3, 2, 0, 3, 2, 2)]
    assert patterns[0].describe() == "(3^3)(2^2)(0^2)"
    assert patterns[0].satisfies_ordering()


def test_two_runs_are_split_in_every_position():
    # 28 = 11100_2
    patterns = three_block_patterns(to_digits(28, 2))
    assert [(p.ell, p.m, p.k) for p in patterns] == [(1, 2, 2), (2, 1, 2), (3, 1, 1)]
    ordered = three_block_patterns(to_digits(28, 2), enforce_ordering=True)
    assert ordered == [ConcatPattern(2, 1, 0, 0, 3, 1, 1)]
    assert three_block_patterns(to_digits(4, 2)) == [ConcatPattern(2, 1, 0, 0, 1, 1, 1)]


def test_single_run_and_too_many_runs():
    assert len(three_block_patterns(to_digits(13, 3))) == 1
    assert len(three_block_patterns(to_digits(40, 3))) == 3  # 1111_3
    assert three_block_patterns(to_digits(10, 2)) == []  # 1010_2
    assert three_block_patterns(to_digits(3, 2)) == []  # too short


def test_pattern_validation():
    with pytest.raises(ValueError):
        reconstruct(ConcatPattern(10, 0, 1, 1, 1, 1, 1))
    with pytest.raises(ValueError):
        reconstruct(ConcatPattern(10, 1, 1, 1, 0, 1, 1))
    with pytest.raises(ValueError):
        reconstruct(ConcatPattern(10, 1, 10, 1, 1, 1, 1))


def test_reconstruct_matches_digit_string_on_random_patterns():
    rng = random.Random(20240611)
    for _ in range(10_000):
        base = rng.randint(2, 10)
        p = ConcatPattern(base, rng.randint(1, base - 1), rng.randint(0, base - 1),
                          rng.randint(0, base - 1), rng.randint(1, 8), rng.randint(1, 8),
                          rng.randint(1, 8))
        value = reconstruct(p)
        assert value == p.block_string().value
        assert to_digits(value, base) == p.block_string()
        assert p in three_block_patterns(to_digits(value, base))


def _oracle_values(base, max_len):
    values = set()
    for length in range(3, max_len + 1):
        for ell in range(1, length - 1):
            for m in range(1, length - ell):
                k = length - ell - m
                for d1 in range(1, base):
                    for d2 in range(base):
                        for d3 in range(base):
                            values.add(reconstruct(ConcatPattern(base, d1, d2, d3, ell, m, k)))
    return values


@pytest.mark.slow
@pytest.mark.parametrize("base", [2, 3])
def test_detection_matches_oracle_exhaustively(base):
    oracle = _oracle_values(base, 12)
    detected = {v for v in range(base ** 12) if three_block_patterns(to_digits(v, base))}
    assert detected == oracle


@pytest.mark.slow
def test_detection_matches_oracle_base_five():
    oracle = _oracle_values(5, 12)
    assert all(three_block_patterns(to_digits(v, 5)) for v in oracle)
    rng = random.Random(5)
    for v in (rng.randrange(5 ** 12) for _ in range(200_000)):
        assert bool(three_block_patterns(to_digits(v, 5))) == (v in oracle)


@pytest.mark.slow
@pytest.mark.exhaustive
def test_detection_matches_oracle_base_five_exhaustively():
    oracle = _oracle_values(5, 12)
    detected = {v for v in range(5 ** 12) if three_block_patterns(to_digits(v, 5))}
    assert detected == oracle


def test_search_base_seven():
    hits = search_hits([7], range(1, 41))
    found = {(h.n, h.value, str(h.digit_string)) for h in hits}
    assert (23, 2745, "11001_7") in found
    assert (31, 58425, "332223_7") in found


def test_search_small_range_is_empty():
    assert search_hits([2], range(1, 6)) == []


def test_search_rejects_bad_input():
    with pytest.raises(ValueError):
        search_hits([10], range(0, 5))
    with pytest.raises(BaseTooSmall):
        search_hits([1], range(1, 5))


def test_search_is_independent_of_worker_count():
    serial = search_hits(range(2, 11), range(1, 120), workers=1)
    parallel = search_hits(range(2, 11), range(1, 120), workers=2)
    assert serial == parallel
    assert [(h.n, h.base) for h in serial] == sorted((h.n, h.base) for h in serial)


def test_no_three_block_values_between_n25_and_n32_except_published():
    hits = search_hits(range(2, 11), range(25, 33))
    assert {h.value for h in hits} == {18560, 58425}


def test_group_hits_by_value():
    grouped = group_hits_by_value(search_hits(range(2, 11), range(31, 32)))
    assert list(grouped) == [58425]
    assert [h.base for h in grouped[58425]] == [5, 7]
