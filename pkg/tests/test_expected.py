from naraforge.tools.expected import (
    EXPECTED_VALUES,
    diff_against_expected,
    diff_representations,
    representations_by_value,
    self_check,
)
from naraforge.tools.repdigit import search_hits


def test_embedded_list_is_sound():
    assert self_check() == []
    assert len(EXPECTED_VALUES) == 21
    assert representations_by_value()[58425] == {(5, "3332200"), (7, "332223")}


def test_search_up_to_n_600_matches_published_list():
    diff = diff_against_expected(search_hits(range(2, 11), range(1, 601)))
    assert diff.matches, diff


def test_diff_reports_missing_and_extra():
    diff = diff_representations([(58425, 5, "3332200"), (7, 2, "111")])
    assert not diff.matches
    assert 4 in diff.missing_values
    assert diff.extra_values == (7,)
    assert (58425, 7, "332223") in diff.missing_representations
