import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as some
from hypothesis.strategies import composite
from pytest_cases import parametrize_with_cases

from genext.analysis import MatchMode, brute_force_match, isospectral_compare, match_levels


@composite
def random_levels(draw, size: int) -> np.ndarray:
    values = draw(
        some.lists(
            some.floats(min_value=-50, max_value=50, allow_nan=False, allow_infinity=False),
            min_size=size,
            max_size=size,
        )
    )
    return np.sort(np.asarray(values, dtype=float))


@composite
def level_pairs(draw) -> tuple[np.ndarray, np.ndarray]:
    size = draw(some.integers(min_value=1, max_value=6))
    return draw(random_levels(size)), draw(random_levels(size))


@given(level_pairs())
def test_greedy_matching_is_optimal(levels):
    levels_a, levels_b = levels
    match = match_levels(levels_a, levels_b, tol=np.inf, allow_shift=False)
    total = sum(gap for _, _, gap in match.pairs)
    assert len(match.pairs) == levels_a.size
    assert total == pytest.approx(brute_force_match(levels_a, levels_b), rel=1e-9, abs=1e-9)


class LevelMatchCases:
    """Generate level lists to match.

    Each case returns:
    - the first levels
    - the second levels
    - the expected pairs as (index in a, index in b)
    - the expected shift
    """

    def case_shifted_copy(self):
        return np.array([1.0, 3.0, 5.0]), np.array([3.0, 5.0, 7.0]), [(0, 0), (1, 1), (2, 2)], 2.0

    def case_missing_level_in_b(self):
        return np.array([0.0, 1.0, 2.0, 3.0]), np.array([0.0, 2.0, 3.0]), [(0, 0), (2, 1), (3, 2)], 0.0

    def case_extra_level_in_b(self):
        return np.array([0.0, 2.0]), np.array([0.0, 1.0, 2.0]), [(0, 0), (1, 2)], 0.0


@parametrize_with_cases("levels_a, levels_b, expected_pairs, expected_shift", cases=LevelMatchCases)
def test_match_levels(levels_a, levels_b, expected_pairs, expected_shift):
    allow_shift = expected_shift != 0.0
    match = match_levels(levels_a, levels_b, tol=1e-6, allow_shift=allow_shift)
    assert [(a, b) for a, b, _ in match.pairs] == expected_pairs
    assert match.shift == pytest.approx(expected_shift)
    assert match.max_gap <= 1e-6


def test_unmatched_levels_are_reported():
    match = match_levels(np.array([0.0, 1.0, 2.0, 3.0]), np.array([0.0, 2.0, 3.0]), tol=1e-6, allow_shift=False)
    assert match.unmatched_a == [1]
    assert match.unmatched_b == []


def test_partners_drop_the_lowest_level():
    plus = np.array([0.0, 2.0, 4.0, 6.0])
    minus = np.array([2.0, 4.0, 6.0])
    match = isospectral_compare(plus, minus, mode=MatchMode.DROP_LOWEST_A, tol=1e-9, allow_shift=False)
    assert [(a, b) for a, b, _ in match.pairs] == [(1, 0), (2, 1), (3, 2)]
    assert match.unmatched_a == []
    assert match.mode is MatchMode.DROP_LOWEST_A
    assert match.to_record()["mode"] == "drop_lowest_a"


def test_far_levels_are_not_an_error():
    match = isospectral_compare(np.array([0.0, 1.0]), np.array([10.0, 20.0]), tol=1e-3, allow_shift=False)
    assert match.pairs == []
    assert match.max_gap == 0.0
    assert match.unmatched_a == [0, 1]
    assert match.unmatched_b == [0, 1]


def test_brute_force_needs_equal_sizes():
    with pytest.raises(ValueError):
        brute_force_match(np.array([0.0]), np.array([0.0, 1.0]))
