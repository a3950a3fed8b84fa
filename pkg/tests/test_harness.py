from fractions import Fraction

import pytest

from shrinklab.harness import (FOUND, INCONCLUSIVE, NO_DECOMPOSITION, growth_check,
                                   power_family, refute_decomposition)


def test_growth_examples():
    assert growth_check([1, 2, 4, 8, 16]) == 2
    assert growth_check([1, 2]) == 2
    assert growth_check([2, 3, 9]) == 3
    assert growth_check([2, 3]) == Fraction(3, 2)


@pytest.mark.parametrize("bad", [[5], [], [2, 2], [3, 1], [0, 1]])
def test_growth_errors(bad):
    with pytest.raises(ValueError):
        growth_check(bad)


def test_power_family():
    assert power_family(2) == {tuple("ab"), tuple("aabaab")}


def test_refute_power_family():
    w = tuple("aaab" * 3)
    res = refute_decomposition(power_family(4), w, k=4, m=1)
    assert res.verdict == NO_DECOMPOSITION
    assert res.factorizations_checked > 0


def test_closed_sample_has_decomposition():
    sample = {tuple("a" * n) for n in range(1, 5)}
    res = refute_decomposition(sample, tuple("aaaa"), k=4, m=1)
    assert res.verdict == FOUND
    assert sum(map(len, res.factors)) == 4
    for chosen, kept in res.witnesses.items():
        assert set(chosen) <= set(kept) and len(kept) < len(res.factors)
        assert tuple(a for i in kept for a in res.factors[i]) in sample


def test_k_at_most_m_is_vacuous():
    assert refute_decomposition({tuple("ab")}, tuple("ab"), k=1, m=1).verdict == NO_DECOMPOSITION


def test_cap_gives_inconclusive():
    w = tuple("aaab" * 3)
    assert refute_decomposition(power_family(3), w, k=6, m=1, cap=10).verdict == INCONCLUSIVE


def test_word_must_be_in_sample():
    with pytest.raises(ValueError):
        refute_decomposition(power_family(2), tuple("ab" * 3), k=3, m=1)
