from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_embeddings, lcs_divides
from shrinklab.grammar import NT
from shrinklab.subword import (cover_violations, distinguished_cover, divides, divides_covering,
                               minimal_elements)

word = st.text(alphabet="abcd", max_size=12)


def test_examples():
    assert divides("ac", "abc") == (0, 2)
    assert divides("", "abc") == ()
    assert divides("abc", "ab") is None
    B = NT("B")
    assert divides((B, B), (B, "a", B)) == (0, 2)


def test_covering_examples():
    assert divides_covering("ab", "aab", {1}) == (1, 2)
    assert divides_covering("ab", "aab", {0, 1}) is None
    assert divides_covering("aba", "aba", {0, 1, 2}) == (0, 1, 2)


@settings(max_examples=300, deadline=None)
@given(word, word)
def test_divides_matches_lcs(v, w):
    emb = divides(v, w)
    assert (emb is not None) == lcs_divides(v, w)
    if emb is not None:
        assert list(emb) == sorted(set(emb))
        assert all(w[j] == x for j, x in zip(emb, v))


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="ab", max_size=5), st.text(alphabet="ab", max_size=8), st.data())
def test_covering_matches_brute_force(v, w, data):
    required = data.draw(st.sets(st.integers(0, max(len(w) - 1, 0)), max_size=3)) if w else set()
    hits = [e for e in all_embeddings(v, w) if required <= set(e)]
    got = divides_covering(v, w, required)
    if not hits:
        assert got is None
    else:
        assert got == min(hits)


@settings(max_examples=100, deadline=None)
@given(word, word, word)
def test_partial_order(u, v, w):
    assert divides(u, u) is not None
    if divides(u, v) is not None and divides(v, u) is not None:
        assert u == v
    if divides(u, v) is not None and divides(v, w) is not None:
        assert divides(u, w) is not None


def test_minimal_examples():
    assert minimal_elements({"ab", "aab", "b"}) == {"b"}
    assert minimal_elements({"a", "b"}) == {"a", "b"}
    assert minimal_elements(set()) == set()


@settings(max_examples=150, deadline=None)
@given(st.sets(st.text(alphabet="abc", max_size=6), max_size=20))
def test_minimal_is_dominating_antichain(ys):
    out = minimal_elements(ys)
    brute = {y for y in ys if not any(x != y and lcs_divides(x, y) for x in ys)}
    assert out == brute
    for x, y in combinations(out, 2):
        assert not lcs_divides(x, y) and not lcs_divides(y, x)
    for y in ys:
        assert any(lcs_divides(x, y) for x in out)


def brute_cover_ok(cover, ys, m):
    for y in ys:
        if y in cover:
            continue
        for chosen in combinations(range(len(y)), m):
            if not any(set(chosen) <= set(e) for x in cover for e in all_embeddings(x, y)):
                return False
    return True


def test_cover_examples():
    ys = {"ab", "aab", "b"}
    x = distinguished_cover(ys, 1)
    assert "b" in x
    assert brute_cover_ok(x, ys, 1)
    assert distinguished_cover({"a"}, 1) == {"a"}
    assert distinguished_cover({"a", "b", "ab"}, 3) == {"a", "b", "ab"}
    with pytest.raises(ValueError):
        distinguished_cover(ys, 0)


@settings(max_examples=80, deadline=None)
@given(st.sets(st.text(alphabet="abc", max_size=6), max_size=15), st.integers(1, 3))
def test_cover_property(ys, m):
    cover = distinguished_cover(ys, m)
    assert cover <= ys
    assert brute_cover_ok(cover, ys, m)
    assert cover_violations(cover, ys, m) == []


def test_cover_needs_more_than_minimal_elements():
    # with one distinguished letter, b alone cannot cover an a of aab
    ys = {"b", "ab", "aab"}
    assert minimal_elements(ys) == {"b"}
    assert not brute_cover_ok({"b"}, ys, 1)
    assert cover_violations({"b"}, ys, 1)
