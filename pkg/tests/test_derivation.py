import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_words
from shrinklab.derivation import (DerivationTree, SearchBounds, TreeError, Verdict,
                                  enumerate_words, is_member, tree_from_leftmost, validate_tree)
from shrinklab.fixtures import NAMES, load_fixture
from shrinklab.grammar import NT, apply_production, append_stack, parse_grammar


def words(*texts):
    return {tuple(t) for t in texts}


def test_pow2_up_to_8(pow2):
    assert enumerate_words(pow2, 8) == words("a", "aa", "aaaa", "aaaaaaaa")


def test_anbncn_up_to_9(anbncn):
    assert enumerate_words(anbncn, 9) == words("abc", "aabbcc", "aaabbbccc")


def test_zero_length(pow2):
    assert enumerate_words(pow2, 0) == set()
    g = parse_grammar("terminals: a\nnonterminals: S\nstart: S\nS -> eps\nS -> a\n")
    assert enumerate_words(g, 0) == {()}


@pytest.mark.parametrize("name,max_len", [("pow2", 8), ("anbncn", 6), ("anbn", 8), ("mixed", 7)])
def test_agrees_with_any_position_search(name, max_len):
    g = load_fixture(name)
    assert enumerate_words(g, max_len) == naive_words(g, max_len, max_depth=max_len + 4)


def test_membership_yes_with_tree(pow2):
    res = is_member(pow2, tuple("aaaa"))
    assert res.verdict is Verdict.YES
    assert validate_tree(pow2, res.tree) == tuple("aaaa")


def test_membership_no(pow2):
    assert is_member(pow2, tuple("aaa")).verdict is Verdict.NO


def test_membership_unknown_on_budget(pow2):
    res = is_member(pow2, tuple("a" * 16), SearchBounds(16, 20, max_steps=3))
    assert res.verdict is Verdict.UNKNOWN


def test_empty_word(pow2):
    assert is_member(pow2, ()).verdict is Verdict.NO
    g = parse_grammar("terminals: a\nnonterminals: S\nstart: S\nS -> eps\nS -> a\n")
    res = is_member(g, ())
    assert res.verdict is Verdict.YES
    assert validate_tree(g, res.tree) == ()


@pytest.mark.parametrize("name", NAMES)
def test_membership_matches_enumeration(name):
    g = load_fixture(name)
    lang = enumerate_words(g, 7)
    alphabet = sorted(g.terminals)
    for n in range(1, 6):
        for w in itertools.product(alphabet, repeat=n):
            assert bool(is_member(g, w)) == (w in lang), w


def test_tree_json_roundtrip(pow2):
    t = is_member(pow2, tuple("aa")).tree
    data = json.loads(json.dumps(t.to_json()))
    assert DerivationTree.from_json(data) == t
    assert validate_tree(pow2, DerivationTree.from_json(data)) == tuple("aa")
    assert data["label"] == {"nt": "S", "stack": []}


def test_dot_has_every_vertex(pow2):
    t = is_member(pow2, tuple("aa")).tree
    dot = t.to_dot()
    assert dot.count("->") == sum(1 for _ in t.walk()) - 1


def test_corrupted_tree_names_vertex(pow2):
    t = is_member(pow2, tuple("aa")).tree
    t.children[0].prod = 4  # B[g] -> a at a T vertex
    with pytest.raises(TreeError) as info:
        validate_tree(pow2, t)
    assert info.value.path == (0,)


def test_single_vertex_empty_tree():
    g = parse_grammar("terminals: a\nnonterminals: S\nstart: S\nS -> eps\nS -> a\n")
    assert validate_tree(g, DerivationTree(NT("S"), 0, [])) == ()


def test_erasing_nonstart_symbol_rejected():
    g = parse_grammar("terminals: a\nnonterminals: S\nstart: S\nS -> eps\nS -> a S\n")
    with pytest.raises(ValueError):
        enumerate_words(g, 3)


# random leftmost walks on normal-form grammars
@st.composite
def walks(draw, grammar, steps=25):
    form = (NT(grammar.start),)
    history = [form]
    for _ in range(steps):
        spots = [i for i, x in enumerate(form) if isinstance(x, NT)]
        if not spots:
            break
        i = draw(st.sampled_from(spots))
        head = form[i]
        options = [p for p in grammar.productions_for(head.name)
                   if p.pop is None or (head.stack and head.stack[0] == p.pop)]
        if not options:
            break
        p = draw(st.sampled_from(options))
        form = apply_production(form, i, p)
        history.append((i, p, form))
    return history


@pytest.mark.parametrize("name", NAMES)
def test_item_count_monotone_in_normal_form(name):
    from shrinklab.normalize import to_normal_form
    g = to_normal_form(load_fixture(name))

    @settings(max_examples=40, deadline=None)
    @given(walks(g))
    def check(history):
        lengths = [len(history[0])] + [len(f) for _, _, f in history[1:]]
        assert lengths == sorted(lengths)

    check()


@pytest.mark.parametrize("name", NAMES)
def test_suffix_law(name):
    g = load_fixture(name)

    @settings(max_examples=40, deadline=None)
    @given(walks(g), st.lists(st.sampled_from(g.indices or ("x",)), max_size=3))
    def check(history, omega):
        omega = tuple(o for o in omega if o in g.indices)
        form = append_stack(history[0], omega)
        for i, p, after in history[1:]:
            form = apply_production(form, i, p)
            assert form == append_stack(after, omega)

    check()


def test_tree_from_leftmost(pow2):
    res = is_member(pow2, tuple("aa"))
    ids = [v.prod for _, v in res.tree.walk() if v.prod is not None]
    assert tree_from_leftmost(pow2, ids) == res.tree
