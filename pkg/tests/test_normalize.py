import pytest
from hypothesis import given, settings, strategies as st

from shrinklab.derivation import enumerate_words
from shrinklab.grammar import NT, GrammarError, Production, parse_grammar
from shrinklab.normalize import is_normal_form, to_normal_form

HEADER = "terminals: a b c\nnonterminals: S A B C\nindices: f g\nstart: S\n"


def test_pow2_violations(pow2):
    bad = {str(v.production) for v in is_normal_form(pow2)}
    assert "B[f] -> B B" in bad
    assert "S -> T[g]" not in bad


def test_single_terminal_grammar_is_normal():
    assert is_normal_form(parse_grammar(HEADER + "S -> a\n")) == []


def test_non_start_eps_is_rejected():
    g = parse_grammar(HEADER + "S -> A\nA -> a\n")
    with pytest.raises(GrammarError, match="start"):
        g.with_productions(list(g.productions) + [Production(2, "A", None, ())])


def test_start_on_rhs_is_violation():
    g = parse_grammar(HEADER + "S -> eps\nS -> A S\nA -> a\n")
    assert [v.condition for v in is_normal_form(g)] == [1]


def test_unit_chain_is_closed():
    g = parse_grammar(HEADER + "S -> A A\nA -> B\nB -> b\n")
    ng = to_normal_form(g)
    assert is_normal_form(ng) == []
    assert any(p.lhs == "A" and p.rhs == ("b",) for p in ng.productions)


def test_push_chain_and_lifting():
    g = parse_grammar(HEADER + "S -> A\nA -> a B[f g] c\nB[f] -> B\nB[g] -> b\n")
    ng = to_normal_form(g)
    assert is_normal_form(ng) == []
    assert enumerate_words(ng, 6) == enumerate_words(g, 6) == {("a", "b", "c")}
    # every push in the output adds exactly one index
    assert all(len(x.stack) <= 1 for p in ng.productions for x in p.rhs if isinstance(x, NT))


def test_pow2_normalized_language(pow2, pow2_nf):
    assert enumerate_words(pow2_nf, 8) == enumerate_words(pow2, 8) == {
        tuple("a"), tuple("aa"), tuple("aaaa"), tuple("aaaaaaaa")}


def test_fixtures_preserved(fixture_grammar):
    ng = to_normal_form(fixture_grammar)
    assert is_normal_form(ng) == []
    assert enumerate_words(ng, 10) == enumerate_words(fixture_grammar, 10)


def test_idempotent_on_normal_form(pow2_nf):
    again = to_normal_form(pow2_nf)
    assert is_normal_form(again) == []
    assert enumerate_words(again, 16) == enumerate_words(pow2_nf, 16)


def test_empty_word_kept():
    g = parse_grammar(HEADER + "S -> eps\nS -> a\n")
    ng = to_normal_form(g)
    assert is_normal_form(ng) == []
    assert enumerate_words(ng, 3) == {(), ("a",)}


# random small indexed grammars: normalization must not change the language
NTS = ["S", "A", "B"]
item = st.one_of(
    st.sampled_from(["a", "b"]),
    st.builds(lambda n, s: f"{n}[{s}]" if s else n, st.sampled_from(["A", "B"]),
              st.sampled_from(["", "f", "g", "f g"])),
)
rule = st.tuples(st.sampled_from(NTS), st.sampled_from([None, "f", "g"]),
                 st.lists(item, min_size=1, max_size=3))


@settings(max_examples=60, deadline=None)
@given(st.lists(rule, min_size=1, max_size=7))
def test_random_grammars_preserved(rules):
    lines = []
    for lhs, pop, rhs in rules:
        head = f"{lhs}[{pop}]" if pop and lhs != "S" else lhs
        lines.append(f"{head} -> {' '.join(rhs)}")
    g = parse_grammar("terminals: a b\nnonterminals: S A B\nindices: f g\nstart: S\n"
                      + "\n".join(lines) + "\n")
    ng = to_normal_form(g)
    assert is_normal_form(ng) == []
    a = enumerate_words(g, 6)
    b = enumerate_words(ng, 6)
    if a.complete and b.complete and not a.depth_pruned and not b.depth_pruned:
        assert a == b
