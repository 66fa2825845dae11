import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from diffrig import rigcore
from diffrig.langrig import (
    EMPTY, EPS, Alt, Cat, CapExceeded, Lit, RegexSyntaxError, Star,
    alt, all_words, brzozowski_derivation, build_dfa, cat, check_linearity,
    check_module_action, check_twisted_leibniz, check_untwisted_leibniz,
    deriv, deriv_word, enumerate_lang, language_rig, matches, nullable,
    parse_regex, random_regex, star, to_text,
)

a, b = Lit("a"), Lit("b")
P = parse_regex


def W(*ws):
    return frozenset(tuple(w) for w in ws)


def to_python_re(r):
    """Translate to Python's re syntax; used only as a second, unrelated oracle."""
    if r == EMPTY:
        return "(?!)"
    if r == EPS:
        return "(?:)"
    if isinstance(r, Lit):
        return re.escape(r.sym)
    if isinstance(r, Star):
        return f"(?:{to_python_re(r.inner)})*"
    if isinstance(r, Cat):
        return f"(?:{to_python_re(r.left)}{to_python_re(r.right)})"
    return f"(?:{to_python_re(r.left)}|{to_python_re(r.right)})"


regexes = st.builds(lambda seed, d: random_regex(random.Random(seed), d), st.integers(0, 10**6), st.integers(1, 6))
words4 = st.lists(st.sampled_from("ab"), max_size=4).map(tuple)


# ---- parsing and canonical form


def test_parse_examples():
    assert P("(ab)*|b") == alt(star(cat(a, b)), b)
    assert isinstance(P("(ab)*|b"), Alt)
    assert P("0") == EMPTY
    assert P("1") == EPS
    assert P("a**") == Star(a)


def test_canonical_rules():
    assert alt(a, EMPTY) == a
    assert alt(b, a) == alt(a, b) == alt(a, alt(b, a))
    assert cat(EPS, a) == a and cat(a, EMPTY) == EMPTY
    assert cat(cat(a, b), a) == cat(a, cat(b, a))
    assert star(EPS) == EPS and star(EMPTY) == EPS and star(star(a)) == star(a)


@pytest.mark.parametrize("text,pos", [("(ab", 3), ("a|", 2), ("*a", 0), ("ac", 1), (")", 0)])
def test_parse_errors(text, pos):
    with pytest.raises(RegexSyntaxError) as ei:
        P(text)
    assert ei.value.pos == pos


@given(regexes)
def test_parse_print_roundtrip(r):
    assert P(to_text(r)) == r


# ---- oracle sanity


def test_enumerate_examples():
    assert enumerate_lang(Star(a), 3) == W("", "a", "aa", "aaa")
    assert enumerate_lang(cat(a, alt(b, EPS)), 2) == W("a", "ab")
    assert enumerate_lang(star(alt(a, b)), 2) == W("", "a", "b", "aa", "ab", "ba", "bb")


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        enumerate_lang(a, 11)


@settings(max_examples=100)
@given(regexes)
def test_enumerate_agrees_with_python_re(r):
    pat = re.compile(to_python_re(r))
    got = enumerate_lang(r, 6)
    want = frozenset(w for w in all_words(6) if pat.fullmatch("".join(w)))
    assert got == want


# ---- derivatives


def test_nullable_examples():
    assert nullable(Star(a))
    assert not nullable(cat(a, b))
    assert nullable(alt(EMPTY, EPS))


def test_deriv_examples():
    assert deriv(a, "a") == EPS
    r = alt(cat(a, b), b)
    assert deriv(r, "a") == b
    assert enumerate_lang(deriv(r, "a"), 3) == W("b")
    s = star(cat(a, b))
    assert deriv(s, "a") == cat(b, s)
    window = enumerate_lang(s, 6)
    assert enumerate_lang(deriv(s, "a"), 5) == frozenset(w[1:] for w in window if w[:1] == ("a",))


def test_deriv_word_examples():
    s = star(cat(a, b))
    assert deriv_word(s, ()) == s
    assert deriv_word(s, "ab") == s
    assert enumerate_lang(deriv_word(s, "ab"), 4) == frozenset(
        w[2:] for w in enumerate_lang(s, 6) if w[:2] == ("a", "b")
    )
    assert deriv_word(a, "ab") == EMPTY


def test_matches_examples():
    s = star(cat(a, b))
    assert matches(s, "abab") and tuple("abab") in enumerate_lang(s, 4)
    assert not matches(s, "aba") and tuple("aba") not in enumerate_lang(s, 4)
    assert matches(EPS, ())


@settings(max_examples=100)
@given(regexes)
def test_deriv_denotes_left_quotient(r):
    win = enumerate_lang(r, 7)
    for c in "ab":
        assert enumerate_lang(deriv(r, c), 6) == frozenset(w[1:] for w in win if w[:1] == (c,))


@given(regexes, words4, words4)
def test_deriv_word_composes(r, u, v):
    assert deriv_word(r, u + v) == deriv_word(deriv_word(r, u), v)


# ---- law checks


def test_twisted_leibniz_examples():
    rep = check_twisted_leibniz(Star(a), b, "b", 8)
    assert rep.passed
    assert enumerate_lang(deriv(cat(Star(a), b), "b"), 8) == W("")
    assert check_twisted_leibniz(a, b, "a", 8).passed


def test_untwisted_needs_nullable_left():
    # with r not nullable, dropping the twist wrongly adds d_a(s)
    rep = check_untwisted_leibniz(a, a, "a", 4)
    assert not rep.passed
    assert rep.counterexample is not None


@settings(max_examples=100)
@given(regexes, regexes, st.sampled_from("ab"))
def test_twisted_leibniz_and_linearity_hold(r, s, c):
    assert check_twisted_leibniz(r, s, c, 6).passed
    assert check_linearity(r, s, c, 6).passed


def test_linearity_examples():
    assert check_linearity(a, b, "a", 8).passed
    assert deriv(EMPTY, "a") == EMPTY


def test_module_action_examples():
    assert check_module_action(Star(a), "a", 8).passed
    assert check_module_action(star(alt(a, b)), "ab", 6).passed
    rep = check_module_action(a, "a", 6)
    assert rep.status == rigcore.PRECONDITION_UNMET


# ---- DFA


def test_dfa_star_ab():
    s = star(cat(a, b))
    dfa = build_dfa(s)
    assert len(dfa.states) == 3 and EMPTY in dfa.states
    for w in all_words(8):
        assert dfa.accepts(w) == matches(s, w) == (w in enumerate_lang(s, 8))


def test_dfa_empty():
    dfa = build_dfa(EMPTY)
    assert len(dfa.states) == 1 and not dfa.accepting


def test_dfa_alt():
    dfa = build_dfa(alt(a, b))
    for w in all_words(4):
        assert dfa.accepts(w) == matches(alt(a, b), w)


def test_dfa_state_cap():
    with pytest.raises(CapExceeded):
        build_dfa(P("(a|b)*a(a|b)(a|b)"), state_cap=2)


# ---- finite languages as a rig


def test_language_rig_laws_and_brzozowski():
    inst = language_rig()
    assert all(r.passed for r in rigcore.check_rig_laws(inst, 300, exhaustive=False))
    for c in "ab":
        der = brzozowski_derivation(c)
        assert all(r.passed for r in rigcore.check_derivation_laws(inst, der, 300, exhaustive=False))
        assert rigcore.derivation_unit_report(inst, der).passed


def test_language_rig_maximally_nontaut():
    inst = language_rig()
    assert rigcore.find_self_similar(inst) == list(inst.finite_carrier)


def test_untwisted_brzozowski_fails_on_language_rig():
    inst = language_rig()
    der = brzozowski_derivation("a")
    untwisted = rigcore.DerivationDescriptor("untwisted", der.d)
    rep = {r.law: r for r in rigcore.check_derivation_laws(inst, untwisted, 300, exhaustive=False)}["leibniz"]
    assert not rep.passed


def test_two_letter_word_derivative_is_not_twisted_leibniz():
    # U={a}, V={b}: d_ab(UV) = {()} while d_ab(U)V + γ(U) d_ab(V) is empty
    inst = language_rig()
    der = brzozowski_derivation("ab")
    leib = next(l for l in rigcore.derivation_laws(inst, der) if l.name == "leibniz")
    assert not leib.holds(W("a"), W("b"))
