"""Regular expressions, Brzozowski derivatives and a bounded-enumeration oracle.

Regex values are only ever built through the smart constructors :func:`alt`,
:func:`cat` and :func:`star`, which keep them in ACI-canonical form: unions are
flattened, sorted and deduplicated, concatenations are right-nested with units
and zeros removed.  Canonical form is what makes the derivative-class DFA
construction terminate.

:func:`enumerate_lang` computes language windows by structural recursion and
never touches derivatives, so it serves as the independent oracle for
:func:`matches`, :func:`deriv` and :func:`build_dfa`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .rigcore import FAIL, PASS, PRECONDITION_UNMET, DerivationDescriptor, LawReport, RigInstance

DEFAULT_ALPHABET = ("a", "b")
ENUM_CAP = 10
STATE_CAP = 10_000

Word = tuple  # tuple of single-character symbols


class RegexSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class CapExceeded(RuntimeError):
    pass


# --------------------------------------------------------------------------
# syntax


class Regex:
    __slots__ = ()
    _rank = 0

    def sort_key(self) -> tuple:
        raise NotImplementedError

    def __lt__(self, other: "Regex") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=True, repr=False)
class _Node(Regex):
    _h: int = field(init=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((type(self).__name__,) + self._fields()))

    def _fields(self) -> tuple:
        return ()

    def __hash__(self) -> int:
        return self._h

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(map(repr, self._fields()))})"


@dataclass(frozen=True, eq=True, repr=False)
class Empty(_Node):
    def sort_key(self):
        return (0,)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Eps(_Node):
    def sort_key(self):
        return (1,)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Lit(_Node):
    sym: str = ""

    def _fields(self):
        return (self.sym,)

    def sort_key(self):
        return (2, self.sym)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Star(_Node):
    inner: Regex = None

    def _fields(self):
        return (self.inner,)

    def sort_key(self):
        return (3, self.inner.sort_key())

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Cat(_Node):
    left: Regex = None
    right: Regex = None

    def _fields(self):
        return (self.left, self.right)

    def sort_key(self):
        return (4, self.left.sort_key(), self.right.sort_key())

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True, repr=False)
class Alt(_Node):
    left: Regex = None
    right: Regex = None

    def _fields(self):
        return (self.left, self.right)

    def sort_key(self):
        return (5, self.left.sort_key(), self.right.sort_key())

    __hash__ = _Node.__hash__


EMPTY = Empty()
EPS = Eps()


def lit(sym: str) -> Regex:
    return Lit(sym)


def _alt_items(r: Regex) -> Iterable[Regex]:
    while isinstance(r, Alt):
        yield r.left
        r = r.right
    yield r


def alt(*rs: Regex) -> Regex:
    items = {x for r in rs for x in _alt_items(r) if x != EMPTY}
    if not items:
        return EMPTY
    ordered = sorted(items)
    out = ordered[-1]
    for x in reversed(ordered[:-1]):
        out = Alt(x, out)
    return out


def cat(*rs: Regex) -> Regex:
    factors = []
    for r in rs:
        while isinstance(r, Cat):
            factors.append(r.left)
            r = r.right
        factors.append(r)
    if any(f == EMPTY for f in factors):
        return EMPTY
    factors = [f for f in factors if f != EPS]
    if not factors:
        return EPS
    out = factors[-1]
    for f in reversed(factors[:-1]):
        out = Cat(f, out)
    return out


def star(r: Regex) -> Regex:
    if r == EMPTY or r == EPS:
        return EPS
    if isinstance(r, Star):
        return r
    return Star(r)


def word(text: str | Iterable[str]) -> Word:
    return tuple(text)


def literal_word(w: Word) -> Regex:
    return cat(*(Lit(c) for c in w)) if w else EPS


# --------------------------------------------------------------------------
# parsing and printing
#
#   alt  := cat ('|' cat)*
#   cat  := post post*          (juxtaposition)
#   post := atom '*'*
#   atom := '0' | '1' | symbol | '(' alt ')'


class _Parser:
    def __init__(self, text: str, alphabet):
        self.s = text
        self.i = 0
        self.alphabet = set(alphabet)

    def peek(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1
        return self.s[self.i] if self.i < len(self.s) else None

    def parse(self) -> Regex:
        r = self.alt()
        if self.peek() is not None:
            raise RegexSyntaxError(f"unexpected {self.s[self.i]!r}", self.i)
        return r

    def alt(self) -> Regex:
        parts = [self.cat()]
        while self.peek() == "|":
            self.i += 1
            parts.append(self.cat())
        return alt(*parts)

    def cat(self) -> Regex:
        parts = []
        while (c := self.peek()) is not None and c not in "|)":
            parts.append(self.post())
        if not parts:
            raise RegexSyntaxError("expected expression", self.i)
        return cat(*parts)

    def post(self) -> Regex:
        r = self.atom()
        while self.peek() == "*":
            self.i += 1
            r = star(r)
        return r

    def atom(self) -> Regex:
        c = self.peek()
        pos = self.i
        if c is None:
            raise RegexSyntaxError("unexpected end of input", pos)
        self.i += 1
        if c == "(":
            r = self.alt()
            if self.peek() != ")":
                raise RegexSyntaxError("expected ')'", self.i)
            self.i += 1
            return r
        if c == "0":
            return EMPTY
        if c == "1":
            return EPS
        if c in "*|)":
            raise RegexSyntaxError(f"unexpected {c!r}", pos)
        if c not in self.alphabet:
            raise RegexSyntaxError(f"symbol {c!r} not in alphabet", pos)
        return Lit(c)


def parse_regex(text: str, alphabet=DEFAULT_ALPHABET) -> Regex:
    return _Parser(text, alphabet).parse()


def to_text(r: Regex) -> str:
    return _show(r, 0)


def _show(r: Regex, prec: int) -> str:
    # prec: 0 = alternation context, 1 = concatenation, 2 = under star
    if r == EMPTY:
        return "0"
    if r == EPS:
        return "1"
    if isinstance(r, Lit):
        return r.sym
    if isinstance(r, Star):
        return _show(r.inner, 2) + "*"
    if isinstance(r, Cat):
        s = _show(r.left, 1) + _show(r.right, 1)
        return f"({s})" if prec > 1 else s
    s = _show(r.left, 0) + "|" + _show(r.right, 0)
    return f"({s})" if prec > 0 else s


# --------------------------------------------------------------------------
# derivatives


@lru_cache(maxsize=None)
def nullable(r: Regex) -> bool:
    if isinstance(r, (Eps, Star)):
        return True
    if isinstance(r, Alt):
        return nullable(r.left) or nullable(r.right)
    if isinstance(r, Cat):
        return nullable(r.left) and nullable(r.right)
    return False


@lru_cache(maxsize=1 << 20)
def deriv(r: Regex, a: str) -> Regex:
    if isinstance(r, Lit):
        return EPS if r.sym == a else EMPTY
    if isinstance(r, Alt):
        return alt(deriv(r.left, a), deriv(r.right, a))
    if isinstance(r, Cat):
        head = cat(deriv(r.left, a), r.right)
        return alt(head, deriv(r.right, a)) if nullable(r.left) else head
    if isinstance(r, Star):
        return cat(deriv(r.inner, a), r)
    return EMPTY


def deriv_word(r: Regex, w: Iterable[str]) -> Regex:
    for a in w:
        r = deriv(r, a)
    return r


def matches(r: Regex, w: Iterable[str]) -> bool:
    return nullable(deriv_word(r, w))


# --------------------------------------------------------------------------
# bounded enumeration oracle


def _concat(us: frozenset, vs: frozenset, max_length: int) -> frozenset:
    return frozenset(u + v for u in us for v in vs if len(u) + len(v) <= max_length)


def _enum(r: Regex, n: int, memo: dict) -> frozenset:
    got = memo.get(r)
    if got is not None:
        return got
    if r == EMPTY:
        out = frozenset()
    elif r == EPS:
        out = frozenset({()})
    elif isinstance(r, Lit):
        out = frozenset({(r.sym,)}) if n >= 1 else frozenset()
    elif isinstance(r, Alt):
        out = _enum(r.left, n, memo) | _enum(r.right, n, memo)
    elif isinstance(r, Cat):
        out = _concat(_enum(r.left, n, memo), _enum(r.right, n, memo), n)
    else:
        base = _enum(r.inner, n, memo) - {()}
        out = frozenset({()})
        frontier = out
        while frontier:
            frontier = _concat(base, frontier, n) - out
            out = out | frontier
    memo[r] = out
    return out


def enumerate_lang(r: Regex, max_length: int, cap: int = ENUM_CAP) -> frozenset:
    """All words of L(r) with length at most ``max_length``."""
    if max_length > cap:
        raise CapExceeded(f"max_length {max_length} exceeds cap {cap}")
    return _enum(r, max_length, {})


def all_words(max_length: int, alphabet=DEFAULT_ALPHABET) -> list[Word]:
    return [w for n in range(max_length + 1) for w in itertools.product(alphabet, repeat=n)]


def show_word(w: Word) -> str:
    return "".join(w) if w else "()"


def show_words(ws: Iterable[Word]) -> str:
    return "{" + ", ".join(show_word(w) for w in sorted(ws, key=lambda w: (len(w), w))) + "}"


# --------------------------------------------------------------------------
# law checks on language windows


def _window_report(law: str, lhs: frozenset, rhs: frozenset, subject: tuple[str, ...]) -> LawReport:
    if lhs == rhs:
        return LawReport(law, True, 1)
    diff = (lhs - rhs) | (rhs - lhs)
    w = min(diff, key=lambda w: (len(w), w))
    ce = subject + (f"word {show_word(w)} only in {'lhs' if w in lhs else 'rhs'}",)
    return LawReport(law, False, 1, ce, FAIL, witness=subject)


def check_twisted_leibniz(r: Regex, s: Regex, a: str, max_length: int) -> LawReport:
    lhs = enumerate_lang(deriv(cat(r, s), a), max_length)
    rhs = enumerate_lang(cat(deriv(r, a), s), max_length)
    if nullable(r):
        rhs = rhs | enumerate_lang(deriv(s, a), max_length)
    return _window_report("twisted-leibniz", lhs, rhs, (to_text(r), to_text(s), a))


def check_untwisted_leibniz(r: Regex, s: Regex, a: str, max_length: int) -> LawReport:
    """The Leibniz rule with the twist dropped, i.e. always adding the ``∂s`` term."""
    lhs = enumerate_lang(deriv(cat(r, s), a), max_length)
    rhs = enumerate_lang(cat(deriv(r, a), s), max_length) | enumerate_lang(deriv(s, a), max_length)
    return _window_report("untwisted-leibniz", lhs, rhs, (to_text(r), to_text(s), a))


def check_linearity(r: Regex, s: Regex, a: str, max_length: int) -> LawReport:
    if deriv(EMPTY, a) != EMPTY:
        return LawReport("linearity", False, 1, ("0", a), FAIL)
    lhs = enumerate_lang(deriv(alt(r, s), a), max_length)
    rhs = enumerate_lang(alt(deriv(r, a), deriv(s, a)), max_length)
    return _window_report("linearity", lhs, rhs, (to_text(r), to_text(s), a))


def is_monoid_window(ws: frozenset, max_length: int) -> bool:
    if () not in ws:
        return False
    return all(u + v in ws for u in ws for v in ws if len(u) + len(v) <= max_length)


def check_module_action(m: Regex, w: Iterable[str], max_length: int) -> LawReport:
    """Right action of L(m) on its derivative: ``∂_w(m) · m ⊆ ∂_w(m)`` within the window."""
    w = tuple(w)
    mw = enumerate_lang(m, max_length)
    if not is_monoid_window(mw, max_length):
        return LawReport("module-action", False, 0, None, PRECONDITION_UNMET, note="not a monoid window")
    dw = enumerate_lang(deriv_word(m, w), max_length)
    extra = _concat(dw, mw, max_length) - dw
    if not extra:
        return LawReport("module-action", True, len(dw) * len(mw))
    bad = min(extra, key=lambda x: (len(x), x))
    ce = (to_text(m), show_word(w), show_word(bad))
    return LawReport("module-action", False, 1, ce, FAIL, witness=(m, w, bad))


# --------------------------------------------------------------------------
# derivative-class DFA


@dataclass
class DFA:
    states: list[Regex]
    start: int
    alphabet: tuple[str, ...]
    delta: dict[tuple[int, str], int]
    accepting: frozenset[int]

    def accepts(self, w: Iterable[str]) -> bool:
        q = self.start
        for a in w:
            q = self.delta[q, a]
        return q in self.accepting

    def table(self) -> str:
        head = "state  acc  " + "  ".join(f"{a:>3}" for a in self.alphabet) + "  regex"
        rows = [head]
        for i, r in enumerate(self.states):
            acc = "*" if i in self.accepting else " "
            moves = "  ".join(f"{self.delta[i, a]:>3}" for a in self.alphabet)
            rows.append(f"{i:>5}  {acc:>3}  {moves}  {to_text(r)}")
        return "\n".join(rows)


def build_dfa(r: Regex, alphabet=DEFAULT_ALPHABET, state_cap: int = STATE_CAP) -> DFA:
    if state_cap < 1:
        raise ValueError("state_cap must be >= 1")
    alphabet = tuple(alphabet)
    index = {r: 0}
    states = [r]
    delta = {}
    todo = [0]
    while todo:
        i = todo.pop()
        for a in alphabet:
            nxt = deriv(states[i], a)
            j = index.get(nxt)
            if j is None:
                if len(states) >= state_cap:
                    raise CapExceeded(f"more than {state_cap} derivative states")
                j = index[nxt] = len(states)
                states.append(nxt)
                todo.append(j)
            delta[i, a] = j
    acc = frozenset(i for i, q in enumerate(states) if nullable(q))
    return DFA(states, 0, alphabet, delta, acc)


# --------------------------------------------------------------------------
# random generation


def random_regex(rng: random.Random, depth: int, alphabet=DEFAULT_ALPHABET) -> Regex:
    """Seeded random regex of depth at most ``depth``, biased toward Cat/Alt."""
    if depth <= 1:
        roll = rng.random()
        if roll < 0.06:
            return EMPTY
        if roll < 0.14:
            return EPS
        return Lit(rng.choice(alphabet))
    roll = rng.random()
    if roll < 0.15:
        return random_regex(rng, 1, alphabet)
    if roll < 0.50:
        return cat(random_regex(rng, depth - 1, alphabet), random_regex(rng, depth - 1, alphabet))
    if roll < 0.82:
        return alt(random_regex(rng, depth - 1, alphabet), random_regex(rng, depth - 1, alphabet))
    return star(random_regex(rng, depth - 1, alphabet))


# --------------------------------------------------------------------------
# finite languages as a rig with the Brzozowski derivation


def language_rig(word_max: int = 2, alphabet=DEFAULT_ALPHABET, carrier_max: int = 1) -> RigInstance:
    """Finite languages under union and concatenation.

    Finite languages form a sub-rig of all languages, so no truncation is
    involved.  Samples are sets of words of length at most ``word_max``; the
    enumerable carrier is every language of words of length at most
    ``carrier_max``.
    """
    pool = all_words(word_max, alphabet)
    small = all_words(carrier_max, alphabet)
    carrier = tuple(
        frozenset(c) for k in range(len(small) + 1) for c in itertools.combinations(small, k)
    )

    def sample(rng):
        return frozenset(w for w in pool if rng.random() < 0.3)

    return RigInstance(
        name="langwindow",
        sample=sample,
        eq=lambda u, v: u == v,
        zero=frozenset(),
        add=lambda u, v: u | v,
        one=frozenset({()}),
        mul=lambda u, v: frozenset(x + y for x in u for y in v),
        finite_carrier=carrier,
        render=show_words,
    )


def brzozowski_derivation(w: Iterable[str]) -> DerivationDescriptor:
    """``U ↦ {x | wx ∈ U}``, twisted by ``U ↦ U ∩ {()}``."""
    w = tuple(w)
    n = len(w)
    return DerivationDescriptor(
        name=f"brzozowski[{show_word(w)}]",
        d=lambda u: frozenset(x[n:] for x in u if x[:n] == w),
        twist=lambda u: u & {()},
    )
