"""Labelled species, their cardinality sequences, and derivative identities.

``seq_of`` computes the sequence ``c_n = |F[n]|`` algebraically: binomial
convolution for products, partial Bell polynomials for substitution, a left
shift for the derivative.  ``count_structures`` counts the same thing by walking
subsets and set partitions of an actual label set, and is the oracle for it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .rigcore import FAIL, DerivationDescriptor, DimensionHom, LawReport, RigInstance

COUNT_CAP = 7


class CompositionUndefined(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


class SpeciesSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


# --------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Species:
    def __add__(self, other):
        return Sum(self, other)

    def __mul__(self, other):
        return Prod(self, other)

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class Zero(Species):
    pass


@dataclass(frozen=True)
class One(Species):
    pass


@dataclass(frozen=True)
class X(Species):
    pass


@dataclass(frozen=True)
class E(Species):
    pass


@dataclass(frozen=True)
class Sum(Species):
    f: Species
    g: Species


@dataclass(frozen=True)
class Prod(Species):
    f: Species
    g: Species


@dataclass(frozen=True)
class Comp(Species):
    f: Species
    g: Species


@dataclass(frozen=True)
class Deriv(Species):
    f: Species


ZERO, ONE, SX, SE = Zero(), One(), X(), E()


def prod_all(fs: Sequence[Species]) -> Species:
    if not fs:
        return ONE
    out = fs[0]
    for f in fs[1:]:
        out = Prod(out, f)
    return out


def sum_all(fs: Sequence[Species]) -> Species:
    if not fs:
        return ZERO
    out = fs[0]
    for f in fs[1:]:
        out = Sum(out, f)
    return out


def power(f: Species, n: int) -> Species:
    return prod_all([f] * n)


def nfold(n: int, f: Species) -> Species:
    """``f + f + ... + f`` (n times)."""
    return sum_all([f] * n)


def deriv_n(f: Species, n: int) -> Species:
    for _ in range(n):
        f = Deriv(f)
    return f


def depth(f: Species) -> int:
    if isinstance(f, (Sum, Prod, Comp)):
        return 1 + max(depth(f.f), depth(f.g))
    if isinstance(f, Deriv):
        return 1 + depth(f.f)
    return 1


# --------------------------------------------------------------------------
# grammar:  sum := prod ('+' prod)* ; prod := comp ('*' comp)* ;
#           comp := post ('o' comp)? ; post := atom "'"* ; atom := 0|1|X|E|(sum)


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    def peek(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1
        return self.s[self.i] if self.i < len(self.s) else None

    def eat(self, c):
        if self.peek() != c:
            raise SpeciesSyntaxError(f"expected {c!r}", self.i)
        self.i += 1

    def parse(self):
        f = self.sum()
        if self.peek() is not None:
            raise SpeciesSyntaxError(f"unexpected {self.s[self.i]!r}", self.i)
        return f

    def sum(self):
        f = self.prod()
        while self.peek() == "+":
            self.i += 1
            f = Sum(f, self.prod())
        return f

    def prod(self):
        f = self.comp()
        while self.peek() == "*":
            self.i += 1
            f = Prod(f, self.comp())
        return f

    def comp(self):
        f = self.post()
        if self.peek() == "o":
            self.i += 1
            return Comp(f, self.comp())
        return f

    def post(self):
        f = self.atom()
        while self.peek() == "'":
            self.i += 1
            f = Deriv(f)
        return f

    def atom(self):
        c = self.peek()
        pos = self.i
        if c is None:
            raise SpeciesSyntaxError("unexpected end of input", pos)
        self.i += 1
        atoms = {"0": ZERO, "1": ONE, "X": SX, "E": SE}
        if c in atoms:
            return atoms[c]
        if c == "(":
            f = self.sum()
            self.eat(")")
            return f
        raise SpeciesSyntaxError(f"unexpected {c!r}", pos)


def parse_species(text: str) -> Species:
    return _Parser(text).parse()


def show(f: Species, prec: int = 0) -> str:
    # prec: 0 sum, 1 product, 2 composition, 3 postfix
    if isinstance(f, (Zero, One, X, E)):
        return {Zero: "0", One: "1", X: "X", E: "E"}[type(f)]
    if isinstance(f, Deriv):
        return show(f.f, 3) + "'"
    if isinstance(f, Sum):
        s, p = show(f.f, 0) + " + " + show(f.g, 1), 0
    elif isinstance(f, Prod):
        s, p = show(f.f, 1) + "*" + show(f.g, 2), 1
    else:
        s, p = show(f.f, 3) + " o " + show(f.g, 2), 2
    return f"({s})" if prec > p else s


# --------------------------------------------------------------------------
# cardinality sequences


@dataclass(frozen=True)
class CardSeq:
    truncation: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.truncation + 1:
            raise ValueError("coeffs must have truncation + 1 entries")
        if any(c < 0 for c in self.coeffs):
            raise ValueError("coefficients must be nonnegative")

    @classmethod
    def of(cls, coeffs: Sequence[int]) -> "CardSeq":
        return cls(len(coeffs) - 1, tuple(coeffs))

    @classmethod
    def zero(cls, n: int) -> "CardSeq":
        return cls(n, (0,) * (n + 1))

    @classmethod
    def one(cls, n: int) -> "CardSeq":
        return cls(n, (1,) + (0,) * n)

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i]

    def truncate(self, n: int) -> "CardSeq":
        return CardSeq(n, self.coeffs[: n + 1])

    def __add__(self, other: "CardSeq") -> "CardSeq":
        n = min(self.truncation, other.truncation)
        return CardSeq(n, tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs)))

    def __mul__(self, other: "CardSeq") -> "CardSeq":
        n = min(self.truncation, other.truncation)
        f, g = self.coeffs, other.coeffs
        return CardSeq(n, tuple(sum(comb(m, k) * f[k] * g[m - k] for k in range(m + 1)) for m in range(n + 1)))

    def scale(self, k: int) -> "CardSeq":
        return CardSeq(self.truncation, tuple(k * c for c in self.coeffs))

    def shift(self) -> "CardSeq":
        """Left shift, one truncation level shorter (no value is invented)."""
        return CardSeq(self.truncation - 1, self.coeffs[1:])

    def shift_padded(self) -> "CardSeq":
        """Left shift keeping the truncation, with the top coefficient set to 0."""
        return CardSeq(self.truncation, self.coeffs[1:] + (0,))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.coeffs)) + "]"


def _bell_compose(f: Sequence[int], g: Sequence[int], n: int) -> list[int]:
    # partial Bell polynomials B[m][k] in the values g_1, g_2, ...
    B = [[0] * (n + 1) for _ in range(n + 1)]
    B[0][0] = 1
    for m in range(1, n + 1):
        for k in range(1, m + 1):
            B[m][k] = sum(comb(m - 1, i - 1) * g[i] * B[m - i][k - 1] for i in range(1, m - k + 2))
    return [sum(f[k] * B[m][k] for k in range(m + 1)) for m in range(n + 1)]


def seq_of(expr: Species, n: int) -> CardSeq:
    return CardSeq(n, _seq(expr, n))


@lru_cache(maxsize=None)
def _seq(expr: Species, n: int) -> tuple[int, ...]:
    if isinstance(expr, Zero):
        return (0,) * (n + 1)
    if isinstance(expr, One):
        return (1,) + (0,) * n
    if isinstance(expr, X):
        return tuple(1 if i == 1 else 0 for i in range(n + 1))
    if isinstance(expr, E):
        return (1,) * (n + 1)
    if isinstance(expr, Deriv):
        return _seq(expr.f, n + 1)[1:]
    if isinstance(expr, Comp):
        g = _seq(expr.g, n)
        if g[0] != 0:
            raise CompositionUndefined("composition undefined at empty set")
        return tuple(_bell_compose(_seq(expr.f, n), g, n))
    a, b = CardSeq(n, _seq(expr.f, n)), CardSeq(n, _seq(expr.g, n))
    return (a + b if isinstance(expr, Sum) else a * b).coeffs


def empty_count(g: Species) -> int:
    return _seq(g, 0)[0]


# --------------------------------------------------------------------------
# brute-force oracle


def _subsets(labels: tuple):
    n = len(labels)
    for mask in range(1 << n):
        yield (tuple(labels[i] for i in range(n) if mask >> i & 1),
               tuple(labels[i] for i in range(n) if not mask >> i & 1))


def set_partitions(labels: tuple):
    if not labels:
        yield []
        return
    first, rest = labels[0], labels[1:]
    for p in set_partitions(rest):
        yield [(first,)] + p
        for i in range(len(p)):
            yield p[:i] + [(first,) + p[i]] + p[i + 1:]


@lru_cache(maxsize=None)
def _partition_shapes(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Block-size multisets of the set partitions of an n-set, with multiplicity."""
    counts: dict[tuple[int, ...], int] = {}
    for p in set_partitions(tuple(range(n))):
        shape = tuple(sorted(len(b) for b in p))
        counts[shape] = counts.get(shape, 0) + 1
    return tuple(sorted(counts.items()))


@lru_cache(maxsize=None)
def _count(expr: Species, n: int) -> int:
    labels = tuple(range(n))
    if isinstance(expr, Zero):
        return 0
    if isinstance(expr, One):
        return int(n == 0)
    if isinstance(expr, X):
        return int(n == 1)
    if isinstance(expr, E):
        return 1
    if isinstance(expr, Sum):
        return _count(expr.f, n) + _count(expr.g, n)
    if isinstance(expr, Prod):
        return sum(_count(expr.f, len(s)) * _count(expr.g, len(t)) for s, t in _subsets(labels))
    if isinstance(expr, Deriv):
        # one extra label plays the role of the distinguished point
        return _count(expr.f, n + 1)
    if _count(expr.g, 0) != 0:
        raise CompositionUndefined("composition undefined at empty set")
    total = 0
    for shape, mult in _partition_shapes(n):
        term = _count(expr.f, len(shape))
        for size in shape:
            term *= _count(expr.g, size)
        total += mult * term
    return total


def count_structures(expr: Species, n: int, cap: int = COUNT_CAP) -> int:
    if n > cap:
        raise CapExceeded(f"size {n} exceeds cap {cap}")
    return _count(expr, n)


# --------------------------------------------------------------------------
# identity checks


def _seq_report(law: str, lhs: CardSeq, rhs: CardSeq, subject: tuple[str, ...]) -> LawReport:
    for i, (a, b) in enumerate(zip(lhs.coeffs, rhs.coeffs)):
        if a != b:
            ce = subject + (f"index {i}: {a} != {b}",)
            return LawReport(law, False, lhs.truncation + 1, ce, FAIL, witness=(i, a, b))
    return LawReport(law, True, lhs.truncation + 1)


def check_chain_rule(f: Species, g: Species, n: int) -> LawReport:
    if empty_count(g) != 0:
        raise CompositionUndefined("composition undefined at empty set")
    lhs = seq_of(Deriv(Comp(f, g)), n)
    rhs = seq_of(Prod(Comp(Deriv(f), g), Deriv(g)), n)
    return _seq_report("chain-rule", lhs, rhs, (show(f), show(g)))


def check_power_rule(f: Species, k: int, n: int) -> LawReport:
    if k < 1:
        raise ValueError("power must be >= 1")
    lhs = seq_of(Deriv(power(f, k)), n)
    rhs = seq_of(nfold(k, Prod(power(f, k - 1), Deriv(f))), n)
    return _seq_report("power-rule", lhs, rhs, (show(f), str(k)))


def check_tuple_rule(fs: Sequence[Species], n: int) -> LawReport:
    if not fs:
        raise ValueError("need at least one factor")
    fs = list(fs)
    lhs = seq_of(Deriv(prod_all(fs)), n)
    terms = [prod_all(fs[:i] + [Deriv(fs[i])] + fs[i + 1:]) for i in range(len(fs))]
    rhs = seq_of(sum_all(terms), n)
    return _seq_report("tuple-rule", lhs, rhs, tuple(show(f) for f in fs))


def check_nfold_leibniz(f: Species, g: Species, k: int, n: int) -> LawReport:
    if k < 0:
        raise ValueError("k must be >= 0")
    lhs = seq_of(deriv_n(Prod(f, g), k), n)
    terms = [nfold(comb(k, j), Prod(deriv_n(f, k - j), deriv_n(g, j))) for j in range(k + 1)]
    rhs = seq_of(sum_all(terms), n)
    return _seq_report("nfold-leibniz", lhs, rhs, (show(f), show(g), str(k)))


# --------------------------------------------------------------------------
# exponential generating series


def chi_egf(expr: Species, n: int) -> list[Fraction]:
    """Coefficients ``c_k / k!`` of the exponential generating series, k <= n."""
    return egf_of(seq_of(expr, n))


def egf_of(s: CardSeq) -> list[Fraction]:
    return [Fraction(c, factorial(k)) for k, c in enumerate(s.coeffs)]


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    n = min(len(a), len(b))
    return [sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n)]


def series_derivative(a: Sequence[Fraction]) -> list[Fraction]:
    return [(k + 1) * a[k + 1] for k in range(len(a) - 1)]


def render_series(coeffs: Sequence[Fraction]) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        p, q = c.numerator, c.denominator
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        head = str(p) if (p != 1 or k == 0) else ""
        terms.append(head + mono + (f"/{q}" if q != 1 else ""))
    body = " + ".join(terms) if terms else "0"
    return f"{body} + O(t^{len(coeffs)})"


# --------------------------------------------------------------------------
# random expressions


def random_species(rng: random.Random, max_depth: int) -> Species:
    """Seeded random expression of depth at most ``max_depth``.

    Composition nodes always get an inner species with no structure on the
    empty set; when the drawn one has some, it is multiplied by X.
    """
    if max_depth <= 1:
        return rng.choice([ZERO, ONE, SX, SX, SE, SE])
    roll = rng.random()
    if roll < 0.2:
        return random_species(rng, 1)
    sub = lambda: random_species(rng, max_depth - 1)
    if roll < 0.45:
        return Sum(sub(), sub())
    if roll < 0.7:
        return Prod(sub(), sub())
    if roll < 0.85:
        f = sub()
        g = random_species(rng, max_depth - 2) if max_depth > 2 else SX
        if empty_count(g) != 0:
            g = Prod(SX, g)
        return Comp(f, g)
    return Deriv(sub())


def random_vanishing(rng: random.Random, max_depth: int) -> Species:
    """Random species with no structure on the empty set."""
    g = random_species(rng, max_depth)
    if empty_count(g) != 0:
        g = Prod(SX, random_species(rng, max(1, max_depth - 1)))
    return g


# --------------------------------------------------------------------------
# the rig of cardinality sequences


def cardseq_rig(truncation: int = 6, sample_support: int = 3, carrier_coeff: int = 3) -> RigInstance:
    """Cardinality sequences at a fixed truncation, with binomial convolution.

    Samples are nonzero only below ``sample_support`` (at most half the
    truncation), so a product of two samples is known exactly and the padded
    shift is a genuine derivative on them.  The enumerable carrier is every
    sequence supported on indices 0 and 1 with entries up to ``carrier_coeff``.
    """
    if 2 * (sample_support - 1) > truncation:
        raise ValueError("sample_support too large for the truncation")
    n = truncation

    def sample(rng):
        head = [rng.randint(0, 4) for _ in range(sample_support)]
        return CardSeq(n, tuple(head) + (0,) * (n + 1 - sample_support))

    carrier = tuple(
        CardSeq(n, (a, b) + (0,) * (n - 1)) for a in range(carrier_coeff + 1) for b in range(carrier_coeff + 1)
    )
    return RigInstance(
        name="cardseq",
        sample=sample,
        eq=lambda a, b: a == b,
        zero=CardSeq.zero(n),
        add=lambda a, b: a + b,
        one=CardSeq.one(n),
        mul=lambda a, b: a * b,
        finite_carrier=carrier,
        render=str,
    )


def shift_derivation() -> DerivationDescriptor:
    return DerivationDescriptor("shift", lambda s: s.shift_padded())


def coefficient_sum_dimension() -> DimensionHom:
    return DimensionHom(lambda s: sum(s.coeffs), "coefficient-sum")
