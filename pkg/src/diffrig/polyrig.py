"""Polynomials over a base rig, and differential polynomials.

``Poly`` is the one-variable polynomial rig with the Cauchy product; its
derivation sends ``Y`` to ``1`` and acts on coefficients through an optional
base derivation.  ``DiffPoly`` is the tower ``Y, Y', Y'', ...`` with monomials
stored as sorted tuples of derivative orders.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from .rigcore import FAIL, DerivationDescriptor, LawReport, RigInstance, trivial_derivation
from .species import CardSeq


class BaseMismatch(ValueError):
    pass


class InsufficientTruncation(ValueError):
    pass


@dataclass(frozen=True)
class Poly:
    base: RigInstance
    coeffs: tuple

    @classmethod
    def make(cls, base: RigInstance, coeffs: Sequence) -> "Poly":
        cs = list(coeffs)
        while cs and base.eq(cs[-1], base.zero):
            cs.pop()
        return cls(base, tuple(cs))

    @property
    def degree(self) -> int | None:
        """Index of the leading coefficient; ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def coeff(self, i: int):
        return self.coeffs[i] if i < len(self.coeffs) else self.base.zero

    def __eq__(self, other):
        if not isinstance(other, Poly) or other.base is not self.base:
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            self.base.eq(a, b) for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(len(self.coeffs))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        r = self.base.render
        parts = []
        for i, c in enumerate(self.coeffs):
            if self.base.eq(c, self.base.zero):
                continue
            mono = "" if i == 0 else ("Y" if i == 1 else f"Y^{i}")
            if i and self.base.eq(c, self.base.one):
                parts.append(mono)
            else:
                parts.append(r(c) + mono)
        return " + ".join(parts)


def _same_base(p: Poly, q: Poly) -> RigInstance:
    if p.base is not q.base:
        raise BaseMismatch(f"{p.base.name} vs {q.base.name}")
    return p.base


def poly_add(p: Poly, q: Poly) -> Poly:
    b = _same_base(p, q)
    n = max(len(p.coeffs), len(q.coeffs))
    return Poly.make(b, [b.add(p.coeff(i), q.coeff(i)) for i in range(n)])


def poly_mul(p: Poly, q: Poly) -> Poly:
    b = _same_base(p, q)
    if not p.coeffs or not q.coeffs:
        return Poly(b, ())
    out = [b.zero] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        for j, c in enumerate(q.coeffs):
            out[i + j] = b.add(out[i + j], b.mul(a, c))
    return Poly.make(b, out)


def poly_derive(p: Poly, base_d: DerivationDescriptor | None = None) -> Poly:
    b = p.base
    d = (base_d or trivial_derivation(b)).d
    n = len(p.coeffs)
    out = [d(c) for c in p.coeffs]
    for i in range(1, n):
        out[i - 1] = b.add(out[i - 1], b.nmul(i, p.coeffs[i]))
    return Poly.make(b, out)


def constant(base: RigInstance, c) -> Poly:
    return Poly.make(base, [c])


def variable(base: RigInstance) -> Poly:
    return Poly.make(base, [base.zero, base.one])


def check_hom(hom: Callable, source: RigInstance, target: RigInstance, elements: Sequence) -> LawReport:
    """Check that ``hom`` preserves zero, one, sums and products on ``elements``."""
    teq = target.eq
    if not teq(hom(source.zero), target.zero) or not teq(hom(source.one), target.one):
        return LawReport("hom", False, 1, ("units",), FAIL)
    count = 0
    for a in elements:
        for b in elements:
            count += 1
            if not teq(hom(source.add(a, b)), target.add(hom(a), hom(b))) or not teq(
                hom(source.mul(a, b)), target.mul(hom(a), hom(b))
            ):
                return LawReport("hom", False, count, (source.render(a), source.render(b)), FAIL, witness=(a, b))
    return LawReport("hom", True, count)


class HomViolation(ValueError):
    def __init__(self, report: LawReport):
        super().__init__(f"map is not a rig homomorphism: {report.counterexample}")
        self.report = report


def poly_eval(p: Poly, hom: Callable, target: RigInstance, e: Any, check: bool = True) -> Any:
    """Evaluate at ``e`` after pushing coefficients along ``hom``."""
    if check:
        rep = check_hom(hom, p.base, target, list(p.coeffs))
        if not rep.passed:
            raise HomViolation(rep)
    acc = target.zero
    for c in reversed(p.coeffs):
        acc = target.add(target.mul(acc, e), hom(c))
    return acc


def poly_rig(base: RigInstance, max_degree: int = 3) -> RigInstance:
    def sample(rng: random.Random) -> Poly:
        return Poly.make(base, [base.sample(rng) for _ in range(rng.randint(0, max_degree + 1))])

    return RigInstance(
        name=f"poly-{base.name}",
        sample=sample,
        eq=lambda p, q: p == q,
        zero=Poly(base, ()),
        add=poly_add,
        one=constant(base, base.one),
        mul=poly_mul,
        render=str,
    )


def y_derivation(base_d: DerivationDescriptor | None = None) -> DerivationDescriptor:
    name = "dY=1" if base_d is None else f"dY=1,{base_d.name}"
    return DerivationDescriptor(name, lambda p: poly_derive(p, base_d))


def parse_poly(text: str, base: RigInstance, parse_coeff: Callable[[str], Any] = int) -> Poly:
    """Comma-separated coefficients, constant term first: ``"1,0,2"`` is ``1 + 2Y^2``."""
    items = [t.strip() for t in text.split(",") if t.strip()]
    return Poly.make(base, [parse_coeff(t) for t in items])


# --------------------------------------------------------------------------
# differential polynomials

Monomial = tuple  # sorted derivative orders, e.g. (0, 1) is Y*Y'


@dataclass(frozen=True)
class DiffPoly:
    base: RigInstance
    terms: tuple  # sorted ((monomial, coeff), ...), no zero coefficients

    @classmethod
    def make(cls, base: RigInstance, terms: Mapping[Monomial, Any] | Sequence[tuple]) -> "DiffPoly":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for mono, c in items:
            mono = tuple(sorted(mono))
            acc[mono] = base.add(acc[mono], c) if mono in acc else c
        kept = tuple(sorted((m, c) for m, c in acc.items() if not base.eq(c, base.zero)))
        return cls(base, kept)

    @property
    def max_order(self) -> int:
        return max((max(m) for m, _ in self.terms if m), default=-1)

    def __eq__(self, other):
        if not isinstance(other, DiffPoly) or other.base is not self.base:
            return NotImplemented
        return len(self.terms) == len(other.terms) and all(
            m1 == m2 and self.base.eq(c1, c2) for (m1, c1), (m2, c2) in zip(self.terms, other.terms)
        )

    def __hash__(self):
        return hash(tuple(m for m, _ in self.terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms:
            factors = [f"Y({k})" for k in mono]
            if not factors:
                parts.append(self.base.render(c))
            elif self.base.eq(c, self.base.one):
                parts.append("*".join(factors))
            else:
                parts.append(self.base.render(c) + " * " + "*".join(factors))
        return " + ".join(parts)


def diffpoly_add(p: DiffPoly, q: DiffPoly) -> DiffPoly:
    return DiffPoly.make(p.base, list(p.terms) + list(q.terms))


def diffpoly_mul(p: DiffPoly, q: DiffPoly) -> DiffPoly:
    b = p.base
    return DiffPoly.make(b, [(m1 + m2, b.mul(c1, c2)) for m1, c1 in p.terms for m2, c2 in q.terms])


def diffpoly_derive(dp: DiffPoly) -> DiffPoly:
    """Send ``Y(i)`` to ``Y(i+1)``, extended by linearity and Leibniz.

    Coefficients are treated as constants.
    """
    out = []
    for mono, c in dp.terms:
        for i in range(len(mono)):
            out.append((mono[:i] + (mono[i] + 1,) + mono[i + 1:], c))
    return DiffPoly.make(dp.base, out)


_TERM = re.compile(r"^\s*(?:(\d+)\s*(?:\*\s*)?)?((?:Y\(\d+\)\s*\*?\s*)*)$")


def parse_diffpoly(text: str, base: RigInstance) -> DiffPoly:
    """Parse ``c * Y(i)*Y(j) + ...``; a bare number is a constant term."""
    terms = []
    for raw in text.split("+"):
        raw = raw.strip()
        m = _TERM.match(raw)
        if not raw or not m or (m.group(1) is None and not m.group(2).strip()):
            raise ValueError(f"bad differential-polynomial term {raw!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        mono = tuple(int(k) for k in re.findall(r"Y\((\d+)\)", m.group(2)))
        terms.append((mono, base.nmul(c, base.one)))
    return DiffPoly.make(base, terms)


def dpe_rhs(dp: DiffPoly, candidate: CardSeq, n: int, coeff_to_int: Callable = int) -> CardSeq:
    """Substitute the candidate and its shifts for ``Y(0), Y(1), ...``."""
    k = max(dp.max_order, 0)
    if candidate.truncation < n + k:
        raise InsufficientTruncation(f"candidate truncation {candidate.truncation} < {n + k}")
    shifts = [candidate.truncate(n + k)]
    for _ in range(k):
        shifts.append(shifts[-1].shift())
    shifts = [s.truncate(n) for s in shifts]
    total = CardSeq.zero(n)
    for mono, c in dp.terms:
        term = CardSeq.one(n).scale(coeff_to_int(c))
        for i in mono:
            term = term * shifts[i]
        total = total + term
    return total


def dpe_check_solution(dp: DiffPoly, candidate: CardSeq, n: int) -> LawReport:
    """Does the candidate satisfy ``X = dp(X, X', X'', ...)`` up to index n?"""
    rhs = dpe_rhs(dp, candidate, n)
    lhs = candidate.truncate(n)
    for i in range(n + 1):
        if lhs[i] != rhs[i]:
            ce = (str(lhs), str(rhs), f"index {i}")
            return LawReport("dpe-solution", False, i + 1, ce, FAIL, witness=(i, lhs[i], rhs[i]))
    return LawReport("dpe-solution", True, n + 1)
