"""Rigs with derivations, checked by sampling.

A :class:`RigInstance` bundles a carrier sampler with the rig operations and a
canonical equality.  The checkers here never assume structural equality: every
comparison goes through ``inst.eq``.  Failing laws come back as
:class:`LawReport` values carrying a concrete witness, so a report can always be
replayed through the law it came from.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

PASS = "pass"
FAIL = "fail"
NOT_CLAIMED = "not-claimed"
PRECONDITION_UNMET = "precondition-unmet"

DEFAULT_SAMPLES = 500
# exhaustive checking kicks in when the full tuple space is at most this large
EXHAUSTIVE_LIMIT = 40_000


class NotEnumerable(ValueError):
    """Raised when an analysis needs the full carrier and the instance has none."""


@dataclass(frozen=True)
class RigInstance:
    name: str
    sample: Callable[[random.Random], Any]
    eq: Callable[[Any, Any], bool]
    zero: Any
    add: Callable[[Any, Any], Any]
    one: Any
    mul: Callable[[Any, Any], Any]
    finite_carrier: tuple | None = None
    render: Callable[[Any], str] = repr

    def draw(self, seed: int, size: int) -> list:
        rng = random.Random(seed)
        return [self.sample(rng) for _ in range(size)]

    def nmul(self, n: int, a: Any) -> Any:
        """``a + a + ... + a`` (n times), with ``0 * a = zero``."""
        acc = self.zero
        for _ in range(n):
            acc = self.add(acc, a)
        return acc


@dataclass(frozen=True)
class DerivationDescriptor:
    name: str
    d: Callable[[Any], Any]
    twist: Callable[[Any], Any] | None = None
    expected_linear: bool = True

    def gamma(self, a: Any) -> Any:
        return a if self.twist is None else self.twist(a)


@dataclass(frozen=True)
class DimensionHom:
    dim: Callable[[Any], int]
    name: str = "dim"


@dataclass(frozen=True)
class LawReport:
    law: str
    passed: bool
    samples: int
    counterexample: tuple[str, ...] | None = None
    status: str = PASS
    instance: str = ""
    # raw carrier elements behind ``counterexample``; kept for replay only
    witness: tuple | None = field(default=None, compare=False, repr=False)
    note: str = ""

    @property
    def blocking(self) -> bool:
        """True when this report should make a run fail."""
        return self.status == FAIL

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "instance": self.instance,
            "law": self.law,
            "passed": self.passed,
            "status": self.status,
            "samples": self.samples,
            "counterexample": list(self.counterexample) if self.counterexample is not None else None,
        }

    def render_line(self) -> str:
        mark = {PASS: "PASS", FAIL: "FAIL", NOT_CLAIMED: "N/C ", PRECONDITION_UNMET: "SKIP"}[self.status]
        line = f"{mark} {self.law:<22} samples={self.samples}"
        if self.counterexample is not None:
            line += "  counterexample: (" + ", ".join(self.counterexample) + ")"
        if self.note:
            line += f"  [{self.note}]"
        return line


@dataclass(frozen=True)
class Law:
    """A named predicate over ``arity`` carrier elements."""

    name: str
    arity: int
    holds: Callable[..., bool]


def reports_to_json(reports: Iterable[LawReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, ensure_ascii=False)


# --------------------------------------------------------------------------
# law sets


def rig_laws(inst: RigInstance) -> list[Law]:
    eq, add, mul, z, o = inst.eq, inst.add, inst.mul, inst.zero, inst.one
    return [
        Law("add-assoc", 3, lambda a, b, c: eq(add(add(a, b), c), add(a, add(b, c)))),
        Law("add-comm", 2, lambda a, b: eq(add(a, b), add(b, a))),
        Law("add-unit", 1, lambda a: eq(add(z, a), a) and eq(add(a, z), a)),
        Law("mul-assoc", 3, lambda a, b, c: eq(mul(mul(a, b), c), mul(a, mul(b, c)))),
        Law("mul-unit-left", 1, lambda a: eq(mul(o, a), a)),
        Law("mul-unit-right", 1, lambda a: eq(mul(a, o), a)),
        Law("distrib-left", 3, lambda a, b, c: eq(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))),
        Law("distrib-right", 3, lambda a, b, c: eq(mul(add(a, b), c), add(mul(a, c), mul(b, c)))),
        Law("annihilate-left", 1, lambda a: eq(mul(z, a), z)),
        Law("annihilate-right", 1, lambda a: eq(mul(a, z), z)),
    ]


def derivation_laws(inst: RigInstance, der: DerivationDescriptor) -> list[Law]:
    eq, add, mul, d, g = inst.eq, inst.add, inst.mul, der.d, der.gamma
    return [
        Law("d-zero", 0, lambda: eq(d(inst.zero), inst.zero)),
        Law("linearity", 2, lambda a, b: eq(d(add(a, b)), add(d(a), d(b)))),
        Law("leibniz", 2, lambda a, b: eq(d(mul(a, b)), add(mul(d(a), b), mul(g(a), d(b))))),
    ]


def replay(law: Law, report: LawReport) -> bool:
    """Re-run ``law`` on the witness stored in ``report``."""
    if report.witness is None:
        raise ValueError(f"report for {report.law!r} carries no witness")
    return bool(law.holds(*report.witness))


# --------------------------------------------------------------------------
# harness


def _tuples(inst: RigInstance, law: Law, n_samples: int, seed: int, exhaustive: bool | None):
    if law.arity == 0:
        return [()]
    carrier = inst.finite_carrier
    if carrier is not None and exhaustive is not False:
        space = len(carrier) ** law.arity
        if exhaustive or space <= EXHAUSTIVE_LIMIT:
            return itertools.product(carrier, repeat=law.arity)
    rng = random.Random(f"{seed}:{inst.name}:{law.name}")
    return (tuple(inst.sample(rng) for _ in range(law.arity)) for _ in range(n_samples))


def run_law(
    inst: RigInstance,
    law: Law,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    exhaustive: bool | None = None,
    claimed: bool = True,
) -> LawReport:
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    count = 0
    for xs in _tuples(inst, law, n_samples, seed, exhaustive):
        count += 1
        if not law.holds(*xs):
            return LawReport(
                law=law.name,
                passed=False,
                samples=count,
                counterexample=tuple(inst.render(x) for x in xs),
                status=FAIL if claimed else NOT_CLAIMED,
                instance=inst.name,
                witness=tuple(xs),
            )
    return LawReport(law.name, True, count, status=PASS if claimed else NOT_CLAIMED, instance=inst.name)


def check_rig_laws(
    inst: RigInstance, n_samples: int = DEFAULT_SAMPLES, seed: int = 0, exhaustive: bool | None = None
) -> list[LawReport]:
    return [run_law(inst, law, n_samples, seed, exhaustive) for law in rig_laws(inst)]


def check_derivation_laws(
    inst: RigInstance,
    der: DerivationDescriptor,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    exhaustive: bool | None = None,
) -> list[LawReport]:
    """Check d(0)=0, linearity and (twisted) Leibniz.

    Linearity is still exercised when ``expected_linear`` is false, but the
    report is marked not-claimed so that a counterexample is shown without
    counting as a failure.
    """
    out = []
    for law in derivation_laws(inst, der):
        claimed = law.name != "linearity" or der.expected_linear
        r = run_law(inst, law, n_samples, seed, exhaustive, claimed=claimed)
        out.append(_tag(r, der))
    return out


def _tag(r: LawReport, der: DerivationDescriptor) -> LawReport:
    return LawReport(r.law, r.passed, r.samples, r.counterexample, r.status, r.instance, r.witness, der.name)


# --------------------------------------------------------------------------
# self-similarity, tautness, fixed points


def _carrier(inst: RigInstance) -> tuple:
    if inst.finite_carrier is None:
        raise NotEnumerable(f"{inst.name}: not enumerable")
    return inst.finite_carrier


def find_self_similar(inst: RigInstance) -> list:
    """All carrier elements with ``a + a = a``, in carrier order."""
    return [a for a in _carrier(inst) if inst.eq(inst.add(a, a), a)]


def is_taut(inst: RigInstance) -> bool:
    found = find_self_similar(inst)
    return len(found) == 1 and inst.eq(found[0], inst.zero)


def check_dimension(inst: RigInstance, dim: DimensionHom, elements: Sequence) -> LawReport:
    """Verify additivity, ``dim(0) = 0`` and reflection of zero on ``elements``."""
    count = 0
    if dim.dim(inst.zero) != 0:
        return LawReport("dimension", False, 1, (inst.render(inst.zero),), FAIL, inst.name, (inst.zero,))
    for a in elements:
        count += 1
        if dim.dim(a) == 0 and not inst.eq(a, inst.zero):
            return LawReport("dimension", False, count, (inst.render(a),), FAIL, inst.name, (a,), "reflection")
    for a, b in itertools.product(elements, repeat=2):
        count += 1
        if dim.dim(inst.add(a, b)) != dim.dim(a) + dim.dim(b):
            ce = (inst.render(a), inst.render(b))
            return LawReport("dimension", False, count, ce, FAIL, inst.name, (a, b), "additivity")
    return LawReport("dimension", True, count, instance=inst.name)


def is_taut_via_dimension(
    inst: RigInstance, dim: DimensionHom, n_samples: int = 100, seed: int = 0
) -> LawReport:
    if inst.finite_carrier is not None:
        elements = list(inst.finite_carrier)
    else:
        elements = [inst.zero] + inst.draw(seed, n_samples)
    dim_report = check_dimension(inst, dim, elements)
    if not dim_report.passed:
        return dim_report
    for i, a in enumerate(elements, 1):
        if inst.eq(inst.add(a, a), a) and not inst.eq(a, inst.zero):
            return LawReport("taut-via-dimension", False, i, (inst.render(a),), FAIL, inst.name, (a,))
    return LawReport("taut-via-dimension", True, len(elements), instance=inst.name)


def derivation_unit_report(inst: RigInstance, der: DerivationDescriptor) -> LawReport:
    d1 = der.d(inst.one)
    if inst.eq(d1, inst.add(d1, d1)):
        return LawReport("d-unit-idempotent", True, 1, instance=inst.name, note=der.name)
    return LawReport("d-unit-idempotent", False, 1, (inst.render(d1),), FAIL, inst.name, (d1,), der.name)


def napier_search(inst: RigInstance, der: DerivationDescriptor) -> list:
    """Carrier elements fixed by the derivation."""
    return [a for a in _carrier(inst) if inst.eq(der.d(a), a)]


def iterate_derivation_chain(
    inst: RigInstance, der: DerivationDescriptor, start: Any, max_steps: int
) -> tuple[list, int | None]:
    """``[start, d(start), d(d(start)), ...]`` up to the first repeat.

    Returns the chain and the first index ``i`` with ``chain[i+1] == chain[i]``
    (the repeated value is not appended), or ``None`` if no such index occurs
    within ``max_steps`` applications.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    chain = [start]
    for i in range(max_steps):
        nxt = der.d(chain[-1])
        if inst.eq(nxt, chain[-1]):
            return chain, i
        chain.append(nxt)
    return chain, None


# --------------------------------------------------------------------------
# built-in instances


def nat_rig(bound: int = 20, sample_max: int = 60) -> RigInstance:
    return RigInstance(
        name="nat",
        sample=lambda rng: rng.randint(0, sample_max),
        eq=lambda a, b: a == b,
        zero=0,
        add=lambda a, b: a + b,
        one=1,
        mul=lambda a, b: a * b,
        finite_carrier=tuple(range(bound + 1)),
        render=str,
    )


class _Omega:
    __slots__ = ()

    def __repr__(self) -> str:
        return "ω"

    def __reduce__(self):
        return "OMEGA"


OMEGA = _Omega()


def card_add(a, b):
    if a is OMEGA or b is OMEGA:
        return OMEGA
    return a + b


def card_mul(a, b):
    if a == 0 or b == 0:
        return 0
    if a is OMEGA or b is OMEGA:
        return OMEGA
    return a * b


def cardinal_rig(k: int = 8) -> RigInstance:
    """Finite cardinals plus one infinite cardinal, enumerated as ``{0..k, ω}``.

    Arithmetic on finite values is exact; ``k`` only bounds the enumeration and
    the sampler, so results above ``k`` are legitimate values, never wrapped.
    """
    carrier = tuple(range(k + 1)) + (OMEGA,)
    return RigInstance(
        name="cardinal",
        sample=lambda rng: rng.choice(carrier),
        eq=lambda a, b: a is b if (a is OMEGA or b is OMEGA) else a == b,
        zero=0,
        add=card_add,
        one=1,
        mul=card_mul,
        finite_carrier=carrier,
        render=lambda a: "ω" if a is OMEGA else str(a),
    )


def bool_rig() -> RigInstance:
    return RigInstance(
        name="bool",
        sample=lambda rng: rng.randint(0, 1),
        eq=lambda a, b: a == b,
        zero=0,
        add=lambda a, b: a | b,
        one=1,
        mul=lambda a, b: a & b,
        finite_carrier=(0, 1),
        render=str,
    )


def broken_rig() -> RigInstance:
    """Naturals with ``a + b := a + 2b``; deliberately not commutative."""
    return RigInstance(
        name="broken",
        sample=lambda rng: rng.randint(0, 30),
        eq=lambda a, b: a == b,
        zero=0,
        add=lambda a, b: a + 2 * b,
        one=1,
        mul=lambda a, b: a * b,
        render=str,
    )


def trivial_derivation(inst: RigInstance) -> DerivationDescriptor:
    return DerivationDescriptor("trivial", lambda a: inst.zero)


def omega_derivation() -> DerivationDescriptor:
    """``d(a) = ω·a`` on the cardinal rig."""
    return DerivationDescriptor("omega-times", lambda a: card_mul(OMEGA, a))


def identity_derivation() -> DerivationDescriptor:
    return DerivationDescriptor("identity", lambda a: a)


def identity_dimension() -> DimensionHom:
    return DimensionHom(lambda a: a, "identity")
