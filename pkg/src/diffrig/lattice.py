"""Co-Heyting boundaries on lattices of down-sets of a finite poset.

Down-sets are bitmasks over the poset's elements.  Join is union, meet is
intersection, and co-subtraction ``y \\ x`` (the least ``z`` with
``y <= x v z``) is the down-closure of the plain set difference.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .rigcore import FAIL, DerivationDescriptor, LawReport, RigInstance

MAX_ELEMENTS = 12


class PosetError(ValueError):
    pass


@dataclass(frozen=True)
class Poset:
    elements: tuple[str, ...]
    below: tuple[int, ...]  # below[i]: bitmask of all j <= i (reflexive)

    @classmethod
    def from_relations(cls, elements: Sequence[str], less: Iterable[tuple[str, str]]) -> "Poset":
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise PosetError("duplicate element names")
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        below = [1 << i for i in range(n)]
        for a, b in less:
            if a not in idx or b not in idx:
                raise PosetError(f"unknown element in relation {a} < {b}")
            below[idx[b]] |= 1 << idx[a]
        # transitive closure
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = below[i]
                for j in range(n):
                    if acc >> j & 1:
                        acc |= below[j]
                if acc != below[i]:
                    below[i] = acc
                    changed = True
        for i in range(n):
            for j in range(i + 1, n):
                if below[i] >> j & 1 and below[j] >> i & 1:
                    raise PosetError(f"not antisymmetric: {elements[i]} and {elements[j]}")
        return cls(elements, tuple(below))

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def top_mask(self) -> int:
        return (1 << self.size) - 1

    def leq(self, a: int, b: int) -> bool:
        return bool(self.below[b] >> a & 1)


def chain(n: int) -> Poset:
    names = [str(i) for i in range(n)]
    return Poset.from_relations(names, zip(names, names[1:]))


def antichain(names: Sequence[str]) -> Poset:
    return Poset.from_relations(names, [])


@dataclass(frozen=True)
class DownSet:
    poset: Poset
    mask: int

    def __post_init__(self):
        if down_closure(self.poset, self.mask) != self.mask:
            raise PosetError("not down-closed")

    def members(self) -> list[str]:
        return [e for i, e in enumerate(self.poset.elements) if self.mask >> i & 1]

    def __le__(self, other: "DownSet") -> bool:
        return self.mask & ~other.mask == 0

    def __or__(self, other: "DownSet") -> "DownSet":
        _check_same(self, other)
        return DownSet(self.poset, self.mask | other.mask)

    def __and__(self, other: "DownSet") -> "DownSet":
        _check_same(self, other)
        return DownSet(self.poset, self.mask & other.mask)

    def __str__(self) -> str:
        return "{" + ",".join(self.members()) + "}"


def _check_same(x: DownSet, y: DownSet):
    if x.poset != y.poset:
        raise PosetError("down-sets of different posets")


def down_closure(p: Poset, mask: int) -> int:
    out = 0
    for i in range(p.size):
        if mask >> i & 1:
            out |= p.below[i]
    return out


def bottom(p: Poset) -> DownSet:
    return DownSet(p, 0)


def top(p: Poset) -> DownSet:
    return DownSet(p, p.top_mask)


def downset(p: Poset, names: Iterable[str]) -> DownSet:
    """The down-set generated by ``names``."""
    idx = {e: i for i, e in enumerate(p.elements)}
    mask = 0
    for n in names:
        if n not in idx:
            raise PosetError(f"unknown element {n!r}")
        mask |= 1 << idx[n]
    return DownSet(p, down_closure(p, mask))


def downsets(p: Poset) -> list[DownSet]:
    if p.size > MAX_ELEMENTS:
        raise PosetError(f"poset has {p.size} elements; cap is {MAX_ELEMENTS}")
    return [DownSet(p, m) for m in range(1 << p.size) if down_closure(p, m) == m]


def cosubtract(y: DownSet, x: DownSet) -> DownSet:
    _check_same(x, y)
    return DownSet(y.poset, down_closure(y.poset, y.mask & ~x.mask))


def cosubtract_bruteforce(y: DownSet, x: DownSet, carrier: Sequence[DownSet] | None = None) -> DownSet:
    """Least ``z`` with ``y <= x v z``, found by search over all down-sets."""
    _check_same(x, y)
    carrier = downsets(y.poset) if carrier is None else carrier
    candidates = [z.mask for z in carrier if y.mask & ~(x.mask | z.mask) == 0]
    meet = y.poset.top_mask
    for m in candidates:
        meet &= m
    # down-sets are closed under meets, so a least candidate exists iff the meet is one
    if meet not in candidates:
        raise AssertionError("no least element; lattice is not co-Heyting")
    return DownSet(y.poset, meet)


def conot(x: DownSet) -> DownSet:
    return cosubtract(top(x.poset), x)


def boundary(x: DownSet) -> DownSet:
    return x & conot(x)


def check_adjointness(p: Poset) -> LawReport:
    ds = downsets(p)
    masks = [d.mask for d in ds]
    count = 0
    for x, y in itertools.product(ds, repeat=2):
        c = cosubtract(y, x).mask
        for z in masks:
            count += 1
            if (c & ~z == 0) != (y.mask & ~(x.mask | z) == 0):
                zz = DownSet(p, z)
                return LawReport("adjointness", False, count, (str(x), str(y), str(zz)), FAIL, witness=(x, y, zz))
    return LawReport("adjointness", True, count)


def check_cosubtract_oracle(p: Poset) -> LawReport:
    ds = downsets(p)
    count = 0
    for x, y in itertools.product(ds, repeat=2):
        count += 1
        if cosubtract(y, x) != cosubtract_bruteforce(y, x, ds):
            return LawReport("cosubtract-oracle", False, count, (str(y), str(x)), FAIL, witness=(y, x))
    return LawReport("cosubtract-oracle", True, count)


def check_leibniz_boundary(p: Poset) -> LawReport:
    count = 0
    for a, b in itertools.product(downsets(p), repeat=2):
        count += 1
        if boundary(a & b) != ((boundary(a) & b) | (a & boundary(b))):
            return LawReport("leibniz", False, count, (str(a), str(b)), FAIL, witness=(a, b))
    return LawReport("leibniz", True, count)


def find_linearity_counterexample(p: Poset) -> tuple[DownSet, DownSet] | None:
    for a, b in itertools.product(downsets(p), repeat=2):
        if boundary(a | b) != (boundary(a) | boundary(b)):
            return a, b
    return None


def random_poset(rng: random.Random, max_elements: int = 5) -> Poset:
    """Random DAG on up to ``max_elements`` nodes, edges only from lower to higher index."""
    n = rng.randint(1, max_elements)
    names = [f"p{i}" for i in range(n)]
    rels = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35]
    return Poset.from_relations(names, rels)


def parse_poset(text: str) -> Poset:
    """Read ``elements: a b c`` followed by ``a < b`` lines; blank lines are ignored."""
    elements = None
    rels = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if elements is None:
            if not line.startswith("elements:"):
                raise PosetError(f"line {lineno}: expected 'elements:'")
            elements = line[len("elements:"):].split()
            continue
        parts = line.split("<")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise PosetError(f"line {lineno}: expected 'a < b'")
        rels.append((parts[0].strip(), parts[1].strip()))
    if elements is None:
        raise PosetError("missing 'elements:' line")
    return Poset.from_relations(elements, rels)


def read_poset(path: str) -> Poset:
    with open(path, encoding="utf-8") as fh:
        return parse_poset(fh.read())


def downset_rig(p: Poset, name: str | None = None) -> RigInstance:
    carrier = tuple(downsets(p))
    return RigInstance(
        name=name or f"downsets({len(p.elements)})",
        sample=lambda rng: rng.choice(carrier),
        eq=lambda a, b: a == b,
        zero=bottom(p),
        add=lambda a, b: a | b,
        one=top(p),
        mul=lambda a, b: a & b,
        finite_carrier=carrier,
        render=str,
    )


def boundary_derivation() -> DerivationDescriptor:
    return DerivationDescriptor("boundary", boundary, expected_linear=False)
