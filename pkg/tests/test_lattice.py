import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from diffrig import rigcore
from diffrig.lattice import (
    DownSet, PosetError, antichain, boundary, boundary_derivation, bottom, chain,
    check_adjointness, check_cosubtract_oracle, check_leibniz_boundary, conot, cosubtract,
    cosubtract_bruteforce, downset, downset_rig, downsets, find_linearity_counterexample,
    parse_poset, random_poset, top, Poset,
)

posets = st.builds(lambda s: random_poset(random.Random(s), 5), st.integers(0, 10**6))
C2 = chain(2)
AB = antichain(["p", "q"])


def ds(p, *names):
    return downset(p, names)


def test_downsets_examples():
    assert [d.mask for d in downsets(C2)] == [0b00, 0b01, 0b11]
    assert len(downsets(AB)) == 4
    assert downsets(antichain([])) == [bottom(antichain([]))]


def test_downsets_cap():
    with pytest.raises(PosetError):
        downsets(antichain([f"e{i}" for i in range(13)]))


def test_not_down_closed():
    with pytest.raises(PosetError):
        DownSet(C2, 0b10)


def test_antisymmetry_checked():
    with pytest.raises(PosetError):
        Poset.from_relations(["a", "b"], [("a", "b"), ("b", "a")])


def test_cosubtract_examples():
    assert cosubtract(top(C2), ds(C2, "0")) == top(C2)
    assert cosubtract_bruteforce(top(C2), ds(C2, "0")) == top(C2)
    for y in downsets(C2):
        assert cosubtract(y, bottom(C2)) == y
        assert cosubtract(y, y) == bottom(C2)


def test_conot_examples():
    assert conot(ds(AB, "p")) == ds(AB, "q")
    assert cosubtract_bruteforce(top(AB), ds(AB, "p")) == ds(AB, "q")
    assert conot(top(AB)) == bottom(AB)
    assert conot(bottom(AB)) == top(AB)


def test_boundary_examples():
    assert boundary(ds(C2, "0")) == ds(C2, "0")
    assert boundary(top(C2)) == bottom(C2)
    assert boundary(ds(AB, "p")) == bottom(AB)


def test_leibniz_examples():
    rep = check_leibniz_boundary(C2)
    assert rep.passed and rep.samples == 9
    rep = check_leibniz_boundary(AB)
    assert rep.passed and rep.samples == 16


def test_linearity_counterexamples():
    a, b = find_linearity_counterexample(C2)
    assert (a, b) == (ds(C2, "0"), top(C2))
    assert boundary(a | b) == bottom(C2) and boundary(a) | boundary(b) == ds(C2, "0")
    assert find_linearity_counterexample(chain(1)) is None
    # on a discrete poset every down-set is complemented, so the boundary vanishes
    assert find_linearity_counterexample(AB) is None


@settings(max_examples=60)
@given(posets)
def test_exhaustive_properties(p):
    assert check_adjointness(p).passed
    assert check_cosubtract_oracle(p).passed
    assert check_leibniz_boundary(p).passed
    carrier = downsets(p)
    for x, y in itertools.product(carrier, repeat=2):
        assert x | conot(x) == top(p)
        if x <= y:
            assert conot(y) <= conot(x)


@settings(max_examples=30)
@given(posets)
def test_downset_rig_is_maximally_nontaut(p):
    inst = downset_rig(p)
    assert rigcore.find_self_similar(inst) == list(inst.finite_carrier)
    assert all(r.passed for r in rigcore.check_rig_laws(inst, 1))
    reps = {r.law: r for r in rigcore.check_derivation_laws(inst, boundary_derivation(), 1)}
    assert reps["leibniz"].passed and reps["d-zero"].passed
    assert reps["linearity"].status == rigcore.NOT_CLAIMED
    assert rigcore.derivation_unit_report(inst, boundary_derivation()).passed


def test_downset_rig_linearity_counterexample_on_chain():
    inst = downset_rig(C2)
    reps = {r.law: r for r in rigcore.check_derivation_laws(inst, boundary_derivation(), 1)}
    lin = reps["linearity"]
    assert lin.witness == (ds(C2, "0"), top(C2))
    assert not lin.blocking


def test_parse_poset():
    p = parse_poset("elements: a b c\n\na < b\nb < c\n")
    assert p.leq(0, 2)
    assert parse_poset("elements: x y\n").size == 2
    for bad in ["a < b", "elements: a\na < z", "elements: a b\na b"]:
        with pytest.raises(PosetError):
            parse_poset(bad)
