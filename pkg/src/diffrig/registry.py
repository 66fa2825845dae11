"""Named rig instances with their derivations, as used by ``diffrig laws``."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import langrig, lattice, polyrig, rigcore, species
from .rigcore import DerivationDescriptor, DimensionHom, RigInstance

INSTANCE_NAMES = ("nat", "cardinal", "bool", "langwindow", "cardseq", "poly-nat", "downsets:<file>")


class UnknownInstance(KeyError):
    pass


@dataclass(frozen=True)
class Registered:
    inst: RigInstance
    derivations: tuple[DerivationDescriptor, ...] = ()
    dimension: DimensionHom | None = None
    exhaustive: bool | None = None
    extra: dict = field(default_factory=dict)


def lookup(name: str) -> Registered:
    if name == "nat":
        inst = rigcore.nat_rig()
        return Registered(inst, (rigcore.trivial_derivation(inst),), rigcore.identity_dimension(), exhaustive=False)
    if name == "cardinal":
        inst = rigcore.cardinal_rig()
        return Registered(inst, (rigcore.trivial_derivation(inst), rigcore.omega_derivation()))
    if name == "bool":
        inst = rigcore.bool_rig()
        return Registered(inst, (rigcore.trivial_derivation(inst), rigcore.identity_derivation()))
    if name == "langwindow":
        inst = langrig.language_rig()
        ders = tuple(langrig.brzozowski_derivation(a) for a in langrig.DEFAULT_ALPHABET)
        return Registered(inst, ders, exhaustive=False)
    if name == "cardseq":
        inst = species.cardseq_rig()
        ders = (rigcore.trivial_derivation(inst), species.shift_derivation())
        return Registered(inst, ders, species.coefficient_sum_dimension(), exhaustive=False)
    if name == "poly-nat":
        inst = polyrig.poly_rig(rigcore.nat_rig())
        return Registered(inst, (polyrig.y_derivation(),))
    if name.startswith("downsets:"):
        path = name.split(":", 1)[1]
        p = lattice.read_poset(path)
        return Registered(lattice.downset_rig(p, name), (lattice.boundary_derivation(),))
    raise UnknownInstance(name)
