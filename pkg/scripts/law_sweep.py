"""Run the rig and derivation law suites for every registered instance over several seeds."""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from diffrig import rigcore
from diffrig.registry import lookup


@dataclass
class SweepConfig:
    instances: list[str] = field(
        default_factory=lambda: ["nat", "cardinal", "bool", "langwindow", "cardseq", "poly-nat", "downsets:data/diamond.poset"]
    )
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2, 3, 4])
    samples: int = 500


def sweep(cfg: SweepConfig) -> dict[str, tuple[int, int]]:
    """Per instance: (reports checked, reports blocking)."""
    out = {}
    for name in cfg.instances:
        reg = lookup(name)
        total = blocking = 0
        for seed in cfg.seeds:
            reps = rigcore.check_rig_laws(reg.inst, cfg.samples, seed, reg.exhaustive)
            for der in reg.derivations:
                reps += rigcore.check_derivation_laws(reg.inst, der, cfg.samples, seed, reg.exhaustive)
                reps.append(rigcore.derivation_unit_report(reg.inst, der))
            total += len(reps)
            blocking += sum(r.blocking for r in reps)
        out[name] = (total, blocking)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--seeds", type=int, default=5)
    a = ap.parse_args()
    cfg = SweepConfig(seeds=list(range(a.seeds)), samples=a.samples)
    for name, (total, blocking) in sweep(cfg).items():
        print(f"{name:<32} reports={total:<5} blocking={blocking}")


if __name__ == "__main__":
    main()
