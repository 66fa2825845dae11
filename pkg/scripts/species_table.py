"""Print cardinality sequences, brute-force counts and EGFs for a few standard species."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from diffrig.species import chi_egf, count_structures, parse_species, render_series, seq_of


@dataclass
class TableConfig:
    n: int = 8
    oracle_max: int = 6
    exprs: tuple[str, ...] = (
        "E", "X*X", "E o (X*X)", "E o (X*E)", "E*E", "(X*X*X)'", "E o (X*E')", "1 + X*E'",
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=8)
    cfg = TableConfig(n=ap.parse_args().n)
    for text in cfg.exprs:
        f = parse_species(text)
        s = seq_of(f, cfg.n)
        brute = [count_structures(f, k) for k in range(min(cfg.n, cfg.oracle_max) + 1)]
        agree = list(s.coeffs[: len(brute)]) == brute
        print(f"{text:<18} {str(s):<40} oracle {'agrees' if agree else 'DISAGREES'}")
        print(f"{'':<18} {render_series(chi_egf(f, min(cfg.n, 5)))}")


if __name__ == "__main__":
    main()
