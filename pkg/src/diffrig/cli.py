"""Command-line entry point.

Exit codes: 0 on success, 1 when a checked law fails (the counterexample is
printed), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Sequence

from . import langrig, lattice, polyrig, rigcore, species
from .registry import INSTANCE_NAMES, UnknownInstance, lookup
from .rigcore import LawReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _globals(defaults: bool) -> argparse.ArgumentParser:
    # leaf parsers use SUPPRESS so a flag given before the subcommand survives
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    g = _Parser(add_help=False)
    g.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    g.add_argument("--seed", type=int, default=d(0), help="random seed (default 0)")
    g.add_argument("--samples", type=int, default=d(None), help="samples / cases per check")
    g.add_argument("--maxlen", type=int, default=d(8), help="language window length (default 8)")
    return g


def build_parser() -> argparse.ArgumentParser:
    leaf = [_globals(False)]
    root = _Parser(prog="diffrig", description="Rigs with derivations: law checks and models.", parents=[_globals(True)])
    sub = root.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("laws", parents=leaf, help="run rig and derivation law checks on an instance")
    p.add_argument("instance", help="one of: " + ", ".join(INSTANCE_NAMES))

    rx = sub.add_parser("regex", help="regular expressions and Brzozowski derivatives")
    rxs = rx.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = rxs.add_parser("match", parents=leaf, help="match a word against a pattern")
    p.add_argument("pattern")
    p.add_argument("word")
    p = rxs.add_parser("derive", parents=leaf, help="print the canonical derivative by a word")
    p.add_argument("pattern")
    p.add_argument("word")
    p = rxs.add_parser("dfa", parents=leaf, help="print the derivative-class DFA")
    p.add_argument("pattern")
    p.add_argument("--state-cap", type=int, default=langrig.STATE_CAP)
    rxs.add_parser("leibniz", parents=leaf, help="sweep twisted Leibniz and linearity on random regexes")

    sp = sub.add_parser("species", help="species cardinality sequences")
    sps = sp.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = sps.add_parser("seq", parents=leaf, help="cardinality sequence up to N")
    p.add_argument("expr")
    p.add_argument("--n", type=int, default=8)
    p = sps.add_parser("count", parents=leaf, help="brute-force structure count")
    p.add_argument("expr")
    p.add_argument("--size", type=int, required=True)
    p = sps.add_parser("egf", parents=leaf, help="exponential generating series up to N")
    p.add_argument("expr")
    p.add_argument("--n", type=int, default=6)
    p = sps.add_parser("check", parents=leaf, help="sweep a derivative identity on random species")
    p.add_argument("rule", choices=["chain", "power", "leibniz", "tuple"])
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--n", type=int, default=10)

    po = sub.add_parser("poly", help="polynomials over a base rig")
    pos = po.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name, hlp in (("derive", "derivative with dY = 1"), ("eval", "evaluate at a point")):
        p = pos.add_parser(name, parents=leaf, help=hlp)
        p.add_argument("coeffs", help="comma-separated coefficients, constant term first")
        p.add_argument("--base", choices=["nat", "cardinal"], default="nat")
        if name == "eval":
            p.add_argument("--at", required=True)

    dp = sub.add_parser("dpoly", help="differential polynomials")
    dps = dp.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = dps.add_parser("derive", parents=leaf, help="derivative sending Y(i) to Y(i+1)")
    p.add_argument("expr")

    de = sub.add_parser("dpe", help="differential-polynomial equations")
    des = de.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = des.add_parser("check", parents=leaf, help="check a candidate sequence solves X = dp(X, X', ...)")
    p.add_argument("expr")
    p.add_argument("--candidate", required=True, help="comma-separated cardinality sequence")
    p.add_argument("--n", type=int, default=None, help="check up to this index")

    la = sub.add_parser("lattice", help="co-Heyting boundaries on down-set lattices")
    las = la.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = las.add_parser("boundary", parents=leaf, help="boundary of the down-set generated by --set")
    p.add_argument("--poset", required=True)
    p.add_argument("--set", required=True, dest="elements")
    for name, hlp in (("leibniz", "exhaustive Leibniz check"), ("linearity", "search for a linearity failure")):
        p = las.add_parser(name, parents=leaf, help=hlp)
        p.add_argument("--poset", required=True)
    return root


# --------------------------------------------------------------------------


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []

    def text(self, s: str):
        self.lines.append(s)

    def value(self, text: str, payload):
        if self.as_json:
            self.lines.append(json.dumps({"schema": 1, "result": payload}, ensure_ascii=False))
        else:
            self.lines.append(text)

    def reports(self, reports: Sequence[LawReport], header: Sequence[str] = ()) -> int:
        if self.as_json:
            self.lines.append(rigcore.reports_to_json(reports))
        else:
            self.lines.extend(header)
            self.lines.extend(r.render_line() for r in reports)
        return EXIT_FAIL if any(r.blocking for r in reports) else EXIT_OK


def _word(text: str) -> tuple:
    return () if text in ("", "()") else tuple(text)


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _cmd_laws(a, out: _Out) -> int:
    try:
        reg = lookup(a.instance)
    except UnknownInstance:
        raise UsageError(f"unknown instance {a.instance!r}; expected one of {', '.join(INSTANCE_NAMES)}")
    except (OSError, lattice.PosetError) as e:
        raise UsageError(str(e))
    inst = reg.inst
    n = a.samples or rigcore.DEFAULT_SAMPLES
    reports = rigcore.check_rig_laws(inst, n, a.seed, reg.exhaustive)
    for der in reg.derivations:
        reports += rigcore.check_derivation_laws(inst, der, n, a.seed, reg.exhaustive)
        reports.append(rigcore.derivation_unit_report(inst, der))
    header = [f"instance: {inst.name}"]
    if inst.finite_carrier is not None:
        ss = rigcore.find_self_similar(inst)
        taut = rigcore.is_taut(inst)
        shown = ", ".join(inst.render(x) for x in ss[:8]) + (", ..." if len(ss) > 8 else "")
        header.append(f"self-similar: {len(ss)} of {len(inst.finite_carrier)} [{shown}]  taut: {str(taut).lower()}")
    if reg.dimension is not None:
        reports.append(rigcore.is_taut_via_dimension(inst, reg.dimension, min(n, 200), a.seed))
    return out.reports(reports, header)


def _cmd_regex(a, out: _Out) -> int:
    if a.sub == "leibniz":
        return _regex_sweep(a, out)
    try:
        r = langrig.parse_regex(a.pattern)
    except langrig.RegexSyntaxError as e:
        raise UsageError(str(e))
    if a.sub == "match":
        w = _word(a.word)
        if any(c not in langrig.DEFAULT_ALPHABET for c in w):
            raise UsageError(f"word {a.word!r} uses symbols outside the alphabet")
        res = langrig.matches(r, w)
        out.value(str(res).lower(), res)
    elif a.sub == "derive":
        d = langrig.to_text(langrig.deriv_word(r, _word(a.word)))
        out.value(d, d)
    else:
        try:
            dfa = langrig.build_dfa(r, state_cap=a.state_cap)
        except langrig.CapExceeded as e:
            out.text(f"error: {e}")
            return EXIT_FAIL
        payload = {
            "states": [langrig.to_text(q) for q in dfa.states],
            "accepting": sorted(dfa.accepting),
            "delta": {f"{i},{c}": j for (i, c), j in sorted(dfa.delta.items())},
        }
        out.value(dfa.table(), payload)
    return EXIT_OK


def _regex_sweep(a, out: _Out) -> int:
    n = a.samples or 200
    rng = random.Random(a.seed)
    worst = {}
    untwisted_ce = None
    count = {"twisted-leibniz": 0, "linearity": 0}
    for _ in range(n):
        r = langrig.random_regex(rng, 5)
        s = langrig.random_regex(rng, 5)
        c = rng.choice(langrig.DEFAULT_ALPHABET)
        for rep in (langrig.check_twisted_leibniz(r, s, c, a.maxlen), langrig.check_linearity(r, s, c, a.maxlen)):
            count[rep.law] += 1
            if not rep.passed and rep.law not in worst:
                worst[rep.law] = rep
        if untwisted_ce is None:
            u = langrig.check_untwisted_leibniz(r, s, c, a.maxlen)
            if not u.passed:
                untwisted_ce = u
    reports = [worst.get(k) or LawReport(k, True, v) for k, v in count.items()]
    if untwisted_ce is not None:
        note = LawReport("untwisted-leibniz", False, n, untwisted_ce.counterexample, rigcore.NOT_CLAIMED,
                         note="expected: the twist is needed")
    else:
        note = LawReport("untwisted-leibniz", True, n, status=rigcore.NOT_CLAIMED, note="no counterexample found")
    return out.reports(reports + [note])


def _species_expr(text: str) -> species.Species:
    try:
        return species.parse_species(text)
    except species.SpeciesSyntaxError as e:
        raise UsageError(str(e))


def _cmd_species(a, out: _Out) -> int:
    if a.sub == "check":
        return _species_sweep(a, out)
    f = _species_expr(a.expr)
    try:
        if a.sub == "seq":
            s = species.seq_of(f, a.n)
            out.value(str(s), list(s.coeffs))
        elif a.sub == "count":
            c = species.count_structures(f, a.size)
            out.value(str(c), c)
        else:
            coeffs = species.chi_egf(f, a.n)
            out.value(species.render_series(coeffs), [_frac(q) for q in coeffs])
    except species.CompositionUndefined as e:
        raise UsageError(str(e))
    except species.CapExceeded as e:
        raise UsageError(str(e))
    return EXIT_OK


def _species_sweep(a, out: _Out) -> int:
    rng = random.Random(a.seed)
    cases = a.samples or a.cases
    reports = []
    for _ in range(cases):
        if a.rule == "chain":
            rep = species.check_chain_rule(species.random_species(rng, 3), species.random_vanishing(rng, 3), a.n)
        elif a.rule == "power":
            rep = species.check_power_rule(species.random_species(rng, 3), rng.randint(1, 5), a.n)
        elif a.rule == "tuple":
            fs = [species.random_species(rng, 3) for _ in range(rng.randint(1, 4))]
            rep = species.check_tuple_rule(fs, a.n)
        else:
            f, g = species.random_species(rng, 3), species.random_species(rng, 3)
            rep = species.check_nfold_leibniz(f, g, rng.randint(0, 3), a.n)
        reports.append(rep)
    failed = [r for r in reports if not r.passed]
    summary = LawReport(reports[0].law if reports else a.rule, not failed, len(reports),
                        failed[0].counterexample if failed else None,
                        rigcore.FAIL if failed else rigcore.PASS)
    return out.reports([summary])


def _base(name: str):
    if name == "nat":
        return rigcore.nat_rig(), int
    inst = rigcore.cardinal_rig()

    def coeff(t: str):
        return rigcore.OMEGA if t in ("w", "ω", "omega") else int(t)

    return inst, coeff


def _cmd_poly(a, out: _Out) -> int:
    base, coeff = _base(a.base)
    try:
        p = polyrig.parse_poly(a.coeffs, base, coeff)
        at = coeff(a.at) if a.sub == "eval" else None
    except ValueError as e:
        raise UsageError(str(e))
    if a.sub == "derive":
        d = polyrig.poly_derive(p)
        out.value(str(d), [base.render(c) for c in d.coeffs])
    else:
        v = polyrig.poly_eval(p, lambda c: c, base, at)
        out.value(base.render(v), base.render(v))
    return EXIT_OK


def _cmd_dpoly(a, out: _Out) -> int:
    base = rigcore.nat_rig()
    try:
        dp = polyrig.parse_diffpoly(a.expr, base)
    except ValueError as e:
        raise UsageError(str(e))
    d = polyrig.diffpoly_derive(dp)
    out.value(str(d), str(d))
    return EXIT_OK


def _cmd_dpe(a, out: _Out) -> int:
    base = rigcore.nat_rig()
    try:
        dp = polyrig.parse_diffpoly(a.expr, base)
        cand = species.CardSeq.of([int(t) for t in a.candidate.split(",") if t.strip()])
    except ValueError as e:
        raise UsageError(str(e))
    n = a.n if a.n is not None else cand.truncation - max(dp.max_order, 0)
    try:
        rep = polyrig.dpe_check_solution(dp, cand, n)
    except polyrig.InsufficientTruncation as e:
        raise UsageError(str(e))
    return out.reports([rep])


def _cmd_lattice(a, out: _Out) -> int:
    try:
        p = lattice.read_poset(a.poset)
        if a.sub == "boundary":
            x = lattice.downset(p, [t.strip() for t in a.elements.split(",") if t.strip()])
    except (OSError, lattice.PosetError) as e:
        raise UsageError(str(e))
    if a.sub == "boundary":
        b = lattice.boundary(x)
        out.value(str(b), b.members())
        return EXIT_OK
    if a.sub == "leibniz":
        return out.reports([lattice.check_leibniz_boundary(p)])
    ce = lattice.find_linearity_counterexample(p)
    if ce is None:
        return out.reports([LawReport("linearity", True, len(lattice.downsets(p)) ** 2)])
    x, y = ce
    rep = LawReport("linearity", False, 1, (str(x), str(y)), rigcore.FAIL, witness=ce,
                    note=f"d(a v b) = {lattice.boundary(x | y)}, d(a) v d(b) = {lattice.boundary(x) | lattice.boundary(y)}")
    return out.reports([rep])


HANDLERS = {
    "laws": _cmd_laws,
    "regex": _cmd_regex,
    "species": _cmd_species,
    "poly": _cmd_poly,
    "dpoly": _cmd_dpoly,
    "dpe": _cmd_dpe,
    "lattice": _cmd_lattice,
}


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run a command; returns ``(exit_code, stdout_text, stderr_text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        out = _Out(args.json)
        code = HANDLERS[args.cmd](args, out)
    except UsageError as e:
        return EXIT_USAGE, "", f"{e}\n"
    except SystemExit as e:  # --help
        return int(e.code or 0), "", ""
    text = "\n".join(out.lines)
    return code, (text + "\n") if text else "", ""


def main(argv: Sequence[str] | None = None) -> int:
    code, stdout, stderr = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(stdout)
    sys.stderr.write(stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
