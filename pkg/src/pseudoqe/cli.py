"""Command line for the eliminators and the check suites.

Exit codes: 0 ok, 1 a mismatch or failed check, 2 bad usage or unparsable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .corpus import CorpusConfig, gen_corpus
from .models import ModelError, parse_model_spec
from .models.axioms import check_axioms
from .models.evaluate import UnassignedVariable, brute_eval, eval_qf
from .qe import RewriteTrace, qe_t0, qe_t2
from .syntax import LanguageError, ParseError, free_vars, is_quantifier_free, parse, render

OK, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _out(text: str = "") -> None:
    print(text, flush=True)


def _assignment(s, pairs: Optional[List[str]]) -> dict:
    asg = {}
    for item in pairs or []:
        if "=" not in item:
            raise UsageError(f"assignment {item!r} should look like VAR=point")
        var, lit = item.split("=", 1)
        asg[var.strip()] = s.parse_point(lit)
    return asg


def _eval_any(s, phi, asg, via_qe: bool = False, theory: str = "t2") -> bool:
    missing = sorted(free_vars(phi) - set(asg))
    if missing:
        raise UnassignedVariable(f"unassigned variables: {', '.join(missing)}")
    if is_quantifier_free(phi):
        return eval_qf(s, phi, asg)
    if s.finite and not via_qe:
        return brute_eval(s, phi, asg)
    if not via_qe:
        raise UsageError("quantified formulas on an infinite model need --via-qe")
    q = qe_t0(phi) if theory == "t0" else qe_t2(phi)
    return eval_qf(s, q, asg)


# ---------------------------------------------------------------- commands


def cmd_qe(args) -> int:
    phi = parse(args.formula)
    trace = RewriteTrace() if args.trace else None
    q = qe_t0(phi) if args.theory == "t0" else qe_t2(phi, trace)
    value = None
    if args.eval:
        s = parse_model_spec(args.eval)
        value = eval_qf(s, q, _assignment(s, args.assign))
    if args.json:
        rec = {"input": render(phi), "theory": args.theory, "output": render(q)}
        if trace is not None:
            rec["trace"] = [e.row() for e in trace]
            rec["traceDigest"] = trace.digest()
        if value is not None:
            rec["model"], rec["value"] = args.eval, value
        _out(json.dumps(rec))
        return OK
    _out(render(q))
    if trace is not None:
        for e in trace:
            _out("  " + e.row())
        _out(f"  trace digest {trace.digest()}, {len(trace)} steps")
    if value is not None:
        _out(str(value).lower())
    return OK


def cmd_eval(args) -> int:
    s = parse_model_spec(args.model)
    phi = parse(args.formula)
    val = _eval_any(s, phi, _assignment(s, args.assign), args.via_qe, args.theory)
    if args.json:
        _out(json.dumps({"formula": render(phi), "model": args.model, "value": val}))
    else:
        _out(str(val).lower())
    return OK


def cmd_difftest(args) -> int:
    from .difftest import run
    from .qe.rulecheck import run_rules
    if args.count < 0:
        raise UsageError("--count must be non-negative")
    bad = emitted = 0
    kw = {}
    if args.samples is not None and args.theory == "t2":
        kw["samples"] = args.samples
    for rec in run(args.theory, args.count, args.seed, args.max_quantifiers, **kw):
        bad += rec.status == "mismatch"
        emitted += 1
        _out(rec.to_json() if args.json else
             f"{rec.index:>4} {rec.status:<8} {rec.model:<10} {rec.formula}"
             + (f"  [{rec.detail}]" if rec.status != "pass" else "")
             + (f"  at {rec.mismatch_assignment}" if rec.mismatch_assignment else ""))
    if args.theory == "t2" and args.count > 0 and args.rule_samples > 0:
        for r in run_rules(args.rule_samples, args.seed):
            bad += not r.ok
            emitted += 1
            if args.json:
                _out(json.dumps({"check": f"rule:{r.rule}", "status": "pass" if r.ok else "mismatch",
                                 "assignments": r.assignments, "instances": r.instances,
                                 "seed": args.seed, "model": "inf:m2", "example": r.example}))
            else:
                _out("rule " + r.line())
    if emitted and not args.json:
        _out(f"{bad} mismatches")
    return FAIL if bad else OK


def cmd_pigeonhole(args) -> int:
    from .surgery import pigeonhole_report
    rep = pigeonhole_report(args.samples, args.seed, args.model)
    if args.json:
        _out(json.dumps({"model": rep.model, "seed": rep.seed, "samples": rep.samples,
                         "verdicts": {v.name: v.passed for v in rep.verdicts},
                         "evidence": {v.name: v.evidence for v in rep.verdicts}}))
    else:
        for line in rep.lines():
            _out(line)
    return OK if rep.ok else FAIL


def cmd_axioms(args) -> int:
    s = parse_model_spec(args.model)
    if args.k < 0:
        raise UsageError("-k must be non-negative")
    rep = check_axioms(s, args.k, args.samples, args.seed)
    if args.json:
        for r in rep.results:
            _out(json.dumps({"model": rep.model, "k": rep.k, "axiom": r.label, "passed": r.passed,
                             "expected": r.expected, "checks": r.checked,
                             "counterexample": r.counterexample, "seed": rep.seed}))
    else:
        for line in rep.lines():
            _out(line)
    return OK if rep.ok else FAIL


def cmd_gen(args) -> int:
    cfg = CorpusConfig(lang=args.lang, max_depth=args.max_depth, max_quantifiers=args.max_quantifiers,
                       max_fg=args.max_fg)
    for phi in gen_corpus(args.count, args.seed, cfg):
        _out(json.dumps({"formula": render(phi)}) if args.json else render(phi))
    return OK


def cmd_lemmas(args) -> int:
    from .surgery import cyclic_preservation, far_powers, nested_powers, shift_offset
    results = [
        cyclic_preservation(args.samples, args.seed),
        shift_offset(4, args.samples, args.seed),
        nested_powers(4, args.samples, args.seed, "M1"),
        nested_powers(4, args.samples, args.seed, "M2"),
        far_powers(4, args.samples, args.seed),
    ]
    for r in results:
        _out(json.dumps({"check": r.name, "passed": r.ok, "checks": r.checked,
                         "example": r.example}) if args.json else r.line())
    return OK if all(r.ok for r in results) else FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pseudoqe", description=__doc__.splitlines()[0])
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")

    q = sub.add_parser("qe", help="eliminate quantifiers")
    common(q)
    q.add_argument("formula")
    q.add_argument("--theory", choices=("t0", "t2"), default="t2")
    q.add_argument("--trace", action="store_true", help="print the rank-descent rewrite steps")
    q.add_argument("--eval", metavar="MODEL", help="also evaluate the result in MODEL")
    q.add_argument("-a", "--assign", action="append", metavar="VAR=POINT")
    q.set_defaults(run=cmd_qe)

    e = sub.add_parser("eval", help="evaluate a formula in a model")
    common(e)
    e.add_argument("formula")
    e.add_argument("-m", "--model", required=True, help="finite:N[:M2shift] or inf:m0|m1|m2")
    e.add_argument("-a", "--assign", action="append", metavar="VAR=POINT")
    e.add_argument("--via-qe", action="store_true", help="eliminate quantifiers first")
    e.add_argument("--theory", choices=("t0", "t2"), default="t2")
    e.set_defaults(run=cmd_eval)

    d = sub.add_parser("difftest", help="differential test of an eliminator")
    common(d)
    d.add_argument("--theory", choices=("t0", "t2"), default="t0")
    d.add_argument("--count", type=int, default=100)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--max-quantifiers", type=int, default=None)
    d.add_argument("--samples", type=int, default=None, help="assignments per check (t2)")
    d.add_argument("--rule-samples", type=int, default=1000,
                   help="assignments per rewrite rule in t2 mode (0 to skip)")
    d.set_defaults(run=cmd_difftest)

    ph = sub.add_parser("pigeonhole", help="report on f being injective but not onto Z")
    common(ph)
    ph.add_argument("--samples", type=int, default=10000)
    ph.add_argument("--seed", type=int, default=0)
    ph.add_argument("--model", default=None, help="finite:N for the bijective control only")
    ph.set_defaults(run=cmd_pigeonhole)

    a = sub.add_parser("axioms", help="check axioms 2-14 in a model")
    common(a)
    a.add_argument("-m", "--model", required=True)
    a.add_argument("-k", type=int, default=3)
    a.add_argument("--samples", type=int, default=1000)
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(run=cmd_axioms)

    g = sub.add_parser("gen", help="print a seeded formula corpus")
    common(g)
    g.add_argument("--count", type=int, default=10)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--lang", choices=("l0", "l1"), default="l0")
    g.add_argument("--max-depth", type=int, default=4)
    g.add_argument("--max-quantifiers", type=int, default=3)
    g.add_argument("--max-fg", type=int, default=2)
    g.set_defaults(run=cmd_gen)

    lm = sub.add_parser("lemmas", help="check how the shifted f relates to the plain one")
    common(lm)
    lm.add_argument("--samples", type=int, default=1000)
    lm.add_argument("--seed", type=int, default=0)
    lm.set_defaults(run=cmd_lemmas)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (ParseError, LanguageError, ModelError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
