"""Witnesses for single existentials, read off the elimination cases."""

from __future__ import annotations

from typing import List, Mapping, Optional

from ..models.evaluate import eval_qf, eval_term
from ..syntax import Exists, Formula, has_fg, all_terms, is_quantifier_free
from .t0 import Case, eliminate, qe_t0


class WitnessError(RuntimeError):
    """A case guard held but its witness failed verification."""


def _max(s, vals):
    return max(vals, key=s.key)


def _min(s, vals):
    return min(vals, key=s.key)


def _point(s, case: Case, asg):
    ev = lambda t: eval_term(s, t, asg)  # noqa: E731
    k = case.kind
    if k == "free":
        return s.const("c1")
    if k == "eq":
        return ev(case.term)
    if k == "z":
        starts = []
        for strict, t in case.lowers:
            v = ev(t)
            starts.append(s.apply_fn("pi", s.apply_fn("S", v)) if strict else s.apply_fn("pi", v))
        return _max(s, starts) if starts else s.const("c1")
    if k == "nz":
        lo = _max(s, [ev(t) for _, t in case.lowers]) if case.lowers else None
        hi = _min(s, [ev(t) for _, t in case.uppers]) if case.uppers else None
        if lo is not None and hi is not None:
            if s.key(lo) == s.key(hi):
                return lo
            return s.pick_nonz_between(lo, hi)
        if lo is not None:
            return s.pick_nonz_above(lo)
        if hi is not None:
            return s.pick_nonz_below(hi)
        return s.pick_nonz_above(s.const("c4"))
    # "eps": just above case.term, or below every compared term
    vals = [ev(t) for t in case.bounds]
    if case.term is None:
        return s.pick_nonz_below(_min(s, vals)) if vals else s.pick_nonz_above(s.const("c4"))
    v = ev(case.term)
    ups = [w for w in vals if s.key(w) > s.key(v)]
    return s.pick_nonz_between(v, _min(s, ups)) if ups else s.pick_nonz_above(v)


def witness_from_cases(s, x: str, matrix: Formula, cases: List[Case], asg: Mapping[str, object]):
    """First verified witness among the cases whose guard holds, else None."""
    for case in cases:
        if not eval_qf(s, case.guard, asg):
            continue
        p = _point(s, case, asg)
        if eval_qf(s, matrix, {**asg, x: p}):
            return p
        raise WitnessError(f"guard held but witness {p} fails the matrix")
    return None


def extract_witness(phi: Formula, asg: Mapping[str, object], s) -> Optional[object]:
    """A point satisfying the matrix of E x. phi under asg, or None if there is none."""
    if not isinstance(phi, Exists):
        raise ValueError("extract_witness needs a formula of the form E x. matrix")
    x, body = phi.var, phi.body
    if any(has_fg(t) for t in all_terms(body)):
        from .t2 import t2_cases
        matrix, cases = t2_cases(x, body)
    else:
        matrix = body if is_quantifier_free(body) else qe_t0(body)
        cases = eliminate(x, matrix)
    return witness_from_cases(s, x, matrix, cases, asg)
