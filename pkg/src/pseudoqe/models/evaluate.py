"""Evaluators: terms, quantifier-free formulas, brute force on finite models,
and candidate-based search on the symbolic model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional

from ..syntax import (
    And, Atom, Exists, Formula, Implies, InZ, Not, Or, Term, Var, all_terms, apply_word,
    free_vars, is_quantifier_free, split_term,
)
from .base import ModelError, Structure
from .compile import SlotMap, compile_formula
from .kernel import get_kernel


class UnassignedVariable(ModelError):
    pass


def eval_term(s: Structure, t: Term, asg: Mapping[str, object]):
    word, base = split_term(t)
    if isinstance(base, Var):
        try:
            v = asg[base.name]
        except KeyError:
            raise UnassignedVariable(f"variable {base.name!r} is unassigned") from None
    else:
        v = s.const(base.name)
    for sym in reversed(word):
        v = s.apply_fn(sym, v)
    return v


def _compare(s: Structure, op: str, a, b) -> bool:
    ka, kb = s.key(a), s.key(b)
    if op == "<":
        return ka < kb
    if op == ">":
        return ka > kb
    if op == "=":
        return ka == kb
    if op == "<=":
        return ka <= kb
    if op == ">=":
        return ka >= kb
    return ka != kb


def eval_qf(s: Structure, phi: Formula, asg: Mapping[str, object]) -> bool:
    if isinstance(phi, Atom):
        return _compare(s, phi.op, eval_term(s, phi.lhs, asg), eval_term(s, phi.rhs, asg))
    if isinstance(phi, InZ):
        return s.in_z(eval_term(s, phi.term, asg))
    if isinstance(phi, Not):
        return not eval_qf(s, phi.body, asg)
    if isinstance(phi, And):
        return all(eval_qf(s, a, asg) for a in phi.args)
    if isinstance(phi, Or):
        return any(eval_qf(s, a, asg) for a in phi.args)
    if isinstance(phi, Implies):
        return (not eval_qf(s, phi.lhs, asg)) or eval_qf(s, phi.rhs, asg)
    raise ModelError("eval_qf needs a quantifier-free formula")


def brute_eval(s, phi: Formula, asg: Mapping[str, object], kernel: str = "auto") -> bool:
    """Exact truth in a finite model by quantifying over representative points."""
    if not getattr(s, "finite", False):
        raise ModelError("brute_eval needs a finite model")
    fv = sorted(free_vars(phi))
    missing = [v for v in fv if v not in asg]
    if missing:
        raise UnassignedVariable(f"unassigned variables: {', '.join(missing)}")
    slots = SlotMap()
    for v in fv:
        slots.slot(v)
    code = compile_formula(phi, s, slots)
    enc = s.encode_points({v: asg[v] for v in fv})
    vec = [0] * max(len(slots), 1)
    for v in fv:
        vec[slots[v]] = enc[v]
    k = get_kernel(kernel)
    return k.eval_formula(code.nodes, code.terms, code.root, vec, [slots[v] for v in fv], s.kernel_params())


# ---------------------------------------------------------------- symbolic search


@dataclass(frozen=True)
class TrueWithWitness:
    point: Optional[object]

    def __bool__(self):
        return True


@dataclass(frozen=True)
class FalseNoCandidate:
    def __bool__(self):
        return False


def _closure(s: Structure, values: Iterable, steps: int = 3) -> List:
    out = []
    for v in values:
        out.append(v)
        up = down = v
        for _ in range(steps):
            up = s.apply_fn("S", up)
            down = s.apply_fn("P", down)
            out += [up, down]
    more = []
    for v in out:
        try:
            more.append(s.apply_fn("pi", v))
        except ModelError:
            pass
        if s.has_fg:
            more += [s.apply_fn("f", v), s.apply_fn("g", v)]
    return out + more


def candidates(s: Structure, phi: Formula, asg: Mapping[str, object]) -> List:
    """Candidate values for a variable bound at the top of phi."""
    from .symbolic import H, H0, ZP  # local to keep the finite path import-light

    seeds = list(s.constants())
    for t in all_terms(phi):
        word, base = split_term(t)
        if isinstance(base, Var) and base.name not in asg:
            continue
        for i in range(len(word) + 1):
            try:
                seeds.append(eval_term(s, _suffix(word[i:], base), asg))
            except ModelError:
                pass
    vals = _closure(s, dict.fromkeys(seeds))
    if not s.finite:
        vals += [ZP(H0, H(m)) for m in range(4)] + [ZP(H(1), H(m)) for m in range(4)]
    uniq = sorted({s.key(v): v for v in vals}.items())
    pts = [v for _, v in uniq]
    extra = [s.pick_nonz_below(pts[0]), s.pick_nonz_above(pts[-1])]
    for a, b in zip(pts, pts[1:]):
        extra.append(s.pick_nonz_between(a, b))
    return pts + extra


def _suffix(word, base):
    return apply_word(word, base)


def _cand_eval(s, phi, asg) -> bool:
    if isinstance(phi, (Atom, InZ)):
        return eval_qf(s, phi, asg)
    if isinstance(phi, Not):
        return not _cand_eval(s, phi.body, asg)
    if isinstance(phi, And):
        return all(_cand_eval(s, a, asg) for a in phi.args)
    if isinstance(phi, Or):
        return any(_cand_eval(s, a, asg) for a in phi.args)
    if isinstance(phi, Implies):
        return (not _cand_eval(s, phi.lhs, asg)) or _cand_eval(s, phi.rhs, asg)
    want = isinstance(phi, Exists)
    for c in candidates(s, phi.body, asg):
        if _cand_eval(s, phi.body, {**asg, phi.var: c}) == want:
            return want
    return not want


def candidate_eval(s: Structure, phi: Formula, asg: Mapping[str, object]):
    """Search a finite candidate set; a witness is verified, a miss is not a proof."""
    if isinstance(phi, Exists):
        for c in candidates(s, phi.body, asg):
            if _cand_eval(s, phi.body, {**asg, phi.var: c}):
                return TrueWithWitness(c)
        return FalseNoCandidate()
    return TrueWithWitness(None) if _cand_eval(s, phi, asg) else FalseNoCandidate()


def evaluate(s: Structure, phi: Formula, asg: Mapping[str, object]) -> bool:
    """Quantifier-free: exact; finite model: brute force; otherwise candidate search."""
    if is_quantifier_free(phi):
        return eval_qf(s, phi, asg)
    if getattr(s, "finite", False):
        return brute_eval(s, phi, asg)
    return bool(candidate_eval(s, phi, asg))


def pick_nonZ_between(s: Structure, a, b):
    return s.pick_nonz_between(a, b)


def z_close_decide(s, p, q) -> bool:
    return s.z_close_decide(p, q)
