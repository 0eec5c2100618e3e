"""Per-rule soundness checks on the symbolic surgery model.

Each named rule gets a generator of random instances: the atom the rule
rewrites, the rule's output, and the side condition under which the rule
claims equivalence. Assignments are drawn from sampled points, tail points,
the constants, and the values of every constant term in the instance (which
covers all exception-term values).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from ..models.evaluate import eval_qf, eval_term
from ..models.symbolic import SymbolicModel, sample_point, tail_points
from ..syntax import (
    And, App, Atom, Const, CONSTS, Formula, InZ, Not, TRUE, Term, Var, all_terms,
    apply_word, free_vars, germ_normalize, render, term_vars,
)
from .t2 import (
    correct_x, elimination_matrix, exception_terms, f_much_more, onetype, power,
    reduce_y_in_z, rewrite_rank_step, step_fg_outer, step_rank_00, step_rank_0k,
    trivial_outside_z,
)

X, Y = "x", "y"
BASIC = ("<", ">", "=")
ALL_OPS = ("<", ">", "=", "<=", ">=", "!=")


@dataclass
class Instance:
    before: Formula
    after: Formula
    pre: Formula = TRUE


@dataclass
class RuleResult:
    rule: str
    instances: int = 0
    assignments: int = 0
    mismatches: int = 0
    example: Optional[str] = None
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        tail = f"  e.g. {self.example}" if self.example else ""
        return (f"{self.rule:<22} {verdict}  {self.instances} instances, "
                f"{self.assignments} assignments, {self.mismatches} mismatches{tail}")


# ---------------------------------------------------------------- random pieces


def _base(rng, variables) -> Term:
    if variables and rng.random() < 0.75:
        return Var(rng.choice(variables))
    return Const(rng.choice(CONSTS))


def rand_term(rng, variables=(X, Y), max_len=3, fns=("S", "P", "pi", "f", "g")) -> Term:
    word = tuple(rng.choice(fns) for _ in range(rng.randint(0, max_len)))
    return apply_word(word, _base(rng, list(variables)))


def sigma_pi(rng, x=X) -> Term:
    """S^m or P^m over an optional pi, on x."""
    m = rng.randint(0, 2)
    word = (rng.choice("SP"),) * m
    if rng.random() < 0.5:
        word += ("pi",)
    return apply_word(word, Var(x))


def _fn(rng) -> str:
    return rng.choice("fg")


# ---------------------------------------------------------------- instances


def _elimination(rng):
    fn, h, op, y = _fn(rng), rand_term(rng), rng.choice(ALL_OPS), rand_term(rng)
    return Instance(Atom(App(fn, h), op, y), elimination_matrix(fn, h, op, y), InZ(y))


def _trivial(rng):
    fn, h, op, tau = _fn(rng), rand_term(rng), rng.choice(ALL_OPS), rand_term(rng)
    return Instance(Atom(App(fn, h), op, tau), trivial_outside_z(fn, h, op, tau), Not(InZ(h)))


def _reduce_y(rng):
    fn, h, op, tau = _fn(rng), rand_term(rng), rng.choice(ALL_OPS), rand_term(rng)
    return Instance(Atom(App(fn, h), op, tau), reduce_y_in_z(fn, h, op, tau),
                    And((InZ(h), Not(InZ(tau)))))


def _outer(rng):
    fn, h, op, tau = _fn(rng), rand_term(rng), rng.choice(ALL_OPS), rand_term(rng)
    return Instance(Atom(App(fn, h), op, tau), step_fg_outer(fn, h, op, tau))


def _onetype(rng):
    fn, n, op = _fn(rng), rng.randint(1, 3), rng.choice(ALL_OPS)
    z = sigma_pi(rng) if rng.random() < 0.7 else rand_term(rng, fns=("S", "P", "pi"))
    return Instance(Atom(power(fn, n, z), op, z), onetype(fn, n, z, op), InZ(z))


def _much_more(rng):
    fn, n, op = _fn(rng), rng.randint(1, 3), rng.choice(BASIC)
    psi1, psi2 = sigma_pi(rng), sigma_pi(rng)
    return Instance(Atom(power(fn, n, psi2), op, psi1), f_much_more(fn, n, psi2, op, psi1, X))


def _rank_0k(rng):
    fn, n, op = _fn(rng), rng.randint(1, 3), rng.choice(BASIC)
    psi1, psi2 = sigma_pi(rng), sigma_pi(rng)
    return Instance(Atom(power(fn, n, psi2), op, psi1), step_rank_0k(fn, n, psi2, op, psi1, X))


def _rank_00(rng):
    op = rng.choice(BASIC)
    psi1, psi2 = sigma_pi(rng), sigma_pi(rng)
    return Instance(Atom(psi1, op, psi2), step_rank_00(psi1, op, psi2, X))


def _via_dispatch(make_atom):
    def gen(rng):
        a = make_atom(rng)
        out, _ = rewrite_rank_step(a, X)
        return Instance(a, out)
    return gen


def _fg_sp(rng, fn=None, lo=1):
    return power(fn or _fn(rng), rng.randint(lo, 2), sigma_pi(rng))


def _atom_n1k(rng):
    return Atom(_fg_sp(rng), rng.choice(BASIC), _fg_sp(rng))


def _atom_ninf(rng):
    t, c = _fg_sp(rng), rand_term(rng, variables=(Y,))
    return Atom(t, rng.choice(BASIC), c) if rng.random() < 0.5 else Atom(c, rng.choice(BASIC), t)


def _atom_zfg(rng):
    return InZ(_fg_sp(rng))


def _correct(rng):
    a = Atom(rand_term(rng, variables=(X,), max_len=4), rng.choice(ALL_OPS), rand_term(rng))
    if rng.random() < 0.2:
        a = InZ(rand_term(rng, variables=(X,), max_len=4))
    return Instance(a, correct_x(a, X))


def _germ(rng):
    word = tuple(rng.choice(("f", "g", "S", "P")) for _ in range(rng.randint(1, 4)))
    g = germ_normalize(word)
    x = Var(X)
    pre = And(tuple(Not(Atom(x, "=", e)) for e in g.exception_terms) + (TRUE,))
    return Instance(Atom(apply_word(word, x), "=", apply_word(g.word, x)), TRUE, pre)


GENERATORS: Dict[str, Callable] = {
    "elimination_matrix": _elimination,
    "reduce_y_in_z": _reduce_y,
    "trivial_outside_z": _trivial,
    "f_much_more": _much_more,
    "onetype": _onetype,
    "step_fg_outer": _outer,
    "rank(-inf,n+1)": _via_dispatch(_atom_ninf),
    "rank(n+1,k)": _via_dispatch(_atom_n1k),
    "rank(0,k+1)": _rank_0k,
    "rank(0,0)": _rank_00,
    "fg-preserve-Z": _via_dispatch(_atom_zfg),
    "correct_x": _correct,
    "germ_normalize": _germ,
}

# ---------------------------------------------------------------- running


def _values(s, phi: Formula) -> List[object]:
    out = []
    for t in all_terms(phi):
        if not term_vars(t):
            v = eval_term(s, t, {})
            out += [v, s.apply_fn("S", v), s.apply_fn("P", v)]
    return out


def check_rule(name: str, samples: int = 1000, seed: int = 0, per_instance: int = 25,
               s=None) -> RuleResult:
    """Compare before/after on at least `samples` assignments that meet the side condition."""
    s = s or SymbolicModel("M2")
    rng = random.Random(f"{name}:{seed}")
    gen = GENERATORS[name]
    res = RuleResult(name)
    base_pool = tail_points(4) + list(s.constants())
    while res.assignments < samples:
        inst = gen(rng)
        res.instances += 1
        names = sorted(free_vars(inst.before) | free_vars(inst.after) | free_vars(inst.pre) | {X})
        pool = base_pool + _values(s, inst.before) + _values(s, inst.after) + _values(s, inst.pre)
        got, tries = 0, 0
        while got < per_instance and tries < per_instance * 10:
            tries += 1
            asg = {v: rng.choice(pool) if rng.random() < 0.5 else sample_point(rng) for v in names}
            if not eval_qf(s, inst.pre, asg):
                continue
            got += 1
            if eval_qf(s, inst.before, asg) != eval_qf(s, inst.after, asg):
                res.mismatches += 1
                if res.example is None:
                    res.example = (f"{render(inst.before)} at "
                                   + ", ".join(f"{k}={v}" for k, v in asg.items()))
        res.assignments += got
    return res


def check_exception_terms(samples: int = 1000, seed: int = 0, s=None) -> RuleResult:
    """Off the exception values of F(x), only finitely many Z points lie between x and F(x)."""
    s = s or SymbolicModel("M2")
    rng = random.Random(f"exception_terms:{seed}")
    res = RuleResult("exception_terms")
    pool = tail_points(4) + list(s.constants())
    while res.assignments < samples:
        word = tuple(rng.choice(("S", "P", "pi")) for _ in range(rng.randint(1, 3)))
        exc = {s.key(eval_term(s, t, {})) for t in exception_terms(word)}
        res.instances += 1
        for _ in range(25):
            x = rng.choice(pool) if rng.random() < 0.5 else sample_point(rng)
            fx = s.apply_word(word, x)
            if s.key(fx) in exc:
                continue
            res.assignments += 1
            lo, hi = (x, fx) if s.lt(x, fx) else (fx, x)
            # "finitely many" becomes "at most one per letter" on this model
            if not s.eq(lo, hi) and s.z_between_count(lo, hi, 64) > len(word):
                res.mismatches += 1
                res.example = res.example or f"{''.join(word)} at x={x}"
    return res


def run_rules(samples: int = 1000, seed: int = 0, names=None) -> List[RuleResult]:
    s = SymbolicModel("M2")
    out = [check_rule(n, samples, seed, s=s) for n in (names or GENERATORS)]
    if names is None or "exception_terms" in names:
        out.append(check_exception_terms(samples, seed, s))
    return out
