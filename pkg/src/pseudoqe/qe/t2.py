"""Quantifier elimination for the surgery theory (L0 plus f, g).

For a bound variable x the quantifier-free matrix is first x-corrected (every
x-term becomes f^n or g^n over S^m over at most one pi), then atoms of maximal
rank are rewritten one at a time until no x-term carries f or g. What is left
is an L0 formula in x whose other terms are opaque parameters, and the L0
eliminator finishes the job.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from ..syntax import (
    NEG_INF, App, Atom, C1, C2, C3, C4, Formula, InZ, P, PI, TRUE, FALSE, Term,
    Var, all_terms, all_vars, apply_word, atom, atom_rank, atoms, conj, contains_var, deg,
    disj, fold_ground, fresh_name, freshen, germ_normalize, has_fg, in_phi_sigma_pi, in_z, is_quantifier_free, map_atoms,
    map_terms, neg, norm_term, propagate, rank, replace_term,
    shift, simplify, split_term,
)
from .t0 import (
    Case, FLIP, _exceptional_points, _int_cmp, _middle, collapse_sp_pi,
    eliminate, pi_shift_vs_x, qe_with,
)
from .trace import RewriteTrace, TraceEntry


class RankDescentError(RuntimeError):
    """A rewrite failed to lower the rank; this is a defect, not a user error."""


class AlreadyLowRank(ValueError):
    pass


LOW = (NEG_INF, 0)


# ---------------------------------------------------------------- small builders


def lt(a, b):
    return atom(a, "<", b)


def le(a, b):
    return disj([atom(a, "<", b), atom(a, "=", b)])


def ne(a, b):
    return neg(atom(a, "=", b))


def by_basic(op: str, rule) -> Formula:
    if op in ("<", ">", "="):
        return rule(op)
    if op == "<=":
        return disj([rule("<"), rule("=")])
    if op == ">=":
        return disj([rule(">"), rule("=")])
    return disj([rule("<"), rule(">")])


def expand_ops(phi: Formula) -> Formula:
    """Rewrite <=, >=, != through <, >, =."""

    def fix(a):
        if isinstance(a, Atom) and a.op not in ("<", ">", "="):
            return by_basic(a.op, lambda o: atom(a.lhs, o, a.rhs))
        return a

    return map_atoms(phi, fix)


def power(sym: str, n: int, t: Term) -> Term:
    for _ in range(n):
        t = App(sym, t)
    return t


# ---------------------------------------------------------------- exception sets


def exception_terms(word: Sequence[str]) -> List[Term]:
    """Constants off which only finitely many Z points lie between x and word(x).

    A long jump can only happen at a step landing on c1 or c4; what the outer
    part of the word then does to that endpoint is the whole list.
    """
    out = []
    for j in range(len(word)):
        for c in (C1, C4):
            out.append(norm_term(apply_word(word[:j], c)))
    return list(dict.fromkeys(out))


# ---------------------------------------------------------------- x-correction


def _first_bad(a: Atom, x: str) -> Optional[Term]:
    for t in (a.lhs, a.rhs):
        if contains_var(t, x) and not in_phi_sigma_pi(split_term(t)[0]):
            return t
    return None


def correct_atom(a: Formula, x: str) -> Formula:
    """One correction pass on one atom (may leave other terms for the next pass)."""
    if isinstance(a, InZ):
        if not contains_var(a.term, x):
            return a
        word, base = split_term(a.term)
        if "pi" in word:
            return TRUE
        return in_z(base) if word else a
    t = _first_bad(a, x)
    if t is None:
        return a
    word, base = split_term(t)
    if "pi" in word:
        i = word.index("pi")
        outer, inner = word[:i], word[i + 1:]
        if inner:
            # x in Z: the inner part stays in Z and pi is the identity;
            # x outside Z: the inner part is the identity.
            tz = norm_term(apply_word(outer + inner, base))
            tn = norm_term(apply_word(outer + ("pi",), base))
            return disj([
                conj([in_z(base), replace_term(a, t, tz)]),
                conj([neg(in_z(base)), replace_term(a, t, tn)]),
            ])
        arg = PI(base)
    else:
        outer, arg = word, base
    g = germ_normalize(outer)
    new = norm_term(apply_word(g.word, arg))
    exc = list(g.exception_terms)
    main = conj([ne(arg, e) for e in exc] + [replace_term(a, t, new)])
    alts = [conj([atom(arg, "=", e), replace_term(a, t, norm_term(apply_word(outer, e)))]) for e in exc]
    return disj([main] + alts)


def is_corrected(phi: Formula, x: str) -> bool:
    for a in atoms(phi):
        if isinstance(a, InZ):
            if contains_var(a.term, x) and split_term(a.term)[0]:
                return False
        elif _first_bad(a, x) is not None:
            return False
    return True


def correct_x(phi: Formula, x: str, _memo: Optional[dict] = None) -> Formula:
    """Equivalent formula whose x-terms all have the shape f^n/g^n, S^m/P^m, pi?."""
    memo = {} if _memo is None else _memo

    def fix(a):
        if a not in memo:
            out = correct_atom(a, x)
            memo[a] = a if out == a else correct_x(out, x, memo)
        return memo[a]

    return propagate(fold_ground(map_atoms(simplify(phi), fix)))


# ---------------------------------------------------------------- the rules


def _z_in(h, lo, hi, lo_strict=False, hi_strict=False) -> Formula:
    return conj([
        in_z(h),
        lt(lo, h) if lo_strict else le(lo, h),
        lt(h, hi) if hi_strict else le(h, hi),
    ])


def _y_in(y, lo, hi, lo_strict=False, hi_strict=False) -> Formula:
    return conj([
        lt(lo, y) if lo_strict else le(lo, y),
        lt(y, hi) if hi_strict else le(y, hi),
    ])


def elimination_matrix(fn: str, h: Term, op: str, y: Term) -> Formula:
    """fn(h) op y for y in Z, with fn moved off h (f or g).

    f maps Z n [c1,c2] onto Z n [c3,c4] and Z n (c2,c4] onto Z n [c1,P(c3)),
    both order-preservingly with inverse g; g sends P(c3) to c1; both are the
    identity off Z.
    """
    pc3 = P(C3)

    def rule(o):
        if fn == "f":
            return disj([
                conj([neg(in_z(h)), atom(h, o, y)]),
                conj([_z_in(h, C1, C2), _y_in(y, C3, C4), atom(h, o, G_(y))]),
                conj([_z_in(h, C1, C2), neg(_y_in(y, C3, C4)), atom(C3, o, y)]),
                conj([_z_in(h, C2, C4, lo_strict=True), _y_in(y, C1, pc3, hi_strict=True), atom(h, o, G_(y))]),
                conj([_z_in(h, C2, C4, lo_strict=True), neg(_y_in(y, C1, pc3, hi_strict=True)), atom(C1, o, y)]),
            ])
        return disj([
            conj([neg(in_z(h)), atom(h, o, y)]),
            conj([_z_in(h, C3, C4), _y_in(y, C1, C2), atom(h, o, F_(y))]),
            conj([_z_in(h, C3, C4), neg(_y_in(y, C1, C2)), atom(C1, o, y)]),
            conj([_z_in(h, C1, pc3, hi_strict=True), _y_in(y, C2, C4, lo_strict=True), atom(h, o, F_(y))]),
            conj([_z_in(h, C1, pc3, hi_strict=True), neg(_y_in(y, C2, C4, lo_strict=True)), atom(C4, o, y)]),
            conj([atom(h, "=", pc3), atom(C1, o, y)]),
        ])

    return by_basic(op, rule)


def F_(t):
    return norm_term(App("f", t))


def G_(t):
    return norm_term(App("g", t))


def trivial_outside_z(fn: str, h: Term, op: str, tau: Term) -> Formula:
    """fn(h) op tau when h is not in Z: f and g fix h."""
    return atom(h, op, tau)


def reduce_y_in_z(fn: str, h: Term, op: str, tau: Term) -> Formula:
    """fn(h) op tau for h in Z and tau outside Z, via the Z neighbours of tau."""

    def rule(o):
        if o == "=":
            return FALSE
        if o == ">":
            a = norm_term(PI(tau))
            return conj([lt(tau, C4), disj([elimination_matrix(fn, h, ">", a), elimination_matrix(fn, h, "=", a)])])
        b = shift(PI(tau), -1)
        return conj([lt(C1, tau), disj([elimination_matrix(fn, h, "<", b), elimination_matrix(fn, h, "=", b)])])

    return by_basic(op, rule)


def step_fg_outer(fn: str, h: Term, op: str, tau: Term) -> Formula:
    """fn(h) op tau without fn on h: split on tau in Z, then on h in Z."""
    return disj([
        conj([in_z(tau), elimination_matrix(fn, h, op, tau)]),
        conj([neg(in_z(tau)), neg(in_z(h)), trivial_outside_z(fn, h, op, tau)]),
        conj([neg(in_z(tau)), in_z(h), reduce_y_in_z(fn, h, op, tau)]),
    ])


def onetype(fn: str, n: int, z: Term, op: str) -> Formula:
    """fn^n(z) op z for z in Z and n >= 1.

    f^n(z) < z iff f^i(z) > c2 for every i < n; f^n(z) never equals z.
    For g, write z = f^n(g^n(z)) off the finitely many points where that fails.
    """
    if fn == "f":

        def rule(o):
            below = conj([lt(C2, norm_term(power("f", i, z))) for i in range(n)])
            if o == "<":
                return below
            if o == ">":
                return neg(below)
            return FALSE

        return by_basic(op, rule)
    w = norm_term(power("g", n, z))
    exc = list(germ_normalize(("f",) * n + ("g",) * n).exception_terms)
    main = conj([ne(z, e) for e in exc] + [onetype("f", n, w, FLIP[op])])
    alts = [conj([atom(z, "=", e), atom(norm_term(power("g", n, e)), op, e)]) for e in exc]
    return disj([main] + alts)


def f_much_more(fn: str, n: int, psi2: Term, op: str, psi1: Term, x: str) -> Formula:
    """fn^n(psi2) op psi1 with psi1, psi2 in Sigma-Pi on the same variable.

    Away from finitely many constants psi1 and psi2 are finitely many Z points
    apart, while fn^n moves a Z point infinitely far: only psi2 matters.
    """
    big = norm_term(power(fn, n, psi2))
    taus = list(dict.fromkeys(
        exception_terms(split_term(psi1)[0]) + exception_terms(split_term(psi2)[0])
    ))
    rows = [
        conj([neg(in_z(psi2)), atom(psi2, op, psi1)]),
        conj([in_z(psi2)] + [ne(psi2, t) for t in taus] + [ne(psi1, t) for t in taus]
             + [atom(big, op, psi2)]),
    ]
    rows += [conj([atom(psi2, "=", t), atom(norm_term(power(fn, n, t)), op, psi1)]) for t in taus]
    rows += [conj([atom(psi1, "=", t), atom(big, op, t)]) for t in taus]
    return disj(rows)


def step_rank_0k(fn: str, n: int, psi2: Term, op: str, psi1: Term, x: str) -> Formula:
    """f_much_more, then onetype on its single remaining high atom."""
    big = norm_term(power(fn, n, psi2))
    phi = f_much_more(fn, n, psi2, op, psi1, x)
    return map_atoms(phi, lambda a: onetype(fn, n, psi2, a.op)
                     if isinstance(a, Atom) and a.lhs == big and a.rhs == psi2 else a)


def step_rank_00(psi1: Term, op: str, psi2: Term, x: str) -> Formula:
    """psi1(x) op psi2(x) for S/P/pi words: only comparisons of x with constants remain."""
    xv = Var(x)
    a, b = collapse_sp_pi(psi1, True), collapse_sp_pi(psi2, True)
    da, db = _shift_of(a), _shift_of(b)
    D = max(abs(da), abs(db))
    zpart = disj(
        [conj([atom(xv, "=", e), atom(shift(e, da), op, shift(e, db))]) for e in _exceptional_points(D)]
        + [conj([expand_ops(_middle(xv, D)), _int_cmp(da, op, db)])]
    )
    a, b = collapse_sp_pi(psi1, False), collapse_sp_pi(psi2, False)
    pa, pb = _has_pi(a), _has_pi(b)
    if not (pa or pb):
        npart = atom(a, op, b)
    else:
        da, db = _shift_of(a), _shift_of(b)
        D = max(abs(da) if pa else 0, abs(db) if pb else 0)
        px = PI(xv)

        def at(t, e):
            return shift(e, _shift_of(t)) if _has_pi(t) else t

        alts = [conj([atom(px, "=", e), atom(at(a, e), op, at(b, e))]) for e in _exceptional_points(D)]
        if pa and pb:
            mid = _int_cmp(da, op, db)
        elif pa:
            mid = pi_shift_vs_x(da, op, xv)
        else:
            mid = pi_shift_vs_x(db, FLIP[op], xv)
        npart = disj(alts + [conj([expand_ops(_middle(px, D)), expand_ops(mid)])])
    return disj([conj([in_z(xv), zpart]), conj([neg(in_z(xv)), npart])])


def _shift_of(t: Term) -> int:
    return sum(1 if w == "S" else -1 if w == "P" else 0 for w in split_term(t)[0])


def _has_pi(t: Term) -> bool:
    return "pi" in split_term(t)[0]


# ---------------------------------------------------------------- rank steps


ANCHORS = {
    "fg-preserve-Z": "f(x) and g(x) are in Z iff x is",
    "rank(-inf,n+1)": "case matrix for f/g against a Z point, identity off Z, Z neighbours of a non-Z point",
    "rank(n+1,k)": "freeze the higher side as a parameter, apply the (-inf,n+1) step, substitute back",
    "rank(0,k+1)": "f^n moves Z points infinitely far; f^n(z)<z iff all f^i(z)>c2",
    "rank(0,0)": "S/P/pi words on x reduce to comparisons of x with constants",
}


def rewrite_rank_step(theta: Formula, x: str) -> Tuple[Formula, str]:
    """Equivalent formula of strictly smaller rank for one x-corrected atom."""
    r = atom_rank(theta, x)
    if r <= LOW:
        raise AlreadyLowRank(f"rank of {theta} is already at most (-inf,0)")
    if isinstance(theta, InZ):
        word, base = split_term(theta.term)
        # f and g keep Z and its complement; a pi anywhere makes the term Z-valued
        return in_z(apply_word(tuple(w for w in word if w not in ("f", "g")), base)), "fg-preserve-Z"
    a: Atom = theta
    lx, rx = contains_var(a.lhs, x), contains_var(a.rhs, x)
    if not (lx and rx):
        t, op, tau = (a.lhs, a.op, a.rhs) if lx else (a.rhs, FLIP[a.op], a.lhs)
        return step_fg_outer(split_term(t)[0][0], t.arg, op, tau), "rank(-inf,n+1)"
    dl, dr = deg(split_term(a.lhs)[0]), deg(split_term(a.rhs)[0])
    t, op, other = (a.lhs, a.op, a.rhs) if dl <= dr else (a.rhs, FLIP[a.op], a.lhs)
    lo = min(dl, dr)
    if lo >= 1:
        return step_fg_outer(split_term(t)[0][0], t.arg, op, other), "rank(n+1,k)"
    if r[1] >= 1:
        word, base = split_term(other)
        fn = word[0]
        n = sum(1 for w in word if w in ("f", "g"))
        psi2 = apply_word(word[n:], base)
        return step_rank_0k(fn, n, psi2, FLIP[op], t, x), "rank(0,k+1)"
    return step_rank_00(a.lhs, a.op, a.rhs, x), "rank(0,0)"


def reduce_to_low_rank(phi: Formula, x: str, trace: Optional[RewriteTrace] = None) -> Formula:
    """x-corrected equivalent of rank at most (-inf,0).

    Every rewrite is local to one atom, so atoms are reduced one at a time,
    depth first in formula order, and shared atoms are reduced once.
    """
    if not is_quantifier_free(phi):
        raise ValueError("reduce_to_low_rank needs a quantifier-free formula")
    memo: Dict[Formula, Formula] = {}
    cmemo: dict = {}

    def low(a):
        if a in memo:
            return memo[a]
        r = atom_rank(a, x)
        if r <= LOW:
            memo[a] = a
            return a
        out, rule = rewrite_rank_step(a, x)
        out = correct_x(expand_ops(out), x, cmemo)
        r_after = rank(out, x)
        if trace is not None:
            trace.add(TraceEntry(rule, ANCHORS[rule], a, out, r, r_after))
        if not r_after < r:
            raise RankDescentError(f"{rule} on {a} did not lower rank")
        memo[a] = simplify(map_atoms(out, low))
        return memo[a]

    phi = correct_x(expand_ops(phi), x, cmemo)
    return propagate(simplify(map_atoms(phi, low)))


# ---------------------------------------------------------------- elimination


def _abstract(phi: Formula, x: str) -> Tuple[Formula, Dict[str, Term]]:
    """Replace each x-free term carrying f or g by a fresh parameter variable."""
    taken = set(all_vars(phi)) | {x}
    params: Dict[Term, str] = {}

    def fn(t):
        if contains_var(t, x) or not has_fg(t):
            return t
        if t not in params:
            name = fresh_name("p", taken)
            taken.add(name)
            params[t] = name
        return Var(params[t])

    return map_terms(phi, fn), {v: t for t, v in params.items()}


def _restore(phi: Formula, back: Dict[str, Term]) -> Formula:
    if not back:
        return phi
    return propagate(fold_ground(map_terms(phi, lambda t: _restore_term(t, back))))


def _restore_term(t: Optional[Term], back: Dict[str, Term]) -> Optional[Term]:
    if t is None:
        return None
    word, base = split_term(t)
    if isinstance(base, Var) and base.name in back:
        return norm_term(apply_word(word, back[base.name]))
    return t


def cases_t2(x: str, matrix: Formula, trace: Optional[RewriteTrace] = None) -> List[Case]:
    """Elimination cases for E x. matrix, matrix quantifier-free over L1."""
    low = reduce_to_low_rank(matrix, x, trace)
    l0, back = _abstract(low, x)
    out = []
    for c in eliminate(x, l0):
        out.append(Case(
            c.kind, _restore(c.guard, back), _restore_term(c.term, back),
            [(s, _restore_term(t, back)) for s, t in c.lowers],
            [(s, _restore_term(t, back)) for s, t in c.uppers],
            [_restore_term(t, back) for t in c.bounds],
        ))
    return out


def elim_exists_t2(x: str, matrix: Formula, trace: Optional[RewriteTrace] = None) -> Formula:
    return simplify(disj(c.guard for c in cases_t2(x, matrix, trace)))


def qe_t2(phi: Formula, trace: Optional[RewriteTrace] = None) -> Formula:
    """Equivalent quantifier-free L1 formula (valid in the surgery model)."""
    return simplify(qe_with(expand_ops(freshen(phi)), lambda v, body: elim_exists_t2(v, body, trace)))


def t2_cases(x: str, body: Formula) -> Tuple[Formula, List[Case]]:
    """(quantifier-free matrix, cases) for witness extraction."""
    matrix = body if is_quantifier_free(body) else qe_t2(body)
    return matrix, cases_t2(x, matrix)


def project_one_var_check(psi: Formula, x: str) -> bool:
    """No x-term of psi carries f or g."""
    return not any(has_fg(t) for t in all_terms(psi) if contains_var(t, x))


def project_one_var(phi: Formula, x: str) -> Formula:
    """Eliminate the quantifiers of phi(x), then push f and g off x."""
    return propagate(reduce_to_low_rank(qe_t2(phi), x))
