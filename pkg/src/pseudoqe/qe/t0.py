"""Quantifier elimination for the L0 theory (order, Z, S, P, pi, c1..c4).

One existential at a time, innermost first:

1. split on x in Z / x not in Z and collapse every x-term accordingly;
2. split off the finitely many points where an S/P shift on x (or on pi(x))
   wraps around, and move the shifts onto the other side of each atom;
3. in the non-Z branch, trade pi(x) atoms for comparisons of x itself;
4. bring the residue to disjunctive form over x-literals, substitute equalities,
   and close the remaining bound systems (least Z point above the lower bounds
   in the Z branch, co-density off Z).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..syntax import (
    And, Atom, C1, C4, Exists, FLIP, FALSE, Formula, Implies, InZ, LanguageError, NEGATE,
    Not, Or, PI, S, TRUE, Term, Var, atom, conj, contains_var, disj, formula_has_var,
    freshen, in_z, map_atoms, map_terms, neg, norm_term, shift, simplify, split_term,
    substitute,
)


# ---------------------------------------------------------------- term collapse


def collapse_sp_pi(t: Term, in_z_case: bool) -> Term:
    """Collapse an S/P/pi word on a variable under x in Z or x not in Z."""
    word, base = split_term(t)
    if any(w in ("f", "g") for w in word):
        raise LanguageError("collapse_sp_pi: f/g in word; normalize germs first")
    if in_z_case:
        d = sum(1 if w == "S" else -1 if w == "P" else 0 for w in word)
        return shift(base, d)
    if "pi" not in word:
        return base
    last = len(word) - 1 - word[::-1].index("pi")
    d = sum(1 if w == "S" else -1 if w == "P" else 0 for w in word[:last])
    return shift(PI(base), d)


def _x_shift(t: Term, x: str) -> Tuple[int, bool]:
    """For a collapsed x-term S^d(x) or S^d(pi(x)): (d, has_pi)."""
    word, _ = split_term(t)
    has_pi = bool(word) and word[-1] == "pi"
    d = sum(1 if w == "S" else -1 if w == "P" else 0 for w in word)
    return d, has_pi


def _x_terms(phi: Formula, x: str) -> List[Term]:
    from ..syntax import all_terms
    return [t for t in all_terms(phi) if contains_var(t, x)]


def _exceptional_points(D: int) -> List[Term]:
    """Z points within D-1 steps of either end: S^i(c1), P^i(c4) for i < D."""
    pts = []
    for i in range(D):
        pts += [shift(C1, i), shift(C4, -i)]
    return list(dict.fromkeys(pts))


def _middle(w: Term, D: int) -> Formula:
    """w lies at least D steps from both ends of Z."""
    if D == 0:
        return TRUE
    return conj([atom(shift(C1, D - 1), "<", w), atom(w, "<", shift(C4, -(D - 1)))])


# ---------------------------------------------------------------- atom rules


def _by_basic(op: str, rule) -> Formula:
    """Express a comparison through rules for <, >, = only."""
    if op in ("<", ">", "="):
        return rule(op)
    if op == "<=":
        return disj([rule("<"), rule("=")])
    if op == ">=":
        return disj([rule(">"), rule("=")])
    return neg(rule("="))


def shift_atom(w: Term, d: int, op: str, t: Term) -> Formula:
    """S^d(w) op t for a Z point w at least |d| steps from both ends of Z."""
    if d == 0:
        return atom(w, op, t)

    def rule(o):
        if d > 0:
            if o == "=":
                return conj([in_z(t), atom(w, "=", shift(t, -d))])
            if o == "<":
                g = shift(PI(t), -1)
                gd = shift(g, -d)
                return disj([atom(C4, "<", t), conj([atom(C1, "<", t), atom(gd, "<", g), atom(w, "<=", gd)])])
            h = norm_term(PI(S(t)))
            hd = shift(h, -d)
            return conj([atom(t, "<", C4), disj([atom(h, "<", hd), atom(hd, "<=", w)])])
        m = -d
        if o == "=":
            return conj([in_z(t), atom(w, "=", shift(t, m))])
        if o == "<":
            g = shift(PI(t), -1)
            gm = shift(g, m)
            return disj([atom(C4, "<", t), conj([atom(C1, "<", t), disj([atom(gm, "<", g), atom(w, "<=", gm)])])])
        h = norm_term(PI(S(t)))
        hm = shift(h, m)
        return conj([atom(t, "<", C4), atom(h, "<", hm), atom(hm, "<=", w)])

    return _by_basic(op, rule)


def pi_atom(x: Term, op: str, a: Term) -> Formula:
    """pi(x) op a for x outside Z, as comparisons of x."""

    def rule(o):
        if o == "=":
            return conj([
                in_z(a),
                disj([
                    conj([atom(a, "=", C1), disj([atom(x, "<", C1), atom(C4, "<", x)])]),
                    conj([atom(C1, "<", a), atom(shift(a, -1), "<", x), atom(x, "<", a)]),
                ]),
            ])
        if o == "<":
            return conj([atom(C1, "<", a), disj([atom(C4, "<", x), atom(x, "<", shift(PI(a), -1))])])
        return disj([
            conj([atom(x, "<", C4), atom(a, "<", C4),
                  disj([atom(a, "<", C1), atom(shift(PI(S(a)), -1), "<", x)])]),
            conj([atom(C4, "<", x), atom(a, "<", C1)]),
        ])

    return _by_basic(op, rule)


def _int_cmp(a: int, op: str, b: int) -> Formula:
    ok = {"<": a < b, ">": a > b, "=": a == b, "<=": a <= b, ">=": a >= b, "!=": a != b}[op]
    return TRUE if ok else FALSE


def pi_shift_vs_x(a: int, op: str, x: Term) -> Formula:
    """S^a(pi(x)) op x for x outside Z with pi(x) in the middle of Z."""

    def rule(o):
        if o == "=":
            return FALSE
        if o == ">":
            return atom(x, "<", C4) if a >= 0 else FALSE
        return atom(C4, "<", x) if a >= 0 else TRUE

    return _by_basic(op, rule)


# ---------------------------------------------------------------- bound solving


@dataclass
class Case:
    """One disjunct of an elimination: guard, and how to build a witness."""

    kind: str  # "eq", "z", "nz", "eps", "free"
    guard: Formula
    term: Optional[Term] = None
    lowers: List[Tuple[bool, Term]] = field(default_factory=list)  # (strict, t)
    uppers: List[Tuple[bool, Term]] = field(default_factory=list)
    bounds: List[Term] = field(default_factory=list)  # "eps": every compared term


def _orient(a: Atom, x: str) -> Tuple[str, Term]:
    """x op t form of an x-literal whose x-side is the bare variable."""
    if isinstance(a.lhs, Var) and a.lhs.name == x:
        return a.op, a.rhs
    return FLIP[a.op], a.lhs


class DNFTooLarge(RuntimeError):
    pass


DNF_LIMIT = 48


def _dnf(phi: Formula, x: str, positive: bool = True):
    """Disjunctive form with x-free subformulas kept opaque.

    Returns a list of (opaque parts, x-literals as (op, t)).
    """
    if not formula_has_var(phi, x):
        return [([phi if positive else neg(phi)], [])]
    if isinstance(phi, Atom):
        op, t = _orient(phi, x)
        if not positive:
            op = NEGATE[op]
        if op == "!=":
            return [([], [("<", t)]), ([], [(">", t)])]
        return [([], [(op, t)])]
    if isinstance(phi, InZ):
        raise AssertionError("Z atoms on x should have been resolved by the branch split")
    if isinstance(phi, Not):
        return _dnf(phi.body, x, not positive)
    if isinstance(phi, Implies):
        return _dnf(Or((Not(phi.lhs), phi.rhs)), x, positive)
    is_and = isinstance(phi, And) == positive
    parts = [_dnf(a, x, positive) for a in phi.args]
    if not is_and:
        return [c for p in parts for c in p]
    out = [([], [])]
    for p in parts:
        out = [(o1 + o2, l1 + l2) for o1, l1 in out for o2, l2 in p]
        if len(out) > DNF_LIMIT:
            raise DNFTooLarge(f"disjunctive form exceeds {DNF_LIMIT} conjuncts")
    return out


def _pair_nz(l: Tuple[bool, Term], u: Tuple[bool, Term]) -> Formula:
    (ls, lt), (us, ut) = l, u
    if ls or us:
        return atom(lt, "<", ut)
    return disj([atom(lt, "<", ut), conj([atom(lt, "=", ut), neg(in_z(lt))])])


def _bound_terms(phi: Formula, x: str) -> List[Term]:
    from ..syntax import atoms
    out = []
    for a in atoms(phi):
        if isinstance(a, Atom) and formula_has_var(a, x):
            out.append(_orient(a, x)[1])
    return list(dict.fromkeys(out))


_EPS = {"<": True, "<=": True, ">": False, ">=": False}


def _at_eps(phi: Formula, x: str, t: Optional[Term]) -> Formula:
    """phi with x read as a point just above t (t None: below everything)."""

    def sub(a):
        if not (isinstance(a, Atom) and formula_has_var(a, x)):
            return a
        op, s = _orient(a, x)
        if op == "=":
            return FALSE
        if op == "!=":
            return TRUE
        if t is None:
            return TRUE if op in ("<", "<=") else FALSE
        return atom(t, "<", s) if _EPS[op] else atom(t, ">=", s)

    return map_atoms(phi, sub)


def test_points(x: str, phi: Formula, z_case: bool, guard: Formula = TRUE) -> List[Case]:
    """Elimination by finitely many test points; no disjunctive form needed.

    Z branch: the least satisfying Z point of any satisfying block is c1 or the
    least Z point above / at one of the compared terms. Off Z: a term itself, a
    point just above a term, or a point below all terms.
    """
    ts = _bound_terms(phi, x)
    cases: List[Case] = []
    if z_case:
        pts = [C1] + [p for t in ts for p in (norm_term(PI(S(t))), norm_term(PI(t)))]
        for e in dict.fromkeys(pts):
            g = simplify(conj([guard, substitute(phi, x, e)]))
            if g != FALSE:
                cases.append(Case("eq", g, term=e))
        return cases
    g = simplify(conj([guard, _at_eps(phi, x, None)]))
    if g != FALSE:
        cases.append(Case("eps", g, term=None, bounds=ts))
    for t in ts:
        g = simplify(conj([guard, neg(in_z(t)), substitute(phi, x, t)]))
        if g != FALSE:
            cases.append(Case("eq", g, term=t))
        g = simplify(conj([guard, _at_eps(phi, x, t)]))
        if g != FALSE:
            cases.append(Case("eps", g, term=t, bounds=ts))
    return cases


def solve_bounds(x: str, phi: Formula, z_case: bool, guard: Formula = TRUE) -> List[Case]:
    """Eliminate x from a formula whose x-atoms all compare the bare x to a term."""
    cases: List[Case] = []
    phi = simplify(phi)
    if phi == FALSE:
        return cases
    try:
        dnf = _dnf(phi, x)
    except DNFTooLarge:
        return test_points(x, phi, z_case, guard)
    for opaque, lits in dnf:
        base = conj([guard] + opaque)
        if base == FALSE:
            continue
        eqs = [t for op, t in lits if op == "="]
        if eqs:
            t0 = eqs[0]
            zc = in_z(t0) if z_case else neg(in_z(t0))
            rest = [atom(t0, op, t) for op, t in lits]
            g = conj([base, zc] + rest)
            if g != FALSE:
                cases.append(Case("eq", g, term=t0))
            continue
        lowers = [(op == ">", t) for op, t in lits if op in (">", ">=")]
        uppers = [(op == "<", t) for op, t in lits if op in ("<", "<=")]
        if z_case:
            parts = [atom(t, "<" if st else "<=", C4) for st, t in lowers]
            starts = [norm_term(PI(S(t))) if st else norm_term(PI(t)) for st, t in lowers] or [C1]
            parts += [atom(a, "<" if us else "<=", u) for a in starts for us, u in uppers]
        else:
            parts = [_pair_nz(l, u) for l in lowers for u in uppers]
        g = conj([base] + parts)
        if g != FALSE:
            cases.append(Case("z" if z_case else "nz", g, lowers=lowers, uppers=uppers))
    return cases


# ---------------------------------------------------------------- the two branches


def _z_branch(x: str, phi: Formula) -> List[Case]:
    xv = Var(x)

    def collapse(a):
        if isinstance(a, InZ):
            return TRUE if contains_var(a.term, x) else a
        l = collapse_sp_pi(a.lhs, True) if contains_var(a.lhs, x) else a.lhs
        r = collapse_sp_pi(a.rhs, True) if contains_var(a.rhs, x) else a.rhs
        return atom(l, a.op, r)

    phi = simplify(map_atoms(phi, collapse))
    D = max((abs(_x_shift(t, x)[0]) for t in _x_terms(phi, x)), default=0)
    cases: List[Case] = []
    for e in _exceptional_points(D):
        g = simplify(substitute(phi, x, e))
        if g != FALSE:
            cases.append(Case("eq", g, term=e))

    def unshift(a):
        if isinstance(a, InZ):
            return a
        lx, rx = contains_var(a.lhs, x), contains_var(a.rhs, x)
        if lx and rx:
            return _int_cmp(_x_shift(a.lhs, x)[0], a.op, _x_shift(a.rhs, x)[0])
        if rx:
            return unshift(Atom(a.rhs, FLIP[a.op], a.lhs))
        if lx:
            return shift_atom(xv, _x_shift(a.lhs, x)[0], a.op, a.rhs)
        return a

    mid = conj([_middle(xv, D), map_atoms(phi, unshift)])
    return cases + solve_bounds(x, mid, True)


def _nz_branch(x: str, phi: Formula) -> List[Case]:
    xv = Var(x)
    px = PI(xv)

    def collapse(a):
        if isinstance(a, InZ):
            if contains_var(a.term, x):
                return TRUE if "pi" in split_term(a.term)[0] else FALSE
            return a
        l = collapse_sp_pi(a.lhs, False) if contains_var(a.lhs, x) else a.lhs
        r = collapse_sp_pi(a.rhs, False) if contains_var(a.rhs, x) else a.rhs
        return atom(l, a.op, r)

    phi = simplify(map_atoms(phi, collapse))
    pi_shifts = [_x_shift(t, x)[0] for t in _x_terms(phi, x) if _x_shift(t, x)[1]]
    D = max((abs(d) for d in pi_shifts), default=0)

    def depi(a):
        """Atoms on pi(x) (no shift left) become comparisons of x."""
        if isinstance(a, InZ):
            return a
        if a.lhs == px and not contains_var(a.rhs, x):
            return pi_atom(xv, a.op, a.rhs)
        if a.rhs == px and not contains_var(a.lhs, x):
            return pi_atom(xv, FLIP[a.op], a.lhs)
        return a

    cases: List[Case] = []
    for e in _exceptional_points(D):

        def at_e(t, e=e):
            if contains_var(t, x) and _x_shift(t, x)[1]:
                return shift(e, _x_shift(t, x)[0])
            return t

        g = conj([pi_atom(xv, "=", e), simplify(map_terms(phi, at_e))])
        cases += solve_bounds(x, g, False)

    def unshift(a):
        if isinstance(a, InZ):
            return a
        lx, rx = contains_var(a.lhs, x), contains_var(a.rhs, x)
        if not (lx or rx):
            return a
        if rx and not lx:
            return unshift(Atom(a.rhs, FLIP[a.op], a.lhs))
        dl, pl = _x_shift(a.lhs, x)
        if rx:
            dr, pr = _x_shift(a.rhs, x)
            if pl and pr:
                return _int_cmp(dl, a.op, dr)
            if pl:
                return pi_shift_vs_x(dl, a.op, xv)
            if pr:
                return pi_shift_vs_x(dr, FLIP[a.op], xv)
            return a
        if pl:
            return depi_formula(shift_atom(px, dl, a.op, a.rhs))
        return a

    def depi_formula(f):
        return map_atoms(f, depi)

    body = conj([depi_formula(_middle(px, D)), map_atoms(phi, unshift)])
    return cases + solve_bounds(x, body, False)


def eliminate(x: str, phi: Formula) -> List[Case]:
    """Cases whose guards' disjunction is equivalent to E x. phi."""
    phi = simplify(phi)
    if not formula_has_var(phi, x):
        return [Case("free", phi)] if phi != FALSE else []
    return _z_branch(x, phi) + _nz_branch(x, phi)


def elim_exists(x: str, phi: Formula) -> Formula:
    return simplify(disj(c.guard for c in eliminate(x, phi)))


def _check_l0(phi: Formula) -> None:
    from ..syntax import all_terms
    for t in all_terms(phi):
        if any(w in ("f", "g") for w in split_term(t)[0]):
            raise LanguageError(f"qe_t0: f/g occurs in {t}; use theory t2")


def qe_t0(phi: Formula) -> Formula:
    """Equivalent quantifier-free formula, eliminating innermost quantifiers first."""
    _check_l0(phi)
    return simplify(qe_with(freshen(phi), elim_exists))


def qe_with(phi: Formula, elim) -> Formula:
    if isinstance(phi, (Atom, InZ)):
        return phi
    if isinstance(phi, Not):
        return neg(qe_with(phi.body, elim))
    if isinstance(phi, And):
        return conj(qe_with(a, elim) for a in phi.args)
    if isinstance(phi, Or):
        return disj(qe_with(a, elim) for a in phi.args)
    if isinstance(phi, Implies):
        return disj([neg(qe_with(phi.lhs, elim)), qe_with(phi.rhs, elim)])
    body = qe_with(phi.body, elim)
    if isinstance(phi, Exists):
        return elim(phi.var, body)
    return neg(elim(phi.var, neg(body)))
