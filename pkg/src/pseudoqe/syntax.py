"""Formulas and their syntax: parsing, printing and the measures on x-terms.

Terms are unary words over S, P, pi, f, g applied to a variable or one of the
constants c1..c4. Words are stored outermost-first, so ``("f", "S")`` applied
to ``x`` is the term ``f(S(x))``.
"""

from __future__ import annotations

import functools
import operator
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

FUNCS = ("S", "P", "pi", "f", "g")
CONSTS = ("c1", "c2", "c3", "c4")
OPS = ("<", ">", "=", "<=", ">=", "!=")
RESERVED = set(FUNCS) | set(CONSTS) | {"E", "A", "Z"}

NEG_INF = float("-inf")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class LanguageError(ValueError):
    """A symbol outside the language an operation accepts."""


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    arg: "Term"

    def __str__(self):
        return render_term(self)


Term = Union[Var, Const, App]

C1, C2, C3, C4 = (Const(c) for c in CONSTS)


def split_term(t: Term) -> Tuple[Tuple[str, ...], Term]:
    """Return (word outermost-first, base)."""
    word = []
    while isinstance(t, App):
        word.append(t.fn)
        t = t.arg
    return tuple(word), t


def apply_word(word: Sequence[str], base: Term) -> Term:
    t = base
    for fn in reversed(word):
        t = App(fn, t)
    return t


def S(t):
    return App("S", t)


def P(t):
    return App("P", t)


def PI(t):
    return App("pi", t)


def F(t):
    return App("f", t)


def G(t):
    return App("g", t)


def shift(t: Term, d: int) -> Term:
    """S^d(t) for d >= 0, P^-d(t) otherwise, with S/P cancellation."""
    fn = "S" if d >= 0 else "P"
    for _ in range(abs(d)):
        t = App(fn, t)
    return norm_term(t)


def term_vars(t: Term) -> set:
    _, base = split_term(t)
    return {base.name} if isinstance(base, Var) else set()


def has_fg(t: Term) -> bool:
    word, _ = split_term(t)
    return any(w in ("f", "g") for w in word)


def is_z_valued(t: Term) -> bool:
    """True when the term denotes a Z point in every model (constant base or a pi inside)."""
    word, base = split_term(t)
    return isinstance(base, Const) or "pi" in word


def norm_term(t: Term) -> Term:
    """Cancel adjacent S/P pairs and drop every pi applied to a Z-valued subterm."""
    word, base = split_term(t)
    out: List[str] = []  # innermost-first
    zval = isinstance(base, Const)
    for fn in reversed(word):
        if fn == "pi":
            if zval:
                continue
            zval = True
            out.append(fn)
        elif fn in ("S", "P") and out and out[-1] in ("S", "P") and out[-1] != fn:
            out.pop()
        else:
            out.append(fn)
    return apply_word(tuple(reversed(out)), base)


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Atom:
    lhs: Term
    op: str
    rhs: Term


@dataclass(frozen=True)
class InZ:
    term: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    args: Tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: Tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Atom, InZ, Not, And, Or, Implies, Exists, Forall]


def _cached_hash(self):
    # formulas get large and live in sets; the generated hash would walk the whole tree each time
    try:
        return self.__dict__["_hash"]
    except KeyError:
        h = hash((type(self).__name__,) + tuple(self.__dict__.values()))
        object.__setattr__(self, "_hash", h)
        return h


for _cls in (Var, Const, App, Atom, InZ, Not, And, Or, Implies, Exists, Forall):
    _cls.__hash__ = _cached_hash

TRUE = Atom(C1, "=", C1)
FALSE = Atom(C1, "<", C1)

FLIP = {"<": ">", ">": "<", "=": "=", "<=": ">=", ">=": "<=", "!=": "!="}
NEGATE = {"<": ">=", ">": "<=", "=": "!=", "<=": ">", ">=": "<", "!=": "="}


def conj(args: Iterable[Formula]) -> Formula:
    return simplify_shallow(And(tuple(args)))


def disj(args: Iterable[Formula]) -> Formula:
    return simplify_shallow(Or(tuple(args)))


def neg(phi: Formula) -> Formula:
    if phi == TRUE:
        return FALSE
    if phi == FALSE:
        return TRUE
    if isinstance(phi, Not):
        return phi.body
    return Not(phi)


_INT_OPS = {
    "<": operator.lt, ">": operator.gt, "=": operator.eq,
    "<=": operator.le, ">=": operator.ge, "!=": operator.ne,
}


def atom(lhs: Term, op: str, rhs: Term) -> Formula:
    """Build an atom with normalized terms, folding syntactic identities."""
    lhs, rhs = norm_term(lhs), norm_term(rhs)
    if lhs == rhs:
        return TRUE if op in ("=", "<=", ">=") else FALSE
    if isinstance(lhs, Const) and isinstance(rhs, Const):
        # c1 < c2 < c3 < c4 holds in every model of the theory
        i, j = CONSTS.index(lhs.name), CONSTS.index(rhs.name)
        return TRUE if _INT_OPS[op](i, j) else FALSE
    return Atom(lhs, op, rhs)


def ground_position(t: Term) -> Optional[Tuple[int, int]]:
    """(constant index, S-offset) for an S/P/pi word over a constant, else None.

    Offsets wrap at the ends (S(c4) = c1, P(c1) = c4) and are otherwise kept
    beside their constant, which is exact once infinitely many Z points
    separate the constants.
    """
    word, base = split_term(norm_term(t))
    if not isinstance(base, Const) or any(w not in ("S", "P") for w in word):
        return None
    i = CONSTS.index(base.name)
    d = sum(1 if w == "S" else -1 for w in word)
    if i == 3 and d > 0:
        i, d = 0, d - 1
    elif i == 0 and d < 0:
        i, d = 3, d + 1
    return i, d


def fold_ground(phi: Formula) -> Formula:
    """Decide atoms comparing two S/P words over constants.

    Only valid where the constants are infinitely far apart in Z, so the T2
    pipeline uses it and the finite-model T0 path does not.
    """
    def fold(a):
        if isinstance(a, Atom):
            pl, pr = ground_position(a.lhs), ground_position(a.rhs)
            if pl is not None and pr is not None:
                return TRUE if _INT_OPS[a.op](pl, pr) else FALSE
        return a
    return simplify(map_atoms(phi, fold))


def in_z(t: Term) -> Formula:
    t = norm_term(t)
    return TRUE if is_z_valued(t) else InZ(t)


def simplify_shallow(phi: Formula) -> Formula:
    """Flatten one level of And/Or and fold constants and duplicates."""
    if isinstance(phi, (And, Or)):
        is_and = isinstance(phi, And)
        unit, zero = (TRUE, FALSE) if is_and else (FALSE, TRUE)
        out: List[Formula] = []
        seen = set()
        for a in phi.args:
            parts = a.args if type(a) is type(phi) else (a,)
            for p in parts:
                if p == unit:
                    continue
                if p == zero:
                    return zero
                if p in seen:
                    continue
                seen.add(p)
                out.append(p)
        for p in out:
            if isinstance(p, Not) and p.body in seen:
                return zero
        if not out:
            return unit
        if len(out) == 1:
            return out[0]
        return And(tuple(out)) if is_and else Or(tuple(out))
    return phi


@functools.lru_cache(maxsize=1 << 17)
def simplify(phi: Formula) -> Formula:
    """Bottom-up constant folding; never consults a model."""
    if isinstance(phi, Atom):
        return atom(phi.lhs, phi.op, phi.rhs)
    if isinstance(phi, InZ):
        return in_z(phi.term)
    if isinstance(phi, Not):
        return neg(simplify(phi.body))
    if isinstance(phi, And):
        return conj(simplify(a) for a in phi.args)
    if isinstance(phi, Or):
        return disj(simplify(a) for a in phi.args)
    if isinstance(phi, Implies):
        return disj([neg(simplify(phi.lhs)), simplify(phi.rhs)])
    if isinstance(phi, Exists):
        return Exists(phi.var, simplify(phi.body))
    if isinstance(phi, Forall):
        return Forall(phi.var, simplify(phi.body))
    raise TypeError(phi)


def _literal(phi: Formula):
    """(atomic formula, polarity) for a literal, else None."""
    if isinstance(phi, (Atom, InZ)):
        return phi, True
    if isinstance(phi, Not) and isinstance(phi.body, (Atom, InZ)):
        return phi.body, False
    return None


_ORDER_FACTS = {
    # known truth of lhs op rhs -> implied truth of (lhs', op', rhs') atoms
    ("<", True): [("a", ">", "b", False), ("a", "=", "b", False), ("b", ">", "a", True),
                  ("b", "<", "a", False), ("b", "=", "a", False)],
    (">", True): [("a", "<", "b", False), ("a", "=", "b", False), ("b", "<", "a", True),
                  ("b", ">", "a", False), ("b", "=", "a", False)],
    ("=", True): [("a", "<", "b", False), ("a", ">", "b", False), ("b", "=", "a", True),
                  ("b", "<", "a", False), ("b", ">", "a", False)],
    ("=", False): [("b", "=", "a", False)],
    ("<", False): [("b", ">", "a", False)],
    (">", False): [("b", "<", "a", False)],
}


def _add_fact(facts: Dict[Formula, bool], a: Formula, val: bool) -> None:
    facts[a] = val
    if isinstance(a, Atom):
        for l, op, r, v in _ORDER_FACTS.get((a.op, val), ()):
            lhs = a.lhs if l == "a" else a.rhs
            rhs = a.rhs if r == "b" else a.lhs
            facts.setdefault(Atom(lhs, op, rhs), v)


def propagate(phi: Formula, facts: Optional[Dict[Formula, bool]] = None) -> Formula:
    """Simplify using the literals of enclosing conjunctions (and negated sibling disjuncts).

    Purely propositional plus the trivial order facts between two given terms.
    """
    facts = facts or {}
    if isinstance(phi, (Atom, InZ)):
        if phi in facts:
            return TRUE if facts[phi] else FALSE
        return phi
    if isinstance(phi, Not):
        return neg(propagate(phi.body, facts))
    if isinstance(phi, (And, Or)):
        is_and = isinstance(phi, And)
        local = dict(facts)
        lits, rest = [], []
        for a in phi.args:
            a = propagate(a, local) if _literal(a) else a
            lit = _literal(a)
            if lit is not None:
                atom_, pol = lit
                _add_fact(local, atom_, pol if is_and else not pol)
                lits.append(a)
            else:
                rest.append(a)
        if (FALSE if is_and else TRUE) in lits:
            return FALSE if is_and else TRUE
        rest = [propagate(a, local) for a in rest]
        return (conj if is_and else disj)(lits + rest)
    if isinstance(phi, Implies):
        return propagate(disj([neg(phi.lhs), phi.rhs]), facts)
    if isinstance(phi, (Exists, Forall)):
        inner = {a: v for a, v in facts.items()
                 if all(phi.var not in term_vars(t) for t in atom_terms(a))}
        return type(phi)(phi.var, propagate(phi.body, inner))
    raise TypeError(phi)


# ---------------------------------------------------------------- traversal


def atoms(phi: Formula) -> Iterator[Formula]:
    """Atomic subformulas (Atom and InZ) in left-to-right order."""
    if isinstance(phi, (Atom, InZ)):
        yield phi
    elif isinstance(phi, Not):
        yield from atoms(phi.body)
    elif isinstance(phi, (And, Or)):
        for a in phi.args:
            yield from atoms(a)
    elif isinstance(phi, Implies):
        yield from atoms(phi.lhs)
        yield from atoms(phi.rhs)
    elif isinstance(phi, (Exists, Forall)):
        yield from atoms(phi.body)


def atom_terms(a: Formula) -> Tuple[Term, ...]:
    return (a.lhs, a.rhs) if isinstance(a, Atom) else (a.term,)


def all_terms(phi: Formula) -> Iterator[Term]:
    for a in atoms(phi):
        yield from atom_terms(a)


def map_atoms(phi: Formula, fn, _memo: Optional[dict] = None) -> Formula:
    """Replace every atomic subformula a by fn(a)."""
    memo = {} if _memo is None else _memo
    if phi in memo:
        return memo[phi]
    if isinstance(phi, (Atom, InZ)):
        out = fn(phi)
    elif isinstance(phi, Not):
        out = Not(map_atoms(phi.body, fn, memo))
    elif isinstance(phi, And):
        out = And(tuple(map_atoms(a, fn, memo) for a in phi.args))
    elif isinstance(phi, Or):
        out = Or(tuple(map_atoms(a, fn, memo) for a in phi.args))
    elif isinstance(phi, Implies):
        out = Implies(map_atoms(phi.lhs, fn, memo), map_atoms(phi.rhs, fn, memo))
    elif isinstance(phi, (Exists, Forall)):
        out = type(phi)(phi.var, map_atoms(phi.body, fn, memo))
    else:
        raise TypeError(phi)
    memo[phi] = out
    return out


def map_terms(phi: Formula, fn) -> Formula:
    def on_atom(a):
        if isinstance(a, Atom):
            return Atom(fn(a.lhs), a.op, fn(a.rhs))
        return InZ(fn(a.term))

    return map_atoms(phi, on_atom)


def free_vars(phi: Formula) -> set:
    if isinstance(phi, (Atom, InZ)):
        out = set()
        for t in atom_terms(phi):
            out |= term_vars(t)
        return out
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or)):
        out = set()
        for a in phi.args:
            out |= free_vars(a)
        return out
    if isinstance(phi, Implies):
        return free_vars(phi.lhs) | free_vars(phi.rhs)
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(phi)


def all_vars(phi: Formula) -> set:
    out = set()
    for t in all_terms(phi):
        out |= term_vars(t)
    if isinstance(phi, (Exists, Forall)):
        out.add(phi.var)
    for sub in subformulas(phi):
        if isinstance(sub, (Exists, Forall)):
            out.add(sub.var)
    return out


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, (And, Or)):
        for a in phi.args:
            yield from subformulas(a)
    elif isinstance(phi, Implies):
        yield from subformulas(phi.lhs)
        yield from subformulas(phi.rhs)
    elif isinstance(phi, (Exists, Forall)):
        yield from subformulas(phi.body)


def is_quantifier_free(phi: Formula) -> bool:
    return not any(isinstance(s, (Exists, Forall)) for s in subformulas(phi))


def quantifier_count(phi: Formula) -> int:
    return sum(isinstance(s, (Exists, Forall)) for s in subformulas(phi))


def contains_var(t: Term, x: str) -> bool:
    _, base = split_term(t)
    return isinstance(base, Var) and base.name == x


def formula_has_var(phi: Formula, x: str) -> bool:
    return any(contains_var(t, x) for t in all_terms(phi))


def substitute_term(t: Term, x: str, s: Term) -> Term:
    word, base = split_term(t)
    if isinstance(base, Var) and base.name == x:
        return apply_word(word, s)
    return t


def substitute(phi: Formula, x: str, t: Term) -> Formula:
    """Replace free occurrences of x by t (bound variables are assumed fresh)."""
    if isinstance(phi, Atom):
        return Atom(substitute_term(phi.lhs, x, t), phi.op, substitute_term(phi.rhs, x, t))
    if isinstance(phi, InZ):
        return InZ(substitute_term(phi.term, x, t))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, x, t))
    if isinstance(phi, And):
        return And(tuple(substitute(a, x, t) for a in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(substitute(a, x, t) for a in phi.args))
    if isinstance(phi, Implies):
        return Implies(substitute(phi.lhs, x, t), substitute(phi.rhs, x, t))
    if isinstance(phi, (Exists, Forall)):
        if phi.var == x:
            return phi
        return type(phi)(phi.var, substitute(phi.body, x, t))
    raise TypeError(phi)


def replace_term(phi: Formula, old: Term, new: Term) -> Formula:
    """Replace whole atom sides equal to old (used for parameter abstraction)."""
    return map_terms(phi, lambda t: new if t == old else t)


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(->|<=|>=|!=|[<>=~&|().])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> List[Tuple[str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(1) if m.group(1) else m.start(2)
        toks.append((m.group(1) or m.group(2), start))
        pos = m.end()
    toks.append(("", n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, expected=None):
        tok, pos = self.toks[self.i]
        if expected is not None and tok != expected:
            what = repr(tok) if tok else "end of input"
            raise ParseError(f"expected {expected!r}, found {what}", pos)
        if tok == "":
            raise ParseError("unexpected end of input", pos)
        self.i += 1
        return tok

    def formula(self):
        lhs = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(lhs, self.formula())
        return lhs

    def disjunction(self):
        args = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self):
        args = [self.unary()]
        while self.peek() == "&":
            self.take()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self):
        tok = self.peek()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("E", "A") and self.peek(2) == ".":
            self.take()
            pos = self.pos()
            name = self.take()
            if not _is_var(name):
                raise ParseError(f"bad bound variable {name!r}", pos)
            self.take(".")
            body = self.formula()
            return Exists(name, body) if tok == "E" else Forall(name, body)
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        return self.atomic()

    def atomic(self):
        if self.peek() == "Z" and self.peek(1) == "(":
            self.take()
            self.take("(")
            t = self.term()
            self.take(")")
            return InZ(t)
        lhs = self.term()
        pos = self.pos()
        op = self.peek()
        if op not in OPS:
            what = repr(op) if op else "end of input"
            raise ParseError(f"expected comparison, found {what}", pos)
        self.take()
        return Atom(lhs, op, self.term())

    def term(self):
        pos = self.pos()
        tok = self.peek()
        if tok == "":
            raise ParseError("unexpected end of input", pos)
        if tok in FUNCS:
            self.take()
            self.take("(")
            arg = self.term()
            self.take(")")
            return App(tok, arg)
        if tok in CONSTS:
            self.take()
            return Const(tok)
        if self.peek(1) == "(" and re.match(r"[A-Za-z_]", tok):
            raise ParseError(f"unknown symbol {tok!r}", pos)
        if _is_var(tok):
            self.take()
            return Var(tok)
        raise ParseError(f"unexpected token {tok!r}", pos)


def _is_var(tok: str) -> bool:
    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok)) and tok not in RESERVED


def parse_raw(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    if p.peek() != "":
        raise ParseError(f"unexpected token {p.peek()!r}", p.pos())
    return phi


def parse(text: str) -> Formula:
    """Parse a formula and rename bound variables apart."""
    return freshen(parse_raw(text))


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.peek() != "":
        raise ParseError(f"unexpected token {p.peek()!r}", p.pos())
    return t


def fresh_name(base: str, taken: set) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def freshen(phi: Formula) -> Formula:
    """Make bound variables pairwise distinct and distinct from free ones."""
    taken = set(free_vars(phi))

    def go(f: Formula, ren: Dict[str, str]) -> Formula:
        if isinstance(f, (Atom, InZ)):
            def rt(t):
                word, base = split_term(t)
                if isinstance(base, Var) and base.name in ren:
                    return apply_word(word, Var(ren[base.name]))
                return t
            if isinstance(f, Atom):
                return Atom(rt(f.lhs), f.op, rt(f.rhs))
            return InZ(rt(f.term))
        if isinstance(f, Not):
            return Not(go(f.body, ren))
        if isinstance(f, And):
            return And(tuple(go(a, ren) for a in f.args))
        if isinstance(f, Or):
            return Or(tuple(go(a, ren) for a in f.args))
        if isinstance(f, Implies):
            return Implies(go(f.lhs, ren), go(f.rhs, ren))
        new = fresh_name(f.var, taken)
        taken.add(new)
        return type(f)(new, go(f.body, {**ren, f.var: new}))

    return go(phi, {})


# ---------------------------------------------------------------- printing


def render_term(t: Term) -> str:
    word, base = split_term(t)
    return "".join(w + "(" for w in word) + base.name + ")" * len(word)


_PREC = {Implies: 1, Or: 2, And: 3}


def _prec(phi: Formula) -> int:
    if isinstance(phi, (Exists, Forall)):
        return 0
    if isinstance(phi, (Atom, InZ)):
        return 5
    if isinstance(phi, Not):
        return 4
    return _PREC[type(phi)]


def _wrap(phi: Formula, need: int) -> str:
    s = render(phi)
    return f"({s})" if _prec(phi) < need else s


def render(phi: Formula) -> str:
    if isinstance(phi, Atom):
        return f"{render_term(phi.lhs)} {phi.op} {render_term(phi.rhs)}"
    if isinstance(phi, InZ):
        return f"Z({render_term(phi.term)})"
    if isinstance(phi, Not):
        return "~" + _wrap(phi.body, 4)
    if isinstance(phi, And):
        return " & ".join(_wrap(a, 4) for a in phi.args)
    if isinstance(phi, Or):
        return " | ".join(_wrap(a, 3) for a in phi.args)
    if isinstance(phi, Implies):
        return f"{_wrap(phi.lhs, 2)} -> {_wrap(phi.rhs, 2)}"
    if isinstance(phi, (Exists, Forall)):
        q = "E" if isinstance(phi, Exists) else "A"
        return f"{q} {phi.var}. {_wrap(phi.body, 4)}"
    raise TypeError(phi)


# ---------------------------------------------------------------- degree and rank


def deg(word: Sequence[str]) -> int:
    return sum(1 for w in word if w in ("f", "g"))


def _atom_rank(a: Formula, x: str) -> Tuple[float, float]:
    sides = [t for t in atom_terms(a) if contains_var(t, x)]
    if not sides:
        return (NEG_INF, NEG_INF)
    degs = sorted(deg(split_term(t)[0]) for t in sides)
    if len(degs) == 1:
        return (NEG_INF, degs[0])
    return (degs[0], degs[1])


def rank(phi: Formula, x: str) -> Tuple[float, float]:
    """Lexicographic maximum of the atom ranks of a quantifier-free formula."""
    if not is_quantifier_free(phi):
        raise ValueError("rank is defined on quantifier-free formulas")
    best = (NEG_INF, NEG_INF)
    for a in atoms(phi):
        r = _atom_rank(a, x)
        if r > best:
            best = r
    return best


atom_rank = _atom_rank


def fmt_rank(r) -> str:
    def one(v):
        return "-inf" if v == NEG_INF else str(int(v))
    return f"({one(r[0])},{one(r[1])})"


def in_phi_sigma_pi(word: Sequence[str]) -> bool:
    """Shape f^n or g^n, then S^m or P^m, then at most one pi (outermost first)."""
    i, n = 0, len(word)
    if i < n and word[i] in ("f", "g"):
        fg = word[i]
        while i < n and word[i] == fg:
            i += 1
    if i < n and word[i] in ("S", "P"):
        sp = word[i]
        while i < n and word[i] == sp:
            i += 1
    if i < n and word[i] == "pi":
        i += 1
    return i == n


def is_x_corrected(phi: Formula, x: str) -> bool:
    return all(
        in_phi_sigma_pi(split_term(t)[0]) for t in all_terms(phi) if contains_var(t, x)
    )


# ---------------------------------------------------------------- germs

# Points where the commuted pair disagrees with the original, keyed by
# (f/g symbol, S/P symbol). The f/S set is the one from the f∘S ≈ S∘f argument;
# f/P is the same set moved along by x = S(y).
COMMUTE_EXCEPTIONS: Dict[Tuple[str, str], Tuple[Term, ...]] = {
    ("f", "S"): (C1, C2, C4),
    ("f", "P"): (S(C1), S(C2), S(C4)),
    ("g", "S"): (P(C3),),
    ("g", "P"): (C3,),
}
CANCEL_EXCEPTIONS: Dict[Tuple[str, str], Tuple[Term, ...]] = {
    ("f", "g"): (P(C3),),
    ("g", "f"): (),
    ("S", "P"): (),
    ("P", "S"): (),
}
_INVERSE = {"S": "P", "P": "S", "f": "g", "g": "f"}


def preimages(word: Sequence[str], value: Term) -> List[Term]:
    """Constant terms t with word(t) = value in the surgery model (superset)."""
    cands = [value]
    for fn in word:
        nxt = []
        for v in cands:
            nxt.append(norm_term(App(_INVERSE[fn], v)))
            if fn == "g":
                # g is not injective: g(P(c3)) = g(c3) = c1
                nxt.append(P(C3))
        cands = list(dict.fromkeys(nxt))
    return cands


@dataclass(frozen=True)
class GermNormalForm:
    f_exp: int
    s_exp: int
    exceptions: Tuple[Tuple[Term, Tuple[str, ...]], ...]

    @property
    def word(self) -> Tuple[str, ...]:
        fg = ("f",) * self.f_exp if self.f_exp >= 0 else ("g",) * -self.f_exp
        sp = ("S",) * self.s_exp if self.s_exp >= 0 else ("P",) * -self.s_exp
        return fg + sp

    @property
    def exception_terms(self) -> Tuple[Term, ...]:
        return tuple(dict.fromkeys(t for t, _ in self.exceptions))


def germ_normalize(word: Sequence[str]) -> GermNormalForm:
    """Bubble S/P inward past f/g and cancel inverse pairs, logging exceptions.

    Exceptions are argument values: off them the normal form agrees with the word.
    """
    if "pi" in word:
        raise LanguageError("germ_normalize takes pi-free words")
    orig = tuple(word)
    w = list(word)
    exc: List[Term] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            u, v = w[i], w[i + 1]
            inner = w[i + 2:]
            if (u, v) in CANCEL_EXCEPTIONS:
                for e in CANCEL_EXCEPTIONS[(u, v)]:
                    exc.extend(preimages(inner, e))
                del w[i:i + 2]
                changed = True
                break
            if u in ("S", "P") and v in ("f", "g"):
                for e in COMMUTE_EXCEPTIONS[(v, u)]:
                    exc.extend(preimages(inner, e))
                w[i], w[i + 1] = v, u
                changed = True
                break
    f_exp = w.count("f") - w.count("g")
    s_exp = w.count("S") - w.count("P")
    uniq = tuple(dict.fromkeys(norm_term(e) for e in exc))
    return GermNormalForm(f_exp, s_exp, tuple((e, orig) for e in uniq))
