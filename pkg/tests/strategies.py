"""Hypothesis strategies for terms, formulas and model points."""

from fractions import Fraction

from hypothesis import strategies as st

from pseudoqe.models.symbolic import H, L, Fill, High, Low, ZP
from pseudoqe.syntax import (
    And, App, Atom, CONSTS, Const, Exists, Forall, Implies, InZ, Not, Or, Var,
)

OPS = ("<", ">", "=", "<=", ">=", "!=")


def words(alphabet=("S", "P", "pi", "f", "g"), max_size=4):
    return st.lists(st.sampled_from(alphabet), max_size=max_size).map(tuple)


def terms(variables=("x", "y"), alphabet=("S", "P", "pi", "f", "g"), max_size=3):
    base = st.one_of(st.sampled_from([Var(v) for v in variables]),
                     st.sampled_from([Const(c) for c in CONSTS]))

    def build(pair):
        word, b = pair
        for fn in reversed(word):
            b = App(fn, b)
        return b

    return st.tuples(words(alphabet, max_size), base).map(build)


def atoms(variables=("x", "y"), alphabet=("S", "P", "pi", "f", "g")):
    t = terms(variables, alphabet)
    return st.one_of(
        st.builds(Atom, t, st.sampled_from(OPS), t),
        st.builds(InZ, t),
    )


def qf_formulas(variables=("x", "y"), alphabet=("S", "P", "pi", "f", "g"), max_leaves=6):
    return st.recursive(
        atoms(variables, alphabet),
        lambda kids: st.one_of(
            st.builds(Not, kids),
            st.lists(kids, min_size=2, max_size=3).map(lambda a: And(tuple(a))),
            st.lists(kids, min_size=2, max_size=3).map(lambda a: Or(tuple(a))),
            st.builds(Implies, kids, kids),
        ),
        max_leaves=max_leaves,
    )


def formulas(variables=("x", "y"), alphabet=("S", "P", "pi", "f", "g")):
    inner = qf_formulas(variables, alphabet, max_leaves=4)
    return st.recursive(
        inner,
        lambda kids: st.one_of(
            st.builds(Exists, st.sampled_from(variables), kids),
            st.builds(Forall, st.sampled_from(variables), kids),
            st.lists(kids, min_size=2, max_size=2).map(lambda a: And(tuple(a))),
            st.builds(Not, kids),
        ),
        max_leaves=4,
    )


kindex = st.builds(lambda side, n: L(n) if side == "L" else H(n),
                   st.sampled_from("LH"), st.integers(0, 6))
sym_z = st.builds(ZP, kindex, kindex)
fraction01 = st.integers(1, 15).map(lambda k: Fraction(k, 16))
sym_points = st.one_of(
    sym_z, sym_z, sym_z,
    st.builds(Fill, sym_z, fraction01),
    st.integers(1, 9).map(lambda k: Low(Fraction(-k, 3))),
    st.integers(1, 9).map(lambda k: High(Fraction(k, 3))),
)
