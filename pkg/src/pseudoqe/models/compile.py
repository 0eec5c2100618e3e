"""Flatten formulas into integer arrays for the finite-model evaluation kernel.

Terms:  [kind, value, nops, op_1 .. op_n]  kind 0 = variable slot, 1 = constant
        coordinate; ops innermost first.
Nodes:  ATOM op lhs rhs | INZ t | NOT a | AND n a_1..a_n | OR n a_1..a_n |
        IMP a b | EX slot a | ALL slot a   (operands are offsets).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..syntax import (
    And, Atom, Exists, Forall, Formula, Implies, InZ, Not, Or, Var, freshen, split_term,
)

OPCODE = {"<": 0, ">": 1, "=": 2, "<=": 3, ">=": 4, "!=": 5}
FNCODE = {"S": 0, "P": 1, "pi": 2, "f": 3, "g": 4}
ATOM, INZ, NOT, AND, OR, IMP, EX, ALL = range(8)


@dataclass
class Compiled:
    nodes: np.ndarray
    terms: np.ndarray
    root: int


class SlotMap(dict):
    """Variable name -> slot index, grown on demand."""

    def slot(self, name: str) -> int:
        if name not in self:
            self[name] = len(self)
        return self[name]


def compile_formula(phi: Formula, model, slots: SlotMap) -> Compiled:
    # one slot per name, so a bound variable must not reuse a free one's name
    phi = freshen(phi)
    nodes: list = []
    terms: list = []
    term_cache: Dict[object, int] = {}

    def term(t) -> int:
        if t in term_cache:
            return term_cache[t]
        word, base = split_term(t)
        off = len(terms)
        if isinstance(base, Var):
            terms.extend((0, slots.slot(base.name)))
        else:
            terms.extend((1, model.coord(model.const(base.name))))
        terms.append(len(word))
        terms.extend(FNCODE[w] for w in reversed(word))
        term_cache[t] = off
        return off

    def node(f) -> int:
        if isinstance(f, Atom):
            rec = [ATOM, OPCODE[f.op], term(f.lhs), term(f.rhs)]
        elif isinstance(f, InZ):
            rec = [INZ, term(f.term)]
        elif isinstance(f, Not):
            rec = [NOT, node(f.body)]
        elif isinstance(f, (And, Or)):
            kids = [node(a) for a in f.args]
            rec = [AND if isinstance(f, And) else OR, len(kids)] + kids
        elif isinstance(f, Implies):
            a, b = node(f.lhs), node(f.rhs)
            rec = [IMP, a, b]
        elif isinstance(f, (Exists, Forall)):
            s = slots.slot(f.var)
            rec = [EX if isinstance(f, Exists) else ALL, s, node(f.body)]
        else:
            raise TypeError(f)
        off = len(nodes)
        nodes.extend(rec)
        return off

    root = node(phi)
    return Compiled(
        np.asarray(nodes, dtype=np.int64),
        np.asarray(terms if terms else [0], dtype=np.int64),
        root,
    )
