"""Seeded random formulas over L0 or L1."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Optional

from .syntax import (
    And, App, Atom, CONSTS, Const, Exists, Forall, Formula, Implies, InZ, Not,
    Or, Term, Var,
)


@dataclass
class CorpusConfig:
    lang: str = "l0"
    max_depth: int = 4
    max_quantifiers: int = 3
    max_fg: int = 2
    free_vars: int = 2
    max_run: int = 2  # longest run of S/P applied in a row
    max_word: int = 3


class _Gen:
    def __init__(self, rng: random.Random, cfg: CorpusConfig):
        self.rng = rng
        self.cfg = cfg
        self.fg_left = cfg.max_fg if cfg.lang == "l1" else 0
        self.q_left = cfg.max_quantifiers
        self.nbound = 0

    def term(self, scope: List[str]) -> Term:
        rng = self.rng
        if scope and rng.random() < 0.7:
            t: Term = Var(rng.choice(scope))
        else:
            t = Const(rng.choice(CONSTS))
        run = 0
        for _ in range(rng.choice([0, 0, 1, 1, 2, self.cfg.max_word])):
            syms = ["pi"]
            if run < self.cfg.max_run:
                syms += ["S", "P"]
            if self.fg_left > 0:
                syms += ["f", "g"]
            fn = rng.choice(syms)
            if fn in ("f", "g"):
                self.fg_left -= 1
            run = run + 1 if fn in ("S", "P") else 0
            t = App(fn, t)
        return t

    def atom(self, scope: List[str]) -> Formula:
        r = self.rng.random()
        if r < 0.15:
            f: Formula = InZ(self.term(scope))
            return Not(f) if self.rng.random() < 0.4 else f
        op = self.rng.choice(["<", "<", ">", "=", "<=", ">=", "!="])
        return Atom(self.term(scope), op, self.term(scope))

    def formula(self, depth: int, scope: List[str]) -> Formula:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.25:
            return self.atom(scope)
        kinds = ["not", "and", "and", "or", "or", "imp"]
        if self.q_left > 0:
            kinds += ["ex", "ex", "all"]
        k = rng.choice(kinds)
        if k == "not":
            return Not(self.formula(depth - 1, scope))
        if k in ("ex", "all"):
            self.q_left -= 1
            self.nbound += 1
            v = f"x{self.nbound}"
            body = self.formula(depth - 1, scope + [v, v])  # favour the fresh variable
            return Exists(v, body) if k == "ex" else Forall(v, body)
        a = self.formula(depth - 1, scope)
        b = self.formula(depth - 1, scope)
        if k == "and":
            return And((a, b))
        if k == "or":
            return Or((a, b))
        return Implies(a, b)


def gen_formula(rng: random.Random, cfg: CorpusConfig, free: Optional[List[str]] = None) -> Formula:
    if free is None:
        free = [f"y{i + 1}" for i in range(cfg.free_vars)]
    return _Gen(rng, cfg).formula(cfg.max_depth, list(free))


def gen_corpus(count: int, seed: int, cfg: Optional[CorpusConfig] = None) -> List[Formula]:
    cfg = cfg or CorpusConfig()
    rng = random.Random(seed)
    return [gen_formula(rng, cfg) for _ in range(count)]


def gen_existential(rng: random.Random, cfg: CorpusConfig, free: List[str]) -> Formula:
    """E x. body, with x actually bound (used for one-variable and witness suites)."""
    g = _Gen(rng, cfg)
    g.q_left = max(cfg.max_quantifiers - 1, 0)
    g.nbound = 1
    return Exists("x1", g.formula(cfg.max_depth - 1, list(free) + ["x1", "x1"]))
