"""A computable infinite model: Z = K x K in lex order, K of order type omega + omega*.

Columns and rows are indexed by KIndex values L0 < L1 < ... < H1 < H0. Fillers
sit in the gap right above each Z point; Low and High points lie outside Z.
MidCol and ColMid name the cuts between the two tails; they are representable
for order comparisons, but pi has no value there, so they are not part of the
model's universe.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .base import ModelError, Structure, parse_fraction


@dataclass(frozen=True, order=False)
class KIndex:
    side: str  # "L" or "H"
    n: int

    def __str__(self):
        return f"{self.side}{self.n}"

    @property
    def key(self):
        return (0, self.n) if self.side == "L" else (2, -self.n)


L0, H0 = KIndex("L", 0), KIndex("H", 0)


def L(n):
    return KIndex("L", n)


def H(n):
    return KIndex("H", n)


def ksucc(k: KIndex) -> Optional[KIndex]:
    """Linear successor; None at the top."""
    if k.side == "L":
        return L(k.n + 1)
    return H(k.n - 1) if k.n > 0 else None


def kpred(k: KIndex) -> Optional[KIndex]:
    if k.side == "H":
        return H(k.n + 1)
    return L(k.n - 1) if k.n > 0 else None


def csucc(k: KIndex) -> KIndex:
    return ksucc(k) or L0


def cpred(k: KIndex) -> KIndex:
    return kpred(k) or H0


@dataclass(frozen=True)
class ZP:
    col: KIndex
    row: KIndex

    def __str__(self):
        return f"z({self.col},{self.row})"


@dataclass(frozen=True)
class Fill:
    z: ZP
    q: Fraction

    def __str__(self):
        return f"fill({self.z},{self.q})"


@dataclass(frozen=True)
class MidCol:
    col: KIndex
    q: Fraction

    def __str__(self):
        return f"mid({self.col},{self.q})"


@dataclass(frozen=True)
class ColMid:
    q: Fraction

    def __str__(self):
        return f"colmid({self.q})"


@dataclass(frozen=True)
class Low:
    q: Fraction

    def __str__(self):
        return f"low({self.q})"


@dataclass(frozen=True)
class High:
    q: Fraction

    def __str__(self):
        return f"high({self.q})"


C1 = ZP(L0, L0)
C2 = ZP(L0, H0)
C3 = ZP(H0, L0)
C4 = ZP(H0, H0)
CONST_POINTS = {"c1": C1, "c2": C2, "c3": C3, "c4": C4}

_ZERO = Fraction(0)


def sym_key(p):
    if isinstance(p, ZP):
        return (1, p.col.key, p.row.key, 0, _ZERO)
    if isinstance(p, Fill):
        return (1, p.z.col.key, p.z.row.key, 1, p.q)
    if isinstance(p, MidCol):
        return (1, p.col.key, (1, p.q), 0, _ZERO)
    if isinstance(p, ColMid):
        return (1, (1, p.q), (0, 0), 0, _ZERO)
    if isinstance(p, Low):
        return (0, p.q)
    if isinstance(p, High):
        return (2, p.q)
    raise ModelError(f"not a symbolic point: {p!r}")


def _in_h_tail(k: KIndex) -> bool:
    return k.side == "H"


class SymbolicModel(Structure):
    point_types = (ZP, Fill, MidCol, ColMid, Low, High)

    def __init__(self, variant: str = "M2"):
        if variant not in ("M0", "M1", "M2"):
            raise ModelError(f"unknown infinite variant {variant!r}")
        self.variant = variant
        self.has_fg = variant != "M0"
        self.name = f"inf:{variant.lower()}"

    def __repr__(self):
        return f"SymbolicModel({self.variant!r})"

    def owns(self, p) -> bool:
        if isinstance(p, ZP):
            return p.col.n >= 0 and p.row.n >= 0
        if isinstance(p, Fill):
            return self.owns(p.z) and 0 < p.q < 1
        if isinstance(p, Low):
            return p.q < 0
        if isinstance(p, High):
            return p.q > 0
        return True

    def key(self, p):
        return sym_key(p)

    def in_z(self, p) -> bool:
        return isinstance(p, ZP)

    def const(self, name: str):
        return CONST_POINTS[name]

    # ------------------------------------------------------------ functions

    @staticmethod
    def succ(z: ZP) -> ZP:
        if z.row != H0:
            return ZP(z.col, ksucc(z.row))
        if z.col == H0:
            return C1
        return ZP(ksucc(z.col), L0)

    @staticmethod
    def pred(z: ZP) -> ZP:
        if z.row != L0:
            return ZP(z.col, kpred(z.row))
        if z.col == L0:
            return C4
        return ZP(kpred(z.col), H0)

    @staticmethod
    def f1(z: ZP) -> ZP:
        return ZP(cpred(z.col), z.row)

    @staticmethod
    def g1(z: ZP) -> ZP:
        return ZP(csucc(z.col), z.row)

    def _apply(self, sym: str, p):
        if isinstance(p, ZP):
            if sym == "S":
                return self.succ(p)
            if sym == "P":
                return self.pred(p)
            if sym == "pi":
                return p
            if sym == "f":
                if self.variant == "M2" and p.col == H0 and _in_h_tail(p.row):
                    return self.pred(self.f1(p))
                return self.f1(p)
            if sym == "g":
                if self.variant == "M2" and p.col == H(1) and _in_h_tail(p.row):
                    return self.g1(self.succ(p))
                return self.g1(p)
        if sym == "pi":
            if isinstance(p, Fill):
                return C1 if p.z == C4 else self.succ(p.z)
            if isinstance(p, (Low, High)):
                return C1
            raise ModelError(f"pi is undefined at the cut point {p}")
        return p

    # ------------------------------------------------------------ decisions

    def z_close_decide(self, p, q) -> bool:
        """Whether one of the two cyclic arcs between Z points p and q is Z-finite."""
        if not (isinstance(p, ZP) and isinstance(q, ZP)):
            raise ModelError("z_close_decide takes Z points")
        if p == q:
            return True
        a, b = (p, q) if self.lt(p, q) else (q, p)
        if a.col == b.col and a.row.side == b.row.side:
            return True
        if ksucc(a.col) == b.col and a.row.side == "H" and b.row.side == "L":
            return True
        return b.col == H0 and b.row.side == "H" and a.col == L0 and a.row.side == "L"

    def _between(self, a, b):
        if isinstance(a, Low):
            return Low(self._mid(a.q, b.q)) if isinstance(b, Low) else Low(a.q / 2)
        if isinstance(a, High):
            return High(self._mid(a.q, b.q))
        if isinstance(a, ZP):
            if isinstance(b, Fill) and b.z == a:
                return Fill(a, b.q / 2)
            return Fill(a, Fraction(1, 2))
        if isinstance(a, Fill):
            if isinstance(b, Fill) and b.z == a.z:
                return Fill(a.z, self._mid(a.q, b.q))
            return Fill(a.z, self._mid(a.q, 1))
        if isinstance(a, MidCol):
            if isinstance(b, MidCol) and b.col == a.col:
                return MidCol(a.col, self._mid(a.q, b.q))
            return MidCol(a.col, a.q + 1)
        if isinstance(a, ColMid):
            if isinstance(b, ColMid):
                return ColMid(self._mid(a.q, b.q))
            return ColMid(a.q + 1)
        raise ModelError(f"cannot pick between {a} and {b}")

    def pick_nonz_above(self, a):
        return High(a.q + 1) if isinstance(a, High) else High(Fraction(1))

    def pick_nonz_below(self, b):
        return Low(b.q - 1) if isinstance(b, Low) else Low(Fraction(-1))

    # ------------------------------------------------------------ literals

    def parse_point(self, text: str):
        s = text.replace(" ", "")
        kx = r"([LH])(\d+)"
        m = re.fullmatch(rf"z\({kx},{kx}\)", s)
        if m:
            p = ZP(KIndex(m.group(1), int(m.group(2))), KIndex(m.group(3), int(m.group(4))))
        elif re.fullmatch(rf"fill\(z\({kx},{kx}\),([^()]+)\)", s):
            m = re.fullmatch(rf"fill\(z\({kx},{kx}\),([^()]+)\)", s)
            z = ZP(KIndex(m.group(1), int(m.group(2))), KIndex(m.group(3), int(m.group(4))))
            p = Fill(z, parse_fraction(m.group(5)))
        elif re.fullmatch(rf"mid\({kx},([^()]+)\)", s):
            m = re.fullmatch(rf"mid\({kx},([^()]+)\)", s)
            p = MidCol(KIndex(m.group(1), int(m.group(2))), parse_fraction(m.group(3)))
        else:
            m = re.fullmatch(r"(low|high|colmid)\(([^()]+)\)", s)
            if not m:
                raise ModelError(f"bad point literal {text!r} for {self.name}")
            q = parse_fraction(m.group(2))
            p = {"low": Low, "high": High, "colmid": ColMid}[m.group(1)](q)
        if not self.owns(p):
            raise ModelError(f"point literal {text!r} is out of range for {self.name}")
        return p


def mk_infinite_model(variant: str = "M2") -> SymbolicModel:
    return SymbolicModel(variant)


# ---------------------------------------------------------------- sampling


def _kindex(rng: random.Random, deep: int = 8) -> KIndex:
    n = rng.randrange(4) if rng.random() < 0.6 else rng.randrange(deep)
    return KIndex(rng.choice("LH"), n)


def sample_z(rng: random.Random) -> ZP:
    r = rng.random()
    if r < 0.15:
        return rng.choice([C1, C2, C3, C4])
    if r < 0.35:
        # the columns where the surgery acts, and their neighbours
        return ZP(rng.choice([H0, H(1), H(2), L0]), _kindex(rng))
    return ZP(_kindex(rng), _kindex(rng))


def sample_point(rng: random.Random) -> object:
    r = rng.random()
    if r < 0.6:
        return sample_z(rng)
    if r < 0.85:
        return Fill(sample_z(rng), Fraction(rng.randrange(1, 8), 8))
    if r < 0.93:
        return Low(Fraction(-rng.randrange(1, 9), rng.randrange(1, 4)))
    return High(Fraction(rng.randrange(1, 9), rng.randrange(1, 4)))


def tail_points(depth: int = 4) -> List[object]:
    """Points near the tail ends and the constants, plus some just outside Z."""
    pts: List[object] = []
    for col in (L0, L(1), H(2), H(1), H0):
        for row in [L(i) for i in range(depth)] + [H(i) for i in range(depth)]:
            pts.append(ZP(col, row))
    for c in (C1, C2, C3, C4):
        pts.append(Fill(c, Fraction(1, 2)))
    pts += [Low(Fraction(-1)), High(Fraction(1))]
    return list(dict.fromkeys(pts))
