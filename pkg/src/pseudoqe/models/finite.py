"""The finite models M_N: Z = {0..N}^2 in lex order inside a dense order."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List

from .base import ModelError, Structure, parse_fraction

# Coordinate scale for the integer encoding used by the evaluation kernel:
# Z point with lex index k sits at (k+1)*W, fillers live strictly in between.
W = 1 << 40


@dataclass(frozen=True)
class ZP:
    i: int
    j: int

    def __str__(self):
        return f"z({self.i},{self.j})"


@dataclass(frozen=True)
class Fill:
    z: ZP
    q: Fraction

    def __str__(self):
        return f"fill({self.z},{self.q})"


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


VARIANTS = ("M1", "M2shift")


class FiniteModel(Structure):
    finite = True
    point_types = (ZP, Fill, Low, High)

    def __init__(self, N: int, variant: str = "M1"):
        if N < 2:
            raise ModelError("finite models need N >= 2")
        if variant not in VARIANTS:
            raise ModelError(f"unknown finite variant {variant!r}")
        self.N = N
        self.variant = variant
        self.K = (N + 1) ** 2
        self.name = f"finite:{N}" + ("" if variant == "M1" else f":{variant}")
        self._consts = {
            "c1": ZP(0, 0),
            "c2": ZP(0, N),
            "c3": ZP(N, 0),
            "c4": ZP(N, N),
        }

    def __repr__(self):
        return f"FiniteModel(N={self.N}, variant={self.variant!r})"

    # ------------------------------------------------------------ points

    def owns(self, p) -> bool:
        if isinstance(p, ZP):
            return 0 <= p.i <= self.N and 0 <= p.j <= self.N
        if isinstance(p, Fill):
            return self.owns(p.z) and 0 < p.q < 1
        if isinstance(p, Low):
            return p.q < 0
        return p.q > 0

    def index(self, z: ZP) -> int:
        return z.i * (self.N + 1) + z.j

    def zp(self, k: int) -> ZP:
        return ZP(*divmod(k % self.K, self.N + 1))

    def key(self, p):
        if isinstance(p, ZP):
            return (1, self.index(p), 0, Fraction(0))
        if isinstance(p, Fill):
            if p.z == self._consts["c4"]:
                return (2, 0, 0, p.q)
            return (1, self.index(p.z), 1, p.q)
        if isinstance(p, Low):
            return (0, 0, 0, p.q)
        return (2, 0, 0, p.q)

    def canonical(self, p):
        """Fillers above c4 are the same points as High ones."""
        if isinstance(p, Fill) and p.z == self._consts["c4"]:
            return High(p.q)
        return p

    def in_z(self, p) -> bool:
        return isinstance(p, ZP)

    def const(self, name: str):
        return self._consts[name]

    def all_z(self) -> List[ZP]:
        return [self.zp(k) for k in range(self.K)]

    # ------------------------------------------------------------ functions

    def _f1(self, z: ZP) -> ZP:
        return ZP((z.i - 1) % (self.N + 1), z.j)

    def _g1(self, z: ZP) -> ZP:
        return ZP((z.i + 1) % (self.N + 1), z.j)

    def _apply(self, sym: str, p):
        if isinstance(p, ZP):
            if sym == "S":
                return self.zp(self.index(p) + 1)
            if sym == "P":
                return self.zp(self.index(p) - 1)
            if sym == "pi":
                return p
            if sym == "f":
                z = self._f1(p)
                return self._apply("P", z) if self.variant == "M2shift" else z
            if sym == "g":
                if self.variant == "M2shift":
                    p = self._apply("S", p)
                return self._g1(p)
        if sym == "pi":
            if isinstance(p, Fill) and p.z != self._consts["c4"]:
                return self.zp(self.index(p.z) + 1)
            return self._consts["c1"]
        return p

    def _between(self, a, b):
        a, b = self.canonical(a), self.canonical(b)
        if isinstance(a, Low):
            return Low(self._mid(a.q, b.q)) if isinstance(b, Low) else Low(a.q / 2)
        if isinstance(a, High):
            return High(self._mid(a.q, b.q))
        if isinstance(a, ZP):
            if a == self._consts["c4"]:
                return High(b.q / 2)
            if isinstance(b, Fill) and b.z == a:
                return Fill(a, b.q / 2)
            return Fill(a, Fraction(1, 2))
        if isinstance(b, Fill) and b.z == a.z:
            return Fill(a.z, self._mid(a.q, b.q))
        return Fill(a.z, self._mid(a.q, 1))

    def pick_nonz_above(self, a):
        a = self.canonical(a)
        return High(a.q + 1) if isinstance(a, High) else High(Fraction(1))

    def pick_nonz_below(self, b):
        b = self.canonical(b)
        return Low(b.q - 1) if isinstance(b, Low) else Low(Fraction(-1))

    # ------------------------------------------------------------ literals

    def parse_point(self, text: str):
        s = text.replace(" ", "")
        m = re.fullmatch(r"z\((\d+),(\d+)\)", s)
        if m:
            p = ZP(int(m.group(1)), int(m.group(2)))
        else:
            m = re.fullmatch(r"fill\(z\((\d+),(\d+)\),([^()]+)\)", s)
            if m:
                p = Fill(ZP(int(m.group(1)), int(m.group(2))), parse_fraction(m.group(3)))
            else:
                m = re.fullmatch(r"(low|high)\(([^()]+)\)", s)
                if not m:
                    raise ModelError(f"bad point literal {text!r} for {self.name}")
                q = parse_fraction(m.group(2))
                p = Low(q) if m.group(1) == "low" else High(q)
        if not self.owns(p):
            raise ModelError(f"point literal {text!r} is out of range for {self.name}")
        return p

    # ------------------------------------------------------------ kernel encoding

    def coord(self, p) -> int:
        """Coordinate of a Z point or of a dyadic filler."""
        p = self.canonical(p)
        if isinstance(p, ZP):
            return (self.index(p) + 1) * W
        if isinstance(p, Fill):
            v = (self.index(p.z) + 1) * W + p.q * W
        elif isinstance(p, Low):
            v = W + p.q * W
        else:
            v = self.K * W + p.q * W
        if Fraction(v).denominator != 1:
            raise ModelError(f"{p} has no exact coordinate; use encode_points")
        return int(v)

    def encode_points(self, points: Dict[str, object]) -> Dict[str, int]:
        """Order-preserving integer coordinates for an assignment.

        Only the order type of the fillers inside each gap matters, so fillers are
        re-spaced evenly within their gap.
        """
        out: Dict[str, int] = {}
        gaps: Dict[int, list] = {}
        for name, p in points.items():
            self.check_point(p)
            p = self.canonical(p)
            if isinstance(p, ZP):
                out[name] = self.coord(p)
                continue
            gid = 0 if isinstance(p, Low) else self.K if isinstance(p, High) else self.index(p.z) + 1
            gaps.setdefault(gid, []).append((self.key(p), name))
        for gid, items in gaps.items():
            distinct = sorted({k for k, _ in items})
            step = W // (len(distinct) + 1)
            base = 0 if gid == 0 else gid * W
            for k, name in items:
                out[name] = base + step * (distinct.index(k) + 1)
        return out

    def decode(self, c: int):
        K = self.K
        if W <= c <= K * W and c % W == 0:
            return self.zp(c // W - 1)
        if c < W:
            return Low(Fraction(c - W, W))
        if c > K * W:
            return High(Fraction(c - K * W, W))
        gid = c // W
        return Fill(self.zp(gid - 1), Fraction(c - gid * W, W))

    def kernel_params(self):
        return (self.N, self.K, W, 0 if self.variant == "M1" else 1)


def mk_finite_model(N: int, variant: str = "M1") -> FiniteModel:
    return FiniteModel(N, variant)
