"""Shared structure interface for the finite and symbolic models."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, List

from ..syntax import CONSTS, LanguageError


class ModelError(ValueError):
    """Malformed point or model name, or an operation outside its domain."""


class Structure:
    """A model of the ordered language: order, Z, constants, unary functions."""

    name = "structure"
    finite = False
    has_fg = True
    point_types: tuple = ()

    # subclasses provide key(p), in_z(p), const(name), _apply(sym, p), parse_point(text)

    def check_point(self, p) -> None:
        if not isinstance(p, self.point_types) or not self.owns(p):
            raise ModelError(f"point {p!r} does not belong to {self.name}")

    def owns(self, p) -> bool:
        return True

    def cmp(self, p, q) -> str:
        self.check_point(p)
        self.check_point(q)
        kp, kq = self.key(p), self.key(q)
        return "<" if kp < kq else (">" if kp > kq else "=")

    def lt(self, p, q) -> bool:
        return self.key(p) < self.key(q)

    def eq(self, p, q) -> bool:
        return self.key(p) == self.key(q)

    def cyc(self, a, b, c) -> bool:
        """Cyclic order induced by the linear order."""
        ka, kb, kc = self.key(a), self.key(b), self.key(c)
        return (ka < kb < kc) or (kb < kc < ka) or (kc < ka < kb)

    def apply_fn(self, sym: str, p):
        if sym in ("f", "g") and not self.has_fg:
            raise LanguageError(f"{sym} is not in the language of {self.name}")
        if sym not in ("S", "P", "pi", "f", "g"):
            raise LanguageError(f"unknown function symbol {sym!r}")
        return self._apply(sym, p)

    def apply_word(self, word, p):
        for sym in reversed(word):
            p = self.apply_fn(sym, p)
        return p

    def constants(self) -> List[Any]:
        return [self.const(c) for c in CONSTS]

    def next_z_above(self, p):
        """Least Z point strictly above p, or None."""
        if self.in_z(p):
            if self.eq(p, self.const("c4")):
                return None
            return self._apply("S", p)
        if not self.lt(p, self.const("c4")):
            return None
        return self._apply("pi", p)

    def z_between_count(self, p, q, cap: int) -> int:
        """Number of Z points strictly between p < q, truncated at cap."""
        count = 0
        z = self.next_z_above(p)
        while z is not None and self.lt(z, q) and count < cap:
            count += 1
            z = self.next_z_above(z)
        return count

    def pick_nonz_between(self, a, b):
        if not self.lt(a, b):
            raise ModelError("pick_nonZ_between needs a < b")
        return self._between(a, b)

    # helpers for midpoint arithmetic on rationals
    @staticmethod
    def _mid(a: Fraction, b: Fraction) -> Fraction:
        return (Fraction(a) + Fraction(b)) / 2


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"bad rational {text!r}") from exc
