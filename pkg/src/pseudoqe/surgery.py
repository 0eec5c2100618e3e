"""Checks on the surgery model: the pigeonhole failure and how the shifted f
relates to the unshifted one."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional

from .models.evaluate import eval_qf
from .models.finite import FiniteModel
from .models.symbolic import SymbolicModel, sample_point, sample_z, tail_points
from .qe.t2 import qe_t2
from .syntax import parse, render

MISSED = "E x. f(x) = P(c3)"


@dataclass
class Verdict:
    name: str
    passed: bool
    evidence: List[str] = field(default_factory=list)

    def line(self) -> str:
        return f"{self.name}: {'PASS' if self.passed else 'FAIL'}"


@dataclass
class PigeonholeReport:
    model: str
    seed: int
    samples: int
    verdicts: List[Verdict]

    @property
    def ok(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def summary(self) -> str:
        return ", ".join(
            f"{v.name}: {'bijective' if v.name == 'finite control' and v.passed else ('PASS' if v.passed else 'FAIL')}"
            for v in self.verdicts)

    def lines(self) -> List[str]:
        out = [f"pigeonhole report ({self.model}, seed {self.seed}, {self.samples} samples)"]
        for v in self.verdicts:
            out.append(v.line())
            out += ["  " + e for e in v.evidence]
        out.append(self.summary())
        return out


def _z_pool(rng, n):
    pts = [p for p in tail_points(4) if isinstance(p, type(sample_z(rng)))]
    return pts + [sample_z(rng) for _ in range(n)]


def injectivity(s: SymbolicModel, samples: int, seed: int) -> Verdict:
    """f is injective on Z: distinct sampled pairs stay distinct, and g undoes f everywhere."""
    rng = random.Random(seed)
    zs = _z_pool(rng, samples)
    clash = None
    for _ in range(samples):
        a, b = rng.choice(zs), rng.choice(zs)
        if not s.eq(a, b) and s.eq(s.apply_fn("f", a), s.apply_fn("f", b)):
            clash = (a, b)
            break
    left = None
    pts = tail_points(4) + [sample_point(rng) for _ in range(samples)]
    for p in pts:
        if not s.eq(s.apply_fn("g", s.apply_fn("f", p)), p):
            left = p
            break
    ev = [f"{samples} sampled Z pairs: " + ("no collision" if clash is None else f"f({clash[0]}) = f({clash[1]})"),
          f"g(f(p)) = p on {len(pts)} points: " + ("holds" if left is None else f"fails at {left}")]
    return Verdict("injective", clash is None and left is None, ev)


def misses_pc3(s: SymbolicModel) -> Verdict:
    """The eliminated form of E x. f(x) = P(c3) is false, so P(c3) is not a value of f."""
    q = qe_t2(parse(MISSED))
    val = eval_qf(s, q, {})
    pc3 = s.apply_fn("P", s.const("c3"))
    back = s.apply_fn("f", s.apply_fn("g", pc3))
    ev = [f"qe: {MISSED}  ==>  {render(q)}", f"evaluates {str(val).lower()} in {s.name}",
          f"f(g(P(c3))) = {back}, P(c3) = {pc3}"]
    return Verdict("misses P(c3)", not val and not s.eq(back, pc3), ev)


def finite_bijective(m: FiniteModel) -> Verdict:
    """In a finite model the shifted f is still a bijection of Z: the failure needs the infinite tail."""
    zs = m.all_z()
    image = {m.key(m.apply_fn("f", z)) for z in zs}
    inverse = all(m.eq(m.apply_fn("g", m.apply_fn("f", z)), z) and m.eq(m.apply_fn("f", m.apply_fn("g", z)), z)
                  for z in zs)
    ok = len(image) == len(zs) and inverse
    ev = [f"{m.name}: |f(Z)| = {len(image)} of {len(zs)} Z points, g inverse on both sides: {inverse}"]
    return Verdict("finite control", ok, ev)


def pigeonhole_report(samples: int = 10000, seed: int = 0, model: Optional[str] = None) -> PigeonholeReport:
    """All three verdicts by default; a finite model spec reports only the bijectivity control."""
    if model and model.startswith("finite"):
        from .models import parse_model_spec
        m = parse_model_spec(model)
        if m.variant != "M2shift":
            m = FiniteModel(m.N, "M2shift")
        return PigeonholeReport(m.name, seed, len(m.all_z()), [finite_bijective(m)])
    s = SymbolicModel("M2")
    return PigeonholeReport(s.name, seed, samples, [
        injectivity(s, samples, seed),
        misses_pc3(s),
        finite_bijective(FiniteModel(4, "M2shift")),
    ])


# ---------------------------------------------------------------- lemmas about the shift


@dataclass
class LemmaResult:
    name: str
    checked: int
    violations: int
    example: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def line(self) -> str:
        tail = f"  e.g. {self.example}" if self.example else ""
        return f"{self.name:<34} {'PASS' if self.ok else 'FAIL'}  {self.checked} checks, {self.violations} violations{tail}"


def _iter(s, fn, n, p):
    for _ in range(n):
        p = s.apply_fn(fn, p)
    return p


def cyclic_preservation(samples: int = 1000, seed: int = 0) -> LemmaResult:
    """The unshifted f preserves the cyclic order on Z."""
    s = SymbolicModel("M1")
    rng = random.Random(seed)
    zs = _z_pool(rng, samples)
    res = LemmaResult("f preserves the cyclic order", 0, 0)
    for _ in range(samples):
        a, b, c = (rng.choice(zs) for _ in range(3))
        fa, fb, fc = (s.apply_fn("f", p) for p in (a, b, c))
        res.checked += 1
        if s.cyc(a, b, c) != s.cyc(fa, fb, fc):
            res.violations += 1
            res.example = res.example or f"{a}, {b}, {c}"
    return res


def shift_offset(max_n: int = 4, samples: int = 1000, seed: int = 0) -> LemmaResult:
    """f2^n = P^k f1^n and g2^n = S^k g1^n with 0 <= k <= n; the two are Z-close."""
    m1, m2 = SymbolicModel("M1"), SymbolicModel("M2")
    rng = random.Random(seed)
    pts = tail_points(4) + [sample_point(rng) for _ in range(samples)]
    res = LemmaResult("shifted powers stay Z-close", 0, 0)
    for p in pts:
        for n in range(1, max_n + 1):
            for fn, step in (("f", "P"), ("g", "S")):
                a, b = _iter(m1, fn, n, p), _iter(m2, fn, n, p)
                res.checked += 1
                hit = any(m2.eq(_iter(m2, step, k, a), b) for k in range(n + 1))
                close = not m2.in_z(a) or m2.z_close_decide(a, b)
                if not (hit and close):
                    res.violations += 1
                    res.example = res.example or f"{fn}^{n}({p})"
    return res


def nested_powers(max_m: int = 4, samples: int = 1000, seed: int = 0, variant: str = "M2") -> LemmaResult:
    """C(f^m z, f^n z, z) for m > n > 0."""
    s = SymbolicModel(variant)
    rng = random.Random(seed)
    res = LemmaResult(f"C(f^m z, f^n z, z) in {s.name}", 0, 0)
    for z in _z_pool(rng, samples):
        for m in range(2, max_m + 1):
            for n in range(1, m):
                res.checked += 1
                if not s.cyc(_iter(s, "f", m, z), _iter(s, "f", n, z), z):
                    res.violations += 1
                    res.example = res.example or f"z={z}, m={m}, n={n}"
    return res


def far_powers(max_n: int = 4, samples: int = 1000, seed: int = 0) -> LemmaResult:
    """z and f^n(z), g^n(z) are never Z-close in the surgery model (n >= 1)."""
    s = SymbolicModel("M2")
    rng = random.Random(seed)
    res = LemmaResult("f^n z and g^n z far from z", 0, 0)
    for z in _z_pool(rng, samples):
        for n in range(1, max_n + 1):
            for fn in "fg":
                res.checked += 1
                if s.z_close_decide(z, _iter(s, fn, n, z)):
                    res.violations += 1
                    res.example = res.example or f"{fn}^{n}({z})"
    return res
