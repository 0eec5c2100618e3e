"""Finite cyclic orders and exhaustive checks over small sizes."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class FiniteCyclicOrder:
    elements: Tuple[Hashable, ...]
    relation: FrozenSet[Tuple[Hashable, Hashable, Hashable]] = field(repr=False)

    def holds(self, a, b, c) -> bool:
        return (a, b, c) in self.relation


def _induced_triples(order: Sequence) -> FrozenSet[tuple]:
    n = len(order)
    out = set()
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                a, b, c = order[i], order[j], order[k]
                out.update({(a, b, c), (b, c, a), (c, a, b)})
    return frozenset(out)


def induced_cyclic(order: Sequence) -> FiniteCyclicOrder:
    """The cyclic order C(a,b,c) iff a<b<c or b<c<a or c<a<b."""
    order = tuple(order)
    if len(set(order)) != len(order):
        raise ValueError("induced_cyclic: duplicate elements")
    return FiniteCyclicOrder(order, _induced_triples(order))


def from_relation(elements: Iterable, triples: Iterable[tuple]) -> FiniteCyclicOrder:
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise ValueError("duplicate elements")
    return FiniteCyclicOrder(elements, frozenset(map(tuple, triples)))


def _as_array(c: FiniteCyclicOrder) -> np.ndarray:
    idx = {e: i for i, e in enumerate(c.elements)}
    n = len(c.elements)
    arr = np.zeros((n, n, n), dtype=bool)
    for a, b, cc in c.relation:
        arr[idx[a], idx[b], idx[cc]] = True
    return arr


def _violations_array(R: np.ndarray) -> List[Tuple[str, tuple]]:
    """Axiom violations of a relation given as a boolean n*n*n array (index triples)."""
    n = R.shape[0]
    out = []
    cyc = R & ~R.transpose(1, 2, 0)  # C(a,b,c) but not C(b,c,a)
    for a, b, c in zip(*np.nonzero(cyc)):
        out.append(("cyclicity", (int(a), int(b), int(c))))
    asym = R & R.transpose(2, 1, 0)
    for a, b, c in zip(*np.nonzero(asym)):
        out.append(("asymmetry", (int(a), int(b), int(c))))
    # C(a,b,c) & C(a,c,d) -> C(a,b,d)
    lhs = R[:, :, :, None] & R[:, None, :, :]  # [a,b,c,d]
    bad = lhs & ~R[:, :, None, :]
    for a, b, c, d in zip(*np.nonzero(bad)):
        out.append(("transitivity", (int(a), int(b), int(c), int(d))))
    i, j, k = np.indices((n, n, n))
    distinct = (i != j) & (j != k) & (i != k)
    tot = distinct & ~R & ~R.transpose(2, 1, 0)
    for a, b, c in zip(*np.nonzero(tot)):
        out.append(("totality", (int(a), int(b), int(c))))
    return out


def verify_cyclic_axioms(c: FiniteCyclicOrder) -> List[Tuple[str, tuple]]:
    """Every violated cyclic-order axiom, with the offending triple."""
    els = c.elements
    return [(name, tuple(els[i] for i in w)) for name, w in _violations_array(_as_array(c))]


def arc(c: FiniteCyclicOrder, a, b) -> FrozenSet:
    """{x : C(a,x,b)}."""
    if a not in c.elements or b not in c.elements:
        raise ValueError("arc: unknown element")
    return frozenset(x for x in c.elements if (a, x, b) in c.relation)


def is_x_close(c: FiniteCyclicOrder, X: Iterable, a, b, bound: int) -> bool:
    """One of the two arcs between a and b meets X in at most `bound` points."""
    X = set(X)
    if not X <= set(c.elements):
        raise ValueError("is_x_close: X must be a subset of the carrier")
    return len(X & arc(c, a, b)) <= bound or len(X & arc(c, b, a)) <= bound


# ---------------------------------------------------------------- exhaustive checks


def _relation_from_positions(pos: np.ndarray) -> np.ndarray:
    a = pos[:, None, None]
    b = pos[None, :, None]
    c = pos[None, None, :]
    return ((a < b) & (b < c)) | ((b < c) & (c < a)) | ((c < a) & (a < b))


def check_induced_axioms(max_size: int = 7) -> Tuple[int, List]:
    """Run the axiom checker on the induced order of every permutation of each size."""
    checked, bad = 0, []
    for n in range(0, max_size + 1):
        for perm in permutations(range(n)):
            pos = np.empty(n, dtype=np.int64)
            pos[list(perm)] = np.arange(n)
            v = _violations_array(_relation_from_positions(pos))
            checked += 1
            if v:
                bad.append((perm, v[:3]))
    return checked, bad


def check_arc_decomposition(max_size: int = 7) -> Tuple[int, List]:
    """arc(a,c) = arc(a,b) + {b} + arc(b,c) whenever C(a,b,c), over all orders."""
    checked, bad = 0, []
    for n in range(0, max_size + 1):
        bits = np.left_shift(1, np.arange(n, dtype=np.int64))
        for perm in permutations(range(n)):
            pos = np.empty(n, dtype=np.int64)
            pos[list(perm)] = np.arange(n)
            R = _relation_from_positions(pos)
            arcs = (R * bits[None, :, None]).sum(axis=1)  # arcs[a, c] bitmask of x
            A, B, C = np.nonzero(R)
            lhs = arcs[A, C]
            rhs = arcs[A, B] | bits[B] | arcs[B, C]
            checked += len(A)
            for k in np.nonzero(lhs != rhs)[0]:
                bad.append((perm, (int(A[k]), int(B[k]), int(C[k]))))
    return checked, bad


def cut_premise(o1: Sequence, i: int, o2: Sequence, j: int) -> bool:
    """(A1,<1) equals (B2,<2) and (B1,<1) equals (A2,<2) as ordered sets."""
    return tuple(o1[:i]) == tuple(o2[j:]) and tuple(o1[i:]) == tuple(o2[:j])


def check_cut_gluing(max_size: int = 6, brute_size: int = 4) -> Tuple[int, List]:
    """Gluing two cut pieces in either order yields the same cyclic order.

    Sizes up to ``brute_size`` scan every permutation pair and cut position;
    larger sizes enumerate the pairs satisfying the premise directly (for a given
    first order and cut there is exactly one such second order and cut).
    """
    checked, bad = 0, []
    for n in range(0, max_size + 1):
        perms = list(permutations(range(n)))
        if n <= brute_size:
            pairs = (
                (o1, i, o2, j)
                for o1, o2 in product(perms, perms)
                for i in range(n + 1)
                for j in range(n + 1)
                if cut_premise(o1, i, o2, j)
            )
        else:
            pairs = ((o1, i, o1[i:] + o1[:i], n - i) for o1 in perms for i in range(n + 1))
        for o1, i, o2, j in pairs:
            assert cut_premise(o1, i, o2, j)
            checked += 1
            if _induced_triples(o1) != _induced_triples(o2):
                bad.append((o1, i, o2, j))
    return checked, bad


def abstract_iso_counterexample() -> Optional[tuple]:
    """Smallest instance where cut pieces are merely isomorphic and gluing fails."""
    for n in range(1, 5):
        perms = list(permutations(range(n)))
        for o1, o2 in product(perms, perms):
            for i in range(n + 1):
                j = n - i
                if _induced_triples(o1) != _induced_triples(o2):
                    return (o1, i, o2, j)
    return None
