from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from pseudoqe.cyclic import (
    abstract_iso_counterexample, arc, check_arc_decomposition, check_cut_gluing,
    check_induced_axioms, cut_premise, from_relation, induced_cyclic, is_x_close,
    verify_cyclic_axioms,
)


def brute_triples(order):
    # straight from the defining disjunction, over all ordered triples
    pos = {e: i for i, e in enumerate(order)}
    out = set()
    for a, b, c in permutations(order, 3):
        x, y, z = pos[a], pos[b], pos[c]
        if x < y < z or y < z < x or z < x < y:
            out.add((a, b, c))
    return out


def test_induced_small():
    c = induced_cyclic([1, 2, 3])
    assert c.holds(1, 2, 3) and c.holds(2, 3, 1) and c.holds(3, 1, 2)
    assert not c.holds(3, 2, 1)


def test_singleton_is_empty():
    assert induced_cyclic([1]).relation == frozenset()


def test_four_elements_triple_count():
    # 4 three-element subsets, each contributing its 3 rotations
    c = induced_cyclic([1, 2, 3, 4])
    assert len(c.relation) == 12
    assert set(c.relation) == brute_triples([1, 2, 3, 4])


def test_duplicates_rejected():
    with pytest.raises(ValueError):
        induced_cyclic([1, 2, 1])


def test_verify_reports_asymmetry():
    bad = verify_cyclic_axioms(from_relation([1, 2, 3], [(1, 2, 3), (3, 2, 1)]))
    assert any(name == "asymmetry" for name, _ in bad)


def test_verify_reports_missing_rotation():
    bad = verify_cyclic_axioms(from_relation([1, 2, 3], [(1, 2, 3)]))
    assert ("cyclicity", (1, 2, 3)) in bad


def test_verify_induced_clean():
    assert verify_cyclic_axioms(induced_cyclic([1, 2, 3])) == []


def test_arcs():
    c = induced_cyclic([1, 2, 3, 4])
    assert arc(c, 1, 4) == {2, 3}
    assert arc(c, 4, 2) == {1}
    assert arc(c, 3, 3) == frozenset()
    with pytest.raises(ValueError):
        arc(c, 1, 9)


def test_x_close():
    c = induced_cyclic(range(1, 7))
    # arc(1,5) = {2,3,4} meets X three times, arc(5,1) = {6} misses it
    assert is_x_close(c, {2, 3, 4}, 1, 5, bound=1)
    assert not is_x_close(c, {2, 3, 4, 6}, 1, 5, bound=0)
    assert is_x_close(c, {2, 3, 4}, 4, 4, bound=0)
    assert is_x_close(c, {2, 3, 4}, 1, 5, bound=6)


def test_x_close_counts_both_arcs():
    c = induced_cyclic(range(1, 7))
    # arc(1,5) holds 2,3,4; arc(5,1) holds 6: only the second is small
    assert is_x_close(c, {2, 3, 4, 6}, 1, 5, bound=1)
    assert not is_x_close(c, {2, 3, 4, 6}, 1, 5, bound=0)


def test_exhaustive_suites_are_clean():
    n, bad = check_induced_axioms(5)
    assert n == sum(1 for k in range(6) for _ in permutations(range(k))) and not bad
    assert check_arc_decomposition(5)[1] == []
    assert check_cut_gluing(5)[1] == []


def test_cut_premise():
    assert cut_premise((0, 1, 2), 1, (1, 2, 0), 2)
    assert not cut_premise((0, 1, 2), 1, (2, 1, 0), 2)


def test_isomorphic_pieces_are_not_enough():
    # with pieces only isomorphic (not equal) the two glued orders can differ
    o1, i, o2, j = abstract_iso_counterexample()
    assert induced_cyclic(o1).relation != induced_cyclic(o2).relation


orders = st.lists(st.integers(0, 50), min_size=0, max_size=7, unique=True)


@given(orders)
def test_induced_matches_definition(order):
    assert set(induced_cyclic(order).relation) == brute_triples(order)


@given(orders)
def test_induced_is_cyclic_order(order):
    assert verify_cyclic_axioms(induced_cyclic(order)) == []


@given(orders, st.integers(0, 7))
def test_rotation_invariant(order, k):
    if order:
        k %= len(order)
    assert induced_cyclic(order).relation == induced_cyclic(order[k:] + order[:k]).relation


@given(orders, st.data())
def test_closeness_reflexive_symmetric(order, data):
    if not order:
        return
    c = induced_cyclic(order)
    X = data.draw(st.sets(st.sampled_from(order)))
    a, b = data.draw(st.sampled_from(order)), data.draw(st.sampled_from(order))
    bound = data.draw(st.integers(0, 3))
    assert is_x_close(c, X, a, a, bound)
    assert is_x_close(c, X, a, b, bound) == is_x_close(c, X, b, a, bound)
