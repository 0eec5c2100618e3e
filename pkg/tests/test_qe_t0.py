import pytest
from hypothesis import given

from pseudoqe.difftest import check_t0, max_sp_run, threshold
from pseudoqe.models import FiniteModel, SymbolicModel, brute_eval, eval_qf
from pseudoqe.models import finite as fm
from pseudoqe.models.symbolic import C1, ZP, L0, L
from pseudoqe.qe import collapse_sp_pi, extract_witness, qe, qe_t0
from pseudoqe.qe.t0 import DNF_LIMIT, test_points as point_cases
from pseudoqe.syntax import (
    LanguageError, is_quantifier_free, parse, parse_term, render, render_term,
)

from strategies import formulas

M2 = SymbolicModel("M2")


def test_collapse_sp_pi():
    assert render_term(collapse_sp_pi(parse_term("S(pi(P(pi(x))))"), True)) == "x"
    assert render_term(collapse_sp_pi(parse_term("S(pi(x))"), False)) == "S(pi(x))"
    assert render_term(collapse_sp_pi(parse_term("S(P(x))"), False)) == "x"
    with pytest.raises(LanguageError):
        collapse_sp_pi(parse_term("f(x)"), True)


def test_z_interval_template():
    out = qe_t0(parse("E x. Z(x) & y1 < x & x < y2"))
    # the bare template pi(S(y1)) < y2 also needs y1 below c4: above c4, pi(S(y1)) wraps to c1
    assert render(out) == "y1 < c4 & pi(S(y1)) < y2"
    m = FiniteModel(3)
    phi = parse("E x. Z(x) & y1 < x & x < y2")
    bare = parse("pi(S(y1)) < y2")
    asg = {"y1": fm.High(1), "y2": fm.High(2)}
    assert brute_eval(m, phi, asg) == eval_qf(m, out, asg) != eval_qf(m, bare, asg)


def test_codense_template():
    assert render(qe_t0(parse("E x. ~Z(x) & y1 < x & x < y2"))) == "y1 < y2"


def test_trivial_truth():
    assert render(qe_t0(parse("E x. x = x"))) == "c1 = c1"
    assert render(qe_t0(parse("E x. x < x"))) == "c1 < c1"


def test_rejects_l1():
    with pytest.raises(LanguageError):
        qe_t0(parse("E x. f(x) < c1"))


def test_dispatch():
    phi = parse("A x. x < y | y <= x")
    assert qe(phi, "t0") == qe_t0(phi)
    with pytest.raises(ValueError):
        qe(phi, "t9")


def test_threshold():
    phi = parse("S(S(x)) < P(y) & pi(S(P(P(P(c1))))) = y")
    assert max_sp_run(phi) == 4 and threshold(phi) == 6


def test_witnesses():
    assert extract_witness(parse("E x. Z(x) & c1 < x & x < c3"), {}, M2) == ZP(L0, L(1))
    w = extract_witness(parse("E x. ~Z(x) & c1 < x & x < S(c1)"), {}, M2)
    assert not M2.in_z(w) and M2.lt(C1, w) and M2.lt(w, M2.succ(C1))
    assert extract_witness(parse("E x. Z(x) & c4 < x"), {}, M2) is None


def test_test_point_fallback_agrees():
    # the bounds method and the test-point method must describe the same set
    phi = parse("(Z(x) | x < y) & (S(x) != y | ~Z(y)) & pi(x) > y")
    m = FiniteModel(3)
    a = parse("E x. " + render(phi))
    for z_case in (True, False):
        assert point_cases("x", phi, z_case)
    q = qe_t0(a)
    for p in m.all_z()[:8] + [fm.Low(-1), fm.High(1)]:
        assert brute_eval(m, a, {"y": p}) == eval_qf(m, q, {"y": p})
    assert DNF_LIMIT > 0


@given(formulas(variables=("x", "y"), alphabet=("S", "P", "pi")))
def test_t0_sound_on_generated(phi):
    q = qe_t0(phi)
    assert is_quantifier_free(q)
    count, bad, _ = check_t0(phi, threshold(phi))
    assert bad is None, (render(phi), bad)


@given(formulas(variables=("x", "y"), alphabet=("S", "P", "pi")))
def test_kernels_agree(phi):
    from pseudoqe.models.kernel import COMPILED
    if not COMPILED:
        return
    n = threshold(phi)
    assert check_t0(phi, n, "python")[:2] == check_t0(phi, n, "compiled")[:2]
