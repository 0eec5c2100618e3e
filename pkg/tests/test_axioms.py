import pytest

from pseudoqe.models import FiniteModel, SymbolicModel
from pseudoqe.models.axioms import check_axioms

BASE = ("2", "3", "4", "5", "7", "8")


def passed(report, label):
    return report.get(label).passed


def test_m5_k4_all_pass():
    r = check_axioms(FiniteModel(5), 4)
    assert r.ok and r.exhaustive
    for label in BASE + ("6_4", "12_4", "14_4"):
        assert passed(r, label)


def test_m3_k5_six_fails_with_counterexample():
    r = check_axioms(FiniteModel(3), 5)
    six = r.get("6_5")
    assert not six.passed and six.counterexample
    assert not r.ok


@pytest.mark.parametrize("N", [2, 3, 4])
def test_gap_count_threshold(N):
    # N - 1 Z points separate c1 and c2, so 6_k holds exactly up to k = N - 1
    assert passed(check_axioms(FiniteModel(N), N - 1), f"6_{N - 1}")
    assert not passed(check_axioms(FiniteModel(N), N), f"6_{N}")


def test_symbolic_m1_sampled():
    r = check_axioms(SymbolicModel("M1"), 3, samples=300, seed=1)
    assert not r.exhaustive and r.seed == 1
    for label in ("9", "10", "11", "12_3", "13", "14_3"):
        assert passed(r, label), label


def test_surgery_breaks_bijectivity_only_where_expected():
    r = check_axioms(SymbolicModel("M2"), 3, samples=300)
    assert r.ok
    assert not passed(r, "9") and not r.get("9").expected
    assert passed(r, "12_3") and passed(r, "14_3")


def test_finite_shifted_variant():
    r = check_axioms(FiniteModel(4, "M2shift"), 3)
    assert r.ok and passed(r, "9")


def test_m0_has_no_f():
    r = check_axioms(SymbolicModel("M0"), 2, samples=100)
    assert r.ok
    assert all(not r.get(a).expected for a in ("9", "13"))


def test_report_lines():
    lines = check_axioms(FiniteModel(2), 1).lines()
    assert any(line.startswith("6_1") and "PASS" in line for line in lines)
