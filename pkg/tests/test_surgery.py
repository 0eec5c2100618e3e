from pseudoqe.models import FiniteModel, SymbolicModel
from pseudoqe.surgery import (
    cyclic_preservation, far_powers, finite_bijective, injectivity, misses_pc3,
    nested_powers, pigeonhole_report, shift_offset,
)

M1, M2 = SymbolicModel("M1"), SymbolicModel("M2")


def test_pigeonhole_default():
    rep = pigeonhole_report(500, 0)
    assert rep.ok
    assert rep.summary() == "injective: PASS, misses P(c3): PASS, finite control: bijective"
    assert any("evaluates false" in e for v in rep.verdicts for e in v.evidence)


def test_finite_control_only():
    rep = pigeonhole_report(10, 0, "finite:4")
    assert [v.name for v in rep.verdicts] == ["finite control"]
    assert rep.ok and rep.samples == 25


def test_unshifted_model_hits_pc3():
    # without the surgery, f is onto Z, so the verdict flips
    assert not misses_pc3(M1).passed
    assert misses_pc3(M2).passed


def test_injective_both_models():
    assert injectivity(M2, 300, 1).passed
    assert injectivity(M1, 300, 1).passed


def test_finite_bijective_all_sizes():
    for n in range(2, 7):
        assert finite_bijective(FiniteModel(n, "M2shift")).passed


def test_pc3_preimage_is_missing():
    pc3 = M2.apply_fn("P", M2.const("c3"))
    assert not M2.eq(M2.apply_fn("f", M2.apply_fn("g", pc3)), pc3)
    assert M1.eq(M1.apply_fn("f", M1.apply_fn("g", pc3)), pc3)


def test_lemmas():
    for r in (cyclic_preservation(300, 2), shift_offset(4, 200, 2), nested_powers(4, 200, 2, "M1"),
              nested_powers(4, 200, 2, "M2"), far_powers(4, 200, 2)):
        assert r.ok, r.line()
        assert r.checked > 0


def test_lemma_lines():
    r = cyclic_preservation(10, 0)
    assert r.line().endswith("PASS  10 checks, 0 violations")
