import json

from hypothesis import given, strategies as st

from pseudoqe import difftest
from pseudoqe.corpus import CorpusConfig, gen_corpus, gen_existential
from pseudoqe.difftest import DiffTestRecord, replay_t0, run
from pseudoqe.syntax import (
    Exists, all_terms, free_vars, parse, quantifier_count, render, split_term,
)


def fg_count(phi):
    # count applications once: only look at maximal terms of each atom
    text = render(phi)
    return text.count("f(") + text.count("g(")


def test_deterministic():
    cfg = CorpusConfig(lang="l1")
    assert [render(p) for p in gen_corpus(20, 4, cfg)] == [render(p) for p in gen_corpus(20, 4, cfg)]
    assert [render(p) for p in gen_corpus(20, 4, cfg)] != [render(p) for p in gen_corpus(20, 5, cfg)]


@given(st.integers(0, 10_000))
def test_corpus_bounds(seed):
    cfg = CorpusConfig(lang="l1", max_depth=4, max_quantifiers=3, max_fg=2)
    for phi in gen_corpus(5, seed, cfg):
        assert fg_count(phi) <= 2
        assert quantifier_count(phi) <= 3
        assert parse(render(phi)) == phi


def test_l0_corpus_has_no_fg():
    for phi in gen_corpus(50, 1, CorpusConfig(lang="l0")):
        assert fg_count(phi) == 0


def test_existential_binds_x():
    import random
    rng = random.Random(0)
    cfg = CorpusConfig(lang="l1", max_depth=3, max_quantifiers=1)
    for _ in range(30):
        phi = gen_existential(rng, cfg, ["y1"])
        assert isinstance(phi, Exists) and phi.var == "x1"
        assert free_vars(phi) <= {"y1"}


def test_sp_runs_bounded():
    for phi in gen_corpus(50, 2, CorpusConfig(lang="l0", max_run=2)):
        for t in all_terms(phi):
            word = split_term(t)[0]
            run_len = best = 0
            for w in word:
                run_len = run_len + 1 if w in ("S", "P") else 0
                best = max(best, run_len)
            assert best <= 2


def test_t0_records_pass():
    recs = list(run("t0", 25, 7))
    assert len(recs) == 25 and all(r.status == "pass" for r in recs)
    keys = set(json.loads(recs[0].to_json()))
    assert {"formula", "model", "seed", "status", "mismatchAssignment", "traceDigest"} <= keys


def test_count_zero():
    assert list(run("t0", 0, 1)) == []


def test_mismatch_replays(monkeypatch):
    # a deliberately broken eliminator must produce records that replay to the same mismatch
    from pseudoqe.syntax import TRUE
    monkeypatch.setattr(difftest, "qe_t0", lambda phi: TRUE)
    bad = [r for r in run("t0", 30, 3) if r.status == "mismatch"]
    assert bad
    for r in bad:
        assert r.mismatch_assignment is not None
        assert replay_t0(r)


def test_pass_does_not_replay():
    rec = next(iter(run("t0", 1, 0)))
    assert isinstance(rec, DiffTestRecord) and not replay_t0(rec)


def test_t2_records():
    recs = list(run("t2", 4, 1, samples=10))
    assert all(r.status == "pass" and r.trace_digest for r in recs)
