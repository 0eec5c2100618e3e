import json

import pytest

from pseudoqe.cli import FAIL, OK, USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_qe_t0(capsys):
    code, out, _ = run(capsys, "qe", "--theory", "t0", "E x. Z(x) & y1<x & x<y2")
    assert code == OK and out.strip() == "y1 < c4 & pi(S(y1)) < y2"
    assert run(capsys, "qe", "--theory", "t0", "E x. x=x")[1].strip() == "c1 = c1"


def test_qe_t2_eval(capsys):
    code, out, _ = run(capsys, "qe", "E x. f(x) = P(c3)", "--eval", "inf:m2")
    assert code == OK and out.splitlines()[-1] == "false"


def test_qe_trace_json(capsys):
    code, out, _ = run(capsys, "--json", "qe", "E x. f(f(x)) < y", "--trace")
    rec = json.loads(out)
    assert code == OK and rec["trace"] and len(rec["traceDigest"]) == 16
    # --json is also accepted after the subcommand
    code, out2, _ = run(capsys, "qe", "E x. f(f(x)) < y", "--trace", "--json")
    assert json.loads(out2)["traceDigest"] == rec["traceDigest"]


def test_eval_examples(capsys):
    assert run(capsys, "eval", "-m", "finite:3", "c2 < c3")[1].strip() == "true"
    assert run(capsys, "eval", "-m", "inf:m2", "g(f(x)) = x", "-a", "x=z(L1,L1)")[1].strip() == "true"
    assert run(capsys, "eval", "-m", "inf:m2", "f(g(x)) = x", "-a", "x=z(H1,H0)")[1].strip() == "false"


def test_eval_quantified(capsys):
    assert run(capsys, "eval", "-m", "finite:3", "E x. Z(x) & c4 < x")[1].strip() == "false"
    code, _, err = run(capsys, "eval", "-m", "inf:m2", "E x. f(x) = x")
    assert code == USAGE and "--via-qe" in err
    code, out, _ = run(capsys, "eval", "-m", "inf:m2", "--via-qe", "E x. f(x) = P(c3)")
    assert code == OK and out.strip() == "false"


def test_usage_errors(capsys):
    code, _, err = run(capsys, "eval", "-m", "finite:3", "x < c3")
    assert code == USAGE and "unassigned" in err
    assert run(capsys, "qe", "S(c4")[0] == USAGE
    assert run(capsys, "qe", "--theory", "t0", "E x. f(x) < x")[0] == USAGE
    assert run(capsys, "eval", "-m", "finite:x", "c1 < c2")[0] == USAGE
    with pytest.raises(SystemExit) as exc:
        main(["difftest", "--theory", "t9"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_difftest(capsys):
    code, out, _ = run(capsys, "difftest", "--count", "0")
    assert code == OK and out == ""
    code, out, _ = run(capsys, "--json", "difftest", "--count", "5", "--seed", "7")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == OK and len(recs) == 5 and {r["status"] for r in recs} == {"pass"}


def test_difftest_t2(capsys):
    code, out, _ = run(capsys, "difftest", "--theory", "t2", "--count", "2", "--samples", "5",
                       "--rule-samples", "30")
    assert code == OK
    assert out.splitlines()[-1] == "0 mismatches"
    assert any(line.startswith("rule elimination_matrix") for line in out.splitlines())


def test_axioms(capsys):
    code, out, _ = run(capsys, "axioms", "-m", "finite:5", "-k", "4")
    assert code == OK and "FAIL" not in out
    code, out, _ = run(capsys, "--json", "axioms", "-m", "finite:3", "-k", "5")
    recs = {r["axiom"]: r for r in map(json.loads, out.splitlines())}
    assert code == FAIL and not recs["6_5"]["passed"] and recs["6_5"]["counterexample"]


def test_pigeonhole(capsys):
    code, out, _ = run(capsys, "pigeonhole", "--samples", "200")
    assert code == OK
    assert out.splitlines()[-1] == "injective: PASS, misses P(c3): PASS, finite control: bijective"
    code, out, _ = run(capsys, "pigeonhole", "--model", "finite:4")
    assert code == OK and "finite control" in out


def test_gen(capsys):
    a = run(capsys, "gen", "--count", "3", "--seed", "1", "--lang", "l0")[1].splitlines()
    b = run(capsys, "gen", "--count", "3", "--seed", "1", "--lang", "l0")[1].splitlines()
    assert len(a) == 3 and a == b
    out = run(capsys, "gen", "--count", "40", "--lang", "l1", "--max-fg", "2")[1]
    for line in out.splitlines():
        assert line.count("f(") + line.count("g(") <= 2


def test_lemmas(capsys):
    code, out, _ = run(capsys, "lemmas", "--samples", "100")
    assert code == OK and len(out.splitlines()) == 5
