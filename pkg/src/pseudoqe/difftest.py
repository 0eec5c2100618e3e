"""Differential testing of the eliminators against model evaluation.

t0: every corpus formula is compared with its quantifier-free form over all
representative assignments of a finite model (compiled kernel, exact).
t2: the rank-descent pipeline runs on existential L1 formulas; each trace step
and the final output are compared on sampled points of the symbolic surgery
model, and witnesses are checked for coherence with the output.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from typing import Dict, Iterator, List, Optional

from .corpus import CorpusConfig, gen_corpus, gen_existential
from .models.compile import SlotMap, compile_formula
from .models.evaluate import candidate_eval, eval_qf, eval_term
from .models.finite import FiniteModel
from .models.kernel import get_kernel
from .models.symbolic import SymbolicModel, sample_point, tail_points
from .qe.t0 import qe_t0
from .qe.t2 import RankDescentError, cases_t2, qe_t2
from .qe.trace import RewriteTrace
from .qe.witness import WitnessError, witness_from_cases
from .syntax import (
    Formula, all_terms, free_vars, is_quantifier_free, render, split_term, term_vars,
)


@dataclass
class DiffTestRecord:
    index: int
    formula: str
    model: str
    seed: int
    status: str  # pass | mismatch | skipped
    check: str = "qe"
    mismatch_assignment: Optional[Dict[str, str]] = None
    trace_digest: Optional[str] = None
    detail: Optional[str] = None

    def to_json(self) -> str:
        d = asdict(self)
        # keys as documented for the JSON-lines schema
        d["mismatchAssignment"] = d.pop("mismatch_assignment")
        d["traceDigest"] = d.pop("trace_digest")
        return json.dumps(d, sort_keys=True)


def max_sp_run(phi: Formula) -> int:
    """Longest block of consecutive S/P applications in any term."""
    best = 0
    for t in all_terms(phi):
        run = 0
        for w in split_term(t)[0]:
            run = run + 1 if w in ("S", "P") else 0
            best = max(best, run)
    return best


def threshold(phi: Formula) -> int:
    """Size N of the finite model a formula is tested in.

    N - 1 Z points separate consecutive constants, so N = 2 + run keeps every
    S/P offset the formula can express strictly inside a block.
    """
    return 2 + max_sp_run(phi)


# ---------------------------------------------------------------- t0


def check_t0(phi: Formula, n: int, kernel: str = "auto"):
    """(assignments checked, mismatching assignment or None, qe output)."""
    m = FiniteModel(n)
    q = qe_t0(phi)
    slots = SlotMap()
    fv = sorted(free_vars(phi) | free_vars(q))
    for v in fv:
        slots.slot(v)
    ca = compile_formula(phi, m, slots)
    cb = compile_formula(q, m, slots)
    k = get_kernel(kernel)
    count, bad = k.difftest((ca.nodes, ca.terms, ca.root), (cb.nodes, cb.terms, cb.root),
                            len(slots), [slots[v] for v in fv], m.kernel_params())
    asg = None
    if bad is not None:
        asg = {v: str(m.decode(bad[slots[v]])) for v in fv}
    return count, asg, q


def run_t0(count: int, seed: int, max_quantifiers: int = 3, max_depth: int = 4,
           kernel: str = "auto") -> Iterator[DiffTestRecord]:
    cfg = CorpusConfig(lang="l0", max_depth=max_depth, max_quantifiers=max_quantifiers)
    for i, phi in enumerate(gen_corpus(count, seed, cfg)):
        n = threshold(phi)
        checked, asg, _ = check_t0(phi, n, kernel)
        yield DiffTestRecord(
            i, render(phi), f"finite:{n}", seed, "pass" if asg is None else "mismatch",
            mismatch_assignment=asg, detail=f"{checked} assignments",
        )


# ---------------------------------------------------------------- t2


def _pool(s, phi: Formula) -> List[object]:
    """Targeted points: the tails plus the value of every closed term in sight."""
    pts = tail_points(4) + list(s.constants())
    for t in all_terms(phi):
        if not term_vars(t):
            v = eval_term(s, t, {})
            pts += [v, s.apply_fn("S", v), s.apply_fn("P", v)]
    return pts


def sample_assignment(s, rng: random.Random, names, pool) -> Dict[str, object]:
    return {v: rng.choice(pool) if rng.random() < 0.4 else sample_point(rng) for v in sorted(names)}


def _fmt_asg(asg) -> Dict[str, str]:
    return {k: str(v) for k, v in asg.items()}


def compare_on_samples(s, rng, a: Formula, b: Formula, samples: int, extra_pool=()) -> Optional[dict]:
    """First sampled assignment where the two quantifier-free formulas differ."""
    names = free_vars(a) | free_vars(b)
    pool = _pool(s, a) + _pool(s, b) + list(extra_pool)
    for _ in range(samples):
        asg = sample_assignment(s, rng, names, pool)
        if eval_qf(s, a, asg) != eval_qf(s, b, asg):
            return asg
    return None


def check_t2(phi: Formula, s, rng: random.Random, samples: int = 20):
    """Run the pipeline on E x. body and yield (check, status, assignment, detail, digest)."""
    trace = RewriteTrace()
    try:
        q = qe_t2(phi, trace)
    except RankDescentError as exc:
        yield "rank", "mismatch", None, str(exc), trace.digest()
        return
    digest = trace.digest()
    if not is_quantifier_free(q):
        yield "qf", "mismatch", None, "output still has quantifiers", digest
        return
    ok = trace.descending()
    yield "rank", "pass" if ok else "mismatch", None, f"{len(trace)} steps", digest
    for j, e in enumerate(trace):
        bad = compare_on_samples(s, rng, e.before, e.after, samples)
        yield (f"step:{e.rule}", "pass" if bad is None else "mismatch",
               None if bad is None else _fmt_asg(bad), f"step {j}: {render(e.before)}", digest)
    x, body = phi.var, phi.body
    matrix = body if is_quantifier_free(body) else qe_t2(body)
    cases = cases_t2(x, matrix)
    names = free_vars(phi)
    pool = _pool(s, q)
    for _ in range(samples):
        asg = sample_assignment(s, rng, names, pool)
        v = eval_qf(s, q, asg)
        try:
            w = witness_from_cases(s, x, matrix, cases, asg)
        except WitnessError as exc:
            yield "witness", "mismatch", _fmt_asg(asg), str(exc), digest
            return
        if v != (w is not None):
            yield "witness", "mismatch", _fmt_asg(asg), f"output {v}, witness {w}", digest
            return
        if not v and candidate_eval(s, phi, asg):
            yield "witness", "mismatch", _fmt_asg(asg), "output false but a candidate satisfies it", digest
            return
    yield "witness", "pass", None, f"{samples} assignments", digest


def run_t2(count: int, seed: int, max_quantifiers: int = 1, max_depth: int = 3,
           samples: int = 20) -> Iterator[DiffTestRecord]:
    s = SymbolicModel("M2")
    rng = random.Random(seed)
    cfg = CorpusConfig(lang="l1", max_depth=max_depth, max_quantifiers=max_quantifiers, max_fg=2)
    for i in range(count):
        phi = gen_existential(rng, cfg, ["y1", "y2"])
        text = render(phi)
        status, bad, notes, digest, where = "pass", None, [], None, None
        for check, st, asg, detail, digest in check_t2(phi, s, rng, samples):
            if st == "mismatch" and status == "pass":
                status, bad, where = "mismatch", asg, f"{check}: {detail}"
            notes.append(check)
        detail = where or f"{sum(1 for n in notes if n.startswith('step:'))} steps checked"
        yield DiffTestRecord(i, text, s.name, seed, status, "t2", bad, digest, detail)


def run(theory: str, count: int, seed: int, max_quantifiers: Optional[int] = None,
        **kw) -> Iterator[DiffTestRecord]:
    if theory == "t0":
        return run_t0(count, seed, 3 if max_quantifiers is None else max_quantifiers, **kw)
    if theory == "t2":
        return run_t2(count, seed, 1 if max_quantifiers is None else max_quantifiers, **kw)
    raise ValueError(f"unknown theory {theory!r}")


def replay_t0(record: DiffTestRecord) -> bool:
    """Re-evaluate a t0 mismatch at its recorded assignment; True if it still differs."""
    from .models import parse_model_spec
    from .models.evaluate import brute_eval
    from .syntax import parse
    if record.mismatch_assignment is None:
        return False
    phi = parse(record.formula)
    s = parse_model_spec(record.model)
    asg = {v: s.parse_point(p) for v, p in (record.mismatch_assignment or {}).items()}
    return brute_eval(s, phi, asg) != eval_qf(s, qe_t0(phi), asg)

