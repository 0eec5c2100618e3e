"""Time the compiled evaluation kernel against the pure-Python fallback.

Both kernels run the same exhaustive finite-model comparison (formula versus
its eliminated form) on a seeded corpus; results must agree exactly.

    python benchmarks/bench_kernel.py --count 40 --seed 0
"""

import argparse
import time

from pseudoqe.corpus import CorpusConfig, gen_corpus
from pseudoqe.difftest import threshold
from pseudoqe.models import FiniteModel
from pseudoqe.models.compile import SlotMap, compile_formula
from pseudoqe.models.kernel import COMPILED, get_kernel
from pseudoqe.qe import qe_t0
from pseudoqe.syntax import free_vars


def prepare(count, seed, max_quantifiers):
    cfg = CorpusConfig(lang="l0", max_depth=4, max_quantifiers=max_quantifiers)
    jobs = []
    for phi in gen_corpus(count, seed, cfg):
        m = FiniteModel(threshold(phi))
        q = qe_t0(phi)
        slots = SlotMap()
        fv = sorted(free_vars(phi) | free_vars(q))
        for v in fv:
            slots.slot(v)
        a, b = compile_formula(phi, m, slots), compile_formula(q, m, slots)
        jobs.append(((a.nodes, a.terms, a.root), (b.nodes, b.terms, b.root),
                     len(slots), [slots[v] for v in fv], m.kernel_params()))
    return jobs


def time_kernel(k, jobs):
    t = time.perf_counter()
    out = [k.difftest(*job) for job in jobs]
    return time.perf_counter() - t, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-quantifiers", type=int, default=3)
    args = ap.parse_args(argv)

    jobs = prepare(args.count, args.seed, args.max_quantifiers)
    t_py, res_py = time_kernel(get_kernel("python"), jobs)
    assignments = sum(c for c, _ in res_py)
    print(f"{len(jobs)} formulas, {assignments} assignments")
    print(f"python    {t_py:8.3f}s  {assignments / t_py:12.0f} assignments/s")
    if not COMPILED:
        print("compiled  not built (pip install -e . --no-build-isolation)")
        return 0
    t_c, res_c = time_kernel(get_kernel("compiled"), jobs)
    print(f"compiled  {t_c:8.3f}s  {assignments / t_c:12.0f} assignments/s")
    print(f"speedup   {t_py / t_c:8.1f}x")
    if res_c != res_py:
        print("MISMATCH between kernels")
        return 1
    print("results identical")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
