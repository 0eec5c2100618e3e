"""Quantifier elimination: the L0 eliminator, the rank-descent pipeline for f/g,
witness extraction and rewrite traces."""

from .t0 import DNFTooLarge, collapse_sp_pi, eliminate, qe_t0
from .t2 import (
    AlreadyLowRank, RankDescentError, correct_x, exception_terms, project_one_var,
    project_one_var_check, qe_t2, reduce_to_low_rank, rewrite_rank_step,
)
from .trace import RewriteTrace, TraceEntry
from .witness import WitnessError, extract_witness


def qe(phi, theory: str = "t0", trace=None):
    """Eliminate quantifiers with the chosen theory's procedure."""
    if theory == "t0":
        return qe_t0(phi)
    if theory == "t2":
        return qe_t2(phi, trace)
    raise ValueError(f"unknown theory {theory!r} (expected t0 or t2)")


__all__ = [
    "DNFTooLarge", "collapse_sp_pi", "eliminate", "qe_t0", "AlreadyLowRank",
    "RankDescentError", "correct_x", "exception_terms", "project_one_var",
    "project_one_var_check", "qe_t2", "reduce_to_low_rank", "rewrite_rank_step",
    "RewriteTrace", "TraceEntry", "WitnessError", "extract_witness", "qe",
]
