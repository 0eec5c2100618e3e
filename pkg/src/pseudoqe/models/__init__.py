"""Finite and symbolic models, evaluators and the axiom checker."""

from .base import ModelError, Structure
from .evaluate import (
    FalseNoCandidate, TrueWithWitness, UnassignedVariable, brute_eval, candidate_eval,
    eval_qf, eval_term, evaluate, pick_nonZ_between, z_close_decide,
)
from .finite import FiniteModel, mk_finite_model
from .symbolic import SymbolicModel, mk_infinite_model


def parse_model_spec(spec: str) -> Structure:
    """finite:N[:M2shift] or inf:m0|m1|m2."""
    parts = spec.split(":")
    if parts[0] == "finite" and len(parts) in (2, 3):
        try:
            n = int(parts[1])
        except ValueError:
            raise ModelError(f"bad model spec {spec!r}") from None
        variant = parts[2] if len(parts) == 3 else "M1"
        variant = {"m1": "M1", "m2shift": "M2shift"}.get(variant.lower(), variant)
        return FiniteModel(n, variant)
    if parts[0] == "inf" and len(parts) == 2 and parts[1].lower() in ("m0", "m1", "m2"):
        return SymbolicModel(parts[1].upper())
    raise ModelError(f"bad model spec {spec!r}")


__all__ = [
    "ModelError", "Structure", "FalseNoCandidate", "TrueWithWitness", "UnassignedVariable",
    "brute_eval", "candidate_eval", "eval_qf", "eval_term", "evaluate", "pick_nonZ_between",
    "z_close_decide", "FiniteModel", "mk_finite_model", "SymbolicModel", "mk_infinite_model",
    "parse_model_spec",
]
