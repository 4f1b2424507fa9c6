"""Mordell-Weil sieve for quadratic points on bielliptic modular curves X0(N)."""

from .arith import SplittingType, legendre_symbol, splitting_type, squarefree_part
from .ec import INFINITY, WeierstrassCurve, reduce_point
from .model import CurveModelData, builtin_model, enumerate_C_points, load_model, validate_model
from .poly import SparsePolynomial
from .quadpoint import compute_DN, fiber_square_class, identify_field
from .sieve import (
    FiberCase,
    LocalData,
    ResidueSet,
    SieveConfig,
    Verdict,
    allowed_residues,
    choose_primes,
    classify_fiber,
    compute_local_data,
    intersect,
    run_sieve,
    run_sieve_with_torsion,
)

__all__ = [
    "INFINITY", "CurveModelData", "FiberCase", "LocalData", "ResidueSet", "SieveConfig",
    "SparsePolynomial", "SplittingType", "Verdict", "WeierstrassCurve", "allowed_residues",
    "builtin_model", "choose_primes", "classify_fiber", "compute_DN", "compute_local_data",
    "enumerate_C_points", "fiber_square_class", "identify_field", "intersect", "legendre_symbol",
    "load_model", "reduce_point", "run_sieve", "run_sieve_with_torsion", "splitting_type",
    "squarefree_part", "validate_model",
]
