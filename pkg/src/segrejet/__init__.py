"""Exact jet-level computations with Segre varieties of real-analytic generic submanifolds."""

from .coeff import I, ONE, ZERO, Coeff
from .manifold import GraphForm, ManifoldGerm, manifold_from_Q, manifold_from_real_form, manifold_from_rho
from .normal import normalize
from .parser import format_manifold, format_series, parse_manifold, parse_map
from .reconstruction import (
    HoloMapGerm,
    ball_model_G,
    equivalence_criterion,
    extension_exists,
    independence_residual,
    jet_determination,
    prepare_frame,
    reconstruct_full_map,
    reconstruct_G,
    verify_map,
)
from .segre import build_frame, iterated_segre
from .series import MultiSeries, SeriesVec, invert_map, shift_expansion, solve_ift

__version__ = "0.1.0"

__all__ = [
    "Coeff", "I", "ONE", "ZERO",
    "MultiSeries", "SeriesVec", "solve_ift", "invert_map", "shift_expansion",
    "GraphForm", "ManifoldGerm", "manifold_from_Q", "manifold_from_rho", "manifold_from_real_form",
    "normalize", "iterated_segre", "build_frame",
    "HoloMapGerm", "verify_map", "reconstruct_G", "independence_residual", "prepare_frame",
    "reconstruct_full_map", "equivalence_criterion", "extension_exists", "ball_model_G", "jet_determination",
    "parse_manifold", "parse_map", "format_manifold", "format_series",
]
