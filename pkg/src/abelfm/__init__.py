"""Exact cohomology calculus for an abelian-surface-fibred Calabi-Yau threefold.

Submodules
----------
ring       intersection rings, class arithmetic and the text model format
isogeny    pullback and pushforward along the degree-64 isogeny V -> V^
chern      Chern characters, GRR pushforward, complete-intersection tangent classes
fm         the Fourier-Mukai transform as a 6x6 rational matrix
search     bounded search over spectral data
stability  ampleness, effectivity and slope-stability thresholds on V^
lattice    the Neron-Severi lattice of E x E and its SL(2, Z) action
verify     named verification suites
cli        command-line front end
"""
from .ring import (CohClass, ModelError, ModelMismatchError, ParseError, RingModel, builtin_model,
                   format_class, integrate, load_models, mul, parse_class)
from .isogeny import compose, phi_pullback, phi_pushforward
from .chern import ChernClasses, c_from_ch, ch_from_c, ci_tangent_chern, euler_resolution, spectral_character
from .fm import apply_fm, apply_fm_inverse, builtin_sP, builtin_sP_inverse, reconstruct_from_pairs
from .search import HeteroticConstraints, SearchBounds, SpectralCandidate, enumerate_candidates
from .stability import PolarizationChoice, is_ample, slope, stability_threshold

__version__ = "0.1.0"

__all__ = [
    "CohClass", "ModelError", "ModelMismatchError", "ParseError", "RingModel", "builtin_model",
    "format_class", "integrate", "load_models", "mul", "parse_class",
    "compose", "phi_pullback", "phi_pushforward",
    "ChernClasses", "c_from_ch", "ch_from_c", "ci_tangent_chern", "euler_resolution", "spectral_character",
    "apply_fm", "apply_fm_inverse", "builtin_sP", "builtin_sP_inverse", "reconstruct_from_pairs",
    "HeteroticConstraints", "SearchBounds", "SpectralCandidate", "enumerate_candidates",
    "PolarizationChoice", "is_ample", "slope", "stability_threshold",
]
