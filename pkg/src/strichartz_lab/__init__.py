"""Numerical laboratory for sharp space-time estimates of the one-dimensional
fractional flow exp(it|D|^alpha): ratio functionals, extremizer search,
asymptotic limits, profile diagnostics, and refined bilinear estimates."""

__version__ = "0.1.0"

from .asymptotics import (
    concentrating_sequence,
    dominating_function,
    schrodinger_limit_curve,
    vanishing_modulation_curve,
)
from .bilinear import (
    DyadicInterval,
    bilinear_weighted_form,
    dyadic_sup,
    jacobian_bound_check,
    jacobian_factor,
    localized_restriction_constant,
    refined_ratio,
)
from .constants import (
    ThresholdReport,
    asymmetric_threshold,
    known_constants,
    precompactness_report,
    symmetric_threshold,
)
from .extremizer import (
    ExtremizeConfig,
    ExtremizerResult,
    adjoint_extension,
    extremize,
    symmetry_normalize,
)
from .fourier import forward_fourier, inverse_fourier
from .grids import SpectralGrid, WaveFunction, inner_product, l2_norm
from .norms import (
    WindowConfig,
    evaluate_extension_norm,
    mixed_norm,
    nonendpoint_ratio,
    strichartz_ratio,
)
from .profiles import (
    ExtractionConfig,
    ParamSequence,
    cross_strichartz_norm,
    greedy_bubble_extraction,
    hermite_dictionary,
    profile_operator,
    vdc_decay_fit,
    weak_overlap,
)
from .propagator import (
    SpaceTimeField,
    evolve_window,
    fractional_derivative,
    fractional_flow,
)
from .symmetry import ProfileParams, apply_symmetry, gaussian_packet
