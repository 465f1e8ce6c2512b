"""Numerical workbench for chord-arc knot energies on closed curves.

Compute the inverse-square knot energy and its (alpha, p) family, their
first variation and bilinear decomposition, run a preconditioned gradient
flow, and evaluate the fractional-Sobolev and Lorentz-space diagnostics the
associated regularity theory is built on.
"""

from .analysis import (
    DecaySample,
    LorentzSpec,
    commutator_h,
    decreasing_rearrangement,
    gamma_term,
    iteration_lemma_check,
    lorentz_norm,
    morrey_decay_profile,
    multiplier_estimate_probe,
    normal_tangential_split,
)
from .curve import (
    ClosedCurve,
    CurveGeometry,
    PeriodicField,
    arclength_chart,
    bilipschitz_constant,
    circle,
    dump_curve,
    ellipse,
    geometry,
    injectivity_margin,
    intrinsic_distance,
    is_arclength,
    lissajous,
    load_curve,
    perturbed_circle,
    reparametrize_arclength,
    torus_knot,
    unit_length_circle,
)
from .energy import (
    QuadratureScheme,
    integrand_diagonal_limit,
    moebius_energy,
    ohara_energy,
    truncated_energy,
)
from .errors import (
    CalibrationUnstable,
    DegenerateCurve,
    DomainError,
    HypothesisViolated,
    InsufficientSamples,
    KnotEnergyError,
    NotArcLength,
    NotUnit,
    SelfIntersectionImminent,
)
from .flow import FlowOptions, FlowState, flow_step, minimize, sobolev_gradient, stationarity_report
from .spectral import (
    FourierMultiplier,
    SeminormSpec,
    besov_seminorm,
    calibrate_pairing_constant,
    frac_laplacian,
    gagliardo_pairing,
    gagliardo_pairing_limit,
    riesz_potential,
    spectral_pairing,
    truncated_h12_seminorm,
)
from .variation import (
    ELReport,
    TestField,
    el_residual,
    first_variation,
    first_variation_general,
    first_variation_gradient,
    first_variation_windowed,
    g_alpha,
    gradient_vector,
    normal_mode_field,
    q_form,
    q_limit,
    t1_form,
    t1_via_t_alpha,
    t2_form,
    t2_via_t_alpha,
    t_alpha_op,
    trig_basis_fields,
)

__version__ = "0.1.0"
