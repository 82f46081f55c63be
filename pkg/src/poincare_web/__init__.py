"""Linearizers (Poincaré functions) of polynomials at repelling fixed points.

Series construction, evaluation at huge arguments through the functional
equation, growth estimates, and numerical certificates for whether the
fast-escaping level sets of the linearizer form a web.
"""

from .bigcomplex import BigComplex
from .config import RunConfig, load_config, parse_config
from .dynamics import (
    CriticalOrbit,
    FixedPointClass,
    FixedPointInfo,
    affine_symmetries,
    classify,
    critical_escape,
    find_fixed_points,
    nearest_fixed_point,
    polynomial_roots,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    NotRepellingError,
    OutOfRangeError,
    PoincareWebError,
    PreconditionError,
)
from .escape import ClosedCurve, Connectivity, ConnectivityVerdict, component_verdict, escape_curve, potential
from .growth import ModulusProfile, max_modulus, min_modulus, modulus_profile, order_estimate, theoretical_order
from .linearizer import (
    EvalOutcome,
    LinearizerSeries,
    conjugate_linearizer,
    eval_L,
    eval_L_array,
    eval_L_derivative,
    invert_series,
    koenigs_series,
    load_series,
    rescale_series,
    residual,
    save_series,
    validated_radius,
)
from .pipeline import run_config
from .polynomial import (
    AffineMap,
    GrowthBounds,
    Polynomial,
    escape_radius,
    filled_julia_bound,
    iterate_log_bounds,
    q_n,
)
from .render import RasterImage, render_levels
from .report import write_report
from .singular import singular_sets, verify_Cv_characterization
from .web import (
    CurveScaling,
    LevelParams,
    RingCertificate,
    WebReport,
    WebVerdict,
    build_web,
    choose_R,
    curve_scaling,
    falsify_web,
    level_membership,
    ring_certificate,
    verify_fast_growth,
    verify_regularity,
)

__version__ = "0.1.0"
