"""Multi-window Gabor frames, Wiener amalgam norms, and the weighted-shift
operator algebra on periodic grids.

The package discretizes the line to a periodic grid of n = L*s samples and
builds, exactly at that scale: amalgam-space norms, Gabor analysis and
synthesis with Fejér-regularized partial sums, the Walnut weighted-shift
form of frame-type operators, the *-algebra of weighted shifts with
Neumann-series inversion, dual atoms of multi-window frames, and the
grid-refinement diagnostics for spectral invariance and dual-window
continuity.
"""

from ._kernels import BACKEND as kernel_backend
from .amalgam import (
    AmalgamParams,
    GaborCoefficients,
    amalgam_norm,
    amalgam_norm_report,
    conjugate_exponent,
    kothe_pairing,
    sequence_norm,
    sequence_norm_quadrature,
    solidity_check,
    translation_norm_bound_check,
)
from .errors import (
    ConfigError,
    GaborAmalgamError,
    GridMismatch,
    GridTooLarge,
    IndexMismatch,
    LatticeMismatch,
    NonCommensurateFrequency,
    NonCommensurateShift,
    NonIntegerPeriod,
    NotAFrame,
    NotConverged,
    OutOfRange,
    OutOfTable,
    SingularOperator,
)
from .frames import (
    ContinuityTable,
    DualAtomSet,
    FrameBounds,
    FrameInversion,
    MultiWindowSystem,
    continuity_diagnostic,
    dual_atoms,
    frame_bounds,
    frame_inequality_check,
    invert_frame_operator,
    lattice_commutation_check,
    multi_frame_operator,
    reconstruct,
)
from .gabor import (
    GaborSystem,
    analysis,
    fejer_weight,
    partial_sum,
    regularized_sum,
    synthesis,
    walnut_build,
    walnut_correlation,
    walnut_operator,
)
from .grid import (
    GridSpec,
    SampledFunction,
    TFLattice,
    TFShift,
    inner_product,
    lp_norm,
    modulate,
    sym_rep,
    tf_shift,
    translate,
)
from .shift_algebra import (
    NeumannInversion,
    ShiftOperator,
    coefficient_decay_profile,
    continuity_flag,
    neumann_inverse,
    operator_norm_bounds,
    quadratic_form_bounds,
)
from .weights import WeightSpec, check_submultiplicative, estimate_moderation_constant, weight_eval
from .windows import WindowSpec, make_window

__version__ = "0.1.0"
