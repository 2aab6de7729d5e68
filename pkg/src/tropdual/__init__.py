"""Exact C-matrices, G-matrices and F-polynomials of cluster seed patterns,
with executable checks of the tropical duality identities."""

from .errors import (
    InvalidWord,
    MixedSigns,
    NotDivisible,
    NotSkewSymmetrizable,
    NotUnimodular,
    TropdualError,
)
from .fpoly import SparsePoly, analyze_f, f_step
from .matrix import (
    ExchangeMatrix,
    IntMat,
    determinant,
    find_skew_symmetrizer,
    int_inverse,
    jay,
    select,
    truncate_positive,
)
from .oracle import separation_check, symbolic_walk, tropical_y_walk
from .pattern import (
    ColumnSign,
    PatternPoint,
    Walker,
    mutate_c_unconditional,
    mutate_matrix,
    sign_of_column,
    step_general,
    step_left,
    step_right,
    walk,
    words_up_to,
)
from .verdict import Verdict
from .verify import (
    verify_auxiliary,
    verify_conjecture41,
    verify_inverse_column_fact,
    verify_scalar_identity,
    verify_sign_coherence,
    verify_step_left,
    verify_theorem,
)

__version__ = "0.1.0"
