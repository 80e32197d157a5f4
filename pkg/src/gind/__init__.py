"""Generalized induced matrix norms ``max{||Ax||_c : ||x||_d = 1}``."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    ASCENT_SANDWICH,
    EXACT_COLUMN,
    EXACT_MONOMIAL,
    EXACT_SIGN_ENUM,
    EXACT_SPECTRAL,
    GindResult,
    classical_norms,
    column_operator,
    column_sum_operator,
    gind,
    matrix_norm_bounds,
    predicted_column_norms,
    ratio,
    submult_defect,
)
from .norms import (  # noqa: E402
    L1,
    L2,
    LINF,
    Lp,
    Transformed,
    dual_norm_eval,
    dual_vector,
    norm_eval,
    parse_norm_spec,
    scaled,
)
from .theorems import (  # noqa: E402
    algebra_norm_test,
    extremal_ratio_witness,
    gi_congruent,
    min_algebra_scale,
    recover_vector_norms,
    transformed_gind_check,
    unitary_invariance_probe,
)
