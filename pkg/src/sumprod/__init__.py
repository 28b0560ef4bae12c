"""Finite-field sum-product machinery and exact checks of the |BA+C| lower-bound chain."""

from .bounds import (
    BoundReport,
    asymptotic_ratio,
    check_chain,
    energy_upper_check,
    exact_lower_bound,
    fourier_tail_check,
    holder_check,
    third_moment_check,
)
from .field import FieldSpec, char_value, field_arith, make_field, trace
from .setstats import (
    LineFamily,
    SubsetFq,
    b_a_plus_c,
    ba_plus_c,
    energy3,
    energy3_bruteforce,
    image_set,
    lines_from_bc,
    productset,
    rep_function,
    sumset,
)
from .spectral import fourier_fast, fourier_forward, orthogonality_sum, plancherel_defect

__version__ = "0.1.0"
