"""Exact polynomial maps F = x + H over the rationals."""

from kellermap.errors import (
    InputError,
    KellerMapError,
    MathNegative,
    NoInverseError,
    PreconditionError,
    TheoremContradiction,
)
from kellermap.kernel import BACKEND
from kellermap.matrix import PolyMatrix, RationalMatrix, is_nilpotent, poly_det, unipotent_inverse
from kellermap.poly import Polynomial, parse_polynomial, substitute, univariate_gcd
from kellermap.polymap import (
    BoundReport,
    InverseResult,
    PolyMap,
    compose,
    conjugate_normalize,
    constant_kernel,
    decompose,
    degree_bound_report,
    euler_decompose,
    invert_fixed_point,
    invert_theorem3,
    is_keller,
    jacobian,
    line_injectivity_certificate,
    normalize,
    verify_ideal_remark,
)
from kellermap.druzkowski import DruzkowskiSpec, expand, kernel_equality_check, structural_jacobian

__version__ = "0.1.0"
