"""Orthogonal polynomials on the bi-circle: moments, recurrences, parameters and extension."""
import os as _os

# cap BLAS workers before numpy loads; 0 or unset leaves the library default
_threads = _os.environ.get("BICIRCLE_THREADS", "").strip()
if _threads.isdigit() and int(_threads) > 0:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .coeffs import CoeffLevel, CoeffSet, extract_coefficients, one_dim_verblunsky, verify_all  # noqa: E402
from .errors import BicircleError  # noqa: E402
from .extension import BaseData, extend_strip, reconstruct_outer_parameters, roundtrip_verify  # noqa: E402
from .moments import MomentTable, StablePolynomial, check_stability, compute_moments, inner_product  # noqa: E402
from .ortho import OrthoLevel, OrthoSystem, orthonormalize  # noqa: E402
from .params import ParameterField, crosscheck_parameters, detect_bernstein_szego, extract_parameters  # noqa: E402
from .reports import ResidualReport  # noqa: E402

__all__ = [
    "BaseData", "BicircleError", "CoeffLevel", "CoeffSet", "MomentTable", "OrthoLevel", "OrthoSystem",
    "ParameterField", "ResidualReport", "StablePolynomial", "check_stability", "compute_moments",
    "crosscheck_parameters", "detect_bernstein_szego", "extend_strip", "extract_coefficients",
    "extract_parameters", "inner_product", "one_dim_verblunsky", "orthonormalize",
    "reconstruct_outer_parameters", "roundtrip_verify", "verify_all",
]
