"""Arbitrary-precision complete elliptic integrals, exact Maclaurin series,
elementary two-sided bounds for K and a claim-driven verification harness."""

from .bounds import (
    BoundFamily,
    bound_eval,
    bound_values,
    check_bounds,
    crossover_r0,
    sharpness_witness,
    sign_change_scan,
    target_eval,
)
from .core import (
    EvalResult,
    Modulus,
    agm,
    arth_ratio,
    dk_dr,
    de_dr,
    e_minus_rp2k_over_r2,
    ell_e,
    ell_k,
    hyp_series,
    k_minus_e_over_r2,
)
from .errors import *  # noqa: F401,F403
from .functions import ClaimSet, FunctionId, fn_claims, fn_eval, list_functions, registry_json
from .precision import DEFAULT_BITS, PrecisionConfig
from .report import GridSpec, VerificationReport
from .series import PowerSeries, logratio_series, seq, seq_list
from .verifier import run_all, verify_convexity, verify_monotone, verify_range, verify_sequence, verify_series_coeffs

__version__ = "0.1.0"
