"""Extremal band-limited approximation of truncated exponentials and their
subordinated and odd relatives, with numerical certificates."""
from .approximants import (
    ApproximantHandle,
    StepHandle,
    closed_form_error,
    eval_K,
    eval_K0,
    eval_L,
    eval_L0,
    eval_M,
    eval_M0,
)
from .base_functions import BaseParams, Kind, eval_b, eval_B, eval_B_second, eval_E0, eval_T, eval_T_prime
from .errors import BsxError, ConstraintViolation, DomainError, NonConvergence, Overflow
from .integral_oracle import ExponentialTarget, eval_I_k, lemma_bound, oracle_K_diff, oracle_M_diff
from .odd_variants import OddHandle, eval_K_odd, eval_L_odd, eval_M_odd, eval_T_odd
from .subordination import (
    Atoms,
    PowerDensity,
    SubordinatedHandle,
    TabulatedDensity,
    check_growth,
    closed_form_error_nu,
    eval_Knu,
    eval_Lnu,
    eval_Mnu,
    eval_Tnu,
    load_table,
    parse_measure,
)
from .verification import (
    Certificate,
    Claim,
    GridSpec,
    estimate_exponential_type,
    numeric_l1_error,
    verify_nodes,
    verify_one_sided,
    verify_sign_two_sided,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
