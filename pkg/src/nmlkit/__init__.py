"""Exact, asymptotic and brute-force NML code lengths for exponential families."""

from .closed_form import (
    ClosedFormFamily,
    log_lpc_asymptotic,
    log_lpc_exponential_type,
    log_lpc_fixed_variance,
    log_lpc_table1,
    spec_lpc,
)
from .errors import (
    ConfigError,
    DataError,
    DomainError,
    EmptySelection,
    IntegrabilityError,
    NMLError,
    NoClosedForm,
    NonConvergence,
    NumericalError,
    PoleError,
    UnsupportedDimension,
)
from .fourier_engine import (
    PCResult,
    char_ratio,
    g_diag,
    lpc_fourier,
    lpc_gamma_known_scale,
    lpc_theorem1_mc,
    mle_char_fn_mc,
)
from .kernels import BACKEND
from .mdl import Dataset, SelectionReport, nml_code_length, select_model, sweep_asymptotic
from .models import (
    MODEL_IDS,
    ExpFamilyModel,
    Luckiness,
    ModelSpec,
    fisher_info,
    log_density,
    mle,
    registry_get,
)
from .oracle import OracleConfig, lpc_oracle_mc, lpc_oracle_quadrature, nml_normalization_check
from .quadrature import QuadConfig

__version__ = "0.1.0"
