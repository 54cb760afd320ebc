"""nistab: negative-imaginary certification and feedback stability analysis."""

from .exceptions import NIStabError
from .interconnect import (
    AnalysisResult,
    ClosedLoop,
    Stability,
    StabilityVerdict,
    analyze,
    closed_loop,
    dc_gain_condition,
)
from .lyapunov import (
    InterconnectState,
    LyapunovCertificate,
    block_gram,
    dissipation_integral_check,
    gram_dc_equivalence,
    lyapunov_derivative,
    lyapunov_value,
    make_state,
)
from .nicert import (
    CertStatus,
    FrequencyGrid,
    FrequencyReport,
    NICertificate,
    SolverOptions,
    Verdict,
    default_grid,
    freq_ni_test,
    freq_sni_test,
    lmi_ni_certificate,
    positive_real_check,
    random_ni_system,
    sni_rank_condition,
    w_transfer_zero_check,
)
from .sim import SimulationTrace, simulate, trace_to_csv, v_monotone
from .statespace import ResidueReport, StateSpace, dc_gain, eval_tf, is_minimal, poles, residue_at_pole

__version__ = "0.1.0"

__all__ = [
    "AnalysisResult",
    "CertStatus",
    "ClosedLoop",
    "FrequencyGrid",
    "FrequencyReport",
    "InterconnectState",
    "LyapunovCertificate",
    "NICertificate",
    "NIStabError",
    "ResidueReport",
    "SimulationTrace",
    "SolverOptions",
    "Stability",
    "StabilityVerdict",
    "StateSpace",
    "Verdict",
    "analyze",
    "block_gram",
    "closed_loop",
    "dc_gain",
    "dc_gain_condition",
    "default_grid",
    "dissipation_integral_check",
    "eval_tf",
    "freq_ni_test",
    "freq_sni_test",
    "is_minimal",
    "gram_dc_equivalence",
    "lmi_ni_certificate",
    "lyapunov_derivative",
    "lyapunov_value",
    "make_state",
    "poles",
    "positive_real_check",
    "random_ni_system",
    "residue_at_pole",
    "simulate",
    "sni_rank_condition",
    "trace_to_csv",
    "v_monotone",
    "w_transfer_zero_check",
]
