"""Simulation lab for two arbitrated quantum signature schemes.

Runs the honest three-party protocols end to end on an exact few-qubit
simulator and reproduces the attacks known against them, with
machine-checkable verdicts and deterministic, seed-replayable transcripts.
"""

from .qstate import (
    BellOutcome,
    BELL_ORDER,
    DeadQubit,
    DimensionMismatch,
    GroupCapExceeded,
    NonNormalized,
    NotFactored,
    Prng,
    QubitId,
    Registry,
    SimulationError,
    bell_outcome_bits,
)
from .qotp import (
    Convention,
    Key,
    KeyTooShort,
    QubitSequence,
    decrypt_concat,
    decrypt_e,
    encrypt_concat,
    encrypt_e,
    gen_key,
    transform_m,
    transform_m_inv,
)
from .protocol import (
    ConfigError,
    Hooks,
    MalformedLength,
    MessageSpec,
    PublicBoard,
    RunConfig,
    SignaturePackage1,
    SignaturePackage2,
    Transcript,
    Verdict,
    run_scheme,
    run_scheme1,
    run_scheme2,
    teleport_recover,
    trent_view,
)
from .attacks import (
    ATTACK_EVENT_TAGS,
    CASES_BY_SCHEME,
    DisputeCase,
    FORGED_SA,
    FalseRReport,
    IndistinguishabilityReport,
    InvalidCase,
    IpeReport,
    compare_trent_views,
    run_control_forged_sa,
    run_dispute,
    run_false_r,
    run_ipe,
)

__version__ = "0.1.0"
