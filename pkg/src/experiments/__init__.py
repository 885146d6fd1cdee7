"""
Batch experiments over the record graph, the samplers and the codec.
"""

from experiments.experiments_types import (
    AnalyticsConfig,
    CodecConfig,
    CompareConfig,
    ExitCode,
    MtpConfig,
    NamedLaw,
    PhaseConfig,
    RunOutcome,
    RunSettings,
    SimulateConfig,
)
from experiments.experiments_utils import (
    expected_class,
    finite_code_passed,
    fuzz_code,
    record_spec,
    reference_spec,
    run_analytics,
    run_codec,
    run_compare,
    run_mtp,
    run_phase,
    run_simulate,
)

__all__ = [
    "AnalyticsConfig",
    "CodecConfig",
    "CompareConfig",
    "ExitCode",
    "MtpConfig",
    "NamedLaw",
    "PhaseConfig",
    "RunOutcome",
    "RunSettings",
    "SimulateConfig",
    "expected_class",
    "finite_code_passed",
    "fuzz_code",
    "record_spec",
    "reference_spec",
    "run_analytics",
    "run_codec",
    "run_compare",
    "run_mtp",
    "run_phase",
    "run_simulate",
]
