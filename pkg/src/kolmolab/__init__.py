"""Desk-scale laboratory for conditional Kolmogorov complexity C(x|l(x))
and randomness deficiency on a fixed toy universal machine."""

from .tbvm import (
    DEFAULT_LIMITS,
    MachineOutcome,
    ParseError,
    Program,
    ResolutionStatus,
    RunLimits,
    parse,
    resolve,
    run,
    unparse,
    valid_programs,
)
from .dovetail import Discovery, StageCell, find_descriptions, schedule_stage
from .complexity import (
    ComplexityEstimate,
    ComplexityTable,
    UncertifiableAtBudget,
    build_table,
    count_below,
    exact,
    upper_bound,
)
from .randomness import (
    DeficiencyVerdict,
    EmptyInputError,
    StreamReport,
    analyze_stream,
    classify,
    deficiency_fraction,
    delta0,
)
from .generators import (
    SourceError,
    SourceSpec,
    bits_from_source,
    ingest_file,
    parse_source_uri,
    pattern_bits,
    pi_bits,
    sha1_stream,
)
from .certlab import (
    BoundedLowerBoundCertificate,
    BoundedLowerBoundStatement,
    NotFoundWithinBudget,
    WitnessExists,
    chaitin_gap,
    issue,
    search_high_complexity,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_LIMITS",
    "MachineOutcome",
    "ParseError",
    "Program",
    "ResolutionStatus",
    "RunLimits",
    "parse",
    "resolve",
    "run",
    "unparse",
    "valid_programs",
    "Discovery",
    "StageCell",
    "find_descriptions",
    "schedule_stage",
    "ComplexityEstimate",
    "ComplexityTable",
    "UncertifiableAtBudget",
    "build_table",
    "count_below",
    "exact",
    "upper_bound",
    "DeficiencyVerdict",
    "EmptyInputError",
    "StreamReport",
    "analyze_stream",
    "classify",
    "deficiency_fraction",
    "delta0",
    "SourceError",
    "SourceSpec",
    "bits_from_source",
    "ingest_file",
    "parse_source_uri",
    "pattern_bits",
    "pi_bits",
    "sha1_stream",
    "BoundedLowerBoundCertificate",
    "BoundedLowerBoundStatement",
    "NotFoundWithinBudget",
    "WitnessExists",
    "chaitin_gap",
    "issue",
    "search_high_complexity",
    "verify",
    "__version__",
]
