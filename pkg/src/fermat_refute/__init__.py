"""Certificate-producing refutation filters for x**p + y**p == z**p."""
from .filters import (
    DEFAULT_MODULI,
    DEFAULT_PIPELINE,
    Candidate,
    Certificate,
    FilterId,
    Verdict,
    evaluate,
)
from .identities import ReductionWitness, theorem1_reduce
from .search import SearchConfig, SearchReport, merge_reports, oracle_check, run_search

__all__ = [
    "DEFAULT_MODULI",
    "DEFAULT_PIPELINE",
    "Candidate",
    "Certificate",
    "FilterId",
    "ReductionWitness",
    "SearchConfig",
    "SearchReport",
    "Verdict",
    "evaluate",
    "merge_reports",
    "oracle_check",
    "run_search",
    "theorem1_reduce",
]

__version__ = "0.1.0"
