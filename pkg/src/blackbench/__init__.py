"""Budget-free black-box optimization benchmarking harness."""

__version__ = "0.1.0"

from .algorithms import AlgorithmFactory, builtin_factory
from .observer import ExperimentLog, Observer, RuntimeRecord, read_log, write_log
from .problem import (
    AlgorithmView,
    ContractViolationError,
    Problem,
    ProblemDescriptor,
    UnsupportedOperationError,
    default_targets,
)
from .protocol import ExternalAlgorithm
from .rng import Rng64, derive_seed
from .runner import BudgetPolicy, RunSummary, run_problem, run_suite
from .suite import MINI_BBOB, SuiteLayout, build_problem, domain_of_interest, get_layout

__all__ = [
    "AlgorithmFactory",
    "AlgorithmView",
    "BudgetPolicy",
    "ContractViolationError",
    "ExperimentLog",
    "ExternalAlgorithm",
    "MINI_BBOB",
    "Observer",
    "Problem",
    "ProblemDescriptor",
    "Rng64",
    "RunSummary",
    "RuntimeRecord",
    "SuiteLayout",
    "UnsupportedOperationError",
    "build_problem",
    "builtin_factory",
    "default_targets",
    "derive_seed",
    "domain_of_interest",
    "get_layout",
    "read_log",
    "run_problem",
    "run_suite",
    "write_log",
]
