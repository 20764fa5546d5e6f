"""Client SDK for the blackbench external-optimizer wire protocol.

Write an optimizer as a callback(view, evaluate) and hand it to solve_loop;
the SDK speaks the line protocol over stdin/stdout. No dependencies beyond
the standard library.
"""

__version__ = "0.1.0"

from .client import (
    ClientProblemView,
    Evaluator,
    ProtocolError,
    TellReply,
    solve_loop,
)
from .rng import Rng64, derive_seed

__all__ = [
    "ClientProblemView",
    "Evaluator",
    "ProtocolError",
    "Rng64",
    "TellReply",
    "derive_seed",
    "solve_loop",
]
