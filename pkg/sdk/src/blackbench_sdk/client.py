"""The solve loop: reads problem_start messages, runs a user callback with
an evaluator bound to the runner's pipes, and hands control back on
problem_end. Strictly one outbound message per inbound reply."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import Callable, Optional, TextIO

VIEW_FIELDS = (
    "dimension",
    "num_objectives",
    "num_constraints",
    "lower_bounds",
    "upper_bounds",
    "initial_solution",
    "budget_hint",
)


class ProtocolError(RuntimeError):
    """The runner side violated the wire protocol; carries the offending line."""


@dataclass(frozen=True)
class ClientProblemView:
    """Mirror of the runner's algorithm view; built solely from problem_start."""

    dimension: int
    num_objectives: int
    num_constraints: int
    lower_bounds: tuple[float, ...]
    upper_bounds: tuple[float, ...]
    initial_solution: tuple[float, ...]
    budget_hint: Optional[int]


@dataclass(frozen=True)
class TellReply:
    """What one evaluation returned."""

    f: float
    evaluations: int
    final_target_hit: bool


class _ProblemEnd(Exception):
    """Internal control flow: the runner closed the run on this problem."""


def _view_from_message(message: dict) -> ClientProblemView:
    unknown = set(message) - set(VIEW_FIELDS) - {"kind"}
    if unknown:
        # firewall on the client side too: never expose unexpected fields
        print(
            f"blackbench-sdk: dropping unknown problem_start fields {sorted(unknown)}",
            file=sys.stderr,
        )
    missing = set(VIEW_FIELDS) - set(message)
    if missing:
        raise ProtocolError(f"problem_start missing fields {sorted(missing)}")
    return ClientProblemView(
        dimension=message["dimension"],
        num_objectives=message["num_objectives"],
        num_constraints=message["num_constraints"],
        lower_bounds=tuple(message["lower_bounds"]),
        upper_bounds=tuple(message["upper_bounds"]),
        initial_solution=tuple(message["initial_solution"]),
        budget_hint=message["budget_hint"],
    )


class Evaluator:
    """Sends ask messages and returns the runner's tell replies.

    Raises the internal problem-end signal when the runner ends the run, so
    a callback that just keeps evaluating unwinds cleanly.
    """

    def __init__(self, stdin: TextIO, stdout: TextIO):
        self._stdin = stdin
        self._stdout = stdout
        self.last: Optional[TellReply] = None

    def _send(self, message: dict) -> None:
        self._stdout.write(json.dumps(message) + "\n")
        self._stdout.flush()

    def _receive(self) -> dict:
        line = self._stdin.readline()
        if line == "":
            raise ProtocolError("runner closed the stream mid-exchange")
        try:
            message = json.loads(line)
        except json.JSONDecodeError:
            raise ProtocolError(f"unparseable reply: {line!r}") from None
        if not isinstance(message, dict) or "kind" not in message:
            raise ProtocolError(f"reply without a kind: {line!r}")
        if message["kind"] == "error":
            raise ProtocolError(f"runner error: {message.get('message', line.strip())}")
        return message

    def __call__(self, x) -> TellReply:
        self._send({"kind": "ask", "x": [float(v) for v in x]})
        reply = self._receive()
        if reply["kind"] == "problem_end":
            raise _ProblemEnd
        if reply["kind"] != "tell":
            raise ProtocolError(f"expected tell, got {reply!r}")
        self.last = TellReply(reply["f"], reply["evaluations"], reply["final_target_hit"])
        return self.last

    def final_target_hit(self) -> bool:
        """Query the conclusive-termination state without evaluating."""
        self._send({"kind": "final_target"})
        reply = self._receive()
        if reply["kind"] != "final_target":
            raise ProtocolError(f"expected final_target, got {reply!r}")
        return bool(reply["hit"])


def solve_loop(
    callback: Callable[[ClientProblemView, Evaluator], None],
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
) -> int:
    """Serve problems until the runner closes the stream.

    For every problem_start, invokes callback(view, evaluate). A callback
    that returns normally ends the start with `done` (the runner may then
    restart it); a callback exception is reported as `done {error}` and the
    loop continues with the next problem. Returns the number of starts.
    """
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    starts = 0
    while True:
        line = stdin.readline()
        if line == "":
            return starts
        try:
            message = json.loads(line)
        except json.JSONDecodeError:
            raise ProtocolError(f"unparseable message: {line!r}") from None
        if not isinstance(message, dict) or message.get("kind") != "problem_start":
            raise ProtocolError(f"expected problem_start, got: {line!r}")
        view = _view_from_message(message)
        evaluator = Evaluator(stdin, stdout)
        starts += 1
        try:
            callback(view, evaluator)
        except _ProblemEnd:
            continue  # the runner already closed this run; nothing to send
        except ProtocolError:
            raise
        except Exception as exc:
            evaluator._send({"kind": "done", "error": f"{type(exc).__name__}: {exc}"})
            _await_problem_end(evaluator)
            continue
        evaluator._send({"kind": "done"})
        _await_problem_end(evaluator)


def _await_problem_end(evaluator: Evaluator) -> None:
    reply = evaluator._receive()
    if reply["kind"] != "problem_end":
        raise ProtocolError(f"expected problem_end after done, got {reply!r}")
