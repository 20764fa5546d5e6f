"""Wire protocol for benchmarking optimizers running as subprocesses.

Transport is the subprocess's standard streams: one JSON object per line,
UTF-8, with a `kind` field. The runner opens each start by sending
`problem_start`; afterwards the exchange is strictly alternating, one runner
reply per algorithm message:

  algorithm -> ask {x}            runner -> tell {f, evaluations, final_target_hit}
                                  or problem_end {evaluations}  (run over, no evaluation)
  algorithm -> final_target {}    runner -> final_target {hit}
  algorithm -> done {error?}      runner -> problem_end {evaluations}

`problem_start` carries exactly the AlgorithmView fields: problem identity
never crosses the wire. A `done` with an `error` field flags the run as
aborted. The complete message-by-message description lives in
docs/protocol.md.
"""

from __future__ import annotations

import json
import logging
import shlex
import subprocess
from dataclasses import dataclass

from .problem import AlgorithmView, Problem
from .rng import derive_seed

logger = logging.getLogger(__name__)

class ProtocolError(RuntimeError):
    """A message violated the wire protocol."""


def encode_problem_start(view: AlgorithmView) -> str:
    return json.dumps({"kind": "problem_start", **view.to_dict()})


def encode_tell(f: float, evaluations: int, final_target_hit: bool) -> str:
    return json.dumps({
        "kind": "tell",
        "f": f,
        "evaluations": evaluations,
        "final_target_hit": final_target_hit,
    })


def encode_final_target(hit: bool) -> str:
    return json.dumps({"kind": "final_target", "hit": hit})


def encode_problem_end(evaluations: int) -> str:
    return json.dumps({"kind": "problem_end", "evaluations": evaluations})


def encode_error(message: str) -> str:
    return json.dumps({"kind": "error", "message": message})


def parse_message(line: str) -> dict:
    try:
        message = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"malformed message: {exc.msg}: {line!r}") from None
    if not isinstance(message, dict) or not isinstance(message.get("kind"), str):
        raise ProtocolError(f"message must be an object with a string 'kind': {line!r}")
    return message


@dataclass(frozen=True)
class ServeSummary:
    """Outcome of serving one problem to a subprocess."""

    suite_index: int
    budget: int
    evaluations: int
    best_f: float
    final_target_hit: bool
    restarts: int
    aborted: bool
    tells_sent: int


class _Session:
    """Line-discipline wrapper around the subprocess pipes."""

    def __init__(self, proc: subprocess.Popen):
        self.proc = proc

    def send(self, line: str) -> None:
        try:
            self.proc.stdin.write(line + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise ProtocolError(f"subprocess pipe closed: {exc}") from None

    def receive(self) -> dict:
        line = self.proc.stdout.readline()
        if line == "":
            raise ProtocolError("subprocess closed its output (crash or early exit)")
        return parse_message(line)


def serve_problem(problem: Problem, session: _Session, budget: int) -> ServeSummary:
    """Answer a subprocess's messages for one budgeted problem run.

    Restarts are driven by the runner: every algorithm-initiated `done` with
    budget left triggers a fresh `problem_start`. Budget exhaustion and
    final-target hits are answered with `problem_end` instead of an
    evaluation; a client that keeps asking anyway is aborted after a few
    refusals.
    """
    restarts = 0
    aborted = False
    tells = 0
    try:
        while problem.evaluations < budget and not problem.final_target_hit():
            view = problem.algorithm_view(budget_hint=budget - problem.evaluations)
            session.send(encode_problem_start(view))
            restarts += 1
            start_evaluations = problem.evaluations
            start_over = False
            while not start_over:
                message = session.receive()
                kind = message["kind"]
                if kind == "ask":
                    if problem.evaluations >= budget or problem.final_target_hit():
                        session.send(encode_problem_end(problem.evaluations))
                        start_over = True
                        continue
                    x = message.get("x")
                    if not isinstance(x, list) or not all(
                        isinstance(v, (int, float)) for v in x
                    ):
                        raise ProtocolError(f"ask requires a numeric vector 'x': {message!r}")
                    f = problem.evaluate([float(v) for v in x])
                    session.send(encode_tell(f, problem.evaluations, problem.final_target_hit()))
                    tells += 1
                elif kind == "final_target":
                    session.send(encode_final_target(problem.final_target_hit()))
                elif kind == "done":
                    session.send(encode_problem_end(problem.evaluations))
                    if message.get("error"):
                        raise ProtocolError(f"client reported failure: {message['error']}")
                    if problem.evaluations == start_evaluations:
                        # a start that never evaluated would restart forever
                        return _summary(problem, budget, restarts, aborted, tells)
                    start_over = True
                else:
                    raise ProtocolError(f"unexpected message kind {kind!r}")
    except Exception as exc:  # protocol violations, crashes, bad-x contract errors
        logger.warning(
            "problem %d: external run aborted: %s",
            problem.descriptor.suite_index, exc,
        )
        aborted = True
        try:
            session.send(encode_error(str(exc)))
        except ProtocolError:
            pass
    return _summary(problem, budget, restarts, aborted, tells)


def _summary(problem, budget, restarts, aborted, tells) -> ServeSummary:
    return ServeSummary(
        suite_index=problem.descriptor.suite_index,
        budget=budget,
        evaluations=problem.evaluations,
        best_f=problem.best_f,
        final_target_hit=problem.final_target_hit(),
        restarts=restarts,
        aborted=aborted,
        tells_sent=tells,
    )


class ExternalAlgorithm:
    """Adapter running an external optimizer command per problem.

    The command may contain a `{seed}` placeholder, replaced with the
    per-problem seed derived from (algorithm seed, suite index) -- the same
    derivation builtins use, so a client applying the documented per-restart
    derivation reproduces a builtin stream exactly.
    """

    def __init__(self, command: str, seed: int, name: str | None = None):
        self.command = command
        self.seed = seed
        self.name = name or f"external:{shlex.split(command)[0]}"

    def run_problem(self, problem: Problem, budget: int) -> ServeSummary:
        problem_seed = derive_seed(self.seed, problem.descriptor.suite_index)
        argv = [
            part.replace("{seed}", str(problem_seed)) for part in shlex.split(self.command)
        ]
        proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        try:
            summary = serve_problem(problem, _Session(proc), budget)
        finally:
            try:
                proc.stdin.close()
            except OSError:
                pass
            try:
                proc.wait(timeout=10)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()
        return summary
