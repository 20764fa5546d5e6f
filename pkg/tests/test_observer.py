import pytest

from blackbench import MINI_BBOB, build_problem
from blackbench.observer import (
    LogParseError,
    Observer,
    read_log,
    replay_hits,
    validate_log,
    write_log,
)
from blackbench.problem import default_targets
from blackbench.rng import Rng64

from conftest import identity_sphere_problem


def test_observe_returns_attached_problem():
    observer = Observer()
    problem = identity_sphere_problem()
    assert observer.observe(problem) is problem


def test_double_attach_rejected():
    observer = Observer()
    problem = identity_sphere_problem()
    observer.observe(problem)
    with pytest.raises(ValueError):
        observer.observe(problem)
    with pytest.raises(ValueError):
        Observer().observe(problem)


def test_hits_recorded_live_with_f_values():
    observer = Observer()
    p = observer.observe(identity_sphere_problem(targets=(1.0, 0.25)))
    p.evaluate([2.0, 0.0])   # f=4, no hit
    p.evaluate([0.8, 0.0])   # f=0.64, hits 1.0
    p.evaluate([0.3, 0.0])   # f=0.09, hits 0.25
    observer.finish_problem(p, restarts=1)
    block = observer.build_log().blocks[0]
    assert [(r.target_precision, r.evaluations) for r in block.records] == [
        (1.0, 2), (0.25, 3),
    ]
    assert block.records[0].f_observed == pytest.approx(0.64)
    assert block.total_evaluations == 3
    assert block.best_f == pytest.approx(0.09)


def test_never_evaluated_problem_yields_summary_only():
    observer = Observer()
    p = observer.observe(identity_sphere_problem())
    observer.finish_problem(p)
    block = observer.build_log().blocks[0]
    assert block.records == []
    assert block.total_evaluations == 0
    assert not block.final_target_hit


def test_blocks_sorted_by_suite_index_regardless_of_completion_order():
    observer = Observer()
    late = observer.observe(build_problem(MINI_BBOB, 360, base_seed=1))
    early = observer.observe(build_problem(MINI_BBOB, 0, base_seed=1))
    late.evaluate([0.0] * 3)
    observer.finish_problem(late)
    early.evaluate([0.0, 0.0])
    observer.finish_problem(early)
    log = observer.build_log()
    assert [b.suite_index for b in log.blocks] == [0, 360]


def test_round_trip_exact(tmp_path):
    observer = Observer(meta={"algorithm": "x", "base_seed": 1}, debug_trace=True)
    rng = Rng64(5)
    for index in (0, 1, 2):
        p = observer.observe(build_problem(MINI_BBOB, index, base_seed=1))
        for _ in range(10):
            p.evaluate([rng.uniform_in(-5, 5), rng.uniform_in(-5, 5)])
        observer.finish_problem(p, restarts=2)
    log = observer.build_log()
    path = tmp_path / "rt.log"
    write_log(log, str(path))
    assert read_log(str(path)) == log


def test_write_is_byte_deterministic(tmp_path):
    observer = Observer(meta={"algorithm": "x"})
    p = observer.observe(identity_sphere_problem())
    p.evaluate([0.5, 0.5])
    observer.finish_problem(p, restarts=1)
    log = observer.build_log()
    a, b = tmp_path / "a.log", tmp_path / "b.log"
    write_log(log, str(a))
    write_log(log, str(b))
    assert a.read_bytes() == b.read_bytes()


def test_truncated_line_is_a_parse_error(tmp_path):
    observer = Observer()
    p = observer.observe(identity_sphere_problem())
    p.evaluate([1.0, 1.0])
    observer.finish_problem(p)
    path = tmp_path / "trunc.log"
    write_log(observer.build_log(), str(path))
    content = path.read_text()
    path.write_text(content[:-20])
    with pytest.raises(LogParseError) as err:
        read_log(str(path))
    assert err.value.lineno == len(content.splitlines())


def test_malformed_line_names_line_number(tmp_path):
    path = tmp_path / "bad.log"
    path.write_text('{"kind": "meta"}\nnot json at all\n')
    with pytest.raises(LogParseError, match="bad.log:2"):
        read_log(str(path))


def test_first_line_must_be_meta(tmp_path):
    path = tmp_path / "nometa.log"
    path.write_text('{"kind": "problem", "index": 0}\n')
    with pytest.raises(LogParseError, match="first record"):
        read_log(str(path))


def test_records_outside_blocks_rejected(tmp_path):
    path = tmp_path / "stray.log"
    path.write_text(
        '{"kind": "meta"}\n'
        '{"kind": "hit", "index": 0, "target": 1.0, "evaluations": 1, "f": 0.5}\n'
    )
    with pytest.raises(LogParseError, match="outside"):
        read_log(str(path))


def test_replay_equivalence_from_debug_trace():
    observer = Observer(debug_trace=True)
    rng = Rng64(99)
    p = observer.observe(build_problem(MINI_BBOB, 30, base_seed=7))  # f3, instance 1, n=2
    for _ in range(200):
        p.evaluate([rng.uniform_in(-5, 5), rng.uniform_in(-5, 5)])
    observer.finish_problem(p, restarts=1)
    block = observer.build_log().blocks[0]
    assert len(block.trace) == 200
    assert replay_hits(block, default_targets()) == block.records


def test_trace_disabled_by_default():
    observer = Observer()
    p = observer.observe(identity_sphere_problem())
    p.evaluate([1.0, 1.0])
    observer.finish_problem(p)
    assert observer.build_log().blocks[0].trace == []


def test_hit_monotonicity_within_block():
    observer = Observer()
    rng = Rng64(3)
    p = observer.observe(build_problem(MINI_BBOB, 0, base_seed=3))
    for _ in range(500):
        p.evaluate([rng.uniform_in(-5, 5), rng.uniform_in(-5, 5)])
    observer.finish_problem(p)
    block = observer.build_log().blocks[0]
    evals = [r.evaluations for r in block.records]
    precisions = [r.target_precision for r in block.records]
    assert evals == sorted(evals)
    assert precisions == sorted(precisions, reverse=True)
    assert validate_log(observer.build_log()) == []


def test_validate_log_reports_violations():
    observer = Observer()
    p = observer.observe(identity_sphere_problem())
    p.evaluate([0.0, 0.0])
    observer.finish_problem(p)
    log = observer.build_log()
    log.blocks[0].total_evaluations = 0  # hit evaluations now exceed the total
    assert any("outside [1, total]" in v for v in validate_log(log))
