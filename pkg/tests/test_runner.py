import pytest

from blackbench import (
    AlgorithmFactory,
    MINI_BBOB,
    build_problem,
    builtin_factory,
    derive_seed,
    run_problem,
    run_suite,
)
from blackbench.runner import BudgetPolicy

from conftest import scripted_factory


def fresh(index=0, base_seed=1):
    return build_problem(MINI_BBOB, index, base_seed=base_seed)


def test_budget_policy_parse():
    single = BudgetPolicy.parse("30")
    assert single.mode == "single" and single.multipliers() == (30,)
    sched = BudgetPolicy.parse("3,10,30")
    assert sched.mode == "schedule" and sched.multipliers() == (3, 10, 30)
    assert BudgetPolicy().budget(5) == 15
    with pytest.raises(ValueError):
        BudgetPolicy.parse("")
    with pytest.raises(ValueError):
        BudgetPolicy.parse("30,10")


def test_budget_cap_is_exact():
    problem = fresh()
    summary = run_problem(problem, builtin_factory("random-search", 1), budget=6)
    assert summary.evaluations == 6
    assert problem.evaluations == 6
    assert not summary.final_target_hit
    assert summary.restarts == 1  # random search never restarts by itself


def test_final_target_stops_after_one_evaluation():
    problem = fresh()
    x_opt = problem.descriptor.x_opt
    factory = scripted_factory(lambda view, restart: [list(x_opt), [0.0, 0.0]])
    summary = run_problem(problem, factory, budget=60)
    assert summary.evaluations == 1
    assert summary.final_target_hit


def test_budget_cap_beats_a_late_final_hit():
    # would hit the optimum at evaluation 12, but the budget is 3n = 6
    problem = fresh()
    x_opt = list(problem.descriptor.x_opt)

    def points(view, restart):
        return [[4.9, 4.9]] * 11 + [x_opt]

    summary = run_problem(problem, scripted_factory(points), budget=6)
    assert summary.evaluations == 6
    assert not summary.final_target_hit


def test_runtime_firewall_factory_sees_view_only():
    from blackbench.problem import AlgorithmView

    received = []

    def make(view, run_seed, restart):
        received.append((view, run_seed, restart))

        def gen():
            yield [4.9, 4.9]

        return gen()

    run_problem(fresh(), AlgorithmFactory("probe", seed=3, make=make), budget=2)
    for view, run_seed, restart in received:
        assert type(view) is AlgorithmView  # frozen dataclass, fixed field set
        assert isinstance(run_seed, int) and isinstance(restart, int)


def test_restart_accumulation_no_counter_reset():
    # self-terminates every 50 evaluations; budget 300 = 6 full starts
    problem = fresh(MINI_BBOB.suite_index(3, 1, 0))  # n=10
    assert problem.dimension == 10
    far = [4.9] * 10  # far from any optimum in [-4,4]^10

    factory = scripted_factory(lambda view, restart: [far] * 50)
    summary = run_problem(problem, factory, budget=30 * 10)
    assert summary.evaluations == 300
    assert problem.evaluations == 300
    assert summary.restarts == 6
    assert not summary.aborted


def test_mid_restart_budget_truncation():
    problem = fresh()
    factory = scripted_factory(lambda view, restart: [[4.9, 4.9]] * 50)
    summary = run_problem(problem, factory, budget=70)
    assert summary.evaluations == 70  # second start truncated at 20
    assert summary.restarts == 2


def test_restart_seeds_are_pure_function_of_seed_and_ordinal():
    seen = []

    def points(view, restart):
        return []

    def make(view, run_seed, restart):
        seen.append((restart, run_seed))

        def gen():
            yield [4.9, 4.9]

        return gen()

    factory = AlgorithmFactory("probe", seed=17, make=make)
    problem = fresh()
    run_problem(problem, factory, budget=4)
    problem_seed = derive_seed(17, problem.descriptor.suite_index)
    assert seen == [(r, derive_seed(problem_seed, r)) for r in range(4)]


def test_permanent_self_termination_stops_restarting():
    calls = []

    def make(view, run_seed, restart):
        calls.append(restart)

        def gen():
            return
            yield  # pragma: no cover

        return gen()

    factory = AlgorithmFactory("quitter", seed=1, make=make)
    summary = run_problem(fresh(), factory, budget=100)
    assert summary.evaluations == 0
    assert calls == [0]  # no endless restart spinning


def test_algorithm_exception_aborts_and_flags():
    def make(view, run_seed, restart):
        def gen():
            yield [0.0, 0.0]
            raise RuntimeError("algorithm bug")

        return gen()

    factory = AlgorithmFactory("buggy", seed=1, make=make)
    summary = run_problem(fresh(), factory, budget=100)
    assert summary.aborted
    assert summary.evaluations == 1  # partial data kept


def test_bad_proposal_aborts_and_flags():
    factory = scripted_factory(lambda view, restart: [[0.0, 0.0, 0.0]])  # wrong length
    summary = run_problem(fresh(), factory, budget=10)
    assert summary.aborted
    assert summary.evaluations == 0


def test_run_problem_requires_fresh_problem():
    problem = fresh()
    problem.evaluate([0.0, 0.0])
    with pytest.raises(ValueError):
        run_problem(problem, builtin_factory("random-search", 1), budget=10)


def test_budget_hint_is_remaining_budget():
    hints = []

    def make(view, run_seed, restart):
        hints.append(view.budget_hint)

        def gen():
            for _ in range(50):
                yield [4.9, 4.9]

        return gen()

    factory = AlgorithmFactory("hints", seed=1, make=make)
    run_problem(fresh(), factory, budget=120)
    assert hints == [120, 70, 20]


def test_run_suite_counts_and_one_run_rule():
    factory = builtin_factory("random-search", 1)
    log = run_suite(MINI_BBOB, factory, 3, base_seed=1)
    indices = [b.suite_index for b in log.blocks]
    assert len(indices) == 360  # 6 dims x 4 functions x 15 instances
    assert indices == sorted(indices)
    assert len(set(indices)) == len(indices)
    for block in log.blocks:
        assert block.total_evaluations <= 3 * block.dimension


def test_run_suite_budget_free_accumulation():
    # random search never self-terminates, so every block exhausts k x n
    factory = builtin_factory("random-search", 1)
    log = run_suite(MINI_BBOB, factory, 3, base_seed=1, dimensions=(2, 3))
    for block in log.blocks:
        if not block.final_target_hit:
            assert block.total_evaluations == 3 * block.dimension


def test_run_suite_parallel_equals_serial():
    factory = builtin_factory("random-search", 5)
    serial = run_suite(MINI_BBOB, factory, 5, base_seed=2, dimensions=(2,))
    parallel = run_suite(MINI_BBOB, factory, 5, base_seed=2, dimensions=(2,), threads=4)
    assert serial == parallel


def test_run_suite_dimension_filter():
    factory = builtin_factory("random-search", 1)
    log = run_suite(MINI_BBOB, factory, 3, base_seed=1, dimensions=(5,))
    assert {b.dimension for b in log.blocks} == {5}
    assert len(log.blocks) == 60


def test_nested_budgets_hit_prefix_property():
    for name in ("random-search", "local-search-1p1"):
        factory = builtin_factory(name, 7)
        small = run_suite(MINI_BBOB, factory, 3, base_seed=3, dimensions=(2,))
        large = run_suite(MINI_BBOB, factory, 30, base_seed=3, dimensions=(2,))
        for sb, lb in zip(small.blocks, large.blocks):
            assert sb.suite_index == lb.suite_index
            small_records = [(r.target_precision, r.evaluations, r.f_observed)
                             for r in sb.records]
            large_records = [(r.target_precision, r.evaluations, r.f_observed)
                             for r in lb.records]
            assert large_records[: len(small_records)] == small_records
