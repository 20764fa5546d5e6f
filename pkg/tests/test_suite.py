import json
import os

import pytest

from blackbench import MINI_BBOB, SuiteLayout, build_problem
from blackbench.functions import IMPLEMENTED_IDS
from blackbench.suite import (
    domain_of_interest,
    get_layout,
    instance_seed,
    load_layout,
    parse_layout_file,
)

DATA = os.path.join(os.path.dirname(__file__), "data")


def test_layout_shape():
    assert MINI_BBOB.dimensions == (2, 3, 5, 10, 20, 40)
    assert MINI_BBOB.function_ids == tuple(range(1, 25))
    assert MINI_BBOB.instances == tuple(range(1, 16))
    assert MINI_BBOB.problem_count == 2160


def test_f1_first_instance_indices():
    indices = [MINI_BBOB.suite_index(d, 1, 0) for d in range(6)]
    assert indices == [0, 360, 720, 1080, 1440, 1800]


def test_f8_first_instance_indices():
    indices = [MINI_BBOB.suite_index(d, 8, 0) for d in range(6)]
    assert indices == [105, 465, 825, 1185, 1545, 1905]


def test_degenerate_layout_single_cell():
    layout = SuiteLayout("one", (2,), (1,), (1,))
    assert layout.problem_count == 1
    assert layout.suite_index(0, 1, 0) == 0
    assert layout.decompose(0) == (0, 1, 0)


def test_index_bijection_and_inverse():
    seen = set()
    for d_rank, dimension in enumerate(MINI_BBOB.dimensions):
        for function_id in MINI_BBOB.function_ids:
            for i_rank in range(len(MINI_BBOB.instances)):
                index = MINI_BBOB.suite_index(d_rank, function_id, i_rank)
                assert MINI_BBOB.decompose(index) == (d_rank, function_id, i_rank)
                seen.add(index)
    assert seen == set(range(MINI_BBOB.problem_count))


def test_index_out_of_range():
    with pytest.raises(IndexError):
        MINI_BBOB.suite_index(6, 1, 0)
    with pytest.raises(IndexError):
        MINI_BBOB.suite_index(0, 25, 0)
    with pytest.raises(IndexError):
        MINI_BBOB.suite_index(0, 1, 15)
    with pytest.raises(IndexError):
        MINI_BBOB.decompose(2160)
    with pytest.raises(IndexError):
        MINI_BBOB.decompose(-1)


def test_build_is_deterministic():
    a = build_problem(MINI_BBOB, 105, base_seed=3)
    b = build_problem(MINI_BBOB, 105, base_seed=3)
    assert a.descriptor == b.descriptor
    c = build_problem(MINI_BBOB, 105, base_seed=4)
    assert c.descriptor.x_opt != a.descriptor.x_opt


def test_unimplemented_slot_raises():
    index = MINI_BBOB.suite_index(0, 4, 0)
    with pytest.raises(NotImplementedError):
        build_problem(MINI_BBOB, index, base_seed=0)


def test_implemented_indices():
    indices = MINI_BBOB.implemented_indices()
    assert len(indices) == 6 * 4 * 15
    assert all(MINI_BBOB.is_implemented(i) for i in indices)
    dim2 = MINI_BBOB.implemented_indices((2,))
    assert len(dim2) == 60
    assert all(i < 360 for i in dim2)


def test_x_opt_within_instance_range_for_all_problems():
    for index in MINI_BBOB.implemented_indices():
        descriptor = build_problem(MINI_BBOB, index, base_seed=1).descriptor
        assert all(-4.0 <= x <= 4.0 for x in descriptor.x_opt)
        assert -100.0 <= descriptor.f_opt <= 100.0
        assert descriptor.f_opt == round(descriptor.f_opt, 2)


def test_optimum_consistency_all_problems():
    # shift composition is exact: evaluating at x_opt returns f_opt exactly
    for index in MINI_BBOB.implemented_indices():
        problem = build_problem(MINI_BBOB, index, base_seed=1)
        d = problem.descriptor
        assert problem.evaluate(list(d.x_opt)) == d.f_opt


def test_instances_are_distinct():
    for function_id in sorted(IMPLEMENTED_IDS):
        opts = set()
        for i_rank in range(15):
            index = MINI_BBOB.suite_index(0, function_id, i_rank)
            opts.add(build_problem(MINI_BBOB, index, base_seed=1).descriptor.x_opt)
        assert len(opts) == 15


def test_golden_instances_frozen_values():
    with open(os.path.join(DATA, "golden_instances.json"), encoding="utf-8") as fh:
        golden = json.load(fh)
    assert len(golden) == 24
    for entry in golden:
        d_rank = MINI_BBOB.dimensions.index(entry["dimension"])
        index = MINI_BBOB.suite_index(d_rank, entry["function"], entry["instance"] - 1)
        descriptor = build_problem(MINI_BBOB, index, entry["base_seed"]).descriptor
        assert list(descriptor.x_opt) == entry["x_opt"]
        assert descriptor.f_opt == entry["f_opt"]


def test_golden_f1_n2_matches_hand_executed_chain():
    """Replay the documented RNG chain with straight-line code."""
    mask = (1 << 64) - 1
    state = instance_seed(0, 1, 1, 2)
    uniforms = []
    for _ in range(3):
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        uniforms.append(((z ^ (z >> 31)) >> 11) * 2.0**-53)
    expected_x_opt = tuple(-4.0 + 8.0 * u for u in uniforms[:2])
    expected_f_opt = round(-100.0 + 200.0 * uniforms[2], 2)
    descriptor = build_problem(MINI_BBOB, 0, base_seed=0).descriptor
    assert descriptor.x_opt == expected_x_opt
    assert descriptor.f_opt == expected_f_opt


def test_domain_of_interest():
    lower, upper = domain_of_interest(2)
    assert lower == (-5.0, -5.0) and upper == (5.0, 5.0)
    lower, upper = domain_of_interest(40)
    assert len(lower) == 40 and set(lower) == {-5.0} and set(upper) == {5.0}


def test_all_optima_inside_domain():
    for index in MINI_BBOB.implemented_indices():
        problem = build_problem(MINI_BBOB, index, base_seed=2)
        assert all(
            lo <= x <= hi
            for x, lo, hi in zip(
                problem.descriptor.x_opt, problem.lower_bounds, problem.upper_bounds
            )
        )


def test_get_layout():
    assert get_layout("mini-bbob") is MINI_BBOB
    with pytest.raises(KeyError):
        get_layout("bbob-biobj")


def test_parse_layout_file(tmp_path):
    path = tmp_path / "custom.suite"
    path.write_text(
        "# toy layout\n"
        "name = toy\n"
        "dimensions = 2,5\n"
        "function_slots = 1-3, 8\n"
        "instances = 4\n"
    )
    layout = parse_layout_file(str(path))
    assert layout.name == "toy"
    assert layout.dimensions == (2, 5)
    assert layout.function_ids == (1, 2, 3, 8)
    assert layout.instances == (1, 2, 3, 4)
    assert load_layout(str(path)) == layout


def test_parse_layout_file_errors(tmp_path):
    bad = tmp_path / "bad.suite"
    bad.write_text("name = x\nnonsense line\n")
    with pytest.raises(ValueError, match="bad.suite:2"):
        parse_layout_file(str(bad))
    incomplete = tmp_path / "incomplete.suite"
    incomplete.write_text("name = x\n")
    with pytest.raises(ValueError, match="missing keys"):
        parse_layout_file(str(incomplete))
