import pytest

from blackbench import AlgorithmFactory, MINI_BBOB, build_problem


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for status, key in (("PASS", "passed"), ("FAIL", "failed")):
        for report in terminalreporter.stats.get(key, []):
            if "test_acceptance" in report.nodeid and report.when == "call":
                name = report.nodeid.split("::")[-1]
                lines.append((name, status))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, status in lines:
            terminalreporter.write_line(f"{status}  {name}")


@pytest.fixture
def sphere_problem():
    """mini-bbob f1, instance 1, n=2, base seed 0."""
    return build_problem(MINI_BBOB, 0, base_seed=0)


def identity_sphere_problem(dimension=2, targets=None):
    """A bare sphere with x_opt = 0 and f_opt = 0 (identity instance)."""
    from blackbench.functions import sphere
    from blackbench.problem import Problem, ProblemDescriptor, default_targets

    descriptor = ProblemDescriptor(
        function_id=1,
        instance_id=1,
        dimension=dimension,
        suite_index=0,
        f_opt=0.0,
        x_opt=(0.0,) * dimension,
        target_precisions=tuple(targets) if targets else default_targets(),
    )
    return Problem(
        descriptor,
        raw=sphere,
        raw_optimum=(0.0,) * dimension,
        lower_bounds=(-5.0,) * dimension,
        upper_bounds=(5.0,) * dimension,
    )


def scripted_factory(points_per_start, name="scripted", seed=0):
    """Algorithm that proposes a fixed point list per start, then terminates."""

    def make(view, run_seed, restart):
        def gen():
            for x in points_per_start(view, restart):
                yield list(x)

        return gen()

    return AlgorithmFactory(name=name, seed=seed, make=make)
