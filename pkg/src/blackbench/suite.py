"""Suite layouts, index arithmetic, and deterministic instance generation.

A suite spans dimensions x function slots x instances in dimension-major
order. Instances are pure translations: the optimum is drawn uniformly in
[-4, 4]^n and the value offset uniformly in [-100, 100] (rounded to two
decimals), both from a splitmix64 chain seeded per problem.
"""

from __future__ import annotations

from dataclasses import dataclass

from .functions import IMPLEMENTED_IDS, RAW_FUNCTIONS
from .problem import Problem, ProblemDescriptor, default_targets
from .rng import Rng64

DOMAIN_LOWER = -5.0
DOMAIN_UPPER = 5.0
X_OPT_RANGE = 4.0
F_OPT_RANGE = 100.0

# Per-problem seed mix; keeps (function, instance, dimension) chains disjoint.
_F_MULT = 1000003
_I_MULT = 10007


@dataclass(frozen=True)
class SuiteLayout:
    """Names the grid of problems a suite contains.

    function_ids are slots: some may be unimplemented and exist only so that
    suite indices line up with the full official numbering.
    """

    name: str
    dimensions: tuple[int, ...]
    function_ids: tuple[int, ...]
    instances: tuple[int, ...]

    def __post_init__(self):
        if not self.dimensions or not self.function_ids or not self.instances:
            raise ValueError("layout axes must be non-empty")
        if any(a >= b for a, b in zip(self.dimensions, self.dimensions[1:])):
            raise ValueError("dimensions must be strictly ascending")
        if len(set(self.function_ids)) != len(self.function_ids):
            raise ValueError("function_ids must be unique")
        if len(set(self.instances)) != len(self.instances):
            raise ValueError("instances must be unique")

    @property
    def problem_count(self) -> int:
        return len(self.dimensions) * len(self.function_ids) * len(self.instances)

    def suite_index(self, dimension_rank: int, function_id: int, instance_rank: int) -> int:
        """Dimension-major index of the (dimension, function, instance) triple."""
        if not 0 <= dimension_rank < len(self.dimensions):
            raise IndexError(f"dimension rank {dimension_rank} out of range")
        if not 0 <= instance_rank < len(self.instances):
            raise IndexError(f"instance rank {instance_rank} out of range")
        try:
            function_rank = self.function_ids.index(function_id)
        except ValueError:
            raise IndexError(f"function id {function_id} not in layout") from None
        per_dim = len(self.function_ids) * len(self.instances)
        return dimension_rank * per_dim + function_rank * len(self.instances) + instance_rank

    def decompose(self, suite_index: int) -> tuple[int, int, int]:
        """Inverse of suite_index: (dimension_rank, function_id, instance_rank)."""
        if not 0 <= suite_index < self.problem_count:
            raise IndexError(f"suite index {suite_index} out of range")
        per_dim = len(self.function_ids) * len(self.instances)
        dimension_rank, rest = divmod(suite_index, per_dim)
        function_rank, instance_rank = divmod(rest, len(self.instances))
        return dimension_rank, self.function_ids[function_rank], instance_rank

    def is_implemented(self, suite_index: int) -> bool:
        _, function_id, _ = self.decompose(suite_index)
        return function_id in IMPLEMENTED_IDS

    def implemented_indices(self, dimensions: tuple[int, ...] | None = None) -> list[int]:
        """Suite indices with an implemented function, optionally filtered to
        a subset of dimensions; ascending."""
        out = []
        for index in range(self.problem_count):
            d_rank, function_id, _ = self.decompose(index)
            if function_id not in IMPLEMENTED_IDS:
                continue
            if dimensions is not None and self.dimensions[d_rank] not in dimensions:
                continue
            out.append(index)
        return out


MINI_BBOB = SuiteLayout(
    name="mini-bbob",
    dimensions=(2, 3, 5, 10, 20, 40),
    function_ids=tuple(range(1, 25)),
    instances=tuple(range(1, 16)),
)

_BUILTIN_LAYOUTS = {MINI_BBOB.name: MINI_BBOB}


def domain_of_interest(dimension: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Per-coordinate search domain; the optimum always lies inside."""
    return (DOMAIN_LOWER,) * dimension, (DOMAIN_UPPER,) * dimension


def instance_seed(base_seed: int, function_id: int, instance_id: int, dimension: int) -> int:
    return (base_seed ^ (_F_MULT * function_id + _I_MULT * instance_id + dimension)) & (
        (1 << 64) - 1
    )


def build_problem(layout: SuiteLayout, suite_index: int, base_seed: int = 0) -> Problem:
    """Deterministically construct the problem at suite_index.

    The RNG chain draws the dimension x_opt components first, then f_opt.
    Unimplemented function slots raise NotImplementedError.
    """
    dimension_rank, function_id, instance_rank = layout.decompose(suite_index)
    if function_id not in IMPLEMENTED_IDS:
        raise NotImplementedError(
            f"function slot {function_id} is not implemented "
            f"(implemented: {sorted(IMPLEMENTED_IDS)})"
        )
    dimension = layout.dimensions[dimension_rank]
    instance_id = layout.instances[instance_rank]
    rng = Rng64(instance_seed(base_seed, function_id, instance_id, dimension))
    x_opt = tuple(rng.uniform_in(-X_OPT_RANGE, X_OPT_RANGE) for _ in range(dimension))
    f_opt = round(rng.uniform_in(-F_OPT_RANGE, F_OPT_RANGE), 2)
    descriptor = ProblemDescriptor(
        function_id=function_id,
        instance_id=instance_id,
        dimension=dimension,
        suite_index=suite_index,
        f_opt=f_opt,
        x_opt=x_opt,
        target_precisions=default_targets(),
    )
    raw = RAW_FUNCTIONS[function_id]
    lower, upper = domain_of_interest(dimension)
    return Problem(
        descriptor,
        raw=raw.evaluate,
        raw_optimum=raw.optimum(dimension),
        lower_bounds=lower,
        upper_bounds=upper,
    )


def get_layout(name: str) -> SuiteLayout:
    try:
        return _BUILTIN_LAYOUTS[name]
    except KeyError:
        raise KeyError(
            f"unknown suite {name!r} (builtin: {sorted(_BUILTIN_LAYOUTS)})"
        ) from None


def parse_layout_file(path: str) -> SuiteLayout:
    """Read a plain-text suite definition.

    Format: one `key = value` pair per line, `#` comments. Keys:
      name           suite name
      dimensions     comma-separated ascending positive integers
      function_slots comma-separated ids and/or a-b ranges (e.g. 1-24)
      instances      instance count N, meaning ids 1..N
    """
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = text.partition("=")
            values[key.strip()] = value.strip()
    missing = {"name", "dimensions", "function_slots", "instances"} - set(values)
    if missing:
        raise ValueError(f"{path}: missing keys: {sorted(missing)}")
    dimensions = tuple(int(v) for v in values["dimensions"].split(","))
    slots: list[int] = []
    for part in values["function_slots"].split(","):
        part = part.strip()
        if "-" in part:
            first, _, last = part.partition("-")
            slots.extend(range(int(first), int(last) + 1))
        else:
            slots.append(int(part))
    count = int(values["instances"])
    return SuiteLayout(
        name=values["name"],
        dimensions=dimensions,
        function_ids=tuple(slots),
        instances=tuple(range(1, count + 1)),
    )


def load_layout(name_or_path: str) -> SuiteLayout:
    """Resolve a suite argument: builtin name first, then definition file."""
    if name_or_path in _BUILTIN_LAYOUTS:
        return _BUILTIN_LAYOUTS[name_or_path]
    return parse_layout_file(name_or_path)
