"""Benchmark problems and their published reference values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .abel import build_abel
from .lane_emden import build_lane_emden_standard, build_lane_emden_type, exact_lane_emden_type
from .reference import RefRow, ReferenceTable, reference_tables, table
from .squeezing_flow import DEFAULTS as SQUEEZING_DEFAULTS
from .squeezing_flow import build_squeezing_flow, nusselt
from .troesch import build_troesch


@dataclass(frozen=True)
class ProblemEntry:
    """How the CLI builds a problem: ``build(n, precision, params)``."""

    build: Callable
    default_n: int
    min_n: int
    interval: tuple[str, str]
    params: dict
    samples: tuple[str, ...]
    columns: tuple[str, ...]


def _squeezing(n, precision, params):
    return build_squeezing_flow(params, n, precision)


def _troesch(n, precision, params):
    params = dict(params)
    gamma = params.pop("gamma", "0.5")
    order = int(params.pop("sinh_order", 5))
    if params:
        raise KeyError(f"unknown parameter(s) {sorted(params)}; expected gamma, sinh_order")
    return build_troesch(n, gamma, order, precision)


def _no_params(builder):
    def build(n, precision, params):
        if params:
            raise KeyError(f"unknown parameter(s) {sorted(params)}; this problem takes none")
        return builder(n, precision)

    return build


_TENTHS = tuple(f"0.{k}" for k in range(1, 10))

PROBLEMS: dict[str, ProblemEntry] = {
    "squeezing-flow": ProblemEntry(
        _squeezing, 15, 5, ("0", "1"), {k: str(float(v)) for k, v in SQUEEZING_DEFAULTS.items()},
        ("0", "0.2", "0.4", "0.5", "0.6", "0.8", "1"), ("df", "theta"),
    ),
    "lane-emden-type": ProblemEntry(
        _no_params(build_lane_emden_type), 40, 2, ("0", "3"), {},
        ("0.01", "0.02", "0.05", "0.10", "0.20", "0.50", "0.70", "0.80", "0.90", "1.00", "1.5", "2.0", "2.5", "3.0"),
        ("y", "dy"),
    ),
    "abel": ProblemEntry(
        _no_params(build_abel), 10, 3, ("0", "1"), {}, _TENTHS + ("1.0",), ("y", "dy"),
    ),
    "lane-emden-standard": ProblemEntry(
        _no_params(build_lane_emden_standard), 12, 2, ("0", "2"), {},
        ("0.1", "0.3", "0.5", "0.7", "1.0", "1.5", "2.0"), ("y", "dy"),
    ),
    "troesch": ProblemEntry(
        _troesch, 10, 2, ("0", "1"), {"gamma": "0.5", "sinh_order": "5"}, _TENTHS, ("y", "dy"),
    ),
}


def build_problem(name: str, n: int | None = None, precision: int = 60, params: dict | None = None):
    try:
        entry = PROBLEMS[name]
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
    n = entry.default_n if n is None else n
    if n < entry.min_n:
        raise ValueError(f"{name} needs N >= {entry.min_n}")
    return entry.build(n, precision, params or {})


__all__ = [
    "PROBLEMS",
    "ProblemEntry",
    "RefRow",
    "ReferenceTable",
    "build_abel",
    "build_lane_emden_standard",
    "build_lane_emden_type",
    "build_problem",
    "build_squeezing_flow",
    "build_troesch",
    "exact_lane_emden_type",
    "nusselt",
    "reference_tables",
    "table",
]
