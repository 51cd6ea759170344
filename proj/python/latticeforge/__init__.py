"""Lattices from polynomial and skew-polynomial codes over number rings."""

import json
import os
from pathlib import Path

from . import _latticeforge as _core
from ._latticeforge import (
    DIVISOR_SEARCH_BUDGET,
    ENUMERATION_RANK_CAP,
    FIXTURE_DIR,
    PreconditionError,
    UnsupportedError,
    factor,
    lattice_invariants,
    minimum_and_kissing,
    selfcheck,
)

__all__ = [
    "DIVISOR_SEARCH_BUDGET",
    "ENUMERATION_RANK_CAP",
    "FIXTURE_DIR",
    "PreconditionError",
    "UnsupportedError",
    "factor",
    "lattice_invariants",
    "list_divisors",
    "load_scenario",
    "mismatches",
    "minimum_and_kissing",
    "run_scenario",
    "selfcheck",
]


def load_scenario(source):
    """Scenario dict from a dict, a JSON string, or a path."""
    if isinstance(source, dict):
        return source
    if isinstance(source, os.PathLike):
        return json.loads(Path(source).read_text())
    if source.lstrip().startswith("{"):
        return json.loads(source)
    return json.loads(Path(source).read_text())


def run_scenario(source, max_enum_rank=ENUMERATION_RANK_CAP, budget=DIVISOR_SEARCH_BUDGET):
    text = json.dumps(load_scenario(source))
    return json.loads(_core.run_scenario(text, max_enum_rank, budget))


def list_divisors(source, budget=DIVISOR_SEARCH_BUDGET):
    return json.loads(_core.list_divisors(json.dumps(load_scenario(source)), budget))


def mismatches(scenario, report):
    """Expected values in the scenario that the report does not reproduce."""
    return _core.expectation_mismatches(json.dumps(load_scenario(scenario)), json.dumps(report))
