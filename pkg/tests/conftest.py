"""Shared fixtures: reference graphs and the seeded run corpus.

The run corpus (2,000 sampler runs with full prefix and pile checking) is
built once per session because two acceptance criteria and several unit
tests all read from it.
"""

from __future__ import annotations

import pytest

from treescore import make_grid, verify_run_products
from treescore.fixtures import (
    make_complete4,
    make_cycle,
    make_diamond,
    make_theta,
    make_twelve_county,
)

RUN_CORPUS_SPEC = {
    # (grid name, mode) -> (runs, base seed); 1,000 runs per mode in total.
    ("4x4", "deletion"): (500, 0),
    ("4x4", "mixed"): (500, 1000),
    ("5x5", "deletion"): (500, 2000),
    ("5x5", "mixed"): (500, 3000),
}


@pytest.fixture(scope="session")
def grid22():
    return make_grid(2, 2)


@pytest.fixture(scope="session")
def grid33():
    return make_grid(3, 3)


@pytest.fixture(scope="session")
def grid44():
    return make_grid(4, 4)


@pytest.fixture(scope="session")
def grid55():
    return make_grid(5, 5)


@pytest.fixture(scope="session")
def diamond():
    return make_diamond()


@pytest.fixture(scope="session")
def cycle4():
    return make_cycle(4)


@pytest.fixture(scope="session")
def theta3():
    return make_theta(3)


@pytest.fixture(scope="session")
def complete4():
    return make_complete4()


@pytest.fixture(scope="session")
def twelve_county():
    return make_twelve_county()


@pytest.fixture(scope="session")
def run_reports():
    """Prefix-bound reports over the seeded run corpus, pile tracking on."""
    grids = {"4x4": make_grid(4, 4), "5x5": make_grid(5, 5)}
    out = {}
    for (name, mode), (runs, seed) in RUN_CORPUS_SPEC.items():
        out[(name, mode)] = verify_run_products(
            grids[name], 4, 4, runs=runs, mode=mode, seed=seed, with_pebbles=True
        )
    return out
