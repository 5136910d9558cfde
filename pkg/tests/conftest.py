"""Shared fixtures: the session toy world and its frozen attack runs.

The expensive 200-example attack runs are session-scoped so the harness,
toy-world, and acceptance tests all read the same frozen results.
"""

from __future__ import annotations

import time

import pytest

from sep_attack.attack import AttackConfig
from sep_attack.harness import equal_weights_baseline, run_attack
from sep_attack.toy import build_toy_world, materialize_toy_world


@pytest.fixture(scope="session")
def toy_world():
    return build_toy_world(seed=0, eval_size=200)


@pytest.fixture(scope="session")
def small_world():
    """Cheaper world for harness and report tests."""
    return build_toy_world(seed=1, train_size=250, eval_size=10)


@pytest.fixture(scope="session")
def materialized(tmp_path_factory):
    """On-disk toy world in the formats the command-line entry points read."""
    out = tmp_path_factory.mktemp("toy_world")
    return materialize_toy_world(out, seed=0, eval_size=12)


@pytest.fixture(scope="session")
def toy_cfg():
    return AttackConfig(seed=0)


@pytest.fixture(scope="session")
def sep_run(toy_world, toy_cfg):
    """(records, summary, elapsed_seconds) for the frozen 200-example run."""
    started = time.perf_counter()
    records, summary = run_attack(
        toy_world.dataset, toy_world.ensemble, toy_world.victim, toy_world.lexicon, toy_cfg
    )
    return records, summary, time.perf_counter() - started


@pytest.fixture(scope="session")
def baseline_summary(toy_world, toy_cfg):
    return equal_weights_baseline(
        toy_world.dataset, toy_world.ensemble, toy_world.victim, toy_world.lexicon, toy_cfg
    )
