"""Shared fixtures: the canonical scenario corpus, loaded and simulated once."""

import glob
import os

import pytest

from bladesim import Scenario, load_scenario, run_simulation

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "scenarios")


def scenario_paths():
    paths = sorted(glob.glob(os.path.join(SCENARIO_DIR, "s*.yaml")))
    assert len(paths) == 10, "expected the 10-file canonical corpus"
    return paths


@pytest.fixture(scope="session")
def corpus():
    """name -> Scenario for every corpus file."""
    out = {}
    for path in scenario_paths():
        sc = load_scenario(path)
        out[sc.name] = sc
    return out


@pytest.fixture(scope="session")
def corpus_runs(corpus):
    """name -> {policy: (TrajectoryLog, Metrics)} for the whole corpus.

    Simulating all scenarios once and sharing the results keeps the
    acceptance suite inside its runtime budgets.
    """
    runs = {}
    for name, sc in corpus.items():
        runs[name] = {
            "fuzzy": run_simulation(sc, "fuzzy"),
            "baseline": run_simulation(sc, "baseline"),
        }
    return runs


@pytest.fixture()
def s01(corpus) -> Scenario:
    return corpus["s01-single-slider"]
