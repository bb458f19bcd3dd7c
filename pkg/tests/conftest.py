from dataclasses import replace

import pytest

import simiss


@pytest.fixture(scope="session")
def table():
    return simiss.builtin_iss_table()


def make_config(scenario="ideal", controller_on=True, **overrides):
    """SimConfig for a builtin scenario with optional field overrides."""
    cfg = simiss.SimConfig(schedule=simiss.builtin_schedule(scenario))
    if not controller_on:
        cfg = replace(cfg, controller=replace(cfg.controller, enabled=False))
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


@pytest.fixture(scope="session")
def base_run():
    """Ideal schedule, controller off: the calibration base case."""
    return simiss.run(make_config("ideal", controller_on=False))


@pytest.fixture(scope="session")
def catastrophic_uncontrolled_run():
    return simiss.run(make_config("catastrophic", controller_on=False))


@pytest.fixture(scope="session")
def catastrophic_controlled_run():
    return simiss.run(make_config("catastrophic", controller_on=True))


@pytest.fixture(scope="session")
def breaking_point_run():
    return simiss.run(make_config("breaking-point", controller_on=True))
