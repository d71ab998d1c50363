from pathlib import Path

import pytest

from floqseirs import IncidenceFunction, ModelParams, PeriodicCoefficient
from floqseirs.config import load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


def example_params(beta0=0.0018):
    return ModelParams(
        N=2.2e6, mu=0.02, p=0.85, sigma=38.5, gamma=100.0, delta=0.0,
        beta=PeriodicCoefficient.cosine(beta0, 0.0002, 1.0),
        r=PeriodicCoefficient.cosine(0.1, 0.004, 1.0),
        period_lt=1.0,
    )


def constant_params(beta0=0.0018):
    return ModelParams(
        N=2.2e6, mu=0.02, p=0.85, sigma=38.5, gamma=100.0, delta=0.0,
        beta=PeriodicCoefficient.constant(beta0),
        r=PeriodicCoefficient.constant(0.1),
        period_lt=1.0,
    )


@pytest.fixture
def ex1():
    return example_params(0.0018)


@pytest.fixture
def ex2():
    return example_params(0.005)


@pytest.fixture
def sat():
    return IncidenceFunction.saturated(0.001)


@pytest.fixture
def ex1_config():
    return load_config(CONFIGS / "example1.json")


@pytest.fixture
def ex2_config():
    return load_config(CONFIGS / "example2.json")


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
