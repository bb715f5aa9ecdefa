import numpy as np
import pytest

from itokit import build_group_poisson, build_periodic_wiener, build_standard, build_thermal_brownian
from itokit.groups import delta_function, symmetric_group_3

_ACCEPTANCE = {}


def catalog_algebras():
    """The eight named algebras used throughout the acceptance suite."""
    s3 = symmetric_group_3()
    return {
        "newton": build_standard("newton"),
        "wiener": build_standard("wiener"),
        "poisson": build_standard("poisson"),
        "hp": build_standard("hp"),
        "thermal_brownian": build_thermal_brownian(2, 1),
        "mixed_wiener_poisson": build_standard("mixed_wiener_poisson"),
        "periodic_wiener": build_periodic_wiener(1, {1: 2.0}),
        "group_poisson_s3": build_group_poisson(s3, delta_function(s3)),
    }


@pytest.fixture(scope="session")
def catalog():
    return catalog_algebras()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_element(rng, n, scale=1.0):
    return scale * (rng.normal(size=n) + 1j * rng.normal(size=n))


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = report.outcome
    elif "test_acceptance.py::test_criterion_" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _ACCEPTANCE[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        status = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
