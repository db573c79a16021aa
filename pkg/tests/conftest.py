import numpy as np
import pytest

from cxangle import angle_core as ac
from cxangle.gauge import GeneratorSet


def random_generator_set(seed, k, dim, tol=1e-12):
    rng = np.random.default_rng(seed)
    return GeneratorSet(rng.normal(size=(k, dim)) + 1j * rng.normal(size=(k, dim)), tol=tol)


def builtin_spaces():
    """The five norms the angle theorems are exercised on."""
    return {
        "l2": ac.l2_space(3),
        "l4": ac.lp_space(3, 4),
        "linf": ac.linf_space(3),
        "gauge_a": ac.gauge_space(random_generator_set(11, 5, 2)),
        "gauge_b": ac.gauge_space(random_generator_set(12, 6, 3)),
    }


SPACES = builtin_spaces()


@pytest.fixture(params=sorted(SPACES))
def space(request):
    return SPACES[request.param]


def random_pairs(seed, n, dim):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, dim)) + 1j * rng.normal(size=(n, dim))
    y = rng.normal(size=(n, dim)) + 1j * rng.normal(size=(n, dim))
    return x, y


# -- acceptance reporting ----------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    report = outcome.get_result()
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        details = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        _CRITERIA[number] = (title, report.passed, details)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, details = _CRITERIA[number]
        line = f"AC{number:<2} {'PASS' if passed else 'FAIL'}  {title}"
        if details:
            line += f"  [{details}]"
        terminalreporter.write_line(line)
    passed = sum(1 for _, ok, _ in _CRITERIA.values() if ok)
    terminalreporter.write_line(f"{passed}/{len(_CRITERIA)} criteria passed")
