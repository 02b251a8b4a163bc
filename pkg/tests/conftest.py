import numpy as np
import pytest

from quncertainty import states as S
from quncertainty.config import Config
from quncertainty.grid import GridTopology


@pytest.fixture
def config():
    return Config()


@pytest.fixture
def circle():
    return GridTopology.circle(1025)


@pytest.fixture
def line():
    return GridTopology.line(-12.0, 12.0, 4097)


@pytest.fixture
def rng():
    return np.random.default_rng(20001)


def random_circle_recipe(rng, max_mode=3, periodic=False):
    modes = rng.choice(np.arange(-max_mode, max_mode + 1), size=rng.integers(1, 4), replace=False)
    coeffs = {int(m): complex(rng.normal(), rng.normal()) for m in modes}
    alpha = 0.0 if periodic else float(rng.uniform(0.0, 2.0 * np.pi))
    return S.circle_packet(coeffs, alpha)


def random_hermite_recipe(rng, max_order=8):
    orders = rng.choice(np.arange(0, max_order + 1), size=rng.integers(1, 4), replace=False)
    coeffs = {int(o): complex(rng.normal(), rng.normal()) for o in orders}
    return S.hermite(coeffs, scale=float(rng.uniform(0.5, 2.0)))


_ACCEPTANCE = pytest.StashKey()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not (rep.when == "call" or rep.failed):
        return
    detail = dict(item.user_properties).get("detail", "")
    item.config.stash[_ACCEPTANCE][marker.args[0]] = (marker.args[1], rep.passed, detail)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[_ACCEPTANCE]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, passed, detail = results[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}  {detail}".rstrip())
