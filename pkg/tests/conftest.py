import math

import numpy as np
import pytest
from hypothesis import settings

from relaylife.channel import SystemParams, Topology

settings.register_profile("repro", derandomize=True, print_blob=True)
settings.load_profile("repro")

# criterion number -> (title, list of outcomes)
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number, title = marker.args
    _CRITERIA.setdefault(number, (title, []))[1].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, results = _CRITERIA[number]
        verdict = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")


# Unit-side triangle, nudged outward so every distance is >= 1 m after rounding.
TRIANGLE = [(0.0, 0.0), (1.0, 0.0), (0.5, math.nextafter(math.sqrt(0.75), 1.0) + 1e-15)]


def triangle_topology(energy_s=1.0, energy_r=1.0):
    """One source, one relay and the BS, all 1 m apart."""
    s, r, bs = TRIANGLE
    return Topology([s], [energy_s], [r], [energy_r], bs)


def unit_params(scale=1.0, mod_index=1.0):
    """SystemParams whose common SER factor 3 N0^2/(4 K^2 G0^2) equals ``scale``."""
    noise = math.sqrt(scale * 4.0 * mod_index**2 / 3.0)
    return SystemParams(eta=1.0, alpha=3.5, noise_power=noise, power_gain=1.0, mod_index=mod_index)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
