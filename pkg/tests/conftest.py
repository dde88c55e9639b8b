import pytest

from ou_kit.matrix import Mat
from ou_kit.rings import ring_from_descriptor, shipped_rings
from ou_kit.vaserstein import assemble


@pytest.fixture
def Z():
    return ring_from_descriptor("int")


@pytest.fixture
def Zi():
    return ring_from_descriptor("quad:-1")


@pytest.fixture
def twisted():
    return ring_from_descriptor("twisted")


@pytest.fixture
def data_211(Z):
    """m=2, n=1, phi=[[1]] over the integers."""
    return assemble(Z, 2, 1, Mat.from_ints(Z, [[1]]))


@pytest.fixture(params=[r.descriptor for r in shipped_rings()])
def ring(request):
    return ring_from_descriptor(request.param)


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run
# ---------------------------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _ACCEPTANCE[number] = (title, report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
