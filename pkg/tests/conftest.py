import numpy as np
import pytest

from cocycle import kernels


@pytest.fixture(params=kernels.available_backends())
def each_backend(request):
    prev = kernels.backend_name()
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


def random_config_arrays(rng, width, height):
    h = rng.integers(0, 2, size=(height + 1, width), dtype=np.uint8)
    v = rng.integers(0, 2, size=(height, width + 1), dtype=np.uint8)
    return h, v


_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA[num] = (title, rep.passed, getattr(item, "criterion_detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[num]
        line = f"criterion {num:>2} {'PASS' if ok else 'FAIL'}: {title}"
        if detail:
            line += f" [{detail}]"
        terminalreporter.write_line(line)
