import pytest
from hypothesis import HealthCheck, settings

from mirrorext import affine_data, fixtures

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def cats():
    return fixtures.categories()


@pytest.fixture(scope="session")
def ising():
    return affine_data.ising_modular()


@pytest.fixture(scope="session")
def data_dir():
    return fixtures.DATA_DIR


_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    num, title = mark.args
    slot = _CRITERIA.setdefault(num, {"title": title, "ok": True, "failed": []})
    if rep.failed:
        slot["ok"] = False
        slot["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        slot = _CRITERIA[num]
        status = "PASS" if slot["ok"] else "FAIL"
        extra = f"  (failing: {', '.join(slot['failed'])})" if slot["failed"] else ""
        terminalreporter.write_line(f"criterion {num}: {status}  {slot['title']}{extra}")
