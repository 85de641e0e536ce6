import pytest

from stgaps.newforms import angle_table, builtin_form


@pytest.fixture(scope="session")
def small_tables():
    """Angle tables of delta and w16 up to 20000."""
    return angle_table(builtin_form(12, 20000)), angle_table(builtin_form(16, 20000))


@pytest.fixture(scope="session")
def big_tables():
    """Angle tables of delta and w16 up to 2*10^5 (the default coverage)."""
    return angle_table(builtin_form(12, 200_000)), angle_table(builtin_form(16, 200_000))


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("STGAPS_CACHE_DIR", str(tmp_path / "cache"))


_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    failed_early = rep.when == "setup" and not rep.passed
    if rep.when == "call" or failed_early:
        number, title = marker.args
        detail = dict(item.user_properties).get("detail", "")
        status = "PASS" if rep.passed else "FAIL"
        _ACCEPTANCE.append((number, f"criterion {number:>2}  {status}  {title}  {detail}".rstrip()))


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
