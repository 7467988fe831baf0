import pytest

from gzz.lp import available_backends


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    # keep restricted-family cache files out of the working tree
    monkeypatch.setenv("GZZ_CACHE_DIR", str(tmp_path_factory.getbasetemp() / "gzz-cache"))


def pytest_terminal_summary(terminalreporter):
    import sys
    lines = [line for name, mod in list(sys.modules.items()) if name.endswith("test_acceptance")
             for line in getattr(mod, "_LINES", [])]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
