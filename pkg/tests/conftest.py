import pytest

from dolbeault_deform.models import builtin

# criterion number -> (passed, description); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, desc = ACCEPTANCE[k]
        terminalreporter.write_line("criterion %2d: %s  %s" % (k, "PASS" if ok else "FAIL", desc))


@pytest.fixture(scope="session")
def iwasawa():
    return builtin("iwasawa")


@pytest.fixture(scope="session")
def nakamura():
    return builtin("nakamura_iii_3b")


@pytest.fixture(scope="session")
def torus2():
    return builtin("torus:2")


@pytest.fixture(scope="session")
def torus3():
    return builtin("torus:3")
