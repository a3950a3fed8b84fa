import pytest

from shrinklab.fixtures import NAMES, load_fixture
from shrinklab.normalize import to_normal_form


@pytest.fixture(scope="session")
def pow2():
    return load_fixture("pow2")


@pytest.fixture(scope="session")
def pow2_nf(pow2):
    return to_normal_form(pow2)


@pytest.fixture(scope="session")
def anbncn():
    return load_fixture("anbncn")


@pytest.fixture(scope="session", params=NAMES)
def fixture_grammar(request):
    return load_fixture(request.param)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
