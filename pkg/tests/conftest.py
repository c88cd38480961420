import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from syzforge.exactalg import GF, QQ  # noqa: E402


@pytest.fixture
def gf():
    return GF(32003)


@pytest.fixture(params=["gf", "qq"])
def anyfield(request):
    return GF(32003) if request.param == "gf" else QQ


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
