import pathlib

import pytest

from hkb.parser import load

ROOT = pathlib.Path(__file__).resolve().parent.parent
EXAMPLES = ROOT / "examples_kb"


def example(name: str, ddb: bool = False):
    return load(EXAMPLES / f"{name}.hkb", ddb=ddb)


@pytest.fixture
def ex12():
    return example("ex12", ddb=True)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not any(mod.RESULTS.values()):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
