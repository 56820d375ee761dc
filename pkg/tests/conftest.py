import json
import os

import numpy as np
import pytest

from weilcert.curve import PlaneCurve

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "data")


def data_path(name):
    return os.path.abspath(os.path.join(DATA, name))


def load_curve(name):
    with open(data_path(name)) as fh:
        return PlaneCurve.from_json(json.load(fh))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def klein_f5():
    return load_curve("klein_quartic_f5.json")


@pytest.fixture(scope="session")
def elliptic_f5():
    return load_curve("elliptic_f5.json")


@pytest.fixture(scope="session")
def elliptic_f2():
    return load_curve("elliptic_f2.json")


# -- acceptance summary ------------------------------------------------------------

_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance criterion: prints a PASS/FAIL line and fails the test on FAIL.

    Tests are named test_criterion_NN_...; one that raises before recording
    still gets a FAIL line.
    """
    lines = request.config.stash.setdefault(_VERDICTS, [])
    seen = []

    def record(number, label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {label}"
        if detail:
            line += f"  [{detail}]"
        lines.append((number, line))
        seen.append(number)
        print(line)
        assert ok, line
    yield record
    if not seen:
        number = int(request.node.name.split("_")[2])
        lines.append((number, f"FAIL  criterion {number:>2}: {request.node.name} raised"))


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
