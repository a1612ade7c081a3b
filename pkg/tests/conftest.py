import re

import pytest

from rtzsim.cells import DelayModel, default_delays, load_delays


@pytest.fixture(scope="session")
def default():
    return default_delays()


@pytest.fixture(scope="session")
def uniform():
    return DelayModel.uniform()


@pytest.fixture(scope="session")
def adversarial():
    return load_delays("adversarial")


# --- acceptance reporting ---------------------------------------------------

_CRITERIA: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion covered by a test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            cid, title = m.args
            _CRITERIA.setdefault(cid, {"title": title, "outcomes": []})


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\w+?)(\[|$)", report.nodeid)
    if not m or m.group(1) not in _CRITERIA:
        return
    if report.when == "call" or report.outcome != "passed":
        _CRITERIA[m.group(1)]["outcomes"].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: (int("".join(ch for ch in c if ch.isdigit())), c)):
        entry = _CRITERIA[cid]
        outs = entry["outcomes"]
        if not outs:
            verdict = "NOT RUN"
        elif all(o == "passed" for o in outs):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        tr.write_line(f"criterion {cid:<3} {verdict:<7} {entry['title']}")
