import importlib

import pytest

import orbitope_lab.faces as faces

# every module that binds verify_support at import time
_CONSUMERS = ["orbitope_lab", "orbitope_lab.faces", "orbitope_lab.neighborliness",
              "orbitope_lab.ellipsoid", "orbitope_lab.cli"]

CERTIFICATES: list = []
ACCEPTANCE_LINES: list[str] = []

_original = faces.verify_support


def _recording_verify_support(*args, **kwargs):
    cert = _original(*args, **kwargs)
    if cert.is_supporting:
        CERTIFICATES.append(cert)
    return cert


# installed at import so that test modules collected later bind the wrapper too
for _name in _CONSUMERS:
    importlib.import_module(_name).verify_support = _recording_verify_support


@pytest.fixture
def report():
    def _report(number: int, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _report


def pytest_collection_modifyitems(config, items):
    # the midpoint criterion audits certificates gathered by all other tests
    last = [it for it in items if "test_midpoint_property" in it.name]
    items[:] = [it for it in items if it not in last] + last


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
