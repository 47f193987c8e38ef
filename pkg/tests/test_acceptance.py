"""Acceptance gate: all twelve certification checks must pass.

Each test prints a single PASS/FAIL line for its criterion and asserts
the status, so the -v output doubles as the certification summary.
"""

from __future__ import annotations

import pytest

from qkm.acceptance import CRITERIA

_cache: dict = {}


def _run(name):
    if name not in _cache:
        fn = dict(CRITERIA)[name]
        _cache[name] = fn()
    return _cache[name]


@pytest.mark.parametrize("name", [name for name, _ in CRITERIA])
def test_acceptance_criterion(name):
    report = _run(name)
    print(f"{name}: {report['status']}")
    assert report["status"] == "PASS", report["witness"]
