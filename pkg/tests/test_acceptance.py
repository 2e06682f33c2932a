"""Acceptance gate: every criterion at its stated tolerance.

Run directly (``python tests/test_acceptance.py``) to print the report, or
through pytest, where the PASS/FAIL lines appear in the terminal summary.
"""

import re

import pytest

from spinsync.acceptance import CRITERIA, run_acceptance
from spinsync.rb87 import PhysicalConstants, mhz

REPORT_LINES: list[str] = []


@pytest.fixture(scope="module")
def report():
    rep = run_acceptance()
    REPORT_LINES[:] = [r.line() for r in rep.results]
    return rep


@pytest.mark.parametrize("cid", range(1, len(CRITERIA) + 1))
def test_criterion(report, cid):
    result = report.results[cid - 1]
    print(result.line())
    assert result.cid == cid
    assert result.passed, result.line()


def test_report_format(report):
    lines = report.text().splitlines()
    assert len(lines) == len(CRITERIA) + 1
    pattern = re.compile(r"^(PASS|FAIL) +\d+ [a-z0-9-]+: .+")
    assert all(pattern.match(line) for line in lines[:-1])


def test_deliberate_fault_fails_table():
    faulty = PhysicalConstants(gamma_aux_dprime=1.1 * mhz(6.065))
    rep = run_acceptance(faulty, only={1})
    assert not rep.passed and rep.exit_code == 1
    assert rep.results[0].line().startswith("FAIL")


if __name__ == "__main__":
    rep = run_acceptance()
    print(rep.text(), end="")
    raise SystemExit(rep.exit_code)
