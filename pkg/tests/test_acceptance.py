"""Acceptance gate: one test per advertised criterion, pinned tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail
line per criterion; the same checks back the command line's verify task.
The cylinder heat-trace criterion is marked slow but stays well inside its
budget here.
"""

import pytest

from ncres import verify


def _report(result):
    print(result.line())
    assert result.passed, result.line()


def test_criterion_01_residue_closed_form():
    _report(verify.check_residue_closed_form())


def test_criterion_02_trace_property():
    _report(verify.check_trace_property(seed=0, pairs=100))


def test_criterion_03_boundary_algebra():
    _report(verify.check_boundary_algebra(seed=0, pairs=50))


def test_criterion_04_connes_identity():
    _report(verify.check_connes_identity())


def test_criterion_05_boundary_dixmier():
    _report(verify.check_boundary_dixmier())


def test_criterion_06_heat_log_coefficient():
    _report(verify.check_heat_log_coefficient())


def test_criterion_07_zeta_residues():
    _report(verify.check_zeta_residues())


def test_criterion_08_parametric_routes():
    _report(verify.check_parametric_routes(seed=0, triples=20))


@pytest.mark.slow
def test_criterion_09_boundary_heat():
    _report(verify.check_boundary_heat())


def test_criterion_10_determinism():
    _report(verify.check_determinism())
