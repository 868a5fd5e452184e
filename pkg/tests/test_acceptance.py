"""Acceptance criteria, one test each.

Every test appends a one-line verdict to ``ACCEPTANCE_LINES``; the
``pytest_terminal_summary`` hook in ``conftest.py`` prints them after the run,
together with informational measurements that do not gate anything.
"""
import json
import subprocess
import sys

import pytest

from phasekit.verify import run_all

ACCEPTANCE_LINES = []
INFO_LINES = []


@pytest.fixture(scope="module")
def card():
    c = run_all()
    for rec in c["info"]:
        INFO_LINES.append(
            f"info [{rec['criterion']}] {rec['name']}: measured {rec['measured']:.4g}"
            f" allowed {rec['allowed']} -> {'within' if rec['passed'] else 'outside'}"
        )
    return c


def _verdict(card, criterion, title):
    recs = [r for r in card["checks"] if r["criterion"] == criterion]
    assert recs, f"no checks recorded for criterion {criterion}"
    ok = all(r["passed"] for r in recs)
    detail = "; ".join(f"{r['name']}={r['measured']:.3g} (allowed {r['allowed']})" for r in recs)
    ACCEPTANCE_LINES.append(f"criterion {criterion:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    failed = [f"{r['name']}: measured {r['measured']!r} vs allowed {r['allowed']}" for r in recs if not r["passed"]]
    assert ok, "\n".join(failed)


def test_criterion_01_orthonormality(card):
    _verdict(card, 1, "orthonormality m,n <= 20")


def test_criterion_02_dispersion_eigenvalues(card):
    _verdict(card, 2, "dispersion eigenvalues")


def test_criterion_03_matrix_commutator(card):
    _verdict(card, 3, "truncated [x, p]")


def test_criterion_04_symbolic_commutators(card):
    _verdict(card, 4, "symbolic [x, p]")


def test_criterion_05_route_equivalence(card):
    _verdict(card, 5, "recurrence vs finite differences, 64x64")


def test_criterion_06_reconstruction(card):
    _verdict(card, 6, "reconstruction")


def test_criterion_07_multidim_commutators(card):
    _verdict(card, 7, "multidimensional commutators")


def test_criterion_08_dispersion_generators(card):
    _verdict(card, 8, "dispersion generators")


def test_criterion_09_algebra_engine(card):
    _verdict(card, 9, "algebra engine, 200 cases each")


def test_criterion_10_verify_cli(tmp_path):
    card_path = tmp_path / "scorecard.json"
    base = [sys.executable, "-m", "phasekit.cli", "verify"]
    default = subprocess.run(base + ["--scorecard", str(card_path)], capture_output=True, text=True)
    card = json.loads(card_path.read_text())
    enumerated = sorted(int(k) for k in card["criteria"]) == list(range(1, 10))
    injected = subprocess.run(base + ["--inject", "flip-x-orientation", "--criteria", "3"], capture_output=True)
    ok = default.returncode == 0 and enumerated and card["n_passed"] >= 12 and injected.returncode == 1
    ACCEPTANCE_LINES.append(
        f"criterion 10 {'PASS' if ok else 'FAIL'}  verify CLI: default exit {default.returncode},"
        f" {card['n_passed']}/{card['n_checks']} checks passed, criteria 1-9 listed={enumerated},"
        f" injected exit {injected.returncode}"
    )
    assert enumerated and card["n_passed"] >= 12
    assert injected.returncode == 1
    assert default.returncode == 0, default.stdout
