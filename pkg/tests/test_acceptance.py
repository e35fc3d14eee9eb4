"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single PASS/FAIL line (shown even under output
capture) and then asserts the check passed and, where a runtime budget
applies, that it finished within it.
"""

from __future__ import annotations

import pytest

from jointspec import verify

SEED = verify.DEFAULT_SEED

# wall-clock budgets in seconds, where the criterion states one
RUNTIME_LIMITS = {"AC1": 10.0, "AC2": 60.0, "AC5": 30.0, "AC9": 20.0}


def _run(key: str, capsys) -> verify.CheckResult:
    result = verify.run_check(key, SEED)
    limit = RUNTIME_LIMITS.get(key)
    line = result.line(timings=True)
    if limit is not None and result.seconds >= limit:
        line = line.replace("PASS", "FAIL", 1) + f" exceeds {limit:.0f}s budget"
    with capsys.disabled():
        print("\n" + line)
    return result


def _assert(result: verify.CheckResult):
    assert result.passed, result.line()
    limit = RUNTIME_LIMITS.get(result.key)
    if limit is not None:
        assert result.seconds < limit, f"{result.key} took {result.seconds:.1f}s (budget {limit}s)"


def test_ac1_dn_determinant_identity(capsys):
    _assert(_run("AC1", capsys))


def test_ac2_fk_determinant_dual_method(capsys):
    _assert(_run("AC2", capsys))


def test_ac3_log_cos_integral(capsys):
    _assert(_run("AC3", capsys))


def test_ac4_resolvent_traces(capsys):
    _assert(_run("AC4", capsys))


def test_ac5_grigorchuk_determinant_recursion(capsys):
    _assert(_run("AC5", capsys))


def test_ac6_u_equals_t_at_finite_levels(capsys):
    _assert(_run("AC6", capsys))


def test_ac7_koopman_eigen_angles(capsys):
    _assert(_run("AC7", capsys))


def test_ac8_winding_and_coupling(capsys):
    _assert(_run("AC8", capsys))


def test_ac9_dynamics_identities(capsys):
    _assert(_run("AC9", capsys))


def test_ac10_representation_cross_checks(capsys):
    _assert(_run("AC10", capsys))


@pytest.mark.parametrize("suite", ["spectrum", "dynamics"])
def test_suites_group_the_checks(suite):
    assert set(verify.SUITES[suite]) <= set(verify.CHECKS)
    assert verify.SUITES["all"] == tuple(verify.CHECKS)
