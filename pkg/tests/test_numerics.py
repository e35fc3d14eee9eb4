from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from jointspec import numerics
from jointspec.errors import NoConvergence, NoConvergenceWarning, PathHitsZero, SampleTooCoarse, SingularMatrix
from jointspec.numerics import QuadratureConfig, periodic_quadrature


def test_det_of_identity_and_swap():
    assert numerics.mat_det(np.eye(4)) == pytest.approx(1.0)
    assert numerics.mat_det([[0, 1], [1, 0]]) == pytest.approx(-1.0)


def test_det_is_multiplicative():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    b = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    lhs = numerics.mat_det(a @ b)
    rhs = numerics.mat_det(a) * numerics.mat_det(b)
    assert abs(lhs - rhs) / abs(rhs) < 1e-10


def test_singular_det_is_near_zero():
    assert abs(numerics.mat_det([[1, 2], [2, 4]])) < 1e-12


def test_logdet_matches_det():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    assert np.exp(numerics.mat_logdet(m)) == pytest.approx(numerics.mat_det(m), rel=1e-12)


def test_normalized_trace():
    assert numerics.normalized_trace(np.eye(8)) == pytest.approx(1.0)
    assert numerics.normalized_trace([[0, 1], [1, 0]]) == 0
    assert numerics.normalized_trace(np.diag([2, 0, 0, 0])) == pytest.approx(0.5)


def test_trace_inverse():
    assert numerics.trace_inverse(np.eye(4)) == pytest.approx(1.0)
    assert numerics.trace_inverse(np.diag([2.0, 2.0])) == pytest.approx(0.5)
    with pytest.raises(SingularMatrix):
        numerics.trace_inverse([[1, 1], [1, 1]])


def test_is_invertible():
    assert numerics.is_invertible(np.eye(3))
    assert not numerics.is_invertible(np.zeros((3, 3)))


def test_hadamard_ratio_bounds():
    assert numerics.hadamard_ratio(np.eye(5)) == pytest.approx(1.0)
    assert numerics.hadamard_ratio([[1, 1], [1, 1]]) < 1e-15


def test_singular_value_bound_flags_singular_matrix():
    rng = np.random.default_rng(2)
    m = rng.normal(size=(16, 16))
    m[:, 0] = m[:, 1] + m[:, 2]
    assert numerics.smallest_singular_bound(m, rng) < 1e-12
    assert numerics.smallest_singular_bound(np.eye(16), rng) == pytest.approx(1.0)


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(initial_panels=0)


def test_quadrature_constant():
    res = periodic_quadrature(lambda th: np.ones_like(th))
    assert res.converged
    assert res.value == pytest.approx(2 * math.pi)


def test_quadrature_constant_resolvent_integrand():
    res = periodic_quadrature(lambda th: np.full_like(th, 1 / (1 - 0.25)))
    assert res.value / (2 * math.pi) == pytest.approx(4 / 3)


def test_quadrature_log_singularity_with_breakpoints():
    def f(th):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(np.cos(th)))

    res = periodic_quadrature(f, breakpoints=[math.pi / 2, 3 * math.pi / 2])
    assert res.converged
    assert abs(res.value - (-2 * math.pi * math.log(2))) < 1e-9


def test_quadrature_not_converged_warns_or_raises():
    cfg = QuadratureConfig(initial_panels=4, abs_tol=1e-14, max_doublings=2)
    f = lambda th: np.exp(np.cos(40 * th))  # noqa: E731
    with pytest.warns(NoConvergenceWarning):
        res = periodic_quadrature(f, cfg)
    assert not res.converged
    with pytest.raises(NoConvergence) as info:
        periodic_quadrature(f, cfg, strict=True)
    assert info.value.result.panels == 16


def test_track_argument_unit_circle():
    s = np.exp(2j * np.pi * np.linspace(0, 1, 65))
    assert numerics.track_argument(s) == pytest.approx(2 * math.pi)
    assert numerics.track_argument(s[::-1]) == pytest.approx(-2 * math.pi)
    assert numerics.track_argument(np.full(10, 3 + 1j)) == 0


def test_track_argument_errors():
    with pytest.raises(PathHitsZero) as info:
        numerics.track_argument([1, 0, 1])
    assert info.value.index == 1
    with pytest.raises(SampleTooCoarse):
        numerics.track_argument([1, -1j, -1, 1j])


def test_no_warnings_for_well_behaved_integrands():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        periodic_quadrature(lambda th: np.cos(th) ** 2)
