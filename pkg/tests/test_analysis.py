from __future__ import annotations

import math

import numpy as np
import pytest

from jointspec import analysis, numerics, spectrum
from jointspec.errors import PathHitsZero, PointInSpectrum, PoleAtNode, WindingInconsistent
from jointspec.numerics import QuadratureConfig
from jointspec.pencil import ClosedPath, evaluate, gamma_half_circle


def test_mahler_measure_examples():
    assert analysis.mahler_measure([0, 1]) == 1
    assert analysis.mahler_measure([-4, 0, 1]) == pytest.approx(4)
    assert analysis.mahler_measure([-0.5, 0, -0.5]) == pytest.approx(0.5)
    assert analysis.mahler_measure([0, 0, 0]) == 0
    assert analysis.mahler_measure([3]) == 3
    assert analysis.mahler_measure([2, 0, 0]) == 2


def test_mahler_measure_higher_degree():
    # (w - 3)(w - 0.5)(w + 2i) has measure 3 * 2
    coeffs = np.poly([3, 0.5, -2j])[::-1]
    assert analysis.mahler_measure(coeffs) == pytest.approx(6)


def test_quadratic_roots_are_stable():
    r = analysis.polynomial_roots([1e-12, 1, 1e-3])
    assert sorted(abs(r)) == pytest.approx([1e-12, 1e3], rel=1e-9)


def test_fk_closed_examples():
    assert analysis.fk_det_closed(0, 0) == 1
    for z1, z2 in analysis.tr_singular_points():
        assert analysis.fk_det_closed(z1, z2) == 0
    s = 1 / math.sqrt(2)
    assert analysis.fk_det_closed(s, s) == pytest.approx(math.sqrt(0.5))


def test_fk_closed_on_degenerate_axes():
    assert analysis.fk_det_closed(0.5, 0) == pytest.approx(math.sqrt(0.75))
    assert analysis.fk_det_closed(0, 2j) == pytest.approx(math.sqrt(5))


def test_fk_quadrature_agrees_with_closed_form():
    rng = np.random.default_rng(12)
    pts = rng.uniform(-2, 2, size=(40, 2)) + 1j * rng.uniform(-0.5, 0.5, size=(40, 2))
    for z1, z2 in pts:
        q = analysis.fk_det_quadrature(z1, z2)
        assert abs(q - analysis.fk_det_closed(z1, z2)) < 1e-6


def test_fk_quadrature_on_quadric():
    for phi in np.linspace(0.1, 1.4, 7):
        z1, z2 = math.cos(phi), math.sin(phi)
        assert abs(analysis.fk_det_quadrature(z1, z2) - math.sqrt(abs(z1 * z2))) < 1e-10


def test_fk_quadrature_resolutions_agree():
    coarse = analysis.fk_det_quadrature(0.3 + 0.1j, 0.7, QuadratureConfig(initial_panels=32, abs_tol=1e-9))
    fine = analysis.fk_det_quadrature(0.3 + 0.1j, 0.7, QuadratureConfig(initial_panels=256, abs_tol=1e-12))
    assert abs(coarse - fine) < 1e-8


def test_fk_quadrature_reports_result():
    value, res = analysis.fk_det_quadrature(0.4, 0.9, full_output=True)
    assert res.converged and value > 0
    value, res = analysis.fk_det_quadrature(0, 1, full_output=True)
    assert value == 0 and res.converged


def test_fk_general():
    assert analysis.fk_det_general((2, 0, 0)) == pytest.approx(2)
    assert analysis.fk_det_general((1, 0.3, -0.8)) == pytest.approx(analysis.fk_det_quadrature(0.3, -0.8), abs=1e-12)
    z = (0.7 - 0.2j, 0.4, 1.1j)
    scaled = tuple(2 * c for c in z)
    assert abs(analysis.fk_det_general(scaled) - 2 * analysis.fk_det_general(z)) < 1e-8
    assert analysis.fk_det_general(z, method="closed") == pytest.approx(analysis.fk_det_general(z), abs=1e-8)
    with pytest.raises(ValueError):
        analysis.fk_det_general(z, method="spline")


def test_log_cos_integral():
    res = analysis.log_cos_integral()
    assert abs(res.value.real + math.pi / 2 * math.log(2)) < 1e-6


def test_trace_resolvent():
    assert analysis.trace_resolvent(0, 0) == pytest.approx(1)
    assert analysis.trace_resolvent(0.5, 0) == pytest.approx(4 / 3)
    with pytest.raises(PointInSpectrum):
        analysis.trace_resolvent(1, 0)


def test_trace_resolvent_limit_of_dihedral_sums():
    for z1, z2 in [(0.3, 0.2j), (1.5, 0.4), (-0.2 + 0.6j, 0.9)]:
        quad = analysis.trace_resolvent(z1, z2)
        assert abs(analysis.dn_trace_resolvent((1, z1, z2), 4096) - quad) < 1e-6


def test_dn_trace_resolvent():
    for n in (1, 5, 16):
        assert analysis.dn_trace_resolvent((1, 0, 0), n) == pytest.approx(1)
        assert analysis.dn_trace_resolvent((1, 0.5, 0), n) == pytest.approx(4 / 3)
    with pytest.raises(PoleAtNode):
        analysis.dn_trace_resolvent((2, 1, 1), 4)


def test_dn_trace_resolvent_matches_matrix():
    rng = np.random.default_rng(13)
    for n in (1, 3, 8, 20):
        z = (1, *(rng.normal(size=2) + 1j * rng.normal(size=2)))
        m = evaluate(spectrum.dn_pencil(n), z)
        assert abs(analysis.dn_trace_resolvent(z, n) - numerics.trace_inverse(m)) < 1e-9


def test_winding_of_gamma():
    g = gamma_half_circle()
    assert analysis.winding_number(g) == 1
    assert analysis.homology_coupling(g) == 0.5
    assert analysis.winding_number(g.reversed()) == -1
    assert analysis.homology_coupling(g.repeated(2)) == 1.0


def test_winding_of_trivial_paths():
    const = ClosedPath(np.array([[0.2, 0.1]] * 4))
    assert analysis.winding_number(const) == 0
    small = ClosedPath.from_function(lambda s: (0.1 * np.exp(2j * np.pi * s), 0 * s), 64)
    assert analysis.homology_coupling(small) == 0


def test_winding_errors():
    through = ClosedPath.from_function(lambda s: (1 + 0.5 * np.sin(2 * np.pi * s), 0 * s), 64)
    with pytest.raises(PathHitsZero):
        analysis.winding_number(through, 0.0)
    open_path = ClosedPath(np.array([[0, 0], [1, 0]]), closed=False)
    with pytest.raises(ValueError):
        analysis.winding_number(open_path)


def test_winding_depending_on_x_is_reported():
    # with z2 = 0.3 the zero of L_1 sits at z1 = 0.7; the small loop around
    # it misses the zeros of L_x for the other grid values of x
    path = ClosedPath.from_function(lambda s: (0.7 + 0.02 * np.exp(2j * np.pi * s), 0.3 + 0 * s), 256)
    assert analysis.winding_number(path, 1.0) == 1
    assert analysis.winding_number(path, 0.8) == 0
    with pytest.raises(WindingInconsistent):
        analysis.winding_number(path)


def test_direct_coupling_matches():
    g = gamma_half_circle(128)
    assert analysis.homology_coupling_direct(g, theta_nodes=16) == pytest.approx(0.5)


def test_compare_fk():
    c = analysis.compare_fk(0.2, 0.3)
    assert c.converged
    assert c.difference < 1e-9
