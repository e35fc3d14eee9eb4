from __future__ import annotations

import math

import numpy as np
import pytest

from jointspec import dynamics, spectrum
from jointspec.errors import LambdaZero, PoleAtMuSquaredFour
from jointspec.pencil import Complex3Point


def _rand(rng, size, radius=3.0):
    return radius * np.sqrt(rng.random(size)) * np.exp(2j * math.pi * rng.random(size))


def test_map_F_examples():
    assert dynamics.map_F(2, 0) == (2, 0)
    assert dynamics.map_F(0, 1.5j) == (0, 1.5j)
    lam, mu = dynamics.map_F(1, 1)
    assert lam == pytest.approx(2 / 3)
    assert mu == pytest.approx(4 / 3)
    with pytest.raises(PoleAtMuSquaredFour):
        dynamics.map_F(1, 2)


def test_psi_examples():
    assert dynamics.psi(2, 0) == 1
    assert dynamics.psi(2j, 0) == 0
    with pytest.raises(LambdaZero):
        dynamics.psi(0, 1)


def test_semiconjugacy():
    rng = np.random.default_rng(14)
    lams, mus = _rand(rng, 200), _rand(rng, 200)
    for lam, mu in zip(lams, mus):
        if abs(4 - mu * mu) < 0.1 or abs(lam) < 0.1:
            continue
        lhs = dynamics.psi(*dynamics.map_F(lam, mu))
        rhs = dynamics.alpha(dynamics.psi(lam, mu))
        assert abs(lhs - rhs) < 1e-10 * max(1, abs(rhs))


def test_h_and_l_examples():
    assert dynamics.h_theta(2, 0, 0) == 8
    assert dynamics.l_theta((1, 1, 0), 1) == 0
    z = Complex3Point(0.3 + 1j, 0.8, -1.2j)
    x = spectrum.spectrum_parameter(z)
    assert abs(dynamics.l_theta(z, x)) < 1e-14


def test_chebyshev_preimages():
    assert dynamics.chebyshev_preimages(1) == (1, -1)
    assert dynamics.chebyshev_preimages(-1) == (0, 0)
    a, b = dynamics.chebyshev_preimages(0)
    assert a == pytest.approx(1 / math.sqrt(2)) and b == pytest.approx(-1 / math.sqrt(2))
    for theta in (0.3, -0.7 + 2j, 5):
        for s in dynamics.chebyshev_preimages(theta):
            assert abs(dynamics.alpha(s) - theta) < 1e-12


def test_h_factorization():
    rng = np.random.default_rng(15)
    for lam, mu, theta in zip(_rand(rng, 200), _rand(rng, 200), _rand(rng, 200, 1.0)):
        if abs(4 - mu * mu) <= 0.1:
            continue
        assert dynamics.h_factorization_residual(lam, mu, theta) < 1e-9
    assert dynamics.h_factorization_residual(0.8, 0.5, -1) < 1e-9
    assert dynamics.h_factorization_residual(0.8, 0.5, 0.25) < 1e-11


def test_f1_f2_examples():
    assert dynamics.map_F1((0, 1j, -1j)) == Complex3Point(0, 1j, -1j)
    assert dynamics.map_F1((1, 1, 1)) == Complex3Point(-1, 1, 0)
    assert dynamics.map_F2((1, 1, 1)) == Complex3Point(-1, 1, 0)
    assert dynamics.map_F2((1, 2, 3)) == Complex3Point(1 * (1 - 4 - 9), 2 * 9, (1 - 4) * 2)


def test_f1_preserves_coordinate_hyperplanes():
    rng = np.random.default_rng(16)
    for _ in range(50):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        for k in range(3):
            w = z.copy()
            w[k] = 0
            assert dynamics.map_F1(w).as_tuple()[k] == 0


def test_l_factorization():
    rng = np.random.default_rng(17)
    for _ in range(200):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        theta = complex(rng.uniform(-1, 1), rng.normal())
        assert dynamics.l_factorization_residual(z, theta) < 1e-9 * max(1, np.max(np.abs(z)) ** 6)
    # with z1 = 0 both sides are (z0^2 - z2^2)^3; dyadic inputs keep it exact
    assert dynamics.l_factorization_residual((0.5, 0, 0.25j), 0.2) == 0
    assert dynamics.l_factorization_residual((0, 0, 0), 0.7) == 0


def test_jacobian():
    assert dynamics.jacobian_F1((1, 0, 0)) == 0
    assert dynamics.jacobian_F1((1, 1, 1)) == 0
    assert dynamics.jacobian_F1((2, 1, 1)) == 36
    assert abs(dynamics.jacobian_F1_numeric((2, 1, 1)) - 36) / 36 < 1e-4
    rng = np.random.default_rng(18)
    for _ in range(20):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        exact = dynamics.jacobian_F1(z)
        assert abs(dynamics.jacobian_F1_numeric(z) - exact) <= 1e-4 * abs(exact)


def test_spectrum_invariance():
    report = dynamics.spectrum_invariance_sample(2000, 19)
    assert report.ok
    assert report.edge_counts["origin"] == 1
    assert dynamics.map_F1((0, 0, 0)) == Complex3Point(0, 0, 0)


def test_edge_image_formula():
    # on z0 = z2 the image is z1^2 (-z0, z2, 0)
    z = Complex3Point(0.6 + 0.2j, -0.5, 0.6 + 0.2j)
    image = dynamics.map_F1(z)
    expected = z.z1**2 * np.array([-z.z0, z.z2, 0])
    assert np.allclose(image.as_tuple(), expected)
    assert spectrum.in_spectrum_dinf(image)


def test_fixed_points_are_exact():
    rng = np.random.default_rng(20)
    for p in dynamics.sample_fixed_S(50, rng):
        assert dynamics.map_F(*p) == p
    for p in dynamics.sample_fixed_S3():
        assert p.z0**2 - p.z2**2 == 1
        assert dynamics.map_F1(p) == p
    for p in dynamics.S4_POINTS:
        assert dynamics.map_F1(p) == p


def test_alpha_preserves_interval():
    x = np.random.default_rng(21).uniform(-1, 1, 1000)
    y = 2 * x * x - 1
    assert np.all((-1 <= y) & (y <= 1))


def test_orbits():
    assert set(dynamics.orbit("F", (2, 0), 10).points) == {(2, 0)}
    orb = dynamics.orbit("F1", (0, 1j, -1j), 5)
    assert orb.steps == 5 and set(orb.points) == {Complex3Point(0, 1j, -1j)}
    assert set(dynamics.orbit("alpha", 1, 7).points) == {1}


def test_orbit_halts():
    orb = dynamics.orbit("F", (1, 2), 3)
    assert orb.halted == "pole" and orb.steps == 0
    with pytest.raises(PoleAtMuSquaredFour):
        dynamics.orbit("F", (1, 2), 3, strict=True)
    orb = dynamics.orbit("alpha", 3, 50)
    assert orb.halted == "overflow"
    with pytest.raises(ValueError):
        dynamics.orbit("G", 1, 2)
