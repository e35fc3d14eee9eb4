from __future__ import annotations

import cmath
import json
import math

import numpy as np
import pytest

from jointspec import pencil
from jointspec.errors import ArityMismatch, DomainError
from jointspec.pencil import ClosedPath, Complex3Point, Pencil, evaluate


def test_point_validation_and_helpers():
    p = Complex3Point(1, 2j, 3)
    assert p.as_tuple() == (1 + 0j, 2j, 3 + 0j)
    assert tuple(p.scaled(2)) == (2, 4j, 6)
    with pytest.raises(ValueError):
        Complex3Point(math.inf, 0, 0)
    assert pencil.as_point((1, 2, 3)) == Complex3Point(1, 2, 3)


def test_pencil_shape_checks():
    with pytest.raises(ValueError):
        Pencil([])
    with pytest.raises(ValueError):
        Pencil([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        Pencil([np.eye(2)], names=("a", "b"))


def test_identity_only_pencil():
    p = Pencil([np.eye(3)])
    assert np.allclose(evaluate(p, (2 - 1j,)), (2 - 1j) * np.eye(3))
    with pytest.raises(ArityMismatch):
        evaluate(p, (1, 2))


def test_coefficients_are_read_only():
    p = Pencil([np.eye(2)])
    with pytest.raises(ValueError):
        p.matrices[0][0, 0] = 5


def test_rho_theta_matrices():
    p = pencil.rho_theta_pencil(0.7)
    assert np.allclose(p((1, 0, 0)), np.eye(2))
    assert abs(pencil.pencil_det(p, (1, 0, 0)) - 1) < 1e-15
    assert abs(pencil.pencil_det(pencil.rho_theta_pencil(2 * math.pi / 3), (1, 1, 1))) < 1e-15


def test_rho_theta_determinant_symbolic():
    sympy = pytest.importorskip("sympy")
    z0, z1, z2, th = sympy.symbols("z0 z1 z2 theta")
    e = sympy.exp(sympy.I * th)
    a = sympy.Matrix([[0, e], [1 / e, 0]])
    t = sympy.Matrix([[0, 1], [1, 0]])
    det = (z0 * sympy.eye(2) + z1 * a + z2 * t).det()
    expected = z0**2 - z1**2 - z2**2 - 2 * z1 * z2 * sympy.cos(th)
    assert sympy.simplify((det - expected).rewrite(sympy.exp)) == 0
    expr = sympy.lambdify((z0, z1, z2, th), expected)
    rng = np.random.default_rng(3)
    for _ in range(100):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        theta = rng.uniform(0, math.pi)
        numeric = pencil.pencil_det(pencil.rho_theta_pencil(theta), z)
        assert abs(numeric - expr(*z, theta)) < 1e-12


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0])
def test_pedersen_involutions(x):
    a, t = pencil.pedersen_matrices(x)
    assert np.max(np.abs(a @ a - np.eye(2))) < 1e-12
    assert np.array_equal(t @ t, np.eye(2))


def test_pedersen_midpoint_matches_d4_example():
    p = pencil.pedersen_pencil(0.5)
    assert np.allclose(evaluate(p, (0, 1, 0)), [[0, -1], [-1, 0]])
    assert np.allclose(evaluate(p, (0, 0, 1)), np.diag([-1, 1]))


def test_pedersen_domain():
    with pytest.raises(DomainError):
        pencil.pedersen_pencil(1.5)
    with pytest.raises(DomainError):
        pencil.pedersen_matrices(-0.1)


def test_projection_change_of_variables():
    f = pencil.projection_pencil_from_dihedral
    assert f((1, 0, 0)) == Complex3Point(1, 0, 0)
    assert f((0, 1, 0)) == Complex3Point(0.5, -0.5, 0)
    assert f((0, 2, 2)) == Complex3Point(2, -1, -1)


def test_projection_change_of_variables_matches_operators():
    rng = np.random.default_rng(4)
    rho = pencil.rho_theta_pencil(1.1)
    _, a, t = rho.matrices
    p, q = (np.eye(2) - a) / 2, (np.eye(2) - t) / 2
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    direct = z[0] * np.eye(2) + z[1] * p + z[2] * q
    w = pencil.projection_pencil_from_dihedral(z)
    assert np.allclose(direct, evaluate(rho, w))


def test_closed_path_validation():
    with pytest.raises(ValueError):
        ClosedPath(np.array([[0, 0], [1, 0]]), closed=True)
    with pytest.raises(ValueError):
        ClosedPath(np.zeros((3, 3)))
    open_path = ClosedPath(np.array([[0, 0], [1, 0]]), closed=False)
    assert len(open_path) == 2


def test_gamma_path_shape_and_operations():
    g = pencil.gamma_half_circle(16)
    assert len(g) == 17
    assert np.array_equal(g.samples[0], g.samples[-1])
    assert g.samples[0, 0] == 1.5
    assert len(g.repeated(3)) == 49
    assert np.array_equal(g.reversed().samples, g.samples[::-1])


def test_path_json_round_trip():
    g = pencil.gamma_half_circle(8)
    text = json.dumps(g.to_json())
    back = ClosedPath.from_json(json.loads(text))
    assert back.closed
    assert np.array_equal(back.samples, g.samples)
    with pytest.raises(ValueError):
        ClosedPath.from_json({"closed": True, "samples": [[1, 2, 3]]})


def test_densify_limits_turning():
    g = pencil.gamma_half_circle(4)
    fn = lambda s: s[:, 0] - 1  # noqa: E731
    refined, vals = pencil.densify(g, fn)
    assert len(refined) > len(g)
    steps = np.abs(np.angle(vals[1:] / vals[:-1]))
    assert np.all(steps < math.pi / 4)
    assert cmath.isclose(vals[0], vals[-1])
