"""Spectral dynamics: the rational map ``F`` on ``C^2``, the cubic maps
``F1``/``F2`` on ``C^3``, and the Chebyshev map ``alpha(x) = 2x^2 - 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import LambdaZero, PoleAtMuSquaredFour
from .pencil import Complex3Point, as_point
from .spectrum import in_spectrum_dinf

#: ``|4 - mu^2|`` at or below this counts as the pole of ``F``.
POLE_THRESHOLD = 0.0

#: Orbits stop once a coordinate exceeds this modulus.
OVERFLOW_BOUND = 1e150

MAP_IDS = ("F", "F1", "F2", "alpha")


def map_F(lam: complex, mu: complex, threshold: float = POLE_THRESHOLD) -> tuple[complex, complex]:
    """``(2 lambda^2 / (4 - mu^2), mu + mu lambda^2 / (4 - mu^2))``."""
    lam, mu = complex(lam), complex(mu)
    d = 4 - mu * mu
    if abs(d) <= threshold:
        raise PoleAtMuSquaredFour(f"mu^2 = 4 at mu={mu}")
    l2 = lam * lam
    return 2 * l2 / d, mu + mu * l2 / d


def psi(lam: complex, mu: complex) -> complex:
    """``(4 - mu^2 + lambda^2) / (4 lambda)``."""
    lam, mu = complex(lam), complex(mu)
    if lam == 0:
        raise LambdaZero("psi is undefined at lambda = 0")
    return (4 - mu * mu + lam * lam) / (4 * lam)


def alpha(x: complex) -> complex:
    return 2 * x * x - 1


def h_theta(lam: complex, mu: complex, theta: complex) -> complex:
    """``4 - mu^2 + lambda^2 - 4 lambda theta``."""
    return 4 - mu * mu + lam * lam - 4 * lam * theta


def l_theta(z, theta: complex) -> complex:
    """``z0^2 - z1^2 - z2^2 - 2 z1 z2 theta``."""
    z0, z1, z2 = as_point(z)
    return z0 * z0 - z1 * z1 - z2 * z2 - 2 * z1 * z2 * theta


def chebyshev_preimages(theta: complex) -> tuple[complex, complex]:
    """The two solutions of ``alpha(s) = theta`` (principal root first)."""
    s = cmath.sqrt((1 + complex(theta)) / 2)
    return s, -s


def h_factorization_residual(lam: complex, mu: complex, theta: complex) -> float:
    """``|H_theta(F(lambda, mu)) - H_theta1 H_theta2 / (4 - mu^2)|``."""
    lam, mu = complex(lam), complex(mu)
    l1, m1 = map_F(lam, mu)
    t1, t2 = chebyshev_preimages(theta)
    rhs = h_theta(lam, mu, t1) * h_theta(lam, mu, t2) / (4 - mu * mu)
    return abs(h_theta(l1, m1, theta) - rhs)


def map_F1(z) -> Complex3Point:
    """``(z0 (z0^2 - z1^2 - z2^2), z1^2 z2, (z0^2 - z2^2) z2)``."""
    z0, z1, z2 = as_point(z)
    return Complex3Point(
        z0 * (z0 * z0 - z1 * z1 - z2 * z2),
        z1 * z1 * z2,
        (z0 * z0 - z2 * z2) * z2,
    )


def map_F2(z) -> Complex3Point:
    """``(z0 (z0^2 - z1^2 - z2^2), z1 z2^2, (z0^2 - z1^2) z1)``."""
    z0, z1, z2 = as_point(z)
    return Complex3Point(
        z0 * (z0 * z0 - z1 * z1 - z2 * z2),
        z1 * z2 * z2,
        (z0 * z0 - z1 * z1) * z1,
    )


def l_factorization_residual(z, theta: complex) -> float:
    """``|L_theta(F1(z)) - (z0^2 - z2^2) L_theta1(z) L_theta2(z)|`` with
    ``theta1, theta2`` the two preimages of ``theta`` under ``alpha``."""
    z = as_point(z)
    t1, t2 = chebyshev_preimages(theta)
    rhs = (z.z0 * z.z0 - z.z2 * z.z2) * l_theta(z, t1) * l_theta(z, t2)
    return abs(l_theta(map_F1(z), theta) - rhs)


def jacobian_F1(z) -> complex:
    """``6 z1 z2 (z0^2 - z2^2)(z0^2 - z1^2 - z2^2)``."""
    z0, z1, z2 = as_point(z)
    return 6 * z1 * z2 * (z0 * z0 - z2 * z2) * (z0 * z0 - z1 * z1 - z2 * z2)


def jacobian_F1_numeric(z, step: float = 1e-5) -> complex:
    """Determinant of the central-difference Jacobian of :func:`map_F1`."""
    base = np.array(as_point(z).as_tuple(), dtype=complex)
    jac = np.empty((3, 3), dtype=complex)
    for j in range(3):
        e = np.zeros(3, dtype=complex)
        e[j] = step
        hi = np.array(map_F1(base + e).as_tuple())
        lo = np.array(map_F1(base - e).as_tuple())
        jac[:, j] = (hi - lo) / (2 * step)
    return complex(np.linalg.det(jac))


# ---------------------------------------------------------------------------
# invariance of the spectrum


@dataclass(frozen=True)
class InvarianceReport:
    count: int
    tol: float
    failures: tuple[tuple[Complex3Point, Complex3Point], ...]
    edge_counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def _random_unit(rng: np.random.Generator, size: int) -> np.ndarray:
    return np.exp(2j * math.pi * rng.random(size))


def _random_complex(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.uniform(0.25, 2.0, size) * _random_unit(rng, size)


def spectrum_samples(count: int, rng: np.random.Generator) -> list[Complex3Point]:
    """Points of the spectrum with ``z1 z2 != 0``: draw ``x`` in ``[-1, 1]``
    and ``z1, z2``, then keep both roots ``z0 = +-sqrt(z1^2 + z2^2 + 2 z1 z2 x)``."""
    half = (count + 1) // 2
    x = rng.uniform(-1.0, 1.0, half)
    z1 = _random_complex(rng, half)
    z2 = _random_complex(rng, half)
    r = np.sqrt(z1 * z1 + z2 * z2 + 2 * z1 * z2 * x)
    pts = []
    for k in range(half):
        pts.append(Complex3Point(r[k], z1[k], z2[k]))
        pts.append(Complex3Point(-r[k], z1[k], z2[k]))
    return pts[:count]


def edge_samples(per_family: int, rng: np.random.Generator) -> dict[str, list[Complex3Point]]:
    """Spectrum points on the coordinate edges ``z1 z2 = 0`` and ``z0^2 = z2^2``."""
    w = _random_complex(rng, per_family)
    x = rng.uniform(-1.0, 1.0, per_family)
    v = _random_complex(rng, per_family)
    return {
        "z1=0": [Complex3Point(s * c, 0, c) for c, s in zip(w, np.resize([1, -1], per_family))],
        "z2=0": [Complex3Point(s * c, c, 0) for c, s in zip(w, np.resize([1, -1], per_family))],
        # z0 = +-z2 lies in the spectrum when z1 = -+2 z2 x
        "z0=z2": [Complex3Point(c, -2 * c * xv, c) for c, xv in zip(v, x)],
        "z0=-z2": [Complex3Point(-c, 2 * c * xv, c) for c, xv in zip(v, x)],
        "origin": [Complex3Point(0, 0, 0)],
    }


def spectrum_invariance_sample(
    count: int,
    rng: np.random.Generator | int | None = None,
    tol: float = 1e-8,
    edge_per_family: int = 100,
) -> InvarianceReport:
    """Apply ``F1`` to sampled spectrum points and test membership of the images."""
    rng = np.random.default_rng(rng)
    failures = []
    for z in spectrum_samples(count, rng):
        image = map_F1(z)
        if not in_spectrum_dinf(image, tol):
            failures.append((z, image))
    edges = edge_samples(edge_per_family, rng)
    for pts in edges.values():
        for z in pts:
            image = map_F1(z)
            if not in_spectrum_dinf(image, tol):
                failures.append((z, image))
    return InvarianceReport(count, tol, tuple(failures), {k: len(v) for k, v in edges.items()})


# ---------------------------------------------------------------------------
# fixed points


def sample_fixed_S(count: int, rng: np.random.Generator) -> list[tuple[complex, complex]]:
    """``(0, mu)`` for random ``mu`` plus the isolated point ``(2, 0)``."""
    mus = rng.normal(size=count) + 1j * rng.normal(size=count)
    return [(0j, complex(m)) for m in mus] + [(2 + 0j, 0j)]


def sample_fixed_S3() -> list[Complex3Point]:
    """Exactly representable points of ``{z1 = 0, z0^2 - z2^2 = 1}``.

    ``z0 = (s + 1/s)/2``, ``z2 = (s - 1/s)/2`` with dyadic ``s``, so every
    product in ``F1`` is exact in binary floating point.
    """
    seeds = []
    for k in range(-3, 4):
        for unit in (1, -1, 1j, -1j, 1 + 1j, 1 - 1j):
            seeds.append(unit * 2.0**k)
    pts = []
    for s in seeds:
        pts.append(Complex3Point((s + 1 / s) / 2, 0, (s - 1 / s) / 2))
    return pts


S4_POINTS = (
    Complex3Point(0, 1j, -1j),
    Complex3Point(0, -1j, 1j),
    Complex3Point(0, 0, 0),
    Complex3Point(0, 0, 1j),
    Complex3Point(0, 0, -1j),
)


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class Orbit:
    map_id: str
    points: tuple
    halted: str | None = None

    @property
    def steps(self) -> int:
        return len(self.points) - 1


def coordinates(p) -> tuple[complex, ...]:
    if isinstance(p, Complex3Point):
        return p.as_tuple()
    if isinstance(p, tuple):
        return p
    return (p,)


def orbit(map_id: str, start, steps: int, *, strict: bool = False) -> Orbit:
    """Iterate a map ``steps`` times from ``start``.

    ``start`` is ``(lambda, mu)`` for ``F``, a 3-point for ``F1``/``F2`` and
    a scalar for ``alpha``. The orbit halts early with ``halted="pole"``
    when ``F`` meets ``mu^2 = 4`` (raising instead when ``strict``) and
    with ``halted="overflow"`` once a coordinate exceeds 1e150.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if map_id == "F":
        lam, mu = start
        cur = (complex(lam), complex(mu))
        step = lambda p: map_F(*p)  # noqa: E731
    elif map_id in ("F1", "F2"):
        cur = as_point(start)
        step = map_F1 if map_id == "F1" else map_F2
    elif map_id == "alpha":
        cur = complex(start)
        step = alpha
    else:
        raise ValueError(f"unknown map {map_id!r}; expected one of {', '.join(MAP_IDS)}")
    points = [cur]
    halted = None
    for _ in range(steps):
        try:
            nxt = step(cur)
        except PoleAtMuSquaredFour:
            if strict:
                raise
            halted = "pole"
            break
        except (OverflowError, ValueError):
            halted = "overflow"
            break
        if any(not cmath.isfinite(c) or abs(c) > OVERFLOW_BOUND for c in coordinates(nxt)):
            halted = "overflow"
            break
        points.append(nxt)
        cur = nxt
    return Orbit(map_id, tuple(points), halted)
