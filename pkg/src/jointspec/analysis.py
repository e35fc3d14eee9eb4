"""Fuglede-Kadison determinant, Mahler measure, resolvent traces, winding
numbers and the homology coupling for ``R(z) = z0 + z1 a + z2 t``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numerics
from .errors import PointInSpectrum, PoleAtNode, WindingInconsistent
from .numerics import QuadratureConfig, QuadratureResult
from .pencil import ClosedPath, as_point, densify
from .spectrum import dn_det_factors, in_spectrum_dinf

#: Points where ``P_z`` vanishes identically and the determinant is zero.
TR_SINGULAR_POINTS = ((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0))


def tr_singular_points() -> tuple[tuple[float, float], ...]:
    return TR_SINGULAR_POINTS


# ---------------------------------------------------------------------------
# Mahler measure


def _trim(coeffs: Sequence[complex]) -> np.ndarray:
    c = np.asarray(coeffs, dtype=complex).ravel()
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    nz = np.flatnonzero(c)
    return c[: nz[-1] + 1] if nz.size else c[:0]


def _quadratic_roots(c0: complex, c1: complex, c2: complex) -> tuple[complex, complex]:
    # cancellation-free form: q = -(c1 + sign * sqrt(disc)) / 2
    disc = cmath.sqrt(c1 * c1 - 4 * c2 * c0)
    if (c1.conjugate() * disc).real < 0:
        disc = -disc
    q = -(c1 + disc) / 2
    if q == 0:
        return 0j, 0j
    return q / c2, c0 / q


def polynomial_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """Roots of a polynomial given by ascending coefficients."""
    c = _trim(coeffs)
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    if c.size == 2:
        return np.array([-c[0] / c[1]])
    if c.size == 3:
        return np.array(_quadratic_roots(complex(c[0]), complex(c[1]), complex(c[2])))
    return np.roots(c[::-1])


def mahler_measure(coeffs: Sequence[complex]) -> float:
    """``|leading| * prod max(1, |root|)``; the zero polynomial has measure 0."""
    c = _trim(coeffs)
    if c.size == 0:
        return 0.0
    if c.size == 2:
        return float(max(abs(c[0]), abs(c[1])))
    roots = polynomial_roots(c)
    return float(abs(c[-1]) * np.prod(np.maximum(1.0, np.abs(roots))))


def p_z(z1: complex, z2: complex, z0: complex = 1.0) -> list[complex]:
    """Ascending coefficients of ``w (z0^2 - z1^2 - z2^2) - z1 z2 (w^2 + 1)``."""
    p = z1 * z2
    return [-p, z0 * z0 - z1 * z1 - z2 * z2, -p]


# ---------------------------------------------------------------------------
# Fuglede-Kadison determinant


def fk_det_closed(z1: complex, z2: complex) -> float:
    """``sqrt(M(P_z))``; exactly 0 at the tr-singular points."""
    return math.sqrt(mahler_measure(p_z(complex(z1), complex(z2))))


def _root_angle(z0: complex, z1: complex, z2: complex) -> complex | None:
    """``arccos(beta)`` when the zeros of the integrand lie near the real axis."""
    p = 2 * z1 * z2
    if p == 0:
        return None
    w = cmath.acos((z0 * z0 - z1 * z1 - z2 * z2) / p)
    return w if abs(w.imag) < 1.0 else None


def _log_integrand(z0: complex, z1: complex, z2: complex):
    """``theta -> log|z0^2 - z1^2 - z2^2 - 2 z1 z2 cos(theta)|``.

    Near real zeros ``+-theta0`` the factored form
    ``2 p sin((theta + theta0)/2) sin((theta - theta0)/2)`` avoids the
    cancellation of the cosine form.
    """
    c = z0 * z0 - z1 * z1 - z2 * z2
    p = 2 * z1 * z2
    t0 = _root_angle(z0, z1, z2)
    if t0 is None:

        def f(theta):
            return np.log(np.abs(c - p * np.cos(theta)))

        return f
    base = math.log(2 * abs(p))

    def f(theta):
        with np.errstate(divide="ignore"):
            return (
                base
                + np.log(np.abs(np.sin((theta + t0) / 2)))
                + np.log(np.abs(np.sin((theta - t0) / 2)))
            )

    return f


def _zero_angles(z0: complex, z1: complex, z2: complex) -> list[float]:
    """Breakpoints at the real parts of the zeros ``+-theta0``."""
    t0 = _root_angle(z0, z1, z2)
    if t0 is None:
        return []
    return [t0.real, numerics.TWO_PI - t0.real]


def _fk_quadrature(z0, z1, z2, cfg, strict) -> tuple[float, QuadratureResult]:
    z0, z1, z2 = complex(z0), complex(z1), complex(z2)
    if z1 * z2 == 0:
        # constant integrand log|z0^2 - z1^2 - z2^2|
        c = abs(z0 * z0 - z1 * z1 - z2 * z2)
        if c == 0:
            return 0.0, QuadratureResult(complex(-math.inf), True, 0, 0.0)
        return math.sqrt(c), QuadratureResult(complex(numerics.TWO_PI * math.log(c)), True, 0, 0.0)
    f = _log_integrand(z0, z1, z2)
    res = numerics.periodic_quadrature(
        f, cfg, breakpoints=_zero_angles(z0, z1, z2), strict=strict
    )
    return math.exp(res.value.real / (4 * math.pi)), res


def fk_det_quadrature(
    z1: complex,
    z2: complex,
    cfg: QuadratureConfig | None = None,
    *,
    full_output: bool = False,
    strict: bool = False,
):
    """``exp((1/4pi) int_0^{2pi} log|1 - z1^2 - z2^2 - 2 z1 z2 cos(theta)| dtheta)``.

    The circle is split at the integrand's zeros, so the logarithmic
    singularities sit at arc endpoints. With ``full_output`` the
    :class:`QuadratureResult` for the log-integral is returned as well.
    """
    value, res = _fk_quadrature(1.0, z1, z2, cfg, strict)
    return (value, res) if full_output else value


def fk_det_general(
    z,
    cfg: QuadratureConfig | None = None,
    *,
    method: str = "quadrature",
    full_output: bool = False,
    strict: bool = False,
):
    """Determinant of ``z0 + z1 a + z2 t``; homogeneous of degree one in ``z``."""
    z0, z1, z2 = as_point(z)
    if method == "closed":
        value = math.sqrt(mahler_measure(p_z(z1, z2, z0)))
        return (value, None) if full_output else value
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    value, res = _fk_quadrature(z0, z1, z2, cfg, strict)
    return (value, res) if full_output else value


def log_cos_integral(cfg: QuadratureConfig | None = None) -> QuadratureResult:
    """``int_0^{pi/2} log(cos theta) dtheta``, from the periodic integral of
    ``log|cos theta|`` over the full circle (four equal quarters)."""

    def f(theta):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(np.cos(theta)))

    res = numerics.periodic_quadrature(f, cfg, breakpoints=[math.pi / 2, 3 * math.pi / 2])
    return QuadratureResult(res.value / 4, res.converged, res.panels, res.error_estimate / 4)


# ---------------------------------------------------------------------------
# resolvent traces


def trace_resolvent(
    z1: complex,
    z2: complex,
    cfg: QuadratureConfig | None = None,
    *,
    z0: complex = 1.0,
    tol: float = 1e-9,
    full_output: bool = False,
) -> complex:
    """``(1/2pi) int z0 dtheta / (z0^2 - z1^2 - z2^2 - 2 z1 z2 cos theta)``."""
    z0, z1, z2 = complex(z0), complex(z1), complex(z2)
    if in_spectrum_dinf((z0, z1, z2), tol):
        raise PointInSpectrum(f"({z0}, {z1}, {z2}) lies in the joint spectrum")
    c = z0 * z0 - z1 * z1 - z2 * z2
    p = 2 * z1 * z2
    res = numerics.periodic_quadrature(lambda th: z0 / (c - p * np.cos(th)), cfg)
    value = res.value / numerics.TWO_PI
    if full_output:
        return value, res
    return value


def dn_trace_resolvent(z, n: int, tol: float = 1e-12) -> complex:
    """``(1/n) sum_k z0 / (z0^2 - z1^2 - z2^2 - 2 z1 z2 cos(2 k pi / n))``."""
    z = as_point(z)
    factors = dn_det_factors(z, n)
    scale = max(1.0, abs(z.z0) ** 2, abs(z.z1) ** 2, abs(z.z2) ** 2)
    small = np.flatnonzero(np.abs(factors) <= tol * scale)
    if small.size:
        raise PoleAtNode(f"summand {int(small[0])} has a pole at this point")
    return complex(np.mean(z.z0 / factors))


# ---------------------------------------------------------------------------
# winding numbers and the homology coupling

#: Parameter grid on which the winding number must agree.
WINDING_GRID = tuple(np.linspace(-1.0, 1.0, 11))

WINDING_INTEGER_TOL = 1e-6


def l_x_on_samples(samples: np.ndarray, x: float) -> np.ndarray:
    """``1 - z1^2 - z2^2 - 2 z1 z2 x`` for each ``(z1, z2)`` row."""
    z1 = samples[:, 0]
    z2 = samples[:, 1]
    return 1 - z1 * z1 - z2 * z2 - 2 * z1 * z2 * x


def _winding_at(path: ClosedPath, x: float) -> float:
    _, vals = densify(path, lambda s: l_x_on_samples(s, x))
    return numerics.track_argument(vals, cyclic=True) / numerics.TWO_PI


def winding_number(path: ClosedPath, x: float | None = None) -> int:
    """Winding of ``L_x`` along ``path`` around 0.

    With ``x=None`` the winding is computed on an 11-point grid of
    ``[-1, 1]`` and :class:`WindingInconsistent` is raised unless all
    values agree.
    """
    if not path.closed:
        raise ValueError("winding numbers need a closed path")
    xs = WINDING_GRID if x is None else (float(x),)
    values = []
    for xv in xs:
        w = _winding_at(path, xv)
        k = round(w)
        if abs(w - k) > WINDING_INTEGER_TOL:
            raise WindingInconsistent(f"winding {w} at x={xv} is not an integer")
        values.append(int(k))
    if len(set(values)) != 1:
        raise WindingInconsistent(f"winding depends on x: {dict(zip(xs, values))}")
    return values[0]


def homology_coupling(path: ClosedPath) -> float:
    """``W(path) / 2``, a half-integer."""
    return winding_number(path, 0.0) / 2


def homology_coupling_direct(path: ClosedPath, theta_nodes: int = 64) -> float:
    """Coupling from its defining double integral.

    ``(1/4pi) int_0^{2pi} (1/2pi) [arg L_{cos theta}(path)] dtheta``: the
    inner argument change is tracked continuously along the path for each
    theta node and the outer integral uses the midpoint rule.
    """
    if not path.closed:
        raise ValueError("the coupling needs a closed path")
    thetas = (np.arange(theta_nodes) + 0.5) * numerics.TWO_PI / theta_nodes
    turns = [_winding_at(path, math.cos(th)) for th in thetas]
    return float(np.mean(turns)) / 2


@dataclass(frozen=True)
class FkComparison:
    z1: complex
    z2: complex
    closed: float
    quadrature: float
    converged: bool

    @property
    def difference(self) -> float:
        return abs(self.closed - self.quadrature)


def compare_fk(z1: complex, z2: complex, cfg: QuadratureConfig | None = None) -> FkComparison:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", numerics.NoConvergenceWarning)
        q, res = fk_det_quadrature(z1, z2, cfg, full_output=True)
    return FkComparison(complex(z1), complex(z2), fk_det_closed(z1, z2), q, res.converged)
