"""Closed-form joint spectra for the infinite and finite dihedral groups, the
projection pencil, and the Grigorchuk pencil ``Q_n`` with its ``Phi_n``
determinant recursion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import numerics
from .errors import DegenerateSlice, RenormalizationPole
from .pencil import Complex3Point, Pencil, as_point
from .selfsimilar import DEFAULT_LEVEL_CAP, build_level_rep, builtin_automaton

DEFAULT_TOL = 1e-9


# ---------------------------------------------------------------------------
# infinite dihedral group


def spectrum_parameter(z) -> complex | None:
    """``(z0^2 - z1^2 - z2^2) / (2 z1 z2)``, or ``None`` when ``z1 z2 = 0``."""
    z0, z1, z2 = as_point(z)
    if z1 * z2 == 0:
        return None
    return (z0 * z0 - z1 * z1 - z2 * z2) / (2 * z1 * z2)


def in_spectrum_dinf(z, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``z0^2 - z1^2 - z2^2 - 2 z1 z2 x = 0`` for some ``x`` in ``[-1, 1]``."""
    z0, z1, z2 = as_point(z)
    x = spectrum_parameter((z0, z1, z2))
    if x is None:
        return abs(z0 * z0 - z1 * z1 - z2 * z2) <= tol
    return abs(x.imag) <= tol and -1 - tol <= x.real <= 1 + tol


def projection_parameter(z) -> complex | None:
    """``-(z0^2 + z0 (z1 + z2)) / (z1 z2)``, or ``None`` when ``z1 z2 = 0``."""
    z0, z1, z2 = as_point(z)
    if z1 * z2 == 0:
        return None
    return -(z0 * z0 + z0 * (z1 + z2)) / (z1 * z2)


def in_spectrum_projections(z, tol: float = DEFAULT_TOL) -> bool:
    """Spectrum of ``z0 + z1 p + z2 q`` for the projections ``p = (1-a)/2``,
    ``q = (1-t)/2``: ``z0^2 + z0 (z1 + z2) + z1 z2 x = 0`` with ``x`` in ``[0, 1]``."""
    z0, z1, z2 = as_point(z)
    x = projection_parameter((z0, z1, z2))
    if x is None:
        return abs(z0 * (z0 + z1 + z2)) <= tol
    return abs(x.imag) <= tol and -tol <= x.real <= 1 + tol


def slice_curves(lambda1: complex, lambda2: complex, x: float) -> tuple[complex, complex]:
    """The two values ``w = +-(l1^2 + l2^2 + 2 l1 l2 x)^(-1/2)``.

    For either value, ``(1, w l1, w l2)`` lies in the spectrum.
    """
    l1, l2 = complex(lambda1), complex(lambda2)
    radicand = l1 * l1 + l2 * l2 + 2 * l1 * l2 * x
    scale = max(abs(l1), abs(l2)) ** 2
    if scale == 0 or abs(radicand) <= 1e-14 * scale:
        raise DegenerateSlice(f"radicand {radicand} vanishes for lambda=({l1}, {l2}), x={x}")
    w = 1 / cmath.sqrt(radicand)
    return w, -w


# ---------------------------------------------------------------------------
# finite dihedral groups


def dn_angles(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be positive")
    return 2 * math.pi * np.arange(n) / n


def cyclic_shift(n: int) -> np.ndarray:
    """``n x n`` permutation with ones below the diagonal and in the top-right corner."""
    return np.roll(np.eye(n), 1, axis=0)


def dn_pencil(n: int) -> Pencil:
    """``(I, lambda(a), lambda(t))`` of the left regular representation of ``D_n``.

    ``lambda(a) = [[0, T], [T*, 0]]`` and ``lambda(t) = [[0, I], [I, 0]]``.
    """
    t = cyclic_shift(n)
    zero = np.zeros((n, n))
    eye = np.eye(n)
    la = np.block([[zero, t], [t.T, zero]])
    lt = np.block([[zero, eye], [eye, zero]])
    return Pencil([np.eye(2 * n), la, lt], names=("1", "a", "t"))


def dn_det_factors(z, n: int) -> np.ndarray:
    """The ``n`` quadratic factors ``z0^2 - z1^2 - z2^2 - 2 z1 z2 cos(2 k pi / n)``."""
    z0, z1, z2 = as_point(z)
    return z0 * z0 - z1 * z1 - z2 * z2 - 2 * z1 * z2 * np.cos(dn_angles(n))


def dn_det_closed(z, n: int) -> complex:
    return complex(np.prod(dn_det_factors(z, n)))


def dn_vanishing_count(z, n: int, tol: float = DEFAULT_TOL) -> int:
    """Number of factors vanishing at ``z``, counted with repetition."""
    return int(np.count_nonzero(np.abs(dn_det_factors(z, n)) <= tol))


def in_spectrum_dn(z, n: int, tol: float = DEFAULT_TOL) -> bool:
    return dn_vanishing_count(z, n, tol) > 0


# ---------------------------------------------------------------------------
# self-similar dihedral representation


def dinf_level_pencil(n: int, automaton: str = "dinf_2874", cap: int = DEFAULT_LEVEL_CAP) -> Pencil:
    """``(I, M(a), M(t))`` at tree level ``n`` of a dihedral automaton."""
    rep = build_level_rep(builtin_automaton(automaton), n, cap)
    return Pencil([np.eye(rep.dim), rep["a"], rep["t"]], names=("1", "a", "t"))


def koopman_angles(n: int) -> list[float]:
    """Sorted distinct angles ``2 pi j / 2^m``, ``2 <= m <= n``, ``1 <= j <= 2^(m-1) - 1``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    fracs = {Fraction(j, 1 << m) for m in range(2, n + 1) for j in range(1, 1 << (m - 1))}
    return [2 * math.pi * float(f) for f in sorted(fracs)]


# ---------------------------------------------------------------------------
# the Grigorchuk pencil


def qn_pencil(n: int, cap: int = DEFAULT_LEVEL_CAP) -> Callable[[complex, complex], np.ndarray]:
    """``(lambda, mu) -> -lambda a_n + b_n + c_n + d_n - (mu + 1) I``."""
    rep = build_level_rep(builtin_automaton("grigorchuk"), n, cap)
    a = rep["a"].astype(float)
    base = (rep["b"].astype(float) + rep["c"] + rep["d"] - np.eye(rep.dim)).astype(complex)
    eye = np.eye(rep.dim)

    def q(lam: complex, mu: complex) -> np.ndarray:
        return base - complex(lam) * a - complex(mu) * eye

    return q


#: Above this level ``phi_eval`` goes through the log-scaled recursion.
PHI_DIRECT_MAX_LEVEL = 8


def _phi_direct(lam: complex, mu: complex, n: int) -> complex:
    if n == 0:
        return 2 - mu - lam
    if n == 1:
        return 2 - mu + lam
    p = mu * mu - 4 - lam * lam
    for k in range(3, n + 1):
        p = p * p - 2 * (2 * lam) ** (1 << (k - 2))
    return p


def _log(z: complex) -> complex:
    return complex(-math.inf, 0.0) if z == 0 else cmath.log(z)


def _log_sub(a: complex, b: complex) -> complex:
    """``log(e^a - e^b)`` without forming either exponential."""
    if b.real == -math.inf:
        return a
    if a.real == -math.inf:
        return b + 1j * math.pi
    m = max(a.real, b.real)
    d = cmath.exp(a - m) - cmath.exp(b - m)
    return complex(-math.inf, 0.0) if d == 0 else m + cmath.log(d)


def _wrap(phase: float) -> float:
    return math.remainder(phase, numerics.TWO_PI)


def phi_log(lam: complex, mu: complex, n: int) -> complex:
    """Complex logarithm of ``Phi_n`` (phase wrapped to ``(-pi, pi]``)."""
    lam, mu = complex(lam), complex(mu)
    if n <= 2:
        return _log(_phi_direct(lam, mu, n))
    lp = _log(_phi_direct(lam, mu, 2))
    log2lam = _log(2 * lam)
    for k in range(3, n + 1):
        power = 1 << (k - 2)
        b = math.log(2) + power * log2lam.real + 1j * _wrap(power * log2lam.imag)
        lp = _log_sub(2 * lp, b)
        lp = complex(lp.real, _wrap(lp.imag))
    return lp


def phi_eval(lam: complex, mu: complex, n: int) -> complex:
    """``Phi_n(lambda, mu)``; may overflow to infinity beyond level 8."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    lam, mu = complex(lam), complex(mu)
    if n <= PHI_DIRECT_MAX_LEVEL:
        return _phi_direct(lam, mu, n)
    lp = phi_log(lam, mu, n)
    if lp.real > 700:
        return complex(math.inf, 0.0)
    return cmath.exp(lp)


def phi_cosine_product(lam: complex, mu: complex, n: int) -> complex:
    """``prod_t (mu^2 - 4 - lambda^2 - 4 lambda cos(2 pi (2t+1) / 2^n))`` for ``n >= 2``."""
    if n < 2:
        raise ValueError("the cosine product is defined for n >= 2")
    t = np.arange(1 << (n - 2))
    c = np.cos(2 * math.pi * (2 * t + 1) / (1 << n))
    return complex(np.prod(mu * mu - 4 - lam * lam - 4 * lam * c))


def phi_cosine_angles(n: int) -> np.ndarray:
    """Angles ``2 pi (2t+1) / 2^n`` of the quadratic factors of ``Phi_n``."""
    t = np.arange(1 << (n - 2))
    return 2 * math.pi * (2 * t + 1) / (1 << n)


@dataclass(frozen=True)
class QnResiduals:
    """Relative residuals of the two determinant identities for ``Q_n``.

    ``product`` compares ``det Q_n`` with ``Phi_0 ... Phi_n``;
    ``renormalization`` compares it with
    ``(4 - mu^2)^(2^(n-2)) det Q_{n-1}(F(lambda, mu))`` and is ``None`` for
    ``n < 2``.
    """

    n: int
    product: float
    renormalization: float | None


RENORMALIZATION_THRESHOLD = 1e-12


def _rel_from_logs(lhs: complex, rhs: complex) -> float:
    if lhs.real == -math.inf and rhs.real == -math.inf:
        return 0.0
    if lhs.real == -math.inf or rhs.real == -math.inf:
        return math.inf
    return abs(cmath.exp(complex(lhs.real - rhs.real, _wrap(lhs.imag - rhs.imag))) - 1)


def qn_det_identity_check(
    lam: complex,
    mu: complex,
    n: int,
    threshold: float = RENORMALIZATION_THRESHOLD,
    cap: int = DEFAULT_LEVEL_CAP,
) -> QnResiduals:
    """Compare a direct determinant of ``Q_n`` with both closed forms.

    Residuals are ``|lhs / rhs - 1|`` computed from logarithms, so they are
    meaningful at levels where the determinants overflow.
    """
    from .dynamics import map_F  # dynamics imports this module

    lam, mu = complex(lam), complex(mu)
    logdet = numerics.mat_logdet(qn_pencil(n, cap)(lam, mu))
    log_prod = sum(phi_log(lam, mu, k) for k in range(n + 1))
    product = _rel_from_logs(logdet, log_prod)
    renorm = None
    if n >= 2:
        pole = 4 - mu * mu
        if abs(pole) < threshold:
            raise RenormalizationPole(f"|4 - mu^2| = {abs(pole):.3e} below {threshold:g}")
        lam1, mu1 = map_F(lam, mu)
        rhs = (1 << (n - 2)) * cmath.log(pole) + numerics.mat_logdet(qn_pencil(n - 1, cap)(lam1, mu1))
        renorm = _rel_from_logs(logdet, rhs)
    return QnResiduals(n, product, renorm)


def qn_spectrum_curves(n: int, lambdas: np.ndarray) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Points ``(lambda, mu)`` on the zero set of ``Phi_0 ... Phi_n``.

    Returns ``(label, lambda, mu)`` triples: the lines ``mu = 2 -+ lambda``
    and, for every factor angle ``theta`` of ``Phi_2 .. Phi_n``, both branches
    of ``mu^2 = 4 + lambda^2 + 4 lambda cos(theta)``.
    """
    lam = np.asarray(lambdas, dtype=complex)
    curves = [("phi0", lam, 2 - lam)]
    if n >= 1:
        curves.append(("phi1", lam, 2 + lam))
    for k in range(2, n + 1):
        for theta in phi_cosine_angles(k):
            root = np.sqrt(4 + lam * lam + 4 * lam * math.cos(theta))
            label = f"phi{k}:{theta:.12g}"
            curves.append((label + ":+", lam, root))
            curves.append((label + ":-", lam, -root))
    return curves
