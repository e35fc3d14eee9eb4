"""Shared numerical substrate: determinants, traces, periodic quadrature
and continuous argument tracking.

Matrices are plain 2-d numpy arrays; anything convertible by
``numpy.asarray`` is accepted.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from scipy.special import betainc, beta as beta_fn

from .errors import (
    NoConvergence,
    NoConvergenceWarning,
    PathHitsZero,
    SampleTooCoarse,
    SingularMatrix,
)

TWO_PI = 2.0 * math.pi

#: Relative pivot size below which a matrix is treated as singular.
PIVOT_THRESHOLD = 1e-10


def as_cmatrix(m) -> np.ndarray:
    """Return ``m`` as a square complex array, validating shape and finiteness."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def mat_det(m) -> complex:
    """Determinant by LU with partial pivoting (LAPACK ``getrf``)."""
    return complex(np.linalg.det(as_cmatrix(m)))


def mat_logdet(m) -> complex:
    """Complex logarithm of the determinant, ``log|det| + i arg det``.

    Returns ``-inf`` real part for an exactly singular matrix.
    """
    sign, logabs = np.linalg.slogdet(as_cmatrix(m))
    if sign == 0:
        return complex(-math.inf, 0.0)
    return complex(logabs, np.angle(sign))


def row_norm_logproduct(m) -> float:
    """``log`` of the product of Euclidean row norms (the Hadamard bound)."""
    norms = np.linalg.norm(as_cmatrix(m), axis=1)
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log(norms)))


def hadamard_ratio(m) -> float:
    """``|det m|`` divided by the product of the row norms; lies in ``[0, 1]``."""
    a = as_cmatrix(m)
    logdet = mat_logdet(a).real
    if logdet == -math.inf:
        return 0.0
    return math.exp(logdet - row_norm_logproduct(a))


def mat_inverse(m) -> np.ndarray:
    return np.linalg.inv(as_cmatrix(m))


def normalized_trace(m) -> complex:
    a = as_cmatrix(m)
    return complex(np.trace(a) / a.shape[0])


def _lu_factor(a: np.ndarray):
    # exact zero pivots are handled by the callers
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(a, check_finite=False)


def _lu(a: np.ndarray, threshold: float):
    lu, piv = _lu_factor(a)
    scale = float(np.max(np.linalg.norm(a, axis=1)))
    pivots = np.abs(np.diag(lu))
    smallest = float(pivots.min())
    if scale == 0.0 or smallest <= threshold * scale:
        raise SingularMatrix(
            f"pivot {smallest:.3e} below {threshold:g} x row-norm scale {scale:.3e}"
        )
    return lu, piv


def is_invertible(m, threshold: float = PIVOT_THRESHOLD) -> bool:
    """True when every LU pivot exceeds ``threshold`` times the largest row norm."""
    try:
        _lu(as_cmatrix(m), threshold)
    except SingularMatrix:
        return False
    return True


def trace_inverse(m, threshold: float = PIVOT_THRESHOLD) -> complex:
    """Normalized trace of ``m^{-1}``, via LU solves against the identity."""
    a = as_cmatrix(m)
    lu, piv = _lu(a, threshold)
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0], dtype=complex))
    return complex(np.trace(inv) / a.shape[0])


def _as_square(m) -> np.ndarray:
    """Like :func:`as_cmatrix` but keeps real input real (cheaper LU)."""
    a = np.asarray(m)
    if not np.iscomplexobj(a):
        a = a.astype(float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        return a
    return as_cmatrix(a)


@dataclass(frozen=True)
class SingularityMeasures:
    """Scale-free smallness indicators of a square matrix.

    ``hadamard_ratio`` is ``|det|`` over the product of row norms.
    ``sigma_bound`` is a rigorous upper bound on ``sigma_min / sigma_max``.
    """

    hadamard_ratio: float
    sigma_bound: float


def singularity_measures(m, rng: np.random.Generator | None = None, steps: int = 3) -> SingularityMeasures:
    """Both indicators from a single LU factorization.

    Inverse iteration from a random start gives ``y = m^{-1} v`` with
    ``||v|| = 1``, hence ``sigma_min <= 1 / ||y||``; the largest row norm
    is a lower bound for ``sigma_max``.
    """
    a = _as_square(m)
    rng = np.random.default_rng(0) if rng is None else rng
    norms = np.linalg.norm(a, axis=1)
    if not np.all(norms > 0):
        return SingularityMeasures(0.0, 0.0)
    lu, piv = _lu_factor(a)
    diag = np.abs(np.diag(lu))
    if np.any(diag == 0):
        return SingularityMeasures(0.0, 0.0)
    ratio = math.exp(float(np.sum(np.log(diag)) - np.sum(np.log(norms))))
    v = rng.standard_normal(a.shape[0])
    if np.iscomplexobj(a):
        v = v + 1j * rng.standard_normal(a.shape[0])
    ny = 0.0
    for _ in range(steps):
        v = v / np.linalg.norm(v)
        v = scipy.linalg.lu_solve((lu, piv), v)
        ny = float(np.linalg.norm(v))
        if not np.isfinite(ny):
            return SingularityMeasures(ratio, 0.0)
    return SingularityMeasures(ratio, 1.0 / ny / float(norms.max()))


def smallest_singular_bound(m, rng: np.random.Generator | None = None, steps: int = 3) -> float:
    """Rigorous upper bound on ``sigma_min(m) / sigma_max(m)``."""
    return singularity_measures(m, rng, steps).sigma_bound


# ---------------------------------------------------------------------------
# periodic quadrature


@dataclass(frozen=True)
class QuadratureConfig:
    initial_panels: int = 64
    abs_tol: float = 1e-10
    max_doublings: int = 22

    def __post_init__(self):
        if self.initial_panels < 1:
            raise ValueError("initial_panels must be positive")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be positive")


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of :func:`periodic_quadrature`."""

    value: complex
    converged: bool
    panels: int
    error_estimate: float


_CHUNK = 1 << 20
# Endpoint-clustering transform: psi'(u) proportional to sin(pi u)^_SIDI_ORDER.
_SIDI_ORDER = 6
_SIDI_A = (_SIDI_ORDER + 1) / 2.0
_SIDI_NORM = math.pi / beta_fn(_SIDI_A, 0.5)
_ENDPOINT_GAP = 1e-6


def _sidi_offsets(u: np.ndarray) -> np.ndarray:
    """Normalized distance ``psi(u)`` from the left endpoint, for ``u <= 1/2``."""
    return 0.5 * betainc(_SIDI_A, 0.5, np.sin(math.pi * u) ** 2)


def _midpoint_sum(f, n: int) -> complex:
    h = TWO_PI / n
    total = 0.0 + 0.0j
    for start in range(0, n, _CHUNK):
        k = np.arange(start, min(n, start + _CHUNK), dtype=float)
        total += np.sum(np.asarray(f((k + 0.5) * h), dtype=complex))
    return complex(total * h)


def _arc_sum(f, a: float, b: float, n: int) -> complex:
    """Midpoint rule in ``u`` on ``[a, b]`` after the endpoint-clustering map."""
    length = b - a
    total = 0.0 + 0.0j
    for start in range(0, n, _CHUNK):
        u = (np.arange(start, min(n, start + _CHUNK), dtype=float) + 0.5) / n
        left = u <= 0.5
        off = np.where(left, _sidi_offsets(np.where(left, u, 0.5)),
                       _sidi_offsets(np.where(left, 0.5, 1.0 - u)))
        theta = np.where(left, a + length * off, b - length * off)
        w = _SIDI_NORM * np.sin(math.pi * u) ** _SIDI_ORDER
        vals = np.asarray(f(theta), dtype=complex)
        # nodes next to an endpoint carry negligible weight, but rounding
        # can put them exactly on a zero of a log-singular integrand
        bad = ~np.isfinite(vals) & (off < _ENDPOINT_GAP)
        vals[bad] = 0.0
        total += np.sum(vals * w)
    return complex(total * length / n)


def _normalize_breakpoints(breakpoints: Sequence[float]) -> list[float]:
    pts = sorted({float(np.mod(b, TWO_PI)) for b in breakpoints})
    merged: list[float] = []
    for p in pts:
        if not merged or p - merged[-1] > 1e-14:
            merged.append(p)
    if len(merged) > 1 and merged[0] + TWO_PI - merged[-1] <= 1e-14:
        merged.pop()
    return merged


def periodic_quadrature(
    f: Callable[[np.ndarray], np.ndarray],
    cfg: QuadratureConfig | None = None,
    *,
    breakpoints: Sequence[float] | None = None,
    strict: bool = False,
) -> QuadratureResult:
    """Integrate a 2*pi-periodic function over ``[0, 2*pi]``.

    ``f`` must accept a 1-d array of angles. Without ``breakpoints`` this is
    the composite midpoint rule, doubling the panel count until two
    successive estimates differ by less than ``cfg.abs_tol``. Panel
    endpoints are never sampled, so isolated integrable singularities do
    not break it, they only slow it down.

    ``breakpoints`` lists angles where ``f`` is singular or sharply peaked.
    The circle is then cut there and every arc is integrated by the
    midpoint rule in a variable that clusters nodes toward the arc's ends
    (weight ``sin(pi u)^6``), which restores fast convergence for
    logarithmic endpoint singularities.

    A non-converged estimate is returned with ``converged=False`` and a
    :class:`NoConvergenceWarning`; ``strict=True`` raises
    :class:`NoConvergence` instead.
    """
    cfg = QuadratureConfig() if cfg is None else cfg
    if breakpoints:
        cuts = _normalize_breakpoints(breakpoints)
        arcs = [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)]
        arcs.append((cuts[-1], cuts[0] + TWO_PI))

        def estimate(n):
            return sum(_arc_sum(f, a, b, n) for a, b in arcs)
    else:
        arcs = [(0.0, TWO_PI)]
        estimate = lambda n: _midpoint_sum(f, n)  # noqa: E731

    n = cfg.initial_panels
    prev = estimate(n)
    err = math.inf
    for _ in range(cfg.max_doublings):
        n *= 2
        cur = estimate(n)
        err = abs(cur - prev)
        prev = cur
        if err < cfg.abs_tol:
            return QuadratureResult(cur, True, n * len(arcs), err)
        if not np.isfinite(cur):
            break
    result = QuadratureResult(prev, False, n * len(arcs), err)
    msg = f"quadrature did not reach abs_tol={cfg.abs_tol:g} (last change {err:.3e})"
    if strict:
        raise NoConvergence(msg, result)
    warnings.warn(msg, NoConvergenceWarning, stacklevel=2)
    return result


# ---------------------------------------------------------------------------
# argument tracking

#: Samples with modulus at or below this are treated as hitting zero.
ZERO_THRESHOLD = 1e-12


def track_argument(samples, cyclic: bool = True, zero_tol: float = ZERO_THRESHOLD) -> float:
    """Total continuous change of argument along a sampled path.

    Consecutive samples must differ in argument by less than pi/2 (the
    caller densifies otherwise). For ``cyclic`` input the path is closed
    back to its first sample if it is not already, and the result is an
    integer multiple of 2*pi up to rounding.
    """
    s = np.asarray(samples, dtype=complex).ravel()
    if s.size == 0:
        return 0.0
    if not np.all(np.isfinite(s)):
        raise ValueError("samples must be finite")
    mags = np.abs(s)
    bad = np.flatnonzero(mags <= zero_tol)
    if bad.size:
        i = int(bad[0])
        raise PathHitsZero(f"sample {i} has modulus {mags[i]:.3e}", index=i, value=complex(s[i]))
    if cyclic and s[0] != s[-1]:
        s = np.append(s, s[0])
    steps = np.angle(s[1:] / s[:-1])
    coarse = np.flatnonzero(np.abs(steps) >= math.pi / 2)
    if coarse.size:
        i = int(coarse[0])
        raise SampleTooCoarse(
            f"argument jumps by {steps[i]:.3f} rad between samples {i} and {i + 1}"
        )
    return float(np.sum(steps))
