"""Multiparameter pencils ``A(z) = sum_i z_i A_i`` and the small built-in
representations of the infinite dihedral group.

Every built-in pencil carries the identity as coefficient 0, so
``evaluate(p, (z0, z1, z2))`` is ``z0 + z1 a + z2 t``. Homogeneous pencils
without the identity term are reached by passing ``z0 = 0``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import numerics
from .errors import ArityMismatch, DomainError, SampleTooCoarse


@dataclass(frozen=True)
class Complex3Point:
    z0: complex
    z1: complex
    z2: complex

    def __post_init__(self):
        for name in ("z0", "z1", "z2"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)

    def __iter__(self) -> Iterator[complex]:
        return iter((self.z0, self.z1, self.z2))

    def as_tuple(self) -> tuple[complex, complex, complex]:
        return (self.z0, self.z1, self.z2)

    def scaled(self, c: complex) -> "Complex3Point":
        return Complex3Point(c * self.z0, c * self.z1, c * self.z2)


def as_point(z) -> Complex3Point:
    """Accept a :class:`Complex3Point` or any length-3 sequence."""
    if isinstance(z, Complex3Point):
        return z
    z0, z1, z2 = z
    return Complex3Point(z0, z1, z2)


class Pencil:
    """An ordered list of equal-size square coefficient matrices."""

    def __init__(self, matrices: Sequence, names: Sequence[str] | None = None):
        mats = [numerics.as_cmatrix(m) for m in matrices]
        if not mats:
            raise ValueError("a pencil needs at least one coefficient matrix")
        dim = mats[0].shape[0]
        if any(m.shape != (dim, dim) for m in mats):
            raise ValueError("coefficient matrices must share one dimension")
        for m in mats:
            m.setflags(write=False)
        self._mats = tuple(mats)
        self.names = tuple(names) if names is not None else tuple(f"A{i}" for i in range(len(mats)))
        if len(self.names) != len(mats):
            raise ValueError("names must match the number of matrices")

    @property
    def matrices(self) -> tuple[np.ndarray, ...]:
        return self._mats

    @property
    def arity(self) -> int:
        return len(self._mats)

    @property
    def dim(self) -> int:
        return self._mats[0].shape[0]

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def __repr__(self):
        return f"Pencil(arity={self.arity}, dim={self.dim}, names={self.names})"


def evaluate(p: Pencil, z) -> np.ndarray:
    """``sum_i z_i A_i`` as a fresh complex array."""
    coeffs = tuple(z) if not isinstance(z, Complex3Point) else z.as_tuple()
    if len(coeffs) != p.arity:
        raise ArityMismatch(f"pencil has arity {p.arity}, got {len(coeffs)} coefficients")
    out = np.zeros((p.dim, p.dim), dtype=complex)
    for c, m in zip(coeffs, p.matrices):
        if c != 0:
            out += complex(c) * m
    return out


def pencil_det(p: Pencil, z) -> complex:
    return numerics.mat_det(evaluate(p, z))


def is_invertible(p: Pencil, z, threshold: float = numerics.PIVOT_THRESHOLD) -> bool:
    return numerics.is_invertible(evaluate(p, z), threshold)


# ---------------------------------------------------------------------------
# built-in two-dimensional representations


SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


def rho_theta_pencil(theta: float) -> Pencil:
    """Irreducible two-dimensional representation with parameter ``theta``.

    ``a -> [[0, e^{i theta}], [e^{-i theta}, 0]]``, ``t -> [[0, 1], [1, 0]]``;
    the determinant of ``z0 + z1 a + z2 t`` is
    ``z0^2 - z1^2 - z2^2 - 2 z1 z2 cos(theta)``.
    """
    e = cmath.exp(1j * theta)
    a = np.array([[0, e], [e.conjugate(), 0]], dtype=complex)
    return Pencil([np.eye(2), a, SWAP], names=("1", "a", "t"))


def pedersen_matrices(x: float) -> tuple[np.ndarray, np.ndarray]:
    """``a(x)`` and ``t(x)`` of the matrix-function model on ``[0, 1]``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    s = math.sqrt(x * (1.0 - x))
    a = np.array([[1 - 2 * x, -2 * s], [-2 * s, 2 * x - 1]], dtype=complex)
    t = np.array([[-1, 0], [0, 1]], dtype=complex)
    return a, t


def pedersen_pencil(x: float) -> Pencil:
    a, t = pedersen_matrices(x)
    return Pencil([np.eye(2), a, t], names=("1", "a", "t"))


def projection_pencil_from_dihedral(z) -> Complex3Point:
    """Coordinates of ``z0 + z1 p + z2 q`` in the basis ``(1, a, t)``.

    With ``p = (1 - a)/2`` and ``q = (1 - t)/2``:
    ``z0 + z1 p + z2 q = (z0 + (z1 + z2)/2) - (z1/2) a - (z2/2) t``.
    """
    z0, z1, z2 = as_point(z)
    return Complex3Point(z0 + (z1 + z2) / 2, -z1 / 2, -z2 / 2)


# ---------------------------------------------------------------------------
# closed paths in the (z1, z2) plane, z0 fixed at 1

#: Cap on the number of samples produced by densification.
MAX_PATH_SAMPLES = 1 << 20


@dataclass(frozen=True)
class ClosedPath:
    """Ordered ``(z1, z2)`` samples; ``closed`` means first sample == last."""

    samples: np.ndarray
    closed: bool = True

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.ndim != 2 or s.shape[1] != 2 or s.shape[0] < 1:
            raise ValueError(f"samples must have shape (k, 2), got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("path samples must be finite")
        if self.closed and s.shape[0] > 1 and not np.array_equal(s[0], s[-1]):
            raise ValueError("closed path must end at its first sample")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def __len__(self):
        return self.samples.shape[0]

    @classmethod
    def from_function(cls, gamma: Callable[[np.ndarray], tuple], n: int = 512) -> "ClosedPath":
        """Sample ``gamma(s)``, ``s in [0, 1]``, at ``n + 1`` points; the last
        sample is forced to repeat the first."""
        s = np.linspace(0.0, 1.0, n + 1)
        z1, z2 = gamma(s)
        pts = np.column_stack([np.broadcast_to(z1, s.shape), np.broadcast_to(z2, s.shape)])
        pts = pts.astype(complex)
        pts[-1] = pts[0]
        return cls(pts, closed=True)

    def reversed(self) -> "ClosedPath":
        return ClosedPath(self.samples[::-1].copy(), self.closed)

    def repeated(self, times: int) -> "ClosedPath":
        if times < 1:
            raise ValueError("times must be positive")
        body = self.samples[:-1] if self.closed else self.samples
        pts = np.vstack([body] * times + [self.samples[:1]])
        return ClosedPath(pts, self.closed)

    def to_json(self) -> dict:
        rows = [[z1.real, z1.imag, z2.real, z2.imag] for z1, z2 in self.samples]
        return {"closed": bool(self.closed), "samples": rows}

    @classmethod
    def from_json(cls, data: dict) -> "ClosedPath":
        rows = np.asarray(data["samples"], dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 4:
            raise ValueError("each path sample must be [z1_re, z1_im, z2_re, z2_im]")
        pts = np.column_stack([rows[:, 0] + 1j * rows[:, 1], rows[:, 2] + 1j * rows[:, 3]])
        return cls(pts, closed=bool(data["closed"]))


def gamma_half_circle(n: int = 512) -> ClosedPath:
    """The loop ``s -> (1 + e^{2 pi i s}/2, 0)``."""
    return ClosedPath.from_function(lambda s: (1 + np.exp(2j * np.pi * s) / 2, 0.0 * s), n)


def densify(
    path: ClosedPath,
    fn: Callable[[np.ndarray], np.ndarray],
    max_samples: int = MAX_PATH_SAMPLES,
) -> tuple[ClosedPath, np.ndarray]:
    """Insert segment midpoints until ``fn`` along the path turns by less
    than pi/2 between neighbouring samples.

    ``fn`` maps an ``(k, 2)`` sample array to ``k`` complex values. Returns
    the refined path and ``fn`` evaluated on it.
    """
    pts = np.array(path.samples)
    vals = np.asarray(fn(pts), dtype=complex)
    while True:
        with np.errstate(divide="ignore", invalid="ignore"):
            steps = np.abs(np.angle(vals[1:] / vals[:-1]))
        bad = np.flatnonzero(~(steps < math.pi / 4))
        if bad.size == 0 or np.any(vals == 0):
            return ClosedPath(pts, path.closed), vals
        if pts.shape[0] + bad.size > max_samples:
            raise SampleTooCoarse(
                f"densification would exceed {max_samples} samples"
            )
        mids = 0.5 * (pts[bad] + pts[bad + 1])
        mid_vals = np.asarray(fn(mids), dtype=complex)
        pts = np.insert(pts, bad + 1, mids, axis=0)
        vals = np.insert(vals, bad + 1, mid_vals)
