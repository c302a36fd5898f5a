"""Shared numerical substrate: grids, RK4, quadrature, winding numbers, Newton."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DerivativeVanished,
    LengthMismatch,
    NoConvergence,
    NonFiniteState,
    ZeroOnContour,
)

__all__ = [
    "Grid",
    "ComplexSample",
    "Contour",
    "NewtonResult",
    "integrate_ivp",
    "trapezoid",
    "cumulative_trapezoid_from_right",
    "winding_number",
    "winding_numbers",
    "newton_polish",
    "dft_halfline",
    "symmetric_k_grid",
]


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``n`` intervals on ``[a, b]``."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"grid needs a < b, got [{self.a}, {self.b}]")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"grid needs n >= 2 intervals, got {self.n}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n

    @property
    def nodes(self) -> np.ndarray:
        # each node from its index, no accumulated drift
        j = np.arange(self.n + 1)
        return self.a + j * (self.b - self.a) / self.n

    def __len__(self):
        return self.n + 1


@dataclass(frozen=True)
class ComplexSample:
    k: complex
    value: complex
    pole: bool = False

    def __post_init__(self):
        if not self.pole and not np.isfinite(self.value):
            raise ValueError(f"non-finite sample at k={self.k}")


@dataclass(frozen=True)
class Contour:
    """Closed, positively oriented polygon sampled edge by edge."""

    vertices: tuple
    samples_per_edge: int = 16
    kind: str = "polygon"

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("a contour needs at least three vertices")
        if self.samples_per_edge < 1:
            raise ValueError("samples_per_edge must be positive")
        if self.signed_area() <= 0:
            raise ValueError("contour must be positively oriented")

    @classmethod
    def rectangle(cls, x0, x1, y0, y1, samples_per_edge=16) -> "Contour":
        verts = (complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1))
        return cls(verts, samples_per_edge, "rectangle")

    @classmethod
    def disc(cls, radius, n_vertices=256, center=0j, samples_per_edge=2) -> "Contour":
        t = 2 * np.pi * np.arange(n_vertices) / n_vertices
        verts = tuple(center + radius * np.exp(1j * t))
        return cls(verts, samples_per_edge, "disc")

    @property
    def bounds(self):
        v = np.asarray(self.vertices)
        return v.real.min(), v.real.max(), v.imag.min(), v.imag.max()

    def signed_area(self) -> float:
        v = np.asarray(self.vertices, dtype=complex)
        w = np.roll(v, -1)
        return 0.5 * float(np.sum(v.real * w.imag - w.real * v.imag))

    def inflated(self, factor: float) -> "Contour":
        v = np.asarray(self.vertices)
        c = v.mean()
        return Contour(tuple(c + (v - c) * factor), self.samples_per_edge, self.kind)

    def points(self) -> np.ndarray:
        """Initial samples; the first point is not repeated at the end."""
        v = np.asarray(self.vertices, dtype=complex)
        w = np.roll(v, -1)
        t = np.arange(self.samples_per_edge) / self.samples_per_edge
        return (v[:, None] + (w - v)[:, None] * t[None, :]).ravel()


@dataclass
class NewtonResult:
    root: complex
    iterations: int
    residual: float
    suspected_multiple: bool = False
    steps: list = field(default_factory=list)


def integrate_ivp(rhs: Callable, x0: float, x1: float, y0, steps: int) -> np.ndarray:
    """Classical fixed-step RK4 from ``x0`` to ``x1`` (either direction)."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    y = np.array(y0, dtype=complex)
    h = (x1 - x0) / steps
    for j in range(steps):
        x = x0 + j * (x1 - x0) / steps
        k1 = np.asarray(rhs(x, y))
        k2 = np.asarray(rhs(x + 0.5 * h, y + 0.5 * h * k1))
        k3 = np.asarray(rhs(x + 0.5 * h, y + 0.5 * h * k2))
        k4 = np.asarray(rhs(x + h, y + h * k3))
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(f"non-finite state at x={x + h:.6g}")
    return y


def trapezoid(values, grid: Grid) -> complex:
    v = np.asarray(values)
    if v.shape[-1] != grid.n + 1:
        raise LengthMismatch(f"expected {grid.n + 1} samples, got {v.shape[-1]}")
    return grid.h * (v[..., 1:-1].sum(axis=-1) + 0.5 * (v[..., 0] + v[..., -1]))


def cumulative_trapezoid_from_right(values, h: float) -> np.ndarray:
    """``out[j] = -int_{x_j}^{x_n} values``; the last entry is exactly 0."""
    v = np.asarray(values, dtype=float)
    seg = 0.5 * h * (v[1:] + v[:-1])
    out = np.zeros_like(v)
    out[:-1] = -np.cumsum(seg[::-1])[::-1]
    return out


def _phase_steps(fz: np.ndarray) -> np.ndarray:
    return np.angle(np.roll(fz, -1) / fz)


def winding_numbers(
    f: Callable,
    contours: Sequence[Contour],
    floor_rel: float = 1e-12,
    max_rounds: int = 40,
    max_points: int = 200_000,
    scale: Callable | None = None,
) -> list[int]:
    """Argument-principle zero counts for several contours, evaluated in one batch.

    Samples are refined by bisection until every phase increment is below pi/2.
    The zero floor is ``floor_rel * (1 + median|f|)``, or ``floor_rel * (1 + scale(z))``
    pointwise when ``scale`` is given (for functions growing exponentially).
    """
    paths = [c.points() for c in contours]
    values: list = [None] * len(paths)
    # contour index -> (insertion indices or None, points to evaluate)
    pending = {i: (None, p) for i, p in enumerate(paths)}

    for _ in range(max_rounds):
        if not pending:
            break
        order = list(pending)
        fv = np.asarray(f(np.concatenate([pending[i][1] for i in order])), dtype=complex)
        if not np.all(np.isfinite(fv)):
            raise NonFiniteState("non-finite function value on contour")
        pos = 0
        for i in order:
            idx, pts = pending[i]
            chunk = fv[pos:pos + len(pts)]
            pos += len(pts)
            values[i] = chunk if idx is None else np.insert(values[i], idx + 1, chunk)
        pending = {}
        for i in order:
            fz = values[i]
            mag = np.abs(fz)
            if scale is None:
                floor = floor_rel * (1.0 + np.median(mag))
            else:
                floor = floor_rel * (1.0 + scale(paths[i]))
            if np.any(mag < floor):
                j = int(np.argmin(mag - floor))
                raise ZeroOnContour(
                    f"|f| = {mag[j]:.3e} below floor at {paths[i][j]}",
                    point=paths[i][j],
                )
            bad = np.abs(_phase_steps(fz)) >= np.pi / 2
            if bad.any():
                if len(fz) + bad.sum() > max_points:
                    raise NoConvergence(f"contour {i} needs more than {max_points} samples")
                z = paths[i]
                idx = np.nonzero(bad)[0]
                mids = 0.5 * (z[idx] + np.roll(z, -1)[idx])
                paths[i] = np.insert(z, idx + 1, mids)
                pending[i] = (idx, mids)
    if pending:
        raise NoConvergence("phase refinement did not converge")

    counts = []
    for fz in values:
        total = _phase_steps(fz).sum() / (2 * np.pi)
        n = int(np.rint(total))
        if abs(total - n) > 0.05:
            raise NoConvergence(f"non-integer winding {total:.4f}")
        counts.append(n)
    return counts


def winding_number(f: Callable, contour: Contour, floor_rel: float = 1e-12, **kw) -> int:
    """Number of zeros of ``f`` (with multiplicity) enclosed by ``contour``."""
    return winding_numbers(f, [contour], floor_rel=floor_rel, **kw)[0]


def newton_polish(
    f: Callable,
    seed,
    tol: float = 1e-12,
    f_prime: Callable | None = None,
    max_iter: int = 50,
    ftol: float | None = None,
    fdf: Callable | None = None,
) -> NewtonResult:
    """Newton iteration from ``seed``.

    ``fdf`` may return ``(f, f')`` in one call; otherwise ``f_prime`` is used,
    falling back to a central difference with step ``1e-6 * (1 + |z|)``.
    Converged when ``|step| <= tol`` and, if given, ``|f| <= ftol``.
    """

    def evaluate(z):
        if fdf is not None:
            return fdf(z)
        fz = f(z)
        if f_prime is not None:
            return fz, f_prime(z)
        h = 1e-6 * (1 + abs(z))
        return fz, (f(z + h) - f(z - h)) / (2 * h)

    z = complex(seed)
    steps = []
    for it in range(1, max_iter + 1):
        fz, dfz = evaluate(z)
        fz, dfz = complex(fz), complex(dfz)
        if not np.isfinite(fz) or not np.isfinite(dfz):
            raise NonFiniteState(f"non-finite Newton state at z={z}")
        if dfz == 0:
            raise DerivativeVanished(f"f'(z) = 0 at z={z}")
        step = fz / dfz
        z = z - step
        steps.append(abs(step))
        if abs(step) <= tol and (ftol is None or abs(fz) <= ftol):
            res = abs(complex(evaluate(z)[0]))
            return NewtonResult(z, it, res, _looks_linear(steps), steps)
    raise NoConvergence(f"Newton did not converge from {seed}", last=z)


def _looks_linear(steps) -> bool:
    """Linear contraction (multiple root) shows step ratios bounded away from 0."""
    if len(steps) < 6:
        return False
    s = np.asarray(steps[-6:-1])
    s = s[s > 0]
    if len(s) < 4:
        return False
    ratios = s[1:] / s[:-1]
    return bool(np.all((ratios > 0.2) & (ratios < 0.95)))


def symmetric_k_grid(K: float = 200.0, n: int = 2 ** 14) -> Grid:
    return Grid(-K, K, n)


def dft_halfline(samples, grid: Grid, x) -> np.ndarray:
    """Trapezoid approximation of ``(1/2pi) int_{-K}^{K} s(k) e^{ixk} dk``."""
    s = np.asarray(samples, dtype=complex)
    if s.shape[0] != grid.n + 1:
        raise LengthMismatch(f"expected {grid.n + 1} samples, got {s.shape[0]}")
    k = grid.nodes
    w = np.full(grid.n + 1, grid.h)
    w[0] = w[-1] = 0.5 * grid.h
    ws = w * s
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape, dtype=complex)
    chunk = max(1, 4_000_000 // len(k))
    for i in range(0, len(xs), chunk):
        xi = xs[i:i + chunk]
        out[i:i + chunk] = np.exp(1j * np.outer(xi, k)) @ ws
    out /= 2 * np.pi
    return out if np.ndim(x) else out[0]
