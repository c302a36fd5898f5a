"""Inverse of the centered Riccati map ``V(q) = q' + q^2 + u0 e^{-beta Q} - c0``.

``q`` is expanded in ``sin(n pi x)``, which builds in ``q(0) = q(1) = 0``. The
equation ``V(q) = v`` is tested against ``cos(m pi x)``, m = 1..N; these span the
mean-zero functions, so the constant ``c0`` drops out of the projected system.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInput, NoConvergence
from .geometry import DEFAULT_GRID_N, Potential, RadiusProfile, RiccatiImage, derive_radius
from .numerics import Grid, trapezoid

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SineSeries:
    """``q(x) = sum_n coeffs[n-1] sin(n pi x)``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 1 or len(c) == 0 or not np.all(np.isfinite(c)):
            raise InvalidInput("coeffs must be a non-empty finite 1-D array")
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def modes(self) -> np.ndarray:
        return np.pi * np.arange(1, self.N + 1)

    def w1_norm(self) -> float:
        """``||q'||_{L^2}``, the norm of the space of ``q`` with ``q(0) = q(1) = 0``."""
        return float(np.sqrt(0.5 * np.sum((self.modes * self.coeffs) ** 2)))

    def l2_norm(self) -> float:
        return float(np.sqrt(0.5 * np.sum(self.coeffs ** 2)))

    def padded(self, N: int) -> "SineSeries":
        c = np.zeros(max(N, self.N))
        c[: self.N] = self.coeffs
        return SineSeries(c)

    def profile(self, m: int = 2, r_o: float = 1.0, grid_n: int = DEFAULT_GRID_N) -> RadiusProfile:
        return RadiusProfile.from_sine(self.coeffs, m, r_o, grid_n)


def w1_distance(a: SineSeries, b: SineSeries) -> float:
    n = max(a.N, b.N)
    return SineSeries(a.padded(n).coeffs - b.padded(n).coeffs).w1_norm()


@dataclass
class InversionReport:
    converged: bool
    iterations: int
    projected_residual: float
    full_residual: float
    c0: float
    history: list = field(default_factory=list)
    continuation: bool = False


class _Galerkin:
    """Matrices of the projected system on a fixed quadrature grid."""

    def __init__(self, grid: Grid, N: int, u0: float, beta: float):
        self.grid, self.N, self.u0, self.beta = grid, N, u0, beta
        x = grid.nodes
        n = np.arange(1, N + 1)
        self.w_n = np.pi * n
        self.S = np.sin(np.outer(x, self.w_n))
        self.C = np.cos(np.outer(x, self.w_n))
        # int_x^1 sin(n pi t) dt, so Q = -T @ c
        self.T = (self.C - (-1.0) ** n) / self.w_n
        w = np.full(len(x), grid.h)
        w[0] = w[-1] = 0.5 * grid.h
        self.w = w
        self.CW = self.C * w[:, None]

    def fields(self, c):
        q = self.S @ c
        dq = self.C @ (self.w_n * c)
        u = self.u0 * np.exp(self.beta * (self.T @ c))
        return q, dq, u

    def residual(self, c, v):
        q, dq, u = self.fields(c)
        return self.CW.T @ (dq + q * q + u - v)

    def jacobian(self, c):
        q, _, u = self.fields(c)
        d = self.C * self.w_n + (2 * q)[:, None] * self.S + (self.beta * u)[:, None] * self.T
        return self.CW.T @ d

    def full(self, c, v):
        q, dq, u = self.fields(c)
        c0 = float(trapezoid(q * q + u, self.grid))
        r = dq + q * q + u - c0 - v
        return float(np.sqrt(trapezoid(r * r, self.grid))), c0


def _newton(gal: _Galerkin, v, c, tol, max_iter, history):
    r = gal.residual(c, v)
    nr = float(np.linalg.norm(r))
    history.append(nr)
    for it in range(1, max_iter + 1):
        if nr <= tol:
            return c, it - 1, True
        step = np.linalg.solve(gal.jacobian(c), -r)
        alpha = 1.0
        for _ in range(7):
            c_new = c + alpha * step
            r_new = gal.residual(c_new, v)
            n_new = float(np.linalg.norm(r_new))
            if np.isfinite(n_new) and n_new < nr:
                break
            alpha *= 0.5
        else:
            return c, it, False
        c, r, nr = c_new, r_new, n_new
        history.append(nr)
    return c, max_iter, nr <= tol


def riccati_invert(img: RiccatiImage, N: int = 64, tol: float = 1e-12, max_iter: int = 50,
                   strict: bool = True) -> tuple[SineSeries, InversionReport]:
    """Solve ``V(q) = v`` for ``q`` in the span of ``sin(n pi x)``, n = 1..N.

    Convergence is judged on the projected residual; the full L^2 residual is
    reported alongside (it also carries the truncation of ``v`` to N modes).
    """
    v = np.asarray(img.v, dtype=float)
    if abs(trapezoid(v, img.grid)) > 1e-8 * (1 + np.max(np.abs(v))):
        raise InvalidInput("v must have zero mean")
    gal = _Galerkin(img.grid, N, img.u0, img.beta)
    # linearized start: h' = v
    c = 2 * (gal.CW.T @ v) / gal.w_n
    history: list = []
    c1, its, ok = _newton(gal, v, c, tol, max_iter, history)
    used_cont = False
    if not ok:
        log.info("Newton stalled at residual %.3e; continuing in the data", history[-1])
        used_cont = True
        c1 = np.zeros(N)
        its = 0
        for s in (0.25, 0.5, 0.75, 1.0):
            c1, k, ok = _newton(gal, s * v, c1, tol if s == 1.0 else 1e-8, max_iter, history)
            its += k
    full, c0 = gal.full(c1, v)
    rep = InversionReport(ok, its, history[-1], full, c0, history, used_cont)
    if not ok and strict:
        raise NoConvergence(f"Riccati inversion stopped at projected residual {history[-1]:.3e}",
                            last=rep)
    return SineSeries(c1), rep


def potential_to_v(p: Potential, u0: float, beta: float) -> RiccatiImage:
    """``v = p - mean(p)``; ``c0`` is left undetermined (NaN) until ``q`` is known."""
    samples = np.asarray(p.samples, dtype=float)
    v = samples - trapezoid(samples, p.grid)
    return RiccatiImage(v, float("nan"), float(u0), float(beta), p.grid)


def rebuild_radius(q: SineSeries, m: int, r_o: float, grid_n: int = DEFAULT_GRID_N):
    """Profile and radius ``r = r_o e^{(2/m) Q}`` from a recovered ``q``."""
    prof = q.profile(m, r_o, grid_n)
    _, r, _ = derive_radius(prof)
    return prof, r


@dataclass
class BoundCheck:
    dq: float
    v: float
    upper: float

    @property
    def lower_ok(self) -> bool:
        return self.dq ** 2 <= self.v ** 2 * (1 + 1e-12) + 1e-14

    @property
    def upper_ok(self) -> bool:
        return self.v ** 2 <= self.upper * (1 + 1e-12) + 1e-14


def two_sided_bound(q: SineSeries, u0: float, beta: float,
                    grid: Grid = Grid(0.0, 1.0, DEFAULT_GRID_N)) -> BoundCheck:
    """``||q'||^2 <= ||v||^2 <= ||q'||^2 + 2||q||^3||q'|| + C ||q||^2 e^{2 beta ||q||}``,
    ``C = u0 (beta + 1)(2 + beta u0)``, all norms in ``L^2(0, 1)``."""
    gal = _Galerkin(grid, q.N, u0, beta)
    qs, dqs, u = gal.fields(q.coeffs)
    c0 = trapezoid(qs * qs + u, grid)
    v = dqs + qs * qs + u - c0
    nq = q.l2_norm()
    ndq = q.w1_norm()
    nv = float(np.sqrt(trapezoid(v * v, grid)))
    cst = u0 * (beta + 1) * (2 + beta * u0)
    upper = ndq ** 2 + 2 * nq ** 3 * ndq + cst * nq ** 2 * np.exp(2 * beta * nq)
    return BoundCheck(ndq, nv, float(upper))


def random_series(rng: np.random.Generator, w1_max: float = 2.0, n_modes: int = 16,
                  decay: float = 1.0) -> SineSeries:
    """Random sine series with ``||q'|| <= w1_max`` (uniform in the norm)."""
    raw = rng.standard_normal(n_modes) / np.arange(1, n_modes + 1) ** (1 + decay)
    s = SineSeries(raw)
    scale = rng.uniform(0.0, w1_max) / max(s.w1_norm(), 1e-300)
    return SineSeries(raw * scale)
