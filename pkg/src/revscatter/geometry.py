"""Warped-product geometry: radius profiles, reduced potentials, the Riccati map.

The rotation radius is ``r = r_o exp((2/m) Q)`` with ``Q(x) = -int_x^1 q``.
For a transversal eigenvalue ``E`` the reduced half-line potential is
``p = q' + q^2 + u - u0`` with ``u = u0 exp(-(4/m) Q)`` and ``u0 = E / r_o^2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidInput
from .numerics import Grid, cumulative_trapezoid_from_right, trapezoid

DEFAULT_GRID_N = 2048


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class RadiusProfile:
    """Profile function ``q`` on ``[0, 1]``, given by samples or by sine coefficients.

    With ``sine_coeffs`` the profile is ``q(x) = sum_n c_n sin(n pi x)``, which
    enforces ``q(0) = q(1) = 0`` exactly and makes ``q'`` and ``Q`` analytic.
    """

    m: int
    r_o: float
    grid_n: int = DEFAULT_GRID_N
    q_samples: Optional[np.ndarray] = None
    sine_coeffs: Optional[np.ndarray] = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidInput(f"m must be a positive integer, got {self.m}")
        if not self.r_o > 0:
            raise InvalidInput(f"r_o must be positive, got {self.r_o}")
        if (self.q_samples is None) == (self.sine_coeffs is None):
            raise InvalidInput("give exactly one of q_samples / sine_coeffs")
        if self.q_samples is not None:
            q = _frozen(self.q_samples)
            if len(q) != self.grid_n + 1:
                raise InvalidInput(f"q_samples has {len(q)} entries, expected {self.grid_n + 1}")
            object.__setattr__(self, "q_samples", q)
            if not np.all(np.isfinite(q)):
                raise InvalidInput("q_samples must be finite")
            if abs(q[-1]) > 1e-12 * (1 + np.abs(q).max()):
                raise InvalidInput(f"q(1) must vanish, got {q[-1]:.3e}")
        else:
            c = _frozen(self.sine_coeffs)
            if c.ndim != 1 or not np.all(np.isfinite(c)):
                raise InvalidInput("sine_coeffs must be a finite 1-D list")
            object.__setattr__(self, "sine_coeffs", c)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_function(cls, q: Callable, m: int = 2, r_o: float = 1.0, grid_n: int = DEFAULT_GRID_N):
        x = Grid(0.0, 1.0, grid_n).nodes
        vals = np.asarray(q(x), dtype=float)
        vals[-1] = 0.0 if abs(vals[-1]) < 1e-12 else vals[-1]
        return cls(m, r_o, grid_n, q_samples=vals)

    @classmethod
    def from_sine(cls, coeffs, m: int = 2, r_o: float = 1.0, grid_n: int = DEFAULT_GRID_N):
        return cls(m, r_o, grid_n, sine_coeffs=np.asarray(coeffs, dtype=float))

    @classmethod
    def from_radius(cls, r: Callable, dr: Callable, m: int = 2, grid_n: int = DEFAULT_GRID_N):
        """Profile ``q = (m/2) r'/r`` of a radius with ``r(1) = r_o``."""
        r_o = float(r(1.0))
        return cls.from_function(lambda x: 0.5 * m * dr(x) / r(x), m, r_o, grid_n)

    @classmethod
    def zero(cls, m: int = 2, r_o: float = 1.0, grid_n: int = DEFAULT_GRID_N):
        return cls(m, r_o, grid_n, q_samples=np.zeros(grid_n + 1))

    # -- evaluation -------------------------------------------------------
    @property
    def grid(self) -> Grid:
        return Grid(0.0, 1.0, self.grid_n)

    @property
    def x(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def is_series(self) -> bool:
        return self.sine_coeffs is not None

    def _modes(self):
        return np.pi * np.arange(1, len(self.sine_coeffs) + 1)

    def q(self, x=None) -> np.ndarray:
        if self.is_series:
            x = self.x if x is None else np.asarray(x, dtype=float)
            return np.sin(np.multiply.outer(x, self._modes())) @ self.sine_coeffs
        if x is None:
            return self.q_samples
        return np.interp(x, self.x, self.q_samples)

    def dq(self, x=None) -> np.ndarray:
        """``q'``: spectral for series, 2nd-order differences for samples."""
        if self.is_series:
            x = self.x if x is None else np.asarray(x, dtype=float)
            w = self._modes()
            return np.cos(np.multiply.outer(x, w)) @ (w * self.sine_coeffs)
        d = np.gradient(self.q_samples, self.grid.h, edge_order=2)
        return d if x is None else np.interp(x, self.x, d)

    def Q(self, x=None) -> np.ndarray:
        """``Q(x) = -int_x^1 q``, exactly zero at ``x = 1``."""
        if self.is_series:
            x = self.x if x is None else np.asarray(x, dtype=float)
            w = self._modes()
            tail = (np.cos(np.multiply.outer(x, w)) - np.cos(w)) / w
            return -(tail @ self.sine_coeffs)
        Qs = cumulative_trapezoid_from_right(self.q_samples, self.grid.h)
        return Qs if x is None else np.interp(x, self.x, Qs)

    @property
    def is_w10(self) -> bool:
        """``q(0) = q(1) = 0`` at sample resolution."""
        if self.is_series:
            return True
        q = self.q_samples
        return abs(q[0]) <= 1e-10 * (1 + np.abs(q).max()) and q[-1] == 0.0

    def w1_norm(self) -> float:
        """``||q'||_{L^2(0,1)}``, the norm of W^1_0."""
        if self.is_series:
            return float(np.sqrt(0.5 * np.sum((self._modes() * self.sine_coeffs) ** 2)))
        return float(np.sqrt(trapezoid(self.dq() ** 2, self.grid)))

    def l2_norm(self) -> float:
        if self.is_series:
            return float(np.sqrt(0.5 * np.sum(self.sine_coeffs ** 2)))
        return float(np.sqrt(trapezoid(self.q() ** 2, self.grid)))


@dataclass(frozen=True)
class TransversalMode:
    nu: int
    E_nu: float

    def __post_init__(self):
        if self.nu < 1:
            raise InvalidInput("mode index nu must be positive")
        if self.E_nu < 0:
            raise InvalidInput("transversal eigenvalue must be nonnegative")

    def u0(self, r_o: float) -> float:
        return self.E_nu / r_o ** 2


def check_mode_order(modes) -> None:
    E = [m.E_nu for m in sorted(modes, key=lambda m: m.nu)]
    if any(b < a for a, b in zip(E, E[1:])):
        raise InvalidInput("transversal eigenvalues must be nondecreasing in nu")


class Potential:
    """Real potential on ``[0, 1]``, identically zero for ``x > 1``.

    Samples live on a uniform grid. An optional exact callable is used for
    off-grid evaluation; otherwise samples are linearly interpolated.
    """

    def __init__(self, samples, grid: Grid | None = None, func: Callable | None = None):
        s = _frozen(samples)
        self.grid = grid if grid is not None else Grid(0.0, 1.0, len(s) - 1)
        if (self.grid.a, self.grid.b) != (0.0, 1.0):
            raise InvalidInput("potential grid must span [0, 1]")
        if len(s) != self.grid.n + 1:
            raise InvalidInput(f"{len(s)} samples for a grid of {self.grid.n} intervals")
        if not np.all(np.isfinite(s)):
            raise InvalidInput("potential samples must be finite")
        self.samples = s
        self.func = func

    @classmethod
    def from_function(cls, f: Callable, n: int = DEFAULT_GRID_N):
        g = Grid(0.0, 1.0, n)
        return cls(np.asarray(f(g.nodes), dtype=float) * np.ones(n + 1), g, f)

    @classmethod
    def zero(cls, n: int = DEFAULT_GRID_N):
        return cls(np.zeros(n + 1), Grid(0.0, 1.0, n), lambda x: np.zeros_like(np.asarray(x, float)))

    @property
    def x(self):
        return self.grid.nodes

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.func is not None:
            vals = np.asarray(self.func(np.clip(x, 0.0, 1.0)), dtype=float) * np.ones_like(x)
        else:
            vals = np.interp(x, self.x, self.samples)
        return np.where((x < 0) | (x > 1), 0.0, vals)

    def l1_norm(self) -> float:
        return float(trapezoid(np.abs(self.samples), self.grid))

    def mean(self) -> float:
        return float(trapezoid(self.samples, self.grid))

    def negative_sup(self) -> float:
        return float(max(0.0, -self.samples.min()))

    @property
    def is_zero(self) -> bool:
        return not np.any(self.samples)

    def sup_support(self, atol: float = 0.0) -> float:
        nz = np.nonzero(np.abs(self.samples) > atol)[0]
        return float(self.x[nz[-1]]) if len(nz) else 0.0


def derive_radius(profile: RadiusProfile):
    """Return ``(Q, r, rho)`` on the profile grid; ``rho = r^{m/2}`` is the impedance."""
    Q = profile.Q()
    r = profile.r_o * np.exp((2.0 / profile.m) * Q)
    rho = r ** (0.5 * profile.m)
    return Q, r, rho


def _u_ratio(profile: RadiusProfile, x=None):
    """``exp(-(4/m) Q)``, i.e. ``u / u0``."""
    return np.exp(-(4.0 / profile.m) * profile.Q(x))


def reduce_potential(profile: RadiusProfile, mode: TransversalMode) -> Potential:
    """Reduced potential ``p = q' + q^2 + u - u0`` for one transversal mode."""
    u0 = mode.u0(profile.r_o)
    samples = profile.dq() + profile.q() ** 2 + u0 * (_u_ratio(profile) - 1.0)
    func = None
    if profile.is_series:
        def func(x):
            return profile.dq(x) + profile.q(x) ** 2 + u0 * (_u_ratio(profile, x) - 1.0)
    return Potential(samples, profile.grid, func)


@dataclass(frozen=True, eq=False)
class RiccatiImage:
    """``v = V(q)`` on the grid with its centering constant ``c0``."""

    v: np.ndarray
    c0: float
    u0: float
    beta: float
    grid: Grid
    q: Optional[np.ndarray] = None

    def mean(self) -> float:
        return float(trapezoid(self.v, self.grid))

    def l2_norm(self) -> float:
        return float(np.sqrt(trapezoid(self.v ** 2, self.grid)))


def riccati_forward(profile: RadiusProfile, u0: float, beta: float | None = None) -> RiccatiImage:
    """Centered Riccati map ``v = q' + q^2 + u0 e^{-beta Q} - c0``."""
    if beta is None:
        beta = 4.0 / profile.m
    if not (u0 > 0 and beta > 0):
        raise InvalidInput("u0 and beta must be positive")
    q = profile.q()
    u = u0 * np.exp(-beta * profile.Q())
    c0 = float(trapezoid(q ** 2 + u, profile.grid))
    v = profile.dq() + q ** 2 + u - c0
    return RiccatiImage(_frozen(v), c0, float(u0), float(beta), profile.grid, _frozen(q))


def mean_offset(profile: RadiusProfile, u0: float, beta: float | None = None) -> float:
    """``v0 = int (q^2 + u - u0)``, so that ``p = v + v0``."""
    beta = 4.0 / profile.m if beta is None else beta
    u = u0 * np.exp(-beta * profile.Q())
    return float(trapezoid(profile.q() ** 2 + u - u0, profile.grid))


def check_support_lemma(img: RiccatiImage, eps: float, tau: float | None = None,
                        atol: float = 1e-12) -> bool:
    """Check at sample resolution: zero residual on ``(1-tau, 1)`` forces ``q = 0`` on ``(1-eps^2, 1)``.

    The residual is ``v + c0 - u0 = q' + q^2 + u - u0``. Defaults ``tau = eps``.
    """
    if img.q is None:
        raise InvalidInput("support check needs the generating q samples")
    tau = eps if tau is None else tau
    x = img.grid.nodes
    residual = img.v + img.c0 - img.u0
    near = x > 1.0 - tau
    inner = x > 1.0 - eps ** 2
    residual_zero = np.all(np.abs(residual[near]) <= atol)
    q_zero = np.all(np.abs(img.q[inner]) <= atol)
    return bool(q_zero or not residual_zero)


def vanishes_near_end(samples, grid: Grid, tau: float, atol: float = 0.0) -> bool:
    """True if the samples vanish on ``(1 - tau, 1)``."""
    x = grid.nodes
    sel = (x > grid.b - tau) & (x < grid.b)
    return bool(np.all(np.abs(np.asarray(samples)[sel]) <= atol))
