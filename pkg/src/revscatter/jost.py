"""Jost solution, Jost function, bound states and S-matrix for a potential on [0, 1].

The Jost solution ``f(x, k)`` solves ``-f'' + p f = k^2 f`` with ``f = e^{ikx}`` for
``x >= 1``; the Jost function is ``psi(k) = f(0, k)``. Everything is computed by a
backward RK4 sweep from ``x = 1`` with step points aligned to the potential grid.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import NonFiniteState, RealZeroDetected, SuspectedMultipleZero
from .geometry import Potential
from .numerics import newton_polish

STEPS_PER_UNIT = 4096
K_REF = 50.0
# |Im k| up to this value is inside the documented accuracy strip
STRIP = 30.0


class JostEvaluator:
    """Evaluates ``psi(k)`` for many ``k`` at once.

    The number of RK4 steps for a given ``k`` is ``steps_per_unit * ceil(max(1, |k|/50))``.
    Each value depends on ``k`` alone, so batching never changes results, and the
    coarse quantization keeps the number of distinct sweeps small.
    """

    def __init__(self, potential: Potential, steps_per_unit: int = STEPS_PER_UNIT,
                 k_ref: float = K_REF, cache: bool = True):
        self.potential = potential
        self.steps_per_unit = int(steps_per_unit)
        self.k_ref = float(k_ref)
        self._stage_cache: dict[int, np.ndarray] = {}
        self._cache = {} if cache else None
        self._lock = threading.Lock()
        self.free = potential.is_zero

    # -- internals --------------------------------------------------------
    def steps_for(self, k) -> np.ndarray:
        mag = np.maximum(1.0, np.abs(np.asarray(k)) / self.k_ref)
        return self.steps_per_unit * np.ceil(mag).astype(int)

    def _stage_values(self, steps: int) -> np.ndarray:
        with self._lock:
            pv = self._stage_cache.get(steps)
        if pv is None:
            j = np.arange(2 * steps + 1)
            # x = 1 is evaluated as the left limit of p
            x = 1.0 - j / (2.0 * steps)
            pv = self.potential(np.minimum(x, 1.0))
            with self._lock:
                self._stage_cache[steps] = pv
        return pv

    def _sweep(self, k: np.ndarray, steps: int, derivative: bool = False, record: int = 0):
        """Integrate from x = 1 down to x = 0 for every entry of ``k``.

        Returns ``psi`` (and ``dpsi/dk``); with ``record > 0`` also the solution at
        every ``record``-th step, ordered from x = 1 downward.
        """
        pv = self._stage_values(steps)
        h = -1.0 / steps
        k2 = k * k
        e = np.exp(1j * k)
        y0, y1 = e.copy(), 1j * k * e
        if derivative:
            z0, z1 = 1j * e, 1j * (1 + 1j * k) * e
        rec = [y0.copy()] if record else None
        hh, h6 = 0.5 * h, h / 6.0
        for j in range(steps):
            a = pv[2 * j] - k2
            b = pv[2 * j + 1] - k2
            c = pv[2 * j + 2] - k2
            if derivative:
                # (y, z) with z = dy/dk: z'' = (p - k^2) z - 2k y
                ya1, yb1 = y1, a * y0
                za1, zb1 = z1, a * z0 - 2 * k * y0
                ty0, ty1 = y0 + hh * ya1, y1 + hh * yb1
                tz0, tz1 = z0 + hh * za1, z1 + hh * zb1
                ya2, yb2 = ty1, b * ty0
                za2, zb2 = tz1, b * tz0 - 2 * k * ty0
                ty0, ty1 = y0 + hh * ya2, y1 + hh * yb2
                tz0, tz1 = z0 + hh * za2, z1 + hh * zb2
                ya3, yb3 = ty1, b * ty0
                za3, zb3 = tz1, b * tz0 - 2 * k * ty0
                ty0, ty1 = y0 + h * ya3, y1 + h * yb3
                tz0, tz1 = z0 + h * za3, z1 + h * zb3
                ya4, yb4 = ty1, c * ty0
                za4, zb4 = tz1, c * tz0 - 2 * k * ty0
                z0 = z0 + h6 * (za1 + 2 * za2 + 2 * za3 + za4)
                z1 = z1 + h6 * (zb1 + 2 * zb2 + 2 * zb3 + zb4)
            else:
                ya1, yb1 = y1, a * y0
                ty0, ty1 = y0 + hh * ya1, y1 + hh * yb1
                ya2, yb2 = ty1, b * ty0
                ty0, ty1 = y0 + hh * ya2, y1 + hh * yb2
                ya3, yb3 = ty1, b * ty0
                ty0, ty1 = y0 + h * ya3, y1 + h * yb3
                ya4, yb4 = ty1, c * ty0
            y0 = y0 + h6 * (ya1 + 2 * ya2 + 2 * ya3 + ya4)
            y1 = y1 + h6 * (yb1 + 2 * yb2 + 2 * yb3 + yb4)
            if record and (j + 1) % record == 0:
                rec.append(y0.copy())
        if not np.all(np.isfinite(y0)):
            raise NonFiniteState("Jost sweep overflowed; |Im k| too large")
        out = (y0, z0) if derivative else (y0,)
        if record:
            out = out + (np.array(rec),)
        return out

    def _grouped(self, k, derivative):
        k = np.atleast_1d(np.asarray(k, dtype=complex))
        psi = np.empty_like(k)
        dpsi = np.empty_like(k) if derivative else None
        steps = self.steps_for(k)
        for s in np.unique(steps):
            sel = steps == s
            res = self._sweep(k[sel], int(s), derivative)
            psi[sel] = res[0]
            if derivative:
                dpsi[sel] = res[1]
        return psi, dpsi

    # -- public -----------------------------------------------------------
    def psi(self, k):
        """Jost function at scalar or array ``k``."""
        scalar = np.ndim(k) == 0
        k = np.atleast_1d(np.asarray(k, dtype=complex))
        if self.free:
            out = np.ones_like(k)
        elif self._cache is None:
            out = self._grouped(k, False)[0]
        else:
            out = np.empty_like(k)
            with self._lock:
                hit = np.array([self._cache.get(z) for z in k.tolist()], dtype=object)
            miss = np.array([h is None for h in hit], dtype=bool)
            if miss.any():
                vals = self._grouped(k[miss], False)[0]
                out[miss] = vals
                with self._lock:
                    self._cache.update(zip(k[miss].tolist(), vals.tolist()))
            if (~miss).any():
                out[~miss] = hit[~miss].astype(complex)
        return out[0] if scalar else out

    __call__ = psi

    def psi_and_derivative(self, k):
        """``(psi(k), psi'(k))`` with the derivative from the variational equation."""
        scalar = np.ndim(k) == 0
        k = np.atleast_1d(np.asarray(k, dtype=complex))
        if self.free:
            psi, dpsi = np.ones_like(k), np.zeros_like(k)
        else:
            psi, dpsi = self._grouped(k, True)
        return (psi[0], dpsi[0]) if scalar else (psi, dpsi)

    def solution(self, k: complex, n: int | None = None):
        """``(x, f(x, k))`` on a uniform grid of ``n`` intervals over [0, 1]."""
        n = self.potential.grid.n if n is None else n
        steps = int(self.steps_for(k))
        steps = n * max(1, -(-steps // n))
        _, rec = self._sweep(np.array([complex(k)]), steps, record=steps // n)
        x = 1.0 - np.arange(n + 1) / n
        return x[::-1], rec[::-1, 0]

    def scale(self, k) -> np.ndarray:
        """Natural size of ``psi`` near ``k``: ``exp(2 max(0, -Im k))``."""
        return np.exp(2.0 * np.maximum(0.0, -np.imag(k)))


def jost_value(ev: JostEvaluator, k):
    return ev.psi(k)


# ---------------------------------------------------------------- bound states
@dataclass(frozen=True)
class BoundStateList:
    """Bound-state momenta ``k_j = i tau_j`` with ``tau_1 > tau_2 > ... > 0``."""

    kappas: tuple = ()

    def __post_init__(self):
        t = tuple(float(v) for v in self.kappas)
        if any(v <= 0 for v in t):
            raise ValueError("bound-state momenta must be positive")
        if any(b >= a for a, b in zip(t, t[1:])):
            raise ValueError("bound-state momenta must be strictly decreasing")
        object.__setattr__(self, "kappas", t)

    @property
    def n_plus(self) -> int:
        return len(self.kappas)

    @property
    def energies(self) -> np.ndarray:
        return -np.asarray(self.kappas) ** 2

    @property
    def ks(self) -> np.ndarray:
        return 1j * np.asarray(self.kappas)


def sign_condition(psi_func, bound: BoundStateList) -> list[bool]:
    """``(-1)^j psi(-k_j) > 0`` for ``j = 1..n_+`` (ordered by decreasing |k_j|)."""
    vals = np.real(psi_func(-bound.ks)) if bound.n_plus else []
    return [bool((-1) ** (j + 1) * v > 0) for j, v in enumerate(vals)]


def default_tau_max(potential: Potential) -> float:
    return float(np.sqrt(potential.negative_sup())) + 1.0


def bound_states(ev: JostEvaluator, tau_max: float | None = None, n_scan: int | None = None,
                 simple_rtol: float = 1e-6) -> BoundStateList:
    """All zeros of ``tau -> psi(i tau)`` on ``(0, tau_max]``, sorted decreasing."""
    p = ev.potential
    if ev.free or p.negative_sup() == 0.0:
        return BoundStateList(())
    tau_max = default_tau_max(p) if tau_max is None else float(tau_max)
    n_scan = n_scan or max(400, int(200 * tau_max))
    tau = np.linspace(0.0, tau_max, n_scan + 1)[1:]
    vals = np.real(ev.psi(1j * tau))

    def g(t):
        return float(np.real(ev.psi(1j * t)))

    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        t0 = brentq(g, tau[i], tau[i + 1], xtol=1e-14, rtol=1e-15)
        res = newton_polish(None, 1j * t0, tol=1e-13, fdf=ev.psi_and_derivative)
        roots.append(res.root.imag if abs(res.root.real) < 1e-8 else t0)
    # a tangential (double) zero would show as a tiny local extremum without sign change
    mag = np.abs(vals)
    scale = np.max(mag)
    for i in range(1, len(vals) - 1):
        if mag[i] < mag[i - 1] and mag[i] < mag[i + 1] and mag[i] < 1e-8 * scale:
            if vals[i - 1] * vals[i + 1] > 0:
                raise SuspectedMultipleZero(f"tangential zero of psi near i*{tau[i]:.6g}")
    for t in roots:
        _, d = ev.psi_and_derivative(1j * t)
        if abs(d) < simple_rtol * (1 + scale):
            raise SuspectedMultipleZero(f"psi'(i*{t:.6g}) = {abs(d):.3e}, zero not simple")
    return BoundStateList(tuple(sorted(roots, reverse=True)))


# ------------------------------------------------------------- scattering data
@dataclass(frozen=True, eq=False)
class ScatteringData:
    k_grid: np.ndarray
    s_values: np.ndarray
    phase: np.ndarray
    n0: int = 0
    psi_values: np.ndarray | None = field(default=None, repr=False)

    def phase_at_zero(self) -> float:
        return float(self.phase[0])


def detect_n0(ev: JostEvaluator) -> int:
    threshold = 1e-6 * (1 + ev.potential.l1_norm())
    return int(abs(ev.psi(0.0)) < threshold)


def anchor_k(potential: Potential, k_min: float = 0.0) -> float:
    """A momentum where ``|arg psi| < pi`` is guaranteed by ``|arg psi| <~ ||p||_1 / (2k)``."""
    return float(max(k_min, 10.0 + 2.0 * potential.l1_norm()))


def unwrapped_phase(psi_func, k_grid, dk_max: float = 0.02, max_rounds: int = 12):
    """Continuous ``arg psi(k)`` on an increasing positive grid, anchored at the top end.

    A dense helper grid keeps every increment below pi/2.
    """
    k_grid = np.asarray(k_grid, dtype=float)
    lo, hi = k_grid[0], k_grid[-1]
    n = max(2, int(np.ceil((hi - lo) / dk_max)))
    dense = np.union1d(k_grid, np.linspace(lo, hi, n + 1))
    vals = np.asarray(psi_func(dense.astype(complex)))
    for _ in range(max_rounds):
        steps = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(steps) >= np.pi / 2
        if not bad.any():
            break
        mids = 0.5 * (dense[:-1][bad] + dense[1:][bad])
        new = np.asarray(psi_func(mids.astype(complex)))
        order = np.argsort(np.concatenate([dense, mids]), kind="stable")
        dense = np.concatenate([dense, mids])[order]
        vals = np.concatenate([vals, new])[order]
    steps = np.angle(vals[1:] / vals[:-1])
    top = np.angle(vals[-1])
    phase = top - np.concatenate([np.cumsum(steps[::-1])[::-1], [0.0]])
    idx = np.searchsorted(dense, k_grid)
    return phase[idx], vals[idx]


def s_matrix(ev: JostEvaluator, k_grid, floor: float = 1e-10) -> ScatteringData:
    """``S(k) = psi(-k)/psi(k)`` and the phase shift ``arg psi`` on a positive grid."""
    k_grid = np.asarray(k_grid, dtype=float)
    if np.any(k_grid <= 0) or np.any(np.diff(k_grid) <= 0):
        raise ValueError("k_grid must be positive and increasing")
    phase, psi = unwrapped_phase(ev.psi, k_grid)
    if np.any(np.abs(psi) < floor):
        i = int(np.argmin(np.abs(psi)))
        raise RealZeroDetected(f"|psi| = {abs(psi[i]):.3e} at real k = {k_grid[i]:.6g}")
    # psi(-k) = conj psi(k) on the real line for real p
    s = np.conj(psi) / psi
    return ScatteringData(k_grid, s, phase, detect_n0(ev), psi)


# ------------------------------------------------------------- diagnostics
@dataclass
class JostDiagnostics:
    k_sup: float          # sup over the real grid of |k (psi(k) - 1)|
    type_estimate: float  # log|psi(-iT)| / T
    T: float


def jost_integral_form(ev: JostEvaluator, k_grid=None, T: float = 20.0) -> JostDiagnostics:
    """Checks consistent with ``psi = 1 + (F(k) - F(0))/(2ik)``: bounded ``k(psi - 1)``
    on the real line and exponential type 2 in the lower half-plane."""
    if k_grid is None:
        k_grid = np.linspace(10.0, 200.0, 400)
    k = np.asarray(k_grid, dtype=complex)
    if ev.free:
        return JostDiagnostics(0.0, 0.0, T)
    sup = float(np.max(np.abs(k * (ev.psi(k) - 1))))
    t = float(np.log(np.abs(ev.psi(-1j * T))) / T)
    return JostDiagnostics(sup, t, T)
