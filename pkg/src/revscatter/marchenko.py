"""Marchenko reconstruction of ``p`` from the S-matrix and bound-state data.

    G(x) = (1/2pi) int (1 - S(k)) e^{ixk} dk + sum_j e^{-x tau_j} / c_j
    K(x, t) + G(x + t) + int_x^X G(t + s) K(x, s) ds = 0,   t >= x
    p(x) = -2 d/dx K(x, x)

For ``p`` supported in [0, 1], ``G`` vanishes beyond 2, so the half-line
integral is cut at ``X = 2 + pad``. ``K(x, x)`` is computed for ``x`` in
``[0, 1 + pad]`` so the support of the result can be checked. The integral
equation is solved by a trapezoid Nystrom scheme on one uniform grid shared by
``x`` and ``t``.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, special
from scipy.linalg import lapack

from .errors import IllConditioned, InvalidInput, LargeImaginaryResidue
from .geometry import Potential
from .jost import JostEvaluator
from .numerics import Grid, dft_halfline, symmetric_k_grid

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MarchenkoConfig:
    K: float = 200.0            # k-integral truncation
    n_k: int = 2 ** 14          # k intervals on [-K, K]
    n_x: int = 400              # x intervals per unit length
    pad: float = 0.5            # x runs over [0, 1 + pad], t up to 2 + pad
    taper: float = 0.0          # fraction of [0, K] under a cosine taper (0 = off)
    subtract_tail: bool = True  # remove the 1/k tail of 1 - S and add its exact transform
    k_smooth: float = 10.0      # width of the Gaussian cutoff in the subtracted term
    remove_drift: bool = True   # strip a fitted linear phase drift from S
    cond_max: float = 1e8
    imag_tol: float = 1e-4
    threads: int | None = None


@dataclass(frozen=True, eq=False)
class MarchenkoInput:
    """S on a symmetric real grid plus bound-state momenta and norming constants."""

    k_grid: Grid
    s_values: np.ndarray
    taus: np.ndarray = field(default_factory=lambda: np.zeros(0))
    norming: np.ndarray = field(default_factory=lambda: np.zeros(0))
    trusted_k: float | None = None   # S is accurate up to here (default: the whole grid)

    def __post_init__(self):
        if len(self.s_values) != self.k_grid.n + 1:
            raise InvalidInput("s_values must match the k grid")
        if len(self.taus) != len(self.norming):
            raise InvalidInput("one norming constant per bound state is required")
        if np.any(np.asarray(self.norming) <= 0):
            raise InvalidInput("norming constants must be positive")


@dataclass(eq=False)
class MarchenkoKernel:
    x: np.ndarray              # [0, 1 + pad]
    diag: np.ndarray           # K(x, x)
    p: np.ndarray              # -2 d/dx K(x, x), untruncated
    g_x: np.ndarray            # [0, 2(2 + pad)]
    g: np.ndarray
    cond_max: float
    imag_residue: float
    tail_p: float = float("nan")

    def potential(self) -> Potential:
        """Recovered ``p`` hard-truncated to [0, 1]."""
        n = int(round(1.0 / (self.x[1] - self.x[0])))
        return Potential(self.p[: n + 1], Grid(0.0, 1.0, n))

    def support_ratio(self, start: float = 1.05) -> float:
        """``||p||_{L1(start, 1 + pad)} / ||p||_{L1(0, 1 + pad)}``."""
        a = np.abs(self.p)
        out = np.where(self.x >= start, a, 0.0)
        return float(np.trapezoid(out, self.x) / max(np.trapezoid(a, self.x), 1e-300))


def _threads(cfg: MarchenkoConfig) -> int:
    if cfg.threads:
        return int(cfg.threads)
    env = os.environ.get("REVSCATTER_THREADS")
    return int(env) if env else 1


def build_g(data: MarchenkoInput, x, cfg: MarchenkoConfig = MarchenkoConfig()):
    """``G`` at points ``x``; returns ``(real G, max relative imaginary part)``."""
    k = data.k_grid.nodes
    w = 1.0 - np.asarray(data.s_values, dtype=complex)
    if cfg.taper > 0:
        k0 = (1 - cfg.taper) * data.k_grid.b
        t = np.clip((np.abs(k) - k0) / (data.k_grid.b - k0), 0, 1)
        taper = 0.5 * (1 + np.cos(np.pi * t))
        w = w * taper
    x = np.asarray(x, dtype=float)
    if cfg.subtract_tail:
        # 1 - S = i P/k + P^2/(2k^2) + O(k^-3) with P = int p; subtract both
        # terms times (1 - exp(-k^2/a^2)) and add back their exact transforms
        P, drift = phase_asymptotics(data)
        if cfg.remove_drift:
            w = 1.0 - np.asarray(data.s_values, dtype=complex) * np.exp(2j * drift * k)
            if cfg.taper > 0:
                w = w * taper
        a = cfg.k_smooth
        safe = np.where(k == 0, 1.0, k)
        cut = 1 - np.exp(-(k / a) ** 2)
        r = np.where(k == 0, 0.0, (1j * P / safe + 0.5 * P * P / safe ** 2) * cut)
        ax = np.abs(x)
        f1 = -0.5 * special.erfc(a * ax / 2)
        f2 = -0.5 * ax * special.erfc(a * ax / 2) + np.exp(-(a * ax / 2) ** 2) / (a * np.sqrt(np.pi))
        g0 = dft_halfline(w - r, data.k_grid, x) + P * f1 + 0.5 * P * P * f2
    else:
        g0 = dft_halfline(w, data.k_grid, x)
    gb = np.zeros_like(x)
    for tau, c in zip(data.taus, data.norming):
        gb += np.exp(-x * tau) / c
    g = g0 + gb
    scale = max(1.0, float(np.max(np.abs(g))))
    return g.real, float(np.max(np.abs(g.imag))) / scale


def phase_asymptotics(data: MarchenkoInput) -> tuple[float, float]:
    """Fit ``k phi(k) = P/2 + d k^2 + g/k^2 + (oscillations)/k`` on the upper half
    of the trusted k-range, with ``S = exp(-2i phi)``.

    ``P`` fixes the ``1/k`` tail of ``1 - S``. A genuine phase has ``d = 0``; a
    nonzero ``d`` is a linear drift (e.g. from a truncated zero sum).
    """
    k = data.k_grid.nodes
    top = min(data.k_grid.b, data.trusted_k or data.k_grid.b)
    sel = (k >= 0.5 * top) & (k <= top)
    kk = k[sel]
    phi = -0.5 * np.angle(data.s_values[sel])
    design = np.column_stack([np.full_like(kk, 0.5), kk ** 2, kk ** -2.0,
                              np.cos(2 * kk) / kk, np.sin(2 * kk) / kk])
    coef, *_ = np.linalg.lstsq(design, phi * kk, rcond=None)
    return float(coef[0]), float(coef[1])


def tail_amplitude(data: MarchenkoInput) -> float:
    return phase_asymptotics(data)[0]


def solve_marchenko(data: MarchenkoInput, cfg: MarchenkoConfig = MarchenkoConfig()) -> MarchenkoKernel:
    h = 1.0 / cfg.n_x
    n_t = int(round((2.0 + cfg.pad) * cfg.n_x))
    n_out = int(round((1.0 + cfg.pad) * cfg.n_x))
    # G on (2i + l + m) h covers [0, 2 X]
    gx = h * np.arange(2 * n_t + 1)
    g, imag = build_g(data, gx, cfg)
    if imag > cfg.imag_tol:
        raise LargeImaginaryResidue(f"Im G relative size {imag:.2e} exceeds {cfg.imag_tol:g}")

    def solve_at(i):
        m = n_t - i                                      # intervals on [x_i, X]
        if m <= 0:
            return 0.0, 1.0
        idx = 2 * i + np.arange(m + 1)
        a = g[idx[:, None] + np.arange(m + 1)[None, :]]  # G(t_l + t_m)
        w = np.full(m + 1, h)
        w[0] = w[-1] = 0.5 * h
        mat = np.eye(m + 1) + a * w[None, :]
        rhs = -g[idx]
        lu, piv = linalg.lu_factor(mat, check_finite=False)
        rcond, _ = lapack.dgecon(lu, np.linalg.norm(mat, 1), norm="1")
        cond = 1.0 / rcond if rcond > 0 else np.inf
        if not np.isfinite(cond) or cond > cfg.cond_max:
            raise IllConditioned(f"Marchenko matrix at x = {i * h:.4f} has cond {cond:.3e}")
        return float(linalg.lu_solve((lu, piv), rhs, check_finite=False)[0]), float(cond)

    idx = range(n_out + 1)
    nt = _threads(cfg)
    if nt > 1:
        with ThreadPoolExecutor(nt) as pool:
            out = list(pool.map(solve_at, idx))
    else:
        out = [solve_at(i) for i in idx]
    diag = np.array([o[0] for o in out])
    x = h * np.arange(n_out + 1)
    P = tail_amplitude(data) if cfg.subtract_tail else float("nan")
    return MarchenkoKernel(x, diag, recover_potential(diag, h), gx, g,
                           max(o[1] for o in out), imag, P)


def recover_potential(diag, h: float) -> np.ndarray:
    """``p = -2 d/dx K(x, x)`` by centered differences."""
    return -2.0 * np.gradient(np.asarray(diag, dtype=float), h, edge_order=2)


# -------------------------------------------------------------- data routes
def _symmetric(s_pos: np.ndarray, grid: Grid, n0: int) -> np.ndarray:
    """Fill S on a symmetric grid from its values at ``k > 0`` (S(-k) = conj S(k))."""
    k = grid.nodes
    out = np.empty(len(k), dtype=complex)
    pos = k > 0
    out[pos] = s_pos
    neg = k < 0
    out[neg] = np.conj(s_pos[::-1][: neg.sum()])
    out[k == 0] = (-1.0) ** n0
    return out


def input_from_jost(ev: JostEvaluator, bound, norming, n0: int = 0,
                    cfg: MarchenkoConfig = MarchenkoConfig()) -> MarchenkoInput:
    """S sampled directly from the Jost function."""
    grid = symmetric_k_grid(cfg.K, cfg.n_k)
    k = grid.nodes
    kp = k[k > 0]
    psi = ev.psi(kp.astype(complex))
    s = _symmetric(np.conj(psi) / psi, grid, n0)
    return MarchenkoInput(grid, s, np.asarray(bound.kappas, float), np.asarray(norming, float))


def input_from_zeros(zs, cfg: MarchenkoConfig = MarchenkoConfig(), tail=True) -> MarchenkoInput:
    """S and norming constants computed from a zero set alone."""
    from .resonances import norming_constants, s_from_zeros

    grid = symmetric_k_grid(cfg.K, cfg.n_k)
    s = s_from_zeros(zs, grid.nodes, tail)
    s[grid.nodes == 0] = (-1.0) ** zs.n0
    c = norming_constants(zs, tail) if zs.bound.n_plus else np.zeros(0)
    return MarchenkoInput(grid, s, np.asarray(zs.bound.kappas, float), c, trusted_k=zs.radius)


def eigenfunction_norms(ev: JostEvaluator, bound, n: int = 4096) -> np.ndarray:
    """``int_0^inf f(x, i tau)^2 dx`` by quadrature of the Jost solution."""
    from scipy.integrate import simpson

    out = []
    for tau in bound.kappas:
        x, f = ev.solution(1j * tau, n)
        out.append(simpson(np.real(f) ** 2, x=x) + np.exp(-2 * tau) / (2 * tau))
    return np.asarray(out)


def l1_relative_error(p_rec, p_true, x, exclude: tuple | None = None) -> float:
    x = np.asarray(x)
    keep = np.ones(len(x), dtype=bool)
    if exclude is not None:
        keep &= ~((x >= exclude[0]) & (x <= exclude[1]))
    num = np.trapezoid(np.abs(np.where(keep, p_rec - p_true, 0.0)), x)
    den = np.trapezoid(np.abs(np.where(keep, p_true, 0.0)), x)
    return float(num / den)
