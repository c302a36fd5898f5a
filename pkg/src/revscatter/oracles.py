"""Closed-form references for the square well ``p = c * chi_[0,1]``.

These never touch the ODE solver; they are the independent side of the
cross-checks in the test-suite and in ``revscatter verify``.
"""
from __future__ import annotations

import numpy as np
from scipy import integrate
from scipy.optimize import brentq

from .geometry import Potential


def square_well(c: float, n: int = 2048) -> Potential:
    return Potential.from_function(lambda x: c * np.ones_like(np.asarray(x, float)), n)


def _sinc(kap):
    small = np.abs(kap) < 1e-6
    safe = np.where(small, 1.0, kap)
    return np.where(small, 1.0 - kap ** 2 / 6.0, np.sin(safe) / safe)


def square_well_psi(c: float, k):
    """``psi(k) = e^{ik} [cos kappa - i k sin(kappa)/kappa]``, ``kappa^2 = k^2 - c``."""
    k = np.asarray(k, dtype=complex)
    kap = np.sqrt(k * k - c)
    return np.exp(1j * k) * (np.cos(kap) - 1j * k * _sinc(kap))


def square_well_solution(c: float, k: complex, x):
    """Jost solution ``f(x, k)`` for ``0 <= x <= 1``."""
    x = np.asarray(x, dtype=float)
    kap = np.sqrt(complex(k) ** 2 - c)
    e = np.exp(1j * k)
    return e * np.cos(kap * (x - 1)) + 1j * k * e * (x - 1) * _sinc(kap * (x - 1))


def square_well_bound_states(c: float, n_scan: int = 20000) -> list[float]:
    """Bound-state momenta ``tau`` (decreasing) from sign changes of ``psi(i tau)``."""
    if c >= 0:
        return []
    top = np.sqrt(-c)

    def g(t):
        return float(np.real(square_well_psi(c, 1j * t)))

    tau = np.linspace(1e-9, top, n_scan)
    vals = np.array([g(t) for t in tau])
    idx = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    roots = [brentq(g, tau[i], tau[i + 1], xtol=1e-15) for i in idx]
    return sorted(roots, reverse=True)


def square_well_norm(c: float, tau: float) -> float:
    """``int_0^inf f(x, i tau)^2 dx`` by adaptive quadrature."""
    inner, _ = integrate.quad(lambda x: np.real(square_well_solution(c, 1j * tau, x)) ** 2,
                              0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
    return inner + np.exp(-2 * tau) / (2 * tau)
