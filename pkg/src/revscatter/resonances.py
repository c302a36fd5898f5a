"""Zeros of the Jost function and the formulas built from them.

``find_zeros`` locates every zero of ``psi`` in a disc: ``k = 0``, bound states on
the positive imaginary axis, and resonances in the lower half-plane (by recursive
argument-principle subdivision plus Newton). The zero set then reproduces
``psi`` (Hadamard product), the phase shift, the norming constants and the
logarithmic derivative of ``psi``.

Truncating those zero sums at ``|k| <= R`` leaves a tail of order
``log(R)/R`` because resonances sit at ``Im k ~ -log|k|``. ``ZeroTail`` fits the
asymptotic string of the outermost found zeros and extends it; it is used by
default and can be switched off with ``tail=False``.
"""
from __future__ import annotations

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidInput,
    NonPositiveResult,
    NoConvergence,
    RadiusExceedsSearch,
    UnresolvedCluster,
    ZeroOnContour,
)
from .jost import BoundStateList, JostEvaluator, bound_states, detect_n0
from .numerics import Contour, winding_numbers

log = logging.getLogger(__name__)

AXIS_TOL = 1e-9


# ------------------------------------------------------------------ zero set
@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Zeros of ``psi`` in ``|k| <= radius``.

    ``resonances`` holds ``(k, multiplicity)`` with ``Re k >= 0`` and ``Im k < 0``;
    each entry with ``Re k > 0`` stands for itself and its mirror ``-conj(k)``.
    ``psi_norm`` is ``psi^{(n0)}(0)``. ``unit_support`` selects the ``e^{ik}``
    factor in the product formula; it is False only for ``p == 0``.
    """

    n0: int
    psi_norm: float
    bound: BoundStateList
    resonances: tuple
    radius: float
    unit_support: bool = True
    report: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.n0 not in (0, 1):
            raise InvalidInput("n0 must be 0 or 1")
        res = tuple((complex(k), int(m)) for k, m in self.resonances)
        for k, m in res:
            if k.imag >= 0 or k.real < 0 or m < 1:
                raise InvalidInput(f"bad resonance entry {k} (mult {m})")
        object.__setattr__(self, "resonances", res)

    # -- views -------------------------------------------------------------
    @property
    def s(self) -> float:
        """Coefficient of ``k`` in the exponential factor."""
        return 1.0 if self.unit_support else 0.0

    def _split(self):
        ks = np.array([k for k, _ in self.resonances], dtype=complex)
        ms = np.array([m for _, m in self.resonances], dtype=float)
        axis = ks.real <= AXIS_TOL * (1 + np.abs(ks))
        return ks[axis], ms[axis], ks[~axis], ms[~axis]

    def nonzero_zeros(self) -> np.ndarray:
        """All nonzero zeros with multiplicity, mirrors included."""
        ax, axm, off, offm = self._split()
        parts = [self.bound.ks, np.repeat(ax, axm.astype(int)),
                 np.repeat(off, offm.astype(int)), -np.conj(np.repeat(off, offm.astype(int)))]
        return np.concatenate([np.asarray(p, dtype=complex) for p in parts])

    def count(self, r: float | None = None) -> int:
        """Number of zeros (with multiplicity, including ``k = 0``) in ``|k| <= r``."""
        r = self.radius if r is None else r
        z = self.nonzero_zeros()
        return int(self.n0 + np.sum(np.abs(z) <= r))

    def __len__(self):
        return self.count()

    def truncated(self, r: float) -> "ZeroSet":
        """The same data restricted to ``|k| <= r`` (``r`` at most the search radius)."""
        if r > self.radius:
            raise RadiusExceedsSearch(f"radius {r} exceeds the search radius {self.radius}")
        res = tuple((k, m) for k, m in self.resonances if abs(k) <= r)
        return dataclasses.replace(self, resonances=res, radius=float(r), report={})

    # -- io ----------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "n0": self.n0,
            "psi_norm": self.psi_norm,
            "bound_states_tau": list(self.bound.kappas),
            "resonances": [{"re": k.real, "im": k.imag, "mult": m} for k, m in self.resonances],
            "radius": self.radius,
            "unit_support": self.unit_support,
            "report": {k: v for k, v in self.report.items() if isinstance(v, (int, float, str))},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ZeroSet":
        try:
            res = [(complex(r["re"], r["im"]), int(r.get("mult", 1))) for r in d["resonances"]]
            return cls(int(d["n0"]), float(d["psi_norm"]),
                       BoundStateList(tuple(d.get("bound_states_tau", ()))), tuple(res),
                       float(d["radius"]), bool(d.get("unit_support", True)),
                       dict(d.get("report", {})))
        except KeyError as exc:
            raise InvalidInput(f"zero set is missing field {exc.args[0]!r}") from None

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text: str) -> "ZeroSet":
        return cls.from_dict(json.loads(text))


# ----------------------------------------------------------------- tail model
@dataclass(frozen=True)
class ZeroTail:
    """Asymptotic resonance string beyond the search radius.

    With support length 1 the string has spacing pi:
    ``a_j = pi j + a0 + a1 log(a_j)/a_j + a2/a_j`` and
    ``b_j = b0 + b1 log a_j + b2/a_j + b3 log(a_j)/a_j``. Members with index
    ``j0 <= j`` and ``a_j <= a_max`` are synthesized; beyond ``a_max`` the sums
    ``sum 1/a^2`` and ``sum b/a^2`` are replaced by their integrals.
    """

    a_coef: tuple
    b_coef: tuple
    j0: int
    a_max: float
    fit_residual: float

    @staticmethod
    def _a_terms(a):
        return [np.ones_like(a), np.log(a) / a, 1 / a]

    @staticmethod
    def _b_terms(a):
        return [np.ones_like(a), np.log(a), 1 / a, np.log(a) / a]

    def real_parts(self, j) -> np.ndarray:
        j = np.asarray(j, dtype=float)
        a = np.pi * j + self.a_coef[0]
        for _ in range(6):
            a = np.pi * j + sum(c * t for c, t in zip(self.a_coef, self._a_terms(a)))
        return a

    def imag_parts(self, a) -> np.ndarray:
        return sum(c * t for c, t in zip(self.b_coef, self._b_terms(np.asarray(a, float))))

    def zeros(self) -> np.ndarray:
        """Synthetic zeros with ``Re > 0`` (mirrors implied)."""
        j_end = self.j0 + int(math.ceil((self.a_max - float(self.real_parts(self.j0))) / np.pi))
        a = self.real_parts(np.arange(self.j0, j_end + 1))
        return a + 1j * self.imag_parts(a)

    def remainders(self) -> tuple[float, float]:
        """``(sum 1/a^2, sum b/a^2)`` over the string beyond the synthesized part."""
        a = float(self.zeros()[-1].real) + 0.5 * np.pi
        b0, b1 = self.b_coef[0], self.b_coef[1] if len(self.b_coef) > 1 else 0.0
        s1 = 1.0 / (np.pi * a)
        sb = (b0 + b1 * math.log(a) + b1) / (np.pi * a)
        return s1, sb


def fit_tail(zs: ZeroSet, band: float = 0.5, a_max: float | None = None,
             min_points: int = 4) -> ZeroTail | None:
    """Fit the outer resonance string; ``None`` when it is too short or irregular."""
    _, _, off, offm = zs._split()
    off = off[offm == 1]
    if zs.radius <= 0:
        return None
    sel = np.sort_complex(off[np.abs(off) >= band * zs.radius])
    if len(sel) < min_points:
        return None
    a, b = sel.real, sel.imag
    gaps = np.diff(a)
    if np.any(np.abs(gaps - np.pi) > 0.3 * np.pi):
        log.info("resonance string irregular; no tail correction")
        return None
    j = np.rint((a - a[0]) / np.pi)
    if np.any(np.diff(j) != 1):
        log.info("resonance string has gaps; no tail correction")
        return None
    # keep at least two spare points per fit
    na = max(1, min(3, len(a) - 2))
    nb = max(2, min(4, len(a) - 2))
    Xa = np.column_stack(ZeroTail._a_terms(a)[:na])
    ca, *_ = np.linalg.lstsq(Xa, a - np.pi * j, rcond=None)
    Xb = np.column_stack(ZeroTail._b_terms(a)[:nb])
    cb, *_ = np.linalg.lstsq(Xb, b, rcond=None)
    resid = float(max(np.max(np.abs(Xa @ ca - (a - np.pi * j))), np.max(np.abs(Xb @ cb - b))))
    tail = ZeroTail(tuple(map(float, ca)), tuple(map(float, cb)), 0,
                    float(a_max or max(1.0e4, 50.0 * zs.radius)), resid)
    # the next string member must lie outside the disc
    j0 = int(j[-1]) + 1
    while True:
        a0 = float(tail.real_parts(j0))
        if abs(complex(a0, float(tail.imag_parts(a0)))) > zs.radius:
            break
        j0 += 1
    return ZeroTail(tail.a_coef, tail.b_coef, j0, tail.a_max, resid)


@dataclass
class _Zeros:
    """Flat arrays used by the formulas."""

    bound: np.ndarray        # tau_j
    axis: np.ndarray         # Im < 0 zeros on the imaginary axis (repeated by mult)
    pairs: np.ndarray        # Re > 0 members of mirror pairs (repeated by mult)
    s1: float = 0.0          # remainder sum 1/a^2 (pairs)
    sb: float = 0.0          # remainder sum b/a^2 (pairs)


def _zeros(zs: ZeroSet, tail) -> _Zeros:
    ax, axm, off, offm = zs._split()
    pairs = np.repeat(off, offm.astype(int))
    out = _Zeros(np.asarray(zs.bound.kappas, float), np.repeat(ax, axm.astype(int)), pairs)
    if tail is True:
        tail = fit_tail(zs)
    if isinstance(tail, ZeroTail):
        out.pairs = np.concatenate([pairs, tail.zeros()])
        out.s1, out.sb = tail.remainders()
    return out


# -------------------------------------------------------------- formulas
def hadamard_eval(zs: ZeroSet, k, tail=True) -> np.ndarray:
    """``psi(k) = psi^{(n0)}(0) k^{n0} e^{ik} prod (1 - k/k_n)``."""
    k = np.asarray(k, dtype=complex)
    z = _zeros(zs, tail)
    kk = k[..., None]
    logp = np.zeros(k.shape, dtype=complex)
    if len(z.bound):
        logp += np.log(1 - kk / (1j * z.bound)).sum(-1)
    if len(z.axis):
        logp += np.log(1 - kk / z.axis).sum(-1)
    if len(z.pairs):
        logp += (np.log(1 - kk / z.pairs) + np.log(1 + kk / np.conj(z.pairs))).sum(-1)
    logp += 2j * k * z.sb - k * k * z.s1
    return zs.psi_norm * k ** zs.n0 * np.exp(1j * zs.s * k + logp)


def phase_from_zeros(zs: ZeroSet, k_grid, tail=True) -> np.ndarray:
    """``phi(k) = phi(0+) + k + sum_n int_0^k Im k_n / |t - k_n|^2 dt`` on ``k > 0``."""
    k = np.asarray(k_grid, dtype=float)
    z = _zeros(zs, tail)
    phi = -np.pi * (len(z.bound) + 0.5 * zs.n0) + zs.s * k
    kk = k[:, None]

    def arc(a, b):
        return np.arctan((kk - a) / b) - np.arctan(-a / b)

    if len(z.bound):
        phi = phi + arc(0.0, z.bound).sum(-1)
    if len(z.axis):
        phi = phi + arc(0.0, z.axis.imag).sum(-1)
    if len(z.pairs):
        a, b = z.pairs.real, z.pairs.imag
        # the mirror at (-a, b)
        phi = phi + (arc(a, b) + arc(-a, b)).sum(-1)
    return phi + 2 * k * z.sb


def s_from_zeros(zs: ZeroSet, k_grid, tail=True) -> np.ndarray:
    """``S(k) = exp(-2 i phi(k))`` on any real grid (odd extension of the phase)."""
    k = np.asarray(k_grid, dtype=float)
    phi = phase_from_zeros(zs, np.abs(k), tail)
    phi = np.where(k < 0, -phi, phi)
    return np.exp(-2j * phi)


def norming_constants(zs: ZeroSet, tail=True) -> np.ndarray:
    """Norming constants ``c_j = int_0^inf f(x, i tau_j)^2 dx`` from the zero set."""
    z = _zeros(zs, tail)
    out = []
    for j, tau in enumerate(z.bound):
        logm = -2 * tau - math.log(2 * tau)
        neg = 0
        for n, t in enumerate(z.bound):
            if n == j:
                continue
            f = (1 - tau / t) / (1 + tau / t)
            neg += f < 0
            logm += math.log(abs(f))
        for w in z.axis:
            sig = -w.imag
            f = (1 + tau / sig) / (1 - tau / sig)
            if f == 0 or not np.isfinite(f):
                raise NonPositiveResult(f"bound state coincides with a mirrored zero at {w}")
            neg += f < 0
            logm += math.log(abs(f))
        if len(z.pairs):
            a, b = z.pairs.real, z.pairs.imag
            logm += float(np.sum(np.log((a * a + (b - tau) ** 2) / (a * a + (b + tau) ** 2))))
        logm += -4 * tau * z.sb
        c = math.exp(logm)
        if not np.isfinite(c) or c <= 0:
            raise NonPositiveResult(f"norming constant {j + 1} is {c}")
        # the product's sign is (-1)^neg; c_j is its absolute value
        out.append(c)
    return np.asarray(out)


def log_derivative_from_zeros(zs: ZeroSet, k, tail=True) -> np.ndarray:
    """``n0/k + i + sum 1/(k - k_n)``."""
    k = np.asarray(k, dtype=complex)
    z = _zeros(zs, tail)
    kk = k[..., None]
    out = 1j * zs.s + (zs.n0 / k if zs.n0 else 0)
    if len(z.bound):
        out = out + (1 / (kk - 1j * z.bound)).sum(-1)
    if len(z.axis):
        out = out + (1 / (kk - z.axis)).sum(-1)
    if len(z.pairs):
        out = out + (1 / (kk - z.pairs) + 1 / (kk + np.conj(z.pairs))).sum(-1)
    return out + 2j * z.sb - 2 * k * z.s1


@dataclass
class TraceCheck:
    probes: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray

    @property
    def residual(self) -> np.ndarray:
        return np.abs(self.lhs - self.rhs)


def trace_formula_check(ev: JostEvaluator, zs: ZeroSet, probes, tail=True) -> TraceCheck:
    """Compare ``psi'/psi`` from the evaluator with the zero-sum expression."""
    probes = np.atleast_1d(np.asarray(probes, dtype=complex))
    psi, dpsi = ev.psi_and_derivative(probes)
    if ev.free:
        lhs = np.zeros_like(probes)
    else:
        lhs = dpsi / psi
    return TraceCheck(probes, lhs, log_derivative_from_zeros(zs, probes, tail))


@dataclass(frozen=True, eq=False)
class CountingCurve:
    radii: np.ndarray
    counts: np.ndarray

    def ratio(self) -> np.ndarray:
        """``N_r / (2r/pi)``."""
        return self.counts / (2 * self.radii / np.pi)


def counting_curve(zs: ZeroSet, radii) -> CountingCurve:
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(np.diff(radii) <= 0) or np.any(radii <= 0):
        raise InvalidInput("radii must be positive and increasing")
    if radii.max() > zs.radius:
        raise RadiusExceedsSearch(f"radius {radii.max()} exceeds the search radius {zs.radius}")
    return CountingCurve(radii, np.array([zs.count(r) for r in radii]))


def zero_sum_partials(zs: ZeroSet) -> tuple[np.ndarray, np.ndarray]:
    """Moduli and cumulative sums of ``|Im k_n| / |k_n|^2`` over the found zeros."""
    z = zs.nonzero_zeros()
    z = z[np.argsort(np.abs(z))]
    return np.abs(z), np.cumsum(np.abs(z.imag) / np.abs(z) ** 2)


def tail_estimate(zs: ZeroSet) -> dict:
    """Size of what truncation at ``|k| <= R`` leaves out of the zero sums.

    ``sum_b`` is ``sum |Im k|/|k|^2`` and ``sum_1`` is ``sum 1/|k|^2`` beyond R (mirror
    pairs counted twice), from the fitted string; NaN if no string could be fitted.
    """
    t = fit_tail(zs)
    if t is None:
        return {"sum_b": float("nan"), "sum_1": float("nan"), "fitted": False}
    z = t.zeros()
    s1, sb = t.remainders()
    return {"sum_b": float(2 * (np.sum(np.abs(z.imag) / np.abs(z) ** 2) - sb)),
            "sum_1": float(2 * (np.sum(1 / np.abs(z) ** 2) + s1)),
            "fitted": True, "fit_residual": t.fit_residual}


def validate_zero_set(zs: ZeroSet, tail=True) -> dict:
    """Structural checks on a zero set: simple bound states, ``n0 <= 1``,
    mirror symmetry (by construction), and the bound-state sign condition."""
    kj = zs.bound.ks
    vals = np.real(hadamard_eval(zs, -kj, tail)) if len(kj) else np.array([])
    sign_ok = [bool((-1) ** (j + 1) * v > 0) for j, v in enumerate(vals)]
    return {"n0_ok": zs.n0 in (0, 1), "bound_simple": True, "sign_condition": sign_ok,
            "all_ok": all(sign_ok) and zs.n0 in (0, 1)}


# ---------------------------------------------------------------- finder
@dataclass
class FinderConfig:
    leaf_size: float = 1.0
    min_side: float = 1e-8
    top_gap: float = 1e-4      # the search box stops at Im k = -top_gap
    left_gap: float = 1e-3     # and starts at Re k = -left_gap
    density: float = 4.0       # initial samples per unit length of contour
    overshoot: float = 1.05    # the search box reaches overshoot * R
    strict: bool = False       # raise UnresolvedCluster instead of recording multiplicity
    max_depth: int = 80


def _rect(box, density):
    x0, x1, y0, y1 = box
    n = max(8, int(math.ceil(density * max(x1 - x0, y1 - y0))))
    return Contour.rectangle(x0, x1, y0, y1, samples_per_edge=n)


def _count_boxes(ev, boxes, density):
    if not boxes:
        return []
    return winding_numbers(ev.psi, [_rect(b, density) for b in boxes], scale=ev.scale)


def _split(box, frac=0.5):
    x0, x1, y0, y1 = box
    if x1 - x0 >= y1 - y0:
        xm = x0 + frac * (x1 - x0)
        return (x0, xm, y0, y1), (xm, x1, y0, y1)
    ym = y0 + frac * (y1 - y0)
    return (x0, x1, y0, ym), (x0, x1, ym, y1)


def _children_counts(ev, parents, density):
    """Split every ``(box, count)`` and count zeros in the halves.

    A zero on a split line moves that split; child counts must add up to the parent."""
    fracs = [0.5] * len(parents)
    for attempt in range(6):
        kids = [c for (b, _), f in zip(parents, fracs) for c in _split(b, f)]
        try:
            counts = _count_boxes(ev, kids, density)
        except ZeroOnContour:
            if len(parents) > 1:
                # isolate the offending parent
                out = []
                for p in parents:
                    out.extend(_children_counts(ev, [p], density))
                return out
            fracs = [0.5 + 0.0137 * (attempt + 1) * (-1) ** attempt]
            continue
        out = []
        for i, (box, n) in enumerate(parents):
            c0, c1 = counts[2 * i], counts[2 * i + 1]
            if c0 + c1 != n:
                raise NoConvergence(f"box counts not additive: {n} != {c0} + {c1} for {box}")
            out.extend([(kids[2 * i], c0), (kids[2 * i + 1], c1)])
        return out
    raise ZeroOnContour("split lines keep hitting zeros", point=None)


def _newton_batch(ev, seeds, tol=1e-11, max_iter=40):
    z = np.asarray(seeds, dtype=complex).copy()
    active = np.ones(len(z), dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        f, df = ev.psi_and_derivative(z[active])
        step = np.where(df != 0, f / np.where(df == 0, 1, df), np.inf)
        step = np.where(np.isfinite(step), step, 0.0)
        z[active] -= step
        done = np.abs(step) <= tol * (1 + np.abs(z[active]))
        idx = np.nonzero(active)[0]
        active[idx[done]] = False
    return z, ~active


def _inside(z, box, margin):
    x0, x1, y0, y1 = box
    return (x0 - margin <= z.real <= x1 + margin) and (y0 - margin <= z.imag <= y1 + margin)


def _resonances_in_box(ev, root, total, cfg: FinderConfig):
    work = [(root, total, 0)]
    found: list[tuple[complex, int]] = []
    while work:
        to_split, leaves = [], []
        for box, n, depth in work:
            if n == 0:
                continue
            side = max(box[1] - box[0], box[3] - box[2])
            if n == 1 and side <= cfg.leaf_size:
                leaves.append((box, depth))
            elif side <= cfg.min_side or depth >= cfg.max_depth:
                if cfg.strict:
                    raise UnresolvedCluster(f"{n} zeros unresolved in {box}", box=box)
                c = complex(0.5 * (box[0] + box[1]), 0.5 * (box[2] + box[3]))
                log.warning("recording %d-fold zero at %s", n, c)
                found.append((c, n))
            else:
                to_split.append(((box, n), depth))
        work = []
        if leaves:
            seeds = [complex(0.5 * (b[0] + b[1]), 0.5 * (b[2] + b[3])) for b, _ in leaves]
            roots, ok = _newton_batch(ev, seeds)
            for (box, depth), r, good in zip(leaves, roots, ok):
                margin = 1e-9 * (1 + abs(r))
                if good and _inside(r, box, margin):
                    found.append((complex(r), 1))
                else:
                    # Newton escaped: shrink the box and try again
                    to_split.append(((box, 1), depth))
        if to_split:
            kids = _children_counts(ev, [p for p, _ in to_split], cfg.density)
            depths = [d for _, d in to_split for _ in (0, 1)]
            work = [(b, n, d + 1) for (b, n), d in zip(kids, depths)]
    return found


def _jost_norm(ev: JostEvaluator, n0: int) -> float:
    if n0 == 0:
        return float(np.real(ev.psi(0.0)))
    _, d = ev.psi_and_derivative(0.0)
    return float(np.real(d))


SEARCH_LIMIT = 200.0


def find_zeros(ev: JostEvaluator, R: float, cfg: FinderConfig | None = None,
               search_limit: float | None = SEARCH_LIMIT) -> ZeroSet:
    """Every zero of ``psi`` with ``|k| <= R``.

    Resonances are searched in ``[-left_gap, 1.05 R] x [-1.05 R, -top_gap]`` only;
    mirrors are implied. ``report`` records the box count and a whole-disc
    winding count at a radius just above R.
    """
    cfg = cfg or FinderConfig()
    if R <= 0:
        raise InvalidInput("radius R must be positive")
    if search_limit is not None and R > search_limit:
        raise RadiusExceedsSearch(f"R = {R} exceeds the search limit {search_limit}")
    if ev.free:
        return ZeroSet(0, 1.0, BoundStateList(()), (), float(R), unit_support=False,
                       report={"disc_count": 0, "box_count": 0})
    n0 = detect_n0(ev)
    bound = bound_states(ev)
    Rs = cfg.overshoot * R
    root = (-cfg.left_gap, Rs, -Rs, -cfg.top_gap)
    for attempt in range(6):
        try:
            total = _count_boxes(ev, [root], cfg.density)[0]
            break
        except ZeroOnContour:
            x0, x1, y0, y1 = root
            root = (x0, x1 * 1.01, y0 * 1.01, y1)
    else:
        raise ZeroOnContour("search box boundary keeps hitting zeros", point=None)
    raw = _resonances_in_box(ev, root, total, cfg)
    res = []
    for k, m in raw:
        if abs(k.real) <= AXIS_TOL * (1 + abs(k)) or (m > 1 and abs(k.real) < cfg.left_gap):
            res.append((complex(0.0, k.imag), m))
        elif k.real > 0:
            res.append((k, m))
        # Re k < 0: mirror of a zero found with Re > 0
    res.sort(key=lambda e: (abs(e[0]), np.angle(e[0])))
    psi_norm = _jost_norm(ev, n0)
    wide = ZeroSet(n0, psi_norm, bound, tuple(res), float(Rs))
    r_disc, n_disc = _disc_check(ev, wide, R, Rs)
    res = [(k, m) for k, m in res if abs(k) <= R]
    return ZeroSet(n0, psi_norm, bound, tuple(res), float(R),
                   report={"box_count": total, "disc_radius": r_disc, "disc_count": n_disc,
                           "disc_found": wide.count(r_disc)})


def _disc_check(ev, zs: ZeroSet, R, Rs):
    """Whole-disc winding count at a radius in ``[R, Rs]`` away from all zeros."""
    z = zs.nonzero_zeros()
    cand = np.linspace(R, min(Rs, 1.02 * R), 41)
    mods = np.abs(z)
    gap = [np.min(np.abs(mods - r)) if len(mods) else 1.0 for r in cand]
    r = float(cand[int(np.argmax(gap))])
    n = max(512, int(4 * 2 * np.pi * r))
    disc = Contour.disc(r, n_vertices=n, samples_per_edge=1)
    return r, winding_numbers(ev.psi, [disc], scale=ev.scale)[0]


def check_disc_count(zs: ZeroSet) -> bool:
    """Found zeros inside the check radius agree with the whole-disc winding count."""
    if "disc_count" not in zs.report:
        return True
    return zs.report["disc_found"] == zs.report["disc_count"]
