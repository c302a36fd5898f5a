"""Identity suite: oracle and structural checks, each reporting pass/fail with numbers."""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .geometry import Potential, riccati_forward
from .jost import JostEvaluator, anchor_k, bound_states, detect_n0, unwrapped_phase
from .marchenko import (MarchenkoConfig, eigenfunction_norms, input_from_jost, l1_relative_error,
                        solve_marchenko)
from .oracles import square_well, square_well_bound_states, square_well_norm, square_well_psi
from .resonances import (ZeroSet, check_disc_count, counting_curve, find_zeros, hadamard_eval,
                         norming_constants, phase_from_zeros, trace_formula_check)
from .riccati import random_series, riccati_invert, two_sided_bound, w1_distance

log = logging.getLogger(__name__)

FIXTURES = (4.0, -20.0)
TRACE_PROBES = (5 + 5j, 3j, 8 + 1j)   # 8 - 1i sits among resonances; its mirror in C+ is used


def golden_path():
    return resources.files("revscatter") / "data" / "square_well_c4_R30.json"


@dataclass
class VerifyConfig:
    R: float = 120.0
    seed: int = 0
    trials: int = 100
    golden: str | None = None
    tail: bool = True
    suites: tuple | None = None   # subset of suite names; None runs all


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0


class _Context:
    """Lazily computed fixtures shared between suites."""

    def __init__(self, cfg: VerifyConfig):
        self.cfg = cfg
        self._ev: dict = {}
        self._zs: dict = {}

    def ev(self, c: float) -> JostEvaluator:
        if c not in self._ev:
            self._ev[c] = JostEvaluator(square_well(c))
        return self._ev[c]

    def zeros(self, c: float) -> ZeroSet:
        if c not in self._zs:
            self._zs[c] = find_zeros(self.ev(c), self.cfg.R)
        return self._zs[c]


# ------------------------------------------------------------------ suites
def jost_oracle(ctx: _Context) -> tuple[bool, dict]:
    re, im = np.meshgrid(np.linspace(-10, 10, 41), np.linspace(-10, 2, 41))
    k = (re + 1j * im).ravel()
    out = {}
    for c in FIXTURES:
        num = ctx.ev(c).psi(k)
        ref = square_well_psi(c, k)
        out[f"c={c:g}"] = float(np.max(np.abs(num - ref) / np.maximum(1.0, np.abs(ref))))
    return max(out.values()) <= 1e-8, {"max_rel_error": out}


def golden_zeros(ctx: _Context) -> tuple[bool, dict]:
    path = ctx.cfg.golden or golden_path()
    with open(path) as fh:
        gold = json.load(fh)
    c, radius = float(gold["c"]), float(gold["radius"])
    ref = np.array([complex(a, b) for a, b in gold["zeros"]])
    zs = find_zeros(ctx.ev(c) if c in FIXTURES else JostEvaluator(square_well(c)), radius)
    found = np.array([k for k, _ in zs.resonances])
    if len(found) != len(ref):
        return False, {"found": len(found), "expected": len(ref)}
    err = float(max(np.min(np.abs(found - z)) for z in ref)) if len(ref) else 0.0
    ok = err <= 1e-7 and check_disc_count(zs)
    return ok, {"max_error": err, "count": len(found), "disc_count": zs.report.get("disc_count"),
                "disc_found": zs.report.get("disc_found")}


def levinson(ctx: _Context) -> tuple[bool, dict]:
    c = -20.0
    ev = ctx.ev(c)
    n_plus = len(square_well_bound_states(c))
    n0 = detect_n0(ev)
    k = np.concatenate([[0.01], np.linspace(0.02, anchor_k(ev.potential, 60.0), 400)])
    phi, _ = unwrapped_phase(ev.psi, k)
    target = -np.pi * (n_plus + n0 / 2)
    return abs(phi[0] - target) <= 0.05, {"phi_0.01": float(phi[0]), "target": target,
                                           "n_plus": n_plus, "n0": n0}


def hadamard(ctx: _Context) -> tuple[bool, dict]:
    c = 4.0
    k = np.linspace(0.0, 10.0, 201)
    ref = square_well_psi(c, k.astype(complex))
    err = float(np.max(np.abs(hadamard_eval(ctx.zeros(c), k, ctx.cfg.tail) - ref) / np.abs(ref)))
    return err <= 1e-2, {"max_rel_error": err, "R": ctx.cfg.R}


def phase_series(ctx: _Context) -> tuple[bool, dict]:
    k = np.linspace(0.5, 10.0, 191)
    out = {}
    for c in FIXTURES:
        grid = np.concatenate([k, np.linspace(10.05, anchor_k(ctx.ev(c).potential, 60.0), 200)])
        direct, _ = unwrapped_phase(ctx.ev(c).psi, grid)
        series = phase_from_zeros(ctx.zeros(c), k, ctx.cfg.tail)
        out[f"c={c:g}"] = float(np.max(np.abs(direct[: len(k)] - series)))
    return max(out.values()) <= 0.02, {"max_abs_error": out}


def norming(ctx: _Context) -> tuple[bool, dict]:
    c = -20.0
    zs = ctx.zeros(c)
    prod = norming_constants(zs, ctx.cfg.tail)
    quad = np.array([square_well_norm(c, t) for t in zs.bound.kappas])
    rel = float(np.max(np.abs(prod - quad) / quad))
    return rel <= 0.02, {"product": prod.tolist(), "quadrature": quad.tolist(), "max_rel_error": rel}


def trace(ctx: _Context) -> tuple[bool, dict]:
    tc = trace_formula_check(ctx.ev(4.0), ctx.zeros(4.0), TRACE_PROBES, ctx.cfg.tail)
    res = tc.residual
    return float(res.max()) <= 5e-2, {"probes": [str(p) for p in TRACE_PROBES],
                                      "residual": res.tolist()}


def counting(ctx: _Context) -> tuple[bool, dict]:
    R = ctx.cfg.R
    if R <= 25.0:
        return False, {"error": "counting needs R > 25"}
    radii = np.array([25.0, min(100.0, R)])
    out, ok = {}, True
    for c in FIXTURES:
        ratio = counting_curve(ctx.zeros(c), radii).ratio()
        out[f"c={c:g}"] = ratio.tolist()
        ok &= bool(0.85 <= ratio[1] <= 1.15 and abs(ratio[1] - 1) < abs(ratio[0] - 1))
    return ok, {"radii": radii.tolist(), "ratio": out}


def riccati_round_trip(ctx: _Context) -> tuple[bool, dict]:
    rng = np.random.default_rng(ctx.cfg.seed)
    worst, bounds_ok, iters = 0.0, True, 0
    u0, beta = 1.0, 2.0
    for _ in range(ctx.cfg.trials):
        q0 = random_series(rng)
        img = riccati_forward(q0.profile(), u0, beta)
        q1, rep = riccati_invert(img)
        worst = max(worst, w1_distance(q0, q1))
        iters = max(iters, rep.iterations)
        b = two_sided_bound(q0, u0, beta)
        bounds_ok &= b.lower_ok and b.upper_ok
    return worst <= 1e-8 and bounds_ok, {"trials": ctx.cfg.trials, "worst_w1_error": worst,
                                         "bounds_hold": bool(bounds_ok), "max_iterations": iters}


def marchenko_bump(ctx: _Context) -> tuple[bool, dict]:
    f = lambda x: 5 * np.sin(np.pi * x) ** 2
    ev = JostEvaluator(Potential.from_function(f))
    b = bound_states(ev)
    data = input_from_jost(ev, b, eigenfunction_norms(ev, b), detect_n0(ev), MarchenkoConfig())
    pr = solve_marchenko(data).potential()
    err = l1_relative_error(pr.samples, f(pr.x), pr.x)
    return err <= 0.05, {"l1_rel_error": err}


SUITES = {
    "jost_oracle": jost_oracle,
    "golden_zeros": golden_zeros,
    "levinson": levinson,
    "counting": counting,
    "hadamard": hadamard,
    "phase_series": phase_series,
    "norming": norming,
    "trace": trace,
    "riccati_round_trip": riccati_round_trip,
    "marchenko_bump": marchenko_bump,
}


def run_suites(cfg: VerifyConfig = VerifyConfig()) -> list[SuiteResult]:
    ctx = _Context(cfg)
    names = cfg.suites or tuple(SUITES)
    unknown = set(names) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites: {sorted(unknown)}")
    out = []
    for name in names:
        t = time.perf_counter()
        try:
            ok, detail = SUITES[name](ctx)
        except Exception as exc:  # a crashing suite is a named failure
            log.debug("suite %s raised", name, exc_info=True)
            ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        out.append(SuiteResult(name, bool(ok), detail, time.perf_counter() - t))
        log.info("%s: %s", name, "pass" if ok else "FAIL")
    return out


def report(results: list[SuiteResult], cfg: VerifyConfig) -> dict:
    return {
        "seed": cfg.seed,
        "R": cfg.R,
        "tail": cfg.tail,
        "all_passed": all(r.passed for r in results),
        "suites": [{"name": r.name, "passed": r.passed, "seconds": round(r.seconds, 3),
                    "detail": r.detail} for r in results],
    }
