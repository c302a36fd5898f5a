"""``revscatter`` command line: forward, inverse, verify, plotdata.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, io
from .errors import InvalidInput, RadiusExceedsSearch, RevScatterError
from .geometry import TransversalMode, derive_radius, reduce_potential
from .jost import JostEvaluator, anchor_k, unwrapped_phase
from .marchenko import MarchenkoConfig
from .pipeline import InverseConfig, StageFailure, inverse
from .resonances import ZeroSet, find_zeros, phase_from_zeros, validate_zero_set
from .verify import SUITES, VerifyConfig, report, run_suites

log = logging.getLogger("revscatter")

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class NumericalFailure(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage


def _positive(kind):
    def parse(s):
        v = kind(s)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {s}")
        return v
    return parse


def _common(p: argparse.ArgumentParser):
    p.add_argument("--threads", type=_positive(int), default=None,
                   help="worker cap (default: REVSCATTER_THREADS or 1)")
    p.add_argument("-v", "--verbose", action="store_true")


def _geometry(p: argparse.ArgumentParser, with_m: bool):
    if with_m:
        p.add_argument("--m", type=_positive(int), default=None,
                       help="dimension of the transversal factor (default 2)")
        p.add_argument("--r-o", type=_positive(float), default=None,
                       help="radius at the ends (default 1)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--E-nu", type=float, default=None, help="transversal eigenvalue E_nu")
    g.add_argument("--u0", type=float, default=None, help="u0 = E_nu / r_o^2 directly (default 1)")
    p.add_argument("--nu", type=_positive(int), default=1, help="transversal mode index")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="revscatter", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"revscatter {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forward", help="profile or potential -> zero set, counting and phase CSV")
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--profile", help="RadiusProfile JSON")
    src.add_argument("--potential", help="Potential JSON (skips the geometry reduction)")
    _geometry(f, with_m=False)
    f.add_argument("--grid-n", type=_positive(int), default=None, help="resample the profile grid")
    f.add_argument("--R", type=_positive(float), default=60.0, help="search radius (default 60)")
    f.add_argument("--k-max", type=_positive(float), default=20.0,
                   help="top of the phase CSV k range (default 20)")
    f.add_argument("--out-dir", default=".", help="output directory")
    _common(f)

    i = sub.add_parser("inverse", help="zero set -> potential and radius profile")
    i.add_argument("--zeros", required=True, help="ZeroSet JSON")
    _geometry(i, with_m=True)
    i.add_argument("--K", type=_positive(float), default=200.0, help="Fourier truncation (default 200)")
    i.add_argument("--n-sine", type=_positive(int), default=64, help="sine modes for q (default 64)")
    i.add_argument("--grid-n", type=_positive(int), default=2048, help="output grid intervals")
    i.add_argument("--no-tail", action="store_true", help="use the bare truncated zero sums")
    i.add_argument("--out-dir", default=".", help="output directory")
    _common(i)

    v = sub.add_parser("verify", help="run the identity suite")
    v.add_argument("--R", type=_positive(float), default=120.0, help="search radius (default 120)")
    v.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    v.add_argument("--trials", type=_positive(int), default=100, help="random Riccati trials")
    v.add_argument("--golden", default=None, help="golden zero file (default: packaged)")
    v.add_argument("--suite", action="append", choices=sorted(SUITES), help="run only these suites")
    v.add_argument("--no-tail", action="store_true", help="use the bare truncated zero sums")
    v.add_argument("--report", default="verify_report.json", help="JSON report path")
    _common(v)

    p = sub.add_parser("plotdata", help="plot-ready CSV from a zero set")
    p.add_argument("--zeros", required=True, help="ZeroSet JSON")
    p.add_argument("--k-max", type=_positive(float), default=20.0)
    p.add_argument("--out-dir", default=".")
    _common(p)
    return ap


# ------------------------------------------------------------------ helpers
def _u0(args, r_o: float) -> float:
    if args.u0 is not None:
        u0 = args.u0
    elif args.E_nu is not None:
        u0 = args.E_nu / r_o ** 2
    else:
        u0 = 1.0
    if u0 < 0:
        raise InvalidInput("field 'u0' (or 'E_nu') must be nonnegative")
    return float(u0)


def _out_dir(path) -> Path:
    d = Path(path)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _config(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("verbose",)}


def _counting_columns(zs: ZeroSet):
    r = np.linspace(zs.radius / 200, zs.radius, 200)
    return r, np.array([zs.count(x) for x in r]), 2 * r / np.pi


def _write_zero_outputs(out: Path, zs: ZeroSet, cfg: dict, ev: JostEvaluator | None, k_max: float):
    io.write_json(out / "zeros.json", zs.to_dict(), cfg)
    io.write_csv(out / "counting.csv", ["r", "N_r", "2r/pi"], _counting_columns(zs), cfg)
    k = np.linspace(0.05, k_max, 400)
    phi_z = phase_from_zeros(zs, k)
    if ev is not None:
        top = anchor_k(ev.potential, 1.5 * k_max)
        grid = np.concatenate([k, np.linspace(k_max + 0.05, top, 200)])
        phi_d = unwrapped_phase(ev.psi, grid)[0][: len(k)]
        io.write_csv(out / "phase.csv", ["k", "phi_direct", "phi_from_zeros"], [k, phi_d, phi_z], cfg)
    else:
        io.write_csv(out / "phase.csv", ["k", "phi_from_zeros"], [k, phi_z], cfg)
    ks = [k for k, _ in zs.resonances]
    io.write_csv(out / "resonances.csv", ["re", "im", "mult"],
                 [np.real(ks), np.imag(ks), [m for _, m in zs.resonances]], cfg)


# ----------------------------------------------------------------- commands
def cmd_forward(args) -> int:
    cfg = _config(args)
    if args.profile:
        prof = io.read_profile(args.profile)
        if args.grid_n and args.grid_n != prof.grid_n:
            if not prof.is_series:
                raise InvalidInput("field 'grid_n' can only resample a sine-series profile")
            prof = dataclasses.replace(prof, grid_n=args.grid_n)
        mode = TransversalMode(args.nu, _u0(args, prof.r_o) * prof.r_o ** 2)
        pot = reduce_potential(prof, mode)
    else:
        pot = io.read_potential(args.potential)
    ev = JostEvaluator(pot)
    try:
        zs = find_zeros(ev, args.R)
    except (InvalidInput, RadiusExceedsSearch):
        raise
    except RevScatterError as exc:
        raise NumericalFailure("forward", exc) from exc
    out = _out_dir(args.out_dir)
    _write_zero_outputs(out, zs, cfg, ev, args.k_max)
    n = zs.count()
    log.info("%d zeros in |k| <= %g (%d bound states, n0 = %d)", n, args.R, zs.bound.n_plus, zs.n0)
    print(f"forward: {n} zeros with |k| <= {args.R:g}; wrote {out}/zeros.json")
    return EXIT_OK


def cmd_inverse(args) -> int:
    cfg = _config(args)
    zs = io.read_zero_set(args.zeros)
    m = args.m or 2
    r_o = args.r_o or 1.0
    icfg = InverseConfig(m=m, r_o=r_o, u0=_u0(args, r_o), n_sine=args.n_sine, tail=not args.no_tail,
                         marchenko=MarchenkoConfig(K=args.K, threads=args.threads))
    val = validate_zero_set(zs, icfg.tail)
    if not val["all_ok"]:
        print("warning: zero set fails the structural checks; reconstruction attempted",
              file=sys.stderr)
    out = _out_dir(args.out_dir)
    io.write_json(out / "validation.json", val, cfg)
    try:
        res = inverse(zs, icfg)
    except StageFailure as exc:
        raise NumericalFailure(exc.stage, exc.cause) from exc
    prof = res.q.profile(m, r_o, args.grid_n)
    io.write_json(out / "profile.json", io.profile_to_dict(prof), cfg)
    io.write_json(out / "potential.json", io.potential_to_dict(res.potential), cfg)
    io.write_csv(out / "potential.csv", ["x", "p"], [res.potential.x, res.potential.samples], cfg)
    _, r, _ = derive_radius(prof)
    io.write_csv(out / "radius.csv", ["x", "q", "r"], [prof.x, prof.q(), r], cfg)
    print(f"inverse: ||q'|| = {res.q.w1_norm():.4g}, r in [{r.min():.4g}, {r.max():.4g}]; "
          f"wrote {out}/profile.json")
    return EXIT_OK


def cmd_verify(args) -> int:
    vcfg = VerifyConfig(R=args.R, seed=args.seed, trials=args.trials, golden=args.golden,
                        tail=not args.no_tail, suites=tuple(args.suite) if args.suite else None)
    results = run_suites(vcfg)
    rep = report(results, vcfg)
    io.write_json(args.report, rep, _config(args))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:20s} {r.seconds:7.1f}s  {r.detail}")
    print(f"verify: {sum(r.passed for r in results)}/{len(results)} suites passed "
          f"(seed {args.seed}); report {args.report}")
    return EXIT_OK if rep["all_passed"] else EXIT_VERIFY


def cmd_plotdata(args) -> int:
    zs = io.read_zero_set(args.zeros)
    out = _out_dir(args.out_dir)
    _write_zero_outputs(out, zs, _config(args), None, args.k_max)
    print(f"plotdata: wrote counting.csv, phase.csv, resonances.csv to {out}")
    return EXIT_OK


COMMANDS = {"forward": cmd_forward, "inverse": cmd_inverse, "verify": cmd_verify,
            "plotdata": cmd_plotdata}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads:
        os.environ["REVSCATTER_THREADS"] = str(args.threads)
    try:
        return COMMANDS[args.command](args)
    except (InvalidInput, RadiusExceedsSearch) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        print(f"numerical failure in stage '{exc.stage}': {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except RevScatterError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
