"""JSON and CSV readers/writers for profiles, potentials, zero sets and series."""
from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidInput
from .geometry import DEFAULT_GRID_N, Potential, RadiusProfile
from .numerics import Grid
from .resonances import ZeroSet


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def meta(config: dict) -> dict:
    return {"tool": "revscatter", "version": __version__, "config_hash": config_hash(config)}


def _load(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise InvalidInput(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(data, dict):
        raise InvalidInput(f"{path}: expected a JSON object")
    return data


def _field(d: dict, name: str, kind=float, where: str = "input"):
    if name not in d:
        raise InvalidInput(f"{where}: missing field '{name}'")
    try:
        return kind(d[name])
    except (TypeError, ValueError):
        raise InvalidInput(f"{where}: field '{name}' has the wrong type") from None


def _array(d: dict, name: str, where: str) -> np.ndarray:
    try:
        a = np.asarray(d[name], dtype=float)
    except (TypeError, ValueError):
        raise InvalidInput(f"{where}: field '{name}' must be a list of numbers") from None
    if a.ndim != 1:
        raise InvalidInput(f"{where}: field '{name}' must be a flat list")
    return a


# ----------------------------------------------------------------- profiles
def profile_from_dict(d: dict, where: str = "profile") -> RadiusProfile:
    m = _field(d, "m", int, where)
    r_o = _field(d, "r_o", float, where)
    has_q, has_c = "q_samples" in d, "sine_coeffs" in d
    if has_q == has_c:
        raise InvalidInput(f"{where}: give exactly one of 'q_samples' / 'sine_coeffs'")
    if has_c:
        grid_n = int(d.get("grid_n", DEFAULT_GRID_N))
        return RadiusProfile.from_sine(_array(d, "sine_coeffs", where), m, r_o, grid_n)
    q = _array(d, "q_samples", where)
    grid_n = int(d.get("grid_n", len(q) - 1))
    return RadiusProfile(m, r_o, grid_n, q_samples=q)


def profile_to_dict(profile: RadiusProfile) -> dict:
    d = {"m": profile.m, "r_o": profile.r_o, "grid_n": profile.grid_n}
    if profile.is_series:
        d["sine_coeffs"] = profile.sine_coeffs.tolist()
    else:
        d["q_samples"] = profile.q_samples.tolist()
    return d


def read_profile(path) -> RadiusProfile:
    return profile_from_dict(_load(path), str(path))


# --------------------------------------------------------------- potentials
def potential_from_dict(d: dict, where: str = "potential") -> Potential:
    n = _field(d, "grid_n", int, where)
    p = _array(d, "p_samples", where)
    if len(p) != n + 1:
        raise InvalidInput(f"{where}: 'p_samples' has {len(p)} entries, expected grid_n + 1 = {n + 1}")
    return Potential(p, Grid(0.0, 1.0, n))


def potential_to_dict(p: Potential) -> dict:
    return {"grid_n": p.grid.n, "p_samples": np.asarray(p.samples).tolist()}


def read_potential(path) -> Potential:
    return potential_from_dict(_load(path), str(path))


# ----------------------------------------------------------------- zero sets
def read_zero_set(path) -> ZeroSet:
    d = _load(path)
    for name in ("n0", "psi_norm", "resonances", "radius"):
        if name not in d:
            raise InvalidInput(f"{path}: missing field '{name}'")
    try:
        return ZeroSet.from_dict(d)
    except (TypeError, ValueError, KeyError) as exc:
        raise InvalidInput(f"{path}: {exc}") from None


# ------------------------------------------------------------------ writers
def write_json(path, payload: dict, config: dict) -> None:
    out = dict(payload)
    out["meta"] = meta(config)
    Path(path).write_text(json.dumps(out, indent=2))


def write_csv(path, header: list[str], columns, config: dict) -> None:
    m = meta(config)
    rows = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    with open(path, "w", newline="") as fh:
        fh.write(f"# {m['tool']} {m['version']} config_hash={m['config_hash']}\n")
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    header = lines[0].strip().split(",")
    data = np.array([[float(v) for v in ln.strip().split(",")] for ln in lines[1:] if ln.strip()])
    return header, data
