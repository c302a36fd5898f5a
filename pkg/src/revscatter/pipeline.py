"""Forward (profile -> zeros) and inverse (zeros -> profile) pipelines."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import RevScatterError
from .geometry import Potential, RadiusProfile, TransversalMode, reduce_potential
from .jost import JostEvaluator
from .marchenko import MarchenkoConfig, MarchenkoKernel, input_from_zeros, solve_marchenko
from .resonances import FinderConfig, ZeroSet, find_zeros, validate_zero_set
from .riccati import InversionReport, SineSeries, potential_to_v, rebuild_radius, riccati_invert

log = logging.getLogger(__name__)


class StageFailure(RevScatterError):
    """A numerical stage of the inverse pipeline failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class InverseConfig:
    m: int = 2
    r_o: float = 1.0
    u0: float = 1.0
    n_sine: int = 64
    tail: bool = True
    marchenko: MarchenkoConfig = field(default_factory=MarchenkoConfig)

    @property
    def beta(self) -> float:
        return 4.0 / self.m


@dataclass(eq=False)
class InverseResult:
    potential: Potential
    kernel: MarchenkoKernel | None
    q: SineSeries
    profile: RadiusProfile
    r: np.ndarray
    riccati: InversionReport | None
    validation: dict


def forward(profile: RadiusProfile, mode: TransversalMode, R: float,
            finder: FinderConfig | None = None) -> tuple[JostEvaluator, ZeroSet]:
    p = reduce_potential(profile, mode)
    ev = JostEvaluator(p)
    return ev, find_zeros(ev, R, finder)


def inverse(zs: ZeroSet, cfg: InverseConfig = InverseConfig()) -> InverseResult:
    """Zero set -> S and norming constants -> Marchenko -> Riccati -> radius."""
    validation = validate_zero_set(zs, cfg.tail)
    if not validation["all_ok"]:
        log.warning("zero set fails the structural checks: %s", validation)
    if not zs.unit_support and zs.n0 == 0 and not zs.resonances and not zs.bound.n_plus:
        # free data: p = 0, q = 0, r = r_o
        n = cfg.marchenko.n_x
        q = SineSeries(np.zeros(cfg.n_sine))
        prof, r = rebuild_radius(q, cfg.m, cfg.r_o)
        return InverseResult(Potential.zero(n), None, q, prof, r, None, validation)
    try:
        kern = solve_marchenko(input_from_zeros(zs, cfg.marchenko, cfg.tail), cfg.marchenko)
    except RevScatterError as exc:
        raise StageFailure("marchenko", exc) from exc
    pot = kern.potential()
    try:
        q, rep = riccati_invert(potential_to_v(pot, cfg.u0, cfg.beta), cfg.n_sine)
    except RevScatterError as exc:
        raise StageFailure("riccati", exc) from exc
    prof, r = rebuild_radius(q, cfg.m, cfg.r_o)
    return InverseResult(pot, kern, q, prof, r, rep, validation)
