import dataclasses
import json

import numpy as np
import pytest

from revscatter.errors import InvalidInput, RadiusExceedsSearch
from revscatter.geometry import Potential
from revscatter.jost import BoundStateList, JostEvaluator, anchor_k, unwrapped_phase
from revscatter.oracles import square_well, square_well_psi
from revscatter.resonances import (FinderConfig, ZeroSet, check_disc_count, counting_curve,
                                   find_zeros, fit_tail, hadamard_eval, log_derivative_from_zeros,
                                   norming_constants, phase_from_zeros, s_from_zeros,
                                   tail_estimate, trace_formula_check, validate_zero_set,
                                   zero_sum_partials)
from revscatter.verify import golden_path


@pytest.fixture(scope="module")
def ev4():
    return JostEvaluator(square_well(4.0))


@pytest.fixture(scope="module")
def zs4(ev4):
    return find_zeros(ev4, 30.0)


@pytest.fixture(scope="module")
def zs20():
    return find_zeros(JostEvaluator(square_well(-20.0)), 30.0)


@pytest.fixture(scope="module")
def free():
    ev = JostEvaluator(Potential.zero())
    return ev, find_zeros(ev, 50.0)


# ------------------------------------------------------------- finding
def test_free_potential_has_no_zeros(free):
    ev, zs = free
    assert len(zs) == 0 and zs.n0 == 0 and not zs.unit_support
    k = np.array([0.0, 2.5, 3 - 4j])
    assert np.all(hadamard_eval(zs, k) == 1.0)
    assert np.all(phase_from_zeros(zs, np.linspace(0.1, 5, 9)) == 0.0)
    assert np.all(trace_formula_check(ev, zs, [5 + 5j, 3j]).residual == 0.0)


def test_golden_zeros(zs4):
    gold = json.loads(golden_path().read_text())
    assert gold["c"] == 4.0 and gold["radius"] == 30.0
    ref = np.array([complex(a, b) for a, b in gold["zeros"]])
    found = np.array([k for k, _ in zs4.resonances])
    assert len(found) == len(ref)
    assert max(np.min(np.abs(found - z)) for z in ref) <= 1e-7


def test_zeros_are_zeros(zs4):
    k = np.array([k for k, _ in zs4.resonances])
    assert np.max(np.abs(square_well_psi(4.0, k))) <= 1e-8 * np.max(np.abs(square_well_psi(4.0, k.real)))


def test_disc_winding_agrees(zs4, zs20):
    for zs in (zs4, zs20):
        assert check_disc_count(zs)
        assert zs.report["disc_count"] == zs.count(zs.report["disc_radius"])


def test_bound_states_carried(zs20):
    assert zs20.bound.n_plus == 1 and zs20.n0 == 0
    assert zs20.bound.kappas[0] == pytest.approx(3.682135255910736, abs=1e-10)


def test_mirror_symmetry(zs4):
    z = zs4.nonzero_zeros()
    assert np.allclose(np.sort_complex(z), np.sort_complex(-np.conj(z)))
    assert np.all(z.imag < 0)


def test_finder_insensitive_to_resolution():
    pot = square_well(4.0)
    a = find_zeros(JostEvaluator(pot), 15.0)
    b = find_zeros(JostEvaluator(pot, steps_per_unit=8192), 15.0, FinderConfig(density=8.0))
    ka = np.sort_complex(np.array([k for k, _ in a.resonances]))
    kb = np.sort_complex(np.array([k for k, _ in b.resonances]))
    assert len(ka) == len(kb) and np.max(np.abs(ka - kb)) <= 1e-9


def test_finder_rejects_bad_radius(ev4):
    with pytest.raises(InvalidInput):
        find_zeros(ev4, 0.0)
    with pytest.raises(RadiusExceedsSearch):
        find_zeros(ev4, 500.0)


# ------------------------------------------------------------ counting
def test_counting_curve(zs4, free):
    cc = counting_curve(zs4, [5.0, 10.0, 20.0, 30.0])
    assert np.all(np.diff(cc.counts) >= 0) and cc.counts[-1] == len(zs4)
    assert np.all(counting_curve(free[1], [10.0, 50.0]).counts == 0)
    with pytest.raises(RadiusExceedsSearch):
        counting_curve(zs4, [10.0, 31.0])
    with pytest.raises(InvalidInput):
        counting_curve(zs4, [10.0, 5.0])


def test_truncated(zs4):
    t = zs4.truncated(10.0)
    assert t.radius == 10.0 and all(abs(k) <= 10 for k, _ in t.resonances)
    assert t.count() == zs4.count(10.0)
    with pytest.raises(RadiusExceedsSearch):
        zs4.truncated(31.0)


# ------------------------------------------------------------- formulas
def test_hadamard_at_origin(zs4, zs20):
    for zs in (zs4, zs20):
        assert hadamard_eval(zs, 0.0) == pytest.approx(zs.psi_norm, abs=1e-15)
    assert zs4.psi_norm == pytest.approx(square_well_psi(4.0, 0.0).real, abs=1e-9)


def test_hadamard_converges(zs4):
    k = np.linspace(0.0, 10.0, 201)
    ref = square_well_psi(4.0, k.astype(complex))
    bare = [np.max(np.abs(hadamard_eval(zs4.truncated(R), k, tail=False) - ref) / np.abs(ref))
            for R in (10.0, 20.0, 30.0)]
    assert bare[0] > bare[1] > bare[2]
    assert np.max(np.abs(hadamard_eval(zs4, k) - ref) / np.abs(ref)) <= 5e-3


def test_phase_from_zeros_matches_direct(ev4, zs4):
    k = np.linspace(0.5, 8.0, 76)
    grid = np.concatenate([k, np.linspace(8.05, anchor_k(ev4.potential, 60.0), 200)])
    direct = unwrapped_phase(ev4.psi, grid)[0][: len(k)]
    assert np.max(np.abs(phase_from_zeros(zs4, k) - direct)) <= 0.02
    s = s_from_zeros(zs4, np.array([-2.0, 2.0]))
    assert s[0] == pytest.approx(np.conj(s[1]))


def test_norming_single_bound_state():
    tau = 2.0
    zs = ZeroSet(0, -1.0, BoundStateList((tau,)), (), 10.0)
    assert norming_constants(zs)[0] == pytest.approx(np.exp(-2 * tau) / (2 * tau), rel=1e-14)


def test_norming_positive(zs20):
    c = norming_constants(zs20)
    assert len(c) == 1 and c[0] > 0


def test_log_derivative_matches_evaluator(ev4, zs4):
    k = np.array([5 + 5j, 3j])
    _, d = ev4.psi_and_derivative(k)
    assert np.allclose(log_derivative_from_zeros(zs4, k), d / ev4.psi(k), atol=1e-3)


def test_validate_sign_condition(zs20):
    assert validate_zero_set(zs20)["all_ok"]
    flipped = dataclasses.replace(zs20, psi_norm=-zs20.psi_norm)
    assert not validate_zero_set(flipped)["all_ok"]


def test_tail_fit(zs4):
    t = fit_tail(zs4)
    assert t is not None and t.fit_residual <= 1e-3
    # the next string member lies outside the disc
    assert abs(t.zeros()[0]) > zs4.radius
    assert np.all(np.diff(t.zeros().real) > 0.9 * np.pi)
    assert fit_tail(zs4.truncated(10.0)) is None
    assert not tail_estimate(zs4.truncated(10.0))["fitted"]


@pytest.mark.slow
def test_zero_sum_partials_settle(well4):
    mods, sums = zero_sum_partials(well4.zs)
    assert np.all(np.diff(sums) >= 0) and np.isfinite(sums[-1])
    # increment over the last unit shell below R = 120
    last = sums[-1] - sums[mods <= 119.0][-1]
    assert last <= 1e-3
    assert tail_estimate(well4.zs)["sum_b"] < sums[-1]


# ------------------------------------------------------------------- io
def test_json_round_trip(zs20):
    back = ZeroSet.loads(zs20.dumps())
    assert back.n0 == zs20.n0 and back.psi_norm == zs20.psi_norm
    assert back.resonances == zs20.resonances and back.radius == zs20.radius
    assert back.bound.kappas == zs20.bound.kappas
    assert back.report["disc_count"] == zs20.report["disc_count"]


def test_zero_set_validation():
    with pytest.raises(InvalidInput, match="resonances"):
        ZeroSet.from_dict({"n0": 0, "psi_norm": 1.0, "radius": 5.0})
    with pytest.raises(InvalidInput):
        ZeroSet(0, 1.0, BoundStateList(()), ((1 + 1j, 1),), 5.0)
    with pytest.raises(InvalidInput):
        ZeroSet(2, 1.0, BoundStateList(()), (), 5.0)
