import numpy as np
import pytest

from revscatter.errors import IllConditioned, InvalidInput, LargeImaginaryResidue
from revscatter.geometry import Potential
from revscatter.jost import JostEvaluator, bound_states, detect_n0
from revscatter.marchenko import (MarchenkoConfig, MarchenkoInput, build_g, eigenfunction_norms,
                                  input_from_jost, input_from_zeros, l1_relative_error,
                                  phase_asymptotics, recover_potential, solve_marchenko)
from revscatter.numerics import symmetric_k_grid
from revscatter.oracles import square_well, square_well_norm

COARSE = MarchenkoConfig(K=100.0, n_k=2 ** 13, n_x=100)


def jost_input(pot, cfg=COARSE):
    ev = JostEvaluator(pot)
    b = bound_states(ev)
    return input_from_jost(ev, b, eigenfunction_norms(ev, b), detect_n0(ev), cfg)


@pytest.fixture(scope="module")
def data4():
    return jost_input(square_well(4.0))


@pytest.fixture(scope="module")
def data20():
    return jost_input(square_well(-20.0))


@pytest.fixture(scope="module")
def kern20(data20):
    return solve_marchenko(data20, COARSE)


# ---------------------------------------------------------------- inputs
def test_input_validation():
    g = symmetric_k_grid(10.0, 16)
    with pytest.raises(InvalidInput):
        MarchenkoInput(g, np.ones(5))
    with pytest.raises(InvalidInput):
        MarchenkoInput(g, np.ones(17), np.array([1.0]), np.zeros(0))
    with pytest.raises(InvalidInput):
        MarchenkoInput(g, np.ones(17), np.array([1.0]), np.array([-1.0]))


def test_norms_match_closed_form():
    ev = JostEvaluator(square_well(-20.0))
    b = bound_states(ev)
    assert eigenfunction_norms(ev, b)[0] == pytest.approx(square_well_norm(-20.0, b.kappas[0]), rel=1e-8)


# --------------------------------------------------------------------- G
def test_trivial_scattering_gives_zero():
    g = symmetric_k_grid(50.0, 2 ** 10)
    data = MarchenkoInput(g, np.ones(len(g), dtype=complex))
    assert phase_asymptotics(data)[0] == 0.0
    gv, imag = build_g(data, np.linspace(0, 5, 11))
    assert np.all(gv == 0) and imag == 0
    k = solve_marchenko(data, MarchenkoConfig(n_x=50))
    assert np.all(k.diag == 0) and np.all(k.p == 0)


def test_g_supported_in_0_2(data4):
    x = np.linspace(0.0, 3.0, 301)
    g, _ = build_g(data4, x, COARSE)
    inside = np.max(np.abs(g[x <= 2.0]))
    assert np.max(np.abs(g[x >= 2.2])) <= 0.02 * inside


def test_g_real(kern20):
    assert kern20.imag_residue <= 1e-6


def test_large_imaginary_residue_rejected():
    g = symmetric_k_grid(50.0, 2 ** 10)
    s = 1 + 0.5j * np.exp(-g.nodes ** 2)     # not conjugate-symmetric
    with pytest.raises(LargeImaginaryResidue):
        solve_marchenko(MarchenkoInput(g, s), MarchenkoConfig(n_x=50))


# ---------------------------------------------------------------- kernel
def test_kernel_vanishes_beyond_support(kern20):
    i = np.argmin(np.abs(kern20.x - 1.5))
    assert abs(kern20.diag[i]) <= 0.02 * np.max(np.abs(kern20.diag))
    assert kern20.support_ratio() <= 0.02


def test_recovers_square_well_bound_state(kern20):
    pot = kern20.potential()
    assert l1_relative_error(pot.samples, np.full(len(pot.x), -20.0), pot.x, (0.95, 1.05)) <= 0.1
    assert bound_states(JostEvaluator(pot)).kappas[0] == pytest.approx(3.682135255910736, abs=1e-2)


def test_nystrom_refinement():
    bump = lambda x: 5 * np.sin(np.pi * x) ** 2
    data = jost_input(Potential.from_function(bump))
    p1 = solve_marchenko(data, MarchenkoConfig(K=100.0, n_k=2 ** 13, n_x=100)).potential()
    p2 = solve_marchenko(data, MarchenkoConfig(K=100.0, n_k=2 ** 13, n_x=200)).potential()
    assert l1_relative_error(p1.samples, p2.samples[::2], p1.x) <= 0.02
    assert l1_relative_error(p2.samples, bump(p2.x), p2.x) <= 0.05


def test_condition_guard(data4):
    with pytest.raises(IllConditioned):
        solve_marchenko(data4, MarchenkoConfig(K=100.0, n_k=2 ** 13, n_x=50, cond_max=1.0))


def test_recover_potential_derivative():
    h = 0.01
    x = h * np.arange(101)
    assert np.all(recover_potential(np.zeros(101), h) == 0)
    assert np.allclose(recover_potential(-1.5 * x, h), 3.0)


# ------------------------------------------------------------ zero route
@pytest.mark.slow
def test_zero_route_matches_direct(e2e):
    direct = solve_marchenko(jost_input(e2e.potential, MarchenkoConfig())).potential()
    from_zeros = solve_marchenko(input_from_zeros(e2e.zs)).potential()
    assert l1_relative_error(from_zeros.samples, direct.samples, direct.x) <= 0.05
