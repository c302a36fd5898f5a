import time

import pytest

from revscatter.geometry import RadiusProfile, TransversalMode, reduce_potential
from revscatter.jost import JostEvaluator
from revscatter.oracles import square_well
from revscatter.resonances import find_zeros

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict = {}
INFO: list = []


class Fixture:
    """A potential with its evaluator and zero set at R = 120 (timed)."""

    def __init__(self, potential, R=120.0):
        self.potential = potential
        self.ev = JostEvaluator(potential)
        t = time.perf_counter()
        self.zs = find_zeros(self.ev, R)
        self.seconds = time.perf_counter() - t


@pytest.fixture(scope="session")
def well4():
    return Fixture(square_well(4.0))


@pytest.fixture(scope="session")
def well20():
    return Fixture(square_well(-20.0))


E2E_COEFFS = [0.0, 0.3]   # q0(x) = 0.3 sin(2 pi x)


@pytest.fixture(scope="session")
def e2e():
    prof = RadiusProfile.from_sine(E2E_COEFFS, m=2, r_o=1.0)
    f = Fixture(reduce_potential(prof, TransversalMode(1, 1.0)))
    f.profile = prof
    return f


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE and not INFO:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        tr.write_line(f"CRITERION {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    for line in INFO:
        tr.write_line(f"INFO {line}")
