import cmath
import math

import numpy as np
import pytest

from ramanphase.model import Case, StrongPumpParams, WeakPumpParams

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE, key=lambda k: (int(str(k).split(".")[0]), str(k))):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def polar(rng, lo, hi):
    return rng.uniform(lo, hi) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))


def random_weak(rng, case=None, intensities=None, delta_range=3.0, t_range=(0.01, 3.0)):
    """Random weak-pump parameters with every mode populated unless overridden."""
    case = Case(case or int(rng.integers(1, 3)))
    g = polar(rng, 0.05, 1.0)
    chi = abs(g) * rng.uniform(0.05, 3.0) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    t = rng.uniform(*t_range)
    if intensities is None:
        intensities = {m: rng.uniform(0.1, 12.0) for m in "LSVA"}
    xi = {m: math.sqrt(I) * cmath.exp(1j * rng.uniform(0, 2 * math.pi)) for m, I in intensities.items()}
    omega = {m: rng.uniform(-3, 3) for m in "LSVA"}
    delta = rng.uniform(-delta_range, delta_range)
    d1, d2 = (delta, 0.0) if case is Case.ONE else (0.0, delta)
    return WeakPumpParams(g, chi, t, case, d1, d2, xi, omega)


def random_strong(rng, p_range=(0.0, 3.0), gt_range=(0.0, 5.0)):
    g = polar(rng, 0.1, 2.0)
    chi = abs(g) * rng.uniform(*p_range) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    t = rng.uniform(*gt_range) / abs(g)
    omega = {m: rng.uniform(-3, 3) for m in "SVA"}
    return StrongPumpParams(g, chi, t, rng.uniform(0, 2 * math.pi), omega)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
