import cmath
import math

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import random_strong
from ramanphase.model import DomainError, StrongPumpParams
from ramanphase.noise_strong import envelope, strong_moments, strong_moments_degenerate


def heisenberg_moments(g, chi, t):
    """Vacuum moments from the exact linear evolution of (a_S^+, a_V, a_A)."""
    m = np.array([[0, 1j * np.conj(g), 0], [-1j * g, 0, -1j * np.conj(chi)], [0, -1j * chi, 0]])
    u = expm(m * t)
    return {
        "B_S": abs(u[0, 1]) ** 2 + abs(u[0, 2]) ** 2,
        "B_V": abs(u[1, 0]) ** 2,
        "B_A": abs(u[2, 0]) ** 2,
        "D_SV": np.conj(u[0, 0]) * u[1, 0],
        "D_SA": np.conj(u[0, 0]) * u[2, 0],
        "Dbar_VA": -np.conj(u[1, 0]) * u[2, 0],
    }


def test_t_zero():
    m = strong_moments(StrongPumpParams(1.0, 0.7, 0.0))
    assert all(v == 0 for v in m.entries().values())


def test_p_zero_is_hyperbolic():
    for gt in (0.1, 1.0, 3.0):
        m = strong_moments(StrongPumpParams(1.0, 0.0, gt))
        assert m.b("V") == pytest.approx(math.sinh(gt) ** 2, rel=1e-12)
        assert m.b("A") == 0.0


@pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
def test_degenerate_branch(t):
    m = strong_moments_degenerate(StrongPumpParams(1.0, 1.0, t))
    assert m.b("V") == pytest.approx(t * t, rel=1e-12)
    assert m.b("S") == pytest.approx(m.b("V") + m.b("A"), rel=1e-14)
    for eps in (1e-6, -1e-6):
        n = strong_moments(StrongPumpParams(1.0, 1.0 + eps, t)).entries()
        for key, val in m.entries().items():
            assert abs(val - n[key]) <= 1e-5 * max(abs(val), 1e-300) + 1e-300, key


def test_degenerate_rejects_far_from_equal():
    with pytest.raises(DomainError):
        strong_moments_degenerate(StrongPumpParams(1.0, 2.0, 1.0))


def test_both_couplings_required():
    with pytest.raises(DomainError):
        StrongPumpParams(0.0, 0.0, 1.0)


def test_sum_rule_positivity_and_zero_c(rng):
    for _ in range(500):
        m = strong_moments(random_strong(rng))
        assert m.b("S") == pytest.approx(m.b("V") + m.b("A"), rel=1e-12)
        assert min(m.B.values()) >= 0
        assert all(c == 0 for c in m.C.values())


def test_frequency_conversion_coherence(rng):
    for _ in range(500):
        m = strong_moments(random_strong(rng))
        ba, bv = m.b("A"), m.b("V")
        if ba * bv == 0:
            continue
        assert abs(ba * bv - abs(m.dbar("V", "A")) ** 2) / (ba * bv) < 1e-10


def test_against_heisenberg_evolution(rng):
    for _ in range(200):
        p = random_strong(rng)
        lib = strong_moments(p).entries()
        ref = heisenberg_moments(p.g, p.chi, p.t)
        for key, val in ref.items():
            assert abs(lib[key]) == pytest.approx(abs(val), rel=1e-9, abs=1e-12), key


def test_global_rotation_invariance(rng):
    for _ in range(50):
        p = random_strong(rng)
        a = strong_moments(p)
        rot = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        b = strong_moments(StrongPumpParams(p.g * rot, p.chi * rot, p.t, p.phi_L, p.omega))
        for key in ("D_SV", "D_SA", "Dbar_VA"):
            assert abs(b.entries()[key]) == pytest.approx(abs(a.entries()[key]), rel=1e-12)
        # the rotation acts like a pump phase shift on D_SV
        shift = cmath.phase(rot)
        c = strong_moments(StrongPumpParams(p.g, p.chi, p.t, p.phi_L + shift, p.omega))
        assert b.d("S", "V") == pytest.approx(c.d("S", "V"), rel=1e-12)


@pytest.mark.parametrize("w", [-4.0, -1e-5, 1e-5, 2.0, 30.0])
def test_envelope_branches(w):
    s, k = envelope(w)
    u = np.sqrt(complex(w))
    assert s == pytest.approx((np.sin(u) / u).real, rel=1e-10)
    assert k == pytest.approx(((1 - np.cos(u)) / u**2).real, rel=1e-6)
