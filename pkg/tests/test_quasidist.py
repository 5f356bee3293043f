import cmath
import math

import numpy as np
import pytest
from scipy import integrate

from ramanphase.model import NoiseMoments, StrongPumpParams, WeakPumpParams
from ramanphase.noise_strong import strong_moments
from ramanphase.noise_weak import weak_moments
from ramanphase.quasidist import (
    agreement,
    cf_eval,
    filter_map,
    radial_single,
    radial_two,
    radial_two_quad,
    theta_single,
    theta_single_point,
    theta_two,
    theta_two_point,
)
from ramanphase.witnesses import q_witness

TWO_PI = 2 * math.pi


def single(b, c=0j):
    return NoiseMoments(("S",), {"S": b}, {"S": c}, {}, {}, "custom")


def pair(bj, bk, d=0j, dbar=0j, cj=0j, ck=0j):
    return NoiseMoments(
        ("S", "V"), {"S": bj, "V": bk}, {"S": cj, "V": ck}, {("S", "V"): d}, {("S", "V"): dbar}, "custom"
    )


# ---------------------------------------------------------------------------
# oracle: the i0-regularized phase integral evaluated with QUADPACK's
# Cauchy-weight rule (no folding, no FFT)
# ---------------------------------------------------------------------------


def exponent(m, betas):
    """Characteristic exponent written directly in complex notation."""
    e = 0.0
    for j, b in zip(m.modes, betas):
        e += -m.b(j) * abs(b) ** 2 + (m.c(j) * np.conj(b) ** 2).real
    if len(betas) == 2:
        bj, bk = betas
        j, k = m.modes
        e += 2 * (m.d(j, k) * np.conj(bj) * np.conj(bk)).real + 2 * (m.dbar(j, k) * bj * np.conj(bk)).real
    return e


def radial_quad_single(m, theta):
    a = -exponent(m, [cmath.exp(1j * theta)])
    return integrate.quad(lambda r: math.exp(-a * r * r), 0, math.inf, epsabs=0, epsrel=1e-12)[0]


def pv_over_sin(f, phi):
    """Principal value of the circle integral of f(theta)/sin(theta - phi)."""
    total = 0.0
    for pole, sign in ((phi, 1.0), (phi + math.pi, -1.0)):
        # 1/sin(x) = sign * (x - pole)/sin(x - pole) * 1/(x - pole) near each pole
        def g(x, pole=pole, sign=sign):
            y = x - pole
            return sign * f(x) * (y / math.sin(y) if y else 1.0)

        total += integrate.quad(g, pole - 0.5 * math.pi, pole + 0.5 * math.pi, weight="cauchy", wvar=pole,
                                epsabs=1e-13, epsrel=1e-11, limit=200)[0]
    return total


def theta_single_oracle(m, phi):
    pole = 0.5 * math.pi * (radial_quad_single(m, phi) + radial_quad_single(m, phi + math.pi))
    pv = pv_over_sin(lambda th: radial_quad_single(m, th), phi)
    return complex(pole, -0.5 * pv) / math.pi**2


def theta_two_oracle(m, phi_j, phi_k):
    j, k = m.modes

    def R(tj, tk):
        a = -exponent(m, [cmath.exp(1j * tj), cmath.exp(1j * tk)])
        aj, ak = m.b(j) - (m.c(j) * cmath.exp(-2j * tj)).real, m.b(k) - (m.c(k) * cmath.exp(-2j * tk)).real
        w = (aj + ak - a) / 2
        # closed form, checked against quadrature in TestRadial
        return float(radial_two(aj, ak, w))

    halves = (0.0, math.pi)
    pole = sum(R(phi_j + a, phi_k + b) for a in halves for b in halves)
    pvpv = pv_over_sin(lambda tj: pv_over_sin(lambda tk: R(tj, tk), phi_k), phi_j)
    return pole / (4 * math.pi**2) - pvpv / (4 * math.pi**4)


# ---------------------------------------------------------------------------


class TestCharacteristic:
    def test_thermal(self):
        assert cf_eval(single(1.0), [1.0]) == pytest.approx(math.exp(-1))

    def test_matches_complex_form(self, rng):
        m = pair(1.2, 0.7, 0.3 * cmath.exp(0.4j), 0.2 * cmath.exp(2j), 0.5 * cmath.exp(-1j), 0.1)
        for _ in range(20):
            b = rng.normal(size=2) + 1j * rng.normal(size=2)
            assert math.log(cf_eval(m, b)) == pytest.approx(exponent(m, b), rel=1e-12, abs=1e-14)

    def test_overflow_saturates(self):
        assert cf_eval(single(0.0, 1.0), [100.0]) == math.inf


class TestRadial:
    @pytest.mark.parametrize("a", [0.1, 1.0, 7.0])
    def test_single(self, a):
        val, _ = integrate.quad(lambda r: math.exp(-a * r * r), 0, math.inf)
        assert radial_single(a) == pytest.approx(val, rel=1e-10)
        assert radial_single(-a) == math.inf

    @pytest.mark.parametrize(
        "aj, ak, w",
        [(1.0, 1.0, 0.0), (1.0, 2.0, 0.5), (2.0, 0.5, -0.9), (1.0, 1.0, 0.999), (1.0, 1.0, -3.0), (0.3, 0.9, 0.5196)],
    )
    def test_two_against_quadrature(self, aj, ak, w):
        assert radial_two(aj, ak, w) == pytest.approx(radial_two_quad(aj, ak, w), rel=1e-8)

    def test_two_series_branch(self):
        s = math.sqrt(2.0)
        for eps in (2e-7, -2e-7):
            w = -s * (1 + eps)
            assert radial_two(1.0, 2.0, w) == pytest.approx(radial_two_quad(1.0, 2.0, w), rel=1e-9)

    def test_two_indefinite(self):
        assert radial_two(1.0, 1.0, 1.5) == math.inf
        assert radial_two(-1.0, 1.0, 0.0) == math.inf


class TestSingleMode:
    def test_thermal_constant(self):
        th = theta_single(single(0.8), "S", samples=64)
        assert th.values == pytest.approx(1 / (2 * math.sqrt(math.pi * 0.8)), rel=1e-14)
        assert th.normalized() == pytest.approx(1 / TWO_PI, rel=1e-14)
        assert not th.diverged.any()

    @pytest.mark.parametrize("b, c", [(2.0, 1.0), (1.5, 1.2 * cmath.exp(0.7j)), (1.0, 0.3j)])
    def test_matches_quadrature_oracle(self, b, c):
        m = single(b, c)
        th = theta_single(m, "S", samples=64)
        for i in (0, 9, 22, 47):
            z = theta_single_oracle(m, th.axes[0][i])
            assert th.values[i] == pytest.approx(z.real, rel=1e-9)
            assert abs(z.imag) < 1e-9
        assert (th.values > 0).all()

    def test_s2_normalized_at_double_density(self):
        m = single(1.0, 0.5)
        coarse = theta_single(m, "S", samples=360)
        fine = theta_single(m, "S", samples=720)
        assert (fine.values > 0).all()
        assert np.sum(fine.values / coarse.integral) * fine.cell == pytest.approx(1.0, abs=1e-4)

    def test_classical_integral_stable_under_refinement(self):
        m = single(2.0, 1.0)
        a = theta_single(m, "S", samples=128)
        b = theta_single(m, "S", samples=256)
        assert b.integral == pytest.approx(a.integral, rel=1e-6)
        assert a.error.max() < 1e-6

    def test_pairing_matches_fft(self):
        m = single(1.5, 1.2 * cmath.exp(0.7j))
        fft = theta_single(m, "S", samples=64)
        pairing = theta_single(m, "S", samples=64, method="pairing", nodes=96, estimate_error=False)
        assert pairing.values == pytest.approx(fft.values, rel=1e-8)

    def test_pairing_residue_is_zero(self):
        z = theta_single_point(single(1.5, 1.0), "S", 0.4)
        assert abs(z.imag) < 1e-12

    def test_nonclassical_flags_divergence(self):
        m = single(0.5, 1.0)
        th = theta_single(m, "S", samples=720)
        # a(phi) = b - |c| cos(2 phi) < 0 inside |phi| < pi/6 (mod pi)
        phi = th.axes[0]
        bad = np.cos(2 * phi) > 0.5
        assert th.diverged[bad].all()
        assert math.isnan(th.integral)
        assert np.isinf(th.values[th.diverged]).all()

    def test_samples_validated(self):
        with pytest.raises(Exception):
            theta_single(single(1.0), "S", samples=7)


class TestTwoMode:
    def test_uncorrelated_constant(self):
        th = theta_two(pair(0.7, 1.3), ("S", "V"), samples=16)
        # B = C = D = Dbar = 0 leaves only the constant normalization
        assert th.normalized() == pytest.approx(1 / (4 * math.pi**2), rel=1e-12)

    @pytest.mark.parametrize(
        "m",
        [
            pair(2.0, 1.0, 0.5 * cmath.exp(0.3j)),
            pair(1.5, 1.2, 0.4 * cmath.exp(-1.0j), 0.3 * cmath.exp(0.5j)),
            pair(2.0, 1.5, 0.3, 0.2j, 0.5 * cmath.exp(0.2j), 0.4j),
        ],
    )
    def test_matches_quadrature_oracle(self, m):
        th = theta_two(m, ("S", "V"), samples=64, estimate_error=False)
        for a, b in [(0, 0), (11, 41)]:
            ref = theta_two_oracle(m, th.axes[0][a], th.axes[1][b])
            assert th.values[a, b] == pytest.approx(ref, rel=1e-9)

    def test_q2_classical_normalized(self):
        # q = B_S B_V / |D|^2 = 2
        m = pair(1.0, 1.0, 1 / math.sqrt(2))
        assert q_witness(m, "S", "V").value == pytest.approx(2.0)
        th = theta_two(m, ("S", "V"), samples=64)
        assert not th.diverged.any()
        assert np.sum(th.normalized()) * th.cell == pytest.approx(1.0, rel=1e-12)
        assert (th.values > 0).all()

    def test_pairing_point_matches_grid(self):
        m = pair(0.9, 0.8, 0.4 * cmath.exp(0.3j), 0.1, 0.2j)
        th = theta_two(m, ("S", "V"), samples=64, estimate_error=False)
        assert not th.diverged.any()
        for a, b in [(3, 7), (10, 25), (40, 1)]:
            z = theta_two_point(m, ("S", "V"), th.axes[0][a], th.axes[1][b], nodes=64)
            assert z.real == pytest.approx(th.values[a, b], rel=1e-9)
            assert abs(z.imag) < 1e-9

    def test_mode_order_independent(self):
        m = pair(0.9, 0.4, 0.5 * cmath.exp(0.8j), 0.2 * cmath.exp(-0.3j), 0.1j, 0.05)
        swapped = NoiseMoments(
            ("S", "V"), {"S": 0.4, "V": 0.9}, {"S": 0.05, "V": 0.1j},
            {("S", "V"): m.d("S", "V")}, {("S", "V"): np.conj(m.dbar("S", "V"))}, "custom",
        )
        a = theta_two(m, ("S", "V"), samples=32, estimate_error=False)
        b = theta_two(swapped, ("S", "V"), samples=32, estimate_error=False)
        fin = ~a.diverged
        assert np.array_equal(a.diverged, b.diverged.T)
        assert a.values[fin] == pytest.approx(b.values.T[fin], rel=1e-10)

    def test_pure_frequency_conversion_never_diverges(self):
        m = strong_moments(StrongPumpParams(1.0, 1.5, 1.0))
        th = theta_two(m, ("V", "A"), samples=128)
        assert not th.diverged.any()

    def test_rejects_same_mode(self):
        with pytest.raises(Exception):
            theta_two(pair(1, 1, 0.5), ("S", "S"), samples=16)


class TestFilterAgreement:
    @pytest.mark.parametrize("p, gt", [(1.5, 1.0), (0.5, 2.0), (0.0, 0.7)])
    def test_strong_stokes_phonon(self, p, gt):
        m = strong_moments(StrongPumpParams(1.0, p, gt))
        th = theta_two(m, ("S", "V"), samples=256, estimate_error=False)
        assert agreement(th, filter_map(m, ("S", "V"), 256)) == 1.0

    def test_weak_spontaneous_fraction(self):
        p = WeakPumpParams.from_intensities(0.1, 0.1, 1.0, {"L": 10})
        m = weak_moments(p)
        q = q_witness(m, "S", "V").value
        fmap = filter_map(m, ("S", "V"), 720)
        expected = 1 - (2 / math.pi) * math.asin(math.sqrt(1 - q))
        assert fmap.fraction == pytest.approx(expected, abs=4 / 720)

    def test_boundary_band_covers_edges(self):
        m = strong_moments(StrongPumpParams(1.0, 1.5, 1.0))
        fmap = filter_map(m, ("S", "V"), 64)
        band = fmap.boundary_band(1)
        edge = fmap.allowed != np.roll(fmap.allowed, 1, axis=0)
        assert band[edge].all()
        assert not band.all()
