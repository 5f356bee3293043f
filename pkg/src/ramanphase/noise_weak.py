"""Perturbative (finite-time) noise moments for a weak quantum pump.

Every entry is written as ``t**2 * kernel(x)`` (or ``t * kernel(x)``) with
``x = delta_i * t``, so the resonant limit ``delta_i -> 0`` is just the
series branch of the kernels.  Terms that carry the *inactive* detuning
explicitly vanish identically, since their numerators are zero at
``x = 0``.
"""

from __future__ import annotations

import cmath

from .model import (
    Case,
    DomainError,
    NoiseMoments,
    WEAK_MODES,
    WeakPumpParams,
    kernel_cos,
    kernel_sin_minus_x,
    kernel_sin_minus_xexp,
    sinc,
)

# Sign bound to the upper of each +-/-+ pair.  Case 1 takes the upper sign,
# Case 2 the lower; flipping this swaps the binding (used by tests only).
UPPER_SIGN_CASE = Case.ONE

# Coupling in the first-order (pair creation) term of D_SV.  Stokes pairs
# are created by g; "chi" gives the alternative form with chi in that term.
D_SV_PAIR_COUPLING = "g"

L, S, V, A = WEAK_MODES


def _sign(case: Case) -> int:
    return 1 if case is UPPER_SIGN_CASE else -1


def _phase(arg: float) -> complex:
    return cmath.exp(1j * arg)


def weak_moments(params: WeakPumpParams) -> NoiseMoments:
    """Complete finite-time moment catalog for the four-mode Raman process."""
    p = params
    t = float(p.t)
    case = p.case
    if case is Case.ONE and p.delta2 != 0 or case is Case.TWO and p.delta1 != 0:
        raise DomainError("detuning inconsistent with case")
    d = p.delta
    x = d * t
    sg = _sign(case)
    one = case is Case.ONE

    g, chi = p.g, p.chi
    g2, chi2 = abs(g) ** 2, abs(chi) ** 2
    xL, xS, xV, xA = (p.xi[m] for m in WEAK_MODES)
    wL, wS, wV, wA = (p.omega[m] for m in WEAK_MODES)
    I_L, I_A = abs(xL) ** 2, abs(xA) ** 2
    t2 = t * t

    kc = kernel_cos(x)  # 4 sin^2(x/2)/x^2
    half = 0.5 * kc  # 2 sin^2(x/2)/x^2
    smx = kernel_sin_minus_x(x)  # (sin x - x)/x^2
    # (sin x1 - x1 e^{i x1})/delta_i^2 and (sin x2 - x2 e^{-i x2})/delta_i^2, over t^2
    e1 = kernel_sin_minus_xexp(x) if one else 0j
    e2 = kernel_sin_minus_xexp(x).conjugate() if not one else 0j
    smx1 = smx if one else 0.0
    half1 = half if one else 0.0
    kc2 = kc if not one else 0.0
    x2 = x if not one else 0.0
    sinc_half = float(sinc(0.5 * x))  # 2 sin(x/2)/x

    B_L = chi2 * I_A * t2 * kc
    B_S = g2 * I_L * t2 * kc
    B_V = B_L + B_S

    C_L = 2 * xS * xA * chi * g.conjugate() * _phase(-t * (d + 2 * wL)) * t2 * (sg * half - 1j * e1)
    C_V = 2 * xS.conjugate() * xA * chi * g * _phase(t * (d - 2 * wV)) * t2 * (-sg * half + 1j * e2)

    D_LS = xS * xL * g2 * _phase(-t * (wL + wS)) * t2 * (-half - 1j * smx)
    D_LV = (
        1j * chi * xA * t * sinc_half * _phase(-t * (wL + wV + sg * 0.5 * d))
        - xL * xV * _phase(-t * (wL + wV)) * t2
        * ((g2 + chi2) * (half + 1j * smx) - 2j * chi2 * smx1)
    )
    D_LA = xL * xA * chi2 * _phase(-t * (wL + wA)) * t2 * (-half - sg * 1j * smx)
    pair = g if D_SV_PAIR_COUPLING == "g" else chi
    D_SV = (
        1j * pair * xL * t * sinc_half * _phase(-t * (0.5 * d + wS + wV))
        + xS * xV * g2 * _phase(-t * (wS + wV)) * t2 * (-half + 1j * smx)
        + 2 * xV.conjugate() * xA * chi * g * t2 * (-sg * half + 1j * e2) * _phase(-t * (wS + wV - d))
    )
    D_SA = (
        xL * xL * chi.conjugate() * g * _phase(-t * (wS + wA)) * t2
        * (-half1 - kc2 * _phase(x2) - 1j * smx1)
    )
    D_VA = xV * xA * chi2 * _phase(-t * (wV + wA)) * t2 * (-half - sg * 1j * smx)
    Dbar_LS = chi.conjugate() * g * xL * xA.conjugate() * t2 * kc * _phase(-t * (p.delta2 - wL + wS))

    return NoiseMoments(
        modes=WEAK_MODES,
        B={L: B_L, S: B_S, V: B_V, A: 0.0},
        C={L: C_L, V: C_V},
        D={(L, S): D_LS, (L, V): D_LV, (L, A): D_LA, (S, V): D_SV, (S, A): D_SA, (V, A): D_VA},
        Dbar={(L, S): Dbar_LS},
        regime="weak",
    )


def weak_moments_resonant(params: WeakPumpParams) -> NoiseMoments:
    """Resonant limit (both detunings zero) of :func:`weak_moments`."""
    if params.delta1 != 0 or params.delta2 != 0:
        raise DomainError("resonant moments need delta1 == delta2 == 0")
    return weak_moments(params)
