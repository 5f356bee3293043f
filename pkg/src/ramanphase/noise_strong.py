"""Exact noise moments for resonant Raman scattering with a strong classical pump.

All entries depend on the couplings through ``w = t^2 (|chi|^2 - |g|^2)``
and the two even entire functions

    S(w) = sin(u)/u,      K(w) = (1 - cos u)/u^2,      u = sqrt(w),

so the same code covers ``|chi| > |g|`` (oscillatory), ``|chi| < |g|``
(hyperbolic, ``u`` imaginary) and ``|chi| = |g|`` (series branch).
"""

from __future__ import annotations

import cmath

import numpy as np

from .model import DomainError, NoiseMoments, STRONG_MODES, StrongPumpParams

# |w| below this switches to the power series in w.
DEGENERATE_THRESHOLD = 1e-6

# S(w) = sum (-w)^n/(2n+1)!,  K(w) = sum (-w)^n/(2n+2)!
_S_SERIES = (1.0, -1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880)
_K_SERIES = (0.5, -1.0 / 24, 1.0 / 720, -1.0 / 40320, 1.0 / 3628800)

S, V, A = STRONG_MODES


def _series(w, coeffs):
    out = 0.0
    for c in reversed(coeffs):
        out = out * w + c
    return out


def _real(z: complex, what: str) -> float:
    if abs(z.imag) > 1e-12 * max(1.0, abs(z.real)):
        raise ArithmeticError(f"{what} has imaginary part {z.imag!r}")
    return z.real


def envelope(w: float, series: bool | None = None) -> tuple[float, float]:
    """Return ``(S(w), K(w))`` evaluated through the principal root ``u = sqrt(w)``."""
    if series is None:
        series = abs(w) < DEGENERATE_THRESHOLD
    if series:
        return _series(w, _S_SERIES), _series(w, _K_SERIES)
    u = np.sqrt(complex(w))
    s = complex(np.sin(u) / u)
    k = complex(2.0 * np.sin(0.5 * u) ** 2 / (u * u))
    return _real(s, "S"), _real(k, "K")


def _moments(params: StrongPumpParams, series: bool | None) -> NoiseMoments:
    g, chi, t = params.g, params.chi, float(params.t)
    if abs(g) == 0 and abs(chi) == 0:
        raise DomainError("both couplings are zero")
    g2, chi2 = abs(g) ** 2, abs(chi) ** 2
    w = t * t * (chi2 - g2)
    s, k = envelope(w, series)
    wS, wV, wA = (params.omega[m] for m in STRONG_MODES)
    phi = params.phi_L

    # (|chi|^2 - |g|^2 cos u) / (|chi|^2 - |g|^2) == 1 + |g|^2 t^2 K
    mix = 1.0 + g2 * t * t * k

    B_V = g2 * t * t * s * s
    B_A = chi2 * g2 * t**4 * k * k
    B_S = B_V + B_A
    D_SA = -chi * g * t * t * k * mix * cmath.exp(1j * (2 * phi - (wA + wS) * t))
    D_SV = 1j * g * t * s * mix * cmath.exp(1j * (phi - (wV + wS) * t))
    Dbar_VA = 1j * g2 * chi.conjugate() * t**3 * s * k * cmath.exp(-1j * phi - 1j * (wV - wA) * t)

    return NoiseMoments(
        modes=STRONG_MODES,
        B={S: B_S, V: B_V, A: B_A},
        C={},
        D={(S, V): D_SV, (S, A): D_SA},
        Dbar={(V, A): Dbar_VA},
        regime="strong",
    )


def strong_moments(params: StrongPumpParams) -> NoiseMoments:
    """Moment catalog for the parametric (strong pump) solution.

    All single-mode ``C_j`` vanish; the nonzero entries are ``B_S, B_V, B_A``,
    ``D_SV``, ``D_SA`` and ``Dbar_VA``.
    """
    return _moments(params, None)


def strong_moments_degenerate(params: StrongPumpParams) -> NoiseMoments:
    """Series evaluation for ``|chi| ~= |g|`` (polynomial in ``t``)."""
    w = params.t**2 * (abs(params.chi) ** 2 - abs(params.g) ** 2)
    if abs(w) > DEGENERATE_THRESHOLD:
        raise DomainError(f"|w| = {abs(w):.3g} exceeds the degenerate threshold")
    return _moments(params, True)
