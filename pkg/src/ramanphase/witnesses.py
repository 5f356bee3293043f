"""Single- and two-mode nonclassicality witnesses and allowed phase regions."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import (
    TWO_PI,
    DomainError,
    Mode,
    NoiseMoments,
    StrongPumpParams,
    WeakPumpParams,
    as_mode,
    sin2_over_lambda,
    sinc,
)

# slack used when clamping arccos/arcsin arguments
CLAMP_SLACK = 1e-12


class UndefinedWitnessError(DomainError):
    """Witness or angle requested from a vanishing moment."""


def wrap(angle):
    """Map angles onto ``[0, 2*pi)``."""
    out = np.mod(angle, TWO_PI)
    # mod can round up to exactly 2*pi for tiny negative inputs
    out = np.where(out >= TWO_PI, 0.0, out)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# phase regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseRegion:
    """Union of half-open arcs ``[lo, hi)`` on the circle ``[0, 2*pi)``.

    Intervals are kept sorted, disjoint and non-adjacent.
    """

    intervals: tuple = ()

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple]) -> "PhaseRegion":
        """Build from arbitrary arcs running counterclockwise from ``lo`` to ``hi``.

        An arc whose length is ``>= 2*pi`` covers the circle.
        """
        pieces = []
        for lo, hi in arcs:
            length = hi - lo
            if length <= 0:
                continue
            if length >= TWO_PI:
                return cls.full()
            lo = wrap(lo)
            hi = lo + length
            if hi <= TWO_PI:
                pieces.append((lo, hi))
            else:
                pieces.append((lo, TWO_PI))
                pieces.append((0.0, hi - TWO_PI))
        pieces.sort()
        merged = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return cls(tuple(merged))

    @classmethod
    def full(cls) -> "PhaseRegion":
        return cls(((0.0, TWO_PI),))

    @classmethod
    def empty(cls) -> "PhaseRegion":
        return cls(())

    @property
    def measure(self) -> float:
        return float(sum(hi - lo for lo, hi in self.intervals))

    @property
    def is_full(self) -> bool:
        return self.intervals == ((0.0, TWO_PI),)

    def complement(self) -> "PhaseRegion":
        gaps = []
        cursor = 0.0
        for lo, hi in self.intervals:
            if lo > cursor:
                gaps.append((cursor, lo))
            cursor = hi
        if cursor < TWO_PI:
            gaps.append((cursor, TWO_PI))
        return PhaseRegion(tuple(gaps))

    def contains(self, angle):
        a = wrap(np.asarray(angle, dtype=float))
        hit = np.zeros(np.shape(a), dtype=bool)
        for lo, hi in self.intervals:
            hit |= (a >= lo) & (a < hi)
        return bool(hit) if np.ndim(hit) == 0 else hit

    def scan_fraction(self, samples: int = 720) -> float:
        """Fraction of ``samples`` cell-centred angles that fall in the region."""
        grid = TWO_PI * (np.arange(samples) + 0.5) / samples
        return float(np.mean(self.contains(grid)))

    def is_subset(self, other: "PhaseRegion", tol: float = 1e-12) -> bool:
        for lo, hi in self.intervals:
            if not any(lo >= o_lo - tol and hi <= o_hi + tol for o_lo, o_hi in other.intervals):
                return False
        return True


def cos_region(s: float) -> PhaseRegion:
    """Angles ``eta`` with ``cos(eta) < s``."""
    if s >= 1:
        return PhaseRegion.full()
    if s <= -1:
        return PhaseRegion.empty()
    a = math.acos(s)
    return PhaseRegion(((a, TWO_PI - a),))


def sin2_region(q: float) -> PhaseRegion:
    """Angles ``psi`` with ``sin^2(psi) > 1 - q``."""
    if q >= 1:
        return PhaseRegion.full()
    if q <= 0:
        return PhaseRegion.empty()
    r = math.asin(math.sqrt(1.0 - q))
    return PhaseRegion(((r, math.pi - r), (math.pi + r, TWO_PI - r)))


def cos_bound(s: float) -> float:
    """``arccos(min(s, 1))``, clamped with a small slack."""
    if s < -1.0 - CLAMP_SLACK:
        raise DomainError(f"s = {s!r} below -1")
    return math.acos(max(-1.0, min(1.0, s)))


def sin2_bound(q: float) -> float:
    """``arcsin(sqrt(1 - q))`` for ``0 <= q <= 1``; 0 when ``q >= 1``."""
    return math.asin(math.sqrt(min(max(1.0 - q, 0.0), 1.0)))


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    kind: str  # "single" or "two"
    modes: tuple
    value: float
    angle: float
    nonclassical: bool
    region: PhaseRegion


def s_witness(m: NoiseMoments, j) -> WitnessReport:
    """Single-mode witness ``s = B/|C|``; nonclassical below 1.

    The region holds the angles ``eta`` with ``cos(eta) < s``.
    """
    j = as_mode(j)
    c = m.c(j)
    if abs(c) == 0:
        raise UndefinedWitnessError(f"C_{j} vanishes; s_{j} undefined")
    s = m.b(j) / abs(c)
    return WitnessReport("single", (j,), s, wrap(cmath.phase(c)), s < 1, cos_region(s))


def _reduced_variance(m: NoiseMoments, j: Mode, phi):
    """``B_j - |C_j| cos(arg C_j - 2 phi_j)``; just ``B_j`` when ``C_j = 0``."""
    c = m.c(j)
    if c == 0:
        return m.b(j) + 0.0 * np.asarray(phi, dtype=float)
    return m.b(j) - abs(c) * np.cos(cmath.phase(c) - 2.0 * np.asarray(phi, dtype=float))


def _pair_denominator(m: NoiseMoments, j: Mode, k: Mode) -> float:
    den = (abs(m.d(j, k)) + abs(m.dbar(j, k))) ** 2
    if den == 0:
        raise UndefinedWitnessError(f"D_{j}{k} and Dbar_{j}{k} both vanish")
    return den


def q_value(m: NoiseMoments, j, k, phi_j=0.0, phi_k=0.0):
    """Two-mode witness value; broadcasts over phase arrays."""
    j, k = as_mode(j), as_mode(k)
    den = _pair_denominator(m, j, k)
    return _reduced_variance(m, j, phi_j) * _reduced_variance(m, k, phi_k) / den


def psi_angle(m: NoiseMoments, j, k, phi_j=0.0, phi_k=0.0):
    """``Psi_jk = arg(D_jk) - phi_j - phi_k`` on ``[0, 2*pi)``."""
    d = m.d(j, k)
    if d == 0:
        raise UndefinedWitnessError(f"D_{as_mode(j)}{as_mode(k)} vanishes")
    return wrap(cmath.phase(d) - np.asarray(phi_j) - np.asarray(phi_k))


def psi_bar_angle(m: NoiseMoments, j, k, phi_j=0.0, phi_k=0.0):
    """``Psibar_jk = arg(Dbar_jk) + phi_j - phi_k`` on ``[0, 2*pi)``."""
    d = m.dbar(j, k)
    if d == 0:
        raise UndefinedWitnessError(f"Dbar_{as_mode(j)}{as_mode(k)} vanishes")
    return wrap(cmath.phase(d) + np.asarray(phi_j) - np.asarray(phi_k))


def psi_angles(m: NoiseMoments, j, k, phi_j=0.0, phi_k=0.0):
    """Both structural angles; raises if either moment vanishes."""
    return psi_angle(m, j, k, phi_j, phi_k), psi_bar_angle(m, j, k, phi_j, phi_k)


def q_witness(m: NoiseMoments, j, k, phi_j: float = 0.0, phi_k: float = 0.0) -> WitnessReport:
    """Two-mode witness at the mode phases ``phi_j, phi_k``.

    The reported angle is ``Psi_jk`` (``Psibar_jk`` when ``D_jk`` vanishes)
    and the region holds the ``Psi`` with ``sin^2(Psi) > 1 - q``.
    """
    j, k = as_mode(j), as_mode(k)
    q = float(q_value(m, j, k, phi_j, phi_k))
    if m.d(j, k) != 0:
        angle = psi_angle(m, j, k, phi_j, phi_k)
    else:
        angle = psi_bar_angle(m, j, k, phi_j, phi_k)
    return WitnessReport("two", (j, k), q, float(angle), q < 1, sin2_region(q))


def filter_margin(m: NoiseMoments, j, k, phi_j, phi_k):
    """Left-hand side of the two-mode phase inequality (broadcasting).

    ``|D|^2 sin^2 Psi + |Db|^2 sin^2 Psibar + 2|D||Db|(1 - cos Psi cos Psibar)
    - (1 - q)(|D| + |Db|)^2``.
    """
    j, k = as_mode(j), as_mode(k)
    phi_j = np.asarray(phi_j, dtype=float)
    phi_k = np.asarray(phi_k, dtype=float)
    d, db = m.d(j, k), m.dbar(j, k)
    ad, adb = abs(d), abs(db)
    q = q_value(m, j, k, phi_j, phi_k)
    psi = cmath.phase(d) - phi_j - phi_k
    psib = cmath.phase(db) + phi_j - phi_k
    return (
        ad**2 * np.sin(psi) ** 2
        + adb**2 * np.sin(psib) ** 2
        + 2 * ad * adb * (1 - np.cos(psi) * np.cos(psib))
        - (1 - q) * (ad + adb) ** 2
    ), q


def two_mode_filter(m: NoiseMoments, j, k, phi_j, phi_k):
    """True where the phase pair is allowed (not filtered).

    Classical pairs (``q >= 1``) allow every phase.
    """
    margin, q = filter_margin(m, j, k, phi_j, phi_k)
    out = (margin > 0) | (q >= 1)
    return bool(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# closed forms used as oracles
# ---------------------------------------------------------------------------

WEAK_CLOSED_FORMS = ("sL1", "sV1", "sL2", "sV2", "qSV_approx", "qLV_approx")
STRONG_CLOSED_FORMS = ("qSV", "qSA", "qVA")


def closed_form_weak(params: WeakPumpParams, which: str) -> float:
    """Closed-form witness values of the weak-pump solution.

    ``sL1``/``sV1`` use ``delta1`` and ``sL2``/``sV2`` use ``delta2``; the
    short-time approximations use the active detuning.
    """
    p = params.p
    I_L, I_S, I_A = (params.intensity(m) for m in ("L", "S", "A"))
    t = params.t
    if which in ("sL1", "sL2"):
        if I_S == 0:
            raise DomainError(f"{which} needs I_S > 0")
        base = p * math.sqrt(I_A / I_S)
        return base * sin2_over_lambda(params.delta1 * t) if which == "sL1" else base
    if which in ("sV1", "sV2"):
        if I_S * I_A == 0 or p == 0:
            raise DomainError(f"{which} needs I_S, I_A and p nonzero")
        base = (I_L + p * p * I_A) / (p * math.sqrt(I_S * I_A))
        return base if which == "sV1" else base * sin2_over_lambda(params.delta2 * t)
    if which in ("qSV_approx", "qLV_approx"):
        x = params.delta * t
        extra = p * p * I_A if which == "qLV_approx" else 0.0
        return abs(params.g) ** 2 * t * t * (I_L + extra) * float(sinc(x)) ** 2
    raise ValueError(f"unknown closed form {which!r}; expected one of {WEAK_CLOSED_FORMS}")


def q_ls_special(params: WeakPumpParams, phi_L: float = 0.0, phi_S: float = 0.0) -> float:
    """Pump-Stokes witness in the partially stimulated cases.

    Exactly one of ``I_S``, ``I_A`` must vanish; the value is then 1 (``I_S = 0``)
    or 0 (``I_A = 0``).
    """
    from .noise_weak import weak_moments

    I_S, I_A = params.intensity("S"), params.intensity("A")
    if (I_S == 0) == (I_A == 0):
        raise DomainError("exactly one of I_S, I_A must be zero")
    return q_witness(weak_moments(params), "L", "S", phi_L, phi_S).value


# Coefficient of p^2 sin^4(u/2) in the strong-pump q closed form.  Four
# reproduces the moment catalog; the two-coefficient variant is kept for
# comparison only.
STRONG_Q_COEFFICIENT = 4.0


def strong_closed_form(params: StrongPumpParams, which: str, coefficient: float = STRONG_Q_COEFFICIENT) -> float:
    """Closed-form two-mode witnesses of the strong-pump solution.

    ``q_SV = q_SA = ((p^2-1) sin^2 u + c p^2 sin^4(u/2)) / (p^2 - cos u)^2``
    with ``u = |g| t sqrt(p^2 - 1)`` (imaginary for ``p < 1``) and
    ``q_VA = 1``.  Near ``p = 1`` the common factor ``(p^2-1)^2`` is divided
    out analytically.
    """
    if which == "qVA":
        return 1.0
    if which not in ("qSV", "qSA"):
        raise ValueError(f"unknown closed form {which!r}; expected one of {STRONG_CLOSED_FORMS}")
    p = params.p
    x = abs(params.g) * params.t
    e = p * p - 1.0
    w = x * x * e
    if abs(w) < 1e-6:
        from .noise_strong import envelope

        s, k = envelope(w, series=True)
        return (x * x * s * s + 0.25 * coefficient * p * p * x**4 * k * k) / (1 + x * x * k) ** 2
    u = np.sqrt(complex(w))
    num = e * np.sin(u) ** 2 + coefficient * p * p * np.sin(0.5 * u) ** 4
    den = (p * p - np.cos(u)) ** 2
    return float((num / den).real)


__all__ = [
    "PhaseRegion",
    "WitnessReport",
    "UndefinedWitnessError",
    "s_witness",
    "q_witness",
    "q_value",
    "psi_angle",
    "psi_bar_angle",
    "psi_angles",
    "two_mode_filter",
    "filter_margin",
    "closed_form_weak",
    "q_ls_special",
    "strong_closed_form",
    "cos_region",
    "sin2_region",
    "cos_bound",
    "sin2_bound",
    "wrap",
]
