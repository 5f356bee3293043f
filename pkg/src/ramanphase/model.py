"""Physical parameters, the moment catalog and shared special functions.

All quantities are dimensionless.  Couplings are complex; frequencies only
enter oscillatory phase factors and are carried as free labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

import numpy as np

# |x| below this uses Taylor branches (x = detuning * time).
SERIES_THRESHOLD = 1e-3

TWO_PI = 2.0 * math.pi


class DomainError(ValueError):
    """Input outside the domain where a quantity is defined."""


class Mode(str, Enum):
    L = "L"  # pump
    S = "S"  # Stokes
    V = "V"  # phonon
    A = "A"  # anti-Stokes

    def __str__(self) -> str:
        return self.value


WEAK_MODES = (Mode.L, Mode.S, Mode.V, Mode.A)
STRONG_MODES = (Mode.S, Mode.V, Mode.A)


class Case(int, Enum):
    """Which single detuning is allowed to be nonzero."""

    ONE = 1  # delta1 != 0, delta2 == 0
    TWO = 2  # delta1 == 0, delta2 != 0


def as_mode(m) -> Mode:
    return m if isinstance(m, Mode) else Mode(str(m))


def _frozen_map(d: Mapping | None, keys, cast) -> Mapping:
    d = {} if d is None else {as_mode(k): cast(v) for k, v in d.items()}
    extra = set(d) - set(keys)
    if extra:
        raise DomainError(f"unknown modes {sorted(map(str, extra))}")
    return MappingProxyType({k: d.get(k, cast(0)) for k in keys})


# ---------------------------------------------------------------------------
# scalar helpers
# ---------------------------------------------------------------------------


def p_ratio(g: complex, chi: complex) -> float:
    """Ratio of anti-Stokes to Stokes coupling moduli, ``|chi|/|g|``."""
    if abs(g) == 0:
        raise DomainError("Stokes coupling g must be nonzero")
    return abs(chi) / abs(g)


def intensity(xi: complex) -> float:
    return abs(xi) ** 2


def sinc(x):
    """Unnormalized sinc, ``sin(x)/x`` with ``sinc(0) == 1``."""
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


def _poly(x, coeffs):
    # coeffs in increasing powers of x**2
    x2 = x * x
    out = 0.0
    for c in reversed(coeffs):
        out = out * x2 + c
    return out


# Lambda^2 = x^4/4 * (1 - x^2/18 + x^4/720 - x^6/50400 + ...)
_LAMBDA_SQ_SERIES = (1.0, -1.0 / 18.0, 1.0 / 720.0, -1.0 / 50400.0)


def lambda_fn(delta: float, t: float) -> float:
    """Detuning envelope ``Lambda`` with ``Lambda^2 = x^2 + 4 sin^2(x/2) - 2 x sin x``.

    ``x = delta * t``.  Above :data:`SERIES_THRESHOLD` the value is evaluated
    as ``hypot(x - sin x, 2 sin^2(x/2))``, which is the same quantity without
    the leading-order cancellation; below it the Taylor series is used.
    """
    if t < 0:
        raise DomainError("t must be >= 0")
    x = abs(float(delta) * float(t))
    if x < SERIES_THRESHOLD:
        return 0.5 * x * x * math.sqrt(_poly(x, _LAMBDA_SQ_SERIES))
    return math.hypot(x - math.sin(x), 2.0 * math.sin(0.5 * x) ** 2)


# 2 sin^2(x/2) / Lambda(x) -> 1 as x -> 0
def sin2_over_lambda(x: float) -> float:
    x = abs(float(x))
    if x < SERIES_THRESHOLD:
        return float(kernel_cos(x)) / math.sqrt(_poly(x, _LAMBDA_SQ_SERIES))
    return 2.0 * math.sin(0.5 * x) ** 2 / lambda_fn(x, 1.0)


# ---------------------------------------------------------------------------
# kernels of x = delta*t, each normalized by x**2 (or x) so that the x -> 0
# limit is finite; all share SERIES_THRESHOLD.
# ---------------------------------------------------------------------------


def _series_coeffs(term, n=5):
    return tuple(term(k) for k in range(n))


# 4 sin^2(x/2) / x^2 = 2 (1 - cos x) / x^2
_K_COS = _series_coeffs(lambda k: 2.0 * (-1) ** k / math.factorial(2 * k + 2))
# (sin x - x cos x) / x^2 = x * sum ...
_K_SMC = _series_coeffs(lambda k: (-1) ** k * (2 * k + 2) / math.factorial(2 * k + 3))
# (sin x - x) / x^2 = x * sum ...
_K_SMX = _series_coeffs(lambda k: (-1) ** (k + 1) / math.factorial(2 * k + 3))


def kernel_cos(x: float) -> float:
    if abs(x) < SERIES_THRESHOLD:
        return _poly(x, _K_COS)
    return (2.0 * math.sin(0.5 * x) / x) ** 2


def kernel_sin_minus_xcos(x: float) -> float:
    if abs(x) < SERIES_THRESHOLD:
        return x * _poly(x, _K_SMC)
    return (math.sin(x) - x * math.cos(x)) / (x * x)


def kernel_sin_minus_x(x: float) -> float:
    if abs(x) < SERIES_THRESHOLD:
        return x * _poly(x, _K_SMX)
    return (math.sin(x) - x) / (x * x)


def kernel_sin_minus_xexp(x: float) -> complex:
    """``(sin x - x e^{ix}) / x^2``; its conjugate is the ``e^{-ix}`` variant."""
    return complex(kernel_sin_minus_xcos(x), -float(sinc(x)))


# ---------------------------------------------------------------------------
# parameter sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeakPumpParams:
    """Finite-time (weak pump) Raman parameters.

    ``xi`` holds the initial coherent amplitudes of all four modes and
    ``omega`` the mode frequencies.  Exactly one detuning may be nonzero,
    selected by ``case``.
    """

    g: complex
    chi: complex
    t: float
    case: Case = Case.ONE
    delta1: float = 0.0
    delta2: float = 0.0
    xi: Mapping[Mode, complex] = field(default_factory=dict)
    omega: Mapping[Mode, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "g", complex(self.g))
        object.__setattr__(self, "chi", complex(self.chi))
        object.__setattr__(self, "case", Case(self.case))
        object.__setattr__(self, "xi", _frozen_map(self.xi, WEAK_MODES, complex))
        object.__setattr__(self, "omega", _frozen_map(self.omega, WEAK_MODES, float))
        if abs(self.g) == 0:
            raise DomainError("Stokes coupling g must be nonzero")
        if not self.t >= 0:
            raise DomainError("t must be >= 0")
        if self.case is Case.ONE and self.delta2 != 0:
            raise DomainError("Case 1 requires delta2 == 0")
        if self.case is Case.TWO and self.delta1 != 0:
            raise DomainError("Case 2 requires delta1 == 0")

    @classmethod
    def from_frequencies(cls, g, chi, t, omega, xi=None, case=None, rtol=1e-12):
        """Build from mode frequencies, deriving the detunings.

        ``dw1 = w_S + w_V - w_L`` and ``dw2 = w_L + w_V - w_A``; Case 1 needs
        ``dw1 == dw2`` and Case 2 ``dw1 == -dw2``.
        """
        w = {as_mode(k): float(v) for k, v in omega.items()}
        dw1 = w[Mode.S] + w[Mode.V] - w[Mode.L]
        dw2 = w[Mode.L] + w[Mode.V] - w[Mode.A]
        scale = max(abs(x) for x in w.values()) or 1.0
        tol = rtol * scale
        same = abs(dw1 - dw2) <= tol
        opposite = abs(dw1 + dw2) <= tol
        if same and opposite:
            return cls(g, chi, t, Case(case or 1), 0.0, 0.0, xi or {}, w)
        if same and case in (None, Case.ONE, 1):
            return cls(g, chi, t, Case.ONE, dw1, 0.0, xi or {}, w)
        if opposite and case in (None, Case.TWO, 2):
            return cls(g, chi, t, Case.TWO, 0.0, dw1, xi or {}, w)
        raise DomainError(
            f"frequencies give dw1={dw1:g}, dw2={dw2:g}; neither limiting case applies"
        )

    @classmethod
    def from_intensities(
        cls, g, chi, t, intensities, phases=None, case=Case.ONE, delta=0.0, omega=None
    ):
        """Convenience constructor: amplitudes from intensities and phases.

        ``delta`` is assigned to the detuning that ``case`` leaves free.
        """
        phases = phases or {}
        xi = {
            as_mode(m): math.sqrt(I) * complex(math.cos(phases.get(m, 0.0)), math.sin(phases.get(m, 0.0)))
            for m, I in intensities.items()
        }
        case = Case(case)
        d1, d2 = (delta, 0.0) if case is Case.ONE else (0.0, delta)
        return cls(g, chi, t, case, d1, d2, xi, omega or {})

    @property
    def p(self) -> float:
        return p_ratio(self.g, self.chi)

    @property
    def delta(self) -> float:
        """The detuning that the case leaves free."""
        return self.delta1 if self.case is Case.ONE else self.delta2

    def intensity(self, mode) -> float:
        return intensity(self.xi[as_mode(mode)])


@dataclass(frozen=True)
class StrongPumpParams:
    """Resonant Raman parameters with an undepleted classical pump.

    The pump amplitude is folded into ``g`` and ``chi``.
    """

    g: complex
    chi: complex
    t: float
    phi_L: float = 0.0
    omega: Mapping[Mode, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "g", complex(self.g))
        object.__setattr__(self, "chi", complex(self.chi))
        object.__setattr__(self, "omega", _frozen_map(self.omega, STRONG_MODES, float))
        if abs(self.g) == 0:
            raise DomainError("Stokes coupling g must be nonzero")
        if not self.t >= 0:
            raise DomainError("t must be >= 0")

    @property
    def p(self) -> float:
        return p_ratio(self.g, self.chi)


# ---------------------------------------------------------------------------
# moment catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseMoments:
    """Second-order noise moments of a zero-mean Gaussian state.

    ``B[j] = <da_j^+ da_j>``, ``C[j] = <da_j^2>``, ``D[(j,k)] = <da_j da_k>``
    and ``Dbar[(j,k)] = -<da_j^+ da_k>``.  Pair keys follow the order of
    ``modes``; missing entries are zero.  Use the accessors, which handle the
    symmetry ``D_kj = D_jk`` and ``Dbar_kj = conj(Dbar_jk)``.
    """

    modes: tuple
    B: Mapping[Mode, float]
    C: Mapping[Mode, complex]
    D: Mapping[tuple, complex]
    Dbar: Mapping[tuple, complex]
    regime: str

    def __post_init__(self):
        modes = tuple(as_mode(m) for m in self.modes)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "B", _frozen_map(self.B, modes, float))
        object.__setattr__(self, "C", _frozen_map(self.C, modes, complex))
        object.__setattr__(self, "D", self._pairs(self.D))
        object.__setattr__(self, "Dbar", self._pairs(self.Dbar))
        if self.regime not in ("weak", "strong", "custom"):
            raise DomainError(f"unknown regime {self.regime!r}")
        for m, b in self.B.items():
            if not b >= 0:
                raise DomainError(f"B_{m} = {b!r} must be >= 0")

    def _pairs(self, d):
        order = {m: i for i, m in enumerate(self.modes)}
        out = {}
        for (j, k), v in (d or {}).items():
            j, k = as_mode(j), as_mode(k)
            if j == k or j not in order or k not in order:
                raise DomainError(f"bad mode pair ({j}, {k})")
            if order[j] > order[k]:
                raise DomainError(f"pair ({j}, {k}) not in mode order")
            out[(j, k)] = complex(v)
        return MappingProxyType(out)

    def b(self, j) -> float:
        return self.B[as_mode(j)]

    def c(self, j) -> complex:
        return self.C[as_mode(j)]

    def d(self, j, k) -> complex:
        j, k = as_mode(j), as_mode(k)
        return self.D.get((j, k), self.D.get((k, j), 0j))

    def dbar(self, j, k) -> complex:
        j, k = as_mode(j), as_mode(k)
        if (j, k) in self.Dbar:
            return self.Dbar[(j, k)]
        return self.Dbar.get((k, j), 0j).conjugate()

    def entries(self) -> dict:
        """Flat ``name -> value`` view over every catalog slot (zeros included)."""
        out = {f"B_{m}": self.B[m] for m in self.modes}
        out.update({f"C_{m}": self.C[m] for m in self.modes})
        for i, j in enumerate(self.modes):
            for k in self.modes[i + 1:]:
                out[f"D_{j}{k}"] = self.d(j, k)
        for i, j in enumerate(self.modes):
            for k in self.modes[i + 1:]:
                out[f"Dbar_{j}{k}"] = self.dbar(j, k)
        return out

    def quadratic_form(self, subset=None) -> np.ndarray:
        """Real matrix ``Q`` with ``ln C(beta) = -v^T Q v``.

        ``v = (Re b_1, Im b_1, Re b_2, Im b_2, ...)`` over ``subset``.
        """
        subset = self.modes if subset is None else tuple(as_mode(m) for m in subset)
        n = len(subset)
        Q = np.zeros((2 * n, 2 * n))

        def add(a, b, v):
            Q[a, b] += v
            Q[b, a] += v

        for i, j in enumerate(subset):
            x, y = 2 * i, 2 * i + 1
            c = self.c(j)
            Q[x, x] += self.b(j) - c.real
            Q[y, y] += self.b(j) + c.real
            Q[x, y] -= c.imag
            Q[y, x] -= c.imag
        for i, j in enumerate(subset):
            for i2 in range(i + 1, n):
                k = subset[i2]
                xj, yj, xk, yk = 2 * i, 2 * i + 1, 2 * i2, 2 * i2 + 1
                d, db = self.d(j, k), self.dbar(j, k)
                add(xj, xk, -d.real - db.real)
                add(yj, yk, d.real - db.real)
                add(xj, yk, -d.imag - db.imag)
                add(yj, xk, -d.imag + db.imag)
        return Q

    def is_classical(self, subset=None) -> bool:
        """True if the Gaussian P function of ``subset`` is a regular density."""
        return bool(np.linalg.eigvalsh(self.quadratic_form(subset)).min() > 0)
