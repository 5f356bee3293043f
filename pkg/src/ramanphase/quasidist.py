"""Characteristic function and phase quasidistribution of Gaussian noise.

The singular kernel ``1/(beta e^{-i phi} - c.c.) = 1/(2 i r sin(theta - phi))``
depends on angles only, so every radial integral is done in closed form and
Theta reduces to angular integrals of a radial function ``R``.  The pole is
handled with the ``i0`` prescription ``1/(eps + i s) -> pi delta(s) - i P/s``:

* single mode: ``Theta(phi) = (1/pi^2) [ (pi/2) (R(phi) + R(phi+pi))
  - (i/2) P int R(theta)/sin(theta - phi) dtheta ]``
* two modes: the product of two such factors, leaving a pole term summed over
  the four images ``(phi_j + {0,pi}, phi_k + {0,pi})`` and a double principal
  value.

Two evaluators of the principal value are provided.  ``"fft"`` applies the
exact Fourier multiplier of ``1/sin`` (``2 pi i sgn m`` on odd ``m``, zero on
even ``m``) on the sample grid.  ``"pairing"`` folds Gauss-Legendre nodes
symmetrically about both poles so that the odd part cancels node by node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .model import TWO_PI, DomainError, NoiseMoments, as_mode
from .witnesses import two_mode_filter

DEFAULT_SAMPLES = 720
DEFAULT_POLE_WIDTH = 1e-3
DEFAULT_PAIRING_NODES = 48
RADIAL_TOL = 1e-8
# imaginary residue allowed in a real-valued Theta
IMAG_TOL = 1e-8
# semidefinite edges (exact equality up to rounding) count as regular
SEMIDEF_TOL = 1e-12
# |c - 1| below this uses the series of F(c)
_F_SERIES = 1e-6


# ---------------------------------------------------------------------------
# characteristic function
# ---------------------------------------------------------------------------


def cf_exponent(m: NoiseMoments, betas: Sequence[complex], subset=None) -> float:
    """Exponent ``E`` of the normally ordered characteristic function."""
    subset = m.modes if subset is None else tuple(as_mode(j) for j in subset)
    betas = [complex(b) for b in betas]
    if len(betas) != len(subset):
        raise DomainError(f"{len(betas)} arguments for {len(subset)} modes")
    r = [abs(b) for b in betas]
    th = [math.atan2(b.imag, b.real) for b in betas]
    e = 0.0
    for i, j in enumerate(subset):
        c = m.c(j)
        e += -m.b(j) * r[i] ** 2
        if c:
            e += abs(c) * r[i] ** 2 * math.cos(np.angle(c) - 2 * th[i])
    for i, j in enumerate(subset):
        for i2 in range(i + 1, len(subset)):
            k = subset[i2]
            d, db = m.d(j, k), m.dbar(j, k)
            cross = 0.0
            if d:
                cross += abs(d) * math.cos(np.angle(d) - th[i] - th[i2])
            if db:
                cross += abs(db) * math.cos(np.angle(db) + th[i] - th[i2])
            e += 2 * r[i] * r[i2] * cross
    return e


def cf_eval(m: NoiseMoments, betas: Sequence[complex], subset=None) -> float:
    """``C(beta) = exp(E)``; overflow saturates to ``inf``."""
    e = cf_exponent(m, betas, subset)
    return math.exp(e) if e < 709.0 else math.inf


# ---------------------------------------------------------------------------
# radial integrals
# ---------------------------------------------------------------------------


def _a(m: NoiseMoments, j, theta):
    c = m.c(j)
    theta = np.asarray(theta, dtype=float)
    if c == 0:
        return np.full(theta.shape, m.b(j))
    return m.b(j) - abs(c) * np.cos(np.angle(c) - 2.0 * theta)


def _w(m: NoiseMoments, j, k, tj, tk):
    d, db = m.d(j, k), m.dbar(j, k)
    return abs(d) * np.cos(np.angle(d) - tj - tk) + abs(db) * np.cos(np.angle(db) + tj - tk)


def radial_single(a):
    """``int_0^inf exp(-a r^2) dr``; ``inf`` where ``a <= 0``."""
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a > 0, 0.5 * np.sqrt(np.pi / np.where(a > 0, a, 1.0)), np.inf)


def _f_of_c(c):
    """``int_0^{pi/2} dpsi / (1 + c sin 2psi)`` up to the factor 1/2 (``F(1) = 1``)."""
    c = np.asarray(c, dtype=float)
    out = np.full(c.shape, np.inf)
    near = np.abs(c - 1.0) < _F_SERIES
    lo = (c > -1.0) & (c < 1.0) & ~near
    hi = (c > 1.0) & ~near
    out[near] = 1.0 - (c[near] - 1.0) / 3.0
    out[lo] = np.arccos(c[lo]) / np.sqrt(1.0 - c[lo] ** 2)
    out[hi] = np.arccosh(c[hi]) / np.sqrt(c[hi] ** 2 - 1.0)
    return out


def radial_two(a_j, a_k, w):
    """Closed form of ``int int_{r>0} exp(-a_j r_j^2 - a_k r_k^2 + 2 w r_j r_k)``.

    Infinite where the quadratic form fails to be positive on the quadrant.
    """
    a_j, a_k, w = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a_j, a_k, w)))
    ok = (a_j > 0) & (a_k > 0)
    out = np.full(a_j.shape, np.inf)
    s = np.sqrt(a_j[ok] * a_k[ok])
    out[ok] = _f_of_c(-w[ok] / s) / (2.0 * s)
    return out


def radial_two_quad(a_j: float, a_k: float, w: float, tol: float = RADIAL_TOL) -> float:
    """Adaptive-quadrature reference for :func:`radial_two` (polar coordinates)."""
    if a_j <= 0 or a_k <= 0:
        return math.inf

    def inner(psi):
        den = a_j * math.cos(psi) ** 2 + a_k * math.sin(psi) ** 2 - w * math.sin(2 * psi)
        return 0.5 / den if den > 0 else math.inf

    if any(inner(x) == math.inf for x in np.linspace(0, 0.5 * math.pi, 257)):
        return math.inf
    val, _ = integrate.quad(inner, 0.0, 0.5 * math.pi, epsabs=0.0, epsrel=tol, limit=200)
    return val


# ---------------------------------------------------------------------------
# grid container
# ---------------------------------------------------------------------------


def phase_axis(n: int, offset: float = 0.0) -> np.ndarray:
    return TWO_PI * (np.arange(n) + offset) / n


@dataclass(frozen=True)
class ThetaGrid:
    """Sampled Theta on a uniform periodic phase grid.

    ``values`` are the raw (unnormalized) samples, ``+inf`` where diverged.
    ``error`` is the change against a grid of twice the density.
    """

    modes: tuple
    axes: tuple
    values: np.ndarray
    error: np.ndarray
    diverged: np.ndarray
    method: str

    def __post_init__(self):
        for arr in (self.values, self.error, self.diverged, *self.axes):
            arr.setflags(write=False)

    @property
    def dims(self) -> int:
        return len(self.axes)

    @property
    def cell(self) -> float:
        return (TWO_PI / len(self.axes[0])) ** self.dims

    @property
    def integral(self) -> float:
        """Periodic trapezoid integral; ``nan`` if any sample diverged."""
        if self.diverged.any():
            return math.nan
        return float(np.sum(self.values) * self.cell)

    def normalized(self) -> np.ndarray:
        return self.values / self.integral


def _spectral_sign(n: int) -> np.ndarray:
    m = np.rint(np.fft.fftfreq(n, 1.0 / n)).astype(int)
    s = np.where(m % 2 == 0, 1.0, np.sign(m))
    if n % 2 == 0 and (n // 2) % 2 == 1:
        s[n // 2] = 0.0  # odd Nyquist mode has no sign
    return s


def _check_samples(n: int):
    if n < 8 or n % 2:
        raise DomainError(f"samples must be even and >= 8, got {n}")


# ---------------------------------------------------------------------------
# single mode
# ---------------------------------------------------------------------------


def _scale(m, j):
    return m.b(j) + abs(m.c(j))


def _single_diverged(m, j, phi, width):
    floor = -SEMIDEF_TOL * _scale(m, j)
    bad = np.zeros(phi.shape, dtype=bool)
    for d in (-width, 0.0, width) if width else (0.0,):
        bad |= ~(_a(m, j, phi + d) >= floor)
    return bad


def _theta_single_fft(m, j, phi):
    a = _a(m, j, phi)
    r = radial_single(a)
    # a within roundoff of zero would break the period-pi symmetry of R
    r = np.where(np.isfinite(r) & (a > SEMIDEF_TOL * _scale(m, j)), r, 0.0)
    out = np.fft.ifft(np.fft.fft(r) * _spectral_sign(len(phi)))
    return out.real / math.pi, float(np.abs(out.imag).max())


def _pairing(nodes: int):
    x, w = np.polynomial.legendre.leggauss(nodes)
    tau = 0.25 * math.pi * (x + 1.0)
    return tau, 0.25 * math.pi * w


def theta_single_point(m: NoiseMoments, mode, phi: float, nodes: int = DEFAULT_PAIRING_NODES) -> complex:
    """Theta at one phase by symmetric pole pairing; returns the complex value."""
    j = as_mode(mode)
    tau, wts = _pairing(nodes)

    def R(th):
        a = _a(m, j, th)
        r = radial_single(a)
        return np.where(np.isfinite(r) & (a > SEMIDEF_TOL * _scale(m, j)), r, 0.0)

    pole = 0.5 * math.pi * (R(np.array([phi]))[0] + R(np.array([phi + math.pi]))[0])
    # images tau, -tau, pi - tau, pi + tau carry 1/sin signs +, -, +, -
    odd = R(phi + tau) - R(phi - tau) + R(phi + math.pi - tau) - R(phi + math.pi + tau)
    pv = float(np.sum(wts * odd / np.sin(tau)))
    return complex(pole, -0.5 * pv) / math.pi**2


def theta_single(
    m: NoiseMoments,
    mode,
    samples: int = DEFAULT_SAMPLES,
    method: str = "fft",
    pole_width: float = DEFAULT_POLE_WIDTH,
    estimate_error: bool = True,
    nodes: int = DEFAULT_PAIRING_NODES,
) -> ThetaGrid:
    """Single-mode Theta on ``samples`` equally spaced phases."""
    _check_samples(samples)
    j = as_mode(mode)
    phi = phase_axis(samples)

    def run(ph):
        if method == "fft":
            vals, resid = _theta_single_fft(m, j, ph)
        elif method == "pairing":
            z = np.array([theta_single_point(m, j, p, nodes) for p in ph])
            vals, resid = z.real, float(np.abs(z.imag).max())
        else:
            raise ValueError(f"unknown method {method!r}")
        if resid > IMAG_TOL * max(1.0, float(np.abs(vals).max())):
            raise ArithmeticError(f"imaginary residue {resid:.3g} in single-mode Theta")
        return vals

    vals = run(phi)
    err = np.zeros(samples)
    if estimate_error:
        err = np.abs(vals - run(phase_axis(2 * samples))[::2])
    diverged = _single_diverged(m, j, phi, pole_width)
    vals = np.where(diverged, np.inf, vals)
    err = np.where(diverged, np.nan, err)
    return ThetaGrid((j,), (phi,), vals, err, diverged, method)


# ---------------------------------------------------------------------------
# two modes
# ---------------------------------------------------------------------------


def radial_pair(m: NoiseMoments, j, k, tj, tk):
    """Radial function ``R2(theta_j, theta_k)`` (broadcasting)."""
    return radial_two(_a(m, j, tj), _a(m, k, tk), _w(m, j, k, tj, tk))


def _pair_regular(m, j, k, pj, pk):
    """True where no pole image sees an indefinite radial form.

    Equality (a semidefinite form, as in pure frequency conversion) is
    regular up to :data:`SEMIDEF_TOL`.
    """
    sj, sk = _scale(m, j), _scale(m, k)
    aj, ak = _a(m, j, pj), _a(m, k, pk)
    w = _w(m, j, k, pj, pk)
    tol = SEMIDEF_TOL
    return (aj >= -tol * sj) & (ak >= -tol * sk) & (w * w - aj * ak <= tol * sj * sk)


def _pair_diverged(m, j, k, PJ, PK, width):
    bad = np.zeros(PJ.shape, dtype=bool)
    offs = (-width, 0.0, width) if width else (0.0,)
    for dj in offs:
        for dk in offs:
            bad |= ~_pair_regular(m, j, k, PJ + dj, PK + dk)
    return bad


def _theta_two_fft(m, j, k, phi):
    TJ, TK = np.meshgrid(phi, phi, indexing="ij")
    r = radial_pair(m, j, k, TJ, TK)
    r = np.where(np.isfinite(r), r, 0.0)
    s = _spectral_sign(len(phi))
    out = np.fft.ifft2(np.fft.fft2(r) * np.outer(s, s))
    return out.real / math.pi**2, float(np.abs(out.imag).max())


def theta_two_point(
    m: NoiseMoments, pair, phi_j: float, phi_k: float, nodes: int = DEFAULT_PAIRING_NODES
) -> complex:
    """Two-mode Theta at one phase pair by symmetric pole pairing."""
    j, k = (as_mode(x) for x in pair)
    tau, wts = _pairing(nodes)

    def R(tj, tk):
        r = radial_pair(m, j, k, tj, tk)
        return np.where(np.isfinite(r), r, 0.0)

    # image b + s*tau of a pole; 1/sin there is sign/sin(tau)
    folds = tuple((b, s, s * (-1.0 if b else 1.0)) for b in (0.0, math.pi) for s in (1.0, -1.0))
    pj, pk = np.asarray(phi_j, dtype=float), np.asarray(phi_k, dtype=float)
    halves = (0.0, math.pi)
    pole = sum(float(R(pj + a, pk + b)) for a in halves for b in halves)
    # pole in one variable, principal value in the other; vanishes by the
    # joint period-pi symmetry of R2 and is kept as a residue check
    cross = 0.0
    for b, s, sign in folds:
        for h in halves:
            cross += sign * float(np.sum(wts * R(pj + b + s * tau, pk + h) / np.sin(tau)))
            cross += sign * float(np.sum(wts * R(pj + h, pk + b + s * tau) / np.sin(tau)))
    T1, T2 = np.meshgrid(tau, tau, indexing="ij")
    W = np.outer(wts, wts) / np.outer(np.sin(tau), np.sin(tau))
    acc = np.zeros_like(T1)
    for b1, s1, sign1 in folds:
        for b2, s2, sign2 in folds:
            acc = acc + sign1 * sign2 * R(pj + b1 + s1 * T1, pk + b2 + s2 * T2)
    pv = float(np.sum(W * acc))
    real = pole / (4 * math.pi**2) - pv / (4 * math.pi**4)
    return complex(real, -cross / (4 * math.pi**3))


def theta_two(
    m: NoiseMoments,
    pair,
    samples: int = DEFAULT_SAMPLES,
    method: str = "fft",
    pole_width: float = DEFAULT_POLE_WIDTH,
    estimate_error: bool = True,
) -> ThetaGrid:
    """Two-mode Theta over ``samples x samples`` phase pairs.

    Nodes where the radial integral is infinite contribute zero to the
    principal value; samples whose own pole images are infinite are flagged.
    """
    _check_samples(samples)
    j, k = (as_mode(x) for x in pair)
    if j == k:
        raise DomainError("pair needs two distinct modes")
    if method != "fft":
        raise ValueError("grid evaluation supports method='fft'; use theta_two_point for pairing")
    phi = phase_axis(samples)

    def run(ph):
        vals, resid = _theta_two_fft(m, j, k, ph)
        if resid > IMAG_TOL * max(1.0, float(np.abs(vals).max())):
            raise ArithmeticError(f"imaginary residue {resid:.3g} in two-mode Theta")
        return vals

    vals = run(phi)
    err = np.zeros_like(vals)
    if estimate_error:
        err = np.abs(vals - run(phase_axis(2 * samples))[::2, ::2])
    PJ, PK = np.meshgrid(phi, phi, indexing="ij")
    diverged = _pair_diverged(m, j, k, PJ, PK, pole_width)
    vals = np.where(diverged, np.inf, vals)
    err = np.where(diverged, np.nan, err)
    return ThetaGrid((j, k), (phi, phi.copy()), vals, err, diverged, method)


# ---------------------------------------------------------------------------
# filter maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FilterMap:
    """Allowed (unfiltered) phase pairs predicted by the two-mode inequality."""

    modes: tuple
    axes: tuple
    allowed: np.ndarray

    def __post_init__(self):
        self.allowed.setflags(write=False)

    @property
    def fraction(self) -> float:
        return float(self.allowed.mean())

    def boundary_band(self, cells: int = 2) -> np.ndarray:
        """Samples within ``cells`` grid cells of an allowed/filtered edge."""
        a = self.allowed
        edge = np.zeros(a.shape, dtype=bool)
        for axis in range(a.ndim):
            edge |= a != np.roll(a, 1, axis=axis)
            edge |= a != np.roll(a, -1, axis=axis)
        band = edge.copy()
        for _ in range(cells):
            grown = band.copy()
            for axis in range(a.ndim):
                grown |= np.roll(band, 1, axis=axis) | np.roll(band, -1, axis=axis)
            band = grown
        return band


def filter_map(m: NoiseMoments, pair, samples: int = DEFAULT_SAMPLES) -> FilterMap:
    """Evaluate :func:`witnesses.two_mode_filter` on the Theta phase grid."""
    _check_samples(samples)
    j, k = (as_mode(x) for x in pair)
    phi = phase_axis(samples)
    PJ, PK = np.meshgrid(phi, phi, indexing="ij")
    allowed = np.asarray(two_mode_filter(m, j, k, PJ, PK), dtype=bool)
    return FilterMap((j, k), (phi, phi.copy()), allowed)


def agreement(theta: ThetaGrid, fmap: FilterMap, band_cells: int = 2) -> float:
    """Fraction of samples outside the boundary band where the flags agree."""
    keep = ~fmap.boundary_band(band_cells)
    if not keep.any():
        return 1.0
    return float(np.mean((~theta.diverged)[keep] == fmap.allowed[keep]))


__all__ = [
    "cf_eval",
    "cf_exponent",
    "radial_single",
    "radial_two",
    "radial_two_quad",
    "radial_pair",
    "ThetaGrid",
    "theta_single",
    "theta_single_point",
    "theta_two",
    "theta_two_point",
    "FilterMap",
    "filter_map",
    "agreement",
    "phase_axis",
]
