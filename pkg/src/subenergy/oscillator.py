"""Gaussian-state energetics of a harmonic oscillator.

A harmonic oscillator linearly coupled to a bath of oscillators has a
Gaussian reduced density matrix, fully determined by the second moments
<q^2> and <p^2>.  This module carries those moments into every energy
statistic of interest:

* the position-space density matrix and its purity,
* the energy generating function Z(chi) = <exp(-chi H)> in closed form,
* energy cumulants kappa_1..kappa_4 in closed form,
* the Fock-state occupation probabilities rho_nn and their energy
  transform, which reproduces Z(chi) through an independent route.

Dimensionless shape variables: x = 2 gamma^2 <q^2> and
y = 2 <p^2> / (gamma^2 hbar^2) with gamma^2 = m omega / hbar.  The isolated
ground state sits at x = y = 1.  Derived quantities: D = (1+x)(1+y),
a = (y-x)/D (equipartition deviation), b = (xy-1)/D (uncertainty-area
deviation), E = (x+y) hbar omega / 4 (mean energy) and
A = <q^2><p^2>/hbar^2 = xy/4 (A = 1/4 when the uncertainty bound is sharp).

The position-space kernel uses the exponent -(q+q')^2 / (8 <q^2>); this is
the unique coefficient compatible with the 1/sqrt(2 pi <q^2>) prefactor,
unit trace, and diagonal second moment <q^2> (all asserted in the tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ToleranceError

__all__ = [
    "OscillatorParams",
    "GaussianMoments",
    "ShapeParams",
    "FockDistribution",
    "SpectralTransformVars",
    "EnergyCumulants",
    "moments_to_shape",
    "shape_to_moments",
    "shape_from_xy",
    "purity",
    "shape_purity",
    "position_density_matrix",
    "imaginary_time_propagator",
    "generating_function",
    "generating_function_free",
    "cumulants_closed_form",
    "fock_probabilities",
    "raw_fock_weights",
    "truncation_for_tolerance",
    "spectral_generating_function",
    "mean_and_variance_from_fock",
    "cumulants_from_fock",
    "spectral_transform_vars",
]

_UNCERTAINTY_SLACK = 1e-12
_HARD_TRUNCATION_CAP = 200


@dataclass(frozen=True)
class OscillatorParams:
    """Mass, frequency, and hbar; omega = 0 is admitted for free-particle limits only."""

    m: float
    omega: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.m <= 0:
            raise DomainError("mass must be positive")
        if self.omega < 0:
            raise DomainError("omega must be non-negative")
        if self.hbar <= 0:
            raise DomainError("hbar must be positive")

    @property
    def gamma(self) -> float:
        """Inverse oscillator length sqrt(m omega / hbar)."""
        return math.sqrt(self.m * self.omega / self.hbar)

    @property
    def quantum(self) -> float:
        """Level spacing hbar * omega."""
        return self.hbar * self.omega

    def level_energy(self, n: int) -> float:
        return (n + 0.5) * self.quantum

    def _require_bound(self, what: str):
        if self.omega <= 0:
            raise DomainError(f"{what} requires omega > 0")


@dataclass(frozen=True)
class GaussianMoments:
    """Second moments <q^2> and <p^2> of a Gaussian state."""

    q2: float
    p2: float

    def __post_init__(self):
        if self.q2 <= 0 or self.p2 <= 0:
            raise DomainError("second moments must be positive")

    def check_uncertainty(self, hbar: float = 1.0):
        """Reject moments below the uncertainty bound q2 * p2 >= hbar^2 / 4."""
        bound = 0.25 * hbar * hbar
        if self.q2 * self.p2 < bound * (1.0 - _UNCERTAINTY_SLACK):
            raise DomainError(
                f"uncertainty violation: <q^2><p^2> = {self.q2 * self.p2:.15g} "
                f"< hbar^2/4 = {bound:.15g}; such inputs produce unphysical "
                "probabilities")


@dataclass(frozen=True)
class ShapeParams:
    """Dimensionless shape (x, y) of a Gaussian state plus its energy scale."""

    x: float
    y: float
    hbar_omega: float = 1.0

    def __post_init__(self):
        if self.x <= 0 or self.y <= 0:
            raise DomainError("shape variables x, y must be positive")
        if self.hbar_omega <= 0:
            raise DomainError("hbar_omega must be positive")
        if self.x * self.y < 1.0 - _UNCERTAINTY_SLACK:
            raise DomainError(
                f"uncertainty violation in shape variables: x*y = {self.x * self.y:.15g} < 1")

    @property
    def D(self) -> float:
        return (1.0 + self.x) * (1.0 + self.y)

    @property
    def a(self) -> float:
        """Equipartition deviation (y - x) / D."""
        return (self.y - self.x) / self.D

    @property
    def b(self) -> float:
        """Uncertainty-area deviation (xy - 1) / D."""
        return (self.x * self.y - 1.0) / self.D

    @property
    def E(self) -> float:
        """Mean energy (x + y) hbar omega / 4."""
        return 0.25 * (self.x + self.y) * self.hbar_omega

    @property
    def A(self) -> float:
        """<q^2><p^2>/hbar^2 = xy/4; equals 1/4 for the isolated ground state."""
        return 0.25 * self.x * self.y

    @property
    def decay_ratio(self) -> float:
        """Geometric envelope ratio b + |a| = (max(x,y) - 1)/(max(x,y) + 1) < 1."""
        m = max(self.x, self.y)
        return (m - 1.0) / (m + 1.0)


@dataclass(frozen=True)
class FockDistribution:
    """Diagonal occupation probabilities rho_00..rho_NN with a tail estimate."""

    probs: np.ndarray
    truncation: int
    tail_bound: float

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (self.truncation + 1,):
            raise DomainError("probs must hold truncation + 1 entries")
        if np.any(probs < -1e-14):
            raise DomainError(
                f"negative occupation probability {probs.min():.3e}: "
                "the underlying moments are unphysical")
        probs = np.where(probs < 0.0, 0.0, probs)
        object.__setattr__(self, "probs", probs)
        if probs.sum() > 1.0 + 1e-12:
            raise DomainError("occupation probabilities sum above 1")
        if self.tail_bound < -1e-12:
            raise DomainError("tail bound must be non-negative")


@dataclass(frozen=True)
class SpectralTransformVars:
    """Variables t, z of the Legendre summation route for the energy transform.

    Defined only when b^2 > a^2; the closed-form sum needs |t| < 1, which
    holds automatically for every valid shape at chi >= 0.
    """

    t: float
    z: float
    chi: float


class EnergyCumulants(NamedTuple):
    kappa1: float
    kappa2: float
    kappa3: float
    kappa4: float


def moments_to_shape(p: OscillatorParams, g: GaussianMoments) -> ShapeParams:
    """Convert physical second moments to the dimensionless shape variables."""
    p._require_bound("shape conversion")
    g.check_uncertainty(p.hbar)
    gamma2 = p.m * p.omega / p.hbar
    return ShapeParams(
        x=2.0 * gamma2 * g.q2,
        y=2.0 * g.p2 / (gamma2 * p.hbar**2),
        hbar_omega=p.quantum)


def shape_to_moments(s: ShapeParams, p: OscillatorParams) -> GaussianMoments:
    """Inverse of moments_to_shape for the given oscillator parameters."""
    p._require_bound("shape conversion")
    gamma2 = p.m * p.omega / p.hbar
    return GaussianMoments(
        q2=0.5 * s.x / gamma2,
        p2=0.5 * s.y * gamma2 * p.hbar**2)


def shape_from_xy(x: float, y: float, hbar_omega: float = 1.0) -> ShapeParams:
    """Shape directly from dimensionless (x, y) at a given energy quantum."""
    return ShapeParams(x=x, y=y, hbar_omega=hbar_omega)


def purity(g: GaussianMoments, hbar: float = 1.0) -> float:
    """Purity Tr rho^2 = (hbar/2) / sqrt(<q^2><p^2>) of the Gaussian state."""
    g.check_uncertainty(hbar)
    return min(1.0, 0.5 * hbar / math.sqrt(g.q2 * g.p2))


def shape_purity(s: ShapeParams) -> float:
    """Purity in shape variables, 1 / sqrt(x y) = 1 / (2 sqrt(A))."""
    return min(1.0, 1.0 / math.sqrt(s.x * s.y))


def position_density_matrix(p: OscillatorParams, g: GaussianMoments, q, q_prime):
    """Gaussian kernel <q|rho|q'>; vectorizes over q and q_prime.

    Normalized so the diagonal is a probability density with unit trace and
    second moment <q^2>.
    """
    g.check_uncertainty(p.hbar)
    q = np.asarray(q, dtype=float)
    q_prime = np.asarray(q_prime, dtype=float)
    pref = 1.0 / math.sqrt(2.0 * math.pi * g.q2)
    val = pref * np.exp(-(q + q_prime)**2 / (8.0 * g.q2)
                        - g.p2 * (q - q_prime)**2 / (2.0 * p.hbar**2))
    return float(val) if val.ndim == 0 else val


def imaginary_time_propagator(p: OscillatorParams, q, q_prime, chi: float):
    """Euclidean oscillator kernel <q'|exp(-chi H)|q>; vectorizes over positions.

    Its trace over q equals the spectral sum exp(-chi hbar omega / 2) /
    (1 - exp(-chi hbar omega)).

    Raises:
        DomainError: for chi <= 0 or omega <= 0.
    """
    p._require_bound("the imaginary-time propagator")
    if chi <= 0:
        raise DomainError("the Euclidean kernel needs chi > 0")
    q = np.asarray(q, dtype=float)
    q_prime = np.asarray(q_prime, dtype=float)
    theta = p.hbar * p.omega * chi
    sinh = math.sinh(theta)
    cosh = math.cosh(theta)
    scale = p.m * p.omega / (2.0 * p.hbar * sinh)
    pref = math.sqrt(p.m * p.omega / (2.0 * math.pi * p.hbar * sinh))
    val = pref * np.exp(-scale * ((q**2 + q_prime**2) * cosh - 2.0 * q * q_prime))
    return float(val) if val.ndim == 0 else val


def _generating_function_any_chi(s: ShapeParams, chi: float) -> float:
    """Analytic continuation of the closed-form Z; used by centered stencils."""
    eps = s.hbar_omega
    th = eps * chi
    braces = (2.0 * s.E * math.sinh(th) / eps
              + 2.0 * s.A * (math.cosh(th) - 1.0)
              + 0.5 * (1.0 + math.cosh(th)))
    if braces <= 0.0:
        raise DomainError(f"generating function undefined at chi = {chi:g}")
    return braces**-0.5


def generating_function(s: ShapeParams, chi: float) -> float:
    """Energy generating function Z(chi) = <exp(-chi H)> in closed form.

    Z = {2E sinh(eps chi)/eps + 2A (cosh(eps chi) - 1)
         + (1 + cosh(eps chi))/2}^(-1/2) with eps = hbar omega.
    Z(0) = 1 and Z decreases strictly on chi >= 0.
    """
    if chi < 0:
        raise DomainError("the Laplace variable chi must be non-negative")
    return _generating_function_any_chi(s, chi)


def generating_function_free(p2: float, m: float, chi: float) -> float:
    """Free-particle generating function {1 + chi <p^2> / m}^(-1/2).

    Differentiation generates the Wick moments
    <p^(2n)> = (2n-1)!! <p^2>^n of the kinetic energy.
    """
    if p2 <= 0 or m <= 0:
        raise DomainError("p2 and m must be positive")
    if chi < 0:
        raise DomainError("the Laplace variable chi must be non-negative")
    return (1.0 + chi * p2 / m)**-0.5


def cumulants_closed_form(s: ShapeParams) -> EnergyCumulants:
    """Energy cumulants kappa_1..kappa_4 in closed form.

    kappa_1 = E,
    kappa_2 = (1/2) [ -eps^2/2 + 4 E^2 - 2 eps^2 A ],
    kappa_3 = -(E/2) [ -16 E^2 + eps^2 (1 + 12 A) ],
    kappa_4 = 48 E^4 - 4 eps^2 E^2 (1 + 12 A) + eps^4 [1/8 + 2 A + 6 A^2].
    All fluctuation cumulants vanish identically for the isolated state
    (E = eps/2, A = 1/4).
    """
    E, A = s.E, s.A
    eps2 = s.hbar_omega**2
    kappa2 = 0.5 * (-0.5 * eps2 + 4.0 * E * E - 2.0 * eps2 * A)
    kappa3 = -(0.5 * E) * (-16.0 * E * E + eps2 * (1.0 + 12.0 * A))
    kappa4 = (48.0 * E**4 - 4.0 * eps2 * E * E * (1.0 + 12.0 * A)
              + eps2 * eps2 * (0.125 + 2.0 * A + 6.0 * A * A))
    return EnergyCumulants(kappa1=E, kappa2=kappa2, kappa3=kappa3, kappa4=kappa4)


def raw_fock_weights(a: float, b: float, d: float, n_max: int) -> np.ndarray:
    """Diagonal weights sqrt(4/D) Q_n for arbitrary (a, b, D), unvalidated.

    Q_n follows the real recurrence Q_0 = 1, Q_1 = b,
    (n+1) Q_{n+1} = (2n+1) b Q_n - n (b^2 - a^2) Q_{n-1}, which equals
    (b^2-a^2)^(n/2) P_n[b / sqrt(b^2-a^2)] without complex intermediates.
    Unphysical (a, b, D) combinations happily produce weights outside [0, 1];
    physical validation lives in fock_probabilities.
    """
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    if d <= 0:
        raise DomainError("normalization D must be positive")
    q = np.empty(n_max + 1)
    q[0] = 1.0
    if n_max >= 1:
        q[1] = b
    disc = b * b - a * a
    for n in range(1, n_max):
        q[n + 1] = ((2 * n + 1) * b * q[n] - n * disc * q[n - 1]) / (n + 1)
    return math.sqrt(4.0 / d) * q


def fock_probabilities(s: ShapeParams, n_max: int) -> FockDistribution:
    """Occupation probabilities rho_00..rho_{n_max n_max} of the Fock states.

    rho_nn = sqrt(4/D) (b^2-a^2)^(n/2) P_n[b / sqrt(b^2-a^2)], evaluated via
    the real Q_n recurrence (see raw_fock_weights).
    """
    weights = raw_fock_weights(s.a, s.b, s.D, n_max)
    total = float(weights.sum())
    return FockDistribution(probs=weights, truncation=n_max,
                            tail_bound=max(0.0, 1.0 - total))


def truncation_for_tolerance(s: ShapeParams, tol: float,
                             moment_power: int = 0) -> int:
    """Smallest truncation whose envelope tail stays below tol.

    Every weight obeys rho_nn <= sqrt(4/D) r^n with r = b + |a| (from the
    integral representation Q_n = (1/pi) int_0^pi (b + |a| cos t)^n dt), so
    the tail of sum (E_n)^moment_power rho_nn is bounded by the matching
    envelope sum.  Capped at 200 levels.
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    r = s.decay_ratio
    pref = math.sqrt(4.0 / s.D)
    eps = s.hbar_omega
    if r == 0.0:
        return 0
    for n_max in range(_HARD_TRUNCATION_CAP + 1):
        tail = 0.0
        term_scale = pref * r**(n_max + 1)
        n = n_max + 1
        while True:
            term = term_scale * ((n + 0.5) * eps)**moment_power
            tail += term
            if term < tol * 1e-3 and n > n_max + 10:
                break
            term_scale *= r
            n += 1
            if n > n_max + 100_000:
                break
        if tail < tol:
            return n_max
    return _HARD_TRUNCATION_CAP


def spectral_generating_function(f: FockDistribution, p: OscillatorParams,
                                 chi: float, tol: float = 1e-10) -> float:
    """Energy transform Z(chi) = sum_n exp(-chi E_n) rho_nn, E_n = (n+1/2) hbar omega.

    Raises:
        ToleranceError: if the truncation tail cannot guarantee the requested
            tolerance (the bound exp(-chi E_{N+1}) * tail_bound is used).
    """
    p._require_bound("the spectral energy transform")
    if chi < 0:
        raise DomainError("the Laplace variable chi must be non-negative")
    tail = f.tail_bound * math.exp(-chi * p.level_energy(f.truncation + 1))
    if tail > tol:
        raise ToleranceError(
            "Fock truncation too small for the requested tolerance",
            measured=tail, required=tol)
    n = np.arange(f.truncation + 1)
    energies = (n + 0.5) * p.quantum
    return float(np.exp(-chi * energies) @ f.probs)


def mean_and_variance_from_fock(f: FockDistribution, p: OscillatorParams,
                                tol: float = 1e-8) -> tuple[float, float]:
    """Mean energy and energy variance of the truncated Fock distribution.

    Raises:
        ToleranceError: when the distribution's tail bound exceeds tol.
    """
    k = cumulants_from_fock(f, p, n_max=2, tol=tol)
    return k[0], k[1]


def cumulants_from_fock(f: FockDistribution, p: OscillatorParams,
                        n_max: int = 4, tol: float = 1e-8) -> list[float]:
    """Energy cumulants up to order n_max from the spectral sums.

    The caller is responsible for a truncation deep enough that the
    moment-weighted tails are negligible (see truncation_for_tolerance with
    moment_power = n_max).

    Raises:
        ToleranceError: when the distribution's tail bound exceeds tol.
    """
    p._require_bound("spectral moments")
    if not 1 <= n_max <= 6:
        raise DomainError("cumulant order must lie in 1..6")
    if f.tail_bound > tol:
        raise ToleranceError("Fock truncation too small for spectral moments",
                             measured=f.tail_bound, required=tol)
    n = np.arange(f.truncation + 1)
    energies = (n + 0.5) * p.quantum
    moments = [float(energies**j @ f.probs) for j in range(n_max + 1)]
    kappas: list[float] = []
    for order in range(1, n_max + 1):
        k = moments[order]
        for j in range(1, order):
            k -= math.comb(order - 1, j - 1) * kappas[j - 1] * moments[order - j]
        kappas.append(k)
    return kappas


def spectral_transform_vars(s: ShapeParams, chi: float) -> SpectralTransformVars:
    """Legendre summation variables t = sqrt(b^2-a^2) e^(-chi hbar omega), z = b/sqrt(b^2-a^2).

    Raises:
        DomainError: when b^2 <= a^2, where the literal form needs complex
            intermediates (the Q_n recurrence covers that regime instead).
    """
    disc = s.b**2 - s.a**2
    if disc <= 0:
        raise DomainError("spectral transform variables need b^2 > a^2")
    root = math.sqrt(disc)
    return SpectralTransformVars(t=root * math.exp(-chi * s.hbar_omega),
                                 z=s.b / root, chi=chi)
