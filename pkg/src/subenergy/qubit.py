"""Two-level sub-system energetics.

A qubit with Hamiltonian H = (epsilon/2) sigma_z + (delta/2) sigma_x coupled
to an unmonitored environment ends up, at zero temperature, in a mixed
reduced state.  Everything measurable about its energy statistics follows
from the Bloch vector and the level splitting: the purity, the mean energy,
the two-point energy distribution, and the full characteristic function.

Logarithms in the weak-coupling and crossover formulas are natural logs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "QubitParams",
    "BlochVector",
    "TwoLevelEnergyDistribution",
    "ThermalCrossoverQuery",
    "PersistentCurrentReading",
    "bloch_purity",
    "mean_energy",
    "characteristic_function",
    "energy_distribution",
    "cumulants_from_two_levels",
    "p_up_from_persistent_current",
    "weak_coupling_p_up",
    "thermal_occupation",
    "crossover_temperature",
]

_BLOCH_SLACK = 1e-12


@dataclass(frozen=True)
class QubitParams:
    """Bias epsilon, tunneling delta, and hbar; the splitting is hbar*omega."""

    epsilon: float
    delta: float
    hbar: float = 1.0

    def __post_init__(self):
        if self.hbar <= 0:
            raise DomainError("hbar must be positive")
        if self.epsilon == 0.0 and self.delta == 0.0:
            raise DomainError("epsilon and delta cannot both vanish (omega > 0 required)")

    @property
    def omega(self) -> float:
        return math.hypot(self.epsilon, self.delta) / self.hbar

    @property
    def level_splitting(self) -> float:
        """hbar * omega, the gap between the two energy eigenvalues."""
        return math.hypot(self.epsilon, self.delta)


@dataclass(frozen=True)
class BlochVector:
    """Pauli expectation values (x, y, z); must lie in the closed Bloch ball."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm_squared > 1.0 + _BLOCH_SLACK:
            raise DomainError(
                f"Bloch vector norm^2 = {self.norm_squared:.15g} exceeds 1: "
                "not a physical qubit state")

    @property
    def norm_squared(self) -> float:
        return self.x**2 + self.y**2 + self.z**2


@dataclass(frozen=True)
class TwoLevelEnergyDistribution:
    """Weights of the two energy delta peaks at -+ hbar*omega/2."""

    energy_minus: float
    energy_plus: float
    p_down: float
    p_up: float

    def __post_init__(self):
        if not (-1e-12 <= self.p_down <= 1 + 1e-12 and -1e-12 <= self.p_up <= 1 + 1e-12):
            raise DomainError("probabilities must lie in [0, 1]")
        if abs(self.p_down + self.p_up - 1.0) > 1e-12:
            raise DomainError("probabilities must sum to 1")
        if self.energy_plus != -self.energy_minus:
            raise DomainError("levels must be symmetric: energy_plus == -energy_minus")

    @property
    def mean(self) -> float:
        return self.p_down * self.energy_minus + self.p_up * self.energy_plus


@dataclass(frozen=True)
class ThermalCrossoverQuery:
    """Inputs for the crossover-temperature comparison.

    ``gap`` is the level splitting E_2 - E_1, ``alpha`` the dimensionless
    coupling, and ``cutoff_ratio`` the bath cutoff over the tunneling
    amplitude.  A positive crossover temperature additionally needs
    alpha * ln(cutoff_ratio) in (0, 1); that window is checked by
    ``crossover_temperature`` so the error message can explain it.
    """

    gap: float
    alpha: float
    cutoff_ratio: float
    boltzmann_k: float = 1.0

    def __post_init__(self):
        if self.gap <= 0:
            raise DomainError("gap must be positive")
        if self.alpha < 0:
            raise DomainError("alpha must be non-negative")
        if self.cutoff_ratio <= 1:
            raise DomainError("cutoff_ratio must exceed 1")
        if self.boltzmann_k <= 0:
            raise DomainError("boltzmann_k must be positive")

    @property
    def weak_coupling_probability(self) -> float:
        return self.alpha * math.log(self.cutoff_ratio)


@dataclass(frozen=True)
class PersistentCurrentReading:
    """Measured ring current I and its uncoupled reference I_0; flux is metadata."""

    current: float
    current_uncoupled: float
    flux: float | None = None

    def __post_init__(self):
        if self.current_uncoupled == 0.0:
            raise DomainError("uncoupled persistent current must be nonzero")


def bloch_purity(b: BlochVector) -> float:
    """Purity Tr rho^2 = (1 + x^2 + y^2 + z^2) / 2 of the qubit state."""
    return min(1.0, 0.5 * (1.0 + b.norm_squared))


def mean_energy(p: QubitParams, b: BlochVector) -> float:
    """Average sub-system energy (epsilon z + delta x) / 2."""
    return 0.5 * (p.epsilon * b.z + p.delta * b.x)


def characteristic_function(p: QubitParams, b: BlochVector, chi: float) -> complex:
    """Characteristic function <exp(-i chi H)> of the qubit energy.

    Equals cos(hbar*omega*chi/2) - i sin(hbar*omega*chi/2) * (epsilon*z + delta*x)
    / (hbar*omega); its inverse Fourier transform is the two-peak distribution.
    """
    half = 0.5 * p.level_splitting * chi
    ratio = (p.epsilon * b.z + p.delta * b.x) / p.level_splitting
    return complex(math.cos(half), -math.sin(half) * ratio)


def energy_distribution(p: QubitParams, mean_e: float) -> TwoLevelEnergyDistribution:
    """Two-point energy distribution reconstructed from the mean energy.

    The excited-state weight is (1 + mean_e / (hbar*omega/2)) / 2; an
    isolated qubit in its ground state (mean_e = -hbar*omega/2) gives
    p_up = 0 exactly.

    Raises:
        DomainError: if |mean_e| exceeds hbar*omega/2 (no density matrix
            can produce such a mean).
    """
    half_gap = 0.5 * p.level_splitting
    if abs(mean_e) > half_gap + 1e-12:
        raise DomainError(
            f"|mean energy| = {abs(mean_e):.15g} exceeds hbar*omega/2 = {half_gap:.15g}")
    p_up = 0.5 * (1.0 + mean_e / half_gap)
    p_up = min(1.0, max(0.0, p_up))
    return TwoLevelEnergyDistribution(
        energy_minus=-half_gap, energy_plus=half_gap,
        p_down=1.0 - p_up, p_up=p_up)


def cumulants_from_two_levels(d: TwoLevelEnergyDistribution, n_max: int) -> list[float]:
    """First n_max energy cumulants of the two-point distribution.

    Computed from raw moments through the standard recursion
    kappa_n = m_n - sum_{j<n} C(n-1, j-1) kappa_j m_{n-j}, which matches
    differentiating ln <exp(-chi H)> term by term.
    """
    if not 1 <= n_max <= 6:
        raise DomainError("cumulant order must lie in 1..6")
    moments = [d.p_down * d.energy_minus**j + d.p_up * d.energy_plus**j
               for j in range(n_max + 1)]
    kappas: list[float] = []
    for n in range(1, n_max + 1):
        k = moments[n]
        for j in range(1, n):
            k -= math.comb(n - 1, j - 1) * kappas[j - 1] * moments[n - j]
        kappas.append(k)
    return kappas


def p_up_from_persistent_current(r: PersistentCurrentReading) -> float:
    """Excited-state probability (1 - I/I_0) / 2 from a persistent-current reading.

    Readings with |I/I_0| > 1 are unphysical for this mapping; the result is
    clamped into [0, 1] and a warning reports the raw value.
    """
    raw = 0.5 * (1.0 - r.current / r.current_uncoupled)
    if raw < 0.0 or raw > 1.0:
        warnings.warn(
            f"persistent-current ratio outside [-1, 1]; raw probability {raw:.6g} "
            "clamped into [0, 1]", stacklevel=2)
        return min(1.0, max(0.0, raw))
    return raw


def weak_coupling_p_up(alpha: float, delta: float, omega_c: float) -> float:
    """Weak-coupling excited-state probability alpha * ln(omega_c / delta).

    Valid in the perturbative regime; a warning is attached when the result
    exceeds 0.1.

    Raises:
        DomainError: if omega_c <= delta (the formula would go negative) or
            inputs are non-positive.
    """
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    if delta <= 0:
        raise DomainError("delta must be positive")
    if omega_c <= delta:
        raise DomainError("omega_c must exceed delta (probability would be negative)")
    p = alpha * math.log(omega_c / delta)
    if p > 0.1:
        warnings.warn(
            f"weak-coupling p_up = {p:.4g} > 0.1: outside the perturbative regime",
            stacklevel=2)
    return p


def thermal_occupation(gap: float, temperature: float, k: float = 1.0) -> float:
    """Low-temperature thermal excitation probability exp(-gap / (k T))."""
    if gap <= 0:
        raise DomainError("gap must be positive")
    if temperature <= 0:
        raise DomainError("temperature must be positive")
    if k <= 0:
        raise DomainError("Boltzmann constant must be positive")
    return math.exp(-gap / (k * temperature))


def crossover_temperature(q: ThermalCrossoverQuery) -> float:
    """Temperature T* where thermal excitation matches the coupling-induced one.

    k T* = -gap / ln(alpha * ln(cutoff_ratio)).  Defined only while
    alpha * ln(cutoff_ratio) lies strictly between 0 and 1; by construction
    thermal_occupation(gap, T*) reproduces the weak-coupling probability.
    """
    p = q.weak_coupling_probability
    if p <= 0.0:
        raise DomainError(
            "alpha * ln(cutoff_ratio) must be positive: with no coupling-induced "
            "excitation there is no crossover temperature")
    if p >= 1.0:
        raise DomainError(
            f"alpha * ln(cutoff_ratio) = {p:.6g} >= 1: outside the weak-coupling "
            "window, the crossover formula does not apply")
    return -q.gap / (q.boltzmann_k * math.log(p))
