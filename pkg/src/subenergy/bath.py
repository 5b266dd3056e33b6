"""Ohmic-environment map from coupling strength to oscillator shape variables.

In the under-damped regime the ohmic bath replaces the free shape variables
(x, y) with functions of the dimensionless coupling alpha (measured in units
of the oscillator frequency) and the cutoff ratio omega_c / omega:

    x(alpha) = (1 - (2/pi) arctan(alpha / sqrt(1 - alpha^2))) / sqrt(1 - alpha^2)
    y(alpha) = (1 - 2 alpha^2) x(alpha) + (4 alpha / pi) ln(omega_c / omega)

Sweeping alpha traces a trajectory of occupation probabilities over the
(x, y) surface; the default cutoff ratio is 10.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .oscillator import (ShapeParams, fock_probabilities, shape_purity,
                         truncation_for_tolerance)

__all__ = [
    "DEFAULT_CUTOFF_RATIO",
    "OhmicBathParams",
    "OhmicTrajectoryRow",
    "ohmic_x",
    "ohmic_y",
    "ohmic_trajectory",
]

DEFAULT_CUTOFF_RATIO = 10.0


@dataclass(frozen=True)
class OhmicBathParams:
    """Coupling alpha in [0, 1) and cutoff ratio omega_c / omega > 1."""

    alpha: float
    cutoff_ratio: float = DEFAULT_CUTOFF_RATIO

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise DomainError(
                f"alpha = {self.alpha:g} outside the under-damped range [0, 1)")
        if self.cutoff_ratio <= 1.0:
            raise DomainError("cutoff_ratio must exceed 1")


@dataclass(frozen=True)
class OhmicTrajectoryRow:
    alpha: float
    x: float
    y: float
    purity: float
    probs: np.ndarray
    tail_bound: float


def ohmic_x(alpha: float) -> float:
    """Position-variance shape variable x(alpha) of the ohmic bath.

    Evaluated as (2/pi) atan2(sqrt(1-alpha^2), alpha) / sqrt(1-alpha^2),
    which is algebraically identical but avoids the cancellation of the
    printed 1 - (2/pi) arctan form as alpha -> 1.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError(
            f"alpha = {alpha:g} outside the under-damped range [0, 1)")
    if alpha == 0.0:
        return 1.0
    s = math.sqrt((1.0 - alpha) * (1.0 + alpha))
    return (2.0 / math.pi) * math.atan2(s, alpha) / s


def ohmic_y(p: OhmicBathParams) -> float:
    """Momentum-variance shape variable y(alpha) at the given cutoff ratio."""
    if p.alpha == 0.0:
        return 1.0
    return ((1.0 - 2.0 * p.alpha**2) * ohmic_x(p.alpha)
            + (4.0 * p.alpha / math.pi) * math.log(p.cutoff_ratio))


def ohmic_trajectory(p_grid: Sequence[OhmicBathParams], n_max: int,
                     prob_tol: float = 1e-10) -> list[OhmicTrajectoryRow]:
    """Occupation-probability trajectory over an alpha grid at a shared cutoff.

    Each row combines x(alpha), y(alpha), the purity 1/sqrt(xy), and the
    first n_max + 1 Fock probabilities (computed at a truncation deep enough
    that the reported tail_bound stays below prob_tol).

    Raises:
        DomainError: if the grid is unsorted, mixes cutoffs, or any row's
            shape variables violate the uncertainty bound (the offending
            alpha is named).
    """
    if not p_grid:
        raise DomainError("alpha grid must not be empty")
    if n_max < 0:
        raise DomainError("n_max must be non-negative")
    alphas = [p.alpha for p in p_grid]
    if any(a2 <= a1 for a1, a2 in zip(alphas, alphas[1:])):
        raise DomainError("alpha grid must be strictly increasing")
    cutoffs = {p.cutoff_ratio for p in p_grid}
    if len(cutoffs) != 1:
        raise DomainError("all grid points must share one cutoff_ratio")

    rows: list[OhmicTrajectoryRow] = []
    for p in p_grid:
        x = ohmic_x(p.alpha)
        y = ohmic_y(p)
        try:
            shape = ShapeParams(x=x, y=y)
        except DomainError as exc:
            raise DomainError(
                f"trajectory aborted at alpha = {p.alpha:g}: {exc}") from exc
        deep = max(n_max, truncation_for_tolerance(shape, prob_tol))
        full = fock_probabilities(shape, deep)
        if full.tail_bound > prob_tol:
            # the 200-level truncation cap bites for extreme shapes
            warnings.warn(
                f"alpha = {p.alpha:g}: truncation cap leaves tail "
                f"{full.tail_bound:.2e} above the requested {prob_tol:.0e}",
                stacklevel=2)
        rows.append(OhmicTrajectoryRow(
            alpha=p.alpha, x=x, y=y, purity=shape_purity(shape),
            probs=full.probs[:n_max + 1].copy(), tail_bound=full.tail_bound))

    # Purity decreases with alpha whenever ln(cutoff_ratio) > 1; smaller
    # cutoffs can raise it near alpha = 0, which is worth flagging.
    purities = [r.purity for r in rows]
    if any(b > a + 1e-12 for a, b in zip(purities, purities[1:])):
        warnings.warn("purity is not monotonically non-increasing along this "
                      "trajectory (expected only for cutoff_ratio > e)",
                      stacklevel=2)
    return rows
