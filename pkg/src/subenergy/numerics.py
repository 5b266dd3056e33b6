"""Shared numerical kernels: orthogonal polynomials, Gaussian quadrature,
and central finite differences with Richardson extrapolation.

All functions here are pure and stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Literal, NamedTuple

import numpy as np

from .errors import DomainError

__all__ = [
    "QuadratureRule",
    "FiniteDifferenceScheme",
    "DerivativeEstimate",
    "gauss_hermite_rule",
    "gauss_legendre_rule",
    "hermite_poly",
    "legendre_poly",
    "double_factorial",
    "nth_derivative",
    "nth_log_derivative",
]

# Beyond this order the exact integer no longer fits the use cases served
# here (conversion to float overflows long before), so treat it as overflow.
_DOUBLE_FACTORIAL_MAX = 10_000


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights of a Gaussian quadrature rule.

    A rule of order n integrates polynomials of degree <= 2n - 1 exactly
    (against the weight function implied by ``kind``).
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: Literal["gauss_hermite", "gauss_legendre"]
    order: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.shape != (self.order,) or weights.shape != (self.order,):
            raise DomainError("nodes/weights must both have length `order`")
        if np.any(np.diff(nodes) <= 0):
            raise DomainError("quadrature nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise DomainError("quadrature weights must all be positive")
        if self.kind == "gauss_legendre" and abs(weights.sum() - 2.0) > 1e-12:
            raise DomainError("Gauss-Legendre weights on [-1, 1] must sum to 2")

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        """Integrate f against the rule's weight function."""
        return float(self.weights @ np.asarray(f(self.nodes), dtype=float))


def gauss_hermite_rule(order: int) -> QuadratureRule:
    """Gauss-Hermite rule for integrals of f(u) * exp(-u^2) over the real line."""
    if order < 1:
        raise DomainError("quadrature order must be >= 1")
    nodes, weights = np.polynomial.hermite.hermgauss(order)
    return QuadratureRule(nodes=nodes, weights=weights, kind="gauss_hermite",
                          order=order)


def gauss_legendre_rule(order: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]."""
    if order < 1:
        raise DomainError("quadrature order must be >= 1")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(nodes=nodes, weights=weights, kind="gauss_legendre",
                          order=order)


@dataclass(frozen=True)
class FiniteDifferenceScheme:
    """Central finite-difference scheme with Richardson step halving.

    ``step`` is the coarsest stencil spacing; two halvings are performed and
    the Richardson table corner is returned together with a step-halving
    error estimate.
    """

    step: float = 1e-2
    max_order: int = 6
    stencil_kind: Literal["central"] = "central"
    levels: int = field(default=3, repr=False)

    def __post_init__(self):
        if self.step <= 0:
            raise DomainError("finite-difference step must be positive")
        if not 1 <= self.max_order <= 6:
            raise DomainError("max_order must lie in 1..6")
        if self.stencil_kind != "central":
            raise DomainError("only central stencils are supported")
        if self.levels < 2:
            raise DomainError("Richardson extrapolation needs >= 2 levels")


class DerivativeEstimate(NamedTuple):
    value: float
    error: float


def hermite_poly(n: int, u):
    """Physicists' Hermite polynomial H_n(u).

    Evaluated through the stable three-term recurrence
    H_{n+1} = 2u H_n - 2n H_{n-1}; accepts scalars or arrays.
    """
    if n < 0:
        raise DomainError("polynomial degree must be non-negative")
    u = np.asarray(u, dtype=float)
    h_prev = np.ones_like(u)
    if n == 0:
        return float(h_prev) if h_prev.ndim == 0 else h_prev
    h_curr = 2.0 * u
    for k in range(1, n):
        h_prev, h_curr = h_curr, 2.0 * u * h_curr - 2.0 * k * h_prev
    return float(h_curr) if h_curr.ndim == 0 else h_curr


def legendre_poly(n: int, z):
    """Legendre polynomial P_n(z) via the Bonnet recurrence.

    (n+1) P_{n+1} = (2n+1) z P_n - n P_{n-1}; accepts scalars or arrays.
    """
    if n < 0:
        raise DomainError("polynomial degree must be non-negative")
    z = np.asarray(z, dtype=float)
    p_prev = np.ones_like(z)
    if n == 0:
        return float(p_prev) if p_prev.ndim == 0 else p_prev
    p_curr = z.copy()
    for k in range(1, n):
        p_prev, p_curr = p_curr, ((2 * k + 1) * z * p_curr - k * p_prev) / (k + 1)
    return float(p_curr) if p_curr.ndim == 0 else p_curr


def double_factorial(n: int) -> int:
    """n!! as an exact integer, with (-1)!! = 0!! = 1."""
    if n < 0:
        raise DomainError("double factorial needs n >= 0")
    if n > _DOUBLE_FACTORIAL_MAX:
        raise OverflowError(f"double factorial overflow guard: n > {_DOUBLE_FACTORIAL_MAX}")
    out = 1
    for k in range(n, 1, -2):
        out *= k
    return out


@lru_cache(maxsize=None)
def _stencil_weights(n: int, half_width: int) -> tuple[float, ...]:
    """Weights of the maximal-accuracy central stencil on offsets -hw..hw."""
    offsets = np.arange(-half_width, half_width + 1, dtype=float)
    m = offsets.size
    vander = np.vander(offsets, m, increasing=True).T
    rhs = np.zeros(m)
    rhs[n] = math.factorial(n)
    return tuple(np.linalg.solve(vander, rhs))


def _half_width(n: int) -> int:
    # 7-point stencils up to n = 4, then widen just enough to keep the
    # stencil longer than the derivative order.
    return max(3, (n + 3) // 2)


def _fd_once(f: Callable[[float], float], n: int, h: float) -> float:
    hw = _half_width(n)
    weights = _stencil_weights(n, hw)
    acc = 0.0
    for w, off in zip(weights, range(-hw, hw + 1)):
        if w != 0.0:
            acc += w * f(off * h)
    return acc / h**n


def _base_accuracy(n: int) -> int:
    # Maximal-order symmetric stencil: exact through degree 2*hw (even) or
    # 2*hw + 1 (odd n cancels one more), giving an even leading error power.
    p = 2 * _half_width(n) + 1 - n
    return p + (p % 2)


def _richardson(f: Callable[[float], float], n: int,
                scheme: FiniteDifferenceScheme) -> DerivativeEstimate:
    vals = [_fd_once(f, n, scheme.step / 2**i) for i in range(scheme.levels)]
    p = _base_accuracy(n)
    table = vals
    for _ in range(scheme.levels - 1):
        fac = 2.0**p
        table = [(fac * table[i + 1] - table[i]) / (fac - 1.0)
                 for i in range(len(table) - 1)]
        p += 2
    # the last pre-corner entry is the next-best estimate
    prev = vals[-1] if scheme.levels == 2 else _corner_minus_one(vals, _base_accuracy(n))
    err = abs(table[0] - prev)
    return DerivativeEstimate(value=table[0], error=err)


def _corner_minus_one(vals: list[float], p0: int) -> float:
    table = vals[:-1]
    p = p0
    for _ in range(len(vals) - 2):
        fac = 2.0**p
        table = [(fac * table[i + 1] - table[i]) / (fac - 1.0)
                 for i in range(len(table) - 1)]
        p += 2
    return table[0]


def nth_derivative(f: Callable[[float], float], n: int,
                   scheme: FiniteDifferenceScheme = FiniteDifferenceScheme(),
                   ) -> DerivativeEstimate:
    """n-th derivative of f at 0 by Richardson-extrapolated central differences."""
    if not 1 <= n <= scheme.max_order:
        raise DomainError(f"derivative order {n} outside 1..{scheme.max_order}")
    return _richardson(f, n, scheme)


def nth_log_derivative(f: Callable[[float], float], n: int,
                       scheme: FiniteDifferenceScheme = FiniteDifferenceScheme(),
                       ) -> DerivativeEstimate:
    """Cumulant-style derivative (-1)^n d^n/dx^n ln f(x) at x = 0.

    f must be strictly positive on the stencil; the returned ``error`` is a
    step-halving estimate for the extrapolated value.

    Raises:
        DomainError: if f is non-positive anywhere on the stencil.
    """
    if not 1 <= n <= scheme.max_order:
        raise DomainError(f"derivative order {n} outside 1..{scheme.max_order}")

    def log_f(x: float) -> float:
        val = f(x)
        if not val > 0.0:
            raise DomainError(f"generating function non-positive at x = {x:g}: {val!r}")
        return math.log(val)

    est = _richardson(log_f, n, scheme)
    sign = -1.0 if n % 2 else 1.0
    return DerivativeEstimate(value=sign * est.value, error=est.error)
