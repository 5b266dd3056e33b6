"""Named self-verification suites.

Each check compares two or more independent computation routes (closed form,
finite differences, spectral sums, quadrature, exact diagonalization) and
reports the largest error it measured against its tolerance.  The CLI's
``verify-all`` and ``oracle-verify`` commands run these; the acceptance test
suite asserts them.

Checks are deterministic: random inputs come from a seeded generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from . import bath, numerics, oracle, oscillator, qubit

__all__ = ["CheckResult", "CHECKS", "ORACLE_CHECKS", "run_checks",
           "select_names"]

_DEFAULT_SEED = 20247


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""


def _random_shapes(rng: np.random.Generator, count: int,
                   lo: float = 1.5, hi: float = 5.0) -> list[oscillator.ShapeParams]:
    xs = rng.uniform(lo, hi, count)
    ys = rng.uniform(lo, hi, count)
    return [oscillator.shape_from_xy(float(x), float(y)) for x, y in zip(xs, ys)]


def _result(name: str, max_error: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name=name, passed=bool(max_error <= tol),
                       max_error=float(max_error), tolerance=float(tol),
                       detail=detail)


# ---------------------------------------------------------------------------
# numerics

_HERMITE_COEFFS = {
    0: [1], 1: [0, 2], 2: [-2, 0, 4], 3: [0, -12, 0, 8],
    4: [12, 0, -48, 0, 16], 5: [0, 120, 0, -160, 0, 32],
    6: [-120, 0, 720, 0, -480, 0, 64],
}
_LEGENDRE_COEFFS = {
    0: [1.0], 1: [0.0, 1.0], 2: [-0.5, 0.0, 1.5], 3: [0.0, -1.5, 0.0, 2.5],
    4: [3 / 8, 0.0, -15 / 4, 0.0, 35 / 8],
    5: [0.0, 15 / 8, 0.0, -35 / 4, 0.0, 63 / 8],
    6: [-5 / 16, 0.0, 105 / 16, 0.0, -315 / 16, 0.0, 231 / 16],
}


def _check_polynomial_recurrences(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    pts = rng.uniform(-2.0, 2.0, 40)
    for n in range(7):
        h_ref = np.polynomial.polynomial.polyval(pts, _HERMITE_COEFFS[n])
        p_ref = np.polynomial.polynomial.polyval(pts * 0.5, _LEGENDRE_COEFFS[n])
        h_val = numerics.hermite_poly(n, pts)
        p_val = numerics.legendre_poly(n, pts * 0.5)
        scale_h = np.maximum(1.0, np.abs(h_ref))
        worst = max(worst, float(np.max(np.abs(h_val - h_ref) / scale_h)),
                    float(np.max(np.abs(p_val - p_ref))))
    return _result("hermite-legendre-recurrences", worst, tol)


def _check_hermite_moments(tol: float, rng: np.random.Generator) -> CheckResult:
    order = 64
    rule = numerics.gauss_hermite_rule(order)
    worst = 0.0
    for k in range(order):  # degree 2k <= 2*order - 1 integrates exactly
        approx = rule.integrate(lambda u: u**(2 * k))
        exact = math.gamma(k + 0.5)
        worst = max(worst, abs(approx - exact) / max(1.0, exact))
    return _result("quadrature-hermite-moments", worst, tol)


def _check_legendre_exactness(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for order in (8, 16, 64):
        rule = numerics.gauss_legendre_rule(order)
        worst = max(worst, abs(rule.weights.sum() - 2.0))
        for deg in range(0, 2 * order):
            approx = rule.integrate(lambda u: u**deg)
            exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
            worst = max(worst, abs(approx - exact))
    return _result("quadrature-legendre-exactness", worst, tol)


def _check_log_derivative(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(10):
        coeffs = rng.uniform(-1.0, 1.0, 7)
        coeffs[0] = 0.0

        def f(c, co=coeffs):
            return math.exp(np.polynomial.polynomial.polyval(c, co))

        for n in range(1, 7):
            # ln f is the polynomial itself, so truncation vanishes and a
            # larger step only suppresses the h^-n roundoff amplification
            step = 0.05 if n <= 4 else 0.4
            est = numerics.nth_log_derivative(
                f, n, numerics.FiniteDifferenceScheme(step=step))
            expected = (-1.0)**n * math.factorial(n) * coeffs[n]
            worst = max(worst, abs(est.value - expected))
    return _result("log-derivative-polynomials", worst, tol)


# ---------------------------------------------------------------------------
# qubit

def _random_bloch(rng: np.random.Generator) -> qubit.BlochVector:
    v = rng.normal(size=3)
    v *= rng.uniform(0.0, 1.0)**(1 / 3) / np.linalg.norm(v)
    return qubit.BlochVector(x=float(v[0]), y=float(v[1]), z=float(v[2]))


def _check_qubit_distribution(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        params = qubit.QubitParams(epsilon=float(rng.uniform(-2, 2)),
                                   delta=float(rng.uniform(0.1, 2)))
        b = _random_bloch(rng)
        mean = qubit.mean_energy(params, b)
        dist = qubit.energy_distribution(params, mean)
        worst = max(worst, abs(dist.p_down + dist.p_up - 1.0),
                    abs(dist.mean - mean))
    iso = qubit.energy_distribution(qubit.QubitParams(epsilon=0.0, delta=1.0), -0.5)
    worst = max(worst, abs(iso.p_up))
    return _result("qubit-distribution-moments", worst, tol)


def _check_qubit_inverse_transform(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(10):
        params = qubit.QubitParams(epsilon=float(rng.uniform(-2, 2)),
                                   delta=float(rng.uniform(0.1, 2)))
        b = _random_bloch(rng)
        mean = qubit.mean_energy(params, b)
        dist = qubit.energy_distribution(params, mean)
        gap = params.level_splitting
        period = 2.0 * math.pi / gap
        grid = np.linspace(0.0, period, 257)[:-1]
        z_vals = np.array([qubit.characteristic_function(params, b, c) for c in grid])
        for energy, weight in ((dist.energy_minus, dist.p_down),
                               (dist.energy_plus, dist.p_up)):
            projected = np.mean(z_vals * np.exp(1j * grid * energy))
            worst = max(worst, abs(projected - weight))
    return _result("qubit-inverse-transform", worst, tol)


def _check_qubit_cumulants(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(10):
        params = qubit.QubitParams(epsilon=float(rng.uniform(-1.5, 1.5)),
                                   delta=float(rng.uniform(0.2, 1.5)))
        b = _random_bloch(rng)
        dist = qubit.energy_distribution(params, qubit.mean_energy(params, b))
        kappas = qubit.cumulants_from_two_levels(dist, 4)

        def z_real(chi, d=dist):
            return (d.p_down * math.exp(-chi * d.energy_minus)
                    + d.p_up * math.exp(-chi * d.energy_plus))

        for n in range(1, 5):
            step = {1: 0.02, 2: 0.02, 3: 0.05, 4: 0.08}[n] / max(1.0, params.level_splitting)
            est = numerics.nth_log_derivative(
                z_real, n, numerics.FiniteDifferenceScheme(step=step))
            worst = max(worst, abs(est.value - kappas[n - 1]) / max(1.0, abs(kappas[n - 1])))
    return _result("qubit-cumulant-consistency", worst, tol)


def _check_qubit_purity(tol: float, rng: np.random.Generator) -> CheckResult:
    sigma = [np.eye(2), np.array([[0, 1], [1, 0]], dtype=complex),
             np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]], dtype=complex)]
    worst = 0.0
    for _ in range(50):
        b = _random_bloch(rng)
        rho = 0.5 * (sigma[0] + b.x * sigma[1] + b.y * sigma[2] + b.z * sigma[3])
        direct = float(np.trace(rho @ rho).real)
        worst = max(worst, abs(qubit.bloch_purity(b) - direct))
    return _result("qubit-purity-formula", worst, tol)


def _check_crossover_roundtrip(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for gap in (0.5, 1.0, 2.0, 5.0):
        for alpha in (1e-4, 1e-3, 1e-2, 0.05):
            for ratio in (5.0, 10.0, 100.0, 1e4):
                query = qubit.ThermalCrossoverQuery(gap=gap, alpha=alpha,
                                                    cutoff_ratio=ratio)
                p_weak = query.weak_coupling_probability
                if not 0.0 < p_weak < 1.0:
                    continue
                t_star = qubit.crossover_temperature(query)
                p_thermal = qubit.thermal_occupation(gap, t_star, query.boltzmann_k)
                worst = max(worst, abs(p_thermal - p_weak))
    return _result("crossover-roundtrip", worst, tol)


# ---------------------------------------------------------------------------
# oscillator

_FD_STEPS = {1: 0.02, 2: 0.02, 3: 0.05, 4: 0.08}


def _fd_cumulants(shape: oscillator.ShapeParams, n_max: int = 4) -> list[float]:
    scale = max(shape.E, shape.hbar_omega)
    out = []
    for n in range(1, n_max + 1):
        scheme = numerics.FiniteDifferenceScheme(step=_FD_STEPS[n] / scale)
        est = numerics.nth_log_derivative(
            lambda c: oscillator._generating_function_any_chi(shape, c), n, scheme)
        out.append(est.value)
    return out


def _check_cumulant_fd(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for shape in _random_shapes(rng, 20):
        closed = oscillator.cumulants_closed_form(shape)
        fd = _fd_cumulants(shape)
        for ref, est in zip(closed, fd):
            worst = max(worst, abs(est - ref) / abs(ref))
    return _result("cumulant-triple-closed-vs-fd", worst, tol)


def _check_cumulant_spectral(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    params = oscillator.OscillatorParams(m=1.0, omega=1.0)
    for shape in _random_shapes(rng, 20):
        closed = oscillator.cumulants_closed_form(shape)
        n_cut = oscillator.truncation_for_tolerance(shape, 1e-14, moment_power=4)
        dist = oscillator.fock_probabilities(shape, n_cut)
        spectral = oscillator.cumulants_from_fock(dist, params, n_max=4)
        for ref, est in zip(closed, spectral):
            worst = max(worst, abs(est - ref) / abs(ref))
    return _result("cumulant-triple-closed-vs-spectral", worst, tol)


def _check_cumulant_isolated(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for eps in (0.5, 1.0, 1.7):
        shape = oscillator.shape_from_xy(1.0, 1.0, hbar_omega=eps)
        closed = oscillator.cumulants_closed_form(shape)
        worst = max(worst, abs(closed.kappa2), abs(closed.kappa3), abs(closed.kappa4))
    return _result("cumulant-triple-isolated", worst, tol)


def _check_generating_spectral(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    params = oscillator.OscillatorParams(m=1.0, omega=1.0)
    for shape in _random_shapes(rng, 20):
        n_cut = oscillator.truncation_for_tolerance(shape, 1e-13)
        dist = oscillator.fock_probabilities(shape, n_cut)
        for chi in (0.0, 0.3, 1.0, 2.5):
            spectral = oscillator.spectral_generating_function(dist, params, chi,
                                                               tol=1e-11)
            closed = oscillator.generating_function(shape, chi)
            worst = max(worst, abs(spectral - closed))
    return _result("generating-equivalence-spectral", worst, tol)


def _check_generating_quadrature(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    params = oscillator.OscillatorParams(m=1.0, omega=1.0)
    for shape in _random_shapes(rng, 20):
        moments = oscillator.shape_to_moments(shape, params)
        chi = float(rng.uniform(0.2, 2.0))
        quad = oracle.z_via_quadrature(params, moments, chi)
        closed = oscillator.generating_function(shape, chi)
        worst = max(worst, abs(quad - closed))
    return _result("generating-equivalence-quadrature", worst, tol)


_FOCK_TABLE: dict[int, Callable[[float, float], float]] = {
    0: lambda a, b: 1.0,
    1: lambda a, b: b,
    2: lambda a, b: a**2 / 2 + b**2,
    3: lambda a, b: 3 * a**2 * b / 2 + b**3,
    4: lambda a, b: 3 * a**4 / 8 + 3 * a**2 * b**2 + b**4,
    5: lambda a, b: 15 * a**4 * b / 8 + 5 * a**2 * b**3 + b**5,
    6: lambda a, b: 5 * a**6 / 16 + 45 * a**4 * b**2 / 8 + 15 * a**2 * b**4 / 2 + b**6,
    7: lambda a, b: 35 * a**6 * b / 16 + 105 * a**4 * b**3 / 8 + 21 * a**2 * b**5 / 2 + b**7,
}


def _check_fock_table(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(100):
        a = float(rng.uniform(-0.9, 0.9))
        b = float(rng.uniform(0.0, 0.9))
        weights = oscillator.raw_fock_weights(a, b, 4.0, 7)  # prefactor sqrt(4/D) = 1
        for n, poly in _FOCK_TABLE.items():
            worst = max(worst, abs(weights[n] - poly(a, b)))
    return _result("fock-table-polynomials", worst, tol)


def _check_fock_normalization(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    grid = np.linspace(1.0, 10.0, 10)
    for x in grid:
        for y in grid:
            shape = oscillator.shape_from_xy(float(x), float(y))
            n_cut = oscillator.truncation_for_tolerance(shape, 1e-11)
            dist = oscillator.fock_probabilities(shape, n_cut)
            worst = max(worst, abs(1.0 - float(dist.probs.sum())))
    return _result("fock-normalization-grid", worst, tol)


def _check_fock_quadrature(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    params = oscillator.OscillatorParams(m=1.0, omega=1.0)
    for shape in _random_shapes(rng, 4):
        moments = oscillator.shape_to_moments(shape, params)
        dist = oscillator.fock_probabilities(shape, 10)
        for n in range(11):
            quad = oracle.rho_nn_via_quadrature(params, moments, n)
            worst = max(worst, abs(quad - float(dist.probs[n])))
    return _result("fock-quadrature", worst, tol)


def _check_fock_weak_coupling(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(20):
        dx, dy = rng.uniform(1e-4, 1e-3, 2)
        shape = oscillator.shape_from_xy(1.0 + float(dx), 1.0 + float(dy))
        rho11 = float(oscillator.fock_probabilities(shape, 1).probs[1])
        linear = (dx + dy) / 4.0
        worst = max(worst, abs(rho11 - linear) / max(dx, dy)**2)
    return _result("fock-weak-coupling-linear", worst, tol)


def _check_purity_quadrature(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    params = oscillator.OscillatorParams(m=1.0, omega=1.0)
    for shape in _random_shapes(rng, 20):
        moments = oscillator.shape_to_moments(shape, params)
        quad = oracle.purity_via_quadrature(params, moments)
        closed = oscillator.purity(moments, params.hbar)
        worst = max(worst, abs(quad - closed))
    return _result("purity-closed-vs-quadrature", worst, tol)


def _check_purity_identity(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    params = oscillator.OscillatorParams(m=1.3, omega=0.7, hbar=1.0)
    for shape in _random_shapes(rng, 30):
        moments = oscillator.shape_to_moments(shape, params)
        direct = oscillator.purity(moments, params.hbar)
        via_xy = 1.0 / math.sqrt(shape.x * shape.y)
        via_a = 1.0 / (2.0 * math.sqrt(shape.A))
        worst = max(worst, abs(direct - via_xy), abs(direct - via_a))
    return _result("purity-shape-identity", worst, tol)


def _check_free_particle_limit(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    eps = 1e-4
    for _ in range(10):
        p2 = float(rng.uniform(0.5, 2.0))
        q2 = float(rng.uniform(0.5, 2.0))
        params = oscillator.OscillatorParams(m=1.0, omega=eps)
        shape = oscillator.moments_to_shape(
            params, oscillator.GaussianMoments(q2=q2, p2=p2))
        for chi in (0.1, 0.5, 1.0, 2.0):
            lhs = oscillator.generating_function(shape, chi)
            rhs = oscillator.generating_function_free(p2, 1.0, chi)
            worst = max(worst, abs(lhs - rhs))
    return _result("free-particle-limit", worst, tol)


def _check_free_particle_wick(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for p2 in (0.7, 1.0, 1.6):
        m = 1.0
        scheme1 = numerics.FiniteDifferenceScheme(step=0.02)
        kappas = [numerics.nth_log_derivative(
            lambda c: oscillator.generating_function_free(p2, m, c) if c >= 0
            else (1.0 + c * p2 / m)**-0.5,
            n, scheme1 if n <= 2 else numerics.FiniteDifferenceScheme(step=0.05)).value
            for n in (1, 2, 3)]
        # moments from cumulants
        m1 = kappas[0]
        m2 = kappas[1] + m1**2
        m3 = kappas[2] + 3 * kappas[1] * m1 + m1**3
        for n, moment in enumerate((m1, m2, m3), start=1):
            wick = numerics.double_factorial(2 * n - 1) * (p2 / (2 * m))**n
            worst = max(worst, abs(moment - wick) / wick)
    return _result("free-particle-wick", worst, tol)


# ---------------------------------------------------------------------------
# bath

def _check_ohmic_boundary(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = max(abs(bath.ohmic_x(0.0) - 1.0),
                abs(bath.ohmic_y(bath.OhmicBathParams(alpha=0.0)) - 1.0),
                abs(bath.ohmic_x(0.5) - 4.0 / (3.0 * math.sqrt(3.0))))
    rows = bath.ohmic_trajectory([bath.OhmicBathParams(alpha=0.0)], n_max=2)
    worst = max(worst, abs(rows[0].purity - 1.0), abs(rows[0].probs[0] - 1.0),
                abs(rows[0].probs[1]))
    return _result("ohmic-boundary-values", worst, tol)


def _check_ohmic_y_value(tol: float, rng: np.random.Generator) -> CheckResult:
    # frozen from the direct evaluation 0.5 * x(0.5) + (2/pi) ln 10
    expected = 1.8507713772186060
    measured = abs(bath.ohmic_y(bath.OhmicBathParams(alpha=0.5, cutoff_ratio=10.0))
                   - expected)
    return _result("ohmic-y-cutoff10", measured, tol)


def _check_ohmic_monotonic(tol: float, rng: np.random.Generator) -> CheckResult:
    import warnings as _warnings
    grid = [bath.OhmicBathParams(alpha=a, cutoff_ratio=10.0)
            for a in np.linspace(0.0, 0.9, 10)]
    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")
        rows = bath.ohmic_trajectory(grid, n_max=3)
    purities = np.array([r.purity for r in rows])
    worst = float(max(0.0, np.max(np.diff(purities))))
    detail = ""
    if worst > tol:
        detail = ("known edge effect: x(a)*y(a) at cutoff 10 peaks near "
                  "a = 0.823 and dips ~1e-3 by a = 0.9, so the purity ticks "
                  "up ~5e-4 over the last grid step (exact continuum "
                  "integrals show the same turn); see README")
    return _result("ohmic-purity-monotonic", worst, tol, detail)


def _check_ohmic_cutoff_sensitivity(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for alpha in (0.1, 0.4, 0.7):
        for r1, r2 in ((5.0, 20.0), (10.0, 100.0)):
            y1 = bath.ohmic_y(bath.OhmicBathParams(alpha=alpha, cutoff_ratio=r1))
            y2 = bath.ohmic_y(bath.OhmicBathParams(alpha=alpha, cutoff_ratio=r2))
            slope = (y2 - y1) / math.log(r2 / r1)
            worst = max(worst, abs(slope - 4.0 * alpha / math.pi))
    return _result("ohmic-cutoff-sensitivity", worst, tol)


# ---------------------------------------------------------------------------
# exact diagonalization and networks

def _ed_base_model() -> oracle.TruncatedModel:
    params = qubit.QubitParams(epsilon=0.6, delta=0.8)
    return oracle.TruncatedModel(
        system_kind="spin", system_params=params,
        bath_frequencies=(0.9, 1.7), couplings=(0.35, 0.5), fock_cutoff=10)


def _check_ed_separable(tol: float, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    spin_model = _ed_base_model().with_couplings((0.0, 0.0))
    gs = oracle.ground_state(spin_model)
    expected = -0.5 * spin_model.system_params.level_splitting \
        + 0.5 * sum(spin_model.bath_frequencies)
    worst = max(worst, abs(gs.energy - expected))
    rdm = oracle.reduced_density(gs.vector, spin_model)
    worst = max(worst, abs(rdm.purity - 1.0),
                abs(oracle.excited_population(rdm, spin_model.system_params)))

    osc_params = oscillator.OscillatorParams(m=1.0, omega=1.1)
    osc_model = oracle.TruncatedModel(
        system_kind="oscillator", system_params=osc_params,
        bath_frequencies=(0.8, 1.9), couplings=(0.0, 0.0), fock_cutoff=8)
    gs2 = oracle.ground_state(osc_model)
    expected2 = 0.5 * osc_params.quantum + 0.5 * sum(osc_model.bath_frequencies)
    worst = max(worst, abs(gs2.energy - expected2))
    return _result("ed-separable-limit", worst, tol)


def _check_ed_monotonic(tol: float, rng: np.random.Generator) -> CheckResult:
    params = qubit.QubitParams(epsilon=0.0, delta=1.0)
    p_ups = []
    for alpha in np.linspace(0.0, 0.5, 6):
        model = oracle.spin_boson_model(params, float(alpha), n_modes=2,
                                        cutoff_ratio=5.0, fock_cutoff=12)
        gs = oracle.ground_state(model)
        rdm = oracle.reduced_density(gs.vector, model)
        p_ups.append(oracle.excited_population(rdm, params))
    drops = -np.diff(p_ups)
    worst = float(max(0.0, np.max(drops)))
    detail = "p_up: " + ", ".join(f"{p:.3e}" for p in p_ups)
    return _result("ed-pup-monotonic", worst, tol, detail)


def _check_ed_first_order(tol: float, rng: np.random.Generator) -> CheckResult:
    report = oracle.first_order_structure_check(
        _ed_base_model(), alphas=(0.01, 0.02, 0.04, 0.08))
    if not report.ok:
        return _result("ed-first-order-slope", math.inf, tol, report.message)
    worst = abs(report.difference_slope - 2.0)
    detail = (f"slope {report.difference_slope:.4f}, linear diag "
              f"{report.linear_diag:.4e} vs eig {report.linear_eig:.4e}, "
              f"purity deficit {report.linear_purity_deficit:.4e}")
    # the three linear coefficients must agree at the few-percent level
    rel_eig = abs(report.linear_eig / report.linear_diag - 1.0)
    rel_pur = abs(report.linear_purity_deficit / (2.0 * report.linear_diag) - 1.0)
    worst = max(worst, 2.0 * rel_eig, 2.0 * rel_pur)
    return _result("ed-first-order-slope", worst, tol, detail)


def _check_ed_truncation(tol: float, rng: np.random.Generator) -> CheckResult:
    model = _ed_base_model().with_couplings((0.25, 0.35)).with_cutoff(8)
    change = oracle.truncation_convergence(model)
    return _result("ed-truncation-convergence", change, tol)


def _check_network_covariances(tol: float, rng: np.random.Generator) -> CheckResult:
    single = oracle.NormalModeNetwork(mass_matrix=np.eye(1),
                                      stiffness_matrix=np.eye(1))
    mom = oracle.network_ground_covariances(single)
    worst = max(abs(mom.q2 - 0.5), abs(mom.p2 - 0.5))

    # two identical coupled oscillators, hand-solved normal modes
    omega0, k = 1.0, 0.5
    stiff = np.array([[omega0**2 + k, -k], [-k, omega0**2 + k]])
    pair = oracle.NormalModeNetwork(mass_matrix=np.eye(2), stiffness_matrix=stiff)
    mom2 = oracle.network_ground_covariances(pair)
    w_plus, w_minus = omega0, math.sqrt(omega0**2 + 2 * k)
    worst = max(worst, abs(mom2.q2 - 0.25 * (1 / w_plus + 1 / w_minus)),
                abs(mom2.p2 - 0.25 * (w_plus + w_minus)))

    for n_modes in (10, 40):
        net = oracle.ohmic_chain_network(alpha=0.4, cutoff_ratio=10.0,
                                         n_modes=n_modes)
        moments = oracle.network_ground_covariances(net)
        pur = oscillator.purity(moments)
        if pur > 1.0:
            worst = max(worst, pur - 1.0)
    return _result("network-covariances", worst, tol)


def _check_network_ohmic_trend(tol: float, rng: np.random.Generator) -> CheckResult:
    alpha = 0.4
    distances = []
    for n_modes in (40, 80, 160, 320):
        cutoff = n_modes / 8.0
        net = oracle.ohmic_chain_network(alpha, cutoff, n_modes)
        mom = oracle.network_ground_covariances(net)
        x_target = bath.ohmic_x(alpha)
        y_target = bath.ohmic_y(bath.OhmicBathParams(alpha=alpha,
                                                     cutoff_ratio=cutoff))
        distances.append(math.hypot(2 * mom.q2 - x_target, 2 * mom.p2 - y_target))
    growth = float(max(0.0, np.max(np.diff(distances))))
    detail = "distances: " + ", ".join(f"{d:.4f}" for d in distances)
    return _result("network-ohmic-trend", growth, tol, detail)


# ---------------------------------------------------------------------------
# registry

CHECKS: dict[str, tuple[Callable[[float, np.random.Generator], CheckResult], float]] = {
    "hermite-legendre-recurrences": (_check_polynomial_recurrences, 1e-12),
    "quadrature-hermite-moments": (_check_hermite_moments, 1e-10),
    "quadrature-legendre-exactness": (_check_legendre_exactness, 1e-10),
    "log-derivative-polynomials": (_check_log_derivative, 1e-6),
    "qubit-distribution-moments": (_check_qubit_distribution, 1e-12),
    "qubit-inverse-transform": (_check_qubit_inverse_transform, 1e-6),
    "qubit-cumulant-consistency": (_check_qubit_cumulants, 1e-6),
    "qubit-purity-formula": (_check_qubit_purity, 1e-12),
    "crossover-roundtrip": (_check_crossover_roundtrip, 1e-9),
    "cumulant-triple-closed-vs-fd": (_check_cumulant_fd, 1e-6),
    "cumulant-triple-closed-vs-spectral": (_check_cumulant_spectral, 1e-8),
    "cumulant-triple-isolated": (_check_cumulant_isolated, 1e-12),
    "generating-equivalence-spectral": (_check_generating_spectral, 1e-10),
    "generating-equivalence-quadrature": (_check_generating_quadrature, 1e-6),
    "fock-table-polynomials": (_check_fock_table, 1e-12),
    "fock-normalization-grid": (_check_fock_normalization, 1e-10),
    "fock-quadrature": (_check_fock_quadrature, 1e-8),
    "fock-weak-coupling-linear": (_check_fock_weak_coupling, 1.0),
    "purity-closed-vs-quadrature": (_check_purity_quadrature, 1e-6),
    "purity-shape-identity": (_check_purity_identity, 1e-12),
    "free-particle-limit": (_check_free_particle_limit, 1e-6),
    "free-particle-wick": (_check_free_particle_wick, 1e-6),
    "ohmic-boundary-values": (_check_ohmic_boundary, 1e-12),
    "ohmic-y-cutoff10": (_check_ohmic_y_value, 1e-5),
    "ohmic-purity-monotonic": (_check_ohmic_monotonic, 1e-12),
    "ohmic-cutoff-sensitivity": (_check_ohmic_cutoff_sensitivity, 1e-12),
    "ed-separable-limit": (_check_ed_separable, 1e-8),
    "ed-pup-monotonic": (_check_ed_monotonic, 1e-12),
    "ed-first-order-slope": (_check_ed_first_order, 0.2),
    "ed-truncation-convergence": (_check_ed_truncation, 1e-6),
    "network-covariances": (_check_network_covariances, 1e-12),
    "network-ohmic-trend": (_check_network_ohmic_trend, 1e-12),
}

ORACLE_CHECKS = (
    "generating-equivalence-quadrature",
    "fock-quadrature",
    "purity-closed-vs-quadrature",
    "ed-separable-limit",
    "ed-pup-monotonic",
    "ed-first-order-slope",
    "ed-truncation-convergence",
    "network-covariances",
    "network-ohmic-trend",
)


def select_names(only: Iterable[str] | None = None) -> list[str]:
    """Expand prefix filters into registered check names.

    Raises:
        KeyError: when a filter matches nothing; the message lists valid names.
    """
    if not only:
        return list(CHECKS)
    selected: list[str] = []
    for pattern in only:
        matches = [name for name in CHECKS if name.startswith(pattern)]
        if not matches:
            raise KeyError(
                f"no check matches {pattern!r}; valid names: {', '.join(CHECKS)}")
        selected.extend(m for m in matches if m not in selected)
    return selected


def run_checks(only: Iterable[str] | None = None,
               tolerance_overrides: Mapping[str, float] | None = None,
               seed: int = _DEFAULT_SEED) -> list[CheckResult]:
    """Run the selected checks and return one result per name."""
    names = select_names(only)
    overrides = dict(tolerance_overrides or {})
    for key in overrides:
        if not any(name.startswith(key) for name in CHECKS):
            raise KeyError(
                f"tolerance override {key!r} matches no check; valid names: "
                f"{', '.join(CHECKS)}")
    results = []
    for name in names:
        func, default_tol = CHECKS[name]
        tol = default_tol
        for key, value in overrides.items():
            if name.startswith(key):
                tol = value
        rng = np.random.default_rng(seed)
        results.append(func(tol, rng))
    return results
