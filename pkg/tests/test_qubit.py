import math

import numpy as np
import pytest

from subenergy import numerics, qubit
from subenergy.errors import DomainError


def random_bloch(rng):
    v = rng.normal(size=3)
    v *= rng.uniform(0.0, 1.0) ** (1 / 3) / np.linalg.norm(v)
    return qubit.BlochVector(x=float(v[0]), y=float(v[1]), z=float(v[2]))


def test_params_omega():
    p = qubit.QubitParams(epsilon=3.0, delta=4.0)
    assert p.omega == 5.0
    assert abs(p.omega - math.hypot(p.epsilon, p.delta) / p.hbar) < 1e-14
    with pytest.raises(DomainError):
        qubit.QubitParams(epsilon=0.0, delta=0.0)


def test_bloch_ball_enforced():
    qubit.BlochVector(x=0.6, y=0.0, z=0.8)  # surface is fine
    with pytest.raises(DomainError):
        qubit.BlochVector(x=1.0, y=0.2, z=0.0)


def test_bloch_purity():
    assert qubit.bloch_purity(qubit.BlochVector(0.0, 0.0, 0.0)) == 0.5
    assert qubit.bloch_purity(qubit.BlochVector(0.6, 0.0, 0.8)) == 1.0
    assert qubit.bloch_purity(qubit.BlochVector(0.3, 0.4, 0.5)) == 0.75


def test_bloch_purity_matches_trace_of_rho_squared():
    pauli = [np.eye(2, dtype=complex),
             np.array([[0, 1], [1, 0]], dtype=complex),
             np.array([[0, -1j], [1j, 0]]),
             np.array([[1, 0], [0, -1]], dtype=complex)]
    rng = np.random.default_rng(3)
    for _ in range(40):
        b = random_bloch(rng)
        rho = 0.5 * (pauli[0] + b.x * pauli[1] + b.y * pauli[2] + b.z * pauli[3])
        assert abs(qubit.bloch_purity(b) - np.trace(rho @ rho).real) < 1e-12


def test_mean_energy():
    assert qubit.mean_energy(qubit.QubitParams(0.0, 1.0),
                             qubit.BlochVector(-1.0, 0.0, 0.0)) == -0.5
    assert qubit.mean_energy(qubit.QubitParams(1.0, 1e-300),
                             qubit.BlochVector(0.0, 0.0, -1.0)) == -0.5
    p = qubit.QubitParams(epsilon=3.0, delta=4.0)
    value = qubit.mean_energy(p, qubit.BlochVector(-0.48, 0.0, -0.36))
    assert abs(value - (-1.5)) < 1e-14
    assert abs(value) <= 0.5 * p.level_splitting


def test_characteristic_function_basics():
    p = qubit.QubitParams(epsilon=0.7, delta=1.1)
    b = qubit.BlochVector(0.2, 0.1, -0.4)
    assert qubit.characteristic_function(p, b, 0.0) == 1.0 + 0.0j
    # ground state: pure phase exp(+i hbar Omega chi / 2)
    pg = qubit.QubitParams(epsilon=0.0, delta=1.0)
    bg = qubit.BlochVector(-1.0, 0.0, 0.0)
    for chi in (0.3, 1.7):
        z = qubit.characteristic_function(pg, bg, chi)
        assert abs(z - complex(math.cos(chi / 2), math.sin(chi / 2))) < 1e-14
    # zero mean energy kills both terms at chi = pi / (hbar Omega)
    bz = qubit.BlochVector(0.0, 0.6, 0.0)
    z = qubit.characteristic_function(p, bz, math.pi / p.level_splitting)
    assert abs(z) < 1e-15


def test_characteristic_function_modulus_bounded():
    rng = np.random.default_rng(7)
    p = qubit.QubitParams(epsilon=0.9, delta=0.5)
    for _ in range(50):
        b = random_bloch(rng)
        chi = rng.uniform(-5, 5)
        assert abs(qubit.characteristic_function(p, b, chi)) <= 1.0 + 1e-12


def test_energy_distribution_examples():
    p = qubit.QubitParams(epsilon=0.0, delta=1.0)
    d = qubit.energy_distribution(p, -0.5)
    assert (d.p_down, d.p_up) == (1.0, 0.0)
    d = qubit.energy_distribution(p, 0.0)
    assert (d.p_down, d.p_up) == (0.5, 0.5)
    d = qubit.energy_distribution(p, -0.2)
    assert abs(d.p_down - 0.7) < 1e-12 and abs(d.p_up - 0.3) < 1e-12


def test_energy_distribution_normalization_and_mean():
    rng = np.random.default_rng(21)
    for _ in range(50):
        p = qubit.QubitParams(epsilon=float(rng.uniform(-2, 2)),
                              delta=float(rng.uniform(0.1, 2.0)))
        b = random_bloch(rng)
        mean = qubit.mean_energy(p, b)
        d = qubit.energy_distribution(p, mean)
        assert d.p_down + d.p_up == 1.0
        assert abs(d.mean - mean) < 1e-12
        assert d.energy_plus == -d.energy_minus


def test_energy_distribution_rejects_unphysical_mean():
    p = qubit.QubitParams(epsilon=0.0, delta=1.0)
    with pytest.raises(DomainError):
        qubit.energy_distribution(p, 0.5001)


def test_inverse_fourier_transform_recovers_weights():
    # project Z(i chi) on exp(+i chi E) over one period; the two spectral
    # peaks are orthogonal there, so the weights come back exactly
    rng = np.random.default_rng(2)
    for _ in range(10):
        p = qubit.QubitParams(epsilon=float(rng.uniform(-2, 2)),
                              delta=float(rng.uniform(0.1, 2.0)))
        b = random_bloch(rng)
        d = qubit.energy_distribution(p, qubit.mean_energy(p, b))
        period = 2.0 * math.pi / p.level_splitting
        chis = np.linspace(0.0, period, 513)[:-1]
        z = np.array([qubit.characteristic_function(p, b, c) for c in chis])
        for energy, weight in ((d.energy_minus, d.p_down),
                               (d.energy_plus, d.p_up)):
            projected = np.mean(z * np.exp(1j * chis * energy))
            assert abs(projected - weight) < 1e-6


def test_cumulants_from_two_levels():
    p = qubit.QubitParams(epsilon=0.0, delta=1.0)
    deterministic = qubit.energy_distribution(p, -0.5)
    kappas = qubit.cumulants_from_two_levels(deterministic, 6)
    assert kappas[0] == -0.5
    assert all(abs(k) < 1e-15 for k in kappas[1:])

    symmetric = qubit.energy_distribution(p, 0.0)
    assert abs(qubit.cumulants_from_two_levels(symmetric, 2)[1] - 0.25) < 1e-15

    skewed = qubit.energy_distribution(p, -0.2)  # (0.7, 0.3)
    assert abs(qubit.cumulants_from_two_levels(skewed, 2)[1] - 0.21) < 1e-15


def test_cumulants_match_bernoulli_closed_forms():
    # kappa_n of a two-point variable on {-w/2, +w/2}, frozen from the
    # cumulant generating function expansion
    p_up, w = 0.3, 1.7
    p = qubit.QubitParams(epsilon=0.0, delta=w)
    d = qubit.energy_distribution(p, (p_up - 0.5) * w)
    kappas = qubit.cumulants_from_two_levels(d, 6)
    q = 1 - p_up
    expected = [
        w * (2 * p_up - 1) / 2,
        p_up * q * w**2,
        p_up * q * (1 - 2 * p_up) * w**3,
        p_up * q * (6 * p_up**2 - 6 * p_up + 1) * w**4,
        p_up * q * (1 - 2 * p_up) * (12 * p_up**2 - 12 * p_up + 1) * w**5,
        p_up * q * (120 * p_up**4 - 240 * p_up**3 + 150 * p_up**2
                    - 30 * p_up + 1) * w**6,
    ]
    for got, ref in zip(kappas, expected):
        assert abs(got - ref) < 1e-12 * max(1.0, abs(ref))


def test_cumulants_match_log_derivative_of_generating_function():
    rng = np.random.default_rng(4)
    for _ in range(10):
        p = qubit.QubitParams(epsilon=float(rng.uniform(-1.5, 1.5)),
                              delta=float(rng.uniform(0.2, 1.5)))
        b = random_bloch(rng)
        d = qubit.energy_distribution(p, qubit.mean_energy(p, b))
        kappas = qubit.cumulants_from_two_levels(d, 4)

        def z_real(chi, d=d):
            return (d.p_down * math.exp(-chi * d.energy_minus)
                    + d.p_up * math.exp(-chi * d.energy_plus))

        for n in range(1, 5):
            step = {1: 0.02, 2: 0.02, 3: 0.05, 4: 0.08}[n] / max(1.0, p.level_splitting)
            est = numerics.nth_log_derivative(
                z_real, n, numerics.FiniteDifferenceScheme(step=step))
            assert abs(est.value - kappas[n - 1]) < 1e-6 * max(1.0, abs(kappas[n - 1]))


def test_persistent_current_mapping():
    r = qubit.PersistentCurrentReading(current=2.0, current_uncoupled=2.0)
    assert qubit.p_up_from_persistent_current(r) == 0.0
    r = qubit.PersistentCurrentReading(current=0.0, current_uncoupled=1.5)
    assert qubit.p_up_from_persistent_current(r) == 0.5
    r = qubit.PersistentCurrentReading(current=0.8, current_uncoupled=1.0)
    assert abs(qubit.p_up_from_persistent_current(r) - 0.1) < 1e-15
    with pytest.raises(DomainError):
        qubit.PersistentCurrentReading(current=1.0, current_uncoupled=0.0)


def test_persistent_current_clamps_with_warning():
    r = qubit.PersistentCurrentReading(current=-1.4, current_uncoupled=1.0)
    with pytest.warns(UserWarning, match="clamped"):
        assert qubit.p_up_from_persistent_current(r) == 1.0


def test_weak_coupling_p_up():
    assert qubit.weak_coupling_p_up(0.0, 1.0, 100.0) == 0.0
    assert abs(qubit.weak_coupling_p_up(0.01, 1.0, 100.0)
               - 0.046051701859880914) < 1e-15
    assert abs(qubit.weak_coupling_p_up(0.02, 1.0, math.e) - 0.02) < 1e-15
    with pytest.raises(DomainError):
        qubit.weak_coupling_p_up(0.01, 2.0, 1.0)
    with pytest.warns(UserWarning, match="perturbative"):
        qubit.weak_coupling_p_up(0.5, 1.0, 100.0)


def test_thermal_occupation():
    assert abs(qubit.thermal_occupation(1.0, 1.0) - math.exp(-1)) < 1e-15
    assert abs(qubit.thermal_occupation(10.0, 1.0) - 4.5399929762484854e-05) < 1e-18
    assert qubit.thermal_occupation(1e6, 1.0) == 0.0  # frozen limit
    with pytest.raises(DomainError):
        qubit.thermal_occupation(1.0, 0.0)


def test_crossover_temperature_examples():
    # alpha ln(cutoff) = 0.1  ->  T* = 1/ln 10
    q = qubit.ThermalCrossoverQuery(gap=1.0, alpha=0.1 / math.log(50.0),
                                    cutoff_ratio=50.0)
    assert abs(qubit.crossover_temperature(q) - 1.0 / math.log(10.0)) < 1e-12
    assert abs(qubit.thermal_occupation(1.0, qubit.crossover_temperature(q))
               - 0.1) < 1e-12
    # alpha term = 1/e  ->  T* = gap
    q = qubit.ThermalCrossoverQuery(gap=1.0, alpha=1.0 / (math.e * math.log(8.0)),
                                    cutoff_ratio=8.0)
    assert abs(qubit.crossover_temperature(q) - 1.0) < 1e-12
    q2 = qubit.ThermalCrossoverQuery(gap=2.0, alpha=1.0 / (math.e * math.log(8.0)),
                                     cutoff_ratio=8.0)
    assert abs(qubit.crossover_temperature(q2) - 2.0) < 1e-12


def test_crossover_round_trip_property():
    for gap in (0.5, 1.0, 3.0):
        for alpha in (1e-4, 1e-2):
            for ratio in (5.0, 1e3):
                q = qubit.ThermalCrossoverQuery(gap=gap, alpha=alpha,
                                                cutoff_ratio=ratio)
                t_star = qubit.crossover_temperature(q)
                assert t_star > 0
                assert abs(qubit.thermal_occupation(gap, t_star, q.boltzmann_k)
                           - q.weak_coupling_probability) < 1e-9


def test_crossover_domain_errors():
    q = qubit.ThermalCrossoverQuery(gap=1.0, alpha=0.0, cutoff_ratio=10.0)
    with pytest.raises(DomainError):
        qubit.crossover_temperature(q)
    q = qubit.ThermalCrossoverQuery(gap=1.0, alpha=0.8, cutoff_ratio=10.0)
    with pytest.raises(DomainError):  # alpha ln ratio > 1
        qubit.crossover_temperature(q)
    with pytest.raises(DomainError):
        qubit.ThermalCrossoverQuery(gap=-1.0, alpha=0.1, cutoff_ratio=10.0)
