"""Zero-temperature energy statistics of sub-systems entangled with their environment.

The package computes, cross-validates, and exports the full energy
statistics (distributions, cumulants, purity) of a qubit and of a harmonic
oscillator whose joint state with an environment is the global ground state.
"""

__version__ = "0.1.0"

from .errors import DomainError, ToleranceError
from .numerics import (DerivativeEstimate, FiniteDifferenceScheme,
                       QuadratureRule, double_factorial, gauss_hermite_rule,
                       gauss_legendre_rule, hermite_poly, legendre_poly,
                       nth_derivative, nth_log_derivative)
from .qubit import (BlochVector, PersistentCurrentReading, QubitParams,
                    ThermalCrossoverQuery, TwoLevelEnergyDistribution,
                    bloch_purity, characteristic_function,
                    crossover_temperature, cumulants_from_two_levels,
                    energy_distribution, mean_energy,
                    p_up_from_persistent_current, thermal_occupation,
                    weak_coupling_p_up)
from .oscillator import (EnergyCumulants, FockDistribution, GaussianMoments,
                         OscillatorParams, ShapeParams, SpectralTransformVars,
                         cumulants_closed_form, cumulants_from_fock,
                         fock_probabilities, generating_function,
                         generating_function_free, imaginary_time_propagator,
                         mean_and_variance_from_fock, moments_to_shape,
                         position_density_matrix, purity, raw_fock_weights,
                         shape_from_xy, shape_purity, shape_to_moments,
                         spectral_generating_function, spectral_transform_vars,
                         truncation_for_tolerance)
from .bath import (DEFAULT_CUTOFF_RATIO, OhmicBathParams, OhmicTrajectoryRow,
                   ohmic_trajectory, ohmic_x, ohmic_y)
from .oracle import (FirstOrderReport, GroundState, NormalModeNetwork,
                     ReducedDensityMatrix, TruncatedModel, bloch_from_density,
                     excited_population, first_order_structure_check,
                     ground_state, network_ground_covariances,
                     ohmic_chain_network, purity_via_quadrature,
                     reduced_density, rho_nn_via_quadrature, spin_boson_model,
                     truncation_convergence, z_via_quadrature)
from .verify import CheckResult, run_checks

__all__ = [name for name in dir() if not name.startswith("_")]
