"""Brute-force verification oracles.

Three independent routes double-check the closed forms elsewhere in the
package:

* 2D Gauss-Legendre quadrature of the position-space integral
  representations (generating function, Fock diagonals, purity),
* exact diagonalization (ED) of truncated system + bath Hamiltonians,
* normal-mode decomposition of bilinear oscillator networks.

Conventions for the truncated models: the coupling is bilinear in
dimensionless coordinates, H_c = sum_k c_k X_s X_k with X_k = b_k + b_k^dag
and X_s = sigma_z for a spin system or a + a^dag for an oscillator system;
the c_k are energies.  No counter-term is added to the truncated models
(none is needed for trend studies, and every assertion against a closed
form is phrased through quantities that depend only on the measured moments,
which are convention-independent).  The oscillator *network* builder does
include the standard counter-term so its stiffness matrix stays positive
semidefinite at strong coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError, ToleranceError
from .numerics import hermite_poly
from .oscillator import GaussianMoments, OscillatorParams
from .qubit import BlochVector, QubitParams

__all__ = [
    "TruncatedModel",
    "NormalModeNetwork",
    "ReducedDensityMatrix",
    "GroundState",
    "FirstOrderReport",
    "ground_state",
    "reduced_density",
    "excited_population",
    "bloch_from_density",
    "first_order_structure_check",
    "network_ground_covariances",
    "ohmic_chain_network",
    "spin_boson_model",
    "truncation_convergence",
    "z_via_quadrature",
    "rho_nn_via_quadrature",
    "purity_via_quadrature",
]

_DIMENSION_GUARD = 200_000
_DENSE_LIMIT = 2_000

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True)
class TruncatedModel:
    """A finite system + bath Hamiltonian for exact diagonalization.

    ``couplings`` are the bilinear energies c_k described in the module
    docstring; ``fock_cutoff`` applies per bath mode (and to the system mode
    for an oscillator system).
    """

    system_kind: str
    system_params: QubitParams | OscillatorParams
    bath_frequencies: tuple[float, ...]
    couplings: tuple[float, ...]
    fock_cutoff: int

    def __post_init__(self):
        if self.system_kind not in ("spin", "oscillator"):
            raise DomainError("system_kind must be 'spin' or 'oscillator'")
        expected = QubitParams if self.system_kind == "spin" else OscillatorParams
        if not isinstance(self.system_params, expected):
            raise DomainError(f"system_params must be {expected.__name__} "
                              f"for a {self.system_kind} system")
        object.__setattr__(self, "bath_frequencies", tuple(self.bath_frequencies))
        object.__setattr__(self, "couplings", tuple(self.couplings))
        if len(self.couplings) != len(self.bath_frequencies):
            raise DomainError("one coupling per bath mode required")
        if any(w <= 0 for w in self.bath_frequencies):
            raise DomainError("bath frequencies must be positive")
        if self.fock_cutoff < 3:
            raise DomainError("fock_cutoff must be at least 3")
        if self.dimension > _DIMENSION_GUARD:
            raise DomainError(
                f"Hilbert dimension {self.dimension} exceeds the desk-scale "
                f"guard {_DIMENSION_GUARD}")

    @property
    def system_dimension(self) -> int:
        return 2 if self.system_kind == "spin" else self.fock_cutoff

    @property
    def dimension(self) -> int:
        return self.system_dimension * self.fock_cutoff**len(self.bath_frequencies)

    @property
    def hbar(self) -> float:
        return self.system_params.hbar

    def with_couplings(self, couplings: Sequence[float]) -> "TruncatedModel":
        return TruncatedModel(self.system_kind, self.system_params,
                              self.bath_frequencies, tuple(couplings),
                              self.fock_cutoff)

    def with_cutoff(self, fock_cutoff: int) -> "TruncatedModel":
        return TruncatedModel(self.system_kind, self.system_params,
                              self.bath_frequencies, self.couplings, fock_cutoff)


@dataclass(frozen=True)
class NormalModeNetwork:
    """Bilinear oscillator network defined by mass and stiffness matrices."""

    mass_matrix: np.ndarray
    stiffness_matrix: np.ndarray
    subsystem_index: int = 0
    hbar: float = 1.0

    def __post_init__(self):
        mass = np.asarray(self.mass_matrix, dtype=float)
        stiff = np.asarray(self.stiffness_matrix, dtype=float)
        object.__setattr__(self, "mass_matrix", mass)
        object.__setattr__(self, "stiffness_matrix", stiff)
        if mass.shape != stiff.shape or mass.ndim != 2 or mass.shape[0] != mass.shape[1]:
            raise DomainError("mass and stiffness matrices must be square and congruent")
        for name, mat in (("mass", mass), ("stiffness", stiff)):
            if not np.allclose(mat, mat.T, atol=1e-12):
                raise DomainError(f"{name} matrix must be symmetric")
        try:
            scipy.linalg.cholesky(mass, lower=True)
        except scipy.linalg.LinAlgError as exc:
            raise DomainError("mass matrix must be positive definite") from exc
        if not 0 <= self.subsystem_index < mass.shape[0]:
            raise DomainError("subsystem_index out of range")


@dataclass(frozen=True)
class ReducedDensityMatrix:
    """Hermitian, unit-trace, positive sub-system density matrix."""

    entries: np.ndarray
    dimension: int

    def __post_init__(self):
        rho = np.asarray(self.entries, dtype=complex)
        object.__setattr__(self, "entries", rho)
        if rho.shape != (self.dimension, self.dimension):
            raise DomainError("entries must be a dimension x dimension matrix")
        if not np.allclose(rho, rho.conj().T, atol=1e-12):
            raise DomainError("reduced density matrix must be Hermitian")
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise DomainError("reduced density matrix must have unit trace")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise DomainError("reduced density matrix must be positive semidefinite")

    @property
    def purity(self) -> float:
        return float(np.trace(self.entries @ self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in decreasing order."""
        return np.linalg.eigvalsh(self.entries)[::-1]


class GroundState(NamedTuple):
    energy: float
    vector: np.ndarray
    residual: float


def _boson_lowering(cutoff: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1.0, cutoff)), 1, format="csr")


def _embed(op: sp.spmatrix, site: int, dims: Sequence[int]) -> sp.csr_matrix:
    out = None
    for k, d in enumerate(dims):
        factor = op if k == site else sp.identity(d, format="csr")
        out = factor if out is None else sp.kron(out, factor, format="csr")
    return out.tocsr()


def assemble_hamiltonian(model: TruncatedModel) -> sp.csr_matrix:
    """Sparse H = H_s + H_E + H_c on the truncated product space."""
    hbar = model.hbar
    cutoff = model.fock_cutoff
    dims = [model.system_dimension] + [cutoff] * len(model.bath_frequencies)

    if model.system_kind == "spin":
        qp = model.system_params
        h_sys = 0.5 * qp.epsilon * sp.csr_matrix(_SIGMA_Z) \
            + 0.5 * qp.delta * sp.csr_matrix(_SIGMA_X)
        x_sys = sp.csr_matrix(_SIGMA_Z)
    else:
        op = model.system_params
        op._require_bound("the truncated oscillator model")
        a = _boson_lowering(cutoff)
        number = (a.T @ a).tocsr()
        h_sys = hbar * op.omega * (number + 0.5 * sp.identity(cutoff, format="csr"))
        x_sys = (a + a.T).tocsr()

    ham = _embed(h_sys, 0, dims)
    x_sys_full = _embed(x_sys, 0, dims)
    for k, (omega_k, c_k) in enumerate(zip(model.bath_frequencies, model.couplings)):
        b = _boson_lowering(cutoff)
        n_k = (b.T @ b).tocsr()
        ham = ham + hbar * omega_k * _embed(
            n_k + 0.5 * sp.identity(cutoff, format="csr"), k + 1, dims)
        if c_k != 0.0:
            ham = ham + c_k * (x_sys_full @ _embed((b + b.T).tocsr(), k + 1, dims))
    return ham.tocsr()


def ground_state(model: TruncatedModel) -> GroundState:
    """Lowest eigenpair of the assembled Hamiltonian.

    Dense diagonalization below dimension 2000, Lanczos above.  The returned
    residual ||H v - E v|| is checked against 1e-8 times the matrix scale.

    Raises:
        ToleranceError: if the eigensolver residual fails that check.
    """
    ham = assemble_hamiltonian(model)
    if model.dimension <= _DENSE_LIMIT:
        vals, vecs = np.linalg.eigh(ham.toarray())
        energy, vec = float(vals[0]), vecs[:, 0]
    else:
        vals, vecs = spla.eigsh(ham, k=1, which="SA")
        energy, vec = float(vals[0]), vecs[:, 0]
    vec = vec / np.linalg.norm(vec)
    residual = float(np.linalg.norm(ham @ vec - energy * vec))
    scale = float(abs(ham).sum(axis=1).max())
    if residual > 1e-8 * max(scale, 1.0):
        raise ToleranceError("eigensolver did not converge",
                             measured=residual, required=1e-8 * max(scale, 1.0))
    return GroundState(energy=energy, vector=vec, residual=residual)


def reduced_density(state: np.ndarray, model: TruncatedModel) -> ReducedDensityMatrix:
    """Sub-system density matrix from a pure global state (bath traced out)."""
    state = np.asarray(state)
    if abs(np.linalg.norm(state) - 1.0) > 1e-10:
        raise DomainError("state vector must be normalized")
    d_sys = model.system_dimension
    block = state.reshape(d_sys, -1)
    rho = block @ block.conj().T
    return ReducedDensityMatrix(entries=rho, dimension=d_sys)


def _qubit_energy_basis(qp: QubitParams) -> np.ndarray:
    """Columns: ground and excited eigenvectors of the 2x2 system Hamiltonian."""
    h_sys = 0.5 * qp.epsilon * _SIGMA_Z + 0.5 * qp.delta * _SIGMA_X
    _, vecs = np.linalg.eigh(h_sys)
    return vecs


def excited_population(rdm: ReducedDensityMatrix, qp: QubitParams) -> float:
    """p_up = <excited| rho |excited> of a spin reduced density matrix."""
    if rdm.dimension != 2:
        raise DomainError("excited_population expects a qubit density matrix")
    basis = _qubit_energy_basis(qp)
    excited = basis[:, 1]
    return float((excited.conj() @ rdm.entries @ excited).real)


def bloch_from_density(rdm: ReducedDensityMatrix) -> BlochVector:
    """Pauli expectation values of a 2x2 density matrix."""
    if rdm.dimension != 2:
        raise DomainError("a Bloch vector needs a 2x2 density matrix")
    rho = rdm.entries
    sigma_y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    return BlochVector(
        x=float(np.trace(rho @ _SIGMA_X).real),
        y=float(np.trace(rho @ sigma_y).real),
        z=float(np.trace(rho @ _SIGMA_Z).real))


@dataclass(frozen=True)
class FirstOrderReport:
    """Raw sweep data and fits for the weak-coupling structure check.

    The sweep parametrizes couplings as sqrt(alpha) * reference, so the
    reduced density matrix is linear in alpha at leading order.  ``ok`` is
    False when a fit could not be performed; the raw arrays are always
    present.
    """

    alphas: np.ndarray
    diag_up: np.ndarray
    eig_up: np.ndarray
    purities: np.ndarray
    linear_diag: float
    linear_eig: float
    linear_purity_deficit: float
    difference_slope: float
    ok: bool
    message: str = ""


def first_order_structure_check(base: TruncatedModel,
                                alphas: Sequence[float]) -> FirstOrderReport:
    """Sweep a spin model over weak couplings and fit the first-order structure.

    For each alpha the couplings are sqrt(alpha) times the base model's, the
    reduced state is expressed in the system energy basis, and three
    quantities are fitted in alpha: the excited diagonal element, the small
    eigenvalue, and the purity deficit 1 - Tr rho^2.  Their linear
    coefficients should agree (the eigenvalue and diagonal differ only at
    second order), and the diagonal-eigenvalue difference should scale as
    alpha^2.
    """
    if base.system_kind != "spin":
        raise DomainError("the first-order structure check runs on spin models")
    alphas = np.asarray(sorted(alphas), dtype=float)
    if alphas.size < 4 or alphas[0] <= 0:
        raise DomainError("need at least 4 positive coupling points")

    base_couplings = np.asarray(base.couplings, dtype=float)
    diag_up, eig_up, purities = [], [], []
    qp = base.system_params
    for alpha in alphas:
        model = base.with_couplings(np.sqrt(alpha) * base_couplings)
        gs = ground_state(model)
        rdm = reduced_density(gs.vector, model)
        diag_up.append(excited_population(rdm, qp))
        eig_up.append(float(rdm.eigenvalues()[-1]))
        purities.append(rdm.purity)
    diag_up = np.asarray(diag_up)
    eig_up = np.asarray(eig_up)
    purities = np.asarray(purities)

    try:
        design = np.vstack([alphas, alphas**2]).T
        linear_diag = float(np.linalg.lstsq(design, diag_up, rcond=None)[0][0])
        linear_eig = float(np.linalg.lstsq(design, eig_up, rcond=None)[0][0])
        linear_pur = float(np.linalg.lstsq(design, 1.0 - purities, rcond=None)[0][0])
        diff = np.abs(diag_up - eig_up)
        if np.any(diff <= 0):
            raise FloatingPointError("degenerate diagonal-eigenvalue difference")
        slope = float(np.polyfit(np.log(alphas), np.log(diff), 1)[0])
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        return FirstOrderReport(
            alphas=alphas, diag_up=diag_up, eig_up=eig_up, purities=purities,
            linear_diag=math.nan, linear_eig=math.nan,
            linear_purity_deficit=math.nan, difference_slope=math.nan,
            ok=False, message=f"fit failure: {exc}")

    return FirstOrderReport(
        alphas=alphas, diag_up=diag_up, eig_up=eig_up, purities=purities,
        linear_diag=linear_diag, linear_eig=linear_eig,
        linear_purity_deficit=linear_pur, difference_slope=slope, ok=True)


def network_ground_covariances(net: NormalModeNetwork) -> GaussianMoments:
    """Exact ground-state <q^2>, <p^2> of one network coordinate.

    With M = L L^T the transformed stiffness B = L^-1 K L^-T is diagonalized;
    each normal mode contributes its zero-point variance and the site values
    follow by transforming back.

    Raises:
        DomainError: if the network has a zero-frequency normal mode.
    """
    low = scipy.linalg.cholesky(net.mass_matrix, lower=True)
    low_inv = scipy.linalg.solve_triangular(low, np.eye(low.shape[0]), lower=True)
    b_mat = low_inv @ net.stiffness_matrix @ low_inv.T
    b_mat = 0.5 * (b_mat + b_mat.T)
    freq2, modes = scipy.linalg.eigh(b_mat)
    if freq2[0] <= 1e-12 * max(freq2[-1], 1.0):
        raise DomainError("zero-frequency normal mode: the network has no "
                          "normalizable ground state")
    freqs = np.sqrt(freq2)
    i = net.subsystem_index
    row_q = low_inv.T[i]
    row_p = low[i]
    q2 = float(((row_q @ modes)**2 * (net.hbar / (2.0 * freqs))).sum())
    p2 = float(((row_p @ modes)**2 * (net.hbar * freqs / 2.0)).sum())
    return GaussianMoments(q2=q2, p2=p2)


def ohmic_chain_network(alpha: float, cutoff_ratio: float, n_modes: int,
                        omega0: float = 1.0, hbar: float = 1.0) -> NormalModeNetwork:
    """Discretized ohmic environment around a unit-mass oscillator.

    Bath frequencies sit on a linear grid over (0, omega_c]; the couplings
    discretize the ohmic weight J(w) = 2 alpha omega0 w through
    c_k^2 = (2/pi) J(w_k) w_k dw, and the standard counter-term keeps the
    stiffness matrix positive definite.
    """
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    if cutoff_ratio <= 1 or n_modes < 1 or omega0 <= 0:
        raise DomainError("need cutoff_ratio > 1, n_modes >= 1, omega0 > 0")
    omega_c = cutoff_ratio * omega0
    d_omega = omega_c / n_modes
    omegas = d_omega * np.arange(1, n_modes + 1)
    c2 = (2.0 / math.pi) * (2.0 * alpha * omega0 * omegas) * omegas * d_omega
    dim = n_modes + 1
    stiff = np.zeros((dim, dim))
    stiff[0, 0] = omega0**2 + float((c2 / omegas**2).sum())
    stiff[np.arange(1, dim), np.arange(1, dim)] = omegas**2
    stiff[0, 1:] = stiff[1:, 0] = -np.sqrt(c2)
    return NormalModeNetwork(mass_matrix=np.eye(dim), stiffness_matrix=stiff,
                             subsystem_index=0, hbar=hbar)


def spin_boson_model(qp: QubitParams, alpha: float, n_modes: int = 2,
                     cutoff_ratio: float = 5.0, fock_cutoff: int = 10,
                     ) -> TruncatedModel:
    """Small ohmic spin-boson surrogate for trend studies.

    Mode frequencies fill a linear grid over (0, omega_c] with
    omega_c = cutoff_ratio * Omega; coupling energies follow
    c_k^2 = alpha * hbar^2 * Omega * w_k * dw / (2 pi), a discretized linear
    spectral density whose overall weight scales with alpha.
    """
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    omega_c = cutoff_ratio * qp.omega
    d_omega = omega_c / n_modes
    omegas = tuple(d_omega * k for k in range(1, n_modes + 1))
    couplings = tuple(
        math.sqrt(alpha * qp.hbar**2 * qp.omega * w * d_omega / (2.0 * math.pi))
        for w in omegas)
    return TruncatedModel(system_kind="spin", system_params=qp,
                          bath_frequencies=omegas, couplings=couplings,
                          fock_cutoff=fock_cutoff)


def truncation_convergence(model: TruncatedModel) -> float:
    """Largest change in the reduced diagonals when fock_cutoff doubles."""
    gs_a = ground_state(model)
    rdm_a = reduced_density(gs_a.vector, model)
    doubled = model.with_cutoff(2 * model.fock_cutoff)
    gs_b = ground_state(doubled)
    rdm_b = reduced_density(gs_b.vector, doubled)
    diag_a = np.diag(rdm_a.entries).real
    diag_b = np.diag(rdm_b.entries).real[:diag_a.size]
    return float(np.abs(diag_a - diag_b).max())


# ---------------------------------------------------------------------------
# quadrature oracles


def _tensor_gauss_legendre(f: Callable[[np.ndarray, np.ndarray], np.ndarray],
                           half_width: float, tol: float,
                           start_order: int = 64, max_order: int = 1024) -> float:
    """2D integral over [-L, L]^2 with automatic order doubling.

    Orders double until two successive results agree within tol.

    Raises:
        ToleranceError: when the doubling cap is reached without agreement.
    """
    previous = None
    delta = math.inf
    order = start_order
    while order <= max_order:
        nodes, weights = np.polynomial.legendre.leggauss(order)
        pts = half_width * nodes
        wts = half_width * weights
        value = float(wts @ f(pts[:, None], pts[None, :]) @ wts)
        if previous is not None:
            delta = abs(value - previous)
            if delta <= tol:
                return value
        previous = value
        order *= 2
    raise ToleranceError(
        f"tensor quadrature did not converge by order {max_order}",
        measured=delta, required=tol)


def _rho_kernel(g: GaussianMoments, hbar: float):
    pref = 1.0 / math.sqrt(2.0 * math.pi * g.q2)

    def kernel(q, qp):
        return pref * np.exp(-(q + qp)**2 / (8.0 * g.q2)
                             - g.p2 * (q - qp)**2 / (2.0 * hbar**2))

    return kernel


def z_via_quadrature(p: OscillatorParams, g: GaussianMoments, chi: float,
                     tol: float = 1e-9) -> float:
    """Generating function by direct quadrature of <q|rho|q'><q'|e^(-chi H)|q>."""
    p._require_bound("the quadrature generating function")
    if chi <= 0:
        raise DomainError("the quadrature route needs chi > 0")
    g.check_uncertainty(p.hbar)
    rho = _rho_kernel(g, p.hbar)
    theta = p.hbar * p.omega * chi
    sinh, cosh = math.sinh(theta), math.cosh(theta)
    scale = p.m * p.omega / (2.0 * p.hbar * sinh)
    pref = math.sqrt(p.m * p.omega / (2.0 * math.pi * p.hbar * sinh))

    def integrand(q, qp):
        return rho(q, qp) * pref * np.exp(-scale * ((q**2 + qp**2) * cosh - 2.0 * q * qp))

    half_width = 8.0 * math.sqrt(2.0 * g.q2)
    return _tensor_gauss_legendre(integrand, half_width, tol)


def rho_nn_via_quadrature(p: OscillatorParams, g: GaussianMoments, n: int,
                          tol: float = 1e-10) -> float:
    """Fock diagonal rho_nn by quadrature against oscillator wavefunctions.

    Raises:
        DomainError: for n > 30, past the quadrature accuracy bound.
    """
    p._require_bound("Fock-basis quadrature")
    if n < 0:
        raise DomainError("n must be non-negative")
    if n > 30:
        raise DomainError("rho_nn quadrature is validated only for n <= 30")
    g.check_uncertainty(p.hbar)
    gamma = p.gamma
    norm = math.sqrt(gamma / (2.0**n * math.factorial(n) * math.sqrt(math.pi)))
    rho = _rho_kernel(g, p.hbar)

    def wavefunction(q):
        return norm * np.exp(-0.5 * (gamma * q)**2) * hermite_poly(n, gamma * q)

    def integrand(q, qp):
        return wavefunction(q) * rho(q, qp) * wavefunction(qp)

    half_width = min(8.0 * math.sqrt(2.0 * g.q2),
                     (math.sqrt(2.0 * n + 1.0) + 8.0) / gamma)
    return _tensor_gauss_legendre(integrand, half_width, tol)


def purity_via_quadrature(p: OscillatorParams, g: GaussianMoments,
                          tol: float = 1e-9) -> float:
    """Tr rho^2 by quadrature of the squared position-space kernel."""
    g.check_uncertainty(p.hbar)
    rho = _rho_kernel(g, p.hbar)

    def integrand(q, qp):
        return rho(q, qp)**2

    half_width = 8.0 * math.sqrt(2.0 * g.q2)
    return _tensor_gauss_legendre(integrand, half_width, tol)
