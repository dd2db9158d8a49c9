"""Two-qubit gravitational-cat model: Hamiltonians, generator, timescales.

Basis order is fixed to |00>, |01>, |10>, |11>; density-matrix indices 1..4
in docstrings refer to that order, so rho_14 is the |00> <-> |11> coherence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .dispersion import MdrParams, PhysicalConstants, sigma_n
from .linalg import IDENTITY_2, SIGMA_X, SIGMA_Z, diag_power, kron


@dataclass(frozen=True)
class GravcatParams:
    """Full physical parameter set of the two-particle model.

    ``d`` and ``d_prime`` are the same-well / different-well separations;
    ``L`` is the well spacing and is carried as metadata only (the paper
    leaves d_prime(d, L) open, so d_prime is an independent input).
    """

    M: float
    d: float
    d_prime: float
    L: float
    epsilon: float
    E_ref: float
    n: int
    t_QG: float
    theta: float
    units: str = "natural"

    def __post_init__(self):
        if self.units not in ("SI", "natural"):
            raise ValueError(f"units must be 'SI' or 'natural', got {self.units!r}")
        if not (self.E_ref > self.epsilon > 0.0):
            raise ValueError("kinetic operator not positive-definite "
                             "(requires E_ref > epsilon > 0)")
        if self.d <= 0.0 or self.d_prime <= 0.0 or self.M <= 0.0:
            raise ValueError("M, d and d_prime must be positive")
        if self.t_QG < 0.0:
            raise ValueError("t_QG must be nonnegative")
        if not (0.0 <= self.theta <= math.pi / 2.0):
            raise ValueError("theta must lie in [0, pi/2]")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")

    def mdr(self) -> MdrParams:
        return MdrParams(n=self.n, M=self.M, t_QG=self.t_QG)


@dataclass(frozen=True)
class CouplingConstants:
    """Gravitational couplings alpha = G M^2, Gamma and Omega."""

    alpha: float
    Gamma: float
    Omega: float


@dataclass(frozen=True)
class LindbladGenerator:
    """Effective Hamiltonian, Hermitian Lindblad operator and rate.

    The evolution it generates is
        drho/dt = -(i/hbar) [h_eff, rho] - rate * [L, [L, rho]]
    with L = lindblad_op diagonal in the computational basis and the 1/hbar^2
    of the dissipator already folded into ``rate``.
    """

    h_eff: np.ndarray
    lindblad_op: np.ndarray
    rate: float
    hbar: float = 1.0

    def __post_init__(self):
        h = linalg.as_matrix(self.h_eff, 4)
        lo = linalg.as_matrix(self.lindblad_op, 4)
        scale_h = max(1.0, float(np.abs(h).max()))
        scale_l = max(1.0, float(np.abs(lo).max()))
        if linalg.hermitian_defect(h) > 1e-12 * scale_h:
            raise ValueError("h_eff is not Hermitian")
        if linalg.hermitian_defect(lo) > 1e-12 * scale_l:
            raise ValueError("lindblad_op is not Hermitian")
        if np.abs(lo - np.diag(np.diag(lo))).max() > 1e-12 * scale_l:
            raise ValueError("lindblad_op must be diagonal in the computational basis")
        if self.rate < 0.0:
            raise ValueError("rate must be nonnegative")
        object.__setattr__(self, "h_eff", h)
        object.__setattr__(self, "lindblad_op", lo)


def check_density_matrix(rho, trace_tol: float = 1e-10, herm_tol: float = 1e-10,
                         eig_floor: float = -1e-9) -> np.ndarray:
    """Validate trace, Hermiticity and positivity of a 4x4 state."""
    rho = linalg.as_matrix(rho, 4)
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr} deviates from 1 "
                         f"beyond {trace_tol:g}")
    if linalg.hermitian_defect(rho) > herm_tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    w = linalg.hermitian_eigen(rho, tol=herm_tol).eigenvalues
    if w.min() < eig_floor:
        raise ValueError(f"density matrix has negative eigenvalue {w.min():.3e}")
    return rho


def coupling_constants(M: float, d: float, d_prime: float,
                       k: PhysicalConstants) -> CouplingConstants:
    """alpha = G M^2, Gamma = (alpha/2)(1/d + 1/d'), Omega = (alpha/2)(1/d - 1/d').

    d = d_prime gives Omega = 0 (no entanglement generation); the signed
    Omega is propagated as-is since every observable depends on |Omega|.
    """
    if M <= 0.0 or d <= 0.0 or d_prime <= 0.0:
        raise ValueError("M, d and d_prime must be positive")
    alpha = k.G * M * M
    return CouplingConstants(
        alpha=alpha,
        Gamma=0.5 * alpha * (1.0 / d + 1.0 / d_prime),
        Omega=0.5 * alpha * (1.0 / d - 1.0 / d_prime),
    )


def build_h0(E_ref: float, epsilon: float, Omega: float, Gamma: float) -> np.ndarray:
    """Undeformed Hamiltonian (E - Gamma) 1x1 + (eps/2)(1 sz + sz 1) - Omega sx sx."""
    ident = kron(IDENTITY_2, IDENTITY_2)
    splitting = kron(IDENTITY_2, SIGMA_Z) + kron(SIGMA_Z, IDENTITY_2)
    return (E_ref - Gamma) * ident + 0.5 * epsilon * splitting \
        - Omega * kron(SIGMA_X, SIGMA_X)


def build_kinetic(E_ref: float, epsilon: float) -> np.ndarray:
    """Two-level kinetic operator diag(E+eps, E, E, E-eps)."""
    if E_ref <= epsilon:
        raise ValueError("kinetic operator not positive-definite")
    return np.diag(np.array([E_ref + epsilon, E_ref, E_ref, E_ref - epsilon],
                            dtype=complex))


def kinetic_gap_power(E_ref: float, epsilon: float, n: int) -> float:
    """Spread (E+eps)^(n/2) - (E-eps)^(n/2) of the Lindblad operator, >= 0."""
    if E_ref <= epsilon:
        raise ValueError("kinetic operator not positive-definite")
    return (E_ref + epsilon) ** (n / 2.0) - (E_ref - epsilon) ** (n / 2.0)


def attenuation_A_n(E_ref: float, epsilon: float, n: int, sigma: float) -> float:
    """Attenuation coefficient A_n = |sigma| [(E+eps)^(n/2) - (E-eps)^(n/2)].

    First power of the bracket: this is the only convention under which the
    off-diagonal decay rate A_n^2 t_QG / hbar^2 and the coherent gap shift
    A_n agree with applying the full generator (the bracket-squared variant
    fails both, see the component-equation tests).  The absolute value makes
    A_n >= 0 for either sign of sigma; the signed gap increment lives in
    gap_shift below.
    """
    return abs(sigma) * kinetic_gap_power(E_ref, epsilon, n)


def gap_shift(E_ref: float, epsilon: float, n: int, sigma: float) -> float:
    """Signed increment of the |00> <-> |11> gap due to the sigma K^(n/2) drift.

    The effective gap is 2 eps + gap_shift, i.e. the unitary solution with
    eps -> eps + gap_shift/2.  Positive for sigma < 0; for the default
    ell > 0 branch (sigma > 0) the deformation *reduces* the gap.
    """
    return -sigma * kinetic_gap_power(E_ref, epsilon, n)


def sigma_for_gap_shift(E_ref: float, epsilon: float, n: int, shift: float) -> float:
    """Deformation coefficient realizing a prescribed signed gap shift."""
    b = kinetic_gap_power(E_ref, epsilon, n)
    if b == 0.0:
        if shift == 0.0:
            return 0.0
        raise ValueError("zero kinetic spread cannot realize a nonzero shift")
    return -shift / b


def initial_state(theta: float) -> np.ndarray:
    """Pure state cos(theta)|00> + sin(theta)|11> as a density matrix."""
    if not (0.0 <= theta <= math.pi / 2.0):
        raise ValueError("theta must lie in [0, pi/2]")
    rho = np.zeros((4, 4), dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    rho[0, 0] = c * c
    rho[3, 3] = s * s
    rho[0, 3] = rho[3, 0] = s * c
    return rho


def make_generator(p: GravcatParams, k: PhysicalConstants) -> LindbladGenerator:
    """Model generator: h_eff = H0 - sigma_n K^(n/2), L = K^(n/2).

    rate = sigma_n^2 t_QG / hbar^2; t_QG = 0 gives the purely systematic
    deformation (rate 0).
    """
    couplings = coupling_constants(p.M, p.d, p.d_prime, k)
    sigma = sigma_n(p.mdr(), k)
    return make_generator_from_scales(
        E_ref=p.E_ref, epsilon=p.epsilon, n=p.n, sigma=sigma, t_QG=p.t_QG,
        Omega=couplings.Omega, Gamma=couplings.Gamma, k=k)


def make_generator_from_scales(E_ref: float, epsilon: float, n: int, sigma: float,
                               t_QG: float, Omega: float, Gamma: float,
                               k: PhysicalConstants) -> LindbladGenerator:
    """Generator from explicit energy scales, bypassing the geometry."""
    kinetic = build_kinetic(E_ref, epsilon)
    lop = diag_power(kinetic, n / 2.0)
    h_eff = build_h0(E_ref, epsilon, Omega, Gamma) - sigma * lop
    rate = sigma * sigma * t_QG / k.hbar ** 2
    return LindbladGenerator(h_eff=h_eff, lindblad_op=lop, rate=rate, hbar=k.hbar)


def make_generic_generator(h0, lindblad_op, rate: float,
                           hbar: float = 1.0) -> LindbladGenerator:
    """Generic generator: H0 kept unmodified, arbitrary diagonal Lindbladian.

    With L = K^2 and rate = pi_sigma this is the generalized-uncertainty
    model; rate = 0 gives plain unitary evolution.
    """
    return LindbladGenerator(h_eff=linalg.as_matrix(h0, 4),
                             lindblad_op=linalg.as_matrix(lindblad_op, 4),
                             rate=rate, hbar=hbar)


def gravcat_decoherence_time(p: GravcatParams, k: PhysicalConstants) -> float:
    """Off-diagonal decay time 2^(2-n) hbar^2 E_P^2 / (bracket^2 (Mc^2)^(4-n) t_QG).

    Algebraically identical to hbar^2 / (A_n^2 t_QG) when ell = c / E_P.
    """
    if p.t_QG == 0.0:
        return math.inf
    bracket = kinetic_gap_power(p.E_ref, p.epsilon, p.n)
    if bracket == 0.0:
        return math.inf
    mc2 = p.M * k.c ** 2
    return (2.0 ** (2 - p.n) * k.hbar ** 2 * k.E_P ** 2
            / (bracket ** 2 * mc2 ** (4 - p.n) * p.t_QG))


def entanglement_time(Omega: float, epsilon: float, k: PhysicalConstants) -> float:
    """Entanglement-oscillation timescale hbar / sqrt(Omega^2 + epsilon^2)."""
    if Omega == 0.0 and epsilon == 0.0:
        raise ValueError("degenerate model")
    return k.hbar / math.hypot(Omega, epsilon)
