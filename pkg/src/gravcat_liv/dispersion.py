"""Modified-dispersion kinematics, deformation coefficients and timescales.

All functions are pure.  SI quantities are plain floats in SI units; the
"natural" constant set has hbar = c = 1 with user-chosen quantum-gravity
scales, which is how the desk-scale simulations are run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# CODATA 2018
GRAVITATIONAL_CONSTANT = 6.67430e-11  # m^3 kg^-1 s^-2
HBAR_SI = 1.054571817e-34  # J s
SPEED_OF_LIGHT = 299792458.0  # m / s
ELEMENTARY_CHARGE = 1.602176634e-19  # C (exact)

#: Planck energy, 1.22e19 GeV expressed in joules
PLANCK_ENERGY_SI = 1.22e19 * 1e9 * ELEMENTARY_CHARGE


@dataclass(frozen=True)
class PhysicalConstants:
    """Constant set threaded through every physical formula.

    ``ell`` is the inverse quantum-gravity momentum scale; its default,
    c / E_P, makes 1/ell the Planck momentum.  ``t_P`` and ``l_P`` are
    always derived as hbar / E_P and c * t_P.
    """

    G: float
    hbar: float
    c: float
    E_P: float
    t_P: float = field(init=False)
    l_P: float = field(init=False)
    ell: float | None = None
    units: str = "SI"

    def __post_init__(self):
        object.__setattr__(self, "t_P", self.hbar / self.E_P)
        object.__setattr__(self, "l_P", self.c * self.t_P)
        if self.ell is None:
            object.__setattr__(self, "ell", self.c / self.E_P)

    @classmethod
    def si(cls, ell: float | None = None) -> "PhysicalConstants":
        return cls(G=GRAVITATIONAL_CONSTANT, hbar=HBAR_SI, c=SPEED_OF_LIGHT,
                   E_P=PLANCK_ENERGY_SI, ell=ell, units="SI")

    @classmethod
    def natural(cls, E_P: float = 1.0, ell: float | None = None,
                G: float = 1.0) -> "PhysicalConstants":
        """hbar = c = 1; E_P, ell and G are dimensionless knobs."""
        return cls(G=G, hbar=1.0, c=1.0, E_P=E_P, ell=ell, units="natural")


@dataclass(frozen=True)
class MdrParams:
    """Correction power n, particle mass and noise-strength timescale."""

    n: int
    M: float
    t_QG: float
    xi_mean: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if self.M <= 0.0:
            raise ValueError("M must be positive")
        if self.t_QG < 0.0:
            raise ValueError("t_QG must be nonnegative")


def mdr_energy(p: float, params: MdrParams, k: PhysicalConstants) -> float:
    """Deformed kinetic energy p^2/2M + (ell/2M) xi (Mc)^(3-n) p^n."""
    if p < 0.0:
        raise ValueError("momentum must be nonnegative")
    base = p * p / (2.0 * params.M)
    correction = (k.ell / (2.0 * params.M)) * params.xi_mean \
        * (params.M * k.c) ** (3 - params.n) * p ** params.n
    return base + correction


def sigma_n(params: MdrParams, k: PhysicalConstants) -> float:
    """Deformation coefficient ell (Mc)^(3-n) (2M)^((n-2)/2).

    This multiplies the n/2 power of the kinetic operator in the deformed
    Hamiltonian and sets the coupling strength to the fluctuating scale.
    """
    return k.ell * (params.M * k.c) ** (3 - params.n) \
        * (2.0 * params.M) ** ((params.n - 2) / 2.0)


def free_decoherence_time(params: MdrParams, delta_E_half_sq: float,
                          k: PhysicalConstants) -> float:
    """Free-particle off-diagonal decay time.

    ``delta_E_half_sq`` is (E(p)^(n/2) - E(q)^(n/2))^2 for the superposed
    momentum eigenstates.  Equals hbar^2 / (sigma_n^2 * delta_E_half_sq *
    t_QG) when ell = c / E_P.
    """
    if delta_E_half_sq <= 0.0:
        raise ValueError("delta_E_half_sq must be positive")
    if params.t_QG == 0.0:
        return math.inf
    n = params.n
    mc2 = params.M * k.c ** 2
    return (2.0 ** (2 - n) * k.hbar ** 2 * k.E_P ** 2
            / (mc2 ** (4 - n) * delta_E_half_sq * params.t_QG))


def relativistic_scaling_time(E: float, k: PhysicalConstants) -> float:
    """n-independent scaling hbar E_P^3 / E^4 (proportionality constant 1).

    Obtained by setting M = E/c^2 and t_QG = t_P; useful only as a scaling,
    hence no attempt at an absolute prefactor.
    """
    if E <= 0.0:
        raise ValueError("E must be positive")
    return k.hbar * k.E_P ** 3 / E ** 4


def critical_energy(n: int, M: float, tau_target: float,
                    k: PhysicalConstants) -> float:
    """Energy scale at which the free-particle decay time drops to tau_target.

    Inverts 2^(2-n) hbar E_P^3 / ((Mc^2)^(4-n) E^n) = tau_target at fixed
    mesoscopic mass M (the relativistic M = E/c^2 reading lives in
    relativistic_scaling_time instead).
    """
    if n not in (1, 2, 3):
        raise ValueError(f"n must be 1, 2 or 3, got {n}")
    if M <= 0.0 or tau_target <= 0.0:
        raise ValueError("M and tau_target must be positive")
    mc2 = M * k.c ** 2
    return (2.0 ** (2 - n) * k.hbar * k.E_P ** 3
            / (mc2 ** (4 - n) * tau_target)) ** (1.0 / n)


def pi_sigma(M: float, k: PhysicalConstants) -> float:
    """Rate coefficient 16 M^2 l_P^4 t_P / hbar^6 of the n=4 generic model."""
    if M < 0.0:
        raise ValueError("M must be nonnegative")
    return 16.0 * M ** 2 * k.l_P ** 4 * k.t_P / k.hbar ** 6


def pi_decoherence_time(M: float, delta_E_sq: float,
                        k: PhysicalConstants) -> float:
    """Decay time 1 / (pi_sigma * delta_E_sq^2).

    ``delta_E_sq`` is the squared-energy gap Delta(E^2) of the superposed
    states, so the decay exponent is pi_sigma * delta_E_sq^2 * t.
    """
    if delta_E_sq <= 0.0:
        raise ValueError("delta_E_sq must be positive")
    return 1.0 / (pi_sigma(M, k) * delta_E_sq ** 2)
