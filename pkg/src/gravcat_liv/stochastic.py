"""Monte Carlo unraveling of the master equation.

Each trajectory applies, per step, the exact unitary generated by the
fluctuating Hamiltonian with a single Gaussian increment of the
quantum-gravity parameter.  Averaging the pure-state projectors over the
seeded ensemble reproduces the Lindblad solution; this is the numerical
check of the master-equation derivation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import engine, evolve
from .dispersion import PhysicalConstants, sigma_n
from .gravcat import GravcatParams, coupling_constants, make_generator

RNG_ALGORITHM = "philox4x64 (numpy.random.Philox)"


@dataclass(frozen=True)
class NoiseModel:
    """White-noise model for the fluctuating deformation parameter.

    The integrated parameter over one step is mean*dt + sqrt(2*t_QG*dt)*g
    with g standard normal.  The factor 2 in the variance makes the
    ensemble average converge to the master equation with dissipator rate
    sigma^2 t_QG / hbar^2 (averaging unitaries driven by delta-correlated
    noise of strength s yields a double-commutator coefficient s/2).
    """

    t_QG: float
    dt: float
    mean: float = 1.0

    def __post_init__(self):
        if self.t_QG < 0.0:
            raise ValueError("t_QG must be nonnegative")
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")

    def increment_std(self) -> float:
        """Standard deviation of the per-step noise increment."""
        return math.sqrt(2.0 * self.t_QG * self.dt)


@dataclass
class TrajectoryEnsemble:
    """Seeded trajectory ensemble: mean state series and standard errors.

    ``std_err`` has one column per entry of STDERR_COLUMNS, evaluated on
    the per-trajectory pure states.
    """

    n_traj: int
    base_seed: int
    mean_states: evolve.TimeSeries
    std_err: np.ndarray
    meta: dict = field(default_factory=dict)


STDERR_COLUMNS = ("rho11", "rho22", "rho33", "rho44",
                  "re_rho14", "im_rho14", "re_rho23", "im_rho23")


def _step_coefficients(p: GravcatParams, noise: NoiseModel,
                       k: PhysicalConstants) -> engine.StepCoefficients:
    gen = make_generator(p, k)
    sigma = sigma_n(p.mdr(), k)
    lop_diag = np.real(np.diag(gen.lindblad_op)).copy()
    # drift uses the noise mean; make_generator corresponds to mean = 1
    h0_diag = np.real(np.diag(gen.h_eff)) + sigma * lop_diag
    drift_diag = h0_diag - noise.mean * sigma * lop_diag
    omega = coupling_constants(p.M, p.d, p.d_prime, k).Omega
    limit = evolve.STABILITY_FRACTION * k.hbar / max(
        float(np.abs(drift_diag).max()), abs(omega))
    if noise.dt > limit:
        raise ValueError(f"dt={noise.dt:.3e} violates the stability guard; "
                         f"use dt <= {limit:.3e}")
    return engine.StepCoefficients(
        drift_dt=drift_diag * noise.dt,
        coupling_14_dt=-omega * noise.dt,
        coupling_23_dt=-omega * noise.dt,
        noise_diag=lop_diag,
        noise_scale=sigma * noise.increment_std(),
        hbar=k.hbar,
    )


def _initial_psi(theta: float) -> np.ndarray:
    return np.array([math.cos(theta), 0.0, 0.0, math.sin(theta)],
                    dtype=complex)


def _n_steps(t_max: float, dt: float) -> int:
    if t_max < 0.0:
        raise ValueError("t_max must be nonnegative")
    return 0 if t_max == 0.0 else int(np.ceil(t_max / dt - 1e-9))


def sample_trajectory(p: GravcatParams, noise: NoiseModel, t_max: float,
                      seed: int, k: PhysicalConstants,
                      backend: str | None = None) -> evolve.TimeSeries:
    """One pure-state trajectory, deterministic given (seed, dt, t_max).

    Each step applies the exact matrix exponential of the step generator,
    so the state stays normalized to rounding; a norm drift above 1e-9
    indicates a stepping bug and raises.
    """
    coeffs = _step_coefficients(p, noise, k)
    n_steps = _n_steps(t_max, noise.dt)
    normals = engine.normals_for_seed(seed, n_steps)
    psis, norm_drift = engine.trajectory_states(coeffs, _initial_psi(p.theta),
                                                normals, backend=backend)
    if norm_drift > 1e-9:
        raise evolve.NumericalInvariantError(
            f"trajectory norm drifted by {norm_drift:.3e} (> 1e-9)")
    states = np.einsum("ti,tj->tij", psis, psis.conj())
    meta = {
        "seed": int(seed),
        "dt": noise.dt,
        "rng": RNG_ALGORITHM,
        "numpy_version": np.__version__,
        "backend": engine.resolve_backend(backend),
        "norm_drift": norm_drift,
    }
    return evolve.TimeSeries(times=noise.dt * np.arange(n_steps + 1),
                             states=states, meta=meta)


def ensemble_average(p: GravcatParams, noise: NoiseModel, t_max: float,
                     n_traj: int, base_seed: int, k: PhysicalConstants,
                     backend: str | None = None) -> TrajectoryEnsemble:
    """Mean state and per-component standard errors over n_traj trajectories.

    Trajectory i draws from the Philox stream keyed base_seed + i, so the
    result does not depend on execution order; the reduction order is fixed
    by the implementation, making repeated runs bitwise identical per
    backend.
    """
    if n_traj < 2:
        raise ValueError("n_traj must be at least 2")
    coeffs = _step_coefficients(p, noise, k)
    n_steps = _n_steps(t_max, noise.dt)
    s1, s2, norm_drift = engine.ensemble_accumulate(
        coeffs, _initial_psi(p.theta), base_seed, n_traj, n_steps,
        backend=backend)
    if norm_drift > 1e-9:
        raise evolve.NumericalInvariantError(
            f"trajectory norm drifted by {norm_drift:.3e} (> 1e-9)")
    mean = s1 / n_traj
    comps = np.stack([
        mean[:, 0, 0].real, mean[:, 1, 1].real, mean[:, 2, 2].real,
        mean[:, 3, 3].real, mean[:, 0, 3].real, mean[:, 0, 3].imag,
        mean[:, 1, 2].real, mean[:, 1, 2].imag], axis=1)
    # sample variance of each component, then standard error of the mean
    var = np.maximum(s2 / n_traj - comps ** 2, 0.0) * n_traj / (n_traj - 1)
    std_err = np.sqrt(var / n_traj)
    meta = {
        "base_seed": int(base_seed),
        "n_traj": n_traj,
        "dt": noise.dt,
        "rng": RNG_ALGORITHM,
        "numpy_version": np.__version__,
        "backend": engine.resolve_backend(backend),
        "norm_drift": norm_drift,
        "solver": "trajectories",
    }
    series = evolve.TimeSeries(times=noise.dt * np.arange(n_steps + 1),
                               states=mean, meta=dict(meta))
    return TrajectoryEnsemble(n_traj=n_traj, base_seed=int(base_seed),
                              mean_states=series, std_err=std_err, meta=meta)
