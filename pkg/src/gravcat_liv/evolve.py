"""Time evolution: RK4 Lindblad integration and closed-form solutions.

The generator is time independent, so one classical RK4 step equals the
degree-4 Taylor polynomial of exp(dt * Liouvillian).  ``integrate`` exploits
that: it builds the one-step propagator once and applies it per step, which
is algebraically the same update as ``rk4_step`` but runs as a single small
matrix-vector product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine
from .dispersion import MdrParams, PhysicalConstants, sigma_n
from .gravcat import LindbladGenerator, check_density_matrix

#: fraction of hbar / ||h_eff||_max allowed as the RK4 step
STABILITY_FRACTION = 0.01

#: integration aborts when a snapshot eigenvalue falls below this
MIN_EIGENVALUE_FLOOR = -1e-6

#: entries that must vanish for a state to be X-structured
_NON_X_INDICES = [(0, 1), (0, 2), (1, 3), (2, 3)]


class NumericalInvariantError(RuntimeError):
    """A structural invariant (trace, Hermiticity, positivity) blew up."""


@dataclass
class TimeSeries:
    """Time grid, one 4x4 state per time, and a run-metadata snapshot."""

    times: np.ndarray
    states: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.times[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0.0):
            raise ValueError("time grid must be strictly increasing")
        if self.states.shape != (len(self.times), 4, 4):
            raise ValueError("states must have shape (len(times), 4, 4)")


def stability_limit(g: LindbladGenerator) -> float:
    """Largest allowed RK4 step, STABILITY_FRACTION * hbar / ||h_eff||_max."""
    scale = float(np.abs(g.h_eff).max())
    if scale == 0.0:
        return np.inf
    return STABILITY_FRACTION * g.hbar / scale


def lindblad_rhs(g: LindbladGenerator, rho: np.ndarray) -> np.ndarray:
    """drho/dt = -(i/hbar)[h_eff, rho] - rate [L, [L, rho]]."""
    h, lop = g.h_eff, g.lindblad_op
    comm = h @ rho - rho @ h
    out = (-1j / g.hbar) * comm
    if g.rate != 0.0:
        l2 = lop @ lop
        out = out - g.rate * (l2 @ rho + rho @ l2 - 2.0 * (lop @ rho @ lop))
    return out


def _check_dt(g: LindbladGenerator, dt: float):
    limit = stability_limit(g)
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if dt > limit:
        raise ValueError(f"dt={dt:.3e} violates the stability guard; "
                         f"use dt <= {limit:.3e}")


def rk4_step(g: LindbladGenerator, rho: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step, with drift-triggered renormalization.

    Hermiticity is re-symmetrized and the trace renormalized only when the
    respective drift exceeds 1e-12.
    """
    _check_dt(g, dt)
    k1 = lindblad_rhs(g, rho)
    k2 = lindblad_rhs(g, rho + 0.5 * dt * k1)
    k3 = lindblad_rhs(g, rho + 0.5 * dt * k2)
    k4 = lindblad_rhs(g, rho + dt * k3)
    out = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    tr = np.trace(out)
    if abs(tr - 1.0) > engine.TRACE_DRIFT_TOL:
        out = out / tr
    if float(np.abs(out - out.conj().T).max()) > engine.HERM_DRIFT_TOL:
        out = 0.5 * (out + out.conj().T)
    return out


def build_superoperator(g: LindbladGenerator) -> np.ndarray:
    """16x16 Liouvillian acting on row-major vec(rho)."""
    h, lop = g.h_eff, g.lindblad_op
    ident = np.eye(4, dtype=complex)
    left = lambda a: np.kron(a, ident)
    right = lambda a: np.kron(ident, a.T)
    m = (-1j / g.hbar) * (left(h) - right(h))
    if g.rate != 0.0:
        l2 = lop @ lop
        m = m - g.rate * (left(l2) + right(l2) - 2.0 * left(lop) @ right(lop))
    return m


def rk4_propagator(g: LindbladGenerator, dt: float) -> np.ndarray:
    """Degree-4 Taylor polynomial of exp(dt*M): exactly one RK4 step."""
    x = dt * build_superoperator(g)
    p = np.eye(16, dtype=complex)
    term = np.eye(16, dtype=complex)
    for order in range(1, 5):
        term = term @ x / order
        p = p + term
    return p


def is_x_structured(states: np.ndarray, tol: float = 1e-10) -> bool:
    """True when all entries off the diagonal and antidiagonal are ~ 0."""
    m = np.atleast_3d(states).reshape(-1, 4, 4)
    worst = max(float(np.abs(m[:, i, j]).max()) for i, j in _NON_X_INDICES)
    return worst <= tol


def x_state_eigenvalues(states: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues of X-structured states, shape (..., 4)."""
    s = states
    mean14 = 0.5 * (s[..., 0, 0].real + s[..., 3, 3].real)
    disc14 = np.hypot(0.5 * (s[..., 0, 0].real - s[..., 3, 3].real),
                      np.abs(s[..., 0, 3]))
    mean23 = 0.5 * (s[..., 1, 1].real + s[..., 2, 2].real)
    disc23 = np.hypot(0.5 * (s[..., 1, 1].real - s[..., 2, 2].real),
                      np.abs(s[..., 1, 2]))
    return np.stack([mean14 - disc14, mean14 + disc14,
                     mean23 - disc23, mean23 + disc23], axis=-1)


def min_eigenvalues(states: np.ndarray) -> np.ndarray:
    """Per-snapshot smallest eigenvalue; closed form on X-states."""
    if is_x_structured(states):
        return x_state_eigenvalues(states).min(axis=-1)
    return np.linalg.eigvalsh(states)[..., 0]


def integrate(g: LindbladGenerator, rho0: np.ndarray, t_max: float, dt: float,
              backend: str | None = None) -> TimeSeries:
    """Fixed-step RK4 integration with snapshots at every step.

    Trace/Hermiticity drift is monitored per step (corrections counted in
    meta); positivity is checked on every snapshot and the run fails,
    naming the first bad timestep, if an eigenvalue drops below -1e-6.
    """
    rho0 = check_density_matrix(rho0)
    if t_max < 0.0:
        raise ValueError("t_max must be nonnegative")
    n_steps = 0 if t_max == 0.0 else int(np.ceil(t_max / dt - 1e-9))
    if n_steps > 0:
        _check_dt(g, dt)
    prop = rk4_propagator(g, dt)
    flat, drift = engine.propagate_states(prop, rho0.reshape(16), n_steps,
                                          backend=backend)
    states = flat.reshape(-1, 4, 4)
    times = dt * np.arange(n_steps + 1)
    eig_min = min_eigenvalues(states)
    bad = np.nonzero(eig_min < MIN_EIGENVALUE_FLOOR)[0]
    if bad.size:
        k = int(bad[0])
        raise NumericalInvariantError(
            f"state positivity lost at step {k} (t={times[k]:.6e}): "
            f"min eigenvalue {eig_min[k]:.3e}")
    meta = {
        "dt": dt,
        "n_steps": n_steps,
        "solver": "rk4",
        "backend": engine.resolve_backend(backend),
        "rate": g.rate,
        "hbar": g.hbar,
        "n_trace_renorm": drift.n_trace_renorm,
        "n_resym": drift.n_resym,
        "max_trace_drift": drift.max_trace_drift,
        "max_herm_drift": drift.max_herm_drift,
        "min_eigenvalue": float(eig_min.min()),
    }
    return TimeSeries(times=times, states=states, meta=meta)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def closed_form_unitary(theta: float, Omega: float, epsilon: float, t,
                        k: PhysicalConstants):
    """Unitary-evolution matrix elements (rho11, rho14, rho44).

    Vectorized over t.  The sin prefactor inside rho14 carries
    sqrt(Omega^2 + eps^2) (not divided by hbar), which is what actually
    solves the equations of motion in any unit system; with hbar = 1 the
    two variants coincide.
    """
    w2 = Omega * Omega + epsilon * epsilon
    if w2 <= 0.0:
        raise ValueError("Omega and epsilon cannot both vanish")
    w = np.sqrt(w2)
    t = np.asarray(t, dtype=float)
    phi = 2.0 * t * w / k.hbar
    c2t, s2t = np.cos(2.0 * theta), np.sin(2.0 * theta)
    cos_phi, sin_phi = np.cos(phi), np.sin(phi)
    rho11 = (Omega * Omega - Omega * epsilon * s2t + epsilon * epsilon * c2t
             + Omega * cos_phi * (Omega * c2t + epsilon * s2t)
             + epsilon * epsilon) / (2.0 * w2)
    rho44 = (Omega * Omega + Omega * epsilon * s2t - epsilon * epsilon * c2t
             - Omega * cos_phi * (Omega * c2t + epsilon * s2t)
             + epsilon * epsilon) / (2.0 * w2)
    rho14 = (Omega * c2t * (-1j * w * sin_phi + epsilon * cos_phi - epsilon)
             + s2t * (Omega * Omega - 1j * epsilon * w * sin_phi
                      + epsilon * epsilon * cos_phi)) / (2.0 * w2)
    return rho11, rho14, rho44


def systematic_liv_solution(theta: float, Omega: float, epsilon: float,
                            A_n: float, t, k: PhysicalConstants):
    """Closed form of the systematic case: eps -> eps + A_n/2.

    ``A_n`` is the signed gap shift of the generator (gravcat.gap_shift);
    the positive branch is the one with attenuated concurrence maxima.
    """
    return closed_form_unitary(theta, Omega, epsilon + 0.5 * A_n, t, k)


def x_states_from_components(rho11, rho14, rho44, rho22=0.0, rho33=0.0,
                             rho23=0.0) -> np.ndarray:
    """Assemble (T, 4, 4) X-states from (broadcastable) component arrays."""
    rho11, rho14, rho44, rho22, rho33, rho23 = np.broadcast_arrays(
        np.atleast_1d(np.asarray(rho11, dtype=complex)),
        np.asarray(rho14, dtype=complex), np.asarray(rho44, dtype=complex),
        np.asarray(rho22, dtype=complex), np.asarray(rho33, dtype=complex),
        np.asarray(rho23, dtype=complex))
    out = np.zeros(rho11.shape + (4, 4), dtype=complex)
    out[..., 0, 0] = rho11
    out[..., 1, 1] = rho22
    out[..., 2, 2] = rho33
    out[..., 3, 3] = rho44
    out[..., 0, 3] = rho14
    out[..., 3, 0] = rho14.conj()
    out[..., 1, 2] = rho23
    out[..., 2, 1] = rho23.conj()
    return out


def free_offdiag(p: float, q: float, t, params: MdrParams,
                 k: PhysicalConstants):
    """Momentum-space coherence ratio rho_pq(t) / rho_pq(0) for a free particle.

    Phase from the drift-shifted energies E - sigma_n E^(n/2); damping
    exponent sigma_n^2 (Delta E^(n/2))^2 t_QG t / hbar^2, consistent with
    the master-equation rate (the in-text first-power damping factor does
    not solve the equation and is treated as a typo).
    """
    if p < 0.0 or q < 0.0:
        raise ValueError("momenta must be nonnegative")
    sig = sigma_n(params, k)
    e_p = p * p / (2.0 * params.M)
    e_q = q * q / (2.0 * params.M)
    half = params.n / 2.0
    tilde_p = e_p - sig * e_p ** half
    tilde_q = e_q - sig * e_q ** half
    gap_half = e_p ** half - e_q ** half
    t = np.asarray(t, dtype=float)
    phase = -1j * (tilde_p - tilde_q) * t / k.hbar
    decay = sig * sig * gap_half * gap_half * params.t_QG * t / k.hbar ** 2
    return np.exp(phase - decay)
