"""Stepping kernels with a compiled core and a vectorized numpy fallback.

Two hot loops live here: repeated application of the one-step propagator to
a vectorized density matrix, and stochastic pure-state trajectory stepping.
The compiled extension (``gravcat_liv._native``) is used when importable;
``backend=None`` resolves to it, falling back to numpy.  Both backends
consume identical random numbers (numpy Philox streams), so they agree to
rounding; each backend is bitwise deterministic run-to-run.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

try:
    from . import _native
except ImportError:  # pure-python install
    _native = None

#: trajectories per vectorized block in the numpy backend; fixed so the
#: reduction order (and hence the output bits) never depends on n_traj
ENSEMBLE_CHUNK = 512

TRACE_DRIFT_TOL = 1e-12
HERM_DRIFT_TOL = 1e-12


def have_native() -> bool:
    return _native is not None


def resolve_backend(backend: str | None) -> str:
    if backend is None or backend == "auto":
        backend = os.environ.get("GRAVCAT_LIV_BACKEND", "auto")
        if backend == "auto":
            return "native" if _native is not None else "numpy"
    if backend not in ("native", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "native" and _native is None:
        raise ValueError("native backend requested but the compiled "
                         "extension is not available")
    return backend


@dataclass(frozen=True)
class StepCoefficients:
    """Per-step data of the stochastic unitary for X-structured generators.

    The step generator is
        diag(drift_diag)*dt + coupling*dt on the antidiagonal pairs
        - diag(noise_diag) * noise_scale * g
    with g a standard normal; both 2x2 blocks ((1,4) and (2,3)) are real
    symmetric, so the exact exponential is closed-form.
    """

    drift_dt: np.ndarray      # (4,) real, drift Hamiltonian diagonal * dt
    coupling_14_dt: float     # h_eff[0,3] * dt
    coupling_23_dt: float     # h_eff[1,2] * dt
    noise_diag: np.ndarray    # (4,) real, Lindblad-operator diagonal
    noise_scale: float        # sigma * sqrt(2 t_QG dt)
    hbar: float


@dataclass
class DriftStats:
    n_trace_renorm: int
    n_resym: int
    max_trace_drift: float
    max_herm_drift: float


# ---------------------------------------------------------------------------
# propagator loop
# ---------------------------------------------------------------------------

_HERM_PAIRS = [(i, j) for i in range(4) for j in range(4) if i < j]


def propagate_states(P: np.ndarray, v0: np.ndarray, n_steps: int,
                     backend: str | None = None) -> tuple[np.ndarray, DriftStats]:
    """Apply the 16x16 one-step propagator n_steps times, keeping snapshots.

    Per step the trace is renormalized and the matrix re-symmetrized only
    when the drift exceeds 1e-12; occurrences are counted rather than fixed
    silently.
    """
    backend = resolve_backend(backend)
    P = np.ascontiguousarray(P, dtype=complex)
    v0 = np.ascontiguousarray(v0, dtype=complex)
    out = np.empty((n_steps + 1, 16), dtype=complex)
    if backend == "native":
        stats = _native.propagate_states(P, v0, n_steps, out,
                                         TRACE_DRIFT_TOL, HERM_DRIFT_TOL)
        return out, DriftStats(*stats)
    return _propagate_states_numpy(P, v0, n_steps, out)


def _propagate_states_numpy(P, v0, n_steps, out):
    v = v0.copy()
    out[0] = v
    n_renorm = n_resym = 0
    max_tr = max_herm = 0.0
    for step in range(1, n_steps + 1):
        v = P @ v
        tr = v[0] + v[5] + v[10] + v[15]
        drift = abs(tr - 1.0)
        max_tr = max(max_tr, drift)
        if drift > TRACE_DRIFT_TOL:
            v = v / tr
            n_renorm += 1
        m = v.reshape(4, 4)
        herm = float(np.abs(m - m.conj().T).max())
        max_herm = max(max_herm, herm)
        if herm > HERM_DRIFT_TOL:
            m = 0.5 * (m + m.conj().T)
            v = m.reshape(16)
            n_resym += 1
        out[step] = v
    return out, DriftStats(n_renorm, n_resym, max_tr, max_herm)


# ---------------------------------------------------------------------------
# stochastic trajectories
# ---------------------------------------------------------------------------

def _block_step_numpy(psi, app, aqq, b, p, q, hbar):
    """Exact exponential of a real-symmetric 2x2 block, vectorized over rows."""
    mu = 0.5 * (app + aqq)
    delta = 0.5 * (app - aqq)
    r = np.hypot(delta, b)
    angle = r / hbar
    cos_a = np.cos(angle)
    # sin(r/hbar)/r with its r -> 0 limit
    s_over_r = np.where(r > 0.0, np.sin(angle) / np.where(r > 0.0, r, 1.0),
                        1.0 / hbar)
    phase = np.exp(-1j * mu / hbar)
    upp = phase * (cos_a - 1j * s_over_r * delta)
    uqq = phase * (cos_a + 1j * s_over_r * delta)
    upq = phase * (-1j * s_over_r * b)
    new_p = upp * psi[:, p] + upq * psi[:, q]
    new_q = upq * psi[:, p] + uqq * psi[:, q]
    psi[:, p] = new_p
    psi[:, q] = new_q


def _steps_numpy(coeffs: StepCoefficients, psi: np.ndarray, normals: np.ndarray):
    """Generator advancing a (m, 4) state block one step per iteration."""
    a = coeffs.drift_dt
    l = coeffs.noise_diag
    for j in range(normals.shape[1]):
        w = coeffs.noise_scale * normals[:, j]
        _block_step_numpy(psi, a[0] - l[0] * w, a[3] - l[3] * w,
                          coeffs.coupling_14_dt, 0, 3, coeffs.hbar)
        _block_step_numpy(psi, a[1] - l[1] * w, a[2] - l[2] * w,
                          coeffs.coupling_23_dt, 1, 2, coeffs.hbar)
        yield psi


def normals_for_seed(seed: int, n_steps: int) -> np.ndarray:
    """Per-trajectory Gaussian increments from a counter-based Philox stream."""
    rng = np.random.Generator(np.random.Philox(key=int(seed) & (2 ** 64 - 1)))
    return rng.standard_normal(n_steps)


def trajectory_states(coeffs: StepCoefficients, psi0: np.ndarray,
                      normals: np.ndarray,
                      backend: str | None = None) -> tuple[np.ndarray, float]:
    """Evolve one pure state, returning (n_steps+1, 4) snapshots and the
    worst norm drift |<psi|psi> - 1| observed."""
    backend = resolve_backend(backend)
    n_steps = normals.shape[0]
    out = np.empty((n_steps + 1, 4), dtype=complex)
    if backend == "native":
        drift = _native.trajectory_states(_coeff_tuple(coeffs),
                                          np.ascontiguousarray(psi0, dtype=complex),
                                          np.ascontiguousarray(normals), out)
        return out, drift
    psi = np.ascontiguousarray(psi0, dtype=complex).reshape(1, 4).copy()
    out[0] = psi[0]
    for j, state in enumerate(_steps_numpy(coeffs, psi, normals.reshape(1, -1))):
        out[j + 1] = state[0]
    norms = np.abs(np.einsum("ti,ti->t", out, out.conj()))
    return out, float(np.abs(norms - 1.0).max())


def ensemble_accumulate(coeffs: StepCoefficients, psi0: np.ndarray,
                        base_seed: int, n_traj: int, n_steps: int,
                        backend: str | None = None
                        ) -> tuple[np.ndarray, np.ndarray, float]:
    """Accumulate sum(rho) and sum(component^2) over seeded trajectories.

    Returns (S1, S2, max_norm_drift) where S1 is the (T, 4, 4) complex sum
    of pure-state projectors and S2 the (T, 8) sums of squares of
    (rho11, rho22, rho33, rho44, Re rho14, Im rho14, Re rho23, Im rho23).
    Trajectory i uses the Philox stream keyed base_seed + i; accumulation
    follows the fixed chunk layout, so results are reproducible bit-for-bit
    within a backend.
    """
    backend = resolve_backend(backend)
    T = n_steps + 1
    S1 = np.zeros((T, 16), dtype=complex)
    S2 = np.zeros((T, 8), dtype=float)
    psi0 = np.ascontiguousarray(psi0, dtype=complex)
    max_drift = 0.0
    if backend == "native":
        ct = _coeff_tuple(coeffs)
        for i in range(n_traj):
            normals = normals_for_seed(base_seed + i, n_steps)
            drift = _native.trajectory_accumulate(ct, psi0, normals, S1, S2)
            max_drift = max(max_drift, drift)
        return S1.reshape(T, 4, 4), S2, max_drift

    for start in range(0, n_traj, ENSEMBLE_CHUNK):
        m = min(ENSEMBLE_CHUNK, n_traj - start)
        normals = np.stack([normals_for_seed(base_seed + start + i, n_steps)
                            for i in range(m)])
        psi = np.tile(psi0, (m, 1))
        _accumulate(S1[0], S2[0], psi)
        for j, state in enumerate(_steps_numpy(coeffs, psi, normals)):
            _accumulate(S1[j + 1], S2[j + 1], state)
        norms = np.abs(np.einsum("mi,mi->m", psi, psi.conj()))
        max_drift = max(max_drift, float(np.abs(norms - 1.0).max()))
    return S1.reshape(T, 4, 4), S2, max_drift


def _accumulate(s1_row, s2_row, psi):
    s1_row += np.einsum("mi,mj->ij", psi, psi.conj()).reshape(16)
    _accumulate_squares(s2_row, psi)


def _accumulate_squares(row, psi):
    p = np.abs(psi) ** 2
    r14 = psi[:, 0] * psi[:, 3].conj()
    r23 = psi[:, 1] * psi[:, 2].conj()
    row[0] += (p[:, 0] ** 2).sum()
    row[1] += (p[:, 1] ** 2).sum()
    row[2] += (p[:, 2] ** 2).sum()
    row[3] += (p[:, 3] ** 2).sum()
    row[4] += (r14.real ** 2).sum()
    row[5] += (r14.imag ** 2).sum()
    row[6] += (r23.real ** 2).sum()
    row[7] += (r23.imag ** 2).sum()


def _coeff_tuple(coeffs: StepCoefficients):
    return (float(coeffs.drift_dt[0]), float(coeffs.drift_dt[1]),
            float(coeffs.drift_dt[2]), float(coeffs.drift_dt[3]),
            float(coeffs.coupling_14_dt), float(coeffs.coupling_23_dt),
            float(coeffs.noise_diag[0]), float(coeffs.noise_diag[1]),
            float(coeffs.noise_diag[2]), float(coeffs.noise_diag[3]),
            float(coeffs.noise_scale), float(coeffs.hbar))
