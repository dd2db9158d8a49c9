"""Derived quantities: concurrence, populations, purity, coherence.

concurrence_x is the fast path for X-structured states (the only states the
model produces); concurrence_wootters is the general spin-flip construction
and doubles as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .dispersion import PhysicalConstants
from .gravcat import entanglement_time

X_STATE_TOL = 1e-10

#: tally of tiny negative eigenvalues/populations zeroed before square
#: roots; exposed for run diagnostics
_clamp_count = 0


def clamp_count() -> int:
    return _clamp_count


def _clip_negative(values: np.ndarray, floor: float, what: str) -> np.ndarray:
    """Zero out tiny floating-point negatives, counting the occurrences."""
    global _clamp_count
    low = float(values.min())
    if low < floor:
        raise ValueError(f"invalid state: {what} = {low:.3e}")
    if low < 0.0:
        _clamp_count += int((values < 0.0).sum())
        return np.maximum(values, 0.0)
    return values


@dataclass(frozen=True)
class ObservableRecord:
    """Scalar observables of one snapshot."""

    t: float
    concurrence: float
    rho11: float
    rho22: float
    rho33: float
    rho44: float
    purity: float
    abs_rho14: float


def _non_x_magnitude(rho: np.ndarray) -> float:
    return max(abs(rho[0, 1]), abs(rho[0, 2]), abs(rho[1, 3]), abs(rho[2, 3]),
               abs(rho[1, 0]), abs(rho[2, 0]), abs(rho[3, 1]), abs(rho[3, 2]))


def concurrence_x(rho) -> float:
    """Concurrence 2 max(|rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33), 0).

    Valid only for X-structured states; anything else is rejected with a
    pointer to concurrence_wootters.
    """
    rho = linalg.as_matrix(rho, 4)
    if _non_x_magnitude(rho) > X_STATE_TOL:
        raise ValueError("state is not X-structured; use concurrence_wootters")
    pops = _clip_negative(np.real(np.diag(rho)), -1e-9, "population")
    c = 2.0 * max(abs(rho[1, 2]) - math.sqrt(pops[0] * pops[3]),
                  abs(rho[0, 3]) - math.sqrt(pops[1] * pops[2]),
                  0.0)
    return min(c, 1.0)


def concurrence_wootters(rho) -> float:
    """General two-qubit concurrence via the spin-flipped state.

    lambda_i are the decreasing square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy).  They equal the singular values of the
    complex-symmetric sqrt(rho) (sy x sy) sqrt(rho)^T, which is how they
    are computed here: that route keeps near-zero lambdas accurate to
    machine epsilon instead of sqrt(epsilon).
    """
    rho = linalg.as_matrix(rho, 4)
    syy = linalg.kron(linalg.SIGMA_Y, linalg.SIGMA_Y)
    eig = linalg.hermitian_eigen(rho, tol=1e-8)
    w = _clip_negative(eig.eigenvalues, -1e-9, "state eigenvalue")
    sqrt_rho = (eig.eigenvectors * np.sqrt(w)) @ eig.eigenvectors.conj().T
    lam = linalg.singular_values(sqrt_rho @ syy @ sqrt_rho.T)
    return min(max(lam[0] - lam[1] - lam[2] - lam[3], 0.0), 1.0)


def concurrence_theta0(t, Omega: float, epsilon: float,
                       k: PhysicalConstants):
    """Closed-form concurrence for the initially unentangled state.

    Zero identically when Omega = 0; zeros at multiples of pi tau_E.
    Vectorized over t.
    """
    tau = entanglement_time(Omega, epsilon, k)
    t = np.asarray(t, dtype=float)
    x = t / tau
    w2 = Omega * Omega + epsilon * epsilon
    return (2.0 * abs(Omega) / w2) * np.abs(np.sin(x)) \
        * np.sqrt(epsilon * epsilon + Omega * Omega * np.cos(x) ** 2)


def x_series_components(states: np.ndarray, tol: float = X_STATE_TOL) -> dict:
    """Vectorized observables of an X-structured (T, 4, 4) state stack.

    Asserts the X structure on every snapshot (model evolution preserves
    it); returns the arrays backing the CSV schema.
    """
    states = np.asarray(states, dtype=complex)
    worst = max(float(np.abs(states[:, i, j]).max(initial=0.0))
                for i, j in [(0, 1), (0, 2), (1, 3), (2, 3)])
    if worst > tol:
        raise ValueError(f"series left the X-state manifold "
                         f"(off-structure magnitude {worst:.3e})")
    pops = np.maximum(np.real(np.einsum("tii->ti", states)), 0.0)
    abs14 = np.abs(states[:, 0, 3])
    abs23 = np.abs(states[:, 1, 2])
    conc = 2.0 * np.maximum.reduce([
        abs23 - np.sqrt(pops[:, 0] * pops[:, 3]),
        abs14 - np.sqrt(pops[:, 1] * pops[:, 2]),
        np.zeros(len(states)),
    ])
    return {
        "rho11": pops[:, 0], "rho22": pops[:, 1],
        "rho33": pops[:, 2], "rho44": pops[:, 3],
        "re_rho14": states[:, 0, 3].real, "im_rho14": states[:, 0, 3].imag,
        "re_rho23": states[:, 1, 2].real, "im_rho23": states[:, 1, 2].imag,
        "concurrence": np.minimum(conc, 1.0),
        "purity": np.real(np.einsum("tij,tji->t", states, states)),
    }


def record(rho, t: float) -> ObservableRecord:
    """All scalar observables of a snapshot; X fast path when applicable."""
    rho = linalg.as_matrix(rho, 4)
    if _non_x_magnitude(rho) <= X_STATE_TOL:
        conc = concurrence_x(rho)
    else:
        conc = concurrence_wootters(rho)
    pops = [float(rho[i, i].real) for i in range(4)]
    if abs(sum(pops) - 1.0) > 1e-10:
        raise ValueError("populations do not sum to 1")
    purity = float(np.einsum("ij,ji->", rho, rho).real)
    return ObservableRecord(
        t=float(t), concurrence=conc,
        rho11=pops[0], rho22=pops[1], rho33=pops[2], rho44=pops[3],
        purity=purity, abs_rho14=float(abs(rho[0, 3])),
    )
