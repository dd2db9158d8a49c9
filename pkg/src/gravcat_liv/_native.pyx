# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled stepping kernels; mirrors the numpy implementations in engine.py."""

from libc.math cimport cos, sin, hypot, fabs, sqrt


def propagate_states(double complex[:, ::1] P, double complex[::1] v0,
                     Py_ssize_t n_steps, double complex[:, ::1] out,
                     double trace_tol, double herm_tol):
    """Repeated 16x16 propagator application with drift monitoring.

    Returns (n_trace_renorm, n_resym, max_trace_drift, max_herm_drift).
    """
    cdef double complex v[16]
    cdef double complex w[16]
    cdef double complex tr, avg
    cdef double drift, herm, d
    cdef double max_tr = 0.0, max_herm = 0.0
    cdef Py_ssize_t step, i, j, n_renorm = 0, n_resym = 0

    for i in range(16):
        v[i] = v0[i]
        out[0, i] = v[i]

    for step in range(1, n_steps + 1):
        for i in range(16):
            w[i] = 0.0
            for j in range(16):
                w[i] = w[i] + P[i, j] * v[j]
        for i in range(16):
            v[i] = w[i]

        tr = v[0] + v[5] + v[10] + v[15]
        drift = hypot(tr.real - 1.0, tr.imag)
        if drift > max_tr:
            max_tr = drift
        if drift > trace_tol:
            for i in range(16):
                v[i] = v[i] / tr
            n_renorm += 1

        herm = 0.0
        for i in range(4):
            for j in range(4):
                d = hypot(v[4 * i + j].real - v[4 * j + i].real,
                          v[4 * i + j].imag + v[4 * j + i].imag)
                if d > herm:
                    herm = d
        if herm > max_herm:
            max_herm = herm
        if herm > herm_tol:
            for i in range(4):
                for j in range(i, 4):
                    avg = 0.5 * (v[4 * i + j] + v[4 * j + i].conjugate())
                    v[4 * i + j] = avg
                    v[4 * j + i] = avg.conjugate()
            n_resym += 1

        for i in range(16):
            out[step, i] = v[i]

    return n_renorm, n_resym, max_tr, max_herm


cdef inline void _block_step(double app, double aqq, double b, double hbar,
                             double complex* pp, double complex* pq) nogil:
    cdef double mu = 0.5 * (app + aqq)
    cdef double delta = 0.5 * (app - aqq)
    cdef double r = hypot(delta, b)
    cdef double angle = r / hbar
    cdef double ca = cos(angle)
    cdef double s_over_r
    cdef double complex phase, upp, uqq, upq, new_p, new_q
    if r > 0.0:
        s_over_r = sin(angle) / r
    else:
        s_over_r = 1.0 / hbar
    phase = cos(mu / hbar) - 1j * sin(mu / hbar)
    upp = phase * (ca - 1j * (s_over_r * delta))
    uqq = phase * (ca + 1j * (s_over_r * delta))
    upq = phase * (-1j * (s_over_r * b))
    new_p = upp * pp[0] + upq * pq[0]
    new_q = upq * pp[0] + uqq * pq[0]
    pp[0] = new_p
    pq[0] = new_q


cdef inline double _step_loop(tuple coeffs, double complex[::1] psi0,
                              double[::1] normals,
                              double complex[:, ::1] states) except -1.0:
    """Evolve one trajectory, writing every state into ``states``.

    Returns the final |<psi|psi> - 1| norm drift.
    """
    cdef double a0 = coeffs[0], a1 = coeffs[1], a2 = coeffs[2], a3 = coeffs[3]
    cdef double b14 = coeffs[4], b23 = coeffs[5]
    cdef double l0 = coeffs[6], l1 = coeffs[7], l2 = coeffs[8], l3 = coeffs[9]
    cdef double noise_scale = coeffs[10], hbar = coeffs[11]
    cdef double complex psi[4]
    cdef double w, norm
    cdef Py_ssize_t j, i
    cdef Py_ssize_t n_steps = normals.shape[0]

    for i in range(4):
        psi[i] = psi0[i]
        states[0, i] = psi[i]
    for j in range(n_steps):
        w = noise_scale * normals[j]
        _block_step(a0 - l0 * w, a3 - l3 * w, b14, hbar, &psi[0], &psi[3])
        _block_step(a1 - l1 * w, a2 - l2 * w, b23, hbar, &psi[1], &psi[2])
        for i in range(4):
            states[j + 1, i] = psi[i]
    norm = 0.0
    for i in range(4):
        norm += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
    return fabs(norm - 1.0)


def trajectory_states(tuple coeffs, double complex[::1] psi0,
                      double[::1] normals, double complex[:, ::1] out):
    return _step_loop(coeffs, psi0, normals, out)


def trajectory_accumulate(tuple coeffs, double complex[::1] psi0,
                          double[::1] normals, double complex[:, ::1] S1,
                          double[:, ::1] S2):
    """Evolve one trajectory and add its projector and squared components
    into the running ensemble sums."""
    cdef double a0 = coeffs[0], a1 = coeffs[1], a2 = coeffs[2], a3 = coeffs[3]
    cdef double b14 = coeffs[4], b23 = coeffs[5]
    cdef double l0 = coeffs[6], l1 = coeffs[7], l2 = coeffs[8], l3 = coeffs[9]
    cdef double noise_scale = coeffs[10], hbar = coeffs[11]
    cdef double complex psi[4]
    cdef double complex r14, r23
    cdef double w, norm, p0, p1, p2, p3
    cdef Py_ssize_t j, i, m
    cdef Py_ssize_t n_steps = normals.shape[0]

    for i in range(4):
        psi[i] = psi0[i]
    for j in range(n_steps + 1):
        if j > 0:
            w = noise_scale * normals[j - 1]
            _block_step(a0 - l0 * w, a3 - l3 * w, b14, hbar, &psi[0], &psi[3])
            _block_step(a1 - l1 * w, a2 - l2 * w, b23, hbar, &psi[1], &psi[2])
        for i in range(4):
            for m in range(4):
                S1[j, 4 * i + m] = S1[j, 4 * i + m] + psi[i] * psi[m].conjugate()
        p0 = psi[0].real * psi[0].real + psi[0].imag * psi[0].imag
        p1 = psi[1].real * psi[1].real + psi[1].imag * psi[1].imag
        p2 = psi[2].real * psi[2].real + psi[2].imag * psi[2].imag
        p3 = psi[3].real * psi[3].real + psi[3].imag * psi[3].imag
        r14 = psi[0] * psi[3].conjugate()
        r23 = psi[1] * psi[2].conjugate()
        S2[j, 0] += p0 * p0
        S2[j, 1] += p1 * p1
        S2[j, 2] += p2 * p2
        S2[j, 3] += p3 * p3
        S2[j, 4] += r14.real * r14.real
        S2[j, 5] += r14.imag * r14.imag
        S2[j, 6] += r23.real * r23.real
        S2[j, 7] += r23.imag * r23.imag
    norm = p0 + p1 + p2 + p3
    return fabs(norm - 1.0)
