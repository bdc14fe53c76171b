"""Compiled fixed-step RK4 integrator for the Lindblad equation.

The generator is passed in sparse coordinate form. With
``K = −iH − ½ Σ L†L`` the right-hand side is ``Kρ + (Kρ)† + Σ LρL†``,
which halves the dense work compared with the commutator form.
"""

from __future__ import annotations

import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True, fastmath=True, error_model="numpy")
def _deriv(rho, m, s_rows, s_cols, s_vals, t_rows, t_cols, t_vals, t_term, coef,
           j_ptr, j_rows, j_cols, j_vals, work, out):
    d = rho.shape[0]
    for i in range(d):
        for k in range(d):
            work[i, k] = 0.0
    for e in range(s_rows.size):
        r = s_rows[e]
        c = s_cols[e]
        v = s_vals[e]
        for k in range(d):
            work[r, k] += v * rho[c, k]
    for e in range(t_rows.size):
        v = -1j * t_vals[e] * coef[t_term[e], m]
        if v == 0.0:
            continue
        r = t_rows[e]
        c = t_cols[e]
        for k in range(d):
            work[r, k] += v * rho[c, k]
    for i in range(d):
        for k in range(d):
            out[i, k] = work[i, k] + np.conj(work[k, i])
    for op in range(j_ptr.size - 1):
        for a in range(j_ptr[op], j_ptr[op + 1]):
            i = j_rows[a]
            j = j_cols[a]
            la = j_vals[a]
            for b in range(j_ptr[op], j_ptr[op + 1]):
                out[i, j_rows[b]] += la * rho[j, j_cols[b]] * np.conj(j_vals[b])


@nb.njit(cache=True, nogil=True, fastmath=True, error_model="numpy")
def rk4_lindblad(rho0, s_rows, s_cols, s_vals, t_rows, t_cols, t_vals, t_term, coef,
                 j_ptr, j_rows, j_cols, j_vals, monitors, dt, n_steps):
    """Integrate from ``t=0`` over ``n_steps`` steps of size ``dt``.

    ``coef[k, m]`` holds coefficient ``k`` at time ``m·dt/2``. Returns the
    final state, the trapezoid integrals of the monitored populations, the
    largest trace excursion and the largest pre-symmetrization
    anti-Hermitian residue seen.
    """
    d = rho0.shape[0]
    rho = rho0.copy()
    tmp = np.empty_like(rho)
    work = np.empty_like(rho)
    k1 = np.empty_like(rho)
    k2 = np.empty_like(rho)
    k3 = np.empty_like(rho)
    k4 = np.empty_like(rho)
    n_mon = monitors.shape[0]
    acc = np.zeros(n_mon)
    prev = np.zeros(n_mon)
    for q in range(n_mon):
        s = 0.0
        for i in range(d):
            s += monitors[q, i] * rho[i, i].real
        prev[q] = s
    drift = 0.0
    herm = 0.0
    h2 = 0.5 * dt
    for step in range(n_steps):
        m0 = 2 * step
        _deriv(rho, m0, s_rows, s_cols, s_vals, t_rows, t_cols, t_vals, t_term, coef,
               j_ptr, j_rows, j_cols, j_vals, work, k1)
        for i in range(d):
            for k in range(d):
                tmp[i, k] = rho[i, k] + h2 * k1[i, k]
        _deriv(tmp, m0 + 1, s_rows, s_cols, s_vals, t_rows, t_cols, t_vals, t_term, coef,
               j_ptr, j_rows, j_cols, j_vals, work, k2)
        for i in range(d):
            for k in range(d):
                tmp[i, k] = rho[i, k] + h2 * k2[i, k]
        _deriv(tmp, m0 + 1, s_rows, s_cols, s_vals, t_rows, t_cols, t_vals, t_term, coef,
               j_ptr, j_rows, j_cols, j_vals, work, k3)
        for i in range(d):
            for k in range(d):
                tmp[i, k] = rho[i, k] + dt * k3[i, k]
        _deriv(tmp, m0 + 2, s_rows, s_cols, s_vals, t_rows, t_cols, t_vals, t_term, coef,
               j_ptr, j_rows, j_cols, j_vals, work, k4)
        for i in range(d):
            for k in range(d):
                rho[i, k] += dt / 6.0 * (k1[i, k] + 2.0 * k2[i, k] + 2.0 * k3[i, k] + k4[i, k])
        tr = 0.0
        for i in range(d):
            for k in range(i, d):
                a = rho[i, k]
                b = np.conj(rho[k, i])
                r = abs(a - b)
                if r > herm:
                    herm = r
                avg = 0.5 * (a + b)
                rho[i, k] = avg
                rho[k, i] = np.conj(avg)
            tr += rho[i, i].real
        if abs(tr - 1.0) > drift:
            drift = abs(tr - 1.0)
        for q in range(n_mon):
            s = 0.0
            for i in range(d):
                s += monitors[q, i] * rho[i, i].real
            acc[q] += h2 * (prev[q] + s)
            prev[q] = s
    return rho, acc, drift, herm
