# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Kerr substep for the classical field and its fluctuation matrices."""

from libc.math cimport cos, sin

import numpy as np
cimport numpy as cnp

cnp.import_array()


def kerr_step(double complex[::1] a, object ut, object vt, double dt, double chi):
    """Apply the exact Kerr substep in place.

    ``a`` is rotated by exp(-i chi |a|^2 dt). When ``ut``/``vt`` are given
    (transposed transfer matrices, column j = grid point j, C-contiguous) they
    receive the tangent map of that rotation evaluated at the incoming ``a``.
    """
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t j, l, rows
    cdef double re, im, n, phi, c, s, pr, pi_, gr, gi, ar2, ai2
    cdef double ur, ui, vr, vi
    cdef double[::1] p_re = np.empty(m)
    cdef double[::1] p_im = np.empty(m)
    cdef double[::1] g_re = np.empty(m)
    cdef double[::1] g_im = np.empty(m)
    cdef double complex[:, ::1] u
    cdef double complex[:, ::1] v

    for j in range(m):
        re = a[j].real
        im = a[j].imag
        n = re * re + im * im
        phi = chi * n * dt
        c = cos(phi)
        s = sin(phi)
        # p = (1 - i phi) e^{-i phi}
        pr = c - phi * s
        pi_ = -s - phi * c
        # g = -i chi dt a^2 e^{-i phi}
        ar2 = re * re - im * im
        ai2 = 2.0 * re * im
        gr = chi * dt * (ai2 * c - ar2 * s)
        gi = -chi * dt * (ar2 * c + ai2 * s)
        p_re[j] = pr
        p_im[j] = pi_
        g_re[j] = gr
        g_im[j] = gi
        a[j] = (re * c + im * s) + 1j * (im * c - re * s)

    if ut is None:
        return
    u = ut
    v = vt
    if u.shape[1] != m or v.shape[1] != m or u.shape[0] != v.shape[0]:
        raise ValueError("transfer matrices do not match the field length")
    rows = u.shape[0]
    with nogil:
        for l in range(rows):
            for j in range(m):
                ur = u[l, j].real
                ui = u[l, j].imag
                vr = v[l, j].real
                vi = v[l, j].imag
                pr = p_re[j]
                pi_ = p_im[j]
                gr = g_re[j]
                gi = g_im[j]
                # u' = p u + g conj(v);  v' = p v + g conj(u)
                u[l, j] = (pr * ur - pi_ * ui + gr * vr + gi * vi) + 1j * (
                    pr * ui + pi_ * ur + gi * vr - gr * vi)
                v[l, j] = (pr * vr - pi_ * vi + gr * ur + gi * ui) + 1j * (
                    pr * vi + pi_ * vr + gi * ur - gr * ui)
