"""Pure-numpy implementation of the Kerr substep (reference and fallback)."""

import numpy as np


def kerr_step(a, ut, vt, dt, chi):
    """Numpy twin of the compiled ``kerr_step``; same in-place contract."""
    phi = chi * (a.real * a.real + a.imag * a.imag) * dt
    e = np.exp(-1j * phi)
    p = (1.0 - 1j * phi) * e
    g = -1j * chi * dt * (a * a) * e
    a *= e
    if ut is None:
        return
    cu = np.conj(ut)
    cu *= g
    cv = np.conj(vt)
    cv *= g
    ut *= p
    ut += cv
    vt *= p
    vt += cu
