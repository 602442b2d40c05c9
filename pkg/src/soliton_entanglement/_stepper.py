"""Symmetric split-step driver shared by the classical and fluctuation solvers."""

import numpy as np
import scipy.fft as sfft

from . import kernels
from .errors import IntegratorError


def _disperse(arr, prop, axis=-1):
    w = sfft.fft(arr, axis=axis)
    w *= prop
    return sfft.ifft(w, axis=axis, overwrite_x=True)


def split_step(a, ut, vt, wavenumbers, dt, steps, chi, kerr_step=None):
    """Advance ``steps`` Strang steps (half dispersion, Kerr, half dispersion).

    Consecutive dispersion half-steps are fused. ``ut``/``vt`` hold transposed
    transfer matrices (row l = input mode, column j = grid point) or are None.
    Returns the new ``(a, ut, vt)``; inputs may be overwritten.
    """
    if steps == 0:
        return a, ut, vt
    kerr_step = kerr_step or kernels.kerr_step
    half = np.exp(-0.25j * wavenumbers**2 * dt)
    full = half * half
    a = np.ascontiguousarray(a, dtype=complex)
    track = ut is not None

    def disperse(prop):
        nonlocal a, ut, vt
        a = _disperse(a, prop)
        if track:
            ut = _disperse(ut, prop, axis=1)
            vt = _disperse(vt, prop, axis=1)

    disperse(half)
    for s in range(steps):
        kerr_step(a, ut, vt, dt, chi)
        disperse(full if s < steps - 1 else half)

    if not np.isfinite(a).all() or (track and not (np.isfinite(ut.sum()) and np.isfinite(vt.sum()))):
        raise IntegratorError("non-finite values after split-step propagation")
    return a, ut, vt
