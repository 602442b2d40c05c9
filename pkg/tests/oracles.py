"""Independent reference computations used by the tests."""

import numpy as np
from scipy.linalg import expm


def tmsv_fock_entropy(r: float, truncation: int = 200) -> tuple[float, float]:
    """Reduced-state entropy and mean photon number of a two-mode squeezed vacuum.

    The state is built by exponentiating ``r (a^+ b^+ - a b)`` in the truncated
    Fock space (restricted to the invariant span of |n, n>), the reduced density
    matrix is obtained by an explicit partial trace over the second mode.
    """
    n = np.arange(truncation - 1)
    gen = np.zeros((truncation, truncation))
    gen[n + 1, n] = n + 1  # a^+ b^+ |n,n> = (n+1) |n+1,n+1>
    gen[n, n + 1] = -(n + 1)  # -a b |n+1,n+1> = -(n+1) |n,n>
    vac = np.zeros(truncation)
    vac[0] = 1.0
    coeffs = expm(r * gen) @ vac
    psi = np.diag(coeffs)  # psi[n, m] amplitude of |n>_a |m>_b
    rho_a = np.einsum("nk,mk->nm", psi, psi.conj())
    p = np.linalg.eigvalsh(rho_a)
    p = p[p > 1e-300]
    entropy = float(-np.sum(p * np.log(p)))
    mean_n = float(np.real(np.trace(np.diag(np.arange(truncation)) @ rho_a)))
    return entropy, mean_n


def analytic_soliton(x: np.ndarray, t: float, nbar: float = 1.0) -> np.ndarray:
    """Fundamental soliton of ``i a_t = -a_xx/2 - |a|^2 a / nbar``."""
    return np.sqrt(nbar) / np.cosh(x) * np.exp(0.5j * t)


def dft_matrix_bruteforce(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = np.empty((w.size, x.size), dtype=complex)
    for n, wn in enumerate(w):
        for j, xj in enumerate(x):
            out[n, j] = np.exp(1j * wn * xj)
    return out / np.sqrt(x.size)
