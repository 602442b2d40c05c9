"""Linearized quantum fluctuations as Bogoliubov transfer matrices.

Discrete operators ``a_j = a(x_j) sqrt(dx)`` obey ``[a_j, a_k^+] = delta_jk``.
The fluctuation state at distance t is

    da_j(t) = sum_l u_jl da_l(0) + v_jl da_l(0)^+

with vacuum input (coherent initial state). Both matrices are advanced by the
same split-step scheme as the classical field; the Kerr substep applies the
exact tangent map of the local rotation ``a -> a exp(-i chi |a|^2 dt)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._stepper import split_step
from .classical import ClassicalField
from .errors import DesyncError, DomainMismatchError
from .grid import Domain, Grid, conjugate_grid


@dataclass(frozen=True, eq=False)
class FluctuationState:
    grid: Grid
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def bogoliubov_residual(self) -> float:
        """Max-entry residual of ``u u^+ - v v^+ - I``."""
        u, v = self.u, self.v
        r = u @ u.conj().T - v @ v.conj().T
        r[np.diag_indices_from(r)] -= 1.0
        return float(np.abs(r).max())

    def symmetry_residual(self) -> float:
        """Max-entry residual of ``u v^T - (u v^T)^T``."""
        uv = self.u @ self.v.T
        return float(np.abs(uv - uv.T).max())


@dataclass(frozen=True, eq=False)
class CorrelationPair:
    """Second moments ``b_jk = <da_j da_k>`` and ``c_jk = <da_j^+ da_k> + delta_jk / 2``."""

    grid: Grid
    b: np.ndarray
    c: np.ndarray
    index: np.ndarray | None = None  # selected grid indices after restriction

    @property
    def coords(self) -> np.ndarray:
        return self.grid.x if self.index is None else self.grid.x[self.index]

    def photon_number(self) -> float:
        return float(np.trace(self.c).real - 0.5 * self.c.shape[0])


def initial_fluctuations(grid: Grid) -> FluctuationState:
    if grid.domain_tag is not Domain.X:
        raise DomainMismatchError("fluctuations are propagated on X-domain grids")
    m = grid.m
    return FluctuationState(grid, np.eye(m, dtype=complex), np.zeros((m, m), dtype=complex), 0.0)


def co_propagate(
    classical: ClassicalField,
    fs: FluctuationState,
    dt: float,
    steps: int,
    chi: float | None = None,
    kerr_step=None,
) -> tuple[ClassicalField, FluctuationState]:
    """Advance classical field and fluctuations together.

    ``chi`` overrides the coupling implied by ``classical.nbar`` (``chi=0``
    gives free dispersion).
    """
    if fs.grid != classical.grid:
        raise DesyncError("fluctuation state and classical field use different grids")
    if abs(fs.t - classical.t) > 1e-12 * max(1.0, abs(fs.t)):
        raise DesyncError(f"fluctuations at t={fs.t} but classical field at t={classical.t}")
    if steps < 0 or int(steps) != steps:
        raise ValueError("steps must be a non-negative integer")
    if steps and not dt > 0:
        raise ValueError("dt must be positive")
    chi = classical.chi if chi is None else chi
    ut = np.array(fs.u.T, dtype=complex, order="C")
    vt = np.array(fs.v.T, dtype=complex, order="C")
    a, ut, vt = split_step(
        classical.amplitude.copy(), ut, vt, classical.grid.wavenumbers, dt, int(steps), chi, kerr_step
    )
    t = classical.t + steps * dt
    new_field = ClassicalField(classical.grid, a, t, classical.nbar)
    new_fs = FluctuationState(fs.grid, np.ascontiguousarray(ut.T), np.ascontiguousarray(vt.T), t)
    return new_field, new_fs


def propagate_fluctuations(
    fs: FluctuationState, classical: ClassicalField, dt: float, steps: int, chi: float | None = None
) -> FluctuationState:
    return co_propagate(classical, fs, dt, steps, chi=chi)[1]


def correlations(fs: FluctuationState) -> CorrelationPair:
    u, v = fs.u, fs.v
    b = u @ v.T
    c = v.conj() @ v.T
    c[np.diag_indices_from(c)] += 0.5
    return CorrelationPair(fs.grid, b, c)


def fourier_matrix(grid: Grid) -> np.ndarray:
    """Unitary ``F_nj = exp(i omega_n x_j) / sqrt(m)``, rows ordered by the conjugate grid."""
    w = conjugate_grid(grid).x
    return np.exp(1j * np.outer(w, grid.x)) / np.sqrt(grid.m)


def to_omega_domain(cp: CorrelationPair) -> CorrelationPair:
    if cp.grid.domain_tag is not Domain.X:
        raise DomainMismatchError("correlations are already in the omega domain")
    f = fourier_matrix(cp.grid)
    b = f @ cp.b @ f.T
    n = cp.c.copy()
    n[np.diag_indices_from(n)] -= 0.5
    c = f.conj() @ n @ f.T
    c[np.diag_indices_from(c)] += 0.5
    return CorrelationPair(conjugate_grid(cp.grid), b, c)


def write_matrix_csv(mat: np.ndarray, path) -> Path:
    """Row-major dump with header ``j,k,re,im``."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["j", "k", "re", "im"])
        for (j, k), z in np.ndenumerate(mat):
            w.writerow([j, k, repr(float(z.real)), repr(float(z.imag))])
    return path
