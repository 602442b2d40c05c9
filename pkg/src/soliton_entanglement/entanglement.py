"""Bipartite entanglement of the Gaussian fluctuation state.

For a pure global state the entanglement of a bipartition equals the entropy of
either reduced state. The reduced Gaussian state is diagonalized into thermal
modes ``b_k = sum_j mu_k(j) da_j + nu_k(j) da_j^+`` with

    <b_k^+ b_k'> = nbar_k delta_kk',   <b_k b_k'> = 0,

and ``E = sum_k S_th(nbar_k)``.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DomainMismatchError,
    InvalidCorrelationsError,
    InvalidPartitionError,
    UnphysicalStateError,
)
from .fluctuations import CorrelationPair
from .grid import Domain

#: tolerance below the vacuum floor that is treated as rounding noise
VACUUM_SLACK = 1e-6
SYMMETRY_TOL = 1e-8
#: nu_bar below ROUNDING_FLOOR * eps * ||Sigma|| is indistinguishable from vacuum
ROUNDING_FLOOR = 1e3


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self) -> "Side":
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


@dataclass(frozen=True)
class Partition:
    """Region ``coordinate < cut`` (LEFT) or ``coordinate >= cut`` (RIGHT)."""

    domain_tag: Domain = Domain.X
    cut: float = 0.0
    side: Side = Side.LEFT

    def complement(self) -> "Partition":
        return Partition(self.domain_tag, self.cut, self.side.other)

    def select(self, coords: np.ndarray) -> np.ndarray:
        mask = coords < self.cut if self.side is Side.LEFT else coords >= self.cut
        idx = np.flatnonzero(mask)
        if idx.size == 0 or idx.size == coords.size:
            raise InvalidPartitionError(
                f"cut {self.cut} selects {idx.size} of {coords.size} points; need a strict non-empty subset"
            )
        return idx


@dataclass(frozen=True, eq=False)
class ThermalModeDecomposition:
    nu_bar: np.ndarray
    mu: np.ndarray
    nu_fn: np.ndarray
    per_mode_entropy: np.ndarray
    lam: np.ndarray  # raw symplectic eigenvalues nu_bar + 1/2 before clamping

    def orthonormality_residual(self) -> float:
        g = self.mu @ self.mu.conj().T - self.nu_fn @ self.nu_fn.conj().T
        g[np.diag_indices_from(g)] -= 1.0
        return float(np.abs(g).max()) if g.size else 0.0

    def null_residual(self) -> float:
        h = self.mu @ self.nu_fn.T - self.nu_fn @ self.mu.T
        return float(np.abs(h).max()) if h.size else 0.0


@dataclass(frozen=True, eq=False)
class EntanglementReport:
    total: float
    decomposition: ThermalModeDecomposition
    relevant_count: int
    partition: Partition | None
    t: float | None = None
    coords: np.ndarray | None = None


def entropy_thermal(nu_bar: float) -> float:
    """Entropy in nats of a single-mode thermal state with mean photon number ``nu_bar``."""
    if nu_bar < 0 or math.isnan(nu_bar):
        raise ValueError(f"mean photon number must be non-negative, got {nu_bar}")
    if nu_bar == 0:
        return 0.0
    return (nu_bar + 1.0) * math.log1p(nu_bar) - nu_bar * math.log(nu_bar)


def thermal_entropies(nu_bar) -> np.ndarray:
    n = np.asarray(nu_bar, dtype=float)
    if np.any(n < 0):
        raise ValueError("mean photon numbers must be non-negative")
    out = (n + 1.0) * np.log1p(n)
    pos = n > 0
    out[pos] -= n[pos] * np.log(n[pos])
    return out


def restrict(cp: CorrelationPair, p: Partition) -> CorrelationPair:
    if cp.grid.domain_tag is not p.domain_tag:
        raise DomainMismatchError(
            f"partition in {p.domain_tag.value}-domain but correlations in {cp.grid.domain_tag.value}-domain"
        )
    if cp.index is not None:
        raise InvalidPartitionError("correlations are already restricted")
    idx = p.select(cp.grid.x)
    sel = np.ix_(idx, idx)
    return CorrelationPair(cp.grid, cp.b[sel], cp.c[sel], idx)


def _check_moments(b, c):
    scale = max(1.0, float(np.abs(c).max()), float(np.abs(b).max()) if b.size else 0.0)
    if np.abs(c - c.conj().T).max() > SYMMETRY_TOL * scale:
        raise InvalidCorrelationsError("c is not Hermitian")
    if np.abs(b - b.T).max() > SYMMETRY_TOL * scale:
        raise InvalidCorrelationsError("b is not symmetric")


def _sqrtm_psd(sigma):
    w, vecs = np.linalg.eigh(sigma)
    if w[0] <= 0:
        raise UnphysicalStateError(f"second-moment matrix is not positive definite (min eigenvalue {w[0]:.3e})")
    return (vecs * np.sqrt(w)) @ vecs.conj().T, float(w[-1])


def thermal_modes(cp: CorrelationPair) -> ThermalModeDecomposition:
    """Symplectic diagonalization of the (restricted) correlations.

    The eigenproblem ``K Sigma w = lam w`` with ``Sigma = [[c*, b], [b*, c]]`` and
    ``K = diag(I, -I)`` is solved through the Hermitian matrix
    ``Sigma^1/2 K Sigma^1/2``, which has the same spectrum and is numerically
    stable for the strongly degenerate near-vacuum clusters.
    """
    b, c = cp.b, cp.c
    _check_moments(b, c)
    k = c.shape[0]
    sigma = np.block([[c.conj(), b], [b.conj(), c]])
    sigma = 0.5 * (sigma + sigma.conj().T)
    root, norm = _sqrtm_psd(sigma)
    metric = np.concatenate([np.ones(k), -np.ones(k)])
    h = (root * metric) @ root
    h = 0.5 * (h + h.conj().T)
    evals, evecs = np.linalg.eigh(h)
    lam = evals[k:]
    y = evecs[:, k:]
    if lam[0] < 0.5 - VACUUM_SLACK:
        raise UnphysicalStateError(f"symplectic eigenvalue {lam[0]:.9f} below the vacuum floor 1/2")
    w = (metric[:, None] * (root @ y)) / np.sqrt(lam)
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    w = w[:, order]
    nu_bar = lam - 0.5
    nu_bar[nu_bar < ROUNDING_FLOOR * np.finfo(float).eps * norm] = 0.0
    mu = w[:k].conj().T
    nu_fn = w[k:].conj().T
    return ThermalModeDecomposition(nu_bar, mu, nu_fn, thermal_entropies(nu_bar), lam)


def entanglement_of(
    cp: CorrelationPair,
    p: Partition,
    relevance_threshold: float = 0.01,
    t: float | None = None,
) -> EntanglementReport:
    sub = restrict(cp, p)
    dec = thermal_modes(sub)
    total = float(np.sum(dec.per_mode_entropy))
    if total > 0:
        relevant = int(np.count_nonzero(dec.per_mode_entropy >= relevance_threshold * total))
    else:
        relevant = 0
    return EntanglementReport(total, dec, relevant, p, t, sub.coords)


def full_domain_modes(cp: CorrelationPair) -> ThermalModeDecomposition:
    """Decomposition of the whole field: all ``nu_bar`` vanish for a pure state."""
    return thermal_modes(cp)


def mode_contributions(report: EntanglementReport, top_k: int) -> list[tuple[int, float, float]]:
    """Leading ``(mode index, entropy, fraction of total)`` triples, nonzero modes only."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    s = report.decomposition.per_mode_entropy
    out = []
    for i in range(min(top_k, s.size)):
        if s[i] <= 0:
            break
        out.append((i, float(s[i]), float(s[i] / report.total)))
    return out


def top_fraction(report: EntanglementReport, n: int) -> float:
    if report.total <= 0:
        return 0.0
    return float(np.sum(report.decomposition.per_mode_entropy[:n]) / report.total)


def quadrature_covariance(cp: CorrelationPair) -> np.ndarray:
    """Real covariance of ``(q_1..q_K, p_1..p_K)``; vacuum gives ``I/2``."""
    k = cp.c.shape[0]
    sigma = np.block([[cp.c.conj(), cp.b], [cp.b.conj(), cp.c]])
    eye = np.eye(k)
    t = np.block([[eye, eye], [-1j * eye, 1j * eye]]) / np.sqrt(2.0)
    return (t @ sigma @ t.conj().T).real


def williamson_spectrum(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues (descending) of a real quadrature covariance matrix.

    Independent cross-check of ``thermal_modes``: eigenvalues of ``i Omega V``
    come in pairs ``+-lam``.
    """
    k = cov.shape[0] // 2
    omega = np.block([[np.zeros((k, k)), np.eye(k)], [-np.eye(k), np.zeros((k, k))]])
    ev = np.linalg.eigvals(1j * omega @ cov)
    return np.sort(np.abs(ev.real))[::-1][::2]


def write_modes_csv(report: EntanglementReport, path, modes: int) -> Path:
    """Mode functions as ``mode,coord,re_mu,im_mu,re_nu,im_nu`` (modes numbered from 1)."""
    path = Path(path)
    dec = report.decomposition
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mode", "coord", "re_mu", "im_mu", "re_nu", "im_nu"])
        for k in range(min(modes, dec.nu_bar.size)):
            for x, mu, nu in zip(report.coords, dec.mu[k], dec.nu_fn[k]):
                w.writerow([k + 1] + [repr(float(z)) for z in (x, mu.real, mu.imag, nu.real, nu.imag)])
    return path
