"""Classical NSE propagation for fundamental and N-bound solitons.

Scaled form: ``i da/dt = -1/2 d2a/dx2 + chi |a|^2 a`` with ``chi = -1/nbar`` and
initial data ``a = N sqrt(nbar) sech(x)``, so ``|a|^2`` is a photon density and
the pulse carries ``2 N^2 nbar`` photons.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from ._stepper import split_step
from .errors import DomainMismatchError
from .grid import Domain, Grid


@dataclass(frozen=True)
class SolitonSpec:
    order_n: int = 1
    nbar: float = 1e9

    def __post_init__(self):
        if int(self.order_n) != self.order_n or self.order_n < 1:
            raise ValueError(f"soliton order must be a positive integer, got {self.order_n}")
        if not self.nbar > 0:
            raise ValueError(f"nbar must be positive, got {self.nbar}")

    @property
    def chi(self) -> float:
        return -1.0 / self.nbar

    @property
    def photon_number(self) -> float:
        return 2.0 * self.order_n**2 * self.nbar


@dataclass(frozen=True, eq=False)
class ClassicalField:
    grid: Grid
    amplitude: np.ndarray
    t: float = 0.0
    nbar: float = 1e9

    @property
    def chi(self) -> float:
        return -1.0 / self.nbar

    def photon_number(self) -> float:
        return float(np.sum(np.abs(self.amplitude) ** 2) * self.grid.dx)

    def momentum(self) -> float:
        """Centered-difference momentum ``sum Im(a* da/dx) dx`` (periodic)."""
        a = self.amplitude
        da = (np.roll(a, -1) - np.roll(a, 1)) / (2.0 * self.grid.dx)
        return float(np.sum(np.imag(np.conj(a) * da)) * self.grid.dx)


def _require_x(grid: Grid):
    if grid.domain_tag is not Domain.X:
        raise DomainMismatchError("classical fields live on X-domain grids")


def initial_soliton(spec: SolitonSpec, grid: Grid) -> ClassicalField:
    _require_x(grid)
    amp = spec.order_n * np.sqrt(spec.nbar) / np.cosh(grid.x)
    return ClassicalField(grid, amp.astype(complex), 0.0, float(spec.nbar))


def propagate_classical(f: ClassicalField, dt: float, steps: int) -> ClassicalField:
    """Advance the field by ``steps * dt`` with the symmetric split-step scheme."""
    _require_x(f.grid)
    if steps < 0 or int(steps) != steps:
        raise ValueError("steps must be a non-negative integer")
    if steps == 0:
        return replace(f, amplitude=f.amplitude.copy())
    if not dt > 0:
        raise ValueError("dt must be positive")
    a, _, _ = split_step(f.amplitude.copy(), None, None, f.grid.wavenumbers, dt, int(steps), f.chi)
    return ClassicalField(f.grid, a, f.t + steps * dt, f.nbar)


def mid_intensity(f: ClassicalField) -> float:
    """Normalized intensity ``|a(0)|^2 / nbar`` from the two center samples."""
    _require_x(f.grid)
    m = f.grid.m
    center = f.amplitude[m // 2 - 1 : m // 2 + 1]
    return float(np.mean(np.abs(center) ** 2) / f.nbar)


def write_field_csv(f: ClassicalField, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re_a", "im_a"])
        for x, a in zip(f.grid.x, f.amplitude):
            w.writerow([repr(float(x)), repr(float(a.real)), repr(float(a.imag))])
    return path
