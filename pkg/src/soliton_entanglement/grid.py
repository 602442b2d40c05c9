"""Scaled units and the discretized x / omega axes.

Lengths are measured in the soliton width x0, frequencies in omega0 = 1/x0 and
propagation distances in dispersion lengths t_d = x0**2 / |omega2|.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainMismatchError, InvalidGridError


class Domain(str, enum.Enum):
    X = "x"
    OMEGA = "omega"

    @classmethod
    def parse(cls, value: "str | Domain") -> "Domain":
        if isinstance(value, Domain):
            return value
        key = str(value).strip().lower()
        if key in ("w", "omega", "ω"):
            return cls.OMEGA
        if key == "x":
            return cls.X
        raise ValueError(f"unknown domain {value!r}")


@dataclass(frozen=True)
class UnitSystem:
    """Soliton-scaled unit system.

    In scaled units x0 = 1 and t_d = 1. ``chi`` is the Kerr coupling after
    normalization; with amplitude ``N sqrt(nbar) sech(x)`` the focusing
    bright-soliton regime requires ``chi * nbar = -1``.
    """

    x0: float = 1.0
    nbar: float = 1e9
    omega2_sign: int = 1

    @property
    def omega0(self) -> float:
        return 1.0 / self.x0

    @property
    def t_d(self) -> float:
        return self.x0**2

    @property
    def chi(self) -> float:
        return -1.0 / self.nbar


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform periodic grid in either the x or the omega domain.

    X grids are staggered, ``x_j = (j - m/2 + 1/2) dx``, so no sample sits on
    the origin. OMEGA grids hold ``n * domega`` for ``n = -m/2 .. m/2 - 1``.
    """

    m: int
    dx: float
    domain_tag: Domain = Domain.X
    x: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.x is None:
            if self.domain_tag is Domain.X:
                coords = (np.arange(self.m) - self.m / 2 + 0.5) * self.dx
            else:
                coords = np.arange(-self.m // 2, self.m // 2) * self.dx
            coords.setflags(write=False)
            object.__setattr__(self, "x", coords)

    @property
    def window(self) -> float:
        return self.m * self.dx

    @property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers in numpy FFT order (for the dispersion step)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.m, self.dx)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.m, self.dx, self.domain_tag) == (other.m, other.dx, other.domain_tag)

    def __hash__(self):
        return hash((self.m, self.dx, self.domain_tag))


def make_grid(m: int, dx: float) -> Grid:
    """Staggered X-domain grid of ``m`` points with spacing ``dx``."""
    if int(m) != m or m < 4 or m % 2:
        raise InvalidGridError(f"grid size must be an even integer >= 4, got {m}")
    if not dx > 0:
        raise InvalidGridError(f"grid spacing must be positive, got {dx}")
    return Grid(int(m), float(dx), Domain.X)


def conjugate_grid(g: Grid) -> Grid:
    """Frequency grid conjugate to an X grid: ``domega = 2 pi / (m dx)``."""
    if g.domain_tag is not Domain.X:
        raise DomainMismatchError("conjugate_grid expects an X-domain grid")
    return Grid(g.m, 2.0 * np.pi / (g.m * g.dx), Domain.OMEGA)
