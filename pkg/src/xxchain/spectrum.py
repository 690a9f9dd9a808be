"""Closed-form sector energies, critical fields and phase structure of the
periodic XX chain.

Each magnetization sector (r down spins) contributes one candidate ground
state; its energy is linear in the external field B, so the global ground
state switches sector at a finite set of level crossings.  All formulas here
are analytic; the brute-force cross-checks live in :mod:`xxchain.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateFieldError, ValidationError

#: relative tolerance (in units of |J|) for detecting B == critical field
DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class ChainParams:
    """Model inputs for the XX ring: site count N, exchange J, field B."""

    N: int
    J: float = 1.0
    B: float = 0.0

    def __post_init__(self):
        if not isinstance(self.N, int) or self.N < 2:
            raise ValidationError(f"N must be an integer >= 2, got {self.N!r}")
        if self.J <= 0:
            raise ValidationError(f"J must be positive, got {self.J}")
        if self.B < 0:
            raise ValidationError(f"B must be nonnegative, got {self.B}")

    @property
    def max_sector(self) -> int:
        return self.N // 2


@dataclass(frozen=True)
class Sector:
    """A magnetization sector: r down spins on N sites."""

    N: int
    r: int

    def __post_init__(self):
        if not 0 <= self.r <= self.N:
            raise ValidationError(f"r={self.r} out of range for N={self.N}")

    @property
    def parity(self) -> int:
        """(-1)^r; fixes the momentum-grid offset for this sector."""
        return -1 if self.r % 2 else 1


def momenta(N: int, r: int) -> list[float]:
    """Occupied momenta pi*(r+1-2l)/N, l = 1..r, of the sector ground state.

    The set is symmetric about 0 and lies on the integer (odd r) or
    half-odd-integer (even r) momentum grid 2*pi*n/N.
    """
    if not 0 <= r <= N // 2:
        raise ValidationError(f"r={r} outside the ground family 0..{N // 2}")
    return [math.pi * (r + 1 - 2 * l) / N for l in range(1, r + 1)]


def dispersion(q: float, p: ChainParams) -> float:
    """Single-mode energy 2B - J*cos(q) for momentum q in (-pi, pi]."""
    if not -math.pi < q <= math.pi + 1e-15:
        raise ValidationError(f"momentum {q} outside (-pi, pi]")
    return 2.0 * p.B - p.J * math.cos(q)


def d_coefficient(N: int, r: int) -> float:
    """Dimensionless coefficient csc(pi/N)*sin(pi*r/N) collecting the
    occupied-mode cosine sum.  Symmetric under r -> N-r."""
    if not 0 <= r <= N:
        raise ValidationError(f"r={r} out of range 0..{N}")
    return math.sin(math.pi * r / N) / math.sin(math.pi / N)


def d_coefficient_sum(N: int, r: int) -> float:
    """Explicit cosine-sum form of d_coefficient; cross-check path only."""
    if not 0 <= r <= N:
        raise ValidationError(f"r={r} out of range 0..{N}")
    return sum(math.cos(math.pi * (r + 1 - 2 * l) / N) for l in range(1, r + 1))


def sector_energy(p: ChainParams, r: int) -> float:
    """Ground energy of the r-down-spin sector: -D^r*J - B*(N-2r)."""
    if not 0 <= r <= p.max_sector:
        raise ValidationError(f"r={r} outside the ground family 0..{p.max_sector}")
    return -d_coefficient(p.N, r) * p.J - p.B * (p.N - 2 * r)


def critical_field(p: ChainParams, r: int) -> float:
    """Field at which the sector-r and sector-(r+1) energies cross:
    (J/2)*sec(pi/2N)*cos(pi*(r+1/2)/N)."""
    if not 0 <= r <= p.max_sector - 1:
        raise ValidationError(
            f"r={r} has no transition (valid range 0..{p.max_sector - 1})"
        )
    N = p.N
    return 0.5 * p.J * math.cos(math.pi * (r + 0.5) / N) / math.cos(math.pi / (2 * N))


def critical_fields(p: ChainParams) -> list[float]:
    """All floor(N/2) critical fields, strictly decreasing in r."""
    return [critical_field(p, r) for r in range(p.max_sector)]


def ground_sector(p: ChainParams, degeneracy_rtol: float = DEGENERACY_RTOL) -> int:
    """Sector index minimizing the energy at field p.B.

    Equals the number of critical fields strictly greater than B.  Raises
    :class:`DegenerateFieldError` when B sits on a level crossing within
    ``degeneracy_rtol * |J|``.
    """
    fields = critical_fields(p)
    tol = degeneracy_rtol * abs(p.J)
    for r, bc in enumerate(fields):
        if abs(p.B - bc) <= tol:
            raise DegenerateFieldError(p.B, bc, r, r + 1)
    return sum(1 for bc in fields if bc > p.B)


@dataclass(frozen=True)
class PhaseInterval:
    """One field interval on which a single sector is the ground state."""

    r: int
    b_low: float           # lower edge (0 for the last interval)
    b_high: float          # upper edge (inf for the first interval)
    d_coefficient: float
    slope: float           # dE/dB = -(N - 2r) on this interval


@dataclass(frozen=True)
class PhaseDiagram:
    """Ordered critical fields with per-interval ground-sector data."""

    N: int
    J: float
    critical_fields: list[float] = field(default_factory=list)
    intervals: list[PhaseInterval] = field(default_factory=list)


def phase_diagram(p: ChainParams) -> PhaseDiagram:
    """Full first-order transition structure for fixed J.

    Crossing a critical field downward in B raises the ground sector by one
    and jumps dE/dB by exactly +2.
    """
    fields = critical_fields(p)
    intervals = []
    n_crit = len(fields)
    for r in range(p.max_sector + 1):
        b_high = math.inf if r == 0 else fields[r - 1]
        b_low = fields[r] if r < n_crit else 0.0
        intervals.append(
            PhaseInterval(
                r=r,
                b_low=b_low,
                b_high=b_high,
                d_coefficient=d_coefficient(p.N, r),
                slope=-(p.N - 2 * r),
            )
        )
    return PhaseDiagram(N=p.N, J=p.J, critical_fields=fields, intervals=intervals)
