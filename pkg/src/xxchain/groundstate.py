"""Analytic sector ground states as sparse real amplitudes over r-subsets.

The sector-r ground state of the XX ring is a weighted superposition of all
configurations with r down spins; the weight of the configuration with down
spins at sites k_1 < ... < k_r is the pairwise sine product

    prod_{i<j} sin[(k_i - k_j) * pi / N].

A global phase and the 1/sqrt(N^r) prefactor are dropped; normalization is
restored by an explicit norm constant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError

#: maximum number of amplitudes materialized by build_state
DEFAULT_STATE_CAP = 1 << 26

#: hard cap on N for the dense 2^N embedding
DENSE_N_CAP = 24

#: above this sector size, sine products are accumulated in log magnitude
LOG_FORM_MIN_R = 13


def _validate_subset(N: int, subset: tuple[int, ...]) -> tuple[int, ...]:
    subset = tuple(subset)
    if any(not 1 <= k <= N for k in subset):
        raise ValidationError(f"subset {subset} has sites outside 1..{N}")
    if any(a >= b for a, b in itertools.pairwise(subset)):
        raise ValidationError(f"subset {subset} is not strictly increasing")
    return subset


def amplitude(N: int, subset: tuple[int, ...]) -> float:
    """Unnormalized amplitude of the configuration with down spins at
    ``subset`` (strictly increasing sites in 1..N).

    Nonzero for every valid subset: all pairwise differences are nonzero
    mod N, so no sine factor vanishes.
    """
    subset = _validate_subset(N, subset)
    r = len(subset)
    if r < LOG_FORM_MIN_R:
        prod = 1.0
        for i in range(r):
            for j in range(i + 1, r):
                prod *= math.sin((subset[i] - subset[j]) * math.pi / N)
        return prod
    sign, log_mag = log_amplitude(N, subset)
    return sign * math.exp(log_mag)


def log_amplitude(N: int, subset: tuple[int, ...]) -> tuple[int, float]:
    """(sign, log|amplitude|) form; safe against underflow for large r."""
    subset = _validate_subset(N, subset)
    sign = 1
    log_mag = 0.0
    r = len(subset)
    for i in range(r):
        for j in range(i + 1, r):
            s = math.sin((subset[i] - subset[j]) * math.pi / N)
            if s < 0:
                sign = -sign
            log_mag += math.log(abs(s))
    return sign, log_mag


def _batch_amplitudes(N: int, subsets: np.ndarray) -> np.ndarray:
    """Sine-product amplitudes for an (n, r) array of ordered subsets."""
    n, r = subsets.shape
    if r < 2:
        return np.ones(n)
    pairs = list(itertools.combinations(range(r), 2))
    i_idx = np.array([p[0] for p in pairs], dtype=np.intp)
    j_idx = np.array([p[1] for p in pairs], dtype=np.intp)
    factors = np.sin((subsets[:, i_idx] - subsets[:, j_idx]) * (np.pi / N))
    if r < LOG_FORM_MIN_R:
        return factors.prod(axis=1)
    # log-magnitude accumulation: avoids underflow in long products
    signs = np.where((factors < 0).sum(axis=1) % 2, -1.0, 1.0)
    log_mag = np.log(np.abs(factors)).sum(axis=1)
    return signs * np.exp(log_mag)


@dataclass(frozen=True)
class SectorState:
    """Sector-r ground state stored as lexicographic subsets + amplitudes.

    ``norm_constant * amplitudes`` is a unit vector.
    """

    N: int
    r: int
    subsets: np.ndarray      # (C(N,r), r) int array, lexicographic rows
    amplitudes: np.ndarray   # raw sine products, same order
    norm_constant: float

    def __len__(self) -> int:
        return self.subsets.shape[0]

    def index_of(self, subset: tuple[int, ...]) -> int:
        """Lexicographic rank of an r-subset of 1..N (combinatorial unranking
        inverse); O(r) in binomial evaluations."""
        subset = _validate_subset(self.N, subset)
        if len(subset) != self.r:
            raise ValidationError(f"subset has {len(subset)} sites, expected {self.r}")
        rank = 0
        prev = 0
        for pos, k in enumerate(subset):
            for skipped in range(prev + 1, k):
                rank += math.comb(self.N - skipped, self.r - pos - 1)
            prev = k
        return rank

    def amplitude_of(self, subset: tuple[int, ...]) -> float:
        return float(self.amplitudes[self.index_of(subset)])

    def to_json_dict(self) -> dict:
        """Documented JSON form: N, r, normConstant, entries [sites..., amp]."""
        return {
            "schemaVersion": 1,
            "N": self.N,
            "r": self.r,
            "normConstant": self.norm_constant,
            "entries": [
                [*map(int, row), float(a)]
                for row, a in zip(self.subsets, self.amplitudes)
            ],
        }


def build_state(N: int, r: int, cap: int = DEFAULT_STATE_CAP) -> SectorState:
    """Materialize the full C(N, r)-entry sector state.

    Raises :class:`CapacityError` above ``cap`` entries; rank-only analyses
    should then use the block paths in :mod:`xxchain.entanglement`, which
    never build the full state.
    """
    if not isinstance(N, int) or N < 2:
        raise ValidationError(f"N must be an integer >= 2, got {N!r}")
    if not 0 <= r <= N // 2:
        raise ValidationError(f"r={r} outside the ground family 0..{N // 2}")
    size = math.comb(N, r)
    if size > cap:
        raise CapacityError(f"C({N},{r}) = {size} exceeds the cap {cap}")
    subsets = np.array(
        list(itertools.combinations(range(1, N + 1), r)), dtype=np.int64
    ).reshape(size, r)
    amps = _batch_amplitudes(N, subsets)
    # norm from log magnitudes: stable even when every product underflows
    with np.errstate(divide="ignore"):
        log_sq = 2.0 * np.log(np.abs(amps))
    peak = log_sq.max()
    norm = math.exp(-0.5 * (peak + math.log(np.exp(log_sq - peak).sum())))
    return SectorState(N=N, r=r, subsets=subsets, amplitudes=amps, norm_constant=norm)


def dense_vector(state: SectorState) -> np.ndarray:
    """Embed the state in the full 2^N basis (site 1 = most significant bit,
    down spin = 1).  Unit norm."""
    if state.N > DENSE_N_CAP:
        raise CapacityError(f"dense embedding capped at N={DENSE_N_CAP}")
    vec = np.zeros(1 << state.N)
    if state.r == 0:
        vec[0] = 1.0
        return vec
    indices = (1 << (state.N - state.subsets)).sum(axis=1)
    vec[indices] = state.norm_constant * state.amplitudes
    return vec
