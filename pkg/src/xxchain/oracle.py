"""Brute-force verification path, independent of the analytic formulas.

The Hamiltonian is built directly from the spin picture: within the
r-down-spin block, each ring bond exchanges an adjacent up/down pair with
matrix element -J/2, and the field contributes the uniform diagonal
-B*(N-2r).  The bond sum is taken literally over i = 1..N with the cyclic
convention, so the two-site ring carries a doubled bond.  No fermionization
is used anywhere here; agreement with :mod:`xxchain.spectrum` and
:mod:`xxchain.groundstate` is therefore a genuine cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import BasisMismatchError, CapacityError, ValidationError
from .groundstate import SectorState
from .spectrum import ChainParams

#: caps for block construction
BLOCK_DIM_CAP = 1 << 20
ORACLE_N_CAP = 20

#: above this dimension ground_of_block switches to an iterative eigensolver
DENSE_EIG_CAP = 4096

#: spectral-gap fraction below which the ground state is flagged degenerate
DEGENERACY_GAP_RTOL = 1e-10

#: dense-rank capacity
DENSE_RANK_N_CAP = 20


@dataclass(frozen=True)
class HamiltonianBlock:
    """Spin Hamiltonian restricted to the r-down-spin subspace."""

    N: int
    r: int
    J: float
    B: float
    basis: list[tuple[int, ...]]           # lexicographic r-subsets
    matrix: scipy.sparse.csr_matrix

    @property
    def dim(self) -> int:
        return len(self.basis)


def build_block_hamiltonian(p: ChainParams, r: int) -> HamiltonianBlock:
    """Assemble the r-sector block in the spin configuration basis."""
    if p.N > ORACLE_N_CAP:
        raise CapacityError(f"oracle capped at N={ORACLE_N_CAP}, got N={p.N}")
    if not 0 <= r <= p.N:
        raise ValidationError(f"r={r} out of range for N={p.N}")
    dim = math.comb(p.N, r)
    if dim > BLOCK_DIM_CAP:
        raise CapacityError(f"block dimension C({p.N},{r}) = {dim} above cap")
    basis = list(itertools.combinations(range(1, p.N + 1), r))
    index = {b: i for i, b in enumerate(basis)}
    rows, cols, vals = [], [], []
    diag = -p.B * (p.N - 2 * r)
    for b in basis:
        i = index[b]
        rows.append(i)
        cols.append(i)
        vals.append(diag)
        occupied = set(b)
        for site in range(1, p.N + 1):
            nxt = site % p.N + 1
            if (site in occupied) != (nxt in occupied):
                flipped = tuple(sorted(occupied ^ {site, nxt}))
                rows.append(i)
                cols.append(index[flipped])
                vals.append(-0.5 * p.J)
    matrix = scipy.sparse.csr_matrix(
        (vals, (rows, cols)), shape=(dim, dim)
    )
    return HamiltonianBlock(N=p.N, r=r, J=p.J, B=p.B, basis=basis, matrix=matrix)


@dataclass(frozen=True)
class OracleResult:
    """Lowest eigenpair of a Hamiltonian block."""

    N: int
    r: int
    ground_energy: float
    ground_vector: np.ndarray
    degenerate: bool
    residual: float


def ground_of_block(h: HamiltonianBlock) -> OracleResult:
    """Lowest eigenpair, dense below 4096 dimensions and Lanczos above.

    The degeneracy flag is set when the gap to the next eigenvalue is below
    1e-10 of the spectral radius (Gershgorin bound).
    """
    radius = float(np.abs(h.matrix).sum(axis=1).max())
    if h.dim == 1:
        energy = float(h.matrix[0, 0])
        vector = np.ones(1)
        gap = math.inf
    elif h.dim <= DENSE_EIG_CAP:
        dense = h.matrix.toarray()
        eigvals, eigvecs = np.linalg.eigh(dense)
        energy = float(eigvals[0])
        vector = eigvecs[:, 0]
        gap = float(eigvals[1] - eigvals[0])
    else:
        eigvals, eigvecs = scipy.sparse.linalg.eigsh(h.matrix, k=2, which="SA")
        order = np.argsort(eigvals)
        energy = float(eigvals[order[0]])
        vector = eigvecs[:, order[0]]
        gap = float(eigvals[order[1]] - eigvals[order[0]])
    residual = float(np.linalg.norm(h.matrix @ vector - energy * vector))
    if residual > 1e-10 * max(radius, 1e-300):
        raise ArithmeticError(
            f"eigenpair residual {residual:.3e} exceeds 1e-10 * ||H|| ({radius:.3e})"
        )
    return OracleResult(
        N=h.N,
        r=h.r,
        ground_energy=energy,
        ground_vector=vector,
        degenerate=gap < DEGENERACY_GAP_RTOL * max(radius, 1e-300),
        residual=residual,
    )


def overlap(analytic: SectorState, numeric: OracleResult) -> float:
    """|<analytic|numeric>|; both vectors live on the same lexicographic
    subset basis, and the absolute value removes the sign/phase ambiguity
    of the eigensolver."""
    if (analytic.N, analytic.r) != (numeric.N, numeric.r):
        raise BasisMismatchError(
            f"state is (N={analytic.N}, r={analytic.r}) but oracle result is "
            f"(N={numeric.N}, r={numeric.r})"
        )
    unit = analytic.norm_constant * analytic.amplitudes
    return float(abs(unit @ numeric.ground_vector))


def _bits_to_sites(bits: int, width: int, offset: int) -> list[int]:
    """Decode a basis index (MSB = first site of the part) into site labels."""
    return [
        offset + pos + 1 for pos in range(width) if bits >> (width - 1 - pos) & 1
    ]


def _extended_subblock_rank(
    N: int, row_sites: list[list[int]], col_sites: list[list[int]], tol: float
) -> int:
    """High-precision rank of one reshaped sub-block, recomputed from the
    defining sine products; threshold squared along with the mantissa."""
    import mpmath

    rows, cols = len(row_sites), len(col_sites)
    with mpmath.workprec(2 * 53):
        pi_over_n = mpmath.pi / N
        a = mpmath.matrix(rows, cols)
        for i, left in enumerate(row_sites):
            for j, right in enumerate(col_sites):
                ks = left + right
                prod = mpmath.mpf(1)
                for u in range(len(ks)):
                    for v in range(u + 1, len(ks)):
                        prod *= mpmath.sin((ks[u] - ks[v]) * pi_over_n)
                a[i, j] = prod
        s = sorted(
            (float(x) for x in mpmath.svd_r(a, compute_uv=False)), reverse=True
        )
    threshold = tol * tol * s[0] * max(rows, cols)
    return sum(1 for x in s if x > threshold)


def dense_bipartition_rank(state: SectorState, M: int, tol: float = 1e-10) -> int:
    """Rank of the full 2^M x 2^(N-M) reshaped amplitude matrix.

    The matrix is materialized sparsely and decomposed densely per
    down-spin-count sub-block (the grouping comes from the bit patterns of
    the reshaped matrix itself, not from the block builder under test).
    Sub-blocks whose retained/discarded singular-value gap is below 1e3 are
    recomputed in extended precision from the defining sine products.
    """
    N = state.N
    if N > DENSE_RANK_N_CAP:
        raise CapacityError(f"dense bipartition rank capped at N={DENSE_RANK_N_CAP}")
    if not 1 <= M < N:
        raise ValidationError(f"M={M} must satisfy 1 <= M < N={N}")
    if state.r == 0:
        return 1
    matrix = scipy.sparse.dok_matrix((1 << M, 1 << (N - M)))
    left_bits = np.zeros(len(state), dtype=np.int64)
    right_bits = np.zeros(len(state), dtype=np.int64)
    for col in range(state.r):
        sites = state.subsets[:, col]
        on_left = sites <= M
        left_bits += np.where(on_left, 1 << (M - sites), 0)
        right_bits += np.where(on_left, 0, 1 << (N - sites))
    for i, j, a in zip(left_bits, right_bits, state.norm_constant * state.amplitudes):
        matrix[i, j] = a
    matrix = matrix.tocsr()

    from .entanglement import RELIABILITY_GAP, equilibrate

    row_counts = np.array([bin(i).count("1") for i in range(1 << M)])
    col_counts = np.array([bin(j).count("1") for j in range(1 << (N - M))])
    total = 0
    for l in range(state.r + 1):
        row_idx = np.flatnonzero(row_counts == l)
        col_idx = np.flatnonzero(col_counts == state.r - l)
        sub = matrix[np.ix_(row_idx, col_idx)].toarray()
        if not sub.any():
            continue
        s = np.linalg.svd(equilibrate(sub), compute_uv=False)
        threshold = tol * s[0] * max(sub.shape)
        rank = int((s > threshold).sum())
        discarded = s[rank] if rank < len(s) else 0.0
        gap = s[rank - 1] / discarded if discarded else math.inf
        if gap < RELIABILITY_GAP:
            rank = _extended_subblock_rank(
                N,
                [_bits_to_sites(int(i), M, 0) for i in row_idx],
                [_bits_to_sites(int(j), N - M, M) for j in col_idx],
                tol,
            )
        total += rank
    return total
