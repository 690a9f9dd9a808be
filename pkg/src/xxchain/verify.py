"""Cross-check suite tying the analytic modules to the brute-force oracle.

Each check returns a structured record so the CLI/service can print a
pass/fail matrix; the acceptance tests reuse the same machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import entanglement, groundstate, oracle, spectrum
from .errors import CapacityError

ENERGY_RTOL = 1e-9
OVERLAP_MIN = 1.0 - 1e-9
RECURRENCE_MAX = 1e-12


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    failures: list[str] = field(default_factory=list)
    detail: str = ""

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failures,
            "detail": self.detail,
        }


def interval_fields(diagram: spectrum.PhaseDiagram, points_per_interval: int = 3):
    """Generic (non-degenerate) field values, a few per phase interval.

    The unbounded top interval is sampled above its lower edge on the same
    scale; fractional offsets keep every sample away from the crossings.
    """
    samples = []
    fractions = [
        (k + 1) / (points_per_interval + 1) for k in range(points_per_interval)
    ]
    for iv in diagram.intervals:
        hi = iv.b_high if iv.b_high != float("inf") else iv.b_low + diagram.J
        lo = iv.b_low
        samples.extend(lo + f * (hi - lo) for f in fractions)
    return samples


def check_energy(N: int, J: float = 1.0, points_per_interval: int = 3) -> CheckResult:
    """Oracle block ground energies vs the closed form, on a generic grid."""
    diagram = spectrum.phase_diagram(spectrum.ChainParams(N=N, J=J))
    failures = []
    cases = 0
    for B in interval_fields(diagram, points_per_interval):
        p = spectrum.ChainParams(N=N, J=J, B=B)
        for r in range(N // 2 + 1):
            cases += 1
            exact = spectrum.sector_energy(p, r)
            block = oracle.build_block_hamiltonian(p, r)
            numeric = oracle.ground_of_block(block).ground_energy
            if abs(numeric - exact) > ENERGY_RTOL * max(abs(exact), 1.0):
                failures.append(
                    f"N={N} r={r} B={B:.6g}: oracle {numeric!r} vs closed form {exact!r}"
                )
    return CheckResult("energy", not failures, cases, failures)


def check_overlap(N: int, J: float = 1.0) -> CheckResult:
    """Analytic sine-product states vs oracle ground vectors, per sector."""
    failures = []
    cases = 0
    diagram = spectrum.phase_diagram(spectrum.ChainParams(N=N, J=J))
    for iv in diagram.intervals:
        hi = iv.b_high if iv.b_high != float("inf") else iv.b_low + J
        B = 0.5 * (iv.b_low + hi)
        p = spectrum.ChainParams(N=N, J=J, B=B)
        result = oracle.ground_of_block(
            oracle.build_block_hamiltonian(p, iv.r)
        )
        if result.degenerate:
            continue
        cases += 1
        value = oracle.overlap(groundstate.build_state(N, iv.r), result)
        if value < OVERLAP_MIN:
            failures.append(f"N={N} r={iv.r} B={B:.6g}: overlap {value!r}")
    return CheckResult("overlap", not failures, cases, failures)


def check_rank_match(
    N: int, M: int | None = None, tol: float = entanglement.DEFAULT_RANK_TOL
) -> CheckResult:
    """Block-sum Schmidt rank vs the dense reshaped-matrix rank, per sector."""
    M = N // 2 if M is None else M
    failures = []
    cases = 0
    for r in range(N // 2 + 1):
        cases += 1
        report = entanglement.schmidt_rank(N, M, r, tol=tol)
        dense = oracle.dense_bipartition_rank(
            groundstate.build_state(N, r), M, tol=tol
        )
        if report.total_rank != dense:
            failures.append(
                f"N={N} M={M} r={r}: block sum {report.total_rank} vs dense {dense}"
            )
        elif not report.reliable:
            failures.append(f"N={N} M={M} r={r}: rank flagged unreliable")
    return CheckResult("rank", not failures, cases, failures)


def check_recurrence(N: int, M: int | None = None) -> CheckResult:
    """Three-term row identity on the r=2, l=1 block."""
    M = N // 2 if M is None else M
    if M < 3:
        return CheckResult(
            "recurrence", True, 0, detail=f"skipped: M={M} < 3 rows"
        )
    check = entanglement.row_recurrence_check(N, M, threshold=RECURRENCE_MAX)
    return CheckResult(
        "recurrence",
        check.passed,
        1,
        [] if check.passed else [f"N={N} M={M}: residual {check.max_residual!r}"],
        detail=f"max residual {check.max_residual:.3e}",
    )


def run_all(N: int, J: float = 1.0, tol: float = entanglement.DEFAULT_RANK_TOL):
    """Full cross-check suite for one chain size; raises CapacityError when
    N is beyond the oracle caps."""
    if N > oracle.ORACLE_N_CAP:
        raise CapacityError(
            f"verification needs the oracle; N={N} exceeds its cap {oracle.ORACLE_N_CAP}"
        )
    return [
        check_energy(N, J),
        check_overlap(N, J),
        check_rank_match(N, tol=tol),
        check_recurrence(N),
    ]
