"""Infeasibility certificates for the unbounded case.

Take the rank-two integer lattice with the (uncapped) weighted-sum norm
|a| + |b|, generated by e1 and e2.  If an extension with a dense cyclic
subgroup existed, some powers c^n and c^m would approximate e1 and e2 within
1/2.  The exact lattice identity

    m*(c^n - e1) + n*(e2 - c^m) = -m*e1 + n*e2

(the two c-powers carry m*n and -n*m and cancel) then forces

    |m| + |n| <= |m|*v1 + |n|*v2 < (|m| + |n|) / 2,

a contradiction.  Each certificate records the identity check and the exact
margin; a scan quantifies over a grid of (n, m) at the worst admissible
approximation quality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, HypothesisNotMetError
from .groups import ExtElement, GroupDescriptor

_LATTICE = GroupDescriptor(free_rank=2)
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ContradictionReport:
    """One exact infeasibility certificate for a pair of assumed approximations."""

    n: int
    m: int
    v1: Fraction
    v2: Fraction
    required_norm: int
    implied_bound: Fraction
    margin: Fraction
    identity_verified: bool


@dataclass(frozen=True)
class ScanSummary:
    limit: int
    worst_case_value: Fraction
    certificate_count: int
    min_margin: Fraction
    all_margins_positive: bool
    conclusion: str
    certificates: tuple[ContradictionReport, ...]


def counterexample_certificate(
    n: int, m: int, v1: Fraction, v2: Fraction
) -> ContradictionReport:
    """Certify that D(c^n - e1) = v1 < 1/2 and D(e2 - c^m) = v2 < 1/2 clash.

    The hypothesis is strict: values at or above 1/2 certify nothing, and the
    error says so instead of fabricating a contradiction.
    """
    if n == 0 or m == 0:
        raise DomainError("powers n and m must be nonzero integers")
    if not 0 < v1 < _HALF or not 0 < v2 < _HALF:
        raise HypothesisNotMetError(
            "hypothesis not met: both assumed values must lie strictly in (0, 1/2)"
        )

    e1 = _LATTICE.element((1, 0))
    e2 = _LATTICE.element((0, 1))
    first = ExtElement(-e1, n).scale(m)       # m * (c^n - e1)
    second = ExtElement(e2, -m).scale(n)      # n * (e2 - c^m)
    combined = first + second
    expected = ExtElement(e1.scale(-m) + e2.scale(n), 0)
    if combined != expected:
        raise RuntimeError("exact identity check failed")  # unreachable by algebra

    required = abs(m) + abs(n)
    implied = abs(m) * v1 + abs(n) * v2
    margin = required - implied
    if not implied < Fraction(required, 2) < required:
        raise RuntimeError("contradiction inequality failed")  # unreachable given the hypothesis
    return ContradictionReport(
        n=n, m=m, v1=v1, v2=v2,
        required_norm=required,
        implied_bound=implied,
        margin=margin,
        identity_verified=True,
    )


def counterexample_scan(limit: int) -> ScanSummary:
    """Certificates for every (n, m) in [1, limit]^2 at worst-case values.

    The assumed approximation quality is pushed to the edge of the hypothesis:
    v1 = v2 = 1/2 - 1/max(limit, 2)^2.  (The denominator is clamped so the
    worst case stays inside the open hypothesis even on the one-cell grid.)
    Since the certificates cover every candidate pair of powers up to the
    limit, no choice can satisfy both density demands: the unbounded norm
    admits no dense-cyclic extension witnessed inside the grid.
    """
    if limit < 1:
        raise DomainError("scan limit must be >= 1")
    v = _HALF - Fraction(1, max(limit, 2) ** 2)
    certificates = []
    for n in range(1, limit + 1):
        for m in range(1, limit + 1):
            certificates.append(counterexample_certificate(n, m, v, v))
    min_margin = min(c.margin for c in certificates)
    return ScanSummary(
        limit=limit,
        worst_case_value=v,
        certificate_count=len(certificates),
        min_margin=min_margin,
        all_margins_positive=all(c.margin > 0 for c in certificates),
        conclusion=(
            "no pair of generator powers within the grid can approximate both "
            "basis elements within 1/2; a dense cyclic extension of the "
            "unbounded norm is infeasible"
        ),
        certificates=tuple(certificates),
    )
