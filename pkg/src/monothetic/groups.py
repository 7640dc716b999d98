"""Base group model: descriptors, elements, a fixed enumeration, and the
built-in menu of bounded invariant (pseudo)norms.

The base group is H = Z^r x Z_{q_1} x ... x Z_{q_s}, presented by a
:class:`GroupDescriptor`.  The ambient group adjoins one integer coordinate,
the power of a distinguished generator c, giving :class:`ExtElement`.

Everything here is exact: norm values are ``fractions.Fraction`` and no code
path in the package touches floating point.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from .errors import DomainError, ShapeError
from .rat import ONE, ZERO


@dataclass(frozen=True)
class GroupDescriptor:
    """Finitely generated abelian group Z^free_rank x prod Z_{q}."""

    free_rank: int = 0
    torsion_moduli: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ShapeError("free_rank must be non-negative")
        if any(q < 2 for q in self.torsion_moduli):
            raise ShapeError("torsion moduli must be >= 2")
        if self.free_rank + len(self.torsion_moduli) < 1:
            raise ShapeError("descriptor must have at least one coordinate")

    @property
    def order(self) -> Optional[int]:
        """Group order, or None when the group is infinite."""
        if self.free_rank > 0:
            return None
        return math.prod(self.torsion_moduli)

    def zero(self) -> "HElement":
        return HElement(self, (0,) * self.free_rank, (0,) * len(self.torsion_moduli))

    def element(self, coords: tuple[int, ...] | list[int]) -> "HElement":
        """Build an element from flat coordinates (free part then torsion part)."""
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.free_rank + len(self.torsion_moduli):
            raise ShapeError(
                f"expected {self.free_rank + len(self.torsion_moduli)} coordinates, got {len(coords)}"
            )
        return HElement(self, coords[: self.free_rank], coords[self.free_rank:])


@dataclass(frozen=True)
class HElement:
    """Element of the base group; torsion coordinates are kept reduced."""

    descriptor: GroupDescriptor
    free: tuple[int, ...]
    torsion: tuple[int, ...]

    def __post_init__(self):
        d = self.descriptor
        if len(self.free) != d.free_rank or len(self.torsion) != len(d.torsion_moduli):
            raise ShapeError("coordinate count does not match descriptor")
        object.__setattr__(
            self, "torsion",
            tuple(t % q for t, q in zip(self.torsion, d.torsion_moduli)),
        )

    def _require_same(self, other: "HElement") -> None:
        if self.descriptor != other.descriptor:
            raise ShapeError("elements belong to different groups")

    def __add__(self, other: "HElement") -> "HElement":
        self._require_same(other)
        return HElement(
            self.descriptor,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> "HElement":
        return HElement(
            self.descriptor,
            tuple(-a for a in self.free),
            tuple(-a for a in self.torsion),
        )

    def __sub__(self, other: "HElement") -> "HElement":
        return self + (-other)

    def scale(self, factor: int) -> "HElement":
        return HElement(
            self.descriptor,
            tuple(factor * a for a in self.free),
            tuple(factor * a for a in self.torsion),
        )

    @property
    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def coords(self) -> tuple[int, ...]:
        return self.free + self.torsion


@dataclass(frozen=True)
class ExtElement:
    """Element h + c^k of the extended group; the (h, k) split is unique."""

    h: HElement
    k: int

    @property
    def descriptor(self) -> GroupDescriptor:
        return self.h.descriptor

    def __add__(self, other: "ExtElement") -> "ExtElement":
        return ExtElement(self.h + other.h, self.k + other.k)

    def __neg__(self) -> "ExtElement":
        return ExtElement(-self.h, -self.k)

    def __sub__(self, other: "ExtElement") -> "ExtElement":
        return self + (-other)

    def scale(self, factor: int) -> "ExtElement":
        return ExtElement(self.h.scale(factor), factor * self.k)

    @property
    def is_zero(self) -> bool:
        return self.k == 0 and self.h.is_zero


def elem_combine(a: ExtElement, b: ExtElement, sign: int) -> ExtElement:
    """Componentwise a + sign*b with torsion reduction; sign is +1 or -1."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if a.descriptor != b.descriptor:
        raise ShapeError("elements belong to different groups")
    return a + b if sign == 1 else a - b


# ---------------------------------------------------------------------------
# Enumeration of H.
#
# Each free coordinate v is encoded by the zigzag map 0,1,-1,2,-2,... ->
# 0,1,2,3,4,...; torsion coordinates stand for themselves.  Encoded tuples are
# enumerated in graded-lexicographic order (by coordinate sum, ties broken
# lexicographically), 1-based, so index 1 is the zero element.
# ---------------------------------------------------------------------------

def zigzag_encode(v: int) -> int:
    return 2 * v - 1 if v > 0 else -2 * v


def zigzag_decode(u: int) -> int:
    if u < 0:
        raise DomainError("encoded value must be non-negative")
    return (u + 1) // 2 if u % 2 else -(u // 2)


def _coord_bounds(descriptor: GroupDescriptor) -> tuple[Optional[int], ...]:
    # None marks an unbounded (free) coordinate; torsion coordinate i is
    # bounded by q_i - 1.
    return (None,) * descriptor.free_rank + tuple(
        q - 1 for q in descriptor.torsion_moduli
    )


_count_rows: dict[GroupDescriptor, list[list[int]]] = {}


def _counts_up_to(descriptor: GroupDescriptor, grade: int) -> list[list[int]]:
    # rows[s][i] = number of encoded tuples over coordinates i.. summing to s.
    # Built iteratively from the prefix identity
    #   count(i, s) = count(i, s-1) + count(i+1, s) - count(i+1, s-1-bound),
    # the last term dropping the value that would overflow a bounded
    # coordinate; this keeps the table O(grade * coords) to fill.
    rows = _count_rows.setdefault(descriptor, [])
    bounds = _coord_bounds(descriptor)
    width = len(bounds)
    while len(rows) <= grade:
        s = len(rows)
        row = [0] * (width + 1)
        row[width] = 1 if s == 0 else 0
        for i in range(width - 1, -1, -1):
            total = row[i + 1]
            if s >= 1:
                total += rows[s - 1][i]
            bound = bounds[i]
            if bound is not None and s - 1 - bound >= 0:
                total -= rows[s - 1 - bound][i + 1]
            row[i] = total
        rows.append(row)
    return rows


def _suffix_count(descriptor: GroupDescriptor, start: int, total: int) -> int:
    """Number of encoded tuples over coordinates start.. summing to total."""
    if total < 0:
        return 0
    return _counts_up_to(descriptor, total)[total][start]


_cum_counts: dict[GroupDescriptor, list[int]] = {}


def _cums_to_length(descriptor: GroupDescriptor, length: int) -> list[int]:
    # cums[s] = number of elements with grade <= s.
    cums = _cum_counts.setdefault(descriptor, [])
    while len(cums) < length:
        s = len(cums)
        cums.append((cums[-1] if cums else 0) + _suffix_count(descriptor, 0, s))
    return cums


def _cumulative_counts(descriptor: GroupDescriptor, up_to_rank: int) -> list[int]:
    # Extended until the total passes up_to_rank.  Callers guarantee the rank
    # is attainable (finite groups are range-checked first), so this stops.
    cums = _cums_to_length(descriptor, 1)
    while cums[-1] <= up_to_rank:
        _cums_to_length(descriptor, len(cums) + 1)
    return cums


def _decode_tuple(descriptor: GroupDescriptor, encoded: tuple[int, ...]) -> HElement:
    r = descriptor.free_rank
    free = tuple(zigzag_decode(u) for u in encoded[:r])
    return HElement(descriptor, free, encoded[r:])


@lru_cache(maxsize=None)
def enumerate_h(descriptor: GroupDescriptor, n: int) -> HElement:
    """Return the n-th element (1-based) of the fixed graded-lex enumeration."""
    if n < 1:
        raise DomainError("enumeration index must be >= 1")
    order = descriptor.order
    if order is not None and n > order:
        raise DomainError(f"group has only {order} elements, index {n} out of range")
    cums = _cumulative_counts(descriptor, n - 1)
    grade = bisect.bisect_right(cums, n - 1)
    remaining = n - 1 - (cums[grade - 1] if grade else 0)
    bounds = _coord_bounds(descriptor)
    encoded = []
    left = grade
    for i, bound in enumerate(bounds):
        if i == len(bounds) - 1:
            # The last coordinate absorbs the remaining grade outright.
            encoded.append(left)
            left = 0
            break
        top = left if bound is None else min(left, bound)
        for v in range(top + 1):
            below = _suffix_count(descriptor, i + 1, left - v)
            if remaining < below:
                encoded.append(v)
                left -= v
                break
            remaining -= below
    return _decode_tuple(descriptor, tuple(encoded))


def enumeration_index(h: HElement) -> int:
    """Inverse of :func:`enumerate_h`: the 1-based index of ``h``."""
    descriptor = h.descriptor
    encoded = tuple(zigzag_encode(v) for v in h.free) + h.torsion
    grade = sum(encoded)
    rank = _cums_to_length(descriptor, grade)[grade - 1] if grade else 0
    left = grade
    for i, u in enumerate(encoded[:-1]):
        rank += sum(_suffix_count(descriptor, i + 1, left - v) for v in range(u))
        left -= u
    # The last coordinate is forced to the leftover grade: no rank shift.
    return rank + 1


def grade_cumulative_count(descriptor: GroupDescriptor, grade: int) -> int:
    """How many elements have encoded coordinate sum <= grade."""
    return _cums_to_length(descriptor, grade + 1)[grade]


# ---------------------------------------------------------------------------
# Bounded invariant (pseudo)norms.  Each variant pins the descriptor shape it
# applies to; the cap min(1, .) is applied after the raw formula.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CappedWeightedL1:
    """d(h) = min(1, sum_i w_i * |h_i|) on a free group, one weight per coordinate."""

    weights: tuple[Fraction, ...]
    kind = "capped_l1"
    is_pseudonorm = False

    def check_shape(self, descriptor: GroupDescriptor) -> None:
        if descriptor.torsion_moduli:
            raise ShapeError("capped_l1 applies to torsion-free groups")
        if len(self.weights) != descriptor.free_rank:
            raise ShapeError(
                f"capped_l1 has {len(self.weights)} weights for rank {descriptor.free_rank}"
            )

    def validate(self, descriptor: GroupDescriptor) -> None:
        self.check_shape(descriptor)
        if any(w <= 0 for w in self.weights):
            raise ShapeError("capped_l1 weights must be positive")

    def raw_value(self, h: HElement) -> Fraction:
        return sum((w * abs(v) for w, v in zip(self.weights, h.free)), ZERO)


@dataclass(frozen=True)
class CappedLInf:
    """d(h) = min(1, scale * max_i |h_i|) on a free group."""

    scale: Fraction
    kind = "capped_linf"
    is_pseudonorm = False

    def check_shape(self, descriptor: GroupDescriptor) -> None:
        if descriptor.torsion_moduli:
            raise ShapeError("capped_linf applies to torsion-free groups")
        if descriptor.free_rank < 1:
            raise ShapeError("capped_linf needs at least one free coordinate")

    def validate(self, descriptor: GroupDescriptor) -> None:
        self.check_shape(descriptor)
        if self.scale <= 0:
            raise ShapeError("capped_linf scale must be positive")

    def raw_value(self, h: HElement) -> Fraction:
        return self.scale * max(abs(v) for v in h.free)


@dataclass(frozen=True)
class CyclicScaled:
    """d(t) = min(1, sum_i min(t_i, q_i - t_i) * 2/q_i) on a finite group."""

    kind = "cyclic_scaled"
    is_pseudonorm = False

    def check_shape(self, descriptor: GroupDescriptor) -> None:
        if descriptor.free_rank != 0 or not descriptor.torsion_moduli:
            raise ShapeError("cyclic_scaled applies to purely torsion groups")

    def validate(self, descriptor: GroupDescriptor) -> None:
        self.check_shape(descriptor)

    def raw_value(self, h: HElement) -> Fraction:
        total = ZERO
        for t, q in zip(h.torsion, h.descriptor.torsion_moduli):
            total += Fraction(2 * min(t, q - t), q)
        return total


@dataclass(frozen=True)
class RationalRotation:
    """Pseudonorm d(x) = distance from x*alpha to the nearest integer, rank one.

    Vanishes on multiples of alpha's denominator, so it is a pseudonorm, not a
    norm; downstream checks must not assume positivity off zero.
    """

    alpha: Fraction
    kind = "rational_rotation"
    is_pseudonorm = True

    def check_shape(self, descriptor: GroupDescriptor) -> None:
        if descriptor.free_rank != 1 or descriptor.torsion_moduli:
            raise ShapeError("rational_rotation applies to the rank-one free group")

    def validate(self, descriptor: GroupDescriptor) -> None:
        self.check_shape(descriptor)
        if self.alpha.denominator < 1:
            raise ShapeError("alpha must be a rational p/q with q >= 1")

    def raw_value(self, h: HElement) -> Fraction:
        q = self.alpha.denominator
        r = (h.free[0] * self.alpha.numerator) % q
        return Fraction(min(r, q - r), q)


NormSpec = Union[CappedWeightedL1, CappedLInf, CyclicScaled, RationalRotation]


def base_norm(spec: NormSpec, h: HElement) -> Fraction:
    """Exact value of the base (pseudo)norm, capped at 1."""
    spec.check_shape(h.descriptor)
    return min(ONE, spec.raw_value(h))


# ---------------------------------------------------------------------------
# Sampled verification of the norm axioms.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomViolation:
    check: str
    inputs: str
    expected: str
    got: str


@dataclass(frozen=True)
class AxiomReport:
    spec_kind: str
    samples: int
    violations: tuple[AxiomViolation, ...]
    pseudonorm_witnesses: tuple[HElement, ...]
    flagged_pseudonorm: bool

    @property
    def passed(self) -> bool:
        return not self.violations


def _sample_indices(descriptor: GroupDescriptor, count: int, seed: int) -> list[int]:
    # Documented linear scheme: a stride-1 scan of 1..pool offset by the seed.
    # For finite H the pool is the whole group, so count >= |H| covers every
    # torsion coset representative.
    order = descriptor.order
    pool = order if order is not None else 2 * count + 1
    return [1 + (seed + i) % pool for i in range(count)]


def validate_norm_spec(
    descriptor: GroupDescriptor,
    spec: NormSpec,
    sample_count: int,
    seed: int,
) -> AxiomReport:
    """Seeded sampled check of symmetry, subadditivity, range, and d(0) = 0.

    Pseudonorm variants are flagged (not failed) when a nonzero element of
    norm zero turns up; for norm variants that is a positivity violation.
    """
    if sample_count < 1:
        raise DomainError("sample_count must be >= 1")
    spec.check_shape(descriptor)

    violations: list[AxiomViolation] = []
    witnesses: list[HElement] = []

    zero = descriptor.zero()
    d_zero = base_norm(spec, zero)
    if d_zero != ZERO:
        violations.append(AxiomViolation("identity", "0", "0/1", str(d_zero)))

    indices = _sample_indices(descriptor, sample_count, seed)
    pool = max(indices)
    for i, n in enumerate(indices):
        h = enumerate_h(descriptor, n)
        value = base_norm(spec, h)
        if not (ZERO <= value <= ONE):
            violations.append(
                AxiomViolation("range", f"h_{n}={h.coords()}", "0 <= d <= 1", str(value))
            )
        if base_norm(spec, -h) != value:
            violations.append(
                AxiomViolation("symmetry", f"h_{n}={h.coords()}", str(value), str(base_norm(spec, -h)))
            )
        if value == ZERO and not h.is_zero:
            if spec.is_pseudonorm:
                witnesses.append(h)
            else:
                violations.append(
                    AxiomViolation("positivity", f"h_{n}={h.coords()}", "> 0", "0/1")
                )
        # Subadditivity partner: a second linear scan shifted by the seed.
        partner = enumerate_h(descriptor, 1 + (seed + 3 * i + 1) % pool)
        lhs = base_norm(spec, h + partner)
        rhs = base_norm(spec, h) + base_norm(spec, partner)
        if lhs > rhs:
            violations.append(
                AxiomViolation(
                    "subadditivity",
                    f"{h.coords()} + {partner.coords()}",
                    f"<= {rhs}",
                    str(lhs),
                )
            )

    return AxiomReport(
        spec_kind=spec.kind,
        samples=sample_count,
        violations=tuple(violations),
        pseudonorm_witnesses=tuple(witnesses),
        flagged_pseudonorm=bool(witnesses),
    )
