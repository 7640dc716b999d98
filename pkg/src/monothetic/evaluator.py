"""Certified evaluation of the extended norm.

The extended norm of x is the capped infimum, over all ways of writing x as a
finite sum of partial-norm domain elements, of the summed partial-norm values.
Decompositions are searched in canonical form: one residual base-group element
plus an integer multiplicity per anchor.  Canonicalization loses nothing
because merging base-group summands never increases cost (the base norm is
subadditive) and opposite uses of one anchor cancel.

What makes the infinite infimum computable is a truncation bound.  Write
k* for the largest anchor index used with a nonzero multiplicity, K for the
anchor powers, and t for a cost budget.  Matching the c-power of x forces
    sum_{i<k*} |m_i| >= (K[k*] - |x.k|) / K[k*-1],
and each of those units costs at least the running threshold delta_{k*}, so
the growth law delta_{k*} * K[k*] > K[k*-1] yields
    cost > 1 - |x.k| / K[k*-1].
Hence every decomposition that reaches past the level where K[n-1] >=
|x.k|/(1-t) costs more than t, and a budget-t search below that level is
globally exact.  For x with zero c-power every anchor-using decomposition
costs more than 1, which certifies that the extension restricts to the base
norm on the base group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Optional, Union

from .construction import AnchorTable, build_anchor_table, k_sequence, unpair_index
from .errors import DomainError, ExtendTableError, ShapeError
from .groups import (
    ExtElement,
    GroupDescriptor,
    HElement,
    NormSpec,
    base_norm,
    enumerate_h,
    grade_cumulative_count,
)
from .rat import ONE, ZERO


@dataclass(frozen=True)
class Decomposition:
    """Canonical decomposition: anchor multiplicities plus one residual element.

    ``coefficients`` holds (anchor index, nonzero multiplicity) pairs in
    ascending index order.  ``cost`` is exact: the weighted anchor values plus
    the base norm of the residual.
    """

    coefficients: tuple[tuple[int, int], ...]
    residual: HElement
    cost: Fraction

    def coefficient(self, n: int) -> int:
        for index, mult in self.coefficients:
            if index == n:
                return mult
        return 0

    def check_against(self, table: AnchorTable, x: ExtElement) -> bool:
        """Recompute the defining identities; True when internally consistent."""
        power_sum = 0
        shift = x.h.descriptor.zero()
        cost = ZERO
        for index, mult in self.coefficients:
            anchor = table.anchor(index)
            power_sum += mult * anchor.power
            shift = shift + anchor.target.scale(mult)
            cost += abs(mult) * anchor.value
        cost += base_norm(table.spec, self.residual)
        return (
            power_sum == x.k
            and self.residual == x.h + shift
            and cost == self.cost
        )


@dataclass(frozen=True)
class ExactResult:
    """The norm value is pinned exactly, with a witness decomposition."""

    value: Fraction
    witness: Decomposition
    truncation_level: int
    is_exact = True


@dataclass(frozen=True)
class IntervalResult:
    """Certified two-sided enclosure: the value lies in (lower, upper]."""

    lower: Fraction
    upper: Fraction
    is_exact = False


EvalResult = Union[ExactResult, IntervalResult]

DEFAULT_EPSILON = Fraction(1, 1024)


def truncation_index(table: AnchorTable, k: int, budget: Fraction) -> int:
    """Deepest anchor index any budget-respecting decomposition can use.

    Returns the largest n with n == 1 or K[n-1] < |k|/(1 - budget); every
    decomposition of an element with c-power k that uses a deeper anchor
    costs more than ``budget``.  For k == 0 anchors are excluded entirely
    (any anchor-using decomposition costs more than 1), so the index is 0.

    Raises :class:`ExtendTableError` when the table cannot exhibit the level,
    i.e. when even its deepest power is below |k|/(1 - budget).
    """
    if not ZERO < budget < ONE:
        raise DomainError("budget must lie strictly between 0 and 1")
    if k == 0:
        return 0
    bound = Fraction(abs(k)) / (ONE - budget)
    powers = table.powers
    if powers[-1] < bound:
        required = table.depth + 1
        while True:
            extended, _ = k_sequence(required)
            if extended[-1] >= bound:
                break
            required += 1
        raise ExtendTableError(required)
    level = 1
    for n in range(2, table.depth + 1):
        if powers[n - 2] < bound:
            level = n
    return level


def _per_anchor_caps(table: AnchorTable, budget: Fraction, level: int) -> list[int]:
    # |m_n| <= floor(budget * precision_n) exactly: each unit of anchor n
    # costs 1/precision_n, so anything larger busts the budget on its own.
    caps = []
    for n in range(1, level + 1):
        j = table.anchor(n).precision_index
        caps.append((budget.numerator * j) // budget.denominator)
    return caps


def best_decomposition(
    table: AnchorTable,
    x: ExtElement,
    budget: Fraction,
    index_cap: int,
) -> Optional[Decomposition]:
    """Exact minimum-cost decomposition within the budget, or None.

    Depth-first search over multiplicity vectors for anchors 1..index_cap,
    assigning the deepest anchor first.  Pruning is exact: per-anchor budget
    caps, reachability of the remaining c-power target under the leftover
    caps, an admissible lower bound on the cost of covering the remaining
    target, and the incumbent best cost.  Branches enumerate multiplicities
    in ascending order, so the first minimum found is the lexicographically
    smallest coefficient vector read from the deepest anchor down; later ties
    never replace it.
    """
    if index_cap > table.depth:
        raise DomainError("index cap exceeds table depth")
    if x.descriptor != table.descriptor:
        raise ShapeError("element does not conform to the table's descriptor")

    anchors = [table.anchor(n) for n in range(1, index_cap + 1)]
    caps = _per_anchor_caps(table, budget, index_cap)
    # reach[n] = max |sum of c-powers| attainable by anchors 1..n under caps.
    reach = [0]
    for anchor, cap in zip(anchors, caps):
        reach.append(reach[-1] + cap * anchor.power)
    # cheapest[n] = min cost per unit of c-power over anchors 1..n.
    cheapest: list[Optional[Fraction]] = [None]
    for anchor in anchors:
        unit = Fraction(1, anchor.precision_index * anchor.power)
        prev = cheapest[-1]
        cheapest.append(unit if prev is None else min(prev, unit))

    spec = table.spec
    best: Optional[Decomposition] = None

    def descend(n: int, target: int, shift: HElement, running: Fraction,
                coeffs: list[tuple[int, int]]) -> None:
        nonlocal best
        if n == 0:
            if target != 0:
                return
            residual = x.h + shift
            total = running + base_norm(spec, residual)
            if total > budget:
                return
            if best is None or total < best.cost:
                best = Decomposition(tuple(reversed(coeffs)), residual, total)
            return
        anchor = anchors[n - 1]
        cap = caps[n - 1]
        below = reach[n - 1]
        power = anchor.power
        lo = -((below - target) // power)   # ceil((target - below) / power)
        hi = (target + below) // power
        lo = max(lo, -cap)
        hi = min(hi, cap)
        for mult in range(lo, hi + 1):
            cost = running + abs(mult) * anchor.value
            if cost > budget:
                continue
            if best is not None and cost >= best.cost:
                continue
            rest = target - mult * power
            if rest != 0:
                lower_bound = cheapest[n - 1]
                if lower_bound is None:
                    continue
                if cost + abs(rest) * lower_bound > budget:
                    continue
                if best is not None and cost + abs(rest) * lower_bound >= best.cost:
                    continue
            if mult != 0:
                coeffs.append((anchor.index, mult))
                descend(n - 1, rest, shift + anchor.target.scale(mult), cost, coeffs)
                coeffs.pop()
            else:
                descend(n - 1, rest, shift, cost, coeffs)

    descend(index_cap, x.k, x.descriptor.zero(), ZERO, [])
    return best


def evaluate(
    table: AnchorTable,
    x: ExtElement,
    epsilon: Fraction = DEFAULT_EPSILON,
) -> EvalResult:
    """Certified value of the extended norm at x.

    Either an :class:`ExactResult` whose value is the true infimum over all
    decompositions (including anchors beyond the truncation level), or an
    :class:`IntervalResult` certifying that the value lies in (1 - epsilon, 1].
    """
    if not ZERO < epsilon < ONE:
        raise DomainError("epsilon must lie strictly between 0 and 1")
    if x.descriptor != table.descriptor:
        raise ShapeError("element does not conform to the table's descriptor")
    if x.k == 0:
        value = base_norm(table.spec, x.h)
        witness = Decomposition((), x.h, value)
        return ExactResult(value, witness, 0)
    budget = ONE - epsilon
    level = truncation_index(table, x.k, budget)
    found = best_decomposition(table, x, budget, level)
    if found is None:
        return IntervalResult(budget, ONE)
    return ExactResult(found.cost, found, level)


def evaluate_truncated(table: AnchorTable, x: ExtElement, level: int) -> Fraction:
    """Finite-table value: min cost over anchor indices <= level, capped at 1.

    Not certified against deeper anchors; used as a monotonicity diagnostic.
    """
    if level < 0 or level > table.depth:
        raise DomainError("truncation level outside table depth")
    if x.descriptor != table.descriptor:
        raise ShapeError("element does not conform to the table's descriptor")
    found = best_decomposition(table, x, ONE, level)
    if found is None:
        return ONE
    return min(ONE, found.cost)


@lru_cache(maxsize=8)
def _bounded_sums(
    table: AnchorTable, max_summands: int, radius: int
) -> dict[ExtElement, Fraction]:
    """Minimum summed partial-norm value per reachable element.

    Pool: base-group elements whose free coordinates are bounded by the radius
    (torsion coordinates bounded in cyclic distance), plus anchors with power
    and target coordinates inside the same box, with both signs.  All
    multisets of at most ``max_summands`` pool elements are enumerated.
    """
    descriptor = table.descriptor

    def h_in_box(h: HElement) -> bool:
        if any(abs(v) > radius for v in h.free):
            return False
        return all(
            min(t, q - t) <= radius
            for t, q in zip(h.torsion, descriptor.torsion_moduli)
        )

    # Every box element's encoded grade is at most this, so the scan below is
    # exhaustive once the cumulative count for that grade is passed.
    max_grade = 2 * radius * descriptor.free_rank + sum(
        q - 1 for q in descriptor.torsion_moduli
    )
    scan_limit = grade_cumulative_count(descriptor, max_grade)
    order = descriptor.order
    if order is not None:
        scan_limit = min(scan_limit, order)

    pool: list[tuple[ExtElement, Fraction]] = []
    for index in range(1, scan_limit + 1):
        h = enumerate_h(descriptor, index)
        if h_in_box(h):
            pool.append((ExtElement(h, 0), base_norm(table.spec, h)))
    for anchor in table.anchors:
        if anchor.power <= radius and h_in_box(anchor.target):
            element = ExtElement(-anchor.target, anchor.power)
            pool.append((element, anchor.value))
            pool.append((-element, anchor.value))

    sums: dict[ExtElement, Fraction] = {ExtElement(descriptor.zero(), 0): ZERO}
    for size in range(1, max_summands + 1):
        for combo in combinations_with_replacement(pool, size):
            total = combo[0][0]
            cost = combo[0][1]
            for element, value in combo[1:]:
                total = total + element
                cost += value
            previous = sums.get(total)
            if previous is None or cost < previous:
                sums[total] = cost
    return sums


def brute_force_eval(
    table: AnchorTable,
    x: ExtElement,
    max_summands: int,
    radius: int,
) -> Fraction:
    """Exhaustive oracle over arbitrary small decompositions, capped at 1.

    Enumerates all multisets of at most ``max_summands`` partial-norm domain
    elements with coordinates bounded by ``radius`` and returns the cheapest
    that sums to x (1 when none does).  Independent of the canonical search:
    repeated anchors and multiple base-group summands are enumerated as-is.
    Intended for desk-scale cross-checks in tests.
    """
    if max_summands < 1 or radius < 0:
        raise DomainError("oracle wants max_summands >= 1 and radius >= 0")
    if x.descriptor != table.descriptor:
        raise ShapeError("element does not conform to the table's descriptor")
    sums = _bounded_sums(table, max_summands, radius)
    found = sums.get(x)
    if found is None:
        return ONE
    return min(ONE, found)


@dataclass(frozen=True)
class DensityWitness:
    """Certified evidence that some power of c sits within 1/precision of a target."""

    target_index: int
    precision_index: int
    anchor_index: int
    power: int
    bound: Fraction
    certificate: EvalResult

    @property
    def certified(self) -> bool:
        if isinstance(self.certificate, ExactResult):
            return self.certificate.value <= self.bound
        return self.bound >= ONE


def density_witness(
    table: AnchorTable,
    target_index: int,
    precision_index: int,
    epsilon: Fraction = DEFAULT_EPSILON,
) -> DensityWitness:
    """Locate and certify the anchor serving the (target, precision) demand."""
    n = unpair_index(target_index, precision_index)
    if n > table.depth:
        raise ExtendTableError(n)
    anchor = table.anchor(n)
    certificate = evaluate(table, table.anchor_element(n), epsilon)
    return DensityWitness(
        target_index=target_index,
        precision_index=precision_index,
        anchor_index=n,
        power=anchor.power,
        bound=Fraction(1, precision_index),
        certificate=certificate,
    )


def extend_family(
    descriptor: GroupDescriptor,
    specs: list[NormSpec],
    depth: int,
) -> list[AnchorTable]:
    """One table per norm, all sharing the identical pairing/threshold/power data.

    Pseudonorm members are accepted; their tables certify the same bounds with
    positivity claims dropped.
    """
    return [build_anchor_table(descriptor, spec, depth) for spec in specs]
