"""Inductive construction data: the pairing of (target, precision) demands,
the admissibility thresholds, the power sequence, and the anchor table that
defines the partial norm on the extended group.

The power sequence is norm-independent: it is fixed by the pairing alone, so
every norm over the same base group shares the identical table skeleton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import DomainError, ShapeError
from .groups import (
    ExtElement,
    GroupDescriptor,
    HElement,
    NormSpec,
    base_norm,
    enumerate_h,
)
from .rat import ONE


def pair_index(n: int) -> tuple[int, int]:
    """The n-th pair (target index, precision index) in anti-diagonal order.

    Order: (1,1), (1,2), (2,1), (1,3), (2,2), (3,1), ...  Bijective from the
    positive integers onto pairs of positive integers.
    """
    if n < 1:
        raise DomainError("pair index must be >= 1")
    diag = (math.isqrt(8 * (n - 1) + 1) - 1) // 2
    offset = n - 1 - diag * (diag + 1) // 2
    return offset + 1, diag - offset + 1


def unpair_index(m: int, j: int) -> int:
    """Inverse of :func:`pair_index`: n = (m+j-1)(m+j-2)/2 + m."""
    if m < 1 or j < 1:
        raise DomainError("pair coordinates must be >= 1")
    return (m + j - 1) * (m + j - 2) // 2 + m


def k_sequence(length: int) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    """Powers k_1..k_N with their thresholds delta_1..delta_N.

    k_1 = 1 and delta_1 = 1 by convention.  For n >= 2, delta_n is the
    smallest anchor value declared so far (min of 1/precision over earlier
    steps) and k_n = floor(k_{n-1}/delta_n) + 1, the minimal choice exceeding
    k_{n-1}/delta_n.  Since delta_n <= 1 this also forces strict growth.
    """
    if length < 1:
        raise DomainError("sequence length must be >= 1")
    powers = [1]
    deltas = [ONE]
    max_precision = 1
    for n in range(2, length + 1):
        max_precision = max(max_precision, pair_index(n - 1)[1])
        delta = Fraction(1, max_precision)
        powers.append(powers[-1] * max_precision + 1)
        deltas.append(delta)
    return tuple(powers), tuple(deltas)


@dataclass(frozen=True)
class Anchor:
    """One declared value: the element c^power - target gets value 1/precision."""

    index: int
    target_index: int
    precision_index: int
    power: int
    target: HElement
    value: Fraction


@dataclass(frozen=True)
class AnchorTable:
    """Immutable construction state shared by every evaluation query."""

    descriptor: GroupDescriptor
    spec: NormSpec
    anchors: tuple[Anchor, ...]
    deltas: tuple[Fraction, ...]

    @property
    def depth(self) -> int:
        return len(self.anchors)

    @property
    def powers(self) -> tuple[int, ...]:
        return tuple(a.power for a in self.anchors)

    def anchor(self, n: int) -> Anchor:
        if not 1 <= n <= self.depth:
            raise DomainError(f"anchor index {n} outside table of depth {self.depth}")
        return self.anchors[n - 1]

    def anchor_element(self, n: int) -> ExtElement:
        """The group element c^{k_n} - target_n carried by anchor n."""
        a = self.anchor(n)
        return ExtElement(-a.target, a.power)


def _target_element(descriptor: GroupDescriptor, target_index: int) -> HElement:
    # For a finite base group the enumeration is finite, so target demands
    # wrap around it; every (element, precision) demand still occurs.
    order = descriptor.order
    if order is not None:
        target_index = (target_index - 1) % order + 1
    return enumerate_h(descriptor, target_index)


def build_anchor_table(
    descriptor: GroupDescriptor, spec: NormSpec, depth: int
) -> AnchorTable:
    """Deterministically build the first ``depth`` anchors for (descriptor, spec)."""
    if depth < 1:
        raise DomainError("table depth must be >= 1")
    spec.validate(descriptor)
    powers, deltas = k_sequence(depth)
    anchors = []
    for n in range(1, depth + 1):
        m, j = pair_index(n)
        anchors.append(
            Anchor(
                index=n,
                target_index=m,
                precision_index=j,
                power=powers[n - 1],
                target=_target_element(descriptor, m),
                value=Fraction(1, j),
            )
        )
    return AnchorTable(descriptor, spec, tuple(anchors), deltas)


def partial_norm_lookup(table: AnchorTable, x: ExtElement) -> Optional[Fraction]:
    """Value of the partial norm at x, or None when x is outside its domain.

    The domain is the base group (where the partial norm restricts to the base
    norm) together with the anchor elements and their inverses.
    """
    if x.descriptor != table.descriptor:
        raise ShapeError("element does not conform to the table's descriptor")
    if x.k == 0:
        return base_norm(table.spec, x.h)
    anchor = _anchors_by_power(table).get(abs(x.k))
    if anchor is None:
        return None
    expected = -anchor.target if x.k > 0 else anchor.target
    if x.h == expected:
        return anchor.value
    return None


@lru_cache(maxsize=None)
def _anchors_by_power(table: AnchorTable) -> dict[int, Anchor]:
    return {a.power: a for a in table.anchors}


def check_table_consistency(table: AnchorTable) -> list[str]:
    """Cross-check a table against the recurrence; returns human-readable defects.

    An empty list means the table is exactly what ``build_anchor_table`` would
    produce for its descriptor, spec, and depth.
    """
    problems: list[str] = []
    powers, deltas = k_sequence(table.depth)
    for n in range(1, table.depth + 1):
        a = table.anchors[n - 1]
        m, j = pair_index(n)
        if a.index != n:
            problems.append(f"anchor {n}: stored index {a.index}")
        if (a.target_index, a.precision_index) != (m, j):
            problems.append(
                f"anchor {n}: pair ({a.target_index},{a.precision_index}) != ({m},{j})"
            )
        if a.power != powers[n - 1]:
            problems.append(f"anchor {n}: power {a.power} != {powers[n - 1]}")
        if a.value != Fraction(1, j):
            problems.append(f"anchor {n}: value {a.value} != 1/{j}")
        if a.target != _target_element(table.descriptor, m):
            problems.append(f"anchor {n}: target does not match enumeration")
        if n >= 2:
            prev = table.anchors[n - 2]
            if not (a.power > prev.power and Fraction(a.power) * deltas[n - 1] > prev.power):
                problems.append(f"anchor {n}: growth law violated against anchor {n - 1}")
    if table.deltas != deltas:
        problems.append("threshold sequence does not match the recurrence")
    return problems
