"""Sequences over a finite abelian group: finite multisets of group elements.

A sequence is order-free; two sequences are equal iff their multiplicity maps
are equal.  Storage is a multiplicity map keyed and serialized in the
canonical element order, so equal sequences hash equally and reports are
reproducible.

Text grammar: terms "c1.c2.....cr^k" joined by spaces, coordinates
dot-separated, multiplicity suffix optional (default 1).  Over C_2 + C_4:
"0.1^3 1.2" is the multiset with three copies of (0,1) and one of (1,2).
"0" is accepted as the identity of any group.  The empty string is the empty
sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Iterator, Mapping

from .groups import GroupElement, GroupSpec, ReductionHom


@dataclass(frozen=True)
class Sequence:
    """A finite multiset over a GroupSpec."""

    group: GroupSpec
    items: tuple[tuple[GroupElement, int], ...]  # canonical order, counts >= 1

    @classmethod
    def from_counts(cls, group: GroupSpec, counts: Mapping[GroupElement, int] | Iterable) -> "Sequence":
        merged: dict[GroupElement, int] = {}
        pairs = counts.items() if isinstance(counts, Mapping) else counts
        for g, k in pairs:
            if g.group != group:
                raise ValueError("element bound to a different group")
            if k < 0:
                raise ValueError(f"negative multiplicity {k}")
            if k:
                merged[g] = merged.get(g, 0) + k
        return cls(group, tuple(sorted(merged.items(), key=lambda it: it[0].coords)))

    @classmethod
    def from_elements(cls, group: GroupSpec, elements: Iterable[GroupElement]) -> "Sequence":
        return cls.from_counts(group, ((g, 1) for g in elements))

    @classmethod
    def empty(cls, group: GroupSpec) -> "Sequence":
        return cls(group, ())

    def __len__(self) -> int:
        return sum(k for _, k in self.items)

    @property
    def support(self) -> tuple[GroupElement, ...]:
        return tuple(g for g, _ in self.items)

    def multiplicity(self, g: GroupElement) -> int:
        for h, k in self.items:
            if h == g:
                return k
        return 0

    def sum(self) -> GroupElement:
        total = self.group.identity()
        for g, k in self.items:
            total = total + g.scaled(k)
        return total

    def concat(self, other: "Sequence") -> "Sequence":
        if other.group != self.group:
            raise ValueError("sequences over different groups")
        counts = {g: k for g, k in self.items}
        for g, k in other.items:
            counts[g] = counts.get(g, 0) + k
        return Sequence.from_counts(self.group, counts)

    def remove(self, other: "Sequence") -> "Sequence":
        """T^{-1}S: subtract multiplicities; requires other | self."""
        if not other.divides(self):
            raise ValueError("not a subsequence")
        counts = {g: k for g, k in self.items}
        for g, k in other.items:
            counts[g] -= k
        return Sequence.from_counts(self.group, counts)

    def divides(self, other: "Sequence") -> bool:
        """Subsequence test: multiplicity-wise containment in `other`."""
        if other.group != self.group:
            return False
        return all(k <= other.multiplicity(g) for g, k in self.items)

    def add_element(self, g: GroupElement, k: int = 1) -> "Sequence":
        return self.concat(Sequence.from_counts(self.group, [(g, k)]))

    def elements(self) -> Iterator[GroupElement]:
        for g, k in self.items:
            for _ in range(k):
                yield g

    def index_counts(self) -> list[tuple[int, int]]:
        """(canonical element index, multiplicity) pairs for the search core."""
        return [(g.index, k) for g, k in self.items]

    def max_support(self) -> GroupElement | None:
        return self.items[-1][0] if self.items else None

    def to_text(self) -> str:
        if not self.items:
            return ""
        terms = []
        for g, k in self.items:
            terms.append(g.to_text() if k == 1 else f"{g.to_text()}^{k}")
        return " ".join(terms)

    def __str__(self) -> str:
        return self.to_text() or "(empty)"


def parse_sequence(text: str, group: GroupSpec) -> Sequence:
    """Parse the sequence text grammar against a group."""
    counts: list[tuple[GroupElement, int]] = []
    for term in text.split():
        body, _, mult = term.partition("^")
        k = 1
        if mult:
            k = int(mult)
            if k < 1:
                raise ValueError(f"bad multiplicity in {term!r}")
        if body == "0":
            g = group.identity()
        else:
            coords = [int(tok) for tok in body.split(".")]
            g = group.element(coords)
        counts.append((g, k))
    return Sequence.from_counts(group, counts)


@dataclass(frozen=True)
class LengthSet:
    """A symbolic set L of admissible lengths.

    Kinds: "all" (all positive integers), "mod" (positive multiples of d),
    "exact" (a single value), "interval" ([a, b]), "finite" (a finite set).
    """

    kind: str
    d: int = 0
    a: int = 0
    b: int = 0
    values: tuple[int, ...] = ()

    @classmethod
    def all_lengths(cls) -> "LengthSet":
        return cls("all")

    @classmethod
    def multiples_of(cls, d: int) -> "LengthSet":
        if d < 1:
            raise ValueError(f"d must be >= 1, got {d}")
        return cls("mod", d=d)

    @classmethod
    def exactly(cls, k: int) -> "LengthSet":
        if k < 1:
            raise ValueError(f"length must be >= 1, got {k}")
        return cls("exact", a=k, b=k)

    @classmethod
    def interval(cls, a: int, b: int) -> "LengthSet":
        if not 1 <= a <= b:
            raise ValueError(f"bad interval [{a}, {b}]")
        return cls("interval", a=a, b=b)

    @classmethod
    def finite(cls, values: Iterable[int]) -> "LengthSet":
        vals = tuple(sorted(set(values)))
        if not vals or vals[0] < 1:
            raise ValueError(f"bad finite length set {vals}")
        return cls("finite", values=vals)

    def contains(self, n: int) -> bool:
        if n < 1:
            return False
        if self.kind == "all":
            return True
        if self.kind == "mod":
            return n % self.d == 0
        if self.kind in ("exact", "interval"):
            return self.a <= n <= self.b
        return n in self.values

    def max_bound(self) -> int | None:
        """Largest member for the bounded kinds; None when unbounded."""
        if self.kind in ("exact", "interval"):
            return self.b
        if self.kind == "finite":
            return self.values[-1]
        return None

    def has_multiple_of(self, m: int) -> bool:
        """Does L meet m*N?  (The finiteness criterion tests this with m = exp(G).)"""
        if self.kind in ("all", "mod"):
            return True
        if self.kind == "finite":
            return any(v % m == 0 for v in self.values)
        return (self.b // m) * m >= max(self.a, m)

    def least_admissible_multiple(self, order: int) -> int | None:
        """Least member of L divisible by `order`; None if there is none."""
        if self.kind == "all":
            return order
        if self.kind == "mod":
            return math.lcm(order, self.d)
        if self.kind == "finite":
            for v in self.values:
                if v % order == 0:
                    return v
            return None
        first = max(self.a, order)
        first = ((first + order - 1) // order) * order
        return first if first <= self.b else None

    def to_text(self) -> str:
        if self.kind == "all":
            return "N"
        if self.kind == "mod":
            return f"{self.d}N"
        if self.kind == "exact":
            return str(self.a)
        if self.kind == "interval":
            return f"{self.a}..{self.b}"
        return "{" + ",".join(str(v) for v in self.values) + "}"

    def __str__(self) -> str:
        return self.to_text()


def parse_length_set(text: str) -> LengthSet:
    """Parse a length-set literal: "N", "4N", "6", "1..6", "{2,4,8}"."""
    text = text.strip()
    if text in ("N", "all"):
        return LengthSet.all_lengths()
    if text.startswith("{") and text.endswith("}"):
        return LengthSet.finite(int(tok) for tok in text[1:-1].split(","))
    if ".." in text:
        a, _, b = text.partition("..")
        return LengthSet.interval(int(a), int(b))
    if text.endswith("N"):
        return LengthSet.multiples_of(int(text[:-1]))
    return LengthSet.exactly(int(text))


def apply_hom(phi: ReductionHom, s: Sequence) -> Sequence:
    """Image multiset under a homomorphism; preserves length, maps the sum."""
    if s.group != phi.domain:
        raise ValueError("sequence not over the homomorphism's domain")
    return Sequence.from_counts(phi.codomain, ((phi(g), k) for g, k in s.items))


def canonical_extensions(s: Sequence) -> Iterator[Sequence]:
    """Children of s in the canonical DFS: append one element >= max(support).

    The union over the DFS tree generates every multiset exactly once.
    """
    start = s.max_support()
    for g in s.group.elements():
        if start is None or not g < start:
            yield s.add_element(g)


def iter_multisets(group: GroupSpec, length: int) -> Iterator[Sequence]:
    """All multisets of the given size over the group, in canonical order."""
    elems = list(group.elements())
    for combo in combinations_with_replacement(elems, length):
        yield Sequence.from_elements(group, combo)


def count_zero_sum_subsequences(s: Sequence) -> int:
    """Number of nonempty zero-sum sub-multisets, counted exactly.

    Independent of the reach-table machinery: a plain convolution count over
    the group, used to certify configurations that claim an exact count.
    """
    from .groups import addition_table

    group = s.group
    n = group.order
    add = addition_table(group)
    ways = [0] * n
    ways[0] = 1
    for g, k in s.items:
        gi = g.index
        new = [0] * n
        for sidx, w in enumerate(ways):
            if not w:
                continue
            t = sidx
            new[t] += w
            for _ in range(k):
                t = add[t][gi]
                new[t] += w
        ways = new
    return ways[0] - 1
