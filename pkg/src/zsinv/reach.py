"""Reachability tables: the decision core for zero-sum subsequences.

A ReachTable records, for a processed multiset prefix, which pairs
(sum, length class) are achievable by a nonempty sub-multiset.  One bitmask
int per group element holds the length classes:

  - all positive lengths admissible ("all"): one class, bit 0;
  - multiples of d ("mod"): class = length mod d, bits 0..d-1, incrementing a
    length rotates the mask;
  - bounded kinds ("exact"/"interval"/"finite" with max bound B): bit k means
    a sub-multiset of exact length k (1 <= k <= B); bit B+1 is a saturation
    class for anything longer, which can never re-enter the admissible range.

Incorporating one more element only flips bits false -> true, and folding a
multiset in any element order yields the same final table.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import GroupElement, GroupSpec, addition_table
from .sequences import LengthSet, Sequence

MODE_ALL = 0
MODE_MOD = 1
MODE_CAP = 2


@dataclass(frozen=True)
class LengthClasses:
    """Bit layout compiled from a LengthSet."""

    mode: int
    width: int         # number of class bits in use
    in_l_mask: int     # classes whose lengths belong to L
    class1_bit: int    # class of a length-1 sub-multiset
    d: int = 0         # mod parameter
    cap: int = 0       # B for the bounded kinds

    @classmethod
    def for_length_set(cls, ls: LengthSet) -> "LengthClasses":
        if ls.kind == "all":
            return cls(MODE_ALL, width=1, in_l_mask=1, class1_bit=1)
        if ls.kind == "mod":
            d = ls.d
            return cls(MODE_MOD, width=d, in_l_mask=1, class1_bit=1 << (1 % d), d=d)
        b = ls.max_bound()
        mask = 0
        for k in range(1, b + 1):
            if ls.contains(k):
                mask |= 1 << k
        return cls(MODE_CAP, width=b + 2, in_l_mask=mask, class1_bit=1 << 1, cap=b)

    def shift(self, x: int) -> int:
        """Class mask after appending one element to every recorded sub-multiset."""
        if self.mode == MODE_ALL:
            return x
        if self.mode == MODE_MOD:
            d = self.d
            return ((x << 1) | (x >> (d - 1))) & ((1 << d) - 1)
        top = 1 << (self.cap + 1)
        return ((x & (top - 1)) << 1) | (x & top)

    def length_bit(self, k: int) -> int:
        """The class bit an exact length k falls into."""
        if self.mode == MODE_ALL:
            return 1
        if self.mode == MODE_MOD:
            return 1 << (k % self.d)
        return 1 << min(k, self.cap + 1)


@dataclass(frozen=True)
class ReachTable:
    """Achievable (sum, length class) pairs of nonempty sub-multisets."""

    group: GroupSpec
    classes: LengthClasses
    rows: tuple[int, ...]  # one class bitmask per element index

    @classmethod
    def empty(cls, group: GroupSpec, ls: LengthSet) -> "ReachTable":
        return cls(group, LengthClasses.for_length_set(ls), (0,) * group.order)

    def incorporate(self, g: GroupElement | int, mult: int = 1) -> "ReachTable":
        """Fold in up to `mult` copies of g (returns a new table).

        Iterates single-copy updates; stops early at a fixed point since the
        update is monotone.
        """
        if mult < 1:
            raise ValueError(f"multiplicity must be >= 1, got {mult}")
        gi = g if isinstance(g, int) else g.index
        add = addition_table(self.group)
        cl = self.classes
        rows = list(self.rows)
        n = len(rows)
        for _ in range(mult):
            new = list(rows)
            for s in range(n):
                x = rows[s]
                if x:
                    new[add[s][gi]] |= cl.shift(x)
            new[gi] |= cl.class1_bit
            if new == rows:
                break
            rows = new
        return ReachTable(self.group, cl, tuple(rows))

    def hits(self) -> bool:
        """Is some nonempty zero-sum sub-multiset length in L?"""
        return bool(self.rows[0] & self.classes.in_l_mask)

    def marked(self, g: GroupElement | int, length: int) -> bool:
        gi = g if isinstance(g, int) else g.index
        return bool(self.rows[gi] & self.classes.length_bit(length))


def reach_incorporate(table: ReachTable, g: GroupElement, mult: int) -> ReachTable:
    return table.incorporate(g, mult)


def fold_sequence(s: Sequence, ls: LengthSet) -> ReachTable:
    table = ReachTable.empty(s.group, ls)
    for g, k in s.items:
        table = table.incorporate(g, k)
    return table


def has_forbidden_subsequence(s: Sequence, ls: LengthSet) -> bool:
    """True iff some nonempty T | S has zero sum and |T| in L."""
    return fold_sequence(s, ls).hits()


def is_zero_sum_free(s: Sequence) -> bool:
    """No nonempty sub-multiset sums to the identity."""
    return not has_forbidden_subsequence(s, LengthSet.all_lengths())


def is_minimal_zero_sum(s: Sequence) -> bool:
    """Nonempty zero-sum whose proper nonempty sub-multisets are all zero-sum free.

    A proper zero-sum subsequence misses at least one copy of some support
    element, so it suffices to re-check S minus one copy of each support
    element rather than scan all sub-multisets.
    """
    if len(s) < 1 or not s.sum().is_identity():
        return False
    for g, _ in s.items:
        one = Sequence.from_counts(s.group, [(g, 1)])
        if not is_zero_sum_free(s.remove(one)):
            return False
    return True
