"""Finite abelian groups in invariant-factor form.

A group is C_{n_1} + ... + C_{n_r} with 1 < n_1 | n_2 | ... | n_r; the empty
factor list is the trivial group.  Elements are residue vectors against the
factors.  The lexicographic order on coordinate vectors is the canonical
element order: every enumeration, DFS branching rule, and certificate
tie-break in this package refers to this one order.

Text grammar (CLI and file formats): a group is a comma-separated list of
positive integers, e.g. "2,6,4", parsed through `canonicalize`; "1" or the
empty string denotes the trivial group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (desk-scale integers)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = 1
    return out


def is_prime(p: int) -> bool:
    return p >= 2 and factorize(p) == {p: 1}


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group as its invariant-factor chain."""

    factors: tuple[int, ...]

    def __post_init__(self):
        prev = 1
        for f in self.factors:
            if f < 2:
                raise ValueError(f"invariant factor {f} < 2")
            if f % prev != 0:
                raise ValueError(f"broken divisibility chain {self.factors}")
            prev = f

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords) -> "GroupElement":
        """Build an element, reducing each coordinate modulo its factor."""
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {coords}")
        return GroupElement(self, tuple(c % n for c, n in zip(coords, self.factors)))

    def basis_element(self, i: int) -> "GroupElement":
        """e_i: 1 in slot i (0-based), 0 elsewhere."""
        if not 0 <= i < self.rank:
            raise IndexError(i)
        return GroupElement(self, tuple(int(j == i) for j in range(self.rank)))

    def elements(self) -> Iterator["GroupElement"]:
        """All elements in canonical (lexicographic) order."""
        for coords in product(*(range(n) for n in self.factors)):
            yield GroupElement(self, coords)

    def element_at(self, index: int) -> "GroupElement":
        if not 0 <= index < self.order:
            raise IndexError(index)
        coords = []
        for n in reversed(self.factors):
            coords.append(index % n)
            index //= n
        return GroupElement(self, tuple(reversed(coords)))

    def to_text(self) -> str:
        return ",".join(str(f) for f in self.factors) if self.factors else "1"

    def __str__(self) -> str:
        return " + ".join(f"C{f}" for f in self.factors) if self.factors else "C1"


@dataclass(frozen=True, order=False)
class GroupElement:
    """A residue vector bound to a GroupSpec.

    Comparison (the canonical order) is lexicographic on coordinates and only
    defined between elements of the same group.
    """

    group: GroupSpec
    coords: tuple[int, ...]

    def _check(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise ValueError(f"elements bound to different groups: {self.group} vs {other.group}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(
            self.group,
            tuple((a + b) % n for a, b, n in zip(self.coords, other.coords, self.group.factors)),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(
            self.group, tuple((-c) % n for c, n in zip(self.coords, self.group.factors))
        )

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scaled(self, k: int) -> "GroupElement":
        return GroupElement(
            self.group, tuple((c * k) % n for c, n in zip(self.coords, self.group.factors))
        )

    def order(self) -> int:
        return math.lcm(*(n // math.gcd(n, c) for c, n in zip(self.coords, self.group.factors))) \
            if self.coords else 1

    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    @property
    def index(self) -> int:
        """Rank of this element in the canonical enumeration (mixed radix)."""
        idx = 0
        for c, n in zip(self.coords, self.group.factors):
            idx = idx * n + c
        return idx

    def __lt__(self, other: "GroupElement") -> bool:
        self._check(other)
        return self.coords < other.coords

    def __le__(self, other: "GroupElement") -> bool:
        self._check(other)
        return self.coords <= other.coords

    def to_text(self) -> str:
        return ".".join(str(c) for c in self.coords) if self.coords else "0"

    def __str__(self) -> str:
        return self.to_text()


def _stack_prime_powers(orders) -> tuple[tuple[int, ...], dict]:
    """Restack arbitrary cyclic orders into the invariant-factor chain.

    Returns (factors, slots) where slots maps (input position i, prime p) to
    (factor slot j, exponent e): the p-power part of input i lands inside
    factor j, which is divisible by p^e.  Slots are what `reduction_hom` needs
    to realize the CRT recombination explicitly.
    """
    per_prime: dict[int, list[tuple[int, int]]] = {}
    for i, n in enumerate(orders):
        if n < 1:
            raise ValueError(f"cyclic order {n} < 1")
        for p, e in factorize(n).items():
            per_prime.setdefault(p, []).append((e, i))
    depth = max((len(v) for v in per_prime.values()), default=0)
    raw = [1] * depth
    placed: dict[tuple[int, int], tuple[int, int]] = {}
    for p, pairs in per_prime.items():
        pairs = sorted(pairs) + [(0, -1)] * (depth - len(pairs))
        pairs.sort()
        for j, (e, i) in enumerate(pairs):
            if e:
                raw[j] *= p ** e
                placed[(i, p)] = (j, e)
    dropped = sum(1 for f in raw if f == 1)
    factors = tuple(f for f in raw if f > 1)
    slots = {key: (j - dropped, e) for key, (j, e) in placed.items()}
    return factors, slots


def canonicalize(orders) -> GroupSpec:
    """Invariant-factor form of a direct sum of cyclic groups.

    >>> canonicalize([2, 6, 4]).factors
    (2, 2, 12)
    """
    factors, _ = _stack_prime_powers(list(orders))
    return GroupSpec(factors)


def direct_sum(g: GroupSpec, h: GroupSpec) -> GroupSpec:
    return canonicalize(list(g.factors) + list(h.factors))


def cyclic(n: int) -> GroupSpec:
    if n < 1:
        raise ValueError(f"cyclic order {n} < 1")
    return GroupSpec(()) if n == 1 else GroupSpec((n,))


def p_component(g: GroupSpec, p: int) -> GroupSpec:
    """The subgroup of elements of p-power order, in canonical form."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    parts = []
    for n in g.factors:
        e = factorize(n).get(p, 0)
        if e:
            parts.append(p ** e)
    return GroupSpec(tuple(sorted(parts)))


def parse_group(text: str) -> GroupSpec:
    """Parse the group text grammar: comma-separated positive integers."""
    text = text.strip()
    if not text:
        return GroupSpec(())
    try:
        orders = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ValueError(f"bad group literal {text!r}") from None
    if any(n < 1 for n in orders):
        raise ValueError(f"group orders must be positive: {text!r}")
    return canonicalize(orders)


@dataclass(frozen=True)
class ReductionHom:
    """Coordinatewise reduction G -> G/K given divisors q_i | n_i.

    The codomain is canonicalize(q_1, ..., q_r); the map recombines the
    reduced coordinates by CRT so that full moduli (q_i = n_i) give the
    identity map.
    """

    domain: GroupSpec
    moduli: tuple[int, ...]
    codomain: GroupSpec
    _mixers: tuple[tuple[int, int, int, int], ...]  # (coord i, modulus p^e, slot, crt unit)

    @property
    def kernel_order(self) -> int:
        return self.domain.order // math.prod(self.moduli)

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.domain:
            raise ValueError("element not in the domain group")
        out = [0] * self.codomain.rank
        for i, pe, slot, unit in self._mixers:
            f = self.codomain.factors[slot]
            out[slot] = (out[slot] + (x.coords[i] % pe) * unit) % f
        return GroupElement(self.codomain, tuple(out))


def reduction_hom(g: GroupSpec, moduli) -> ReductionHom:
    moduli = tuple(moduli)
    if len(moduli) != g.rank:
        raise ValueError(f"expected {g.rank} moduli, got {moduli}")
    for q, n in zip(moduli, g.factors):
        if q < 1 or n % q != 0:
            raise ValueError(f"modulus {q} does not divide factor {n}")
    factors, slots = _stack_prime_powers(list(moduli))
    codomain = GroupSpec(factors)
    mixers = []
    for (i, p), (slot, e) in sorted(slots.items()):
        pe = p ** e
        f = factors[slot]
        unit = (f // pe) * pow(f // pe, -1, pe) % f
        mixers.append((i, pe, slot, unit))
    return ReductionHom(g, moduli, codomain, tuple(mixers))


@lru_cache(maxsize=128)
def addition_table(g: GroupSpec) -> tuple[tuple[int, ...], ...]:
    """Cayley table over canonical element indices (used by the search core)."""
    elems = list(g.elements())
    return tuple(tuple((a + b).index for b in elems) for a in elems)


@lru_cache(maxsize=128)
def element_orders(g: GroupSpec) -> tuple[int, ...]:
    return tuple(x.order() for x in g.elements())
