"""Extremal witness constructions and their certifications.

Constructions here are explicit (basis powers, zero padding, disjoint
embeddings); certification always goes through the independent reach-table
decision engine or the exact subsequence-counting convolution, never through
the construction's own arithmetic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import HypothesisUnmet
from .formulas import dstar_extended
from .groups import GroupSpec, canonicalize
from .invariants import davenport, enumerate_atoms, s_dN
from .reach import has_forbidden_subsequence, is_minimal_zero_sum, is_zero_sum_free
from .sequences import (
    LengthSet,
    Sequence,
    count_zero_sum_subsequences,
    iter_multisets,
)


def witness_dstar_extended(group: GroupSpec, d: int) -> Sequence:
    """The basis-power sequence 0^(m_0 - 1) * prod e_i^(m_i - 1).

    Its length is D*(G + C_d) - 1 and it has no nonempty zero-sum subsequence
    of length divisible by d (certified separately).
    """
    _, chain = dstar_extended(group, d)
    counts = []
    if chain[0] > 1:
        counts.append((group.identity(), chain[0] - 1))
    for i, m in enumerate(chain[1:]):
        if m > 1:
            counts.append((group.basis_element(i), m - 1))
    return Sequence.from_counts(group, counts)


def witness_davenport_padding(group: GroupSpec, d: int, **kwargs) -> Sequence:
    """0^(d-1) * S with S the canonical maximal zero-sum-free sequence.

    Length D(G) + d - 2; its only nonempty zero-sum subsequences are the pure
    zero blocks 0^k, k in [1, d-1].
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    core = davenport(group, **kwargs).witness
    if d == 1:
        return core
    return core.add_element(group.identity(), d - 1)


def certify_l_free(s: Sequence, ls: LengthSet) -> bool:
    """Independent certification: no nonempty zero-sum subsequence with length in L."""
    return not has_forbidden_subsequence(s, ls)


def certify_padding(s: Sequence, group: GroupSpec, d: int) -> bool:
    """Certify the padded witness: the non-zero part is zero-sum free, so the
    only zero-sums are 0^k with k < d, none of length divisible by d."""
    zeros = s.multiplicity(group.identity())
    if zeros != max(d - 1, 0) and d > 1:
        return False
    core = s.remove(Sequence.from_counts(group, [(group.identity(), zeros)])) if zeros else s
    return is_zero_sum_free(core) and not has_forbidden_subsequence(s, LengthSet.multiples_of(d))


def _paired_embeddings(h: GroupSpec):
    """H + H with the two coordinate embeddings.

    Doubling an invariant-factor chain stays a chain, so the canonical form
    is the sorted doubled factor list and slot 2i / 2i+1 carry the two copies
    of factor i.
    """
    doubled = tuple(sorted(h.factors + h.factors))
    big = GroupSpec(doubled)
    assert canonicalize(doubled) == big
    emb1, emb2 = [], []
    for i in range(h.rank):
        emb1.append(2 * i)
        emb2.append(2 * i + 1)
    return big, emb1, emb2


def _embed(s: Sequence, big: GroupSpec, slots: list[int]) -> Sequence:
    counts = []
    for g, k in s.items:
        coords = [0] * big.rank
        for j, c in enumerate(g.coords):
            coords[slots[j]] = c
        counts.append((big.element(coords), k))
    return Sequence.from_counts(big, counts)


def witness_remark_disjoint(h: GroupSpec, **kwargs) -> tuple[Sequence, Sequence]:
    """Two atoms U, V over H + H with disjoint summand supports and
    |U| = |V| = D(H); the only nonempty zero-sum subsequences of UV are
    U, V, and UV itself (exactly three, certified by exact counting).

    Requires H cyclic or a p-group, the family where D(H + H) = 2 D(H) - 1
    is guaranteed.
    """
    primes = {p for n in h.factors for p in _prime_divisors(n)}
    if h.rank > 1 and len(primes) > 1:
        raise HypothesisUnmet(
            f"{h} is neither cyclic nor a p-group; the disjoint-atom construction is not guaranteed"
        )
    core = davenport(h, **kwargs).witness
    atom = core.add_element(-core.sum())
    assert is_minimal_zero_sum(atom)
    big, emb1, emb2 = _paired_embeddings(h)
    return _embed(atom, big, emb1), _embed(atom, big, emb2)


def _prime_divisors(n: int) -> set[int]:
    from .groups import factorize

    return set(factorize(n))


def certify_exactly_three_zero_sums(u: Sequence, v: Sequence) -> bool:
    return count_zero_sum_subsequences(u.concat(v)) == 3


@dataclass
class LemmaEquivalenceReport:
    """Empirical check of the atom-pair / long-zero-sum equivalence.

    statement_a: every atom pair with |UV| >= 2d has a zero-sum T, |T| in [1,d].
    statement_b: every atom pair has one.
    statement_c: every zero-sum A with |A| in [D+1, D+3] has one (windowed).

    Under D(G) <= 2d-1 the three statements are equivalent; the consequences
    testable in the window are a == b and (b implies c).  A violation of
    either signals an implementation bug.
    """

    group: GroupSpec
    d: int
    applicable: bool
    davenport: int = 0
    statement_a: bool | None = None
    statement_b: bool | None = None
    statement_c: bool | None = None
    consistent: bool = True
    atom_count: int = 0
    pairs_checked: int = 0
    zero_sums_checked: int = 0
    counterexample_b: tuple[str, str] | None = None
    counterexample_c: str | None = None
    reason: str = ""


def check_lemma_equivalence(group: GroupSpec, d: int, **kwargs) -> LemmaEquivalenceReport:
    dav = davenport(group, **kwargs).value
    report = LemmaEquivalenceReport(group=group, d=d, applicable=True, davenport=dav)
    if dav > 2 * d - 1:
        report.applicable = False
        report.reason = f"D(G) = {dav} > 2d-1 = {2 * d - 1}"
        return report
    short = LengthSet.interval(1, d)
    atoms = enumerate_atoms(group)
    report.atom_count = len(atoms)
    a_ok = b_ok = True
    for i, u in enumerate(atoms):
        for v in atoms[i:]:
            uv = u.concat(v)
            report.pairs_checked += 1
            found = has_forbidden_subsequence(uv, short)
            if not found:
                b_ok = False
                if len(uv) >= 2 * d:
                    a_ok = False
                if report.counterexample_b is None:
                    report.counterexample_b = (u.to_text(), v.to_text())
    c_ok = True
    for length in range(dav + 1, dav + 4):
        for seq in iter_multisets(group, length):
            if not seq.sum().is_identity():
                continue
            report.zero_sums_checked += 1
            if not has_forbidden_subsequence(seq, short):
                c_ok = False
                if report.counterexample_c is None:
                    report.counterexample_c = seq.to_text()
    report.statement_a, report.statement_b, report.statement_c = a_ok, b_ok, c_ok
    # a <=> b exactly; b => c is testable in the window (c's window may miss
    # counterexamples that refute b, so c alone cannot confirm b).
    report.consistent = (a_ok == b_ok) and (not b_ok or c_ok)
    return report


@dataclass
class ShortZeroSumReport:
    """Empirical verification of the short-zero-sum theorem for one (G, d).

    part 1: every sequence of length s_{dN}(G) has a zero-sum subsequence of
    length in [1, d]; part 2: every zero-sum sequence of length in
    [D(G)+1, s_{dN}(G)+1] has one, and the constructive extractor's
    certificate re-verifies on each.
    """

    group: GroupSpec
    d: int
    applicable: bool
    davenport: int = 0
    s_dN_value: int = 0
    part1_checked: int = 0
    part1_failures: int = 0
    part1_exhaustive: bool = True
    part2_checked: int = 0
    part2_failures: int = 0
    part2_exhaustive: bool = True
    certificates_verified: int = 0
    certificate_failures: int = 0
    reason: str = ""

    @property
    def ok(self) -> bool:
        return (
            self.part1_failures == 0
            and self.part2_failures == 0
            and self.certificate_failures == 0
        )


def check_short_zero_sum_theorem(
    group: GroupSpec,
    d: int,
    s_dN_value: int | None = None,
    sample_limit: int = 100_000,
    seed: int = 0,
    **kwargs,
) -> ShortZeroSumReport:
    from math import comb

    from .finder import find_short_zero_sum

    dav = davenport(group, **kwargs).value
    sdn = s_dN_value if s_dN_value is not None else s_dN(group, d, **kwargs).value
    report = ShortZeroSumReport(group=group, d=d, applicable=True, davenport=dav, s_dN_value=sdn)
    if dav > 2 * d - 1 or sdn > 3 * d - 1:
        report.applicable = False
        report.reason = f"hypotheses fail: D={dav} vs 2d-1={2*d-1}, s_dN={sdn} vs 3d-1={3*d-1}"
        return report

    short = LengthSet.interval(1, d)
    n = group.order
    total = comb(n + sdn - 1, sdn)
    rng = random.Random(seed)
    if total <= sample_limit:
        part1 = iter_multisets(group, sdn)
    else:
        report.part1_exhaustive = False
        elems = list(group.elements())
        part1 = (
            Sequence.from_elements(group, rng.choices(elems, k=sdn))
            for _ in range(sample_limit)
        )
    for seq in part1:
        report.part1_checked += 1
        if not has_forbidden_subsequence(seq, short):
            report.part1_failures += 1

    lengths = range(dav + 1, sdn + 2)
    per_length = max(1, sample_limit // max(1, len(lengths)))
    elems = list(group.elements())
    for length in lengths:
        if comb(n + length - 1, length) <= per_length:
            pool = iter_multisets(group, length)
        else:
            report.part2_exhaustive = False
            pool = (
                Sequence.from_elements(group, rng.choices(elems, k=length))
                for _ in range(per_length)
            )
        for seq in pool:
            if not seq.sum().is_identity():
                continue
            report.part2_checked += 1
            if not has_forbidden_subsequence(seq, short):
                report.part2_failures += 1
                continue
            cert = find_short_zero_sum(
                seq, d, davenport_value=dav, s_dN_value=sdn
            )
            if cert.verify(seq) and short.contains(len(cert.subsequence)):
                report.certificates_verified += 1
            else:
                report.certificate_failures += 1
    return report
