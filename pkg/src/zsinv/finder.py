"""Constructive extraction of zero-sum subsequences with length constraints.

`find_zero_sum` turns the reach-table decision into an explicit certificate by
a backward pass over the forward tables: processing support elements from the
canonically greatest down, it takes the least multiplicity that stays
completable, which makes certificates deterministic and reproducible.

`decompose_blocks` and `find_short_zero_sum` implement the constructive
content of the block-decomposition lemma and the short-zero-sum theorem's
proof (padding with zeros, extracting a block of length d or 2d, splitting or
complementing).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ExtractionFailed, HypothesisUnmet
from .formulas import predict_s_dN
from .groups import GroupSpec
from .invariants import davenport, s_dN
from .reach import MODE_ALL, MODE_CAP, MODE_MOD, ReachTable
from .sequences import LengthSet, Sequence


@dataclass(frozen=True)
class Certificate:
    """An explicit zero-sum subsequence meeting a length constraint."""

    subsequence: Sequence
    length_set: LengthSet

    @property
    def length(self) -> int:
        return len(self.subsequence)

    @property
    def sum_check(self):
        return self.subsequence.sum()

    def verify(self, original: Sequence) -> bool:
        """Re-check all three defining properties against the original."""
        return (
            self.subsequence.divides(original)
            and self.sum_check.is_identity()
            and self.length >= 1
            and self.length_set.contains(self.length)
        )


def find_zero_sum(s: Sequence, ls: LengthSet) -> Certificate | None:
    """A certificate for a nonempty zero-sum subsequence with length in L,
    or None when the decision procedure says none exists."""
    tables: list[ReachTable] = [ReachTable.empty(s.group, ls)]
    for g, k in s.items:
        tables.append(tables[-1].incorporate(g, k))
    if not tables[-1].hits():
        return None

    cl = tables[-1].classes
    identity = s.group.identity()
    # Target: the least admissible class recorded at the identity row.
    target_len = None
    if cl.mode == MODE_CAP:
        bits = tables[-1].rows[0] & cl.in_l_mask
        target_len = (bits & -bits).bit_length() - 1

    mults = [0] * len(s.items)
    s_rem = identity
    r_rem = 0  # residue still needed (mod d) in MOD mode
    l_rem = target_len if target_len is not None else 0
    chosen = 0
    for i in range(len(s.items) - 1, -1, -1):
        g, avail = s.items[i]
        prefix = tables[i]
        picked = None
        for m in range(0, avail + 1):
            if cl.mode == MODE_CAP and m > l_rem:
                break
            rest = s_rem - g.scaled(m)
            if cl.mode == MODE_MOD:
                rest_r = (r_rem - m) % cl.d
                closed = rest_r == 0
                prefix_ok = bool(prefix.rows[rest.index] & (1 << rest_r))
            elif cl.mode == MODE_CAP:
                rest_l = l_rem - m
                closed = rest_l == 0
                prefix_ok = rest_l >= 1 and bool(prefix.rows[rest.index] & (1 << rest_l))
            else:
                closed = True
                prefix_ok = bool(prefix.rows[rest.index] & 1)
            # Completable either by a nonempty selection from the prefix, or
            # by taking nothing more once the residual target is closed.
            if (i > 0 and prefix_ok) or (
                closed and rest.is_identity() and chosen + m >= 1
            ):
                picked = m
                break
        if picked is None:
            raise ExtractionFailed(
                f"backward pass stuck at support element {g} extracting from {s} with L={ls}"
            )
        m = picked
        mults[i] = m
        s_rem = s_rem - g.scaled(m)
        if cl.mode == MODE_MOD:
            r_rem = (r_rem - m) % cl.d
        elif cl.mode == MODE_CAP:
            l_rem -= m
        chosen += m

    counts = [(g, m) for (g, _), m in zip(s.items, mults) if m]
    cert = Certificate(Sequence.from_counts(s.group, counts), ls)
    if not cert.verify(s):
        raise ExtractionFailed(f"extracted certificate fails verification: {cert.subsequence}")
    return cert


def decompose_blocks(
    s: Sequence,
    group: GroupSpec,
    t: int,
    s_nN_value: int | None = None,
    **kwargs,
) -> tuple[list[Sequence], Sequence]:
    """Split S into t zero-sum blocks plus remainder: |S_i| = n for i < t and
    |S_t| in {n, 2n}, where n = exp(G).

    Valid for rank <= 2 groups with |S| >= (t-1)n + s_{nN}(G); extraction
    cannot fail under that hypothesis, so a failure aborts loudly.
    """
    if s.group != group:
        raise ValueError("sequence is not over the stated group")
    if group.rank > 2:
        raise HypothesisUnmet(f"{group} has rank {group.rank} > 2")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    n = group.exponent
    if s_nN_value is None:
        pred = predict_s_dN(group, n)
        s_nN_value = pred[0] if pred else s_dN(group, n, **kwargs).value
    need = (t - 1) * n + s_nN_value
    if len(s) < need:
        raise HypothesisUnmet(
            f"|S| = {len(s)} < (t-1)n + s_nN(G) = {need}"
        )
    blocks: list[Sequence] = []
    rest = s
    for _ in range(t - 1):
        cert = find_zero_sum(rest, LengthSet.exactly(n))
        if cert is None:
            raise ExtractionFailed(
                f"no zero-sum block of length {n} in {rest} although the hypothesis holds"
            )
        blocks.append(cert.subsequence)
        rest = rest.remove(cert.subsequence)
    last_lengths = LengthSet.exactly(n) if n == 1 else LengthSet.finite({n, 2 * n})
    cert = find_zero_sum(rest, last_lengths)
    if cert is None:
        raise ExtractionFailed(
            f"no zero-sum block of length {n} or {2 * n} in {rest} although the hypothesis holds"
        )
    blocks.append(cert.subsequence)
    rest = rest.remove(cert.subsequence)
    return blocks, rest


def find_short_zero_sum(
    a: Sequence,
    d: int,
    davenport_value: int | None = None,
    s_dN_value: int | None = None,
    proof_path: bool = True,
    **kwargs,
) -> Certificate:
    """A zero-sum subsequence of the zero-sum sequence A with length in [1, d].

    Requires |A| >= D(G) + 1 and the theorem hypotheses D(G) <= 2d - 1 and
    s_{dN}(G) <= 3d - 1.  The default path follows the constructive proof:
    pad with zeros to length s_{dN}(G), take a zero-sum block of length d or
    2d, then split or complement.  `proof_path=False` switches to a direct
    search with the same contract, for differential testing.
    """
    group = a.group
    if not a.sum().is_identity():
        raise HypothesisUnmet("input sequence is not zero-sum")
    dav = davenport_value if davenport_value is not None else davenport(group, **kwargs).value
    if len(a) < dav + 1:
        raise HypothesisUnmet(f"|A| = {len(a)} < D(G) + 1 = {dav + 1}")
    if dav > 2 * d - 1:
        raise HypothesisUnmet(f"D(G) = {dav} > 2d - 1 = {2 * d - 1}")
    sdn = s_dN_value if s_dN_value is not None else s_dN(group, d, **kwargs).value
    if sdn > 3 * d - 1:
        raise HypothesisUnmet(f"s_dN(G) = {sdn} > 3d - 1 = {3 * d - 1}")

    short = LengthSet.interval(1, d)
    if not proof_path:
        cert = find_zero_sum(a, short)
        if cert is None:
            raise ExtractionFailed(f"direct search found no short zero-sum in {a}")
        return cert

    identity = group.identity()
    if a.multiplicity(identity) >= 1:
        return Certificate(Sequence.from_counts(group, [(identity, 1)]), short)

    if len(a) <= 2 * d:
        # A is zero-sum but longer than any atom, so it splits into two
        # nonempty zero-sum halves; the shorter one has length <= d.
        proper = find_zero_sum(a, LengthSet.interval(1, len(a) - 1))
        if proper is None:
            raise ExtractionFailed(f"{a} has no proper zero-sum part despite |A| > D(G)")
        t1 = proper.subsequence
        t2 = a.remove(t1)
        pick = t1 if len(t1) <= len(t2) else t2
        return Certificate(pick, short)

    if len(a) >= sdn:
        block = find_zero_sum(a, LengthSet.finite({d, 2 * d}))
        if block is None:
            raise ExtractionFailed(f"no block of length d or 2d in {a}")
        return _shorten_block(block.subsequence, d, short)

    # 2d + 1 <= |A| < s_dN(G): pad with zeros and extract through the padding.
    k = sdn - len(a)
    padded = a.add_element(identity, k)
    block = find_zero_sum(padded, LengthSet.finite({d, 2 * d}))
    if block is None:
        raise ExtractionFailed(f"no block of length d or 2d in the padded {padded}")
    zeros = block.subsequence.multiplicity(identity)
    core = (
        block.subsequence.remove(Sequence.from_counts(group, [(identity, zeros)]))
        if zeros
        else block.subsequence
    )
    if len(block.subsequence) == d:
        return Certificate(core, short)
    # Length-2d block: the complement of its non-zero part inside A is a
    # nonempty zero-sum of length <= d - 1.
    return Certificate(a.remove(core), short)


def _shorten_block(block: Sequence, d: int, short: LengthSet) -> Certificate:
    if len(block) == d:
        return Certificate(block, short)
    proper = find_zero_sum(block, LengthSet.interval(1, len(block) - 1))
    if proper is None:
        raise ExtractionFailed(f"length-2d zero-sum {block} does not split")
    t1 = proper.subsequence
    t2 = block.remove(t1)
    pick = t1 if len(t1) <= len(t2) else t2
    return Certificate(pick, short)
