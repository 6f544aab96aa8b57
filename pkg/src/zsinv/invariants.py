"""Named zero-sum invariants as memoized facades over the search engine.

Each facade picks the length set that defines the invariant, runs the exact
search, and returns an InvariantResult whose witness certifies the lower
bound (the DFS exhaustion is the proof of maximality).  Values are cached
in-process and, when a result store is attached, persisted across runs so
long sweeps can resume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .engine import Budget, max_extremal
from .errors import BudgetExceeded, InfiniteInvariant
from .formulas import davenport_matches_lower_bound, dstar, dstar_extended
from .groups import GroupElement, GroupSpec, cyclic, direct_sum
from .reach import ReachTable, is_minimal_zero_sum, is_zero_sum_free
from .sequences import LengthSet, Sequence, parse_sequence

DEFAULT_ORDER_LIMIT = 36

_memory: dict[tuple, "InvariantResult"] = {}


@dataclass(frozen=True)
class InvariantResult:
    name: str
    group: GroupSpec
    param: object  # d for s_dN, the LengthSet for s_L, None otherwise
    value: int | float  # math.inf when the invariant is infinite
    witness: Sequence | None
    exact: bool
    nodes_expanded: int = 0
    wall_time: float = 0.0

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "group": self.group.to_text(),
            "param": str(self.param) if self.param is not None else None,
            "value": "inf" if self.value == math.inf else int(self.value),
            "witness": self.witness.to_text() if self.witness is not None else None,
            "exact": self.exact,
            "nodes": self.nodes_expanded,
            "seconds": self.wall_time,
        }

    @classmethod
    def from_record(cls, rec: dict, group: GroupSpec, param) -> "InvariantResult":
        value = math.inf if rec["value"] == "inf" else int(rec["value"])
        witness = parse_sequence(rec["witness"], group) if rec["witness"] else None
        return cls(
            name=rec["name"],
            group=group,
            param=param,
            value=value,
            witness=witness,
            exact=bool(rec["exact"]),
            nodes_expanded=int(rec.get("nodes", 0)),
            wall_time=float(rec.get("seconds", 0.0)),
        )


def length_set_for(name: str, group: GroupSpec, param=None) -> LengthSet:
    if name == "D":
        return LengthSet.all_lengths()
    if name == "s":
        return LengthSet.exactly(group.exponent)
    if name == "eta":
        return LengthSet.interval(1, group.exponent)
    if name == "ZS":
        return LengthSet.exactly(group.order)
    if name == "s_dN":
        return LengthSet.multiples_of(param)
    if name == "s_L":
        return param
    raise ValueError(f"unknown invariant {name!r}")


def _admissible_depth_cap(name: str, group: GroupSpec, param) -> int | None:
    """Depth cap from the Davenport upper bound, only when D = D* is known
    for the extended group, so an exact search stays exact."""
    if name == "D":
        if davenport_matches_lower_bound(group):
            return dstar(group) - 1
    elif name == "s_dN":
        ext = direct_sum(group, cyclic(param))
        if davenport_matches_lower_bound(ext):
            return dstar_extended(group, param)[0] - 1
    return None


def compute(
    name: str,
    group: GroupSpec,
    param=None,
    budget: Budget | None = None,
    store=None,
    order_limit: int = DEFAULT_ORDER_LIMIT,
    use_upper_cap: bool = True,
) -> InvariantResult:
    if group.order > order_limit:
        raise ValueError(
            f"|G| = {group.order} exceeds the search ceiling {order_limit}; "
            "raise order_limit to force the computation"
        )
    ls = length_set_for(name, group, param)
    key = (group.factors, ls.to_text())
    cached = _memory.get(key)
    if cached is not None and cached.exact:
        return InvariantResult(name, group, param, cached.value, cached.witness,
                               True, cached.nodes_expanded, cached.wall_time)
    if store is not None:
        rec = store.get(group, ls)
        if rec is not None and rec.get("exact"):
            result = InvariantResult.from_record(rec, group, param)
            result = InvariantResult(name, group, param, result.value, result.witness,
                                     True, result.nodes_expanded, result.wall_time)
            _memory[key] = result
            return result

    if not ls.has_multiple_of(group.exponent):
        raise InfiniteInvariant(
            f"{name}({group.to_text()}) is infinite: {ls} misses exp(G)*N"
        )

    cap = _admissible_depth_cap(name, group, param) if use_upper_cap else None
    outcome = max_extremal(group, ls, budget=budget, depth_cap=cap)
    result = InvariantResult(
        name=name,
        group=group,
        param=param,
        value=outcome.max_length + 1,
        witness=outcome.witness,
        exact=outcome.exact,
        nodes_expanded=outcome.nodes_expanded,
        wall_time=outcome.wall_time,
    )
    _memory[key] = result
    if store is not None:
        store.put(group, ls, result.to_record())
    return result


def davenport(group: GroupSpec, **kwargs) -> InvariantResult:
    return compute("D", group, **kwargs)


def egz(group: GroupSpec, **kwargs) -> InvariantResult:
    return compute("s", group, **kwargs)


def eta(group: GroupSpec, **kwargs) -> InvariantResult:
    return compute("eta", group, **kwargs)


def zs(group: GroupSpec, **kwargs) -> InvariantResult:
    return compute("ZS", group, **kwargs)


def s_dN(group: GroupSpec, d: int, **kwargs) -> InvariantResult:
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    return compute("s_dN", group, d, **kwargs)


def s_L(group: GroupSpec, ls: LengthSet, **kwargs) -> InvariantResult:
    return compute("s_L", group, ls, **kwargs)


def clear_cache() -> None:
    _memory.clear()


ATOM_ORDER_LIMIT = 16


def enumerate_atoms(group: GroupSpec, order_limit: int = ATOM_ORDER_LIMIT) -> list[Sequence]:
    """All minimal zero-sum sequences over the group, canonically sorted.

    Walks the canonical DFS tree of zero-sum-free sequences; the prefix of an
    atom missing one copy of its greatest element is zero-sum free, so every
    atom is S + (-sum(S)) for exactly one tree node S.  Candidates are
    certified by is_minimal_zero_sum rather than trusted.
    """
    if group.order > order_limit:
        raise ValueError(
            f"|G| = {group.order} exceeds the atom enumeration ceiling {order_limit}"
        )
    elems = list(group.elements())
    atoms: list[Sequence] = []
    empty = ReachTable.empty(group, LengthSet.all_lengths())

    def visit(seq_items: list[tuple[GroupElement, int]], table: ReachTable,
              last_idx: int, total: GroupElement) -> None:
        closer = -total
        if closer.index >= last_idx:
            candidate = Sequence.from_counts(group, seq_items + [(closer, 1)])
            if is_minimal_zero_sum(candidate):
                atoms.append(candidate)
        for idx in range(max(last_idx, 1), group.order):
            g = elems[idx]
            child = table.incorporate(idx)
            if child.hits():
                continue
            if seq_items and seq_items[-1][0] == g:
                grown = seq_items[:-1] + [(g, seq_items[-1][1] + 1)]
            else:
                grown = seq_items + [(g, 1)]
            visit(grown, child, idx, total + g)

    visit([], empty, 0, group.identity())
    atoms.sort(key=lambda a: tuple((g.coords, k) for g, k in a.items))
    return atoms
