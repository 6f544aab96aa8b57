"""Exact search for the longest sequence avoiding admissible zero-sum subsequences.

`max_extremal(G, L)` computes s_L(G) - 1 as the length of the longest sequence
over G with no nonempty zero-sum subsequence of length in L, by a canonical
depth-first enumeration with reach-table pruning.  The DFS is exhaustive
(branch-and-bound with an admissible extension bound), so results are exact;
an optional admissible depth cap lets the caller pass a proven upper bound,
in which case the search may stop at the first witness attaining it - the
preorder guarantees that witness is the canonically least one.

Parallel mode splits the DFS at the root, one task per first-element choice;
tasks own disjoint subtrees and results are merged in canonical task order,
so values and witnesses are independent of the worker count and schedule.

The node loop lives in a compiled extension (`zsinv._kernel`) when available,
with a pure-Python twin (`zsinv._kernel_py`) selected at import time as a
fallback; both implement identical semantics.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import _kernel_py
from .errors import BudgetExceeded, InfiniteInvariant
from .groups import GroupSpec, addition_table, element_orders
from .reach import MODE_CAP, MODE_MOD, LengthClasses
from .sequences import LengthSet, Sequence

try:
    from . import _kernel as _compiled
except ImportError:  # pragma: no cover - depends on the build environment
    _compiled = None

STATUS_EXHAUSTED = 0
STATUS_CAP_HIT = 1
STATUS_NODE_LIMIT = 2
STATUS_TIME_LIMIT = 3

_STATUS_TEXT = {
    STATUS_EXHAUSTED: "exhausted",
    STATUS_CAP_HIT: "cap-hit",
    STATUS_NODE_LIMIT: "node-limit",
    STATUS_TIME_LIMIT: "time-limit",
}


def kernel_name() -> str:
    return "compiled" if _compiled is not None else "fallback"


def available_kernels() -> tuple[str, ...]:
    return ("compiled", "fallback") if _compiled is not None else ("fallback",)


@dataclass(frozen=True)
class Budget:
    """Search limits.  In parallel mode the node/time limits apply per task
    (tasks are root subtrees), so skip decisions stay deterministic."""

    max_nodes: int | None = None
    max_seconds: float | None = None
    workers: int = 1


@dataclass
class SearchOutcome:
    max_length: int
    witness: Sequence
    nodes_expanded: int
    wall_time: float
    exact: bool
    status: str = "exhausted"


def multiplicity_caps(group: GroupSpec, ls: LengthSet) -> list[int]:
    """Per-element multiplicity bound: g^m alone is forbidden once m copies of
    g form an admissible zero-sum, i.e. at the least member of L divisible by
    ord(g).  Finite for every element whenever L meets exp(G)*N."""
    caps = []
    for o in element_orders(group):
        m = ls.least_admissible_multiple(o)
        if m is None:
            raise InfiniteInvariant(f"no admissible multiple of element order {o} in {ls}")
        caps.append(m - 1)
    return caps


def _kernel_args(group: GroupSpec, ls: LengthSet, depth_cap: int | None):
    cl = LengthClasses.for_length_set(ls)
    n = group.order
    add = addition_table(group)
    add_flat = [add[a][b] for a in range(n) for b in range(n)]
    caps = multiplicity_caps(group, ls)
    max_depth = sum(caps)
    if cl.mode == MODE_MOD:
        max_depth = min(max_depth, n * cl.d)
    elif cl.mode == MODE_CAP:
        max_depth = min(max_depth, n * (cl.cap + 2))
    if depth_cap is not None:
        max_depth = min(max_depth, depth_cap)
    return cl, add_flat, caps, max_depth


def _select_kernel(width: int, kernel: str | None):
    if kernel == "fallback":
        return _kernel_py
    if kernel == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available")
        if width > 64:
            raise RuntimeError(f"length-class width {width} exceeds the compiled kernel's word size")
        return _compiled
    if _compiled is not None and width <= 64:
        return _compiled
    return _kernel_py


def _run_task(group_factors, ls: LengthSet, first_elem: int, depth_cap: int | None,
              max_nodes: int | None, max_seconds: float | None, kernel: str | None):
    group = GroupSpec(tuple(group_factors))
    cl, add_flat, caps, max_depth = _kernel_args(group, ls, depth_cap)
    impl = _select_kernel(cl.width, kernel)
    return impl.run(
        add_flat,
        group.order,
        cl.mode,
        cl.width,
        cl.in_l_mask,
        cl.class1_bit,
        caps,
        first_elem,
        -1 if depth_cap is None else depth_cap,
        -1 if max_nodes is None else max_nodes,
        -1.0 if max_seconds is None else max_seconds,
        max_depth,
    )


def _counts_to_sequence(group: GroupSpec, counts) -> Sequence:
    items = [(group.element_at(i), k) for i, k in enumerate(counts) if k]
    return Sequence.from_counts(group, items)


def max_extremal(
    group: GroupSpec,
    ls: LengthSet,
    budget: Budget | None = None,
    depth_cap: int | None = None,
    kernel: str | None = None,
) -> SearchOutcome:
    """Longest L-zero-sum-free sequence over the group, with witness.

    Raises InfiniteInvariant when L misses every multiple of exp(G) (then
    s_L(G) is infinite) and BudgetExceeded (carrying the best lower bound
    found) when node or time limits cut the search short.
    """
    if not ls.has_multiple_of(group.exponent):
        raise InfiniteInvariant(
            f"L = {ls} contains no multiple of exp(G) = {group.exponent}; s_L(G) is infinite"
        )
    budget = budget or Budget()
    start = time.monotonic()

    if budget.workers <= 1:
        best_len, counts, nodes, status = _run_task(
            group.factors, ls, -1, depth_cap, budget.max_nodes, budget.max_seconds, kernel
        )
    else:
        best_len, counts, nodes, status = _parallel_search(group, ls, budget, depth_cap, kernel)

    outcome = SearchOutcome(
        max_length=best_len,
        witness=_counts_to_sequence(group, counts),
        nodes_expanded=nodes,
        wall_time=time.monotonic() - start,
        exact=status in (STATUS_EXHAUSTED, STATUS_CAP_HIT),
        status=_STATUS_TEXT[status],
    )
    if not outcome.exact:
        raise BudgetExceeded(
            f"search stopped at {outcome.status} with lower bound {best_len}", partial=outcome
        )
    return outcome


def _parallel_search(group, ls, budget, depth_cap, kernel):
    caps = multiplicity_caps(group, ls)
    tasks = [h for h in range(group.order) if caps[h] >= 1]
    best_len, best_counts, status = 0, [0] * group.order, STATUS_EXHAUSTED
    nodes = 1
    with ProcessPoolExecutor(max_workers=budget.workers) as pool:
        futures = [
            pool.submit(
                _run_task, group.factors, ls, h, depth_cap,
                budget.max_nodes, budget.max_seconds, kernel,
            )
            for h in tasks
        ]
        for i, fut in enumerate(futures):
            if fut.cancelled():
                continue
            t_len, t_counts, t_nodes, t_status = fut.result()
            nodes += t_nodes
            if t_len > best_len:
                best_len, best_counts = t_len, t_counts
            if t_status in (STATUS_NODE_LIMIT, STATUS_TIME_LIMIT):
                status = t_status
            if t_status == STATUS_CAP_HIT:
                # Later tasks are canonically greater; they cannot beat this.
                status = STATUS_CAP_HIT if status == STATUS_EXHAUSTED else status
                for later in futures[i + 1:]:
                    later.cancel()
                break
    return best_len, best_counts, nodes, status
