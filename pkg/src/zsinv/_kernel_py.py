"""Pure-Python DFS core: reference twin of the compiled kernel.

Enumerates multisets over the group in canonical (non-decreasing) order,
pruning any node that acquires a zero-sum sub-multiset with length in L, and
returns the longest surviving node together with the first (= lexicographically
least) witness of that length in preorder.

Selected automatically when the compiled extension is unavailable or when a
length-class mask does not fit in a machine word.  Same signature and same
results as `zsinv._kernel.run`, only slower.
"""

from __future__ import annotations

from time import monotonic

MODE_ALL = 0
MODE_MOD = 1
MODE_CAP = 2

STATUS_EXHAUSTED = 0
STATUS_CAP_HIT = 1
STATUS_NODE_LIMIT = 2
STATUS_TIME_LIMIT = 3


def run(
    add_flat,
    n: int,
    mode: int,
    width: int,
    in_l_mask: int,
    class1_bit: int,
    mult_cap,
    first_elem: int,
    depth_cap: int,
    node_budget: int,
    time_budget: float,
    max_depth: int,
):
    """Run the canonical DFS; returns (best_len, best_counts, nodes, status)."""
    d = width
    mod_mask = (1 << d) - 1
    cap_top = 1 << (width - 1)
    cap_low = cap_top - 1

    sufcap = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        sufcap[i] = sufcap[i + 1] + mult_cap[i]

    tabs = [[0] * n for _ in range(max_depth + 2)]
    seq = [0] * (max_depth + 2)
    v = [0] * n

    best_len = 0
    best_counts = [0] * n
    nodes = 1
    depth = 0
    c = first_elem if first_elem >= 0 else 0
    root_limit = first_elem + 1 if first_elem >= 0 else n
    t0 = monotonic()

    while True:
        limit = root_limit if depth == 0 else n
        pushed = False
        while c < limit:
            h = c
            if v[h] < mult_cap[h]:
                # Ascending support: among indices >= h only v[h] can be nonzero,
                # so the admissible-extension bound is O(1).
                ub = depth + 1 + (sufcap[h] - v[h] - 1)
                if depth_cap >= 0 and ub > depth_cap:
                    ub = depth_cap
                if ub > best_len and (depth_cap < 0 or depth + 1 <= depth_cap):
                    src = tabs[depth]
                    dst = tabs[depth + 1]
                    dst[:] = src
                    for s in range(n):
                        x = src[s]
                        if x:
                            if mode == MODE_MOD:
                                x = ((x << 1) | (x >> (d - 1))) & mod_mask
                            elif mode == MODE_CAP:
                                x = ((x & cap_low) << 1) | (x & cap_top)
                            dst[add_flat[s * n + h]] |= x
                    dst[h] |= class1_bit
                    if not dst[0] & in_l_mask:
                        seq[depth] = h
                        v[h] += 1
                        depth += 1
                        nodes += 1
                        if depth > best_len:
                            best_len = depth
                            best_counts = v.copy()
                            if 0 <= depth_cap <= best_len:
                                return best_len, best_counts, nodes, STATUS_CAP_HIT
                        if 0 <= node_budget < nodes:
                            return best_len, best_counts, nodes, STATUS_NODE_LIMIT
                        if time_budget > 0 and nodes % 4096 == 0 and monotonic() - t0 > time_budget:
                            return best_len, best_counts, nodes, STATUS_TIME_LIMIT
                        c = h
                        pushed = True
                        break
            c += 1
        if pushed:
            continue
        if depth == 0:
            return best_len, best_counts, nodes, STATUS_EXHAUSTED
        depth -= 1
        h = seq[depth]
        v[h] -= 1
        c = h + 1
