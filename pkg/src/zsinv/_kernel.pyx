# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled DFS core: canonical multiset enumeration with reach-table pruning.

Hot loop of the whole package; see `zsinv._kernel_py` for the commented
reference implementation with identical semantics.  Length-class bitmasks are
one machine word here, so the caller must guarantee width <= 64.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memcpy
from libc.time cimport clock, CLOCKS_PER_SEC

ctypedef unsigned long long u64

DEF MODE_ALL = 0
DEF MODE_MOD = 1
DEF MODE_CAP = 2


def run(add_flat, int n, int mode, int width, unsigned long long in_l_mask,
        unsigned long long class1_bit, mult_cap, int first_elem, int depth_cap,
        long long node_budget, double time_budget, int max_depth):
    cdef int i, s, h, depth, c, limit, root_limit
    cdef long long nodes = 1
    cdef long long ub
    cdef int best_len = 0
    cdef int d = width
    cdef u64 mod_mask = <u64>0xFFFFFFFFFFFFFFFF if d >= 64 else ((<u64>1 << d) - 1)
    cdef u64 cap_top = <u64>1 << (width - 1)
    cdef u64 cap_low = cap_top - 1
    cdef u64 x, row0
    cdef double t0 = <double>clock() / CLOCKS_PER_SEC
    cdef bint pushed

    cdef int *add = <int *>calloc(n * n, sizeof(int))
    cdef long long *cap = <long long *>calloc(n, sizeof(long long))
    cdef long long *sufcap = <long long *>calloc(n + 1, sizeof(long long))
    cdef long long *v = <long long *>calloc(n, sizeof(long long))
    cdef int *seq = <int *>calloc(max_depth + 2, sizeof(int))
    cdef u64 *tabs = <u64 *>calloc((<size_t>max_depth + 2) * n, sizeof(u64))
    cdef u64 *src
    cdef u64 *dst
    if add == NULL or cap == NULL or sufcap == NULL or v == NULL or seq == NULL or tabs == NULL:
        free(add); free(cap); free(sufcap); free(v); free(seq); free(tabs)
        raise MemoryError()

    best_counts = [0] * n
    try:
        for i in range(n * n):
            add[i] = add_flat[i]
        for i in range(n):
            cap[i] = mult_cap[i]
        sufcap[n] = 0
        for i in range(n - 1, -1, -1):
            sufcap[i] = sufcap[i + 1] + cap[i]

        depth = 0
        c = first_elem if first_elem >= 0 else 0
        root_limit = first_elem + 1 if first_elem >= 0 else n

        while True:
            limit = root_limit if depth == 0 else n
            pushed = False
            while c < limit:
                h = c
                if v[h] < cap[h]:
                    ub = depth + 1 + (sufcap[h] - v[h] - 1)
                    if depth_cap >= 0 and ub > depth_cap:
                        ub = depth_cap
                    if ub > best_len and (depth_cap < 0 or depth + 1 <= depth_cap):
                        src = tabs + (<size_t>depth) * n
                        dst = tabs + (<size_t>depth + 1) * n
                        memcpy(dst, src, n * sizeof(u64))
                        if mode == MODE_MOD:
                            for s in range(n):
                                x = src[s]
                                if x:
                                    x = ((x << 1) | (x >> (d - 1))) & mod_mask
                                    dst[add[s * n + h]] |= x
                        elif mode == MODE_CAP:
                            for s in range(n):
                                x = src[s]
                                if x:
                                    x = ((x & cap_low) << 1) | (x & cap_top)
                                    dst[add[s * n + h]] |= x
                        else:
                            for s in range(n):
                                x = src[s]
                                if x:
                                    dst[add[s * n + h]] |= x
                        dst[h] |= class1_bit
                        if not (dst[0] & in_l_mask):
                            seq[depth] = h
                            v[h] += 1
                            depth += 1
                            nodes += 1
                            if depth > best_len:
                                best_len = depth
                                for i in range(n):
                                    best_counts[i] = v[i]
                                if 0 <= depth_cap <= best_len:
                                    return best_len, best_counts, nodes, 1
                            if 0 <= node_budget < nodes:
                                return best_len, best_counts, nodes, 2
                            if time_budget > 0 and (nodes & 8191) == 0:
                                if <double>clock() / CLOCKS_PER_SEC - t0 > time_budget:
                                    return best_len, best_counts, nodes, 3
                            c = h
                            pushed = True
                            break
                c += 1
            if pushed:
                continue
            if depth == 0:
                return best_len, best_counts, nodes, 0
            depth -= 1
            h = seq[depth]
            v[h] -= 1
            c = h + 1
    finally:
        free(add)
        free(cap)
        free(sufcap)
        free(v)
        free(seq)
        free(tabs)
