# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: monotone-family enumeration, weight/pivot counting,
and branch-and-bound uniform search.  Mirrors `_pure` exactly (same traversal
order, same statistics).  Limits: the search kernel handles at most 64 sets
and no resume/checkpoint; the counting kernels handle n <= 22.  The driver
falls back to the pure kernel outside those limits.
"""

from libc.stdint cimport uint8_t, uint64_t, int64_t
from libc.stdlib cimport malloc, realloc, free

from array import array

BACKEND_NAME = "compiled"

MAX_COUNT_N = 22


def monotone_masks(int n):
    """All increasing families on [n] as 2**n-bit masks, ascending."""
    if n < 0 or n > 6:
        raise ValueError("monotone enumeration supported for 0 <= n <= 6")
    cdef uint64_t *cur = <uint64_t *> malloc(2 * sizeof(uint64_t))
    if cur == NULL:
        raise MemoryError()
    cur[0] = 0
    cur[1] = 1
    cdef Py_ssize_t count = 2, cap = 2, out_count
    cdef uint64_t *nxt = NULL
    cdef Py_ssize_t i, j
    cdef int level, shift
    cdef uint64_t f0, f1
    for level in range(1, n + 1):
        cap = count * 4
        nxt = <uint64_t *> malloc(cap * sizeof(uint64_t))
        if nxt == NULL:
            free(cur)
            raise MemoryError()
        shift = 1 << (level - 1)
        out_count = 0
        for i in range(count):
            f1 = cur[i]
            for j in range(count):
                f0 = cur[j]
                if f0 & ~f1 == 0:
                    if out_count == cap:
                        cap *= 2
                        nxt = <uint64_t *> realloc(nxt, cap * sizeof(uint64_t))
                        if nxt == NULL:
                            free(cur)
                            raise MemoryError()
                    nxt[out_count] = f0 | (f1 << shift)
                    out_count += 1
        free(cur)
        cur = nxt
        count = out_count
    _sort_u64(cur, count)
    try:
        raw = (<const char *> cur)[:count * 8]
    finally:
        free(cur)
    result = array("Q")
    result.frombytes(raw)
    return result


cdef int _sort_u64(uint64_t *a, Py_ssize_t n) except -1:
    # LSD radix sort on 16-bit digits
    cdef uint64_t *tmp = <uint64_t *> malloc(n * sizeof(uint64_t))
    cdef Py_ssize_t *counts = <Py_ssize_t *> malloc(65536 * sizeof(Py_ssize_t))
    if tmp == NULL or counts == NULL:
        free(tmp)
        free(counts)
        raise MemoryError()
    cdef Py_ssize_t i, pos, c
    cdef int d, shift
    cdef uint64_t key
    for d in range(4):
        shift = 16 * d
        for i in range(65536):
            counts[i] = 0
        for i in range(n):
            counts[(a[i] >> shift) & 0xFFFF] += 1
        pos = 0
        for i in range(65536):
            c = counts[i]
            counts[i] = pos
            pos += c
        for i in range(n):
            key = (a[i] >> shift) & 0xFFFF
            tmp[counts[key]] = a[i]
            counts[key] += 1
        for i in range(n):
            a[i] = tmp[i]
    free(tmp)
    free(counts)
    return 0


def weight_pivot_counts(fam, int n):
    """Per-size member counts and per-coordinate pivotal-point counts."""
    if n > MAX_COUNT_N:
        raise ValueError("compiled counting kernel supports n <= 22")
    cdef int size = 1 << n
    buf = int(fam).to_bytes((size + 7) // 8, "little")
    cdef const char *raw = buf
    cdef const uint8_t *b = <const uint8_t *> raw
    cdef uint8_t *pc = <uint8_t *> malloc(size)
    if pc == NULL:
        raise MemoryError()
    cdef int x, i, d, y
    pc[0] = 0
    for x in range(1, size):
        pc[x] = pc[x >> 1] + (x & 1)
    cdef int64_t w[32]
    cdef int64_t piv[31][32]
    for i in range(n + 1):
        w[i] = 0
    for x in range(size):
        if (b[x >> 3] >> (x & 7)) & 1:
            w[pc[x]] += 1
    for i in range(n):
        for x in range(n + 1):
            piv[i][x] = 0
        d = 1 << i
        for x in range(size):
            if x & d:
                continue
            y = x | d
            if ((b[x >> 3] >> (x & 7)) ^ (b[y >> 3] >> (y & 7))) & 1:
                piv[i][pc[x]] += 1
                piv[i][pc[y]] += 1
    free(pc)
    w_out = [w[i] for i in range(n + 1)]
    piv_out = [[piv[i][j] for j in range(n + 1)] for i in range(n)]
    return w_out, piv_out


def weight_counts(fam, int n):
    """Per-size member counts of a family mask."""
    if n > MAX_COUNT_N:
        raise ValueError("compiled counting kernel supports n <= 22")
    cdef int size = 1 << n
    buf = int(fam).to_bytes((size + 7) // 8, "little")
    cdef const char *raw = buf
    cdef const uint8_t *b = <const uint8_t *> raw
    cdef int64_t w[32]
    cdef int x, pcx, t
    for x in range(n + 1):
        w[x] = 0
    for x in range(size):
        if (b[x >> 3] >> (x & 7)) & 1:
            t = x
            pcx = 0
            while t:
                t &= t - 1
                pcx += 1
            w[pcx] += 1
    return [w[x] for x in range(n + 1)]


cdef int _popcount64(uint64_t x):
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cdef bint _has_s_disjoint(uint64_t *cands, int ncands, int s):
    """True iff `cands` contains s pairwise disjoint masks."""
    if s == 0:
        return True
    if ncands < s:
        return False
    cdef int stack_idx[70]
    cdef uint64_t stack_used[70]
    cdef int depth = 0, start = 0, idx, limit
    cdef uint64_t used = 0
    cdef bint found
    while True:
        limit = ncands - (s - depth)
        found = False
        idx = start
        while idx <= limit:
            if not (cands[idx] & used):
                found = True
                break
            idx += 1
        if found:
            stack_idx[depth] = idx
            stack_used[depth] = used
            used |= cands[idx]
            depth += 1
            if depth == s:
                return True
            start = idx + 1
        else:
            if depth == 0:
                return False
            depth -= 1
            used = stack_used[depth]
            start = stack_idx[depth] + 1


def search_uniform(masks, preds_masks, str mode, int param, bint shifted,
                   node_budget=None, resume_path=None, checkpoint_cb=None,
                   int checkpoint_every=0):
    """Branch-and-bound max family; see the pure kernel for the contract."""
    cdef int n_sets = len(masks)
    if n_sets > 64:
        raise ValueError("compiled search kernel supports at most 64 sets")
    if resume_path or checkpoint_cb is not None:
        raise ValueError("compiled search kernel does not checkpoint/resume")
    cdef uint64_t cmasks[64]
    cdef uint64_t cpreds[64]
    cdef int i
    for i in range(n_sets):
        cmasks[i] = masks[i]
        cpreds[i] = preds_masks[i] if shifted else 0
    cdef int mode_t
    if mode == "t":
        mode_t = 1
    elif mode == "match":
        mode_t = 2
    else:
        raise ValueError(f"unknown predicate mode {mode!r}")

    cdef int64_t budget = -1
    if node_budget is not None:
        budget = node_budget

    cdef int best = -1
    cdef uint64_t witness = 0
    cdef int64_t nodes = 0, bound_prunes = 0
    cdef int64_t forced_exclusions = 0, predicate_rejections = 0
    cdef bint complete = True

    cdef uint8_t path[65]
    cdef int chosen[64]
    cdef int n_chosen = 0, depth = 0
    cdef uint64_t included = 0
    cdef uint64_t cands[64]
    cdef int ncands, j
    cdef bint ok
    cdef uint64_t m

    while True:
        i = depth
        if i == n_sets:
            nodes += 1
            if n_chosen > best:
                best = n_chosen
                witness = included
        elif n_chosen + (n_sets - i) <= best:
            bound_prunes += 1
        else:
            nodes += 1
            if budget >= 0 and nodes > budget:
                complete = False
                break
            m = cmasks[i]
            ok = True
            if shifted and (cpreds[i] & ~included):
                ok = False
                forced_exclusions += 1
            elif mode_t == 1:
                for j in range(n_chosen):
                    if _popcount64(m & cmasks[chosen[j]]) < param:
                        ok = False
                        predicate_rejections += 1
                        break
            else:
                ncands = 0
                for j in range(n_chosen):
                    if not (cmasks[chosen[j]] & m):
                        cands[ncands] = cmasks[chosen[j]]
                        ncands += 1
                if _has_s_disjoint(cands, ncands, param):
                    ok = False
                    predicate_rejections += 1
            if ok:
                path[depth] = 1
                chosen[n_chosen] = i
                n_chosen += 1
                included |= (<uint64_t> 1) << i
            else:
                path[depth] = 0
            depth += 1
            continue
        # backtrack: flip the deepest include decision to exclude
        while depth > 0 and path[depth - 1] == 0:
            depth -= 1
        if depth == 0:
            break
        depth -= 1
        path[depth] = 0
        n_chosen -= 1
        included &= ~((<uint64_t> 1) << depth)
        depth += 1

    wit = tuple(b for b in range(n_sets) if (witness >> b) & 1)
    stats = {
        "nodes": nodes,
        "bound_prunes": bound_prunes,
        "forced_exclusions": forced_exclusions,
        "predicate_rejections": predicate_rejections,
    }
    return best, wit, stats, complete, []
