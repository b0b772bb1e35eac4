"""Pure-Python reference kernels.

Same contract as the compiled extension `_core`; selected at import time by
`ekrlab._kernels` when the extension is unavailable (or forced via
EKRLAB_KERNELS=pure).  Everything here works on arbitrary-size Python ints,
so there is no 64-set universe limit.
"""

from __future__ import annotations

from array import array

from ..bitops import coord_zero_mask, popcount, size_class_masks

BACKEND_NAME = "pure"


def monotone_masks(n: int) -> array:
    """All increasing families on [n], each as a 2**n-bit mask, ascending.

    Built by splitting on the last element: an increasing family on [n] is a
    pair (f0, f1) of increasing families on [n-1] with f0 a subfamily of f1,
    packed as f0 | f1 << 2**(n-1).
    """
    if not 0 <= n <= 6:
        raise ValueError("monotone enumeration supported for 0 <= n <= 6")
    fams = [0, 1]
    for level in range(1, n + 1):
        shift = 1 << (level - 1)
        fams = [f0 | (f1 << shift) for f1 in fams for f0 in fams
                if f0 & ~f1 == 0]
    fams.sort()
    return array("Q", fams)


def weight_pivot_counts(fam: int, n: int) -> tuple[list[int], list[list[int]]]:
    """Per-size counts of a family and of each coordinate's pivotal set.

    Returns (w, piv) where w[j] counts members of size j and piv[i][j] counts
    cube points x of size j whose membership flips when coordinate i flips.
    """
    classes = size_class_masks(n)
    w = [popcount(fam & c) for c in classes]
    piv = []
    for i in range(n):
        d = 1 << i
        p0 = (fam ^ (fam >> d)) & coord_zero_mask(n, i)
        pmask = p0 | (p0 << d)
        piv.append([popcount(pmask & c) for c in classes])
    return w, piv


def weight_counts(fam: int, n: int) -> list[int]:
    if n <= 18:
        classes = size_class_masks(n)
        return [popcount(fam & c) for c in classes]
    # large ground sets: scan member positions instead of materializing
    # 2**n-bit class masks
    w = [0] * (n + 1)
    buf = fam.to_bytes(((1 << n) + 7) // 8, "little")
    for byte_idx, byte in enumerate(buf):
        while byte:
            low = byte & -byte
            x = byte_idx * 8 + low.bit_length() - 1
            w[popcount(x)] += 1
            byte ^= low
    return w


def _has_s_disjoint(cands: list[int], s: int) -> bool:
    """True iff `cands` contains s pairwise disjoint masks."""
    if s == 0:
        return True
    if len(cands) < s:
        return False

    def rec(start: int, used: int, need: int) -> bool:
        if need == 0:
            return True
        for idx in range(start, len(cands) - need + 1):
            m = cands[idx]
            if not m & used and rec(idx + 1, used | m, need - 1):
                return True
        return False

    return rec(0, 0, s)


def _include_ok(mode: str, param: int, masks, chosen: list[int], m: int) -> bool:
    if mode == "t":
        return all(popcount(m & masks[j]) >= param for j in chosen)
    if mode == "match":
        free = [masks[j] for j in chosen if not masks[j] & m]
        return not _has_s_disjoint(free, param)
    raise ValueError(f"unknown predicate mode {mode!r}")


def search_uniform(masks, preds_masks, mode: str, param: int, shifted: bool,
                   node_budget: int | None = None,
                   resume_path: list[int] | None = None,
                   resume_best: int = -1, resume_witness=(),
                   checkpoint_cb=None, checkpoint_every: int = 0):
    """Branch-and-bound maximum-size family under a hereditary predicate.

    Sets are decided in the given (lexicographic) order, include branch first,
    so the first optimum reached is the lexicographically least one and the
    result is deterministic.  The upper bound is current size + remaining
    undecided sets.  In shifted mode a set may be included only when all its
    compression images (preds_masks) are already included, restricting the
    search to compression-closed families.

    Returns (best_size, witness_index_tuple, stats_dict, complete, path)
    where path is the decision vector at exit (for checkpointing).
    """
    n_sets = len(masks)
    best = resume_best
    witness: tuple[int, ...] = tuple(resume_witness)
    nodes = 0
    bound_prunes = 0
    forced_exclusions = 0
    predicate_rejections = 0
    complete = True

    path: list[int] = []
    chosen: list[int] = []
    included = 0

    def can_include(i: int) -> tuple[bool, str]:
        if shifted and preds_masks[i] & ~included:
            return False, "forced"
        if not _include_ok(mode, param, masks, chosen, masks[i]):
            return False, "predicate"
        return True, ""

    if resume_path:
        for i, d in enumerate(resume_path):
            path.append(d)
            if d:
                chosen.append(i)
                included |= 1 << i

    while True:
        i = len(path)
        at_leaf = i == n_sets
        subtree_dead = False
        if not at_leaf:
            if len(chosen) + (n_sets - i) <= best:
                bound_prunes += 1
                subtree_dead = True
        if at_leaf or subtree_dead:
            if at_leaf:
                nodes += 1
                if len(chosen) > best:
                    best = len(chosen)
                    witness = tuple(chosen)
            # backtrack to the deepest include decision and flip it
            while path and path[-1] == 0:
                path.pop()
            if not path:
                break
            j = len(path) - 1
            path[j] = 0
            chosen.pop()
            included &= ~(1 << j)
            continue
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            complete = False
            break
        ok, why = can_include(i)
        if ok:
            path.append(1)
            chosen.append(i)
            included |= 1 << i
        else:
            if why == "forced":
                forced_exclusions += 1
            else:
                predicate_rejections += 1
            path.append(0)
        if checkpoint_cb is not None and checkpoint_every and nodes % checkpoint_every == 0:
            checkpoint_cb(list(path), best, list(witness), nodes)

    stats = {
        "nodes": nodes,
        "bound_prunes": bound_prunes,
        "forced_exclusions": forced_exclusions,
        "predicate_rejections": predicate_rejections,
    }
    return best, witness, stats, complete, path


def iter_predicate_families(masks, preds_masks, mode: str, param: int,
                            shifted: bool, node_budget: int | None = None):
    """Yield every family (tuple of set indices) satisfying the predicate.

    Shifted mode restricts to compression-closed families.  Used by the
    conjecture scanners; exhaustive, depth-first, include branch first.
    """
    n_sets = len(masks)
    chosen: list[int] = []
    included = 0
    nodes = 0

    def rec(i: int):
        nonlocal included, nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise BudgetExceeded(nodes)
        if i == n_sets:
            yield tuple(chosen)
            return
        ok = not (shifted and preds_masks[i] & ~included)
        if ok and _include_ok(mode, param, masks, chosen, masks[i]):
            chosen.append(i)
            included |= 1 << i
            yield from rec(i + 1)
            chosen.pop()
            included &= ~(1 << i)
        yield from rec(i + 1)

    yield from rec(0)


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"search budget exceeded after {nodes} nodes")
        self.nodes = nodes
