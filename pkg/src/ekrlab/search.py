"""Exhaustive and compression-pruned searches for extremal families, plus
the monotone-family enumerator that drives sweep verifications.

The branch-and-bound decides sets in lex order (include branch first,
strict-improvement incumbent), so results and witnesses are deterministic.
Shifted mode explores only compression-closed families: a set may enter only
when every image under an (i,j)-shift with i<j is already in.  The
predicates used here (t-intersecting, matching bounded) are preserved by
shifts, so the shifted optimum equals the global one; certificates are
re-verified independently on emission.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import _kernels
from .bitops import elements_of, mask_of, popcount
from .families import SetFamily, UniformFamily, is_t_intersecting, matching_number
from .measures import mu

# -- monotone enumeration ------------------------------------------------------

#: increasing-family counts (Dedekind numbers) for the supported range
MONOTONE_COUNTS = (2, 3, 6, 20, 168, 7581, 7828354)


def enumerate_monotone_masks(n: int):
    """All increasing families on [n] as 2**n-bit masks, ascending order."""
    return _kernels.monotone_masks(n)


def enumerate_monotone(n: int):
    """All increasing families on [n] as SetFamily objects (ascending)."""
    for bits in enumerate_monotone_masks(n):
        yield SetFamily(n, int(bits))


def monotone_count_oracle(n: int) -> int:
    """Count increasing families independently of the enumerator.

    For n <= 4 this filters every subset of the cube directly; for n = 5, 6
    it counts nested pairs over the (brute-verifiable) previous level.
    """
    if not 0 <= n <= 6:
        raise ValueError("oracle supports 0 <= n <= 6")
    if n <= 4:
        size = 1 << n
        count = 0
        for f in range(1 << size):
            ok = True
            for x in range(size):
                if (f >> x) & 1:
                    for i in range(n):
                        if not (f >> (x | (1 << i))) & 1:
                            ok = False
                            break
                    if not ok:
                        break
            count += ok
        return count
    prev = [int(v) for v in enumerate_monotone_masks(n - 1)]
    return sum(1 for f1 in prev for f0 in prev if f0 & ~f1 == 0)


# -- uniform search -------------------------------------------------------------

PREDICATES = {
    # name -> (kernel mode, hereditary)
    "intersecting": ("t", True),
    "t-intersecting": ("t", True),
    "matching_at_most": ("match", True),
}


@dataclass(frozen=True)
class SearchProblem:
    """A search instance: ground, hereditary predicate, objective, budget."""

    n: int
    k: int | None = None                  # None = full cube ground
    predicate: str = "intersecting"
    t: int = 1                            # t for intersecting, s for matching
    objective: str = "cardinality"        # or "mu" (cube ground only)
    p: Fraction | None = None
    budget: int | None = None
    shifted: bool = False

    def __post_init__(self):
        if self.predicate not in PREDICATES and self.predicate != "measure_cap":
            raise ValueError(f"unknown predicate {self.predicate!r}")
        if self.predicate in PREDICATES and not PREDICATES[self.predicate][1]:
            raise AssertionError("branch-and-bound needs a hereditary predicate")


@dataclass
class SearchCertificate:
    optimum: object
    witness: object                      # UniformFamily or SetFamily
    nodes: int
    stats: dict = field(default_factory=dict)
    complete: bool = True
    shifted: bool = False
    reverified: bool = False

    def to_dict(self) -> dict:
        wit = self.witness
        members = [list(t) for t in wit.member_sets()] if wit is not None else None
        return {
            "optimum": (str(self.optimum)
                        if isinstance(self.optimum, Fraction) else self.optimum),
            "witness": members,
            "nodes": self.nodes,
            "stats": dict(sorted(self.stats.items())),
            "complete": self.complete,
            "shifted": self.shifted,
            "reverified": self.reverified,
        }


def lex_universe(n: int, k: int) -> list[int]:
    """k-subsets of [n] as masks, in lex order on element tuples."""
    return [mask_of(c) for c in itertools.combinations(range(1, n + 1), k)]


def shift_predecessor_masks(n: int, k: int, universe: list[int]) -> list[int]:
    """For each set, the index-mask of its immediate (i,j)-shift images
    (replace an element j by some absent i < j); all have smaller lex rank."""
    index_of = {m: i for i, m in enumerate(universe)}
    preds = []
    for m in universe:
        elems = elements_of(m)
        pm = 0
        for b in elems:
            for a in range(1, b):
                if not (m >> (a - 1)) & 1:
                    img = (m & ~(1 << (b - 1))) | (1 << (a - 1))
                    pm |= 1 << index_of[img]
        preds.append(pm)
    return preds


def _predicate_mode(predicate: str, t: int) -> tuple[str, int]:
    mode, _ = PREDICATES[predicate]
    if predicate == "intersecting":
        return mode, 1
    if predicate == "matching_at_most":
        # adding a set must not create t+1 pairwise disjoint members
        return mode, t
    return mode, t


def _reverify(witness: UniformFamily, predicate: str, t: int) -> bool:
    if predicate == "intersecting":
        return is_t_intersecting(witness, 1) if len(witness) else True
    if predicate == "t-intersecting":
        return is_t_intersecting(witness, t) if len(witness) else True
    if predicate == "matching_at_most":
        return matching_number(witness) <= t
    raise ValueError(predicate)


def max_uniform(problem: SearchProblem, checkpoint_path=None,
                checkpoint_every: int = 100_000,
                resume: bool = False) -> SearchCertificate:
    """Exact maximum-size family in [n]^(k) under the problem's predicate.

    Shifted mode restricts to compression-closed families (same optimum,
    vastly fewer nodes); on budget exhaustion the best-so-far comes back
    with complete=False.  Checkpoints (decision prefix + incumbent) go to
    checkpoint_path as JSON when requested; resume continues from one.
    """
    if problem.k is None:
        raise ValueError("max_uniform needs a k-uniform ground")
    if not 0 <= problem.k <= problem.n:
        raise ValueError(f"need 0 <= k <= n, got k={problem.k}, n={problem.n}")
    if problem.objective not in ("cardinality", "mu"):
        raise ValueError("objective must be cardinality or mu")
    n, k = problem.n, problem.k
    universe = lex_universe(n, k)
    preds = (shift_predecessor_masks(n, k, universe)
             if problem.shifted else [0] * len(universe))
    mode, param = _predicate_mode(problem.predicate, problem.t)

    cb = None
    resume_path = None
    resume_best, resume_witness = -1, ()
    if checkpoint_path is not None:
        cp = Path(checkpoint_path)
        if resume and cp.exists():
            state = json.loads(cp.read_text())
            resume_path = state["path"]
            resume_best = state["best"]
            resume_witness = tuple(state["witness"])

        def cb(path, best, witness, nodes):
            cp.write_text(json.dumps({"path": path, "best": best,
                                      "witness": witness, "nodes": nodes}))

    best, wit_idx, stats, complete, _ = _kernels.search_uniform(
        universe, preds, mode, param, problem.shifted,
        node_budget=problem.budget, resume_path=resume_path,
        resume_best=resume_best, resume_witness=resume_witness,
        checkpoint_cb=cb, checkpoint_every=checkpoint_every if cb else 0)

    witness = UniformFamily(n, k, (universe[i] for i in wit_idx))
    ok = _reverify(witness, problem.predicate, problem.t)
    if not ok:
        raise AssertionError("witness failed independent predicate re-verification")
    optimum = best
    if problem.objective == "mu":
        # all members share size k, so mu is proportional to cardinality
        p = Fraction(problem.p)
        optimum = best * p**k * (1 - p) ** (n - k)
    return SearchCertificate(optimum, witness, stats["nodes"], stats,
                             complete, problem.shifted, ok)


def iter_uniform_families(n: int, k: int, predicate: str, t: int = 1,
                          shifted: bool = True, budget: int | None = None):
    """Yield every family of [n]^(k) satisfying the predicate, as
    UniformFamily (compression-closed ones only, in shifted mode)."""
    universe = lex_universe(n, k)
    preds = (shift_predecessor_masks(n, k, universe)
             if shifted else [0] * len(universe))
    mode, param = _predicate_mode(predicate, t)
    for idx in _kernels.iter_predicate_families(universe, preds, mode, param,
                                                shifted, node_budget=budget):
        yield UniformFamily(n, k, (universe[i] for i in idx))


def extremal_under_measure_cap(n: int, p0, t: int, p,
                               exclude_umvirate_distance=None,
                               budget: int | None = None) -> SearchCertificate:
    """Maximize mu_p over increasing families with mu_{p0} <= p0**t.

    Full monotone enumeration (n <= 5).  When exclude_umvirate_distance is
    given, families whose distance to the nearest t-umvirate (min over B of
    mu_p of the symmetric difference with S_B) is <= the threshold are
    excluded, exposing the second layer of extremal structure.
    """
    if n > 5:
        raise ValueError("full monotone enumeration is capped at n = 5")
    p0, p = Fraction(p0), Fraction(p)
    cap = p0**t

    def umvirate_distance(fam: SetFamily) -> Fraction:
        # min over t-element B of mu_p(F symmetric-difference S_B)
        mu_f = mu(fam, p)
        best_d = None
        for combo in itertools.combinations(range(1, n + 1), t):
            bm = mask_of(combo)
            inter = sum((p ** popcount(m) * (1 - p) ** (n - popcount(m))
                         for m in fam if m & bm == bm), Fraction(0))
            d = mu_f + p**t - 2 * inter
            if best_d is None or d < best_d:
                best_d = d
        return best_d

    best: Fraction | None = None
    best_fam: SetFamily | None = None
    examined = 0
    for fam in enumerate_monotone(n):
        examined += 1
        if budget is not None and examined > budget:
            return SearchCertificate(best, best_fam, examined, {}, False)
        if mu(fam, p0) > cap:
            continue
        if exclude_umvirate_distance is not None:
            if umvirate_distance(fam) <= Fraction(exclude_umvirate_distance):
                continue
        val = mu(fam, p)
        if best is None or val > best:
            best, best_fam = val, fam
    cert = SearchCertificate(best, best_fam, examined,
                             {"families_examined": examined}, True)
    if best_fam is not None:
        cert.reverified = (best_fam.is_increasing()
                           and mu(best_fam, p0) <= cap
                           and mu(best_fam, p) == best)
    return cert
