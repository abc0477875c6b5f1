"""Counterexample search for sums of t non-empty cross-q-intersecting families.

The search never claims a conjecture is proved: an outcome is either
``consistent`` (nothing beat the conjectured bound within budget), a verified
``COUNTEREXAMPLE``, or ``budget_exhausted``.
"""
from __future__ import annotations

import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from .bounds import problem_bound, validate_problem
from .combinatorics import binomial, format_rational, ksets_masks
from .errors import ParameterError
from .families import Family, _partner_keep, is_cross_q_intersecting, q_meeting, up_set

CONSISTENT = "consistent"
COUNTEREXAMPLE = "COUNTEREXAMPLE"
BUDGET_EXHAUSTED = "budget_exhausted"

MAX_CANDIDATES = int(os.environ.get("CROSSINT_MAX_CANDIDATES", str(1 << 22)))
RAW_TUPLE_LIMIT = 1 << 16


@dataclass(frozen=True)
class ProblemInstance:
    problem_id: int
    n: int
    sizes: tuple[int, ...]
    q: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        validate_problem(self.problem_id, self.n, self.sizes, self.q)

    @property
    def t(self) -> int:
        return len(self.sizes)

    def conjectured(self) -> Fraction:
        return problem_bound(self.problem_id, self.n, self.sizes, self.q).max_value

    def as_record(self) -> dict:
        return {"problem": self.problem_id, "n": self.n, "t": self.t,
                "sizes": list(self.sizes), "q": self.q}


@dataclass
class SearchOutcome:
    instance: ProblemInstance
    conjectured: Fraction
    best_found: Fraction
    witness: list[Family]
    status: str
    method: str = ""
    compressed: bool = False
    candidates: int = 0
    budget: int = 0
    seed: Optional[int] = None
    wall_time: float = 0.0
    notes: list[str] = field(default_factory=list)

    def to_record(self, timing: bool = True) -> dict:
        from .io import format_family
        rec = {
            "instance": self.instance.as_record(),
            "conjectured": format_rational(self.conjectured),
            "best_found": format_rational(self.best_found),
            "status": self.status,
            "method": self.method,
            "compressed": self.compressed,
            "candidates": self.candidates,
            "budget": self.budget,
            "rng_seed": self.seed,
            "witness": [format_family(f) for f in self.witness],
            "notes": self.notes,
        }
        if timing:
            rec["wall_time"] = round(self.wall_time, 6)
        return rec


def validate_tuple(fams: Sequence[Family], q: int) -> bool:
    """Non-empty and pairwise cross-q-intersecting."""
    if any(len(f) == 0 for f in fams):
        return False
    return all(is_cross_q_intersecting(fams[i], fams[j], q)
               for i in range(len(fams)) for j in range(i + 1, len(fams)))


def _conflict_bits(src: Sequence[int], dst: Sequence[int], q: int) -> list[int]:
    """For each source set, the bitmap of destination ranks sharing < q elements."""
    out = []
    for a in src:
        bits = 0
        for j, b in enumerate(dst):
            if (a & b).bit_count() < q:
                bits |= 1 << j
        out.append(bits)
    return out


def _outcome(inst, best, witness, method, compressed, candidates, budget, start,
             seed=None, notes=None) -> SearchOutcome:
    conj = inst.conjectured()
    best = Fraction(best)
    if best > conj and validate_tuple(witness, inst.q):
        status = COUNTEREXAMPLE
    else:
        status = CONSISTENT
    return SearchOutcome(inst, conj, best, witness, status, method, compressed, candidates,
                         budget, seed, time.perf_counter() - start, list(notes or []))


# --- exhaustive engines ----------------------------------------------------

def _raw_pair(inst: ProblemInstance, budget: int):
    """t = 2: every non-empty first family, the second completed maximally."""
    n, q = inst.n, inst.q
    # enumerate on the smaller universe
    order = sorted(range(2), key=lambda i: binomial(n, inst.sizes[i]))
    src_k, dst_k = inst.sizes[order[0]], inst.sizes[order[1]]
    src, dst = ksets_masks(n, src_k), ksets_masks(n, dst_k)
    conf = _conflict_bits(dst, src, q)   # dst set j kills src families touching conf[j]
    total = 1 << len(src)
    best, best_mask = -1, 0
    for lo in range(1, total, 1 << 18):
        masks = np.arange(lo, min(lo + (1 << 18), total), dtype=np.uint64)
        partner = np.zeros(len(masks), dtype=np.int64)
        for c in conf:
            partner += (masks & np.uint64(c)) == 0
        vals = np.where(partner > 0, partner + np.bitwise_count(masks).astype(np.int64), -1)
        i = int(vals.argmax())
        if vals[i] > best:
            best, best_mask = int(vals[i]), int(masks[i])
    first = Family.from_rank_bits(n, src_k, best_mask)
    second = Family.from_masks(n, dst_k, (b for b, c in zip(dst, conf) if not best_mask & c))
    pair = [first, second] if order[0] == 0 else [second, first]
    return best, pair, total - 1


def _matching_pair(inst: ProblemInstance):
    """t = 2: maximum independent set of the bipartite conflict graph with one
    vertex forced on each side, via max matching (Konig). The first forced
    vertex is fixed to [k_1], which loses nothing by symmetry."""
    n, q = inst.n, inst.q
    k1, k2 = inst.sizes
    left, right = ksets_masks(n, k1), ksets_masks(n, k2)
    a0 = left[0]
    best, best_pair, examined = -1, None, 0
    for b0 in right:
        if (a0 & b0).bit_count() < q:
            continue
        examined += 1
        lv = [a for a in left if (a & b0).bit_count() >= q]
        rv = [b for b in right if (a0 & b).bit_count() >= q]
        g = nx.Graph()
        g.add_nodes_from(("L", a) for a in lv)
        g.add_nodes_from(("R", b) for b in rv)
        g.add_edges_from((("L", a), ("R", b)) for a in lv for b in rv
                         if (a & b).bit_count() < q)
        top = {("L", a) for a in lv}
        matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)
        cover = nx.bipartite.to_vertex_cover(g, matching, top_nodes=top)
        indep = set(g.nodes) - cover
        value = len(indep)
        if value > best:
            fa = Family.from_masks(n, k1, (m for side, m in indep if side == "L"))
            fb = Family.from_masks(n, k2, (m for side, m in indep if side == "R"))
            best, best_pair = value, [fa, fb]
    return best, best_pair, examined


def _raw_tuple(inst: ProblemInstance):
    """Any t: raw enumeration of the first t-1 families, last completed maximally."""
    n, q = inst.n, inst.q
    t = inst.t
    # complete the largest universe; enumerate the rest
    perm = sorted(range(t), key=lambda i: binomial(n, inst.sizes[i]))
    sizes = [inst.sizes[i] for i in perm]
    unis = [ksets_masks(n, k) for k in sizes]
    conf = {(i, j): _conflict_bits(unis[i], unis[j], q)
            for i in range(t) for j in range(t) if i != j}
    best, best_tuple, count = -1, None, 0

    def kills(i, fam_bits, j):
        bad = 0
        for r, c in enumerate(conf[(i, j)]):
            if fam_bits >> r & 1:
                bad |= c
        return bad

    def rec(chosen, forbidden):
        nonlocal best, best_tuple, count
        i = len(chosen)
        if i == t - 1:
            count += 1
            last = ((1 << len(unis[i])) - 1) & ~forbidden[i]
            if last:
                val = sum(f.bit_count() for f in chosen) + last.bit_count()
                if val > best:
                    best, best_tuple = val, chosen + [last]
            return
        for fam in range(1, 1 << len(unis[i])):
            if fam & forbidden[i]:
                continue
            new_forb = list(forbidden)
            for j in range(i + 1, t):
                new_forb[j] |= kills(i, fam, j)
            rec(chosen + [fam], new_forb)

    rec([], [0] * t)
    fams = []
    if best_tuple:
        found = {perm[i]: Family.from_rank_bits(n, k, bits)
                 for i, (k, bits) in enumerate(zip(sizes, best_tuple))}
        fams = [found[i] for i in range(t)]
    return best, fams, count


def _compressed_tuple(inst: ProblemInstance):
    """q = 1: lex-initial families of every size for the first t-1, last completed
    maximally. Compression keeps every pair cross-intersecting, whatever the sizes."""
    n, sizes = inst.n, inst.sizes
    t = len(sizes)
    unis = [ksets_masks(n, k) for k in sizes]
    best, best_tuple, count = -1, None, 0
    for ms in product(*(range(1, len(u) + 1) for u in unis[:-1])):
        prefix = [u[:m] for u, m in zip(unis, ms)]
        ok = all(a & b for i in range(t - 1) for j in range(i + 1, t - 1)
                 for a in prefix[i] for b in prefix[j])
        count += 1
        if not ok:
            continue
        members = sorted({m for fam in prefix for m in fam})
        keep = _partner_keep(n, unis[-1], members, 1)
        last = [m for m, k in zip(unis[-1], keep) if k]
        if not last:
            continue
        val = sum(ms) + len(last)
        if val > best:
            best, best_tuple = val, prefix + [last]
    fams = [Family.from_masks(n, k, fam) for k, fam in zip(sizes, best_tuple)] \
        if best_tuple else []
    return best, fams, count


def exhaustive_search(inst: ProblemInstance, method: str = "auto",
                      budget: Optional[int] = None) -> SearchOutcome:
    """Exact maximum of the sum, by the cheapest method that is complete here."""
    start = time.perf_counter()
    limit = MAX_CANDIDATES if budget is None else budget
    n, t = inst.n, inst.t
    raw_cost = 1
    for k in sorted(inst.sizes, key=lambda k: binomial(n, k))[:t - 1]:
        raw_cost *= (1 << binomial(n, k))
    if t > 2:
        # pure-Python recursion; keep it small
        limit = min(limit, RAW_TUPLE_LIMIT)
    if method == "auto":
        if raw_cost <= limit:
            method = "raw"
        elif t == 2:
            method = "matching"
        elif inst.q == 1:
            method = "compressed"
        else:
            return SearchOutcome(inst, inst.conjectured(), Fraction(0), [], BUDGET_EXHAUSTED,
                                 "none", False, 0, limit, None,
                                 time.perf_counter() - start,
                                 [f"raw enumeration needs {raw_cost} candidates"])
    if method == "raw":
        if raw_cost > limit:
            return SearchOutcome(inst, inst.conjectured(), Fraction(0), [], BUDGET_EXHAUSTED,
                                 "raw", False, 0, limit, None, time.perf_counter() - start,
                                 [f"raw enumeration needs {raw_cost} candidates"])
        best, fams, count = _raw_pair(inst, limit) if t == 2 else _raw_tuple(inst)
        compressed = False
    elif method == "matching":
        if t != 2:
            raise ParameterError("matching search needs t = 2")
        best, fams, count = _matching_pair(inst)
        compressed = False
    elif method == "compressed":
        if inst.q != 1:
            raise ParameterError("compression is only known to be safe for q = 1")
        best, fams, count = _compressed_tuple(inst)
        compressed = True
    else:
        raise ParameterError(f"unknown method {method!r}")
    if fams and not validate_tuple(fams, inst.q):
        raise AssertionError("search produced an invalid witness")
    return _outcome(inst, best, fams, method, compressed, count, limit, start)


# --- alternating maximisation ---------------------------------------------

def _maximal_completion(n: int, k: int, others: Sequence[Sequence[int]], q: int) -> list[int]:
    members = sorted({m for fam in others for m in fam})
    cands = ksets_masks(n, k)
    keep = _partner_keep(n, cands, members, q)
    return [c for c, ok in zip(cands, keep) if ok]


def _climb(inst: ProblemInstance, fams: list[list[int]], max_rounds: int = 100):
    """Replace each family by the largest family q-intersecting all others until
    nothing changes. Returns None if some family empties."""
    n, q, sizes = inst.n, inst.q, inst.sizes
    t = len(sizes)
    prev_total = None
    for round_no in range(max_rounds):
        changed = False
        for i in range(t):
            new = _maximal_completion(n, sizes[i], fams[:i] + fams[i + 1:], q)
            if not new:
                return None
            if round_no > 0 and not set(fams[i]) <= set(new):
                raise AssertionError("maximal completion shrank a family of a valid tuple")
            if new != fams[i]:
                changed = True
            fams[i] = new
        total = sum(len(f) for f in fams)
        if prev_total is not None and total < prev_total:
            raise AssertionError("maximal completion decreased the sum")
        prev_total = total
        if not changed:
            return fams
    return fams


def construction_tuples(inst: ProblemInstance) -> dict[str, list[Family]]:
    """The two conjectured extremal constructions."""
    n, q, sizes = inst.n, inst.q, inst.sizes
    kt = sizes[-1]
    core_t = range(1, kt + 1)
    first = [q_meeting(n, sizes[0], core_t, q)] + [up_set(n, k, core_t) for k in sizes[1:]]
    stars = [up_set(n, k, range(1, q + 1)) for k in sizes]
    return {"construction-branch": first, "star-branch": stars}


def construction_values(inst: ProblemInstance) -> tuple[int, int, bool]:
    tuples = construction_tuples(inst)
    first, second = tuples["construction-branch"], tuples["star-branch"]
    validated = validate_tuple(first, inst.q) and validate_tuple(second, inst.q)
    return sum(len(f) for f in first), sum(len(f) for f in second), validated


def alternating_maximization(inst: ProblemInstance, restarts: int = 100, seed: int = 0,
                             include_constructions: bool = True) -> SearchOutcome:
    """Heuristic lower-bound search from random seeds (plus the two
    constructions), climbing by maximal completion."""
    start = time.perf_counter()
    rng = random.Random(seed)
    n, sizes = inst.n, inst.sizes
    unis = [ksets_masks(n, k) for k in sizes]
    seeds: list[list[list[int]]] = []
    if include_constructions:
        for fams in construction_tuples(inst).values():
            seeds.append([list(f.masks) for f in fams])
    for _ in range(restarts):
        seeds.append([rng.sample(u, min(len(u), rng.randint(1, 3))) for u in unis])
    best, best_tuple, discarded = -1, None, 0
    for s in seeds:
        fams = _climb(inst, [list(f) for f in s])
        if fams is None:
            discarded += 1
            continue
        total = sum(len(f) for f in fams)
        if total > best:
            best, best_tuple = total, fams
    witness = [Family.from_masks(n, k, f) for k, f in zip(sizes, best_tuple)] \
        if best_tuple else []
    if witness and not validate_tuple(witness, inst.q):
        raise AssertionError("climb produced an invalid tuple")
    return _outcome(inst, max(best, 0), witness, "alternating", False, len(seeds), restarts,
                    start, seed, [f"discarded {discarded} restarts with an empty family"])
