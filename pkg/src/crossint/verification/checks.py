"""Exhaustive checks of the theorem, its lemmas and the cited results."""
from __future__ import annotations

import math
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import networkx as nx
import numpy as np

from ..bounds import (
    BoundReport,
    TheoremParams,
    _report,
    corollary_bound,
    ft_bound,
    hm_bound,
    main_bound,
    main_branches,
)
from ..combinatorics import binomial as C, format_rational, ksets_masks
from ..errors import BudgetExceeded, ParameterError
from ..families import (
    Family,
    compress,
    full_family,
    is_cross_intersecting,
    l_initial,
    maximal_partner,
    meeting,
    r_family,
    p_family,
    random_cross_intersecting_pair,
    star,
    up_set,
)
from .classify import ExtremalClassification, classify_bits
from .engines import ScanResult, brute_force_max, l_initial_scan
from .tables import pair_tables

MAX_CANDIDATES = int(os.environ.get("CROSSINT_MAX_CANDIDATES", str(1 << 22)))


def allowed_cases(p: TheoremParams) -> frozenset[str]:
    if p.n == p.k + p.l:
        return frozenset({"iii"} if p.c < 1 else {"iv"} if p.c == 1 else {"v"})
    return frozenset({"i", "ii"})


@dataclass
class MainVerdict:
    params: TheoremParams
    mode: str
    results: dict[str, ScanResult]
    classifications: list[ExtremalClassification]
    falsifications: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.falsifications

    @property
    def primary(self) -> ScanResult:
        return self.results.get("brute") or self.results["scan"]

    def case_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for cl in self.classifications:
            key = "+".join(cl.labels) or "none"
            counts[key] = counts.get(key, 0) + 1
        return dict(sorted(counts.items()))

    def to_record(self, max_witnesses: int = 20, timing: bool = True) -> dict:
        return {
            "command": "verify main",
            "params": self.params.as_record(),
            "mode": self.mode,
            "status": "matched" if self.ok else "FALSIFIED",
            "engines": {name: r.to_record(max_witnesses, timing)
                        for name, r in self.results.items()},
            "classification_counts": self.case_counts(),
            "classifications": [c.to_record() for c in self.classifications[:max_witnesses]],
            "falsifications": self.falsifications,
        }


def verify_main_theorem(p: TheoremParams, mode: str = "both", workers: int = 1,
                        max_bits: Optional[int] = None) -> MainVerdict:
    """Run the chosen engines, check the bound both ways and classify witnesses.

    Disagreements are returned as falsification records, never raised.
    """
    if mode not in ("brute", "scan", "both"):
        raise ParameterError(f"unknown mode {mode!r}")
    results: dict[str, ScanResult] = {}
    if mode in ("brute", "both"):
        results["brute"] = brute_force_max(p, workers=workers, max_bits=max_bits)
    if mode in ("scan", "both"):
        results["scan"] = l_initial_scan(p)
    bound = main_bound(p)
    bad: list[str] = []
    for name, res in results.items():
        if res.observed_max is None:
            bad.append(f"{name}: no admissible family in window {res.window}")
        elif res.observed_max > bound.max_value:
            bad.append(f"{name}: observed {format_rational(res.observed_max)} exceeds "
                       f"bound {format_rational(bound.max_value)}")
        elif res.observed_max < bound.max_value:
            bad.append(f"{name}: bound {format_rational(bound.max_value)} not attained "
                       f"(best {format_rational(res.observed_max)})")
    if len(results) == 2 and results["brute"].observed_max != results["scan"].observed_max:
        bad.append("brute and scan engines disagree on the maximum")
    primary = results.get("brute") or results["scan"]
    tables = pair_tables(p.n, p.k, p.l)
    allowed = allowed_cases(p)
    classes = []
    for i, (a_bits, b_bits) in enumerate(zip(primary.a_bits, primary.b_bits)):
        cl = classify_bits(p, a_bits, b_bits, tables)
        classes.append(cl)
        if not allowed.intersection(cl.labels):
            bad.append(f"{primary.engine} witness {i} classified {cl.case_label!r}, "
                       f"expected one of {sorted(allowed)}")
            if len(bad) > 50:
                break
    return MainVerdict(p, mode, results, classes, bad)


def verify_nonempty_bound(n: int, k: int, l: int, workers: int = 1) -> ScanResult:
    """Brute-force max of |A| + |B| over non-empty cross-intersecting pairs,
    against C(n,k) - C(n-l,k) + 1 (k >= l), or its mirror image for k < l."""
    hi_k, lo_l = max(k, l), min(k, l)
    value = ft_bound(n, hi_k, lo_l)
    name = "hm" if k == l else "ft"
    bound = _report([(name, value)], name, {"n": n, "k": k, "l": l})
    p = TheoremParams(n, k, l, l, 1)
    return brute_force_max(p, window=(1, C(n, l)), require_nonempty=True,
                           workers=workers, bound=bound)


# --- single-family oracles ------------------------------------------------

def max_intersecting_family(n: int, k: int, require_empty_core: bool = False,
                            max_bits: int = 20) -> tuple[int, list[Family]]:
    """Largest intersecting k-family on [n] by exhaustive enumeration,
    optionally restricted to families with empty common intersection."""
    masks = ksets_masks(n, k)
    N = len(masks)
    if N > max_bits:
        raise BudgetExceeded("intersecting-family enumeration", N, max_bits)
    fam = np.arange(1, 1 << N, dtype=np.uint64)
    ok = np.ones(len(fam), dtype=bool)
    core = np.full(len(fam), (1 << n) - 1, dtype=np.uint64)
    for j, a in enumerate(masks):
        conf = sum(1 << i for i, b in enumerate(masks) if not a & b)
        has_j = ((fam >> np.uint64(j)) & np.uint64(1)).astype(bool)
        ok &= ~(has_j & ((fam & np.uint64(conf)) != 0))
        core = np.where(has_j, core & np.uint64(a), core)
    if require_empty_core:
        ok &= core == 0
    sizes = np.bitwise_count(fam)
    sizes[~ok] = 0
    best = int(sizes.max())
    winners = [Family.from_rank_bits(n, k, int(x)) for x in fam[sizes == best]]
    return best, winners


# --- Kruskal-Katona preservation -----------------------------------------

@dataclass
class KKResult:
    n: int
    k: int
    l: int
    trials: int
    seed: int
    passed: int
    counterexample: Optional[tuple[Family, Family]] = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None and self.passed == self.trials

    def to_record(self) -> dict:
        from ..io import format_family
        return {"command": "verify kk", "n": self.n, "k": self.k, "l": self.l,
                "trials": self.trials, "seed": self.seed, "passed": self.passed,
                "status": "pass" if self.ok else "FALSIFIED",
                "counterexample": None if self.counterexample is None
                else [format_family(f) for f in self.counterexample]}


def verify_kk_preservation(n: int, k: int, l: int, trials: int, seed: int = 0) -> KKResult:
    if n < k + l:
        raise ParameterError(f"n >= k+l violated: n={n}, k={k}, l={l}")
    rng = random.Random(seed)
    passed = 0
    for _ in range(trials):
        f, g = random_cross_intersecting_pair(n, k, l, rng)
        if not is_cross_intersecting([compress(f), compress(g)]):
            return KKResult(n, k, l, trials, seed, passed, (f, g))
        passed += 1
    return KKResult(n, k, l, trials, seed, passed)


# --- disjointness shadow minimisers ---------------------------------------

@dataclass
class FMResult:
    n: int
    k: int
    l: int
    r: int
    families_checked: int
    min_shadow: int
    expected_min: int
    minimizers: list[Family]
    up_sets: list[Family]

    @property
    def ok(self) -> bool:
        return (self.min_shadow == self.expected_min
                and set(self.minimizers) == set(self.up_sets))

    def to_record(self) -> dict:
        return {"command": "verify fm", "n": self.n, "k": self.k, "l": self.l, "r": self.r,
                "families_checked": self.families_checked, "min_shadow": self.min_shadow,
                "expected_min": self.expected_min, "minimizers": len(self.minimizers),
                "up_sets": len(self.up_sets), "status": "pass" if self.ok else "FALSIFIED"}


def verify_proposition_fm(n: int, k: int, l: int, r: int,
                          max_families: Optional[int] = None) -> FMResult:
    """Enumerate all l-families of size C(n-r, l-r) and minimise |D_k(B)|."""
    if not n > k + l:
        raise ParameterError(f"n > k+l violated: n={n}, k={k}, l={l}")
    if not 1 <= r <= l:
        raise ParameterError(f"1 <= r <= l violated: r={r}, l={l}")
    m = C(n - r, l - r)
    nl = C(n, l)
    count = C(nl, m)
    limit = MAX_CANDIDATES if max_families is None else max_families
    if count > limit:
        raise BudgetExceeded("families of size C(n-r,l-r)", count, limit)
    tables = pair_tables(n, k, l)
    conflict = tables.conflict
    total_k = C(n, k)
    best = None
    winners: list[int] = []
    it = combinations(range(nl), m)
    while True:
        block = np.array(list(_take(it, 1 << 16)), dtype=np.int64).reshape(-1, m)
        if not len(block):
            break
        bits = np.bitwise_or.reduce(np.left_shift(np.uint64(1), block.astype(np.uint64)),
                                    axis=1) if nl <= 64 else None
        if bits is None:
            raise BudgetExceeded("C(n,l) rank bits", nl, 64)
        partner = np.zeros(len(bits), dtype=np.int64)
        for conf in conflict:
            partner += (bits & np.uint64(conf)) == 0
        shadow = total_k - partner
        lo = int(shadow.min())
        if best is None or lo < best:
            best, winners = lo, []
        if lo == best:
            winners.extend(int(x) for x in bits[shadow == best])
    ups = [up_set(n, l, R) for R in combinations(range(1, n + 1), r)]
    return FMResult(n, k, l, r, count, best, C(n - r, k),
                    [Family.from_rank_bits(n, l, w) for w in winners], ups)


def _take(it, size):
    for _, x in zip(range(size), it):
        yield x


# --- bipartite biregular lemma -------------------------------------------

@dataclass
class BipartiteTestInstance:
    n: int
    k: int
    l: int
    s: int
    x_side: tuple[int, ...]
    y_side: tuple[int, ...]
    x_nbrs: tuple[int, ...]   # bitmaps over y indices
    y_nbrs: tuple[int, ...]   # bitmaps over x indices

    @classmethod
    def build(cls, n: int, k: int, l: int, s: int) -> "BipartiteTestInstance":
        rest = range(s + 1, n + 1)

        def sets(size):
            if size < 0 or size > len(rest):
                return ()
            return tuple(sum(1 << (e - 1) for e in c) for c in combinations(rest, size))

        xs, ys = sets(k - 1), sets(l - s + 1)
        x_nbrs = tuple(sum(1 << j for j, y in enumerate(ys) if not x & y) for x in xs)
        y_nbrs = tuple(sum(1 << i for i, x in enumerate(xs) if not x & y) for y in ys)
        return cls(n, k, l, s, xs, ys, x_nbrs, y_nbrs)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(("x", i) for i in range(len(self.x_side)))
        g.add_nodes_from(("y", j) for j in range(len(self.y_side)))
        for i, nb in enumerate(self.x_nbrs):
            g.add_edges_from((("x", i), ("y", j)) for j in range(len(self.y_side)) if nb >> j & 1)
        return g

    def is_biregular(self) -> bool:
        return (len({nb.bit_count() for nb in self.x_nbrs}) <= 1
                and len({nb.bit_count() for nb in self.y_nbrs}) <= 1)

    def is_connected(self) -> bool:
        g = self.graph()
        return g.number_of_nodes() > 0 and nx.is_connected(g)


@dataclass
class BipartiteResult:
    instance: BipartiteTestInstance
    c: Fraction
    biregular: bool
    connected: bool
    best: Fraction
    bound: Fraction
    maximizers: list[tuple[int, int]]   # (P0 bitmap over X, Q0 bitmap over Y)
    independent_sets: int

    @property
    def equality_only_at_sides(self) -> bool:
        full_x = (1 << len(self.instance.x_side)) - 1
        full_y = (1 << len(self.instance.y_side)) - 1
        sides = {(full_x, 0), (0, full_y)}
        return all(mx in sides for mx in self.maximizers)

    @property
    def ok(self) -> bool:
        if not self.biregular or self.best > self.bound:
            return False
        return self.equality_only_at_sides if self.connected else True

    def to_record(self) -> dict:
        inst = self.instance
        return {"command": "verify bipartite", "n": inst.n, "k": inst.k, "l": inst.l,
                "s": inst.s, "c": format_rational(self.c), "x": len(inst.x_side),
                "y": len(inst.y_side), "biregular": self.biregular,
                "connected": self.connected, "best": format_rational(self.best),
                "bound": format_rational(self.bound),
                "independent_sets": self.independent_sets,
                "status": "pass" if self.ok else "FALSIFIED"}


def verify_bipartite_lemma(n: int, k: int, l: int, s: int, c,
                           max_vertices: int = 26) -> BipartiteResult:
    """Check max |P0| + c|Q0| over independent P0 u Q0 of the disjointness graph.

    Subsets of the smaller side are enumerated and completed by every
    non-neighbour on the other side; since c > 0 any maximiser is of that form.
    """
    c = Fraction(c)
    if c <= 0:
        raise ParameterError("c > 0 violated")
    if not 1 <= s <= n:
        raise ParameterError(f"s out of range: s={s}")
    inst = BipartiteTestInstance.build(n, k, l, s)
    nx_, ny = len(inst.x_side), len(inst.y_side)
    if nx_ + ny > max_vertices:
        raise BudgetExceeded("|X| + |Y|", nx_ + ny, max_vertices)
    swap = ny < nx_
    small_nbrs = inst.y_nbrs if swap else inst.x_nbrs
    n_small, n_big = (ny, nx_) if swap else (nx_, ny)
    w_small, w_big = (c, Fraction(1)) if swap else (Fraction(1), c)
    full_big = (1 << n_big) - 1
    union = [0] * (1 << n_small)
    best, maximizers, indep = None, [], 0
    for sub in range(1 << n_small):
        if sub:
            low = sub & -sub
            union[sub] = union[sub ^ low] | small_nbrs[low.bit_length() - 1]
        free = full_big & ~union[sub]
        # every subset of the free part is independent together with sub
        indep += 1 << free.bit_count()
        val = w_small * sub.bit_count() + w_big * free.bit_count()
        pair = (free, sub) if swap else (sub, free)
        if best is None or val > best:
            best, maximizers = val, [pair]
        elif val == best:
            maximizers.append(pair)
    bound = max(Fraction(nx_), c * ny)
    return BipartiteResult(inst, c, inst.is_biregular(), inst.is_connected(),
                           best, bound, maximizers, indep)


# --- corollary for t families ---------------------------------------------

@dataclass
class CorollaryResult:
    n: int
    k: int
    t: int
    mode: str
    bound: BoundReport
    observed: int
    constructions: dict[str, int] = field(default_factory=dict)
    search: str = ""
    candidates: int = 0
    specialization_ok: bool = True

    @property
    def ok(self) -> bool:
        if self.mode == "construction":
            return (self.specialization_ok
                    and self.constructions.get(self.bound.argmax_labels[0]) == self.bound.max_value
                    and all(self.constructions[lbl] == v for lbl, v in self.bound.branch_values))
        return self.observed == self.bound.max_value and self.specialization_ok

    def to_record(self) -> dict:
        return {"command": "verify corollary", "n": self.n, "k": self.k, "t": self.t,
                "mode": self.mode, "bound": self.bound.to_record(),
                "observed": format_rational(self.observed),
                "constructions": {k: format_rational(v) for k, v in self.constructions.items()},
                "search": self.search, "candidates": self.candidates,
                "status": "pass" if self.ok else "FALSIFIED"}


def corollary_constructions(n: int, k: int, t: int) -> dict[str, list[Family]]:
    """The two extremal t-tuples: one big family plus t-1 copies of {[k]}, or t stars."""
    core = list(range(1, k + 1))
    return {
        "r-branch": [meeting(n, k, core)] + [Family(n, k, [core])] * (t - 1),
        "1-branch": [star(n, k, 1)] * t,
    }


def specialization_holds(n: int, k: int, t: int) -> bool:
    cor = corollary_bound(n, k, t)
    main = main_bound(TheoremParams(n, k, k, k, t - 1))
    return cor.branch_values == main.branch_values


def verify_corollary(n: int, k: int, t: int, mode: str = "construction",
                     max_candidates: Optional[int] = None) -> CorollaryResult:
    bound = corollary_bound(n, k, t)
    spec_ok = specialization_holds(n, k, t)
    if mode == "construction":
        sums = {}
        for label, fams in corollary_constructions(n, k, t).items():
            if any(len(f) == 0 for f in fams) or not is_cross_intersecting(fams):
                raise AssertionError(f"construction {label} is not valid")
            sums[label] = sum(len(f) for f in fams)
        return CorollaryResult(n, k, t, mode, bound, max(sums.values()), sums,
                               specialization_ok=spec_ok)
    if mode != "exhaustive":
        raise ParameterError(f"unknown mode {mode!r}")
    N = C(n, k)
    if N > 16 or t > 3:
        raise BudgetExceeded("exhaustive corollary (C(n,k) <= 16, t <= 3)", (N, t), (16, 3))
    limit = MAX_CANDIDATES if max_candidates is None else max_candidates
    raw_cost = (1 << N) ** (t - 1)
    nested, nested_count = _corollary_nested(n, k, t)
    if raw_cost <= limit:
        raw, raw_count = _corollary_raw(n, k, t)
        if raw != nested:
            raise AssertionError(f"raw search {raw} and nested search {nested} disagree")
        return CorollaryResult(n, k, t, mode, bound, raw, search="raw+nested",
                               candidates=raw_count + nested_count, specialization_ok=spec_ok)
    return CorollaryResult(n, k, t, mode, bound, nested, search="nested",
                           candidates=nested_count, specialization_ok=spec_ok)


def _corollary_raw(n: int, k: int, t: int) -> tuple[int, int]:
    """All tuples of non-empty families for the first t-1; the last is the
    largest family crossing all of them."""
    tables = pair_tables(n, k, k)
    N = tables.nk
    conflict = tables.conflict
    compat = {}

    def conflicts_of(f):
        if f not in compat:
            bad = 0
            for j in range(N):
                if f >> j & 1:
                    bad |= conflict[j]
            compat[f] = bad
        return compat[f]

    best, count = 0, 0

    def rec(chosen, bad):
        nonlocal best, count
        if len(chosen) == t - 1:
            count += 1
            last = tables.full_k & ~bad
            if last:
                best = max(best, sum(f.bit_count() for f in chosen) + last.bit_count())
            return
        for f in range(1, 1 << N):
            if f & bad:
                continue
            rec(chosen + [f], bad | conflicts_of(f))

    rec([], 0)
    return best, count


def _corollary_nested(n: int, k: int, t: int) -> tuple[int, int]:
    """Compressed families are nested; the sum is at most |B1| + (t-1)|B2|
    with B2 intersecting and crossing B1."""
    best, count = 0, 0
    N = C(n, k)
    for m1 in range(1, N + 1):
        b1 = l_initial(n, k, m1)
        partner = maximal_partner(b1, k) if n >= 2 * k else Family(n, k)
        for m2 in range(1, m1 + 1):
            count += 1
            b2 = l_initial(n, k, m2)
            if not b2 <= partner:
                break
            best = max(best, m1 + (t - 1) * m2)
    return best, count


# --- endpoint claim for the canonical pairs --------------------------------

def canonical_values(p: TheoremParams) -> list[Fraction]:
    """|R_i| + c|P_i| for i = 1..r."""
    return [C(p.n, p.k) - C(p.n - i, p.k) + p.c * C(p.n - i, p.l - i)
            for i in range(1, p.r + 1)]


def endpoint_claim_holds(p: TheoremParams) -> bool:
    """The maximum over i = 1..r of |R_i| + c|P_i| is attained at i = 1 or i = r."""
    v = canonical_values(p)
    return max(v) in (v[0], v[-1])


# --- binomial inequality scan ---------------------------------------------

@dataclass
class InequalityReport:
    max_n: int
    checked: dict[str, int]
    violations: list[tuple]
    equality_12: list[tuple[int, int, int]]
    equality_13: list[tuple[int, int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def equality_13_off_locus(self) -> list[tuple[int, int, int]]:
        return [(n, k, l) for n, k, l in self.equality_13 if n != k + l]

    def to_record(self) -> dict:
        return {"command": "verify inequalities", "max_n": self.max_n,
                "checked": self.checked, "violations": [list(v) for v in self.violations],
                "equality_12": len(self.equality_12),
                "equality_13": len(self.equality_13),
                "equality_13_off_locus": [list(x) for x in self.equality_13_off_locus()],
                "status": "pass" if self.ok else "FALSIFIED"}


def scan_inequalities(max_n: int = 40) -> InequalityReport:
    """Exact check over n <= max_n, n >= k + l, k >= l >= 1 of

    C(n-1,k-1) + C(n-1,l-1) <= C(n,k) - C(n-l,k) + 1,
    C(n,l) - C(n-k,l)      <= C(n,k) - C(n-l,k),
    C(n-i, l+1-i)          <= C(n-i, k-1)            for 2 <= i <= l.
    """
    if max_n > 60:
        raise ParameterError(f"max_n <= 60 violated: {max_n}")
    checked = {"12": 0, "13": 0, "14": 0}
    violations, eq12, eq13 = [], [], []
    for n in range(2, max_n + 1):
        for l in range(1, n // 2 + 1):
            for k in range(l, n - l + 1):
                left = C(n - 1, k - 1) + C(n - 1, l - 1)
                right = C(n, k) - C(n - l, k) + 1
                checked["12"] += 1
                if left > right:
                    violations.append(("12", n, k, l))
                elif left == right:
                    eq12.append((n, k, l))
                left = C(n, l) - C(n - k, l)
                right = C(n, k) - C(n - l, k)
                checked["13"] += 1
                if left > right:
                    violations.append(("13", n, k, l))
                elif left == right:
                    eq13.append((n, k, l))
                for i in range(2, l + 1):
                    checked["14"] += 1
                    if C(n - i, l + 1 - i) > C(n - i, k - 1):
                        violations.append(("14", n, k, l, i))
    return InequalityReport(max_n, checked, violations, eq12, eq13)
