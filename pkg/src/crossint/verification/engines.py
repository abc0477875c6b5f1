"""The two engines for the weighted cross-intersecting maximum.

``brute_force_max`` enumerates every l-family B in the size window and pairs it
with its maximal partner. ``l_initial_scan`` only looks at lex-initial B.
Agreement between the two is the machine-checked content of the
Kruskal-Katona reduction.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..bounds import BoundReport, TheoremParams, main_bound
from ..combinatorics import binomial, format_rational, ksets_masks
from ..errors import BudgetExceeded
from ..families import Family
from ..parallel import chunk_ranges, map_chunks
from .tables import pair_tables

MAX_FAMILY_BITS = int(os.environ.get("CROSSINT_MAX_FAMILY_BITS", "24"))
_CHUNK = 1 << 18


@dataclass
class ScanResult:
    params: TheoremParams
    engine: str
    window: tuple[int, int]
    observed_max: Optional[Fraction]
    a_bits: list[int]
    b_bits: list[int]
    minimal_s_per_witness: list[Optional[int]]
    bound: BoundReport
    candidates: int
    wall_time: float = 0.0
    require_nonempty: bool = False
    trace: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def matched(self) -> bool:
        return self.observed_max is not None and self.observed_max == self.bound.max_value

    @property
    def witness_count(self) -> int:
        return len(self.b_bits)

    def witness(self, i: int) -> tuple[Family, Family]:
        p = self.params
        return (Family.from_rank_bits(p.n, p.k, self.a_bits[i]),
                Family.from_rank_bits(p.n, p.l, self.b_bits[i]))

    @property
    def witnesses(self) -> list[tuple[Family, Family]]:
        return [self.witness(i) for i in range(self.witness_count)]

    def to_record(self, max_witnesses: int = 20, timing: bool = True) -> dict:
        from ..io import format_family
        rec = {
            "engine": self.engine,
            "params": self.params.as_record(),
            "window": list(self.window),
            "require_nonempty": self.require_nonempty,
            "observed_max": None if self.observed_max is None else format_rational(self.observed_max),
            "bound": self.bound.to_record(),
            "matched": self.matched,
            "candidates": self.candidates,
            "witness_count": self.witness_count,
            "witnesses": [
                {"a": format_family(a), "b": format_family(b),
                 "minimal_s": self.minimal_s_per_witness[i]}
                for i, (a, b) in ((i, self.witness(i))
                                  for i in range(min(max_witnesses, self.witness_count)))
            ],
        }
        if timing:
            rec["wall_time"] = round(self.wall_time, 6)
        return rec


# --- brute force ----------------------------------------------------------

def _profile_chunk(args):
    n, k, l, lo, hi = args
    tables = pair_tables(n, k, l)
    masks = np.arange(lo, hi, dtype=np.uint64)
    bsize = np.bitwise_count(masks).astype(np.uint16)
    asize = np.zeros(hi - lo, dtype=np.uint32)
    for conf in tables.conflict:
        asize += (masks & np.uint64(conf)) == 0
    return bsize, asize


_PROFILES: dict = {}


def _profile(n: int, k: int, l: int, workers: int = 1):
    """(|B|, |maximal partner of B|) for every l-family B, indexed by rank bitmap."""
    key = (n, k, l)
    if key not in _PROFILES:
        total = 1 << binomial(n, l)
        parts = map_chunks(_profile_chunk,
                           [(n, k, l, lo, hi) for lo, hi in chunk_ranges(total, _CHUNK)],
                           workers)
        if len(_PROFILES) >= 4:
            _PROFILES.pop(next(iter(_PROFILES)))
        _PROFILES[key] = (np.concatenate([p[0] for p in parts]),
                          np.concatenate([p[1] for p in parts]))
    return _PROFILES[key]


def _partner_bits_vec(b: np.ndarray, conflict: list[int]) -> list[int]:
    if len(conflict) <= 64:
        a = np.zeros(len(b), dtype=np.uint64)
        for j, conf in enumerate(conflict):
            a |= ((b & np.uint64(conf)) == 0).astype(np.uint64) << np.uint64(j)
        return [int(x) for x in a]
    out = []
    for x in b.tolist():
        bits = 0
        for j, conf in enumerate(conflict):
            if not x & conf:
                bits |= 1 << j
        out.append(bits)
    return out


def _minimal_s_vec(b: np.ndarray, tables, l: int) -> list[Optional[int]]:
    s_out = np.zeros(len(b), dtype=np.int64)
    for s in range(l, 0, -1):
        ps = np.uint64(tables.p_bits(s))
        s_out[(b & ps) == ps] = s
    return [int(s) if s else None for s in s_out]


def brute_force_max(p: TheoremParams, window: Optional[tuple[int, int]] = None,
                    require_nonempty: bool = False, workers: int = 1,
                    max_bits: Optional[int] = None,
                    bound: Optional[BoundReport] = None) -> ScanResult:
    """Exact max of |A| + c|B| over every l-family B with |B| in ``window``,
    A being the maximal partner of B."""
    start = time.perf_counter()
    n, k, l = p.n, p.k, p.l
    nl = binomial(n, l)
    limit = MAX_FAMILY_BITS if max_bits is None else max_bits
    if nl > limit:
        raise BudgetExceeded("brute force over C(n,l)-bit families", nl, limit)
    lo, hi = window if window is not None else p.window
    tables = pair_tables(n, k, l)
    bsize, asize = _profile(n, k, l, workers)
    sel = (bsize >= lo) & (bsize <= hi)
    if require_nonempty:
        sel &= asize > 0
    idx = np.nonzero(sel)[0].astype(np.uint64)
    bound = bound if bound is not None else main_bound(p)
    if len(idx) == 0:
        return ScanResult(p, "brute", (lo, hi), None, [], [], [], bound, 0,
                          time.perf_counter() - start, require_nonempty)
    num, den = p.c.numerator, p.c.denominator
    vals = den * asize[idx].astype(np.int64) + num * bsize[idx].astype(np.int64)
    best = int(vals.max())
    wit = idx[vals == best]
    return ScanResult(
        params=p, engine="brute", window=(lo, hi),
        observed_max=Fraction(best, den),
        a_bits=_partner_bits_vec(wit, tables.conflict),
        b_bits=[int(x) for x in wit],
        minimal_s_per_witness=_minimal_s_vec(wit, tables, l),
        bound=bound, candidates=int(len(idx)),
        wall_time=time.perf_counter() - start, require_nonempty=require_nonempty)


# --- lex-initial scan -----------------------------------------------------

def _bits_from_bool(arr: np.ndarray) -> int:
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def minimal_s_initial(n: int, l: int, m: int) -> Optional[int]:
    """Least s with P_s inside the first m l-sets (P_s is itself initial)."""
    for s in range(1, l + 1):
        if binomial(n - s, l - s) <= m:
            return s
    return None


def l_initial_scan(p: TheoremParams, window: Optional[tuple[int, int]] = None,
                   require_nonempty: bool = False,
                   bound: Optional[BoundReport] = None) -> ScanResult:
    """Max of |A| + c|B| over lex-initial B of each size in the window."""
    start = time.perf_counter()
    n, k, l = p.n, p.k, p.l
    lo, hi = window if window is not None else p.window
    kmasks = np.array(ksets_masks(n, k), dtype=np.uint64 if n <= 64 else object)
    alive = np.ones(len(kmasks), dtype=bool)
    best = None
    best_m: list[int] = []
    best_alive: list[np.ndarray] = []
    trace = []
    for m, lmask in enumerate(ksets_masks(n, l)[:hi], start=1):
        alive &= (kmasks & np.uint64(lmask)) != 0 if n <= 64 else \
            np.array([bool(x & lmask) for x in kmasks])
        if m < lo:
            continue
        a_size = int(alive.sum())
        trace.append((m, a_size, minimal_s_initial(n, l, m)))
        if require_nonempty and a_size == 0:
            continue
        val = a_size + p.c * m
        if best is None or val > best:
            best, best_m, best_alive = val, [m], [alive.copy()]
        elif val == best:
            best_m.append(m)
            best_alive.append(alive.copy())
    bound = bound if bound is not None else main_bound(p)
    return ScanResult(
        params=p, engine="scan", window=(lo, hi),
        observed_max=None if best is None else Fraction(best),
        a_bits=[_bits_from_bool(a) for a in best_alive],
        b_bits=[(1 << m) - 1 for m in best_m],
        minimal_s_per_witness=[minimal_s_initial(n, l, m) for m in best_m],
        bound=bound, candidates=len(trace),
        wall_time=time.perf_counter() - start, require_nonempty=require_nonempty,
        trace=trace)
