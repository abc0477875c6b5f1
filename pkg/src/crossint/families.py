"""Uniform set families over [n]: predicates, canonical families, compression,
disjointness shadows and maximal cross-intersecting pairs."""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .combinatorics import (
    KSet,
    binomial,
    elements_to_mask,
    ksets_masks,
    lex_rank,
    lex_unrank,
)
from .errors import GroundMismatch, ParameterError

_SCAN_CELLS = 1 << 22  # candidate x member cells per numpy block


def _lex_key(mask: int, n: int) -> int:
    # lex order on same-size sets == descending order of the bit-reversed mask
    return -int(format(mask, f"0{n}b")[::-1], 2) if n else 0


class Family:
    """An immutable family of ``set_size``-subsets of ``[ground_n]``.

    Members are kept in lex order; equality is set equality.
    """

    __slots__ = ("ground_n", "set_size", "_masks", "_mset", "_hash")

    def __init__(self, ground_n: int, set_size: int, members: Iterable = ()):
        if ground_n < 1 or set_size < 0 or set_size > ground_n:
            raise ParameterError(f"bad family shape n={ground_n}, k={set_size}")
        masks = set()
        for m in members:
            if isinstance(m, KSet):
                if m.ground_n != ground_n or m.size != set_size:
                    raise GroundMismatch(
                        f"{m} is not a {set_size}-subset of [{ground_n}]")
                masks.add(m.mask)
            else:
                ks = KSet.of(ground_n, m)
                if ks.size != set_size:
                    raise GroundMismatch(f"{ks} does not have size {set_size}")
                masks.add(ks.mask)
        self.ground_n = ground_n
        self.set_size = set_size
        self._masks = tuple(sorted(masks, key=lambda x: _lex_key(x, ground_n)))
        self._mset = frozenset(masks)
        self._hash = None

    @classmethod
    def from_masks(cls, ground_n: int, set_size: int, masks: Iterable[int]) -> "Family":
        fam = cls.__new__(cls)
        ms = set(masks)
        fam.ground_n = ground_n
        fam.set_size = set_size
        fam._masks = tuple(sorted(ms, key=lambda x: _lex_key(x, ground_n)))
        fam._mset = frozenset(ms)
        fam._hash = None
        return fam

    @classmethod
    def from_rank_bits(cls, ground_n: int, set_size: int, bits: int) -> "Family":
        """Build from a bitmap whose bit i marks the set of lex rank i."""
        table = ksets_masks(ground_n, set_size)
        out = []
        i = 0
        while bits:
            if bits & 1:
                out.append(table[i])
            bits >>= 1
            i += 1
        return cls.from_masks(ground_n, set_size, out)

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    @property
    def members(self) -> tuple[KSet, ...]:
        return tuple(KSet.from_mask(self.ground_n, m) for m in self._masks)

    def ranks(self) -> list[int]:
        return [lex_rank(s) for s in self.members]

    def rank_bits(self) -> int:
        bits = 0
        for r in self.ranks():
            bits |= 1 << r
        return bits

    def __len__(self):
        return len(self._masks)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, item):
        if isinstance(item, KSet):
            return item.ground_n == self.ground_n and item.mask in self._mset
        return elements_to_mask(item) in self._mset

    def __eq__(self, other):
        if not isinstance(other, Family):
            return NotImplemented
        return (self.ground_n == other.ground_n and self.set_size == other.set_size
                and self._mset == other._mset)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ground_n, self.set_size, self._mset))
        return self._hash

    def __le__(self, other: "Family") -> bool:
        _same_shape(self, other)
        return self._mset <= other._mset

    def __or__(self, other: "Family") -> "Family":
        _same_shape(self, other)
        return Family.from_masks(self.ground_n, self.set_size, self._mset | other._mset)

    def __and__(self, other: "Family") -> "Family":
        _same_shape(self, other)
        return Family.from_masks(self.ground_n, self.set_size, self._mset & other._mset)

    def __sub__(self, other: "Family") -> "Family":
        _same_shape(self, other)
        return Family.from_masks(self.ground_n, self.set_size, self._mset - other._mset)

    def complements(self) -> "Family":
        """The family of complements, living in C([n], n - set_size)."""
        full = (1 << self.ground_n) - 1
        return Family.from_masks(self.ground_n, self.ground_n - self.set_size,
                                 (full & ~m for m in self._masks))

    def __repr__(self):
        body = ", ".join(str(s) for s in self.members[:6])
        more = ", ..." if len(self) > 6 else ""
        return f"Family(n={self.ground_n}, k={self.set_size}, [{body}{more}])"


def _same_shape(f: Family, g: Family) -> None:
    if f.ground_n != g.ground_n or f.set_size != g.set_size:
        raise GroundMismatch("families live in different C([n], k)")


def _same_ground(fams: Sequence[Family]) -> None:
    grounds = {f.ground_n for f in fams}
    if len(grounds) > 1:
        raise GroundMismatch(f"families over different ground sets: {sorted(grounds)}")


def full_family(n: int, k: int) -> Family:
    return Family.from_masks(n, k, ksets_masks(n, k))


# --- predicates -----------------------------------------------------------

def is_cross_intersecting(fams: Sequence[Family]) -> bool:
    """Every pair of members from distinct families meets."""
    if len(fams) < 2:
        raise ParameterError("need at least two families")
    _same_ground(fams)
    for i, f in enumerate(fams):
        for g in fams[i + 1:]:
            for a in f.masks:
                for b in g.masks:
                    if not a & b:
                        return False
    return True


def is_cross_q_intersecting(f: Family, g: Family, q: int) -> bool:
    if q < 1:
        raise ParameterError(f"q must be positive, got {q}")
    _same_ground([f, g])
    for a in f.masks:
        for b in g.masks:
            if (a & b).bit_count() < q:
                return False
    return True


def is_intersecting(f: Family) -> bool:
    ms = f.masks
    return all(a & b for i, a in enumerate(ms) for b in ms[i:])


# --- canonical families ---------------------------------------------------

def p_family(n: int, l: int, i: int) -> Family:
    """The l-sets containing [i]."""
    if not 1 <= i <= l <= n:
        raise ParameterError(f"need 1 <= i <= l <= n, got n={n}, l={l}, i={i}")
    core = (1 << i) - 1
    return Family.from_masks(n, l, (m for m in ksets_masks(n, l) if m & core == core))


def r_family(n: int, k: int, i: int) -> Family:
    """The k-sets meeting [i]."""
    if not 1 <= i <= n or not 1 <= k <= n:
        raise ParameterError(f"need 1 <= i <= n, 1 <= k <= n, got n={n}, k={k}, i={i}")
    core = (1 << i) - 1
    return Family.from_masks(n, k, (m for m in ksets_masks(n, k) if m & core))


def star(n: int, k: int, x: int) -> Family:
    bit = 1 << (x - 1)
    return Family.from_masks(n, k, (m for m in ksets_masks(n, k) if m & bit))


def up_set(n: int, l: int, core: KSet | Iterable[int]) -> Family:
    """All l-sets containing ``core``."""
    c = core.mask if isinstance(core, KSet) else elements_to_mask(core)
    return Family.from_masks(n, l, (m for m in ksets_masks(n, l) if m & c == c))


def meeting(n: int, k: int, core: KSet | Iterable[int]) -> Family:
    """All k-sets meeting ``core``."""
    c = core.mask if isinstance(core, KSet) else elements_to_mask(core)
    return Family.from_masks(n, k, (m for m in ksets_masks(n, k) if m & c))


def q_meeting(n: int, k: int, core: Iterable[int], q: int) -> Family:
    """All k-sets sharing at least q elements with ``core``."""
    c = elements_to_mask(core)
    return Family.from_masks(n, k, (m for m in ksets_masks(n, k) if (m & c).bit_count() >= q))


# --- lex initial segments -------------------------------------------------

def l_initial(n: int, k: int, m: int) -> Family:
    """The first m k-sets in lex order."""
    total = binomial(n, k)
    if not 0 <= m <= total:
        raise ParameterError(f"m={m} outside [0, C({n},{k})={total}]")
    return Family.from_masks(n, k, ksets_masks(n, k)[:m])


def compress(f: Family) -> Family:
    return l_initial(f.ground_n, f.set_size, len(f))


def is_l_initial(f: Family) -> bool:
    return compress(f) == f


# --- disjointness shadow and partners -------------------------------------

def _partner_keep(n: int, cands: Sequence[int], members: Sequence[int], q: int) -> list[bool]:
    """keep[j] iff candidate j shares >= q elements with every member."""
    if not members:
        return [True] * len(cands)
    if n <= 63:
        cand = np.fromiter(cands, dtype=np.uint64, count=len(cands))
        mem = np.fromiter(members, dtype=np.uint64, count=len(members))
        step = max(1, _SCAN_CELLS // len(mem))
        keep = np.empty(len(cand), dtype=bool)
        for lo in range(0, len(cand), step):
            block = cand[lo:lo + step, None] & mem[None, :]
            if q == 1:
                keep[lo:lo + step] = np.all(block != 0, axis=1)
            else:
                keep[lo:lo + step] = np.all(np.bitwise_count(block) >= q, axis=1)
        return keep.tolist()
    out = []
    for a in cands:
        out.append(all((a & b).bit_count() >= q for b in members))
    return out


def maximal_q_partner(fams: Sequence[Family], k: int, q: int = 1) -> Family:
    """All k-sets that share at least q elements with every member of every family."""
    if not fams:
        raise ParameterError("need at least one family")
    _same_ground(fams)
    n = fams[0].ground_n
    if not 0 <= k <= n:
        raise ParameterError(f"k={k} outside [0, {n}]")
    members = sorted({m for f in fams for m in f.masks})
    cands = ksets_masks(n, k)
    keep = _partner_keep(n, cands, members, q)
    return Family.from_masks(n, k, (c for c, ok in zip(cands, keep) if ok))


def _check_room(f: Family, j: int) -> None:
    if j < 1 or f.ground_n < f.set_size + j:
        raise ParameterError(
            f"need n >= {f.set_size} + {j}, have n={f.ground_n}")


def disjointness_shadow(f: Family, j: int) -> Family:
    """All j-sets disjoint from at least one member of f."""
    _check_room(f, j)
    n = f.ground_n
    cands = ksets_masks(n, j)
    keep = _partner_keep(n, cands, f.masks, 1)
    return Family.from_masks(n, j, (c for c, ok in zip(cands, keep) if not ok))


def maximal_partner(b: Family, k: int) -> Family:
    """The largest k-family cross-intersecting with b."""
    _check_room(b, k)
    return maximal_q_partner([b], k, 1)


@dataclass(frozen=True)
class MaximalPair:
    a: Family
    b: Family
    rounds: int = 0

    def __post_init__(self):
        if not is_maximal_pair(self.a, self.b):
            raise ParameterError("families do not form a maximal pair")


def is_maximal_pair(a: Family, b: Family) -> bool:
    if a.ground_n < a.set_size + b.set_size:
        raise ParameterError("need n >= k + l")
    return (maximal_partner(b, a.set_size) == a
            and maximal_partner(a, b.set_size) == b)


def close_to_maximal_pair(a: Family, b: Family) -> MaximalPair:
    """Grow (a, b) alternately to a maximal cross-intersecting pair."""
    _same_ground([a, b])
    if a.ground_n < a.set_size + b.set_size:
        raise ParameterError("need n >= k + l")
    if not is_cross_intersecting([a, b]):
        raise ParameterError("inputs are not cross-intersecting")
    rounds = 0
    while True:
        new_a = maximal_partner(b, a.set_size)
        new_b = maximal_partner(new_a, b.set_size)
        rounds += 1
        if new_a == a and new_b == b:
            return MaximalPair(a, b, rounds)
        a, b = new_a, new_b


# --- random cross-intersecting pairs --------------------------------------

def random_family(n: int, k: int, size: int, rng: random.Random) -> Family:
    table = ksets_masks(n, k)
    return Family.from_masks(n, k, rng.sample(table, size))


def random_cross_intersecting_pair(n: int, k: int, l: int, rng: random.Random,
                                   max_tries: int = 10_000) -> tuple[Family, Family]:
    """Sample two random families, then prune the larger until the pair
    cross-intersects; resample whenever a side empties."""
    nk, nl = binomial(n, k), binomial(n, l)
    for _ in range(max_tries):
        f = random_family(n, k, rng.randint(1, nk), rng)
        g = random_family(n, l, rng.randint(1, nl), rng)
        if len(f) >= len(g):
            kept = [a for a in f.masks if all(a & b for b in g.masks)]
            f = Family.from_masks(n, k, kept)
        else:
            kept = [b for b in g.masks if all(a & b for a in f.masks)]
            g = Family.from_masks(n, l, kept)
        if len(f) and len(g):
            return f, g
    raise RuntimeError("could not sample a non-empty cross-intersecting pair")


def lex_index_family(n: int, k: int, ranks: Iterable[int]) -> Family:
    return Family(n, k, (lex_unrank(n, k, r) for r in ranks))
