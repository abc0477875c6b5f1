"""Per-(n, k, l) lookup tables indexed by lex rank.

A family of l-sets is a Python int whose bit i marks the l-set of rank i.
"""
from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from ..combinatorics import ksets_masks, mask_rank_index


class PairTables:
    def __init__(self, n: int, k: int, l: int):
        self.n, self.k, self.l = n, k, l
        self.k_masks = ksets_masks(n, k)
        self.l_masks = ksets_masks(n, l)
        self.nk = len(self.k_masks)
        self.nl = len(self.l_masks)
        self.full_k = (1 << self.nk) - 1
        self.full_l = (1 << self.nl) - 1
        self._cache: dict = {}
        self._byte_and = self._byte_tables(self.l_masks, lambda acc, m: acc & m,
                                           (1 << n) - 1)

    @cached_property
    def conflict(self) -> list[int]:
        """conflict[j]: l-ranks disjoint from the k-set of rank j."""
        return [self._bits(self.l_masks, lambda m, a=a: not (m & a)) for a in self.k_masks]

    @staticmethod
    def _bits(masks, pred) -> int:
        bits = 0
        for i, m in enumerate(masks):
            if pred(m):
                bits |= 1 << i
        return bits

    @staticmethod
    def _byte_tables(masks, op, empty):
        tables = []
        for base in range(0, len(masks), 8):
            chunk = masks[base:base + 8]
            tab = [empty] * 256
            for byte in range(1, 256):
                low = byte & -byte
                i = low.bit_length() - 1
                tab[byte] = op(tab[byte ^ low], chunk[i]) if i < len(chunk) else tab[byte ^ low]
            tables.append(tab)
        return tables

    def core(self, b_bits: int) -> int:
        """Element mask of the common intersection of the l-sets in b."""
        acc = (1 << self.n) - 1
        for tab in self._byte_and:
            acc &= tab[b_bits & 255]
            b_bits >>= 8
        return acc

    def partner_bits(self, b_bits: int) -> int:
        a = 0
        for j, conf in enumerate(self.conflict):
            if not b_bits & conf:
                a |= 1 << j
        return a

    def k_bits(self, pred) -> int:
        return self._bits(self.k_masks, pred)

    def l_bits(self, pred) -> int:
        return self._bits(self.l_masks, pred)

    def up_l(self, core: int) -> int:
        key = ("up_l", core)
        if key not in self._cache:
            self._cache[key] = self.l_bits(lambda m: m & core == core)
        return self._cache[key]

    def up_k(self, core: int) -> int:
        key = ("up_k", core)
        if key not in self._cache:
            self._cache[key] = self.k_bits(lambda m: m & core == core)
        return self._cache[key]

    def meet_k(self, core: int) -> int:
        key = ("meet_k", core)
        if key not in self._cache:
            self._cache[key] = self.k_bits(lambda m: m & core)
        return self._cache[key]

    def p_bits(self, s: int) -> int:
        return self.up_l((1 << s) - 1)

    @property
    def complement_tables(self):
        """Byte tables mapping an l-family to the k-family of complements (n = k+l)."""
        if "comp" not in self._cache:
            full = (1 << self.n) - 1
            index = mask_rank_index(self.n, self.k)
            images = [1 << index[full & ~m] for m in self.l_masks]
            self._cache["comp"] = self._byte_tables(images, lambda acc, x: acc | x, 0)
        return self._cache["comp"]

    def complement_bits(self, b_bits: int) -> int:
        acc = 0
        for tab in self.complement_tables:
            acc |= tab[b_bits & 255]
            b_bits >>= 8
        return acc

    def conflict_array(self) -> np.ndarray:
        return np.array(self.conflict, dtype=np.uint64)


@lru_cache(maxsize=64)
def pair_tables(n: int, k: int, l: int) -> PairTables:
    return PairTables(n, k, l)
