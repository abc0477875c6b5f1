"""Structural matching of extremal pairs against the five equality cases."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..bounds import TheoremParams, main_branches
from ..combinatorics import KSet
from ..families import Family
from .tables import PairTables, pair_tables

CASES = ("i", "ii", "iii", "iv", "v")


@dataclass(frozen=True)
class ExtremalClassification:
    """``case_label`` is the first matching case, ``labels`` all of them.

    ``witness_r_set`` is the core R found for the (i)/(ii) structures.
    """

    case_label: str
    labels: tuple[str, ...] = ()
    witness_r_set: Optional[KSet] = None

    def to_record(self) -> dict:
        return {"case": self.case_label, "labels": list(self.labels),
                "R": None if self.witness_r_set is None else list(self.witness_r_set.elements)}


NONE = ExtremalClassification("none", ())
_FIXED = {c: ExtremalClassification(c, (c,)) for c in ("iii", "iv", "v")}


def classify_bits(p: TheoremParams, a_bits: int, b_bits: int,
                  tables: Optional[PairTables] = None) -> ExtremalClassification:
    """Classify a pair given as lex-rank bitmaps."""
    n, k, l, r, c = p.n, p.k, p.l, p.r, p.c
    t = tables if tables is not None else pair_tables(n, k, l)
    lo, hi = p.window
    size_b = b_bits.bit_count()
    if n == k + l:
        if a_bits != t.full_k & ~t.complement_bits(b_bits):
            return NONE
        if c < 1 and size_b == lo:
            return _FIXED["iii"]
        if c == 1 and lo <= size_b <= hi:
            return _FIXED["iv"]
        if c > 1 and size_b == hi:
            return _FIXED["v"]
        return NONE
    if n < k + l or not b_bits:
        return NONE
    r_val, one_val = main_branches(p)
    core = t.core(b_bits)
    width = core.bit_count()
    labels = []
    if width == r and r_val >= one_val:
        if b_bits == t.up_l(core) and a_bits == t.meet_k(core):
            labels.append("i")
    if width == 1 and r_val <= one_val:
        if b_bits == t.up_l(core) and a_bits == t.up_k(core):
            labels.append("ii")
    if not labels:
        return NONE
    return ExtremalClassification(labels[0], tuple(labels), KSet.from_mask(n, core))


def classify_extremal(a: Family, b: Family, p: TheoremParams) -> ExtremalClassification:
    if (a.ground_n, a.set_size, b.ground_n, b.set_size) != (p.n, p.k, p.n, p.l):
        return NONE
    return classify_bits(p, a.rank_bits(), b.rank_bits())
