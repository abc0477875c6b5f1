"""Exact arithmetic and the lexicographic coordinate system for k-subsets of [n]."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .errors import GroundMismatch, ParameterError

LESS, EQUAL, GREATER = -1, 0, 1


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, an integer, or a Fraction into a Fraction.

    Floats are rejected: ties between bound branches must be exact.
    """
    if isinstance(value, float):
        raise ParameterError("floats are not accepted; pass 'p/q'")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    text = str(value).strip()
    if "." in text or "e" in text.lower():
        raise ParameterError(f"not an exact fraction: {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"not an exact fraction: {text!r}") from exc


def format_rational(x) -> str:
    """Render as ``"p/q"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def elements_to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << (e - 1)
    return mask


def mask_to_elements(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


@dataclass(frozen=True, order=False)
class KSet:
    """A k-subset of [ground_n], held as its sorted elements.

    ``mask`` is derived: bit ``e-1`` is set iff ``e`` is an element.
    """

    ground_n: int
    elements: tuple[int, ...]
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.ground_n < 1:
            raise ParameterError(f"ground_n must be positive, got {self.ground_n}")
        elems = tuple(self.elements)
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise ParameterError(f"elements must be strictly increasing: {elems}")
        if elems and (elems[0] < 1 or elems[-1] > self.ground_n):
            raise ParameterError(f"elements must lie in [1, {self.ground_n}]: {elems}")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "mask", elements_to_mask(elems))

    @classmethod
    def of(cls, ground_n: int, elements: Iterable[int]) -> "KSet":
        return cls(ground_n, tuple(sorted(elements)))

    @classmethod
    def from_mask(cls, ground_n: int, mask: int) -> "KSet":
        return cls(ground_n, mask_to_elements(mask))

    @property
    def size(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e):
        return e in self.elements

    def __lt__(self, other: "KSet") -> bool:
        return lex_compare(self, other) == LESS

    def complement(self) -> "KSet":
        full = (1 << self.ground_n) - 1
        return KSet.from_mask(self.ground_n, full & ~self.mask)

    def __str__(self):
        return "{" + ",".join(map(str, self.elements)) + "}"


def _check_compatible(a: KSet, b: KSet) -> None:
    if a.ground_n != b.ground_n:
        raise GroundMismatch(f"ground sets differ: n={a.ground_n} vs n={b.ground_n}")
    if a.size != b.size:
        raise GroundMismatch(f"set sizes differ: {a.size} vs {b.size}")


def lex_compare(a: KSet, b: KSet) -> int:
    """Compare under A < B iff min(A minus B) < min(B minus A)."""
    _check_compatible(a, b)
    only_a = a.mask & ~b.mask
    only_b = b.mask & ~a.mask
    if not only_a:
        return EQUAL
    # lowest set bit is the minimum element
    low_a = only_a & -only_a
    low_b = only_b & -only_b
    return LESS if low_a < low_b else GREATER


def lex_rank(a: KSet) -> int:
    """Number of same-size subsets of [n] preceding ``a`` in lex order."""
    n, k = a.ground_n, a.size
    total = binomial(n, k)
    # sets at or after a are counted by choosing a suffix past each element
    tail = sum(binomial(n - e, k - i) for i, e in enumerate(a.elements))
    return total - 1 - tail


def lex_unrank(n: int, k: int, rank: int) -> KSet:
    if n < 1 or k < 0 or k > n:
        raise ParameterError(f"need 0 <= k <= n, n >= 1; got n={n}, k={k}")
    total = binomial(n, k)
    if not 0 <= rank < total:
        raise ParameterError(f"rank {rank} out of range [0, {total})")
    elems = []
    e = 1
    r = rank
    for i in range(k):
        # sets whose i-th element is e: choose remaining k-i-1 from (e, n]
        while True:
            block = binomial(n - e, k - i - 1)
            if r < block:
                break
            r -= block
            e += 1
        elems.append(e)
        e += 1
    return KSet(n, tuple(elems))


@lru_cache(maxsize=256)
def ksets_masks(n: int, k: int) -> tuple[int, ...]:
    """Element masks of every k-subset of [n], in lex order."""
    return tuple(elements_to_mask(c) for c in combinations(range(1, n + 1), k))


@lru_cache(maxsize=256)
def mask_rank_index(n: int, k: int) -> dict[int, int]:
    return {m: i for i, m in enumerate(ksets_masks(n, k))}


def all_ksets(n: int, k: int) -> list[KSet]:
    return [KSet(n, c) for c in combinations(range(1, n + 1), k)]
