"""Closed-form bounds for (cross-)intersecting families, evaluated exactly.

Every evaluator returns integers or Fractions; nothing is rounded.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .combinatorics import binomial as C, format_rational, parse_rational
from .errors import ParameterError

R_BRANCH = "r-branch"
ONE_BRANCH = "1-branch"


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ParameterError(message)


@dataclass(frozen=True)
class TheoremParams:
    """Parameters (n, k, l, r, c) of the weighted non-empty cross-intersecting bound."""

    n: int
    k: int
    l: int
    r: int
    c: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "c", parse_rational(self.c))
        _require(min(self.n, self.k, self.l, self.r) >= 1,
                 "n, k, l, r must be positive integers")
        _require(self.n >= self.k + self.l,
                 f"n >= k+l violated: {self.n} < {self.k}+{self.l}")
        _require(self.l >= self.r, f"l >= r violated: {self.l} < {self.r}")
        _require(self.c > 0, f"c > 0 violated: c={self.c}")

    @property
    def window(self) -> tuple[int, int]:
        """Admissible |B| range [C(n-r, l-r), C(n-1, l-1)]."""
        return C(self.n - self.r, self.l - self.r), C(self.n - 1, self.l - 1)

    def as_record(self) -> dict:
        return {"n": self.n, "k": self.k, "l": self.l, "r": self.r,
                "c": format_rational(self.c)}


@dataclass(frozen=True)
class BoundReport:
    branch_values: tuple[tuple[str, Fraction], ...]
    max_value: Fraction
    argmax_labels: tuple[str, ...]
    tie: bool
    predicted_cases: tuple[str, ...] = ()
    theorem: str = ""
    params: dict = field(default_factory=dict, compare=False)

    def value(self, label: str) -> Fraction:
        return dict(self.branch_values)[label]

    def to_record(self) -> dict:
        rec = {"theorem": self.theorem}
        rec.update(self.params)
        for label, v in self.branch_values:
            rec[label] = format_rational(v)
        rec["max"] = format_rational(self.max_value)
        rec["argmax"] = "|".join(self.argmax_labels)
        rec["tie"] = self.tie
        rec["predicted_cases"] = "|".join(self.predicted_cases)
        return rec


def _report(branches: Sequence[tuple[str, object]], theorem: str, params: dict,
            cases: tuple[str, ...] = ()) -> BoundReport:
    vals = tuple((label, Fraction(v)) for label, v in branches)
    best = max(v for _, v in vals)
    arg = tuple(label for label, v in vals if v == best)
    return BoundReport(vals, best, arg, len(arg) > 1, cases, theorem, dict(params))


def ekr_bound(n: int, k: int) -> int:
    _require(k >= 1 and n >= 2 * k, f"n >= 2k violated: n={n}, k={k}")
    return C(n - 1, k - 1)


def hilton_report(n: int, k: int, t: int) -> BoundReport:
    _require(k >= 1 and n >= 2 * k, f"n >= 2k violated: n={n}, k={k}")
    _require(t >= 2, f"t >= 2 violated: t={t}")
    branches = []
    if t * k <= n:
        branches.append(("t<=n/k", C(n, k)))
    if t * k >= n:
        branches.append(("t>=n/k", t * C(n - 1, k - 1)))
    return _report(branches, "hilton", {"n": n, "k": k, "t": t})


def hilton_bound(n: int, k: int, t: int) -> int:
    return int(hilton_report(n, k, t).max_value)


def hm_bound(n: int, k: int) -> int:
    _require(k >= 1 and n >= 2 * k, f"n >= 2k violated: n={n}, k={k}")
    return C(n, k) - C(n - k, k) + 1


def main_branches(p: TheoremParams) -> tuple[Fraction, Fraction]:
    n, k, l, r, c = p.n, p.k, p.l, p.r, p.c
    r_val = C(n, k) - C(n - r, k) + c * C(n - r, l - r)
    one_val = C(n - 1, k - 1) + c * C(n - 1, l - 1)
    return Fraction(r_val), Fraction(one_val)


def predicted_cases(p: TheoremParams) -> tuple[str, ...]:
    """Extremal cases admissible for p; both (i) and (ii) at an exact tie."""
    if p.n == p.k + p.l:
        if p.c < 1:
            return ("iii",)
        return ("iv",) if p.c == 1 else ("v",)
    r_val, one_val = main_branches(p)
    if r_val > one_val:
        return ("i",)
    if r_val < one_val:
        return ("ii",)
    return ("i", "ii")


def main_bound(p: TheoremParams) -> BoundReport:
    r_val, one_val = main_branches(p)
    return _report([(R_BRANCH, r_val), (ONE_BRANCH, one_val)], "main",
                   p.as_record(), predicted_cases(p))


def corollary_bound(n: int, k: int, t: int) -> BoundReport:
    _require(k >= 1 and n >= 2 * k, f"n >= 2k violated: n={n}, k={k}")
    _require(t >= 2, f"t >= 2 violated: t={t}")
    return _report([(R_BRANCH, C(n, k) - C(n - k, k) + t - 1),
                    (ONE_BRANCH, t * C(n - 1, k - 1))],
                   "corollary", {"n": n, "k": k, "t": t})


def ft_bound(n: int, k: int, l: int) -> int:
    _require(l >= 1 and n >= k + l, f"n >= k+l violated: n={n}, k={k}, l={l}")
    _require(k >= l, f"k >= l violated: k={k}, l={l}")
    return C(n, k) - C(n - l, k) + 1


def hm_stability_bound(n: int, k: int) -> int:
    _require(k >= 1 and n > 2 * k, f"n > 2k violated: n={n}, k={k}")
    return C(n - 1, k - 1) - C(n - k - 1, k - 1) + 1


def _few_common(k: int, n: int, size: int, q: int) -> int:
    """Number of size-sets sharing fewer than q elements with a fixed k-set."""
    return sum(C(k, i) * C(n - k, size - i) for i in range(q))


def fk_bound(n: int, k: int, q: int) -> int:
    _require(q >= 1, f"q >= 1 violated: q={q}")
    _require(k > q, f"k > q violated: k={k}, q={q}")
    _require(n > 2 * k - q, f"n > 2k-q violated: n={n}, k={k}, q={q}")
    return C(n, k) - _few_common(k, n, k, q) + 1


def wz_bound(n: int, k: int, l: int, q: int) -> int:
    """Largest |A| + |B| for non-empty cross-q-intersecting A (k-sets), B (l-sets).

    The count is taken in the larger universe C([n], l): one k-set in A plus
    every l-set meeting it in at least q points.
    """
    _require(n >= 4, f"n >= 4 violated: n={n}")
    _require(k >= 2 and l >= 2, f"k, l >= 2 violated: k={k}, l={l}")
    _require(q >= 1, f"q >= 1 violated: q={q}")
    _require(q < min(k, l), f"q < min(k, l) violated: q={q}, k={k}, l={l}")
    _require(n > k + l - q, f"n > k+l-q violated: n={n}, k={k}, l={l}, q={q}")
    _require((n, q) != (k + l, 1), f"(n, q) != (k+l, 1) violated: n={n}, q={q}")
    _require(C(n, k) <= C(n, l), f"C(n,k) <= C(n,l) violated: {C(n, k)} > {C(n, l)}")
    return C(n, l) - _few_common(k, n, l, q) + 1


# --- open problems --------------------------------------------------------

def _problem3_branches(n: int, sizes: Sequence[int], q: int) -> tuple[int, int]:
    k1, kt = sizes[0], sizes[-1]
    first = (C(n, k1) - _few_common(kt, n, k1, q)
             + sum(C(n - kt, ki - kt) for ki in sizes[1:]))
    second = sum(C(n - q, ki - q) for ki in sizes)
    return first, second


def validate_problem(problem: int, n: int, sizes: Sequence[int], q: int) -> None:
    sizes = list(sizes)
    t = len(sizes)
    _require(problem in (1, 2, 3), f"unknown problem {problem}")
    _require(t >= 2, f"t >= 2 violated: t={t}")
    _require(all(s >= 1 for s in sizes), "sizes must be positive")
    _require(sizes == sorted(sizes, reverse=True),
             f"k_1 >= ... >= k_t violated: {sizes}")
    if problem == 1:
        _require(q == 1, f"problem 1 has q = 1, got q={q}")
        _require(n >= sizes[0] + sizes[1], f"n >= k_1+k_2 violated: n={n}, sizes={sizes}")
    elif problem == 2:
        k = sizes[0]
        _require(len(set(sizes)) == 1, f"problem 2 needs equal sizes, got {sizes}")
        _require(k > q >= 1, f"k > q >= 1 violated: k={k}, q={q}")
        _require(n > 2 * k - q, f"n > 2k-q violated: n={n}, k={k}, q={q}")
    else:
        _require(sizes[-1] > q >= 1, f"k_t > q >= 1 violated: k_t={sizes[-1]}, q={q}")
        _require(n > sizes[0] + sizes[1] - q,
                 f"n > k_1+k_2-q violated: n={n}, sizes={sizes}, q={q}")


def problem_bound(problem: int, n: int, sizes: Sequence[int], q: int = 1) -> BoundReport:
    """Both branches of the conjectured maximum of a sum of t non-empty
    cross-q-intersecting families (q = 1 and/or equal sizes are special cases)."""
    validate_problem(problem, n, sizes, q)
    first, second = _problem3_branches(n, list(sizes), q)
    return _report([("construction-branch", first), ("star-branch", second)],
                   f"problem{problem}",
                   {"n": n, "t": len(sizes), "sizes": ",".join(map(str, sizes)), "q": q})
