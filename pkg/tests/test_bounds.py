from fractions import Fraction
from itertools import combinations

import pytest

from crossint.bounds import (
    ONE_BRANCH, R_BRANCH, TheoremParams, corollary_bound, ekr_bound, fk_bound,
    ft_bound, hilton_bound, hilton_report, hm_bound, hm_stability_bound,
    main_bound, predicted_cases, problem_bound, wz_bound,
)
from crossint.errors import ParameterError
from crossint.verification import max_intersecting_family, specialization_holds


def pascal(limit=70):
    rows = [[1]]
    for n in range(1, limit + 1):
        prev = rows[-1]
        rows.append([1] + [prev[i - 1] + prev[i] for i in range(1, n)] + [1])
    return rows


P = pascal()


def Cp(n, k):
    return P[n][k] if 0 <= k <= n else 0


@pytest.mark.parametrize("n,k,want", [(4, 2, 3), (2, 1, 1), (10, 3, 36)])
def test_ekr_examples(n, k, want):
    assert ekr_bound(n, k) == want


@pytest.mark.parametrize("n,k", [(4, 2), (5, 2), (6, 2), (6, 3)])
def test_ekr_against_enumeration(n, k):
    best, _ = max_intersecting_family(n, k)
    assert best == ekr_bound(n, k)


def test_hilton_examples():
    assert hilton_bound(4, 2, 2) == 6
    rep = hilton_report(4, 2, 2)
    assert rep.tie and set(rep.argmax_labels) == {"t<=n/k", "t>=n/k"}
    assert hilton_bound(6, 2, 2) == 15
    assert hilton_bound(6, 2, 4) == 20
    assert not hilton_report(6, 2, 4).tie


@pytest.mark.parametrize("n,k,want", [(4, 2, 6), (5, 2, 8), (6, 3, 20)])
def test_hm_examples(n, k, want):
    assert hm_bound(n, k) == want


def test_main_examples():
    rep = main_bound(TheoremParams(4, 2, 2, 2, 1))
    assert rep.value(R_BRANCH) == rep.value(ONE_BRANCH) == 6
    assert rep.tie and rep.predicted_cases == ("iv",)

    rep = main_bound(TheoremParams(6, 2, 3, 2, 1))
    assert rep.value(R_BRANCH) == 13 and rep.value(ONE_BRANCH) == 15
    assert rep.max_value == 15 and rep.predicted_cases == ("ii",)

    rep = main_bound(TheoremParams(7, 3, 3, 3, "1/10"))
    assert rep.value(R_BRANCH) == Fraction(311, 10)
    assert rep.value(ONE_BRANCH) == Fraction(33, 2)
    assert rep.max_value == Fraction(311, 10) and rep.predicted_cases == ("i",)
    rec = rep.to_record()
    assert rec["max"] == "311/10" and rec["1-branch"] == "33/2" and rec["c"] == "1/10"


def test_main_exact_tie_predicts_both():
    # (5,2,2,2,1): r-branch 10-3+1 = 8, 1-branch 4+4 = 8
    p = TheoremParams(5, 2, 2, 2, 1)
    assert predicted_cases(p) == ("i", "ii")
    assert main_bound(p).tie


@pytest.mark.parametrize("c,case", [("1/2", "iii"), (1, "iv"), (3, "v")])
def test_predicted_cases_at_n_equals_k_plus_l(c, case):
    assert predicted_cases(TheoremParams(6, 3, 3, 2, c)) == (case,)


@pytest.mark.parametrize("args", [
    (5, 3, 3, 1, 1),      # n < k+l
    (6, 2, 3, 4, 1),      # r > l
    (6, 2, 3, 2, 0),      # c = 0
    (6, 2, 3, 2, -1),
    (6, 2, 3, 0, 1),
])
def test_theorem_params_rejects(args):
    with pytest.raises(ParameterError):
        TheoremParams(*args)


def test_theorem_params_rejects_float():
    with pytest.raises((ParameterError, ValueError, TypeError)):
        TheoremParams(6, 2, 3, 2, 0.5)


def test_window():
    assert TheoremParams(6, 2, 3, 2, 1).window == (4, 10)
    assert TheoremParams(7, 3, 3, 3, 1).window == (1, 15)


def test_corollary_examples():
    assert corollary_bound(6, 2, 3).max_value == 15
    rep = corollary_bound(4, 2, 2)
    assert rep.max_value == 6 and rep.tie
    rep = corollary_bound(10, 2, 2)
    assert rep.value(R_BRANCH) == 18 and rep.value(ONE_BRANCH) == 18 and rep.max_value == 18


@pytest.mark.parametrize("n", range(4, 16))
def test_specialization_chain(n):
    for k in range(2, n // 2 + 1):
        for t in range(2, 6):
            assert specialization_holds(n, k, t)


def test_ft_examples():
    assert ft_bound(5, 3, 2) == 10
    assert ft_bound(6, 3, 2) == 17
    assert ft_bound(4, 2, 2) == hm_bound(4, 2) == 6
    with pytest.raises(ParameterError):
        ft_bound(6, 2, 3)


@pytest.mark.parametrize("n,k,want", [(5, 2, 3), (7, 3, 13), (6, 2, 3)])
def test_stability_examples(n, k, want):
    assert hm_stability_bound(n, k) == want


@pytest.mark.parametrize("n,k", [(5, 2), (6, 2)])
def test_stability_against_enumeration(n, k):
    best, _ = max_intersecting_family(n, k, require_empty_core=True)
    assert best == hm_stability_bound(n, k)


def test_fk_examples():
    assert fk_bound(5, 2, 1) == 8 == hm_bound(5, 2)
    assert fk_bound(7, 3, 2) == 14
    assert fk_bound(6, 2, 1) == 10 == hm_bound(6, 2)
    with pytest.raises(ParameterError):
        fk_bound(4, 3, 2)   # n > 2k - q fails


def test_fk_equals_hm():
    for n in range(2, 31):
        for k in range(2, n // 2 + 1):
            if n > 2 * k - 1:
                assert fk_bound(n, k, 1) == hm_bound(n, k)


def naive_single_set_value(n, k, l, q):
    """One k-set plus every l-set meeting it in >= q points (counted directly)."""
    a = set(range(1, k + 1))
    return 1 + sum(1 for b in combinations(range(1, n + 1), l) if len(a & set(b)) >= q)


def test_wz_examples():
    assert wz_bound(7, 3, 3, 2) == 14 == fk_bound(7, 3, 2)
    assert wz_bound(6, 2, 3, 1) == 17
    with pytest.raises(ParameterError, match="C\\(n,k\\) <= C\\(n,l\\)"):
        wz_bound(6, 3, 2, 1)


@pytest.mark.parametrize("n,k,l,q", [(6, 2, 3, 1), (7, 2, 3, 1), (7, 3, 4, 2),
                                     (8, 3, 4, 2), (9, 3, 4, 1), (7, 3, 3, 2)])
def test_wz_equals_single_set_construction(n, k, l, q):
    assert wz_bound(n, k, l, q) == naive_single_set_value(n, k, l, q)


def test_wz_reduces_to_fk():
    for n in range(4, 25):
        for k in range(2, n):
            for q in range(1, k):
                try:
                    w = wz_bound(n, k, k, q)
                except ParameterError:
                    continue
                assert w == fk_bound(n, k, q)


@pytest.mark.parametrize("args,msg", [
    ((3, 2, 2, 1), "n >= 4"),
    ((6, 1, 3, 1), "k, l >= 2"),
    ((7, 3, 3, 3), "q < min"),
    ((4, 3, 3, 2), "n > k\\+l-q"),
    ((6, 3, 3, 1), "\\(n, q\\) != \\(k\\+l, 1\\)"),
])
def test_wz_preconditions_reported_distinctly(args, msg):
    with pytest.raises(ParameterError, match=msg):
        wz_bound(*args)


def test_problem_examples():
    rep = problem_bound(1, 6, (2, 2))
    assert rep.max_value == 10
    assert rep.max_value == corollary_bound(6, 2, 2).max_value == hm_bound(6, 2)
    assert problem_bound(2, 5, (2, 2), 1).max_value == 8
    assert problem_bound(2, 5, (2, 2), 1).value("star-branch") == 8


def test_problem_errors():
    with pytest.raises(ParameterError):
        problem_bound(1, 6, (2, 3))      # not non-increasing
    with pytest.raises(ParameterError):
        problem_bound(2, 6, (3, 2), 1)   # unequal sizes
    with pytest.raises(ParameterError):
        problem_bound(3, 6, (3, 2), 2)   # k_t > q fails
    with pytest.raises(ParameterError):
        problem_bound(1, 3, (2, 2))


def test_problem3_at_q1_is_problem1():
    for n in range(4, 12):
        for k1 in range(2, n):
            for k2 in range(2, k1 + 1):
                if n < k1 + k2:
                    continue
                for extra in ([], [k2], [k2, k2]):
                    sizes = (k1, k2, *extra)
                    a = problem_bound(1, n, sizes)
                    b = problem_bound(3, n, sizes, 1)
                    assert a.branch_values == b.branch_values


def test_problem2_is_problem3_with_equal_sizes():
    for n in range(5, 12):
        for k in range(2, 5):
            for q in range(1, k):
                if n <= 2 * k - q:
                    continue
                for t in (2, 3):
                    sizes = (k,) * t
                    assert (problem_bound(2, n, sizes, q).branch_values
                            == problem_bound(3, n, sizes, q).branch_values)


def test_problem2_q1_t2_matches_hm():
    for n in range(5, 15):
        for k in range(2, n // 2 + 1):
            assert problem_bound(2, n, (k, k), 1).max_value == hm_bound(n, k) \
                or n == 2 * k


def raw_first_branch(n, sizes, q):
    k1, kt = sizes[0], sizes[-1]
    return (Cp(n, k1) - sum(Cp(kt, i) * Cp(n - kt, k1 - i) for i in range(q))
            + sum(Cp(n - kt, k - kt) for k in sizes[1:]))


def raw_second_branch(n, sizes, q):
    return sum(Cp(n - q, k - q) for k in sizes)


def test_q_equals_kt_identity_on_raw_formula():
    # outside the valid range (k_t > q) the two branches coincide at q = k_t
    for n in range(4, 14):
        for k1 in range(1, n):
            for kt in range(1, k1 + 1):
                sizes = (k1, kt)
                assert raw_first_branch(n, sizes, kt) == raw_second_branch(n, sizes, kt)


def test_problem_branches_match_raw_formula():
    for n in range(5, 12):
        for sizes in [(2, 2), (3, 2), (3, 3), (3, 2, 2), (4, 3, 3)]:
            for q in range(1, sizes[-1]):
                if n <= sizes[0] + sizes[1] - q:
                    continue
                rep = problem_bound(3, n, sizes, q)
                assert rep.value("construction-branch") == raw_first_branch(n, sizes, q)
                assert rep.value("star-branch") == raw_second_branch(n, sizes, q)
