from fractions import Fraction
from itertools import combinations

import pytest

from crossint.bounds import TheoremParams, fk_bound, hm_bound, main_bound
from crossint.errors import BudgetExceeded, ParameterError
from crossint.families import Family, full_family, p_family, r_family, star
from crossint.verification import (
    BipartiteTestInstance, brute_force_max, canonical_values, classify_extremal,
    endpoint_claim_holds, l_initial_scan, scan_inequalities, verify_bipartite_lemma,
    verify_corollary, verify_kk_preservation, verify_main_theorem,
    verify_nonempty_bound, verify_proposition_fm,
)


def naive_max(n, k, l, c, lo, hi, nonempty=False):
    """Independent oracle: every l-family B, A = all k-sets meeting each member."""
    ks = [frozenset(x) for x in combinations(range(1, n + 1), k)]
    ls = [frozenset(x) for x in combinations(range(1, n + 1), l)]
    best = None
    for bits in range(1 << len(ls)):
        b = [ls[i] for i in range(len(ls)) if bits >> i & 1]
        if not lo <= len(b) <= hi:
            continue
        a = [x for x in ks if all(x & y for y in b)]
        if nonempty and not a:
            continue
        v = len(a) + c * len(b)
        best = v if best is None or v > best else best
    return best


@pytest.mark.parametrize("n,k,l,r,c", [
    (4, 2, 2, 2, 1), (5, 2, 2, 2, 1), (5, 2, 2, 1, Fraction(1, 2)),
    (5, 2, 2, 2, 10), (4, 2, 2, 1, 2), (5, 3, 2, 2, Fraction(1, 10)),
])
def test_brute_force_matches_naive_oracle(n, k, l, r, c):
    p = TheoremParams(n, k, l, r, c)
    res = brute_force_max(p)
    assert res.observed_max == naive_max(n, k, l, Fraction(c), *p.window)


def test_brute_force_examples():
    res = brute_force_max(TheoremParams(4, 2, 2, 2, 1))
    assert res.observed_max == 6 and res.matched
    sizes = {len(b) for _, b in res.witnesses}
    assert sizes == {1, 2, 3}
    for a, b in res.witnesses:
        assert a == full_family(4, 2) - b.complements()

    assert brute_force_max(TheoremParams(5, 2, 2, 2, 1)).observed_max == 8 == hm_bound(5, 2)

    res = brute_force_max(TheoremParams(6, 2, 3, 2, 1))
    assert res.observed_max == 15 and res.matched
    for a, b in res.witnesses:
        core = set.intersection(*(set(m.elements) for m in b))
        assert len(core) == 1
        x = core.pop()
        assert a == star(6, 2, x) and b == star(6, 3, x)


def test_brute_force_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_max(TheoremParams(8, 3, 3, 2, 1))
    with pytest.raises(BudgetExceeded):
        brute_force_max(TheoremParams(6, 2, 3, 2, 1), max_bits=10)


def test_brute_force_worker_independence():
    from crossint.verification import engines
    p = TheoremParams(5, 2, 3, 2, 1)
    engines._PROFILES.clear()
    one = brute_force_max(p, workers=1)
    engines._PROFILES.clear()
    two = brute_force_max(p, workers=2)
    assert one.to_record(timing=False) == two.to_record(timing=False)


def test_nonempty_hm_examples():
    assert verify_nonempty_bound(4, 2, 2).observed_max == 6
    assert verify_nonempty_bound(5, 2, 2).observed_max == 8
    res = verify_nonempty_bound(5, 3, 2)
    assert res.observed_max == naive_max(5, 3, 2, 1, 1, 10, nonempty=True) == 10


def test_l_initial_scan_examples():
    res = l_initial_scan(TheoremParams(6, 2, 3, 2, 1))
    assert res.observed_max == 15 and res.b_bits == [(1 << 10) - 1]
    assert res.minimal_s_per_witness == [1]
    res = l_initial_scan(TheoremParams(7, 3, 3, 3, "1/10"))
    assert res.observed_max == Fraction(311, 10) and res.b_bits == [1]
    assert res.minimal_s_per_witness == [3]
    res = l_initial_scan(TheoremParams(4, 2, 2, 2, 1))
    assert res.observed_max == 6 and res.b_bits == [1, 3, 7]


@pytest.mark.parametrize("p", [TheoremParams(7, 3, 3, 2, 1), TheoremParams(8, 2, 4, 3, 2)])
def test_scan_trace_partner_size_monotone(p):
    trace = l_initial_scan(p).trace
    a_sizes = [a for _, a, _ in trace]
    assert all(x >= y for x, y in zip(a_sizes, a_sizes[1:]))
    s_vals = [s for _, _, s in trace]
    assert all(x >= y for x, y in zip(s_vals, s_vals[1:]))


@pytest.mark.parametrize("args,cases", [
    ((4, 2, 2, 2, 1), {"iv"}),
    ((6, 2, 3, 2, 1), {"ii"}),
    ((6, 2, 3, 2, 10), {"ii"}),
    ((5, 2, 2, 2, 1), {"i", "ii", "i+ii"}),
    ((5, 2, 3, 3, "1/2"), {"iii"}),
    ((5, 2, 3, 1, 3), {"v"}),
])
def test_verify_main_examples(args, cases):
    v = verify_main_theorem(TheoremParams(*args), mode="both")
    assert v.ok, v.falsifications
    assert set(v.case_counts()) <= cases
    assert v.results["brute"].observed_max == v.results["scan"].observed_max


def test_verify_main_reports_falsification_instead_of_raising(monkeypatch):
    from crossint.verification import checks
    from crossint.bounds import BoundReport
    real = checks.main_bound

    def inflated(p):
        rep = real(p)
        return BoundReport(rep.branch_values, rep.max_value + 1, rep.argmax_labels,
                           rep.tie, rep.predicted_cases, rep.theorem, rep.params)
    monkeypatch.setattr(checks, "main_bound", inflated)
    v = verify_main_theorem(TheoremParams(5, 2, 2, 2, 1), mode="scan")
    assert not v.ok and "not attained" in v.falsifications[0]


def test_classify_examples():
    p = TheoremParams(6, 2, 3, 2, Fraction(1, 10))
    assert main_bound(p).predicted_cases == ("i",)
    cl = classify_extremal(r_family(6, 2, 2), p_family(6, 3, 2), p)
    assert cl.case_label == "i" and cl.witness_r_set.elements == (1, 2)

    cl = classify_extremal(star(6, 2, 1), star(6, 3, 1), TheoremParams(6, 2, 3, 2, 1))
    assert cl.case_label == "ii"
    cl = classify_extremal(star(6, 2, 4), star(6, 3, 4), TheoremParams(6, 2, 3, 2, 1))
    assert cl.case_label == "ii" and cl.witness_r_set.elements == (4,)

    b = Family(4, 2, [(1, 2), (1, 3)])
    a = full_family(4, 2) - Family(4, 2, [(3, 4), (2, 4)])
    assert classify_extremal(a, b, TheoremParams(4, 2, 2, 2, 1)).case_label == "iv"


def test_classify_none():
    p = TheoremParams(6, 2, 3, 2, 1)
    assert classify_extremal(r_family(6, 2, 2), p_family(6, 3, 2), p).case_label == "none"
    b = Family(4, 2, [(1, 2), (1, 3)])
    a = full_family(4, 2) - Family(4, 2, [(3, 4), (2, 4)])
    # c < 1 demands |b| = C(n-r, l-r) = 1
    assert classify_extremal(a, b, TheoremParams(4, 2, 2, 2, "1/2")).case_label == "none"
    assert classify_extremal(a - Family(4, 2, [(1, 2)]), b,
                             TheoremParams(4, 2, 2, 2, 1)).case_label == "none"


def test_endpoint_claim():
    for n in range(4, 16):
        for l in range(1, n):
            for k in range(1, n - l + 1):
                for r in range(1, l + 1):
                    for c in (Fraction(1, 10), Fraction(1, 2), Fraction(1), Fraction(2),
                              Fraction(10)):
                        p = TheoremParams(n, k, l, r, c)
                        assert endpoint_claim_holds(p), p
                        assert max(canonical_values(p)) == main_bound(p).max_value


def test_kk_preservation():
    assert verify_kk_preservation(6, 2, 3, 200, seed=1).ok
    assert verify_kk_preservation(4, 2, 2, 100, seed=2).ok
    with pytest.raises(ParameterError):
        verify_kk_preservation(4, 3, 2, 10)


def test_fm_examples():
    res = verify_proposition_fm(6, 2, 3, 2)
    assert res.ok and res.families_checked == 4845
    assert res.min_shadow == 6 and len(res.minimizers) == 15
    res = verify_proposition_fm(6, 2, 3, 3)
    assert res.ok and res.min_shadow == 3 and len(res.minimizers) == 20


def test_fm_budget():
    with pytest.raises(BudgetExceeded):
        verify_proposition_fm(7, 2, 3, 1)
    with pytest.raises(ParameterError):
        verify_proposition_fm(5, 2, 3, 2)


def test_bipartite_examples():
    res = verify_bipartite_lemma(6, 2, 3, 2, 1)
    assert len(res.instance.x_side) == 4 and len(res.instance.y_side) == 6
    assert res.ok and res.connected and res.biregular
    assert res.best == 6
    res = verify_bipartite_lemma(5, 2, 2, 2, 1)
    assert res.ok and res.connected
    # s = l + 2 makes Y the (-1)-sets: empty side
    res = verify_bipartite_lemma(6, 2, 2, 4, 1)
    assert len(res.instance.y_side) == 0 and res.best == len(res.instance.x_side)
    assert res.ok


def test_bipartite_graph_structure():
    inst = BipartiteTestInstance.build(7, 3, 3, 2)
    g = inst.graph()
    assert g.number_of_nodes() == len(inst.x_side) + len(inst.y_side)
    assert inst.is_biregular() and inst.is_connected()


def test_bipartite_budget():
    with pytest.raises(BudgetExceeded):
        verify_bipartite_lemma(10, 3, 4, 2, 1)


def test_corollary_examples():
    assert verify_corollary(4, 2, 2, "exhaustive").observed == 6
    for n, k, t in [(4, 2, 2), (6, 2, 3), (10, 2, 2)]:
        assert verify_corollary(n, k, t, "construction").ok
    assert verify_corollary(10, 2, 2).observed == 18
    with pytest.raises(BudgetExceeded):
        verify_corollary(7, 2, 2, "exhaustive")


def test_inequalities():
    rep = scan_inequalities(20)
    assert rep.ok
    assert (5, 3, 2) in rep.equality_12
    with pytest.raises(ParameterError):
        scan_inequalities(61)
