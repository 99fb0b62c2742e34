"""Balls, subset growth and conjugacy-class growth."""
import pytest

from growthcrit import fixtures
from growthcrit.enumeration import (BudgetExceeded, ball_growth, compare_generating_sets,
                                    conjugacy_class_growth, enumerate_ball, growth_of_subset,
                                    subgroup_conjugacy_containment)
from growthcrit.groups import MatrixGroup, commutes, conjugate
from growthcrit.subgroups import centralizer

from oracles import free_ball_brute, heis_ball_brute, lattice_ball


def test_free_b2_matches_brute_force(F2):
    assert enumerate_ball(F2, 2).size() == len(free_ball_brute("ab", 2)) == 17


def test_free_lengths_match_brute_force(F2):
    ball = enumerate_ball(F2, 4)
    for k in range(5):
        assert ball.size(k) == len(free_ball_brute("ab", k))
    # BFS length equals reduced word length in a free basis
    assert all(length == len(x.form) for x, length in ball.items())


def test_z2_ball_counts(Z2):
    ball = enumerate_ball(Z2, 6)
    for n in range(7):
        assert ball.size(n) == lattice_ball(2, n) == 2 * n * n + 2 * n + 1
    assert ball.size(2) == 13


def test_heisenberg_ball_matches_matrix_bfs(H3):
    ref = heis_ball_brute(5)
    ball = enumerate_ball(H3, 5)
    assert {x.form: length for x, length in ball.items()} == ref


def test_radius_zero_is_identity():
    for G in (fixtures.free(2), fixtures.heisenberg(), fixtures.free_product_fixture()):
        ball = enumerate_ball(G, 0)
        assert ball.counts == [1]
        assert ball.elements == [G.identity]


def test_free_ball_closed_form(F2):
    ball = enumerate_ball(F2, 8)
    assert [ball.size(n) for n in range(9)] == [2 * 3 ** n - 1 for n in range(9)]


def test_budget_exceeded_carries_partial(F2):
    with pytest.raises(BudgetExceeded) as info:
        enumerate_ball(F2, 6, budget=100)
    exc = info.value
    assert exc.completed_radius == 3
    assert exc.partial.size() == 53
    assert ball_growth(exc.partial).values == [1, 5, 17, 53]


def test_invalid_arguments(F2):
    with pytest.raises(ValueError):
        enumerate_ball(F2, -1)
    with pytest.raises(ValueError):
        enumerate_ball(F2, 2, budget=0)


def test_thread_count_does_not_change_ball(H3):
    base = enumerate_ball(H3, 7)
    for t in (2, 4, 8):
        other = enumerate_ball(H3, 7, threads=t)
        assert other.forms == base.forms and other.counts == base.counts


def test_ball_structural_invariants():
    for G in (fixtures.free(2), fixtures.heisenberg(), fixtures.free_times_z()):
        ball = enumerate_ball(G, 4)
        S = len(G.generators)
        assert ball.counts[0] == 1
        for n in range(4):
            assert ball.size(n + 1) <= ball.size(n) * S + ball.size(n)
        small = ball.elements[:ball.size(2)]
        for x in small:
            for y in small:
                assert ball.length_of(x * y) <= ball.length_of(x) + ball.length_of(y)


def test_subset_growth_examples(F2):
    ball = enumerate_ball(F2, 3)
    assert growth_of_subset(ball, lambda x: True).values == [ball.size(k) for k in range(4)]
    a, b = F2.parse_word("a"), F2.parse_word("b")
    brute = [x for x in ball.elements[:ball.size(2)] if x * a == a * x]
    assert growth_of_subset(ball, lambda x: commutes(x, a))[2] == len(brute) == 5
    C = centralizer(a)
    both = growth_of_subset(ball, lambda x: C.contains(x) and C.contains(conjugate(~b, x)))
    assert both[3] == 1


def test_subset_growth_monotone(F2):
    ball = enumerate_ball(F2, 4)
    a = F2.parse_word("a")
    p =lambda x: commutes(x, a)  # noqa: E731
    q = lambda x: len(x.form) % 2 == 0  # noqa: E731
    sp, sq = growth_of_subset(ball, p), growth_of_subset(ball, q)
    spq = growth_of_subset(ball, lambda x: p(x) and q(x))
    assert all(spq[n] <= min(sp[n], sq[n]) for n in range(5))
    assert all(sp[n] <= sp[n + 1] for n in range(4))


def test_conjugacy_class_free(F2):
    s = conjugacy_class_growth(F2, F2.parse_word("a"), 3)
    assert s.all_exact and s[3] == 3
    # brute force: conjugates by every t of length <= 3 landing in B_3
    ball = enumerate_ball(F2, 3)
    a = F2.parse_word("a")
    found = {conjugate(t, a) for t in ball.elements}
    assert len([x for x in found if len(x.form) <= 3]) == 3


def test_conjugacy_class_abelian(Z):
    s = conjugacy_class_growth(Z, Z.parse_word("t"), 6)
    assert s.values[1:] == [1] * 6


def test_conjugacy_class_heisenberg_vs_matrix_model(H3):
    # Cl(x) = {(1, 0, c)}: read the counts off the matrix-model ball
    ref = heis_ball_brute(9)
    s = conjugacy_class_growth(H3, H3.parse_word("x"), 9)
    for n in range(10):
        want = sum(1 for (a, b, c), L in ref.items() if (a, b) == (1, 0) and L <= n)
        assert s[n] == want
    assert s[9] > s[7] > s[5]


def test_lower_bounds_without_oracle():
    M = MatrixGroup([[[1, 1], [0, 1]], [[1, 0], [1, 1]]])
    g = M.generators[0]
    s2 = conjugacy_class_growth(M, g, 4, conj_budget=2)
    s4 = conjugacy_class_growth(M, g, 4, conj_budget=4)
    assert not s2.all_exact
    assert all(s2.exactness(n) == "lower_bound" for n in range(5))
    assert all(a <= b for a, b in zip(s2.values, s4.values))


def test_lower_bounds_below_exact(F2):
    # pretend the oracle is absent by computing conjugates directly
    ball = enumerate_ball(F2, 5)
    a = F2.parse_word("a")
    exact = conjugacy_class_growth(F2, a, 5)
    for m in range(4):
        found = {conjugate(t, a).form for t in ball.elements[:ball.size(m)]}
        for n in range(6):
            low = sum(1 for f in found if ball.length.get(f, 99) <= n)
            assert low <= exact[n]


def test_conjugated_subset_within_shifted_radius(F2):
    ball = enumerate_ball(F2, 7)
    a = F2.parse_word("a")
    A = [x for x in ball.elements[:ball.size(3)] if commutes(x, a)]
    for t in (F2.parse_word("b"), F2.parse_word("a b^-1")):
        tl = len(t.form)
        for x in A:
            assert ball.length_of(conjugate(t, x)) <= ball.length_of(x) + 2 * tl


def test_growth_csv(F2):
    text = ball_growth(enumerate_ball(F2, 2)).to_csv()
    assert text == "n,count,exactness\n0,1,exact\n1,5,exact\n2,17,exact\n"


def test_compare_generating_sets(F2, Z):
    same = compare_generating_sets(F2, ["a", "a^-1", "b", "b^-1"], ["a", "a^-1", "b", "b^-1"], 3)
    assert same.passed and same.details["C"] == 1
    r = compare_generating_sets(F2, ["a", "a^-1", "b", "b^-1"], ["a", "a^-1", "a b", "b^-1 a^-1"], 4)
    assert r.passed and r.details["C"] == 2
    r = compare_generating_sets(Z, ["t", "t^-1"], ["t t", "t^-1 t^-1", "t t t", "t^-1 t^-1 t^-1"], 6)
    assert r.passed and r.details["C"] == 3


def test_compare_generating_sets_not_generating(F2):
    r = compare_generating_sets(F2, ["a", "a^-1", "b", "b^-1"], ["a", "a^-1"], 3)
    assert r.status == "not-applicable"


def test_subgroup_conjugacy_containment(F2, Z2):
    r = subgroup_conjugacy_containment(F2, ["a", "a^-1", "b", "b^-1"], "a", 3)
    assert r.passed and r.details["M"] == 1
    r = subgroup_conjugacy_containment(F2, ["a a", "a^-1 a^-1", "b b", "b^-1 b^-1"], "a a", 2)
    assert r.passed and r.details["M"] == 2
    r = subgroup_conjugacy_containment(Z2, ["t1 t1", "t1^-1 t1^-1", "t2 t2", "t2^-1 t2^-1"], "t1 t1", 3)
    assert r.passed and r.details["lhs_count"] == r.details["rhs_count"] == 1
