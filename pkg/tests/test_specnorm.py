"""Group-algebra arithmetic and bounds on the regular representation norm."""
import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthcrit import fixtures
from growthcrit.enumeration import enumerate_ball
from growthcrit.specnorm import (GroupAlgebraElement, adjoint, analytic_bound, compression_bounds,
                                 convolve, moment_sequence, opnorm_lower, rho_profile, rho_upper)


def z_elem(Z, coeffs: dict):
    """f on Z from {exponent: coefficient}."""
    t = Z.parse_word("t")
    return GroupAlgebraElement.from_elements(Z, [(t ** k, Fraction(c)) for k, c in coeffs.items()])


def z_coeffs(f) -> dict:
    return {x.form[0]: c for x, c in f.items()}


def fourier_norm(coeffs: dict) -> float:
    """sup over the circle of |sum c_k e^{ik theta}|: the norm of lambda(f) on Z."""
    theta = np.linspace(0, 2 * np.pi, 200_001)
    vals = sum(float(c) * np.exp(1j * k * theta) for k, c in coeffs.items())
    return float(np.max(np.abs(vals)))


def test_delta_identity_is_unit(F2):
    f = GroupAlgebraElement.from_elements(F2, [(F2.parse_word("a b"), 2), (F2.parse_word("b"), -1)])
    e = GroupAlgebraElement.delta(F2.identity)
    assert convolve(e, f) == f and convolve(f, e) == f


def test_square_of_symmetric_generator(F2):
    a = F2.parse_word("a")
    f = GroupAlgebraElement.indicator(F2, [a, ~a])
    sq = convolve(f, f)
    want = GroupAlgebraElement.from_elements(F2, [(a ** 2, 1), (F2.identity, 2), (a ** -2, 1)])
    assert sq == want


def test_ball_indicator_l2(F2):
    f = GroupAlgebraElement.indicator(F2, enumerate_ball(F2, 1).elements)
    assert f.l2norm_sq() == 5 and math.isclose(f.l2norm(), math.sqrt(5))
    assert f.l1norm() == 5


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=5),
       st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=5))
def test_convolution_on_z_is_polynomial_product(p, q):
    Z = fixtures.integers(1)
    f, g = z_elem(Z, p), z_elem(Z, q)
    want: dict = {}
    for i, a in p.items():
        for j, b in q.items():
            want[i + j] = want.get(i + j, 0) + a * b
    want = {k: v for k, v in want.items() if v}
    assert z_coeffs(convolve(f, g)) == want
    # Young: ||f*g||_2 <= ||f||_1 ||g||_2
    assert convolve(f, g).l2norm_sq() <= f.l1norm() ** 2 * g.l2norm_sq()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["a", "b", "a^-1", "b a", "a b^-1 a", ""]),
                          st.integers(-3, 3)), max_size=5))
def test_adjoint_involutive_and_reverses(items):
    F = fixtures.free(2)
    f = GroupAlgebraElement.from_elements(F, [(F.parse_word(w), c) for w, c in items])
    assert adjoint(adjoint(f)) == f
    for x, c in f.items():
        assert adjoint(f)[~x] == c
    g = GroupAlgebraElement.from_elements(F, [(F.parse_word("b"), 1), (F.parse_word("a"), 2)])
    assert adjoint(convolve(f, g)) == convolve(adjoint(g), adjoint(f))
    assert all(c != 0 for _, c in f.items())


def test_support_radius_adds(F2):
    f = GroupAlgebraElement.indicator(F2, enumerate_ball(F2, 2).elements)
    g = GroupAlgebraElement.indicator(F2, enumerate_ball(F2, 1).elements)
    assert f.support_radius() == 2
    assert convolve(f, g).support_radius() == 3


def test_moments_central_binomial(Z):
    f = z_elem(Z, {1: 1, -1: 1})
    ms, notes = moment_sequence(f, 10)
    assert not notes
    assert ms == [comb(2 * j, j) for j in range(1, 11)]


def test_moment_bound_delta(F2):
    f = GroupAlgebraElement.delta(F2.parse_word("a b"))
    nb = opnorm_lower(f, "moment", k=4)
    assert 1 - 1e-9 < nb.value <= 1.0


def test_moment_k100_on_z(Z):
    f = z_elem(Z, {1: 1, -1: 1})
    nb = opnorm_lower(f, "moment", k=100)
    assert 1.97 <= nb.value < 2.0


def test_moment_sequence_log_convex_random():
    rng = np.random.default_rng(5)
    for G in (fixtures.integers(2), fixtures.free(2), fixtures.heisenberg()):
        els = enumerate_ball(G, 2).elements
        for _ in range(4):
            idx = rng.choice(len(els), size=4, replace=False)
            f = GroupAlgebraElement.from_elements(
                G, [(els[i], Fraction(int(rng.integers(-3, 4)) or 1)) for i in idx])
            ms, _ = moment_sequence(f, 5)
            for k in range(1, len(ms)):
                # m_{k+1}^{1/(k+1)} >= m_k^{1/k}, exactly
                assert Fraction(ms[k]) ** k >= Fraction(ms[k - 1]) ** (k + 1)


def test_compression_bounded_by_fourier_norm(Z):
    rng = np.random.default_rng(11)
    for _ in range(5):
        coeffs = {int(k): int(rng.integers(-3, 4)) or 1 for k in rng.choice(9, 4, replace=False) - 4}
        f = z_elem(Z, coeffs)
        true = fourier_norm(coeffs)
        bounds = compression_bounds(f, [2, 5, 10, 20, 40])
        vals = [b.value for b in bounds]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= true * (1 + 1e-6)
        assert vals[-1] >= 0.95 * true


def test_compression_tree_generators(F2):
    f = GroupAlgebraElement.indicator(F2, F2.generators)
    vals = [b.value for b in compression_bounds(f, [2, 4, 6, 8])]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 2 * math.sqrt(3)
    far = opnorm_lower(f, "compression", R=20)
    assert 3.40 <= far.value <= 2 * math.sqrt(3)
    assert not far.certified


def test_compression_needs_radius(F2):
    with pytest.raises(ValueError):
        opnorm_lower(GroupAlgebraElement.delta(F2.identity), "compression")
    with pytest.raises(ValueError):
        opnorm_lower(GroupAlgebraElement.delta(F2.identity), "nope")


def test_zero_element_bound(F2):
    assert opnorm_lower(GroupAlgebraElement(F2), "moment").value == 0.0


def test_lower_never_exceeds_l1(H3):
    els = enumerate_ball(H3, 2).elements
    f = GroupAlgebraElement.from_elements(H3, [(x, (-1) ** i) for i, x in enumerate(els[:9])])
    for nb in (opnorm_lower(f, "moment", k=5), opnorm_lower(f, "compression", R=6)):
        assert nb.value <= f.l1norm()


def test_upper_bound_sources(F2, Z2):
    assert rho_upper(Z2, 3, enumerate_ball(Z2, 3)).value == math.sqrt(25)
    assert rho_upper(Z2, 3).source == "sqrt_word_count"
    assert analytic_bound(Z2) is None
    up = rho_upper(F2, 4, enumerate_ball(F2, 4))
    assert up.source == "analytic" and up.value == 5 ** 1.5


def test_rho_profile_z(Z):
    prof = rho_profile(Z, 3)
    assert prof.lower[0] == 1.0 and prof.upper[0] == 1.0
    assert prof.lower[2] >= 0.98 * math.sqrt(5)
    assert prof.upper[2] == math.sqrt(5)
    assert prof.to_csv().splitlines()[0] == "n,rho_lower,rho_upper,lower_witness,upper_source"


@pytest.mark.parametrize("make", [fixtures.free, fixtures.heisenberg, lambda: fixtures.integers(2)])
def test_rho_profile_invariants(make):
    G = make()
    prof = rho_profile(G, 3, families=("ball", "sphere", ("random_signs", 2, 1)),
                       compression_budget=20_000, work_budget=200_000)
    ball = enumerate_ball(G, 3)
    for n in range(4):
        assert 1.0 <= prof.lower[n] <= prof.upper[n] <= math.sqrt(ball.size(n)) + 1e-12
    assert all(a <= b for a, b in zip(prof.lower, prof.lower[1:]))


def test_rho_profile_moment_method(F2):
    prof = rho_profile(F2, 2, method="moment", k=4)
    assert all(lo <= (n + 1) ** 1.5 for n, lo in enumerate(prof.lower))
