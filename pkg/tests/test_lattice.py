"""Generating-function tests and certified truncations."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers
from cxorder import (
    BadParameter,
    Inconclusive,
    LatticeSeq,
    MassMismatch,
    NotLattice,
    as_lattice,
    cauchy_product,
    dirac,
    genfun_square_coeffs,
    genfun_test,
    make_measure,
    rasa_criterion,
    truncate_negbinomial,
    truncate_poisson,
    truncated_family,
)

H = Fraction(1, 2)


def test_as_lattice_examples():
    assert as_lattice(dirac(0)).coeffs == (1,)
    assert as_lattice(make_measure([(0, H), (2, H)])).coeffs == (H, 0, H)


def test_as_lattice_rejects_non_integers():
    with pytest.raises(NotLattice):
        as_lattice(make_measure([(Fraction(1, 2), H)]))
    with pytest.raises(NotLattice):
        as_lattice(dirac(-1))


def test_square_coeffs_identical_sequences():
    a = as_lattice(make_measure([(0, H), (1, H)]))
    assert all(c == 0 for c in genfun_square_coeffs(a, a))


def test_square_coeffs_simple():
    a = as_lattice(dirac(0))
    b = as_lattice(make_measure([(0, H), (1, H)]))
    assert genfun_square_coeffs(a, b) == [Fraction(1, 4)]


def test_square_coeffs_binomial_pair():
    # (f - g)/(z - 1) is identically x - y = -1/2 for one-trial binomials
    a = as_lattice(make_measure([(0, Fraction(3, 4)), (1, Fraction(1, 4))]))
    b = as_lattice(make_measure([(0, Fraction(1, 4)), (1, Fraction(3, 4))]))
    assert genfun_square_coeffs(a, b) == [Fraction(1, 4)]


def test_square_coeffs_cross_pair():
    a = as_lattice(make_measure([(0, H), (3, H)]))
    b = as_lattice(make_measure([(1, H), (2, H)]))
    assert genfun_square_coeffs(a, b) == [
        Fraction(1, 4),
        0,
        -H,
        0,
        Fraction(1, 4),
    ]
    verdict = genfun_test(a, b)
    assert verdict.holds is False
    assert verdict.witness.point == 2 and verdict.witness.gap == -H


def test_genfun_test_holds_and_mass_mismatch():
    a = as_lattice(dirac(0))
    b = as_lattice(make_measure([(0, H), (1, H)]))
    assert genfun_test(a, b).holds
    assert genfun_test(a, a).holds
    with pytest.raises(MassMismatch):
        genfun_test(a, as_lattice(make_measure([(0, 2)])))


def test_tail_sums_match_series_division():
    # coefficients of (f - 1)/(z - 1) two ways: direct tail sums versus
    # synthetic polynomial division by (z - 1)
    mu = make_measure([(0, Fraction(1, 6)), (2, H), (3, Fraction(1, 3))])
    seq = as_lattice(mu)
    tails = []
    for i in range(len(seq.coeffs) - 1):
        tails.append(sum(seq.coeffs[i + 1 :], Fraction(0)))
    # divide f(z) - 1 by (z - 1) from the top coefficient down
    dividend = list(seq.coeffs)
    dividend[0] -= 1
    quotient = [Fraction(0)] * (len(dividend) - 1)
    carry = Fraction(0)
    for k in range(len(dividend) - 1, 0, -1):
        quotient[k - 1] = dividend[k] + carry
        carry = quotient[k - 1]
    assert carry == -dividend[0]  # division is exact for probability mass 1
    assert quotient == tails


@settings(max_examples=60)
@given(st.randoms(use_true_random=False))
def test_genfun_matches_profile_criterion(rng):
    mu, nu = helpers.random_lattice_pair(rng)
    verdict, profile = rasa_criterion(mu, nu)
    series = genfun_test(as_lattice(mu), as_lattice(nu))
    assert series.holds == verdict.holds
    coeffs = genfun_square_coeffs(as_lattice(mu), as_lattice(nu))
    for i, c in enumerate(coeffs):
        assert profile.value(i + 1) == c
    assert profile.value(0) == 0
    assert profile.value(len(coeffs) + 1) == 0


def test_cauchy_product_against_polynomial_multiplication():
    u = [Fraction(1), Fraction(2), Fraction(0), Fraction(-1, 3)]
    v = [Fraction(1, 2), Fraction(5)]
    out = cauchy_product(u, v)
    for k in range(len(u) + len(v) - 1):
        expected = sum(
            u[i] * v[k - i] for i in range(len(u)) if 0 <= k - i < len(v)
        )
        assert out[k] == expected


# -- certified truncations -----------------------------------------------------


def test_negbinomial_geometric_case():
    # n = 0 reduces to the geometric distribution and the certificate is the
    # exact tail x^(K+1)
    x = Fraction(1, 3)
    seq = truncate_negbinomial(0, x, Fraction(1, 10**6))
    k = seq.last_index
    assert seq.coeffs[0] == 1 - x
    assert seq.tail_bound == x ** (k + 1)
    assert seq.boxed_mass == 1 - x ** (k + 1)
    assert seq.tail_bound < Fraction(1, 10**6)


def test_negbinomial_example_weights():
    seq = truncate_negbinomial(1, H, Fraction(1, 2**20))
    for k, c in enumerate(seq.coeffs):
        assert c == Fraction(k + 1, 2 ** (k + 2))
    assert seq.tail_bound < Fraction(1, 2**20)
    assert seq.boxed_mass <= 1 <= seq.boxed_mass + seq.tail_bound


def test_negbinomial_bad_parameters():
    with pytest.raises(BadParameter):
        truncate_negbinomial(1, Fraction(0))
    with pytest.raises(BadParameter):
        truncate_negbinomial(1, Fraction(3, 2))
    with pytest.raises(BadParameter):
        truncate_negbinomial(-1, H)
    with pytest.raises(BadParameter):
        truncate_negbinomial(1, H, Fraction(0))


def test_poisson_certificates():
    seq = truncate_poisson(Fraction(1), Fraction(1))
    assert not seq.exact
    assert seq.tail_bound < 1
    assert seq.boxed_mass <= 1 <= seq.boxed_mass + seq.tail_bound
    tight = truncate_poisson(Fraction(3, 2), Fraction(1, 2**30))
    assert tight.tail_bound < Fraction(1, 2**30)
    assert tight.boxed_mass <= 1 <= tight.boxed_mass + tight.tail_bound
    # the stored values are certified lower bounds of e^-lam * lam^k / k!
    # sanity-check the first against a crude rational sandwich of e^-3/2
    assert Fraction(2, 9) < tight.coeffs[0] < Fraction(1, 4)


def test_poisson_inconclusive_by_construction():
    a = truncate_poisson(Fraction(1), Fraction(1, 2**20))
    b = truncate_poisson(Fraction(2), Fraction(1, 2**20))
    assert genfun_test(a, b).holds is None
    with pytest.raises(Inconclusive):
        genfun_square_coeffs(a, b)


def test_truncated_exact_prefix_semantics():
    # truncations of distinct negative binomials have strictly positive
    # profiles, so the clean exact prefix stays inconclusive
    a = truncate_negbinomial(1, Fraction(1, 4), Fraction(1, 2**20))
    b = truncate_negbinomial(1, Fraction(3, 4), Fraction(1, 2**20))
    verdict = genfun_test(a, b)
    assert verdict.holds is None
    # a manufactured truncated pair with a negative sound coefficient is a
    # certified failure even without the tail
    bad_a = LatticeSeq((H, 0, 0, H), tail_bound=Fraction(1, 100), total_mass=Fraction(11, 10))
    bad_b = LatticeSeq((0, H, H, 0), tail_bound=Fraction(1, 100), total_mass=Fraction(11, 10))
    verdict = genfun_test(bad_a, bad_b)
    assert verdict.holds is False and verdict.witness.point == 2


def test_truncated_family_dispatch():
    seq = truncated_family("negbinomial:1,1/2", Fraction(1, 2**10))
    assert seq.coeffs[0] == Fraction(1, 4)
    poisson = truncated_family("poisson:1", Fraction(1, 2))
    assert not poisson.exact
    with pytest.raises(BadParameter):
        truncated_family("zeta:3")
    with pytest.raises(BadParameter):
        truncated_family("negbinomial:1")


def test_interpolation_against_hinge_gap_on_truncations():
    # sound prefix coefficients of a truncated pair equal the profile of the
    # boxed measures at integers (the tail sits beyond all tested indices
    # once the box is wide enough for the probed range)
    eps = Fraction(1, 2**40)
    a = truncate_negbinomial(1, Fraction(1, 4), eps)
    b = truncate_negbinomial(1, Fraction(3, 4), eps)
    coeffs = genfun_square_coeffs(a, b)
    from cxorder import lattice_to_measure, step_self_convolution, cdf_diff

    boxed_a = lattice_to_measure(a).scaled(1 / lattice_to_measure(a).mass)
    boxed_b = lattice_to_measure(b).scaled(1 / lattice_to_measure(b).mass)
    profile = step_self_convolution(cdf_diff(boxed_a, boxed_b))
    for i in range(6):
        # normalisation perturbs by less than the tail certificates can hide
        assert abs(profile.value(i + 1) - coeffs[i]) < Fraction(1, 2**30)
