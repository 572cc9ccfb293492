"""Acceptance criteria: one test per criterion, exact tolerances pinned.

Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to see the
printed PASS line per criterion).  Every comparison below is exact rational
equality unless the criterion itself states an explicit bound.
"""

import itertools
import random
import time
from fractions import Fraction

from cxorder import (
    MVPolynomial,
    affine_fn,
    as_lattice,
    binomial_measure,
    compose_convex,
    dirac,
    eq6prim_gap,
    gap_functional,
    gav_gap,
    gavrea_p4_sum,
    genfun_square_coeffs,
    genfun_test,
    hinge_fn,
    integrate_hinge,
    is_s_step,
    leq_cx,
    leq_st,
    majorizes,
    make_measure,
    muirhead_cx_check,
    muirhead_scalar,
    poly_eval_measures,
    quad_fn,
    rasa_criterion,
    rasa_direct,
    s_step_chain,
    sorted_desc,
    sos_step_decomposition,
    unit_grid,
    w_polynomial,
)

import helpers

H = Fraction(1, 2)
Q = Fraction(1, 4)


def _report(number: int, summary: str):
    print(f"ACCEPTANCE {number:>2}: PASS  ({summary})")


def test_criterion_01_reference_example_exact():
    poly_p = MVPolynomial.from_dict(2, {(3, 1): H, (1, 3): H})
    poly_q = MVPolynomial.from_dict(
        2, {(4, 0): Fraction(1, 8), (2, 2): Fraction(3, 4), (0, 4): Fraction(1, 8)}
    )
    mu, nu = dirac(0), make_measure([(0, H), (1, H)])
    left = poly_eval_measures(poly_p, [mu, nu])
    right = poly_eval_measures(poly_q, [mu, nu])
    assert left.atoms == (
        (0, Fraction(5, 16)),
        (1, Fraction(7, 16)),
        (2, Fraction(3, 16)),
        (3, Fraction(1, 16)),
    )
    assert right.atoms == (
        (0, Fraction(41, 128)),
        (1, Fraction(52, 128)),
        (2, Fraction(30, 128)),
        (3, Fraction(4, 128)),
        (4, Fraction(1, 128)),
    )
    assert integrate_hinge(left, 2) == Fraction(1, 16)
    assert integrate_hinge(right, 2) == Fraction(6, 128)
    verdict = leq_cx(left, right)
    assert verdict.holds is False
    _report(1, "reference atoms, hinge integrals and failing verdict exact")


def test_criterion_02_criterion_oracle_equivalence_1000():
    rng = random.Random(20240811)
    trials = 1000
    for _ in range(trials):
        mu, nu = helpers.equal_mass_pair(rng, max_atoms=8)
        verdict, profile = rasa_criterion(mu, nu)
        oracle = rasa_direct(mu, nu)
        assert verdict.holds == oracle.holds
        for a in profile.breakpoints:
            assert gap_functional(mu, nu, hinge_fn(a)) == profile.value(a)
    _report(2, f"{trials} equal-mass pairs, 100% agreement + exact proof identity")


def test_criterion_03_genfun_equivalence_1000():
    rng = random.Random(1889)
    trials = 1000
    for _ in range(trials):
        mu, nu = helpers.random_lattice_pair(rng)
        verdict, profile = rasa_criterion(mu, nu)
        series = genfun_test(as_lattice(mu), as_lattice(nu))
        assert series.holds == verdict.holds
        coeffs = genfun_square_coeffs(as_lattice(mu), as_lattice(nu))
        assert profile.value(0) == 0
        for i, c in enumerate(coeffs):
            assert profile.value(i + 1) == c
        assert profile.value(len(coeffs) + 1) == 0
    _report(3, f"{trials} lattice pairs, verdicts equal + interpolation identity exact")


def test_criterion_04_stochastic_comparability_implies_criterion_500():
    rng = random.Random(424242)
    trials = 500
    for _ in range(trials):
        mu, nu = helpers.st_comparable_pair(rng)
        assert leq_st(mu, nu).holds
        verdict, _ = rasa_criterion(mu, nu)
        assert verdict.holds
    _report(4, f"{trials} monotone-coupled pairs all pass the profile criterion")


def test_criterion_05_second_moment_identity_500():
    rng = random.Random(5150)
    trials = 500
    square = quad_fn(1)
    for _ in range(trials):
        mu = helpers.probability_measure(rng, max_atoms=6)
        nu = helpers.probability_measure(rng, max_atoms=6)
        assert gap_functional(mu, nu, square) == 2 * (mu.mean - nu.mean) ** 2
    _report(5, f"{trials} probability pairs: gap(x^2) = 2*(mean gap)^2 exactly")


def _sorted_tuples(length: int, bound: int):
    return [
        t
        for t in itertools.product(range(bound, -1, -1), repeat=length)
        if all(a >= b for a, b in zip(t, t[1:]))
    ]


def test_criterion_06_majorization_machinery():
    # 6a: chains validate step by step, exhaustively for m <= 5, entries <= 6
    checked_chains = 0
    for m in range(1, 6):
        by_sum: dict[int, list] = {}
        for t in _sorted_tuples(m, 6):
            by_sum.setdefault(sum(t), []).append(t)
        for group in by_sum.values():
            for p in group:
                for q in group:
                    if not majorizes(p, q):
                        continue
                    chain = s_step_chain(p, q)
                    checked_chains += 1
                    if p == q:
                        assert chain == []
                        continue
                    assert chain[0] == p and chain[-1] == q
                    for a, b in zip(chain, chain[1:]):
                        assert is_s_step(a, b) and majorizes(a, b)

    # 6b: the explicit certificate expands exactly, for every elementary
    # transfer with m <= 4 and entries <= 5
    checked_expansions = 0
    for m in range(2, 5):
        for ph in _sorted_tuples(m, 5):
            for i in range(m):
                for j in range(i + 1, m):
                    bumped = list(ph)
                    bumped[i] += 1
                    bumped[j] -= 1
                    if bumped[j] < 0 or bumped[i] > 5:
                        continue
                    q = tuple(bumped)
                    if not is_s_step(ph, q):
                        continue
                    decomposition = sos_step_decomposition(ph, q)
                    assert decomposition.expand() == w_polynomial(q) - w_polynomial(ph)
                    checked_expansions += 1

    # 6c: the end-to-end convex-order comparison over binomial inputs,
    # exhaustive in the tuple pairs (m <= 3, entries <= 4)
    triples = [
        (Fraction(0), H, Fraction(1)),
        (Q, H, Fraction(3, 4)),
        (Fraction(0), Q, Fraction(3, 4)),
        (Q, Fraction(3, 4), Fraction(1)),
    ]
    checked_muirhead = 0
    for m in range(1, 4):
        pairs = []
        by_sum = {}
        for t in _sorted_tuples(m, 4):
            by_sum.setdefault(sum(t), []).append(t)
        for group in by_sum.values():
            for p in group:
                for q in group:
                    if majorizes(p, q):
                        pairs.append((p, q))
        for n in (1, 2, 3):
            for xs in triples:
                measures = [binomial_measure(n, x) for x in xs[:m]]
                for p, q in pairs:
                    assert muirhead_cx_check(p, q, measures).holds
                    checked_muirhead += 1
    _report(
        6,
        f"{checked_chains} chains, {checked_expansions} certificate expansions, "
        f"{checked_muirhead} convex-order comparisons",
    )


def test_criterion_07_scalar_muirhead_1000():
    rng = random.Random(77)
    trials = 1000
    for _ in range(trials):
        length = rng.randint(2, 5)
        q = sorted_desc(tuple(rng.randint(0, 6) for _ in range(length)))
        p = list(q)
        for _ in range(rng.randint(0, 5)):
            rich = [i for i in range(length) for j in range(length) if p[i] >= p[j] + 2]
            if not rich:
                break
            i = rng.choice(rich)
            poorer = [j for j in range(length) if p[i] >= p[j] + 2]
            j = rng.choice(poorer)
            p[i] -= 1
            p[j] += 1
            p = list(sorted_desc(tuple(p)))
        p = tuple(p)
        assert majorizes(p, q)
        xs = [Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(length)]
        lhs, rhs = muirhead_scalar(p, q, xs)
        assert lhs <= rhs
    _report(7, f"{trials} random majorized pairs: W^p(xs) <= W^q(xs) exactly")


def _random_hinge_combo(rng: random.Random):
    phi = hinge_fn(Fraction(rng.randint(0, 16), 16), rng.randint(1, 4))
    for _ in range(rng.randint(0, 2)):
        phi = phi + hinge_fn(Fraction(rng.randint(0, 16), 16), rng.randint(1, 4))
    return phi


def test_criterion_08_basis_gap_nonnegative_on_grid():
    rng = random.Random(808)
    test_fns = [_random_hinge_combo(rng) for _ in range(20)]
    grid = unit_grid(Fraction(1, 16))
    from cxorder import binomial_weights, cauchy_product

    checked = 0
    for n in (1, 2, 3):
        tables = [
            [phi(Fraction(s, 2 * n)) for s in range(2 * n + 1)] for phi in test_fns
        ]
        for x in grid:
            row_x = binomial_weights(n, x)
            for y in grid:
                row_y = binomial_weights(n, y)
                diff = [a - b for a, b in zip(row_x, row_y)]
                squared = cauchy_product(diff, diff)
                for table in tables:
                    gap = sum(
                        (c * table[s] for s, c in enumerate(squared) if c != 0),
                        Fraction(0),
                    )
                    assert gap >= 0
                    checked += 1
    # the collapsed sweep above must agree with the public evaluator
    from cxorder import rasa_gap

    spot = random.Random(809)
    for _ in range(30):
        n = spot.randint(1, 3)
        x, y = Fraction(spot.randint(0, 16), 16), Fraction(spot.randint(0, 16), 16)
        phi = test_fns[spot.randrange(len(test_fns))]
        assert rasa_gap(n, x, y, phi) == sum(
            (
                c * phi(Fraction(s, 2 * n))
                for s, c in enumerate(
                    cauchy_product(
                        [a - b for a, b in zip(binomial_weights(n, x), binomial_weights(n, y))],
                        [a - b for a, b in zip(binomial_weights(n, x), binomial_weights(n, y))],
                    )
                )
            ),
            Fraction(0),
        )
    # coincidence check: the two-variable operator gap with the
    # midpoint composition reproduces the basis gap exactly
    points = [
        (Fraction(0), Fraction(1)),
        (Q, Fraction(3, 4)),
        (Fraction(1, 8), Fraction(11, 16)),
        (H, H),
        (Fraction(15, 16), Fraction(1, 16)),
    ]
    for n in (1, 2, 3):
        for phi in test_fns:
            g = compose_convex(phi, (H, H))
            for x, y in points:
                assert gav_gap("P1", g, [n, n], [x, y]) == rasa_gap(n, x, y, phi)
    _report(8, f"{checked} grid gaps >= 0; operator/basis coincidence exact")


def test_criterion_09_absdiff_counterexample():
    from cxorder import absdiff_surface

    gap = gav_gap("P1p", absdiff_surface(1), [1, 1], [0, 1])
    assert gap == -2
    _report(9, "symmetrised operator gap for |u-v| at (0,1) equals -2 exactly")


def test_criterion_10_certified_double_sums():
    eps = Fraction(1, 2**40)
    started = time.monotonic()
    identity = affine_fn(0, 1)
    enclosure = gavrea_p4_sum(1, Q, Fraction(3, 4), identity, eps)
    first_elapsed = time.monotonic() - started
    assert enclosure.hi < 0
    assert first_elapsed < 10.0

    started = time.monotonic()
    decreasing_square = quad_fn(1) + affine_fn(1, -2)  # (1-u)^2
    second = gavrea_p4_sum(1, Q, Fraction(3, 4), decreasing_square, eps)
    second_elapsed = time.monotonic() - started
    assert second.lo > -Fraction(1, 2**30)
    assert second_elapsed < 10.0
    _report(
        10,
        f"phi=u certified negative in {first_elapsed:.2f}s, "
        f"phi=(1-u)^2 lower bound > -2^-30 in {second_elapsed:.2f}s",
    )


def test_criterion_11_block_inequality():
    assert eq6prim_gap([1, 1], [0, 1], hinge_fn(H)) == Q
    rng = random.Random(1111)
    grid = [Fraction(0), Q, H, Fraction(3, 4), Fraction(1)]
    checked = 0
    for k in (1, 2, 3):
        for ns in itertools.product((1, 2), repeat=k):
            for xs in itertools.product(grid, repeat=k):
                phi = _random_hinge_combo(rng)
                assert eq6prim_gap(list(ns), list(xs), phi) >= 0
                checked += 1
    _report(11, f"hand value 1/4 exact; {checked} block gaps >= 0")
