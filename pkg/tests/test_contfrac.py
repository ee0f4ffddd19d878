import math
import random
from fractions import Fraction
from math import gcd, isqrt

import pytest

from apollon.errors import CapExceededError, UsageError
from apollon.contfrac import (
    CFExpansion,
    QuadraticRoot,
    best_approximations,
    cf_expand,
    convergents,
    cutting_sequence,
    is_good_approximation,
    periodic_cf,
    zaremba_denominators,
    zaremba_missing,
)

GOLDEN = QuadraticRoot(1, -1, -1)
SQRT2 = QuadraticRoot(1, 0, -2)


def random_rational(rng: random.Random, den_max: int = 1000) -> Fraction:
    q = rng.randint(2, den_max)
    p = rng.randint(1, 3 * q)
    return Fraction(p, q)


def random_surd(rng: random.Random) -> QuadraticRoot:
    while True:
        a = rng.choice([1, 1, 2, 3, -2])
        b = rng.randint(-8, 8)
        c = rng.randint(-8, 8)
        try:
            root = QuadraticRoot(a, b, c, plus=bool(rng.getrandbits(1)))
        except UsageError:
            continue
        if not root.is_rational():
            return root


# ---------------------------------------------------------------------------
# classical expansions


def test_euclid_examples():
    cf = cf_expand(Fraction(17, 5))
    assert cf.entries == (3, 2, 2)
    assert cf.variant().entries == (3, 2, 1, 1)
    assert cf.variant().variant() == cf
    assert cf_expand(0).entries == (0,)
    assert cf_expand(Fraction(-7, 2)).entries == (-4, 2)


def test_expansion_value_round_trip():
    rng = random.Random(1)
    for _ in range(200):
        x = random_rational(rng) - rng.randint(0, 5)
        cf = cf_expand(x)
        assert cf.value() == x
        assert cf.variant().value() == x
        assert all(a >= 1 for a in cf.quotients)


def test_pi_float_expansion():
    cf = cf_expand(math.pi, depth=8)
    assert cf.entries == (3, 7, 15, 1, 292, 1, 1, 1)
    assert not cf.exact
    with pytest.raises(UsageError):
        cf_expand(math.pi, depth=41)


def test_quotient_invariant_enforced():
    with pytest.raises(UsageError):
        CFExpansion(3, (2, 0, 2))


# ---------------------------------------------------------------------------
# convergents


def test_pi_convergents():
    cf = cf_expand(math.pi, depth=5)
    assert convergents(cf)[:4] == [
        Fraction(3),
        Fraction(22, 7),
        Fraction(333, 106),
        Fraction(355, 113),
    ]


def test_simple_convergents():
    assert convergents(CFExpansion(0, (7,))) == [Fraction(0), Fraction(1, 7)]


def test_golden_convergents_are_fibonacci_ratios():
    cf = cf_expand(GOLDEN)
    assert cf.entries == (1,) and cf.period == 1
    fib = [1, 1]
    while len(fib) < 14:
        fib.append(fib[-1] + fib[-2])
    got = convergents(cf, count=12)
    assert got == [Fraction(fib[k + 1], fib[k]) for k in range(12)]


def test_convergents_unimodular_and_match_matrix_products():
    # successive convergents as columns of the L/R matrix product
    rng = random.Random(4)
    for _ in range(100):
        x = random_rational(rng)
        cf = cf_expand(x)
        conv = convergents(cf)
        for a, b in zip(conv, conv[1:]):
            assert abs(a.numerator * b.denominator - b.numerator * a.denominator) == 1
        m = ((1, 0), (0, 1))
        for i, a in enumerate(cf.entries):
            step = ((1, a), (0, 1)) if i % 2 == 0 else ((1, 0), (a, 1))
            m = (
                (m[0][0] * step[0][0] + m[0][1] * step[1][0],
                 m[0][0] * step[0][1] + m[0][1] * step[1][1]),
                (m[1][0] * step[0][0] + m[1][1] * step[1][0],
                 m[1][0] * step[0][1] + m[1][1] * step[1][1]),
            )
        # the column holding the latest convergent alternates with run parity:
        # L^3 R^7 has 22/7 first, L^3 R^2 L^2 has 17/5 second
        last = 0 if len(cf.entries) % 2 == 0 else 1
        assert Fraction(m[0][last], m[1][last]) == conv[-1]
        if len(conv) >= 2:
            assert Fraction(m[0][1 - last], m[1][1 - last]) == conv[-2]


# ---------------------------------------------------------------------------
# periodic expansions


def test_known_periods():
    assert periodic_cf(SQRT2) == ([1], [2])
    assert periodic_cf(GOLDEN) == ([], [1])
    assert periodic_cf(QuadraticRoot(1, 0, -3)) == ([1], [1, 2])
    assert periodic_cf(QuadraticRoot(1, 0, -2, plus=False)) == ([-2, 1, 1], [2])


def test_periodic_rejects_rational_root():
    with pytest.raises(UsageError):
        periodic_cf(QuadraticRoot(1, 0, -4))
    # the expander treats a square-discriminant root as its rational value
    assert cf_expand(QuadraticRoot(1, 0, -4)).entries == (2,)


def test_reduced_surds_are_purely_periodic():
    # alpha > 1 with conjugate in (-1, 0) must have empty preperiod
    rng = random.Random(8)
    checked = 0
    while checked < 40:
        root = random_surd(rng)
        p, q, d = root.surd()
        conj = QuadraticRoot(root.a, root.b, root.c, plus=not root.plus)
        if root.cmp_fraction(Fraction(1)) <= 0:
            continue
        if conj.cmp_fraction(Fraction(-1)) <= 0 or conj.cmp_fraction(Fraction(0)) >= 0:
            continue
        pre, per = periodic_cf(root)
        assert pre == [], root
        checked += 1


def test_periodic_against_sympy():
    from sympy.ntheory.continued_fraction import continued_fraction_periodic

    rng = random.Random(9)
    checked = 0
    while checked < 80:
        root = random_surd(rng)
        pre, per = periodic_cf(root)
        p, q, d = root.surd()
        sy = continued_fraction_periodic(p, q, d)
        spre, sper = list(sy[:-1]), list(sy[-1])
        mine = (pre + per * (30 // len(per) + 2))[:25]
        theirs = (spre + sper * (30 // len(sper) + 2))[:25]
        assert mine == theirs and len(per) == len(sper), root
        checked += 1


# ---------------------------------------------------------------------------
# cutting sequences


def test_cutting_sequence_examples():
    assert cutting_sequence(math.pi, 25) == "L" * 3 + "R" * 7 + "L" * 15
    assert cutting_sequence(5, 10) == "LLLLL"
    assert cutting_sequence(Fraction(1, 3), 10) == "RRL"
    with pytest.raises(UsageError):
        cutting_sequence(Fraction(0), 5)


def test_cutting_sequence_matches_expansion_words():
    rng = random.Random(12)
    for _ in range(100):
        x = random_rational(rng)
        word = cutting_sequence(x, 10**6)
        cf = cf_expand(x)
        assert word in (cf.word(), cf.variant().word())


def test_cutting_sequence_of_golden_alternates():
    assert cutting_sequence(GOLDEN, 20) == "LR" * 10
    assert cf_expand(GOLDEN).word(max_letters=20) == "LR" * 10


def test_word_requires_nonnegative_head():
    with pytest.raises(UsageError):
        cf_expand(Fraction(-7, 2)).word()


# ---------------------------------------------------------------------------
# approximation quality


def test_good_approximation_examples():
    assert is_good_approximation(math.pi, Fraction(22, 7))
    assert not is_good_approximation(math.pi, (31, 10))
    assert is_good_approximation(Fraction(1, 2), Fraction(1, 2))


def test_best_approximations_of_half_is_finite():
    assert best_approximations(Fraction(1, 2), 100) == [Fraction(1, 2)]


def test_best_approximations_of_pi_are_convergents():
    best = best_approximations(math.pi, 10**4)
    conv = set(convergents(cf_expand(math.pi, depth=12)))
    assert best and all(fr in conv for fr in best)


def test_best_approximations_cap():
    with pytest.raises(CapExceededError):
        best_approximations(math.pi, 10**6 + 1)


def test_dirichlet_bound_on_surd_convergents():
    # |alpha - p/q| < 1/q^2 for every convergent, exactly
    rng = random.Random(21)
    for _ in range(100):
        root = random_surd(rng)
        cf = cf_expand(root)
        for fr in convergents(cf, count=12):
            p, q = fr.numerator, fr.denominator
            lo = Fraction(p * q - 1, q * q)
            hi = Fraction(p * q + 1, q * q)
            assert root.cmp_fraction(lo) > 0 and root.cmp_fraction(hi) < 0, root


def test_golden_ratio_resists_approximation():
    # |phi - p/q| >= 1/(2.7 q^2) for every q <= 10^4.  The worst case is the
    # convergent 2/1 with q^2 gap exactly 1/phi^2 = 0.3819...; sqrt(5) is only
    # the asymptotic constant.
    for q in range(1, 10**4 + 1):
        fl = (q + isqrt(5 * q * q)) // 2  # floor(phi * q)
        for p in (fl, fl + 1):
            gap = Fraction(10, 27 * q * q)
            lo = Fraction(p, q) - gap
            hi = Fraction(p, q) + gap
            inside = GOLDEN.cmp_fraction(lo) > 0 and GOLDEN.cmp_fraction(hi) < 0
            assert not inside, (p, q)


# ---------------------------------------------------------------------------
# Zaremba searches


def fibonacci_up_to(n: int) -> set[int]:
    out, a, b = set(), 1, 1
    while b <= n:
        out.add(b)
        a, b = b, a + b
    return out


def euclid_zaremba_oracle(z: int, n: int, canonical: bool) -> set[int]:
    """Denominators via expansions of every reduced fraction, no continuants."""
    good = {1}
    for q in range(2, n + 1):
        for p in range(1, q):
            if gcd(p, q) != 1:
                continue
            cf = cf_expand(Fraction(p, q))
            words = [cf.quotients]
            if not canonical:
                words.append(cf.variant().quotients)
            if any(max(w) <= z for w in words):
                good.add(q)
                break
    return good


def test_zaremba_fibonacci():
    assert zaremba_denominators(1, 1000) == fibonacci_up_to(1000)


def test_zaremba_known_missing_sets():
    assert zaremba_missing(4, 10**4, last_ge_2=True) == [6, 54, 150]
    assert zaremba_missing(4, 10**4) == [54, 150]
    assert zaremba_missing(5, 10**4) == []
    assert zaremba_missing(5, 10**4, last_ge_2=True) == []


def test_zaremba_against_euclid_oracle():
    for z in (1, 2, 3):
        for canonical in (False, True):
            got = zaremba_denominators(z, 200, last_ge_2=canonical)
            assert got == euclid_zaremba_oracle(z, 200, canonical), (z, canonical)


def test_zaremba_caps():
    with pytest.raises(UsageError):
        zaremba_denominators(0, 10)
    with pytest.raises(CapExceededError):
        zaremba_denominators(2, 10**7 + 1)
