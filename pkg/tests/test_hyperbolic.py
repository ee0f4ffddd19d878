import math
import random
from fractions import Fraction

import pytest

from apollon.contfrac import QuadraticRoot
from apollon.errors import UsageError
from apollon.hyperbolic import (
    UHPPoint,
    apply_oq3,
    coeffs_to_root,
    dist_mink3,
    dist_mink4,
    dist_uhp,
    dist_uhs,
    geodesic_dependency_det,
    mink_from_uhs,
    mink_normalize,
    mobius_uhp,
    psl2_to_oq3,
    root_to_coeffs,
    starscape_points,
    uhs_from_mink,
)

I = UHPPoint(Fraction(0), Fraction(1))


def mat2_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def random_sl2(rng, steps=6):
    m = ((1, 0), (0, 1))
    for _ in range(steps):
        k = rng.randint(-3, 3)
        step = ((1, k), (0, 1)) if rng.getrandbits(1) else ((1, 0), (k, 1))
        m = mat2_mul(m, step)
    return m


def random_timelike3(rng):
    a = rng.randint(1, 9)
    b = rng.randint(-9, 9)
    c = b * b // (4 * a) + rng.randint(1, 10)
    return (a, b, c)


def random_timelike4(rng):
    p = rng.randint(1, 9)
    r = rng.randint(-9, 9)
    s = rng.randint(-9, 9)
    q = (r * r + s * s) // p + rng.randint(1, 10)
    return (p, q, r, s)


# ---------------------------------------------------------------------------
# coefficient/root dictionary


def test_coeffs_to_root_examples():
    assert coeffs_to_root((1, 0, 1)) == I
    assert coeffs_to_root((1, -1, 1)) == UHPPoint(Fraction(1, 2), Fraction(1, 2), 3)
    assert root_to_coeffs(I) == (1, 0, 1)


def test_coeffs_to_root_rejects_real_roots():
    with pytest.raises(UsageError):
        coeffs_to_root((1, 3, 1))
    with pytest.raises(UsageError):
        coeffs_to_root((1, 2, 1))


def test_root_round_trip():
    rng = random.Random(3)
    for _ in range(300):
        v = random_timelike3(rng)
        assert root_to_coeffs(coeffs_to_root(v)) == mink_normalize(v)


def test_point_normalization():
    assert UHPPoint(Fraction(0), Fraction(1), 8) == UHPPoint(Fraction(0), Fraction(2), 2)
    assert UHPPoint(Fraction(0), Fraction(1), 4).im_rad == 1
    with pytest.raises(UsageError):
        UHPPoint(Fraction(0), Fraction(-1))
    with pytest.raises(UsageError):
        UHPPoint(Fraction(0), Fraction(1), 0)


def test_mink_normalize():
    assert mink_normalize((2, 4, 6)) == (1, 2, 3)
    assert mink_normalize((-1, 2, -3)) == (1, -2, 3)
    assert mink_normalize((Fraction(1, 2), Fraction(1, 3), 0)) == (3, 2, 0)
    assert mink_normalize((0, Fraction(-5, 7), 0, 1)) == (0, 5, 0, -7)
    with pytest.raises(UsageError):
        mink_normalize((0, 0, 0))


# ---------------------------------------------------------------------------
# the PSL2 representation


def test_psl2_to_oq3_examples():
    assert psl2_to_oq3(((1, 0), (0, 1))) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert psl2_to_oq3(((0, -1), (1, 0))) == ((0, 0, 1), (0, -1, 0), (1, 0, 0))
    t3 = psl2_to_oq3(((1, 1), (0, 1)))
    assert t3 == ((1, 0, 0), (-2, 1, 0), (1, -1, 1))
    assert apply_oq3(t3, (1, 0, 1)) == (1, -2, 2)
    with pytest.raises(UsageError):
        psl2_to_oq3(((1, 1), (1, 1)))


def test_psl2_to_oq3_preserves_discriminant():
    rng = random.Random(5)
    for _ in range(300):
        m3 = psl2_to_oq3(random_sl2(rng))
        v = random_timelike3(rng)
        a, b, c = apply_oq3(m3, v)
        assert b * b - 4 * a * c == v[1] * v[1] - 4 * v[0] * v[2]
    # symbolic spot check on T: disc is preserved identically
    a, b, c = apply_oq3(psl2_to_oq3(((1, 1), (0, 1))), (3, 1, 7))
    assert b * b - 4 * a * c == 1 - 84


def test_psl2_to_oq3_homomorphism():
    rng = random.Random(6)
    for _ in range(200):
        m1, m2 = random_sl2(rng), random_sl2(rng)
        r1, r2 = psl2_to_oq3(m1), psl2_to_oq3(m2)
        prod = tuple(
            tuple(sum(r1[i][k] * r2[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )
        assert prod == psl2_to_oq3(mat2_mul(m1, m2))


def test_equivariance_exact():
    # moving the coefficient vector moves the root by the Mobius action
    rng = random.Random(7)
    for _ in range(1000):
        m = random_sl2(rng)
        v = random_timelike3(rng)
        left = coeffs_to_root(apply_oq3(psl2_to_oq3(m), v))
        right = mobius_uhp(m, coeffs_to_root(v))
        assert left == right


def test_mobius_uhp_example():
    assert mobius_uhp(((1, 1), (0, 1)), I) == UHPPoint(Fraction(1), Fraction(1))
    assert mobius_uhp(((0, -1), (1, 0)), I) == I
    with pytest.raises(UsageError):
        mobius_uhp(((1, 0), (0, -1)), I)


# ---------------------------------------------------------------------------
# distances


def test_uhp_distance_examples():
    assert abs(dist_uhp(I, UHPPoint(Fraction(0), Fraction(2))) - math.log(2)) < 1e-12
    assert dist_uhp(1j, 1j) == 0
    assert abs(dist_uhp(1j, 1 + 1j) - math.acosh(1.5)) < 1e-12
    with pytest.raises(UsageError):
        dist_uhp(1j, 1 - 1j)


def test_mink3_distance_examples():
    assert abs(dist_mink3((1, 0, 1), (1, 0, 4)) - math.log(2)) < 1e-12
    assert dist_mink3((1, 0, 1), (2, 0, 2)) == 0
    with pytest.raises(UsageError):
        dist_mink3((1, 0, 1), (1, 3, 1))


def test_mink4_distance_examples():
    # concentric-circle identity cosh d = (1+a^2)/(2a)
    for a in (2, 3, 10):
        d = dist_mink4((1, -1, 0, 0), (1, -a * a, 0, 0))
        assert abs(d - math.acosh((1 + a * a) / (2 * a))) < 1e-12
        assert abs(dist_uhs((0, 0, 1), (0, 0, a)) - d) < 1e-12
    with pytest.raises(UsageError):
        dist_mink4((1, -1, 0, 0), (1, 2, 0, 0))
    with pytest.raises(UsageError):
        dist_mink4((1, -1, 0, 0), (1, -1, 1, 0))  # unit circles crossing


def test_isometry_dim3():
    rng = random.Random(11)
    for _ in range(1000):
        u, v = random_timelike3(rng), random_timelike3(rng)
        d_m = dist_mink3(u, v)
        d_u = dist_uhp(coeffs_to_root(u), coeffs_to_root(v))
        assert abs(d_m - d_u) < 1e-12


def test_isometry_dim4():
    rng = random.Random(12)
    for _ in range(1000):
        u, v = random_timelike4(rng), random_timelike4(rng)
        d_m = dist_mink4(u, v)
        d_u = dist_uhs(uhs_from_mink(u), uhs_from_mink(v))
        assert abs(d_m - d_u) < 1e-12


# ---------------------------------------------------------------------------
# upper half space dictionary


def test_uhs_from_mink_examples():
    assert uhs_from_mink((1, -1, 0, 0)) == (0.0, 0.0, 1.0)
    x, y, t = uhs_from_mink((2, -1, 1, 0))
    assert (x, y) == (0.5, 0.0) and abs(t - math.sqrt(3) / 2) < 1e-15
    assert uhs_from_mink((1, 2, 0, 0)) == (0.0, 0.0, math.sqrt(2))
    with pytest.raises(UsageError):
        uhs_from_mink((1, 0, 0, 0))  # light cone
    with pytest.raises(UsageError):
        uhs_from_mink((0, 1, 0, 0))  # point at infinity


def test_uhs_round_trips():
    rng = random.Random(13)
    for _ in range(100):
        # dyadic coordinates survive the float crossing exactly
        point = (
            Fraction(rng.randint(-64, 64), 8),
            Fraction(rng.randint(-64, 64), 8),
            Fraction(rng.randint(1, 64), 8),
        )
        for interior in (False, True):
            vec = mink_from_uhs(point, interior=interior)
            x, y, t = uhs_from_mink(vec)
            assert (Fraction(x), Fraction(y), Fraction(t)) == point
            assert mink_from_uhs((x, y, t), interior=interior) == vec


def test_mink_from_uhs_example():
    assert mink_from_uhs((Fraction(1, 2), 0, Fraction(3, 2))) == (2, -4, 1, 0)
    with pytest.raises(UsageError):
        mink_from_uhs((0, 0, 0))


# ---------------------------------------------------------------------------
# starscape enumeration


def brute_starscape(height, window):
    x_lo, x_hi, y_lo, y_hi = window
    seen = set()
    for a in range(1, height + 1):
        for b in range(-height, height + 1):
            for c in range(-height, height + 1):
                if math.gcd(math.gcd(a, b), c) != 1:
                    continue
                disc = b * b - 4 * a * c
                if disc >= 0:
                    continue
                x = -b / (2 * a)
                y = math.sqrt(-disc) / (2 * a)
                if x_lo <= x <= x_hi and y_lo <= y <= y_hi:
                    seen.add((a, b, c))
    return seen


def test_starscape_contains_i():
    points = starscape_points(1, (-2, 2, 0, 2))
    assert (I, -4) in points


def test_starscape_matches_brute_force():
    window = (-1, 1, 0, 3)
    points = starscape_points(2, window)
    assert len(points) == len(brute_starscape(2, window))
    assert len(set(points)) == len(points)


def test_starscape_points_satisfy_their_polynomials():
    for point, disc in starscape_points(2, (-2, 2, 0, 3)):
        a, b, c = root_to_coeffs(point)
        z = point.as_complex()
        assert abs(a * z * z + b * z + c) < 1e-12
        assert b * b - 4 * a * c == disc


def test_starscape_height_cap():
    with pytest.raises(UsageError):
        starscape_points(0, (0, 1, 0, 1))
    with pytest.raises(UsageError):
        starscape_points(1001, (0, 1, 0, 1))


# ---------------------------------------------------------------------------
# rational geodesics


def test_dependency_det_vanishes_on_rational_geodesics():
    # rational points of the circle |z - 1|^2 = 2
    for t in (Fraction(1, 2), Fraction(3, 4), Fraction(0), Fraction(2)):
        y2 = 2 - (t - 1) ** 2
        assert y2 > 0
        assert geodesic_dependency_det(t, y2) == 0
    # quadratic surd points of |z|^2 = 3
    sqrt2 = QuadraticRoot(1, 0, -2)
    assert geodesic_dependency_det(sqrt2, Fraction(1)) == 0
    assert geodesic_dependency_det(QuadraticRoot(1, 0, -2, plus=False), Fraction(1)) == 0
    # golden-ratio abscissa with matching field ordinate stays dependent
    golden = QuadraticRoot(1, -1, -1)
    y2 = QuadraticRoot(1, -7, 11, plus=False)  # (7 - sqrt(5))/2 = 5 - golden^2
    assert geodesic_dependency_det(golden, y2) == 0


def test_dependency_det_detects_mixed_fields():
    sqrt2 = QuadraticRoot(1, 0, -2)
    sqrt3 = QuadraticRoot(1, 0, -3)
    assert geodesic_dependency_det(sqrt2, sqrt3) > 0
    one_plus_sqrt3 = QuadraticRoot(1, -2, -2)
    assert geodesic_dependency_det(sqrt2, one_plus_sqrt3) > 0
