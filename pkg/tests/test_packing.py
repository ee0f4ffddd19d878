"""Orbit enumeration against independent geometric and form-based oracles."""

import itertools
from collections import Counter
from fractions import Fraction

import pytest

from apollon import quadforms
from apollon.circlespace import (
    Circle,
    DescartesQuadruple,
    descartes_form,
    inner_product,
    mat_mul,
    mat_transpose,
    soddy_swap,
)
from apollon.errors import CapExceededError, InvariantViolationError, UsageError
from apollon.packing import (
    PackingOrbit,
    circle_meets_window,
    count_exponent,
    enumerate_curvatures,
    enumerate_geometry,
    invert_into,
    is_reduced,
    kernel_name,
    normal_form_counts,
    reduce_to_root,
    strip_base_quadruple,
    super_orbit,
    tangent_curvature_multiset,
)

ROOT = (-1, 2, 2, 3)


def bowl_quadruple() -> DescartesQuadruple:
    """The (-1,2,2,3) packing: unit bounding circle, two half-disks, top circle."""
    return DescartesQuadruple(
        (
            Circle(-1, 1, 0, 0),
            Circle(2, 0, -1, 0),
            Circle(2, 0, 1, 0),
            Circle(3, 1, 0, 2),
        )
    )


# ---------------------------------------------------------------------------
# root reduction


def test_reduce_examples():
    assert reduce_to_root((15, 2, 2, 3)) == (-1, 2, 2, 3)
    assert reduce_to_root((-1, 2, 2, 3)) == (-1, 2, 2, 3)
    assert reduce_to_root((0, 0, 2, 2)) == (0, 0, 2, 2)


def test_reduce_rejects_non_descartes():
    with pytest.raises(UsageError):
        reduce_to_root((1, 2, 3, 4))
    with pytest.raises(UsageError):
        reduce_to_root((1, 2, 3))


def test_is_reduced():
    assert is_reduced((-1, 2, 2, 3))
    assert is_reduced((0, 0, 2, 2))
    assert not is_reduced((15, 2, 2, 3))


def test_reduce_returns_to_root_after_random_walk():
    import random

    rng = random.Random(7)
    for _ in range(40):
        quad = list(ROOT)
        last = -1
        for _ in range(rng.randrange(1, 12)):
            i = rng.choice([j for j in range(4) if j != last])
            quad = list(soddy_swap(quad, i))
            last = i
        reduced = reduce_to_root(tuple(int(v) for v in quad))
        assert sorted(reduced) == sorted(ROOT)
        assert descartes_form(reduced) == 0


def test_reduce_geometric_quadruple():
    base = bowl_quadruple()
    walked = base.swap(3).swap(0).swap(2)
    reduced = reduce_to_root(walked)
    # the packing has two root quadruples, mirror images through the x-axis
    # sharing the bounding circle and both half-disks
    vectors = {c.vector() for c in reduced.circles}
    shared = {c.vector() for c in base.circles[:3]}
    assert shared < vectors
    assert vectors - shared <= {Circle(3, 1, 0, 2).vector(), Circle(3, 1, 0, -2).vector()}
    assert sorted(c.p for c in reduced.circles) == sorted(ROOT)


# ---------------------------------------------------------------------------
# curvature enumeration


def test_enumerate_smallest_bound():
    orbit = enumerate_curvatures(ROOT, 5)
    assert orbit.counts == {-1: 1, 2: 2, 3: 2}
    assert orbit.total() == 5
    assert orbit.root == ROOT
    assert orbit.bound == 5


def geometric_count_oracle(base: DescartesQuadruple, n: int) -> Counter:
    """Count circles by exact identity, with no reliance on tree freeness."""
    seen_quads = {frozenset(c.vector() for c in base.circles)}
    circles = {c.vector() for c in base.circles}
    queue = [base]
    while queue:
        quad = queue.pop()
        for i in range(4):
            child = quad.swap(i)
            if child.circles[i].p > n:
                continue
            key = frozenset(c.vector() for c in child.circles)
            if key in seen_quads:
                continue
            seen_quads.add(key)
            circles.add(child.circles[i].vector())
            queue.append(child)
    return Counter(int(vec[0]) for vec in circles)


def test_enumerate_matches_geometric_oracle():
    oracle = geometric_count_oracle(bowl_quadruple(), 60)
    orbit = enumerate_curvatures(ROOT, 60)
    assert orbit.counts == dict(oracle)


def test_enumerate_residues_mod_24():
    orbit = enumerate_curvatures(ROOT, 10**4)
    assert orbit.residues(24) <= {2, 3, 6, 11, 14, 15, 18, 23}
    orbit = enumerate_curvatures((-3, 5, 8, 8), 3000)
    assert orbit.residues(24) <= {0, 5, 8, 12, 20, 21}


def test_enumerate_validation():
    with pytest.raises(UsageError):
        enumerate_curvatures((15, 2, 2, 3), 100)  # unreduced
    with pytest.raises(UsageError):
        enumerate_curvatures((0, 0, 2, 2), 100)  # strip
    with pytest.raises(UsageError):
        enumerate_curvatures(ROOT, 2)  # bound below the root
    with pytest.raises(CapExceededError):
        enumerate_curvatures(ROOT, 10**8 + 1)


def test_count_up_to_monotone():
    orbit = enumerate_curvatures(ROOT, 500)
    values = [orbit.count_up_to(x) for x in range(-1, 501)]
    assert values == sorted(values)
    assert values[-1] == orbit.total()


def test_kernel_parity():
    fast = pytest.importorskip("apollon._orbit")
    from apollon import _orbit_py
    import numpy as np

    for root in (ROOT, (-3, 5, 8, 8)):
        a = np.zeros(2001, dtype=np.uint32)
        b = np.zeros(2001, dtype=np.uint32)
        assert fast.count_curvatures(*root, 2000, a) == _orbit_py.count_curvatures(
            *root, 2000, b
        )
        assert (a == b).all()


def test_kernel_name_env_override(monkeypatch):
    assert kernel_name(ROOT, 100) in ("compiled", "pure")
    monkeypatch.setenv("APOLLON_PURE_PYTHON", "1")
    assert kernel_name(ROOT, 100) == "pure"


# ---------------------------------------------------------------------------
# tangency multisets, two pipelines


def test_tangent_multisets_match_form_values():
    n = 1000
    for pos in range(4):
        others = [ROOT[j] for j in range(4) if j != pos]
        oracle = quadforms.tangent_curvatures([ROOT[pos], *others], n)
        mine = tangent_curvature_multiset(ROOT, pos, n)
        assert mine == dict(oracle)


def test_tangent_multiset_contains_root_companions():
    counts = tangent_curvature_multiset(ROOT, 0, 10)
    # the three root companions 2, 2, 3 plus the second curvature-3 circle
    assert counts[2] == 2
    assert counts[3] == 2


# ---------------------------------------------------------------------------
# growth exponent


def test_count_exponent_near_apollonian_alpha():
    alpha = count_exponent(ROOT, 10**5)
    assert 1.2 < alpha < 1.4


def test_count_exponent_universal_across_roots():
    a = count_exponent(ROOT, 10**5)
    b = count_exponent((-3, 5, 8, 8), 10**5)
    assert abs(a - b) < 0.08


def test_count_exponent_validation():
    with pytest.raises(UsageError):
        count_exponent(ROOT, 5000)


# ---------------------------------------------------------------------------
# geometry


def window_circles_brute(seed: DescartesQuadruple, n: int, window) -> set:
    """Window filter applied after an unwindowed bounded enumeration."""
    seen_quads = {frozenset(c.vector() for c in seed.circles)}
    circles = set(seed.circles)
    queue = [seed]
    while queue:
        quad = queue.pop()
        for i in range(4):
            child = quad.swap(i)
            if child.circles[i].p > n:
                continue
            key = frozenset(c.vector() for c in child.circles)
            if key in seen_quads:
                continue
            seen_quads.add(key)
            circles.add(child.circles[i])
            queue.append(child)
    return {
        c.vector() for c in circles if c.p <= n and circle_meets_window(c, window)
    }


def test_geometry_bowl_matches_brute_filter():
    window = (Fraction(-1), Fraction(-1), Fraction(1), Fraction(1))
    got = enumerate_geometry(bowl_quadruple(), 40, window)
    assert {c.vector() for c in got} == window_circles_brute(bowl_quadruple(), 40, window)


def test_geometry_corner_window():
    # a window tucked against the bounding circle sees few circles
    window = (Fraction(7, 10), Fraction(-1, 10), Fraction(1), Fraction(1, 10))
    got = enumerate_geometry(bowl_quadruple(), 200, window)
    assert {c.vector() for c in got} == window_circles_brute(
        bowl_quadruple(), 200, window
    )
    for c in got:
        assert c.p <= 200
        assert circle_meets_window(c, window)


def test_geometry_strip_terminates_and_translates():
    window = (Fraction(-2), Fraction(0), Fraction(3), Fraction(1))
    got = enumerate_geometry(strip_base_quadruple(), 50, window)
    unit = [c for c in got if c.p == 2]
    centers = sorted(c.center().re for c in unit)
    assert centers == [-2, -1, 0, 1, 2, 3]
    lines = [c for c in got if c.is_line()]
    assert len(lines) == 2


def test_geometry_no_proper_intersections():
    window = (Fraction(-1), Fraction(-1), Fraction(1), Fraction(1))
    got = enumerate_geometry(bowl_quadruple(), 30, window)
    for c1, c2 in itertools.combinations(got, 2):
        assert abs(inner_product(c1, c2)) >= 1


def test_geometry_rejects_bad_seed():
    with pytest.raises(InvariantViolationError):
        enumerate_geometry(
            (
                Circle(-1, 1, 0, 0),
                Circle(2, 0, -1, 0),
                Circle(2, 0, 1, 0),
                Circle(3, 1, 2, 0),  # tangent nowhere useful
            ),
            10,
            (0, 0, 1, 1),
        )


def test_geometry_node_cap():
    window = (Fraction(-2), Fraction(0), Fraction(3), Fraction(1))
    with pytest.raises(CapExceededError):
        enumerate_geometry(strip_base_quadruple(), 50, window, node_cap=5)


def test_geometry_window_validation():
    with pytest.raises(UsageError):
        enumerate_geometry(bowl_quadruple(), 10, (0, 0, 0, 1))


# ---------------------------------------------------------------------------
# super-Apollonian orbit


def test_strip_base_curvatures():
    base = strip_base_quadruple()
    assert [c.p for c in base.circles] == [0, 0, 2, 2]


def test_invert_into_involution_and_curvatures():
    base = strip_base_quadruple()
    inv = invert_into(base, 2)
    assert [c.p for c in inv.circles] == [4, 4, -2, 6]
    back = invert_into(inv, 2)
    assert [c.vector() for c in back.circles] == [c.vector() for c in base.circles]


def test_inversions_commute_with_other_swaps():
    base = bowl_quadruple()
    for j in range(4):
        for k in range(4):
            if j == k:
                continue
            one = invert_into(base, k).swap(j)
            two = invert_into(base.swap(j), k)
            assert [c.vector() for c in one.circles] == [
                c.vector() for c in two.circles
            ]


def test_normal_form_counts_against_brute_filter():
    # letters 0..3 swaps, 4..7 inversions
    def allowed(prev, nxt):
        if prev is None:
            return True
        if prev == nxt:
            return False
        if prev >= 4 and nxt < 4 and nxt != prev - 4:
            return False
        return True

    want = normal_form_counts(5)
    assert want == [1, 8, 44, 224, 1124, 5624]
    for depth in range(6):
        brute = 0
        for word in itertools.product(range(8), repeat=depth):
            ok = all(allowed(a, b) for a, b in zip((None,) + word, word))
            brute += ok
        assert brute == want[depth]


def test_normal_form_words_hit_distinct_matrices():
    # swap i acts on a row-vector quadruple matrix by the row operation L_i;
    # inversion i acts by its transpose
    from apollon.circlespace import GENERATORS

    left = [mat_transpose(g) for g in GENERATORS]
    letters = left + [mat_transpose(m) for m in left]
    identity = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
    seen = {identity}
    frontier = [(identity, None)]
    for depth in range(1, 4):
        nxt = []
        for mat, last in frontier:
            for idx in range(8):
                if last is not None:
                    if idx == last:
                        continue
                    if last >= 4 and idx < 4 and idx != last - 4:
                        continue
                word = mat_mul(letters[idx], mat)
                nxt.append((word, idx))
                seen.add(word)
        frontier = nxt
        assert len(seen) == sum(normal_form_counts(depth))


def test_super_orbit_depths():
    base = strip_base_quadruple()
    d0 = super_orbit(base, 0)
    assert [c.vector() for c in d0] == [c.vector() for c in base.circles]
    d1 = super_orbit(base, 1)
    # four swaps contribute one new circle each, four inversions three each
    assert len(d1) == 4 + 4 + 12
    assert {c.vector() for c in d0} <= {c.vector() for c in d1}


def test_super_orbit_caps():
    with pytest.raises(CapExceededError):
        super_orbit(None, 9)
    with pytest.raises(UsageError):
        super_orbit(None, -1)


def _moved_key(vec, t):
    from apollon.packing import _canonical_circle_key

    p, q, r, s = vec
    return _canonical_circle_key(Circle(p, q + 2 * r * t + p * t * t, r + p * t, s))


def test_super_orbit_translation_symmetry_depth6():
    # No finite truncation can be literally invariant under z -> z + 1 (any
    # circle would drag in all its translates), so the strip symmetries show
    # up at depth 6 in two exact forms: translating base circles costs one
    # letter, so both translates of the depth-5 set land inside the depth-6
    # set; and x -> 1 - x, which permutes the base circles, preserves every
    # depth exactly.
    from apollon.packing import _canonical_circle_key

    base = strip_base_quadruple()
    inner = {_canonical_circle_key(c) for c in super_orbit(base, 5)}
    keys = {_canonical_circle_key(c) for c in super_orbit(base, 6)}
    assert all(_moved_key(k, 1) in keys for k in inner)
    assert all(_moved_key(k, -1) in keys for k in inner)

    def reflected(vec):
        p, q, r, s = vec
        return _canonical_circle_key(Circle(p, q - 2 * r + p, -r + p, s))

    assert {reflected(k) for k in keys} == keys
