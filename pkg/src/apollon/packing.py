"""Curvature-bounded enumeration of Apollonian packings.

The swap group acts freely and transitively on the unordered Descartes
quadruples of a packing, so a depth-first walk of the swap tree that never
reapplies the arriving generator visits every circle exactly once.  This
module reduces a quadruple to its root, enumerates curvature multisets up
to a bound, fits the growth exponent of the counting function N_P(X), and
tracks full circle geometry for rendering.  It also walks the
super-Apollonian group, which adds the four circle inversions (transpose
generators) to the swap generators.

Curvature enumeration runs on a compiled kernel when the extension module
is available; a pure-Python twin with identical behaviour takes over when
it is not, when APOLLON_PURE_PYTHON is set, or when inputs could overflow
64-bit intermediates.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .circlespace import (
    LINE_REAL_AXIS,
    Circle,
    DescartesQuadruple,
    descartes_form,
    tangency_point,
)
from .errors import CapExceededError, InvariantViolationError, UsageError

try:
    from . import _orbit as _fast_orbit
except ImportError:  # pragma: no cover - depends on the build environment
    _fast_orbit = None
from . import _orbit_py as _pure_orbit

N_CAP = 10**8
SUPER_DEPTH_CAP = 8
_REDUCE_CAP = 10**6
_GEOMETRY_NODE_CAP = 10**6
# room for 2*total - 3*old on signed 64-bit words
_INT64_SAFE = 2**62


def _select_kernel(root: Sequence[int], n_max: int):
    if _fast_orbit is None or os.environ.get("APOLLON_PURE_PYTHON"):
        return _pure_orbit
    if n_max > _INT64_SAFE // 8 or any(abs(c) > _INT64_SAFE // 8 for c in root):
        return _pure_orbit
    return _fast_orbit


def kernel_name(root: Sequence[int] = (-1, 2, 2, 3), n_max: int = 0) -> str:
    """Which kernel ("compiled" or "pure") would run for these inputs."""
    return "compiled" if _select_kernel(root, n_max) is _fast_orbit else "pure"


# ---------------------------------------------------------------------------
# root reduction


def _validate_integral(quad) -> tuple[int, int, int, int]:
    vals = tuple(quad)
    if len(vals) != 4:
        raise UsageError("a curvature quadruple has exactly four entries")
    out = []
    for v in vals:
        if isinstance(v, Fraction):
            if v.denominator != 1:
                raise UsageError(f"curvature {v} is not an integer")
            v = v.numerator
        if not isinstance(v, int):
            raise UsageError(f"curvature {v!r} is not an integer")
        out.append(v)
    if descartes_form(out) != 0:
        raise UsageError(f"{tuple(out)} is not a Descartes quadruple")
    return tuple(out)


def is_reduced(quad: Sequence[int]) -> bool:
    """True when no single swap strictly decreases the curvature sum."""
    vals = _validate_integral(quad)
    total = sum(vals)
    return all(2 * total - 3 * v >= v for v in vals)


def reduce_to_root(quad):
    """Greedily apply sum-decreasing swaps until none exists.

    Always takes the swap with the largest decrease, lowest index on ties.
    Accepts either an integer curvature quadruple (returned as a tuple) or
    a geometric DescartesQuadruple (reduced circle-wise).
    """
    if isinstance(quad, DescartesQuadruple):
        return _reduce_geometric(quad)
    vals = list(_validate_integral(quad))
    for _ in range(_REDUCE_CAP):
        i = _best_swap(vals)
        if i is None:
            return tuple(vals)
        vals[i] = 2 * (sum(vals) - vals[i]) - vals[i]
    raise CapExceededError(f"root reduction did not settle in {_REDUCE_CAP} swaps")


def _best_swap(vals) -> int | None:
    """Index of the most sum-decreasing swap, or None if all nondecrease."""
    total = sum(vals)
    best_i = None
    best_dec = 0
    for i, v in enumerate(vals):
        dec = 4 * v - 2 * total  # old - new
        if dec > best_dec:
            best_i, best_dec = i, dec
    return best_i


def _reduce_geometric(quad: DescartesQuadruple) -> DescartesQuadruple:
    for _ in range(_REDUCE_CAP):
        i = _best_swap([c.p for c in quad.circles])
        if i is None:
            return quad
        quad = quad.swap(i)
    raise CapExceededError(f"root reduction did not settle in {_REDUCE_CAP} swaps")


# ---------------------------------------------------------------------------
# curvature enumeration


@dataclass(frozen=True)
class PackingOrbit:
    """Circles of an integral packing with curvature at most `bound`.

    counts maps curvature -> number of circles (a multiset: two distinct
    circles of equal curvature count twice).  geometry, when present,
    holds Circle records from a windowed enumeration.
    """

    root: tuple[int, int, int, int]
    bound: int
    counts: dict[int, int]
    geometry: tuple[Circle, ...] | None = None

    def total(self) -> int:
        return sum(self.counts.values())

    def count_up_to(self, x: int) -> int:
        """N_P(x): the number of circles with curvature <= x."""
        return sum(k for c, k in self.counts.items() if c <= x)

    def residues(self, modulus: int) -> set[int]:
        if modulus < 2:
            raise UsageError("modulus must be at least 2")
        return {c % modulus for c in self.counts}


def _validated_root(root) -> tuple[int, int, int, int]:
    vals = _validate_integral(root)
    if not is_reduced(vals):
        raise UsageError(
            f"{vals} is not reduced; call reduce_to_root first "
            f"(it gives {reduce_to_root(vals)})"
        )
    if 0 in vals:
        raise UsageError(
            "strip packings (zero curvature in the root) have unbounded "
            "circle multiplicity; use enumerate_geometry with a window"
        )
    return vals


def _dense_counts(root: tuple[int, int, int, int], n: int):
    """Count array over curvatures 0..n plus the root's negative curvatures.

    The array includes the root's own circles.
    """
    counts = np.zeros(n + 1, dtype=np.uint32)
    kernel = _select_kernel(root, n)
    try:
        kernel.count_curvatures(*root, n, counts)
    except ValueError as exc:
        raise InvariantViolationError(str(exc)) from exc
    negatives = []
    for v in root:
        if v < 0:
            negatives.append(v)
        else:
            counts[v] += 1
    return counts, negatives


def _sparse(counts, negatives) -> dict[int, int]:
    out = {int(v): 1 for v in sorted(negatives)}
    for v in np.flatnonzero(counts):
        out[int(v)] = int(counts[v])
    return out


def enumerate_curvatures(root, n: int) -> PackingOrbit:
    """All circles of the packing with curvature <= n, as a multiset.

    The root must be reduced and n must cover its curvatures.  Branches
    are pruned as soon as the newly created curvature exceeds n, which is
    sound because new circles are inscribed in curvilinear triangles of
    strictly smaller circles (asserted at every node, not assumed).
    """
    root = _validated_root(root)
    n = int(n)
    if n > N_CAP:
        raise CapExceededError(f"bound {n} exceeds the cap {N_CAP}")
    if n < max(root):
        raise UsageError(f"bound {n} does not cover the root curvatures {root}")
    counts, negatives = _dense_counts(root, n)
    return PackingOrbit(root=root, bound=n, counts=_sparse(counts, negatives))


def tangent_curvature_multiset(root, pos: int, n: int) -> dict[int, int]:
    """Curvature multiset of the circles tangent to root circle `pos`.

    Walks the subtree that never swaps `pos`: every circle created there is
    tangent to it, and none are missed.  The other three root circles are
    tangent to it as well and are included.
    """
    root = _validated_root(root)
    if not 0 <= pos <= 3:
        raise UsageError("pos must be 0..3")
    n = int(n)
    if n > N_CAP:
        raise CapExceededError(f"bound {n} exceeds the cap {N_CAP}")
    if n < max(root):
        raise UsageError(f"bound {n} does not cover the root curvatures {root}")
    counts = np.zeros(n + 1, dtype=np.uint32)
    kernel = _select_kernel(root, n)
    try:
        kernel.tangent_curvatures(*root, pos, n, counts)
    except ValueError as exc:
        raise InvariantViolationError(str(exc)) from exc
    negatives = []
    for j, v in enumerate(root):
        if j == pos:
            continue
        if v < 0:
            negatives.append(v)
        else:
            counts[v] += 1
    return _sparse(counts, negatives)


def count_exponent(root, n: int, samples: int = 24) -> float:
    """Least-squares slope of log N_P(X) against log X.

    X runs over `samples` logarithmically spaced points in [n/100, n].
    The counting function N_P(X) ~ c X^alpha with alpha = 1.30568...
    universal across packings; a desk-scale fit lands within a few
    hundredths of that for n >= 10^6.
    """
    root = _validated_root(root)
    n = int(n)
    if n < 10**4:
        raise UsageError("need n >= 10^4 for a stable exponent fit")
    if n > N_CAP:
        raise CapExceededError(f"bound {n} exceeds the cap {N_CAP}")
    counts, negatives = _dense_counts(root, n)
    cumulative = np.cumsum(counts, dtype=np.int64)
    xs = np.rint(np.logspace(np.log10(n / 100), np.log10(n), samples)).astype(np.int64)
    xs = np.unique(np.clip(xs, 1, n))
    ys = cumulative[xs] + len(negatives)
    keep = ys > 0
    if np.count_nonzero(keep) < 3:
        raise UsageError("insufficient data points for a slope fit")
    slope = np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# geometric enumeration


def _validated_window(window):
    vals = tuple(Fraction(v) for v in window)
    if len(vals) != 4:
        raise UsageError("window is (x0, y0, x1, y1)")
    x0, y0, x1, y1 = vals
    if x0 >= x1 or y0 >= y1:
        raise UsageError("window must have positive width and height")
    return vals


def _axis_max(p, lin, t0, t1):
    """max of p t^2 + lin t over [t0, t1]."""
    best = max(p * t0 * t0 + lin * t0, p * t1 * t1 + lin * t1)
    if p < 0:
        t_star = -lin / (2 * p)
        if t0 < t_star < t1:
            best = max(best, p * t_star * t_star + lin * t_star)
    return best


def _max_form_on_window(c: Circle, window) -> Fraction:
    """max of c.form_value over the closed window rectangle."""
    x0, y0, x1, y1 = window
    return (
        _axis_max(c.p, -2 * c.r, x0, x1)
        + _axis_max(c.p, -2 * c.s, y0, y1)
        + c.q
    )


def _axis_dist2(t, t0, t1):
    if t < t0:
        return (t0 - t) * (t0 - t)
    if t > t1:
        return (t - t1) * (t - t1)
    return Fraction(0)


def circle_meets_window(c: Circle, window) -> bool:
    """Whether the circle (the curve itself, not its disk) meets the window."""
    x0, y0, x1, y1 = _validated_window(window)
    if c.is_line():
        corners = [
            -2 * c.r * x - 2 * c.s * y + c.q
            for x in (x0, x1)
            for y in (y0, y1)
        ]
        return min(corners) <= 0 <= max(corners)
    cx, cy = c.r / c.p, c.s / c.p
    rad2 = 1 / (c.p * c.p)
    near = _axis_dist2(cx, x0, x1) + _axis_dist2(cy, y0, y1)
    far = max(
        (cx - x) * (cx - x) + (cy - y) * (cy - y)
        for x in (x0, x1)
        for y in (y0, y1)
    )
    return near <= rad2 <= far


def _witness(c: Circle):
    return c.center() if not c.is_line() else c.known_point()


def _gap_misses_window(parent: DescartesQuadruple, i: int, new: Circle, window) -> bool:
    """Prove the curvilinear gap holding `new` avoids the window, if we can.

    The gap between the three retained circles contains the new circle and
    every descendant below it.  It lies (a) outside each retained circle's
    interior and (b) for each retained circle, on the far side of the chord
    through its two tangency points with the others, on the side where the
    new circle sits.  Either test failing over the whole window kills the
    subtree.  Both are exact; returning False just declines to prune.
    """
    retained = [parent.circles[j] for j in range(4) if j != i]
    for w in retained:
        if _max_form_on_window(w, window) < 0:
            return True
    x0, y0, x1, y1 = window
    wit = _witness(new)
    for k, w in enumerate(retained):
        u, v = (retained[m] for m in range(3) if m != k)
        try:
            p1 = tangency_point(w, u)
            p2 = tangency_point(w, v)
        except UsageError:
            continue
        a, b = p2.im - p1.im, p1.re - p2.re
        if a == 0 and b == 0:
            continue
        c0 = -(a * p1.re + b * p1.im)
        side = a * wit.re + b * wit.im + c0
        if side == 0:
            continue
        if side < 0:
            a, b, c0 = -a, -b, -c0
        corner_max = max(a * x + b * y + c0 for x in (x0, x1) for y in (y0, y1))
        if corner_max < 0:
            return True
    return False


def _check_growth(old, new, others):
    if new < old:
        raise InvariantViolationError(
            f"monotone growth violated: curvature {old} swapped to {new}"
        )
    if new == old:
        x, y, z = others
        if x * y + y * z + x * z != 0:
            raise InvariantViolationError(
                f"curvature tie at {old} without a symmetric retained triple"
            )


def enumerate_geometry(seed, n: int, window, node_cap: int = _GEOMETRY_NODE_CAP) -> list[Circle]:
    """Circle records of the packing that meet the window, curvature <= n.

    seed is a DescartesQuadruple or four mutually tangent Circles; swaps
    act coordinate-wise on (p, q, r, s) since each coordinate satisfies
    the same linear relation.  Every returned circle actually crosses the
    window.  Works for strip packings: subtrees whose curvilinear gap
    provably avoids the window are cut, so the walk terminates even when
    infinitely many circles share one curvature.
    """
    quad = seed if isinstance(seed, DescartesQuadruple) else DescartesQuadruple(tuple(seed))
    window = _validated_window(window)
    n = int(n)
    if n > N_CAP:
        raise CapExceededError(f"bound {n} exceeds the cap {N_CAP}")
    out = [c for c in quad.circles if c.p <= n and circle_meets_window(c, window)]
    stack = [(quad, -1)]
    nodes = 0
    while stack:
        parent, last = stack.pop()
        for i in range(4):
            if i == last:
                continue
            nodes += 1
            if nodes > node_cap:
                raise CapExceededError(f"geometry walk exceeded {node_cap} nodes")
            child = parent.swap(i)
            new = child.circles[i]
            _check_growth(
                parent.circles[i].p,
                new.p,
                [parent.circles[j].p for j in range(4) if j != i],
            )
            if new.p > n:
                continue
            if _gap_misses_window(parent, i, new, window):
                continue
            if circle_meets_window(new, window):
                out.append(new)
            stack.append((child, i))
    out.sort(key=lambda c: c.vector())
    return out


# ---------------------------------------------------------------------------
# the super-Apollonian group


def strip_base_quadruple() -> DescartesQuadruple:
    """The base quadruple with curvatures (0, 0, 2, 2).

    Lines y = 0 and y = 1 facing each other, and the circles of radius 1/2
    about i/2 and 1 + i/2.
    """
    half = Fraction(1, 2)
    return DescartesQuadruple(
        (
            LINE_REAL_AXIS,
            -Circle.line_im_eq(1),
            Circle.from_center_radius((0, half), half),
            Circle.from_center_radius((1, half), half),
        )
    )


def invert_into(quad: DescartesQuadruple, i: int) -> DescartesQuadruple:
    """Invert the whole quadruple into circle i (the transpose generator).

    Reflection across circle i in inversive coordinates sends tangent
    circles w to w + 2 w_i and reverses w_i itself; both land back on the
    unit quadric and keep all oriented tangencies.
    """
    if not 0 <= i <= 3:
        raise UsageError("inversion index must be 0..3")
    pivot = quad.circles[i]
    out = []
    for j, c in enumerate(quad.circles):
        if j == i:
            out.append(-pivot)
        else:
            out.append(
                Circle(c.p + 2 * pivot.p, c.q + 2 * pivot.q, c.r + 2 * pivot.r, c.s + 2 * pivot.s)
            )
    return DescartesQuadruple(tuple(out))


def normal_form_counts(depth: int) -> list[int]:
    """Words of each length 0..depth in super-Apollonian normal form.

    No doubled generator, and after an inversion only the swap of the same
    index or a different inversion may follow (swaps commute past
    inversions of other indices, so mixed pairs are written swap-first).
    """
    if depth < 0:
        raise UsageError("depth must be nonnegative")
    counts = [1]
    swaps, inversions = 4, 4
    if depth >= 1:
        counts.append(swaps + inversions)
    for _ in range(depth - 1):
        swaps, inversions = 3 * swaps + inversions, 4 * swaps + 3 * inversions
        counts.append(swaps + inversions)
    return counts


def _canonical_circle_key(c: Circle):
    """Orientation-free identity of the underlying curve."""
    vec = c.vector()
    for v in vec:
        if v > 0:
            return vec
        if v < 0:
            return tuple(-x for x in vec)
    raise InvariantViolationError("zero circle vector")


def super_orbit(base: DescartesQuadruple | None = None, depth: int = 2) -> list[Circle]:
    """Distinct circles reached by normal-form words of length <= depth.

    Words act on the base quadruple (default: the strip base) with the
    four swaps and the four inversions.  Two orientations of one curve
    count as a single circle; the first record found is kept, so depth 0
    returns exactly the base circles.
    """
    if base is None:
        base = strip_base_quadruple()
    if depth < 0:
        raise UsageError("depth must be nonnegative")
    if depth > SUPER_DEPTH_CAP:
        raise CapExceededError(f"depth {depth} exceeds the cap {SUPER_DEPTH_CAP}")
    seen: dict = {}
    order: list[Circle] = []

    def note(circle: Circle) -> None:
        key = _canonical_circle_key(circle)
        if key not in seen:
            seen[key] = circle
            order.append(circle)

    for c in base.circles:
        note(c)
    # letters are (is_inversion, index); stack holds (quad, last letter, length)
    stack = [(base, None, 0)]
    while stack:
        quad, last, length = stack.pop()
        if length == depth:
            continue
        for letter in _allowed_letters(last):
            is_inv, i = letter
            child = invert_into(quad, i) if is_inv else quad.swap(i)
            for c in child.circles:
                note(c)
            stack.append((child, letter, length + 1))
    return order


def _allowed_letters(last):
    if last is None:
        return [(False, i) for i in range(4)] + [(True, i) for i in range(4)]
    was_inv, j = last
    letters = []
    if was_inv:
        letters.append((False, j))
        letters.extend((True, i) for i in range(4) if i != j)
    else:
        letters.extend((False, i) for i in range(4) if i != j)
        letters.extend((True, i) for i in range(4))
    return letters
