"""Dictionaries between upper half plane/space and Minkowski models.

A point of the hyperbolic plane can be stored as a complex number with
positive imaginary part, or as a projective triple [A : B : C] inside the
light cone of the discriminant form B^2 - 4AC.  The bridge between the two
is the quadratic formula: [A : B : C] goes to the upper root of
Ax^2 + Bx + C.  One dimension up, quadruples [p : q : r : s] carry the
determinant form r^2 + s^2 - pq, and the analogous bridge lands in the
upper half space.  This module implements both dictionaries, the matching
distance functions, the induced 3x3 representation of PSL2, and the
enumeration of quadratic points used by the starscape renderer.

Exact mode uses Fractions plus an explicit square root symbol, so that
equivariance identities can be asserted with ==; distances are floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

from .contfrac import QuadraticRoot
from .errors import UsageError

Rational = Union[int, Fraction]
Vec3 = Sequence[Rational]
Vec4 = Sequence[Rational]
Mat2 = Sequence[Sequence[Rational]]

_STARSCAPE_HEIGHT_CAP = 10**3


def _squarefree_kernel(n: int) -> tuple[int, int]:
    """Split n > 0 as f^2 * d with d squarefree; returns (f, d)."""
    f, d, m, p = 1, 1, n, 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return f, d * m


@dataclass(frozen=True)
class UHPPoint:
    """Exact upper-half-plane point re + im_coeff*sqrt(im_rad)*i.

    im_rad is kept squarefree and im_coeff positive, so equal points
    compare equal with ==.
    """

    re: Fraction
    im_coeff: Fraction
    im_rad: int = 1

    def __post_init__(self) -> None:
        re = Fraction(self.re)
        coeff = Fraction(self.im_coeff)
        rad = self.im_rad
        if rad < 1:
            raise UsageError("imaginary radicand must be positive")
        f, d = _squarefree_kernel(rad)
        coeff *= f
        if coeff <= 0:
            raise UsageError("point must lie strictly above the real axis")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im_coeff", coeff)
        object.__setattr__(self, "im_rad", d)

    @property
    def im(self) -> float:
        return float(self.im_coeff) * math.sqrt(self.im_rad)

    def as_complex(self) -> complex:
        return complex(float(self.re), self.im)


def _to_complex(z) -> complex:
    if isinstance(z, UHPPoint):
        return z.as_complex()
    return complex(z)


def mink_normalize(vec: Sequence[Rational]) -> tuple[int, ...]:
    """Scale a rational projective vector to primitive integers,
    first nonzero entry positive."""
    fracs = [Fraction(x) for x in vec]
    if all(x == 0 for x in fracs):
        raise UsageError("zero vector is not projective")
    scale = math.lcm(*(x.denominator for x in fracs))
    ints = [int(x * scale) for x in fracs]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


# ---------------------------------------------------------------------------
# the plane: [A:B:C] <-> roots


def coeffs_to_root(v: Vec3) -> UHPPoint:
    """Upper root of Ax^2 + Bx + C for [A:B:C] inside the light cone."""
    a, b, c = mink_normalize(v)
    disc = b * b - 4 * a * c
    if disc >= 0:
        raise UsageError("vector lies on or outside the light cone")
    f, d = _squarefree_kernel(-disc)
    return UHPPoint(Fraction(-b, 2 * a), Fraction(f, 2 * abs(a)), d)


def root_to_coeffs(z: UHPPoint) -> tuple[int, int, int]:
    """Primitive [A:B:C] with upper root z; A > 0."""
    norm = z.re * z.re + z.im_coeff * z.im_coeff * z.im_rad
    return mink_normalize((Fraction(1), -2 * z.re, norm))


def mobius_uhp(m: Mat2, z: UHPPoint) -> UHPPoint:
    """Exact Mobius action (az+b)/(cz+d) on an upper-half-plane point."""
    (a, b), (c, d) = m
    det = Fraction(a) * Fraction(d) - Fraction(b) * Fraction(c)
    if det <= 0:
        raise UsageError("matrix must have positive determinant")
    u, w, rad = z.re, z.im_coeff, z.im_rad
    denom = (c * u + d) ** 2 + c * c * w * w * rad
    if denom == 0:
        raise UsageError("point maps to infinity")
    re = ((a * u + b) * (c * u + d) + a * c * w * w * rad) / denom
    return UHPPoint(re, w * det / denom, rad)


def psl2_to_oq3(m: Mat2) -> tuple[tuple, tuple, tuple]:
    """The 3x3 matrix acting on coefficient triples [A:B:C] so that upper
    roots move by the Mobius action of m; requires det(m) = 1.

    Images compose in the same order as the matrices.  The raw coefficient
    substitution composes in reverse order; swapping the diagonal of m
    first straightens that out, and leaves the generators (which are fixed
    by the swap) untouched.
    """
    (a, b), (c, d) = m
    det = a * d - b * c
    exact = all(isinstance(x, (int, Fraction)) for x in (a, b, c, d))
    if (det != 1) if exact else (abs(det - 1) > 1e-9):
        raise UsageError("matrix must have determinant 1")
    a, d = d, a
    return (
        (a * a, -a * c, c * c),
        (-2 * a * b, b * c + a * d, -2 * c * d),
        (b * b, -b * d, d * d),
    )


def apply_oq3(m3, v: Vec3) -> tuple:
    return tuple(sum(row[j] * v[j] for j in range(3)) for row in m3)


# ---------------------------------------------------------------------------
# distances


def dist_uhp(z, w) -> float:
    """Hyperbolic distance in the upper half plane."""
    z, w = _to_complex(z), _to_complex(w)
    if z.imag <= 0 or w.imag <= 0:
        raise UsageError("points must lie strictly above the real axis")
    return math.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))


def dist_uhs(p: Sequence[float], q: Sequence[float]) -> float:
    """Hyperbolic distance between (x, y, t) points of the upper half space."""
    x1, y1, t1 = p
    x2, y2, t2 = q
    if t1 <= 0 or t2 <= 0:
        raise UsageError("points must have positive height")
    sq = (x1 - x2) ** 2 + (y1 - y2) ** 2 + (t1 - t2) ** 2
    return math.acosh(1 + sq / (2 * t1 * t2))


def dist_mink3(u: Vec3, v: Vec3) -> float:
    """Distance between interior triples, cosh d = |<u,v>| / sqrt(D1*D2)."""
    a1, b1, c1 = (Fraction(x) for x in u)
    a2, b2, c2 = (Fraction(x) for x in v)
    d1 = b1 * b1 - 4 * a1 * c1
    d2 = b2 * b2 - 4 * a2 * c2
    if d1 >= 0 or d2 >= 0:
        raise UsageError("vectors must lie inside the light cone")
    inner = b1 * b2 - 2 * a1 * c2 - 2 * a2 * c1
    return math.acosh(max(1.0, math.sqrt(float(inner * inner / (d1 * d2)))))


def dist_mink4(u: Vec4, v: Vec4) -> float:
    """Distance between quadruples on the same side of the light cone,
    cosh d = |<u,v>| / sqrt(Q1*Q2).

    For two interior (Q < 0) vectors this is the hyperbolic distance; for
    two exterior vectors it is the inversive distance between the circles,
    defined only when they do not cross.
    """
    p1, q1, r1, s1 = (Fraction(x) for x in u)
    p2, q2, r2, s2 = (Fraction(x) for x in v)
    qu = r1 * r1 + s1 * s1 - p1 * q1
    qv = r2 * r2 + s2 * s2 - p2 * q2
    if qu * qv <= 0:
        raise UsageError("vectors must lie on the same side of the light cone")
    inner = r1 * r2 + s1 * s2 - (p1 * q2 + p2 * q1) / 2
    ratio = inner * inner / (qu * qv)
    if ratio < 1:
        raise UsageError("circles cross; no distance is defined")
    return math.acosh(math.sqrt(float(ratio)))


# ---------------------------------------------------------------------------
# the space: [p:q:r:s] <-> upper half space


def uhs_from_mink(v: Vec4) -> tuple[float, float, float]:
    """Map [p:q:r:s] to a point (x, y, t) of the upper half space.

    Interior vectors (r^2 + s^2 - pq < 0) are hyperbolic points and the map
    is the model isometry.  Exterior vectors are circles, sent to the summit
    of the hemisphere over the circle; this branch inverts mink_from_uhs.
    The light cone itself is boundary data and is rejected.
    """
    p, q, r, s = (Fraction(x) for x in mink_normalize(v))
    if p == 0:
        raise UsageError("vector corresponds to the point at infinity")
    qv = r * r + s * s - p * q
    if qv == 0:
        raise UsageError("vector lies on the light cone")
    t = math.sqrt(abs(float(qv))) / abs(float(p))
    return (float(r / p), float(s / p), t)


def mink_from_uhs(point: Sequence, interior: bool = False) -> tuple[int, ...]:
    """Inverse of uhs_from_mink: (x, y, t) -> [1 : x^2+y^2-t^2 : x : y].

    With interior=True the t^2 term is added instead, producing the
    interior vector whose isometric image is the same point.
    """
    x, y, t = (Fraction(f) for f in point)
    if t <= 0:
        raise UsageError("point must have positive height")
    sign = 1 if interior else -1
    return mink_normalize((Fraction(1), x * x + y * y + sign * t * t, x, y))


# ---------------------------------------------------------------------------
# starscape enumeration


def starscape_points(
    height: int, window: tuple
) -> list[tuple[UHPPoint, int]]:
    """All upper roots of primitive integer quadratics with coefficients
    bounded by height and negative discriminant, inside the window.

    The window is (re_min, re_max, im_min, im_max) with im_min >= 0; the
    membership test is exact.  Each point is tagged with its discriminant
    for radius scaling.  Points are sorted by (re, im) for stable output.
    """
    if height < 1 or height > _STARSCAPE_HEIGHT_CAP:
        raise UsageError("height bound must be between 1 and 10^3")
    x_lo, x_hi, y_lo, y_hi = (Fraction(w) for w in window)
    if y_lo < 0:
        raise UsageError("window must lie in the closed upper half plane")
    out = []
    for a in range(1, height + 1):
        for b in range(-height, height + 1):
            for c in range(-height, height + 1):
                disc = b * b - 4 * a * c
                if disc >= 0 or gcd(gcd(a, b), c) != 1:
                    continue
                re = Fraction(-b, 2 * a)
                if not x_lo <= re <= x_hi:
                    continue
                im_sq = Fraction(-disc, 4 * a * a)
                if not y_lo * y_lo <= im_sq <= y_hi * y_hi:
                    continue
                f, d = _squarefree_kernel(-disc)
                out.append((UHPPoint(re, Fraction(f, 2 * a), d), disc))
    out.sort(key=lambda pd: (pd[0].re, pd[0].im_coeff ** 2 * pd[0].im_rad))
    return out


# ---------------------------------------------------------------------------
# rational geodesics


def _surd_coords(x) -> tuple[Fraction, Fraction, int]:
    """Write an exact real as u + v*sqrt(d) with d squarefree."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x), Fraction(0), 1
    if isinstance(x, QuadraticRoot):
        if x.is_rational():
            return x.as_fraction(), Fraction(0), 1
        f, d = _squarefree_kernel(x.discriminant)
        sign = 1 if x.plus else -1
        return (
            Fraction(-x.b, 2 * x.a),
            Fraction(sign * f, 2 * x.a),
            d,
        )
    raise UsageError(f"cannot interpret {x!r} as an exact real")


def geodesic_dependency_det(x, y_squared) -> Fraction:
    """Exact witness for whether x + yi lies on a rational geodesic.

    Writes the triple (1, z*conj(z), z + conj(z)) in coordinates over the
    field generated by x and y^2 and returns the Gram determinant of the
    resulting vectors.  The value is 0 exactly when the triple is
    Q-linearly dependent, which happens exactly when the point lies on a
    geodesic with endpoints rational or conjugate real quadratic.
    """
    xu, xv, xd = _surd_coords(x)
    yu, yv, yd = _surd_coords(y_squared)
    # z*conj(z) = x^2 + y^2 and z + conj(z) = 2x, spread over basis
    # (1, sqrt(xd), sqrt(yd)); the two radicals coincide when xd == yd
    norm0 = xu * xu + xv * xv * xd + yu
    norm_x = 2 * xu * xv
    norm_y = yv
    trace0 = 2 * xu
    trace_x = 2 * xv
    if xd == yd:
        rows = [
            (Fraction(1), Fraction(0)),
            (norm0, norm_x + norm_y),
            (trace0, trace_x),
        ]
    else:
        rows = [
            (Fraction(1), Fraction(0), Fraction(0)),
            (norm0, norm_x, norm_y),
            (trace0, trace_x, Fraction(0)),
        ]
    gram = [[sum(a * b for a, b in zip(r1, r2)) for r2 in rows] for r1 in rows]
    (g00, g01, g02), (g10, g11, g12), (g20, g21, g22) = gram
    return (
        g00 * (g11 * g22 - g12 * g21)
        - g01 * (g10 * g22 - g12 * g20)
        + g02 * (g10 * g21 - g11 * g20)
    )
