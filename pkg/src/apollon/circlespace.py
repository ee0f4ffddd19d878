"""Circles as points on a quadric: exact (p, q, r, s) coordinates.

A circle or line is stored as (p, q, r, s) with

    p = curvature,
    q = co-curvature (curvature of the image under inversion in the unit
        circle),
    (r, s) = curvature times center,

normalized so r^2 + s^2 - pq = 1.  The pairing

    <v1, v2> = r1 r2 + s1 s2 - (p1 q2 + p2 q1)/2

is preserved by Moebius maps; oriented tangency is <v1, v2> = -1.  A circle
and its negation describe the same set with opposite orientations.

Soddy quadruples of curvatures (a, b, c, d) satisfy the Descartes identity
(a+b+c+d)^2 = 2(a^2+b^2+c^2+d^2), and the four swap generators below act on
curvature row vectors from the right, replacing one entry by twice the sum
of the others minus itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from apollon.errors import InvariantViolationError, UsageError
from apollon.numtheory import GaussianInt

Quad = tuple[int, int, int, int]

# Swap generators acting on curvature row vectors from the right.
GENERATORS: tuple[tuple[Quad, ...], ...] = (
    ((-1, 0, 0, 0), (2, 1, 0, 0), (2, 0, 1, 0), (2, 0, 0, 1)),
    ((1, 2, 0, 0), (0, -1, 0, 0), (0, 2, 1, 0), (0, 2, 0, 1)),
    ((1, 0, 2, 0), (0, 1, 2, 0), (0, 0, -1, 0), (0, 0, 2, 1)),
    ((1, 0, 0, 2), (0, 1, 0, 2), (0, 0, 1, 2), (0, 0, 0, -1)),
)


def descartes_form(quad: Sequence) -> Fraction:
    """Q(a,b,c,d) = (a+b+c+d)^2 - 2(a^2+b^2+c^2+d^2); zero on Soddy quadruples."""
    a, b, c, d = (Fraction(x) for x in quad)
    return (a + b + c + d) ** 2 - 2 * (a * a + b * b + c * c + d * d)


def is_descartes(quad: Sequence) -> bool:
    return descartes_form(quad) == 0


def soddy_swap(quad: Sequence, i: int):
    """Replace entry i by 2*(sum of the others) - entry; an involution."""
    if not 0 <= i <= 3:
        raise UsageError("swap index must be 0..3")
    out = list(quad)
    out[i] = 2 * (sum(quad) - quad[i]) - quad[i]
    return tuple(out)


def apply_generator(quad: Sequence, i: int):
    """Right action of the i-th swap matrix on a curvature row vector."""
    if not 0 <= i <= 3:
        raise UsageError("generator index must be 0..3")
    m = GENERATORS[i]
    return tuple(sum(quad[k] * m[k][j] for k in range(4)) for j in range(4))


def mat_mul(a, b):
    """4x4 integer matrix product (tuples of row tuples)."""
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4)
    )


def mat_transpose(a):
    return tuple(tuple(a[j][i] for j in range(4)) for i in range(4))


IDENTITY4 = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))


# ---------------------------------------------------------------------------
# exact complex rationals


@dataclass(frozen=True)
class Cq:
    """An exact complex rational re + im*i."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(z) -> "Cq":
        if isinstance(z, Cq):
            return z
        if isinstance(z, GaussianInt):
            return Cq(Fraction(z.re), Fraction(z.im))
        if isinstance(z, (int, Fraction)):
            return Cq(Fraction(z), Fraction(0))
        if isinstance(z, tuple) and len(z) == 2:
            return Cq(Fraction(z[0]), Fraction(z[1]))
        raise UsageError(f"not an exact complex value: {z!r}")

    def __add__(self, other) -> "Cq":
        other = Cq.of(other)
        return Cq(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Cq":
        other = Cq.of(other)
        return Cq(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "Cq":
        return Cq.of(other) - self

    def __mul__(self, other) -> "Cq":
        other = Cq.of(other)
        return Cq(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Cq":
        other = Cq.of(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError
        c = self * other.conj()
        return Cq(c.re / n, c.im / n)

    def __neg__(self) -> "Cq":
        return Cq(-self.re, -self.im)

    def conj(self) -> "Cq":
        return Cq(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


CQ_ZERO = Cq(Fraction(0), Fraction(0))
CQ_ONE = Cq(Fraction(1), Fraction(0))
CQ_I = Cq(Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# circles


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _frac_parse(s) -> Fraction:
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, int):
        return Fraction(s)
    raise UsageError(f"expected an exact rational, got {s!r}")


@dataclass(frozen=True)
class Circle:
    """An oriented circle or line on the unit quadric r^2 + s^2 - pq = 1."""

    p: Fraction
    q: Fraction
    r: Fraction
    s: Fraction

    def __post_init__(self):
        for name in ("p", "q", "r", "s"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.r * self.r + self.s * self.s - self.p * self.q != 1:
            raise InvariantViolationError(
                f"({self.p},{self.q},{self.r},{self.s}) is off the unit quadric"
            )

    @staticmethod
    def from_center_radius(center, radius) -> "Circle":
        cx, cy = (
            (center.re, center.im) if isinstance(center, Cq) else (Fraction(center[0]), Fraction(center[1]))
        )
        radius = Fraction(radius)
        if radius <= 0:
            raise UsageError("radius must be positive")
        p = 1 / radius
        return Circle(p, (cx * cx + cy * cy - radius * radius) / radius, cx / radius, cy / radius)

    @staticmethod
    def line_im_eq(height) -> "Circle":
        """The horizontal line Im z = height, tangent-compatible with disks above it.

        <line, disk> = -1 for disks resting on the line from above; negate
        for the other orientation.
        """
        return Circle(Fraction(0), Fraction(-2 * Fraction(height)), Fraction(0), Fraction(-1))

    @property
    def curvature(self) -> Fraction:
        return self.p

    @property
    def cocurvature(self) -> Fraction:
        return self.q

    def is_line(self) -> bool:
        return self.p == 0

    def center(self) -> Cq:
        if self.p == 0:
            raise UsageError("a line has no center")
        return Cq(self.r / self.p, self.s / self.p)

    def radius(self) -> Fraction:
        if self.p == 0:
            raise UsageError("a line has no radius")
        return 1 / abs(self.p)

    def __neg__(self) -> "Circle":
        return Circle(-self.p, -self.q, -self.r, -self.s)

    def vector(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.p, self.q, self.r, self.s)

    def integer_vector(self) -> tuple[int, int, int, int] | None:
        """(p, q, r, s) as integers if all four are integral, else None."""
        if all(x.denominator == 1 for x in self.vector()):
            return tuple(int(x) for x in self.vector())
        return None

    def form_value(self, z: Cq) -> Fraction:
        """p|z|^2 - 2 r Re(z) - 2 s Im(z) + q; zero exactly on the circle."""
        z = Cq.of(z)
        return self.p * z.norm() - 2 * self.r * z.re - 2 * self.s * z.im + self.q

    def known_point(self) -> Cq:
        """An exact point on the circle: (r + (s-1)i)/p, or (r + si) q/2 on a line.

        Both follow from r^2 + s^2 - pq = 1.
        """
        if self.p != 0:
            return Cq(self.r / self.p, (self.s - 1) / self.p)
        # line: r x + s y = q/2 with r^2 + s^2 = 1 (rational direction)
        return Cq(self.r * self.q / 2, self.s * self.q / 2)

    def to_json_dict(self) -> dict:
        return {"p": _frac_str(self.p), "q": _frac_str(self.q), "r": _frac_str(self.r), "s": _frac_str(self.s)}

    @staticmethod
    def from_json_dict(d: dict) -> "Circle":
        return Circle(*(_frac_parse(d[k]) for k in ("p", "q", "r", "s")))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json(s: str) -> "Circle":
        return Circle.from_json_dict(json.loads(s))


LINE_REAL_AXIS = Circle(Fraction(0), Fraction(0), Fraction(0), Fraction(-1))
"""The extended real line, tangent-compatible with disks in the upper half plane."""


def inner_product(c1: Circle, c2: Circle) -> Fraction:
    """<v1,v2> = r1 r2 + s1 s2 - (p1 q2 + p2 q1)/2; -1 on oriented tangent pairs."""
    return (
        c1.r * c2.r
        + c1.s * c2.s
        - (c1.p * c2.q + c2.p * c1.q) / 2
    )


def is_tangent(c1: Circle, c2: Circle) -> bool:
    return inner_product(c1, c2) == -1


def tangency_point(c1: Circle, c2: Circle) -> Cq:
    """The point where two oriented-tangent circles touch."""
    if not is_tangent(c1, c2):
        raise UsageError("circles are not tangent")
    pp = c1.p + c2.p
    if pp == 0:
        # two parallel lines touch at infinity only
        raise UsageError("tangency point at infinity")
    return Cq((c1.r + c2.r) / pp, (c1.s + c2.s) / pp)


# ---------------------------------------------------------------------------
# Moebius maps


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b)/(c z + d), composed with complex conjugation first if conj.

    Entries are exact complex rationals; for circle transport the determinant
    must have norm 1 (e.g. any unit of Z[i]).
    """

    a: Cq
    b: Cq
    c: Cq
    d: Cq
    conj: bool = False

    @staticmethod
    def of(a, b, c, d, conj: bool = False) -> "MobiusMap":
        return MobiusMap(Cq.of(a), Cq.of(b), Cq.of(c), Cq.of(d), conj)

    def det(self) -> Cq:
        return self.a * self.d - self.b * self.c

    def is_unit_det(self) -> bool:
        return self.det().norm() == 1

    def inverse(self) -> "MobiusMap":
        # for (M, conj): inverse is (conj(M)^-1 entries, conj) since
        # conjugation commutes past by conjugating the entries
        a, b, c, d = self.d, -self.b, -self.c, self.a
        if self.conj:
            a, b, c, d = a.conj(), b.conj(), c.conj(), d.conj()
        return MobiusMap(a, b, c, d, self.conj)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other: (self.compose(other))(z) = self(other(z))."""
        sa, sb, sc, sd = self.a, self.b, self.c, self.d
        oa, ob, oc, od = other.a, other.b, other.c, other.d
        if self.conj:
            oa, ob, oc, od = oa.conj(), ob.conj(), oc.conj(), od.conj()
        return MobiusMap(
            sa * oa + sb * oc,
            sa * ob + sb * od,
            sc * oa + sd * oc,
            sc * ob + sd * od,
            self.conj != other.conj,
        )

    def apply(self, z):
        """Image of an exact point (Cq or None for infinity)."""
        if z is None:
            num, den = self.a, self.c
        else:
            z = Cq.of(z)
            if self.conj:
                z = z.conj()
            num, den = self.a * z + self.b, self.c * z + self.d
        if den.is_zero():
            return None
        return num / den


def mobius_image_of_line(m: MobiusMap) -> Circle:
    """Image of the extended real line under m, as an exact circle vector.

    For z -> (az+b)/(cz+d): curvature 2 Im(conj(c) d), co-curvature
    2 Im(conj(a) b), curvature*center i(a conj(d) - conj(c) b).  A
    conjugation flag fixes the line setwise and flips the orientation.
    """
    if not m.is_unit_det():
        raise UsageError("line transport needs |det| = 1")
    a, b, c, d = m.a, m.b, m.c, m.d
    p = 2 * (c.conj() * d).im
    q = 2 * (a.conj() * b).im
    cc = CQ_I * (a * d.conj() - c.conj() * b)
    circ = Circle(p, q, cc.re, cc.im)
    return -circ if m.conj else circ


def mobius_apply_circle(m: MobiusMap, circle: Circle) -> Circle:
    """Transport a circle by a Moebius map (Hermitian conjugation).

    The circle is the zero set of [1, conj(z)] H [1, z]^T with
    H = [[q, -r+si], [-r-si, p]].  Under w = (az+b)/(cz+d) the column
    (1, z) transforms by N = [[d, c], [b, a]], so H picks up N^-1 on both
    sides; projectively that is H -> A^dagger H A with A = [[a, -c], [-b, d]].
    A conjugation flag reflects the circle across the real axis first.
    """
    if not m.is_unit_det():
        raise UsageError("circle transport needs |det| = 1")
    if m.conj:
        # z -> m(conj(z)) images the reflection of the circle under plain m
        circle = Circle(circle.p, circle.q, circle.r, -circle.s)
        m = MobiusMap(m.a, m.b, m.c, m.d, False)
    a, b, c, d = m.a, m.b, m.c, m.d
    h11 = Cq.of(circle.q)
    h12 = Cq(-circle.r, circle.s)
    h21 = h12.conj()
    h22 = Cq.of(circle.p)
    # rows of A^dagger times H
    t11, t12 = a.conj() * h11 - b.conj() * h21, a.conj() * h12 - b.conj() * h22
    t21, t22 = -c.conj() * h11 + d.conj() * h21, -c.conj() * h12 + d.conj() * h22
    # times A
    n11 = t11 * a - t12 * b
    n12 = -t11 * c + t12 * d
    n21 = t21 * a - t22 * b
    n22 = -t21 * c + t22 * d
    if not (n11.im == 0 and n22.im == 0):
        raise InvariantViolationError("transported matrix is not Hermitian")
    if not (n21 == n12.conj()):
        raise InvariantViolationError("transported matrix is not Hermitian")
    return Circle(n22.re, n11.re, -n12.re, n12.im)


# ---------------------------------------------------------------------------
# quadruples of circles


@dataclass(frozen=True)
class DescartesQuadruple:
    """Four pairwise oriented-tangent circles; curvatures satisfy Descartes."""

    circles: tuple[Circle, Circle, Circle, Circle]

    def __post_init__(self):
        cs = tuple(self.circles)
        if len(cs) != 4:
            raise UsageError("need exactly four circles")
        object.__setattr__(self, "circles", cs)
        for i in range(4):
            for j in range(i + 1, 4):
                if not is_tangent(cs[i], cs[j]):
                    raise InvariantViolationError(
                        f"circles {i} and {j} are not tangent: "
                        f"<.,.> = {inner_product(cs[i], cs[j])}"
                    )
        if descartes_form(self.curvatures()) != 0:
            raise InvariantViolationError("curvatures violate the Descartes identity")

    def curvatures(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return tuple(c.p for c in self.circles)

    def swap(self, i: int) -> "DescartesQuadruple":
        """Replace circle i by the other circle tangent to the remaining three.

        Coordinate-wise Soddy relation: each of p, q, r, s obeys
        new = 2*(sum of others) - old.
        """
        if not 0 <= i <= 3:
            raise UsageError("swap index must be 0..3")
        cs = self.circles
        new = []
        for field in ("p", "q", "r", "s"):
            vals = [getattr(c, field) for c in cs]
            new.append(2 * (sum(vals) - vals[i]) - vals[i])
        out = list(cs)
        out[i] = Circle(*new)
        return DescartesQuadruple(tuple(out))
