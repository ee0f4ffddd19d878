"""The Gaussian Schmidt arrangement: all images of the real line over Z[i].

The arrangement is the orbit of the extended real line under Moebius maps
with Gaussian-integer entries and unit determinant.  Its members have a
purely lattice-theoretic description: they are exactly the circles whose
(p, q, r, s) vector is integral, lies on the hyperboloid r^2 + s^2 - pq = 1,
and is congruent to (0, 0, 0, 1) mod 2.  Writing p = 2p', r = 2r',
s = 2s' + 1, such a vector exists iff p' divides r'^2 + s'^2 + s', which
makes window enumeration a three-variable sweep.

Curvatures in the arrangement are even; half the curvature is called the
*reduced curvature*, and all bounds here are stated in reduced units.

Each member is tangent to infinitely many others.  For C the image of the
real line under a matrix with bottom row (gamma, delta), the tangency
points of C are the images of rationals a/b, their "denominators"
rho = gamma a + delta b sweep the lattice gamma Z + delta Z, and the
circles tangent to C at a point with denominator rho form a curvature
progression with step 2 N(rho).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd

from apollon.circlespace import (
    Circle,
    Cq,
    MobiusMap,
    mobius_apply_circle,
    mobius_image_of_line,
)
from apollon.errors import InvariantViolationError, UsageError
from apollon.numtheory import GaussianInt, as_gaussian, gaussian_gcd, gaussian_xgcd
from apollon.packing import _validated_window, circle_meets_window


def is_schmidt_circle(c: Circle) -> bool:
    """True iff c belongs to the arrangement: integral and (0,0,0,1) mod 2.

    The hyperboloid condition r^2 + s^2 - pq = 1 holds for every Circle by
    construction, so only integrality and parity are tested.  Both
    orientations of a member pass.
    """
    vec = c.integer_vector()
    if vec is None:
        return False
    p, q, r, s = vec
    return p % 2 == 0 and q % 2 == 0 and r % 2 == 0 and s % 2 == 1


def schmidt_circles(window, max_reduced_curvature: int) -> list[Circle]:
    """All arrangement members meeting the window, reduced curvature <= bound.

    One representative per geometric circle: curvature 2p' > 0 for proper
    circles, and the horizontal lines Im z = n oriented as line_im_eq(n).
    Lines come first (heights ascending), then circles ordered by
    (p', r', s') where the center is r'/p' + (s' + 1/2)/p' i.

    For each p' the candidate centers form a rectangle of lattice points;
    the divisibility filter p' | r'^2 + s'^2 + s' is applied last, and a
    final exact window test discards corner misses.  The per-p' sweeps are
    independent.
    """
    window = _validated_window(window)
    k_max = int(max_reduced_curvature)
    if k_max < 1:
        raise UsageError("max reduced curvature must be >= 1")
    x0, y0, x1, y1 = window
    out = [Circle.line_im_eq(n) for n in range(ceil(y0), floor(y1) + 1)]
    for pp in range(1, k_max + 1):
        rho = Fraction(1, 2 * pp)
        half = Fraction(1, 2)
        r_lo, r_hi = ceil(pp * (x0 - rho)), floor(pp * (x1 + rho))
        s_lo, s_hi = ceil(pp * (y0 - rho) - half), floor(pp * (y1 + rho) - half)
        for rr in range(r_lo, r_hi + 1):
            rr2 = rr * rr
            for ss in range(s_lo, s_hi + 1):
                m = rr2 + ss * ss + ss
                if m % pp:
                    continue
                c = Circle(2 * pp, 2 * (m // pp), 2 * rr, 2 * ss + 1)
                if circle_meets_window(c, window):
                    out.append(c)
    return out


def ford_circles(qmax: int) -> list[Circle]:
    """The Ford circles at reduced p/q in [0, 1] with q <= qmax, plus Im z = 1.

    The circle at p/q has center p/q + i/(2 q^2) and radius 1/(2 q^2), i.e.
    vector (2q^2, 2p^2, 2pq, 1).  The line is the q = 0 member (1/0 under
    the same formula), oriented as (0, 2, 0, 1) so that tangency to the
    integer-centered circles is oriented tangency.  Two members at p1/q1
    and p2/q2 are tangent exactly when |p1 q2 - p2 q1| = 1.
    """
    qmax = int(qmax)
    if qmax < 1:
        raise UsageError("qmax must be >= 1")
    out = [-Circle.line_im_eq(1)]
    for q in range(1, qmax + 1):
        for p in range(q + 1):
            if gcd(p, q) == 1:
                out.append(Circle(2 * q * q, 2 * p * p, 2 * p * q, 1))
    return out


def _as_gaussian_fraction(z: Cq) -> tuple[GaussianInt, GaussianInt]:
    """Write an exact complex rational as alpha/beta in lowest terms."""
    den = z.re.denominator * z.im.denominator // gcd(
        z.re.denominator, z.im.denominator
    )
    alpha = GaussianInt(int(z.re * den), int(z.im * den))
    beta = GaussianInt(den)
    g = gaussian_gcd(alpha, beta)
    return alpha.exact_div(g), beta.exact_div(g)


def realize_matrix(c: Circle) -> MobiusMap:
    """An integral unit-determinant map sending the real line onto c.

    Picks a point alpha/beta on c, moves it to 0 by N = (beta, -alpha; x, y)
    with alpha x + beta y = 1, transports c to a member through 0, which is
    forced to be (p, 0, 0, s) with s = +-1, realized by (0, -s; 1, ip/2).
    The composite is audited against mobius_image_of_line before returning;
    the image equals c up to orientation.
    """
    if not is_schmidt_circle(c):
        raise UsageError("not a member of the arrangement")
    alpha, beta = _as_gaussian_fraction(c.known_point())
    _, x, y = gaussian_xgcd(alpha, beta)
    n = MobiusMap.of(beta, -alpha, x, y)
    moved = mobius_apply_circle(n, c)
    if moved.q != 0 or moved.r != 0:
        raise InvariantViolationError("moved circle is not (p, 0, 0, s)")
    m0 = MobiusMap.of(0, -moved.s, 1, (Fraction(0), moved.p / 2))
    m = n.inverse().compose(m0)
    image = mobius_image_of_line(m)
    if image != c and image != -c:
        raise InvariantViolationError("realized matrix misses the circle")
    return m


@dataclass(frozen=True)
class TangencyFamily:
    """Tangency data of one arrangement member, from a realizing matrix.

    gamma, delta is the bottom row; the denominators of the tangency points
    on the circle are exactly the nonzero elements of gamma Z + delta Z.
    """

    gamma: GaussianInt
    delta: GaussianInt

    def basis(self) -> tuple[GaussianInt, GaussianInt]:
        return (self.gamma, self.delta)

    def contains_denominator(self, rho) -> bool:
        """True iff rho lies in the lattice gamma Z + delta Z."""
        rho = as_gaussian(rho)
        g, d = self.gamma, self.delta
        det = g.re * d.im - g.im * d.re
        if det:
            m_num = rho.re * d.im - rho.im * d.re
            n_num = g.re * rho.im - g.im * rho.re
            return m_num % det == 0 and n_num % det == 0
        # rank one: the rows are real-proportional, d = (u/v) g (or g = 0),
        # so the lattice is (g/v) Z with u/v in lowest terms
        primary, other = (g, d) if not g.is_zero() else (d, g)
        t = primary.conj() * other
        if t.im != 0:
            raise InvariantViolationError("dependent rows are not proportional")
        v = Fraction(t.re, primary.norm()).denominator
        scaled = (rho * v) * primary.conj()
        return scaled.im == 0 and scaled.re % primary.norm() == 0

    def curvature_progression(self, rho) -> tuple[int, int]:
        """(base, step) of tangent-circle curvatures at denominator rho.

        At any tangency point sigma/rho the oriented circles tangent to the
        member run through the curvatures base + k*step, k in Z, with
        base = 2 Im(gamma conj(delta)) and step = 2 N(rho); the k = 0 member
        is the mother circle itself with reversed orientation.  Values are
        full (unreduced) curvatures; halve both for reduced units.
        """
        rho = as_gaussian(rho)
        if rho.is_zero():
            raise UsageError("denominator must be nonzero")
        if not self.contains_denominator(rho):
            raise UsageError(f"{rho} is not a denominator of this circle")
        base = 2 * (self.gamma * self.delta.conj()).im
        return base, 2 * rho.norm()


def tangency_family(m: MobiusMap) -> TangencyFamily:
    """The tangency lattice of the member realized by m (integral, unit det)."""
    if m.conj:
        raise UsageError("conjugating maps do not realize arrangement members")
    entries = []
    for z in (m.a, m.b, m.c, m.d):
        if z.re.denominator != 1 or z.im.denominator != 1:
            raise UsageError("matrix entries must be Gaussian integers")
        entries.append(GaussianInt(int(z.re), int(z.im)))
    if m.det().norm() != 1:
        raise UsageError("matrix determinant must be a unit")
    return TangencyFamily(entries[2], entries[3])
