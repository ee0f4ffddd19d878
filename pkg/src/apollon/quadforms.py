"""Integral binary quadratic forms.

Covers the SL2(Z) action, reduction of definite and indefinite forms, class
enumeration, the Pell equation via indefinite cycles, and the dictionary
between Descartes quadruples and the forms whose values are tangent
curvatures.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import gcd, isqrt

from apollon.circlespace import descartes_form
from apollon.errors import CapExceededError, UsageError

Mat2 = tuple[tuple[int, int], tuple[int, int]]

IDENTITY2: Mat2 = ((1, 0), (0, 1))
_S: Mat2 = ((0, -1), (1, 0))

_STEP_CAP = 10**4


@dataclass(frozen=True)
class BinaryQF:
    """f(x, y) = a x^2 + b xy + c y^2 with integer coefficients."""

    a: int
    b: int
    c: int

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def content(self) -> int:
        return gcd(gcd(abs(self.a), abs(self.b)), abs(self.c))

    def is_primitive(self) -> bool:
        return self.content() == 1

    def coefficients(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def mat2_mul(m: Mat2, n: Mat2) -> Mat2:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def act(m: Mat2, f: BinaryQF) -> BinaryQF:
    """Substitution action: act(m, f)(v) = f(m v); requires det m = 1."""
    (p, q), (r, s) = m
    if p * s - q * r != 1:
        raise UsageError("form action needs det = 1")
    a = f(p, r)
    c = f(q, s)
    b = 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s
    return BinaryQF(a, b, c)


# ---------------------------------------------------------------------------
# definite reduction


def is_reduced_definite(f: BinaryQF) -> bool:
    if f.discriminant >= 0 or f.a <= 0:
        return False
    if not (abs(f.b) <= f.a <= f.c):
        return False
    if f.b < 0 and (abs(f.b) == f.a or f.a == f.c):
        return False
    return True


def reduce_definite(f: BinaryQF) -> tuple[BinaryQF, Mat2]:
    """Canonical reduced representative with |b| <= a <= c (ties need b >= 0).

    Returns (g, m) with act(m, f) = g.
    """
    if f.discriminant >= 0 or f.a <= 0:
        raise UsageError("definite reduction needs disc < 0 and a > 0")
    g, u = f, IDENTITY2
    for _ in range(_STEP_CAP):
        if g.a > g.c:
            g, u = act(_S, g), mat2_mul(u, _S)
            continue
        if not -g.a < g.b <= g.a:
            # translate b into (-a, a]
            k = (g.a - g.b) // (2 * g.a)
            t = ((1, k), (0, 1))
            g, u = act(t, g), mat2_mul(u, t)
            continue
        if g.b < 0 and g.a == g.c:
            g, u = act(_S, g), mat2_mul(u, _S)
            continue
        return g, u
    raise CapExceededError("definite reduction exceeded the step cap")


def class_reps(disc: int) -> list[BinaryQF]:
    """All reduced primitive forms of the given negative discriminant."""
    if disc >= 0:
        raise UsageError("class enumeration is for negative discriminants")
    if disc % 4 not in (0, 1):
        raise UsageError("discriminant must be 0 or 1 mod 4")
    reps = []
    for a in range(1, isqrt(-disc // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            form = BinaryQF(a, b, c)
            if form.is_primitive():
                reps.append(form)
    return sorted(reps, key=BinaryQF.coefficients)


def class_number(disc: int) -> int:
    return len(class_reps(disc))


def class_list_csv(disc: int) -> str:
    lines = ["a,b,c,disc"]
    for f in class_reps(disc):
        lines.append(f"{f.a},{f.b},{f.c},{disc}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# indefinite forms


def _check_indefinite(f: BinaryQF) -> int:
    d = f.discriminant
    if d <= 0 or isqrt(d) ** 2 == d:
        raise UsageError("need a positive nonsquare discriminant")
    return d


def indefinite_reduced(f: BinaryQF) -> bool:
    """Reduced indefinite form: b > |a + c| and ac < 0."""
    _check_indefinite(f)
    return f.b > abs(f.a + f.c) and f.a * f.c < 0


def _rho_step(f: BinaryQF, sqrt_disc: int) -> tuple[BinaryQF, Mat2]:
    # (a, b, c) -> (c, -b + 2c*delta, ...) via the matrix ((0,-1),(1,delta))
    # with delta = sign(c) * floor((b + sqrt(disc)) / 2|c|); the floor is
    # exact with isqrt because sqrt(disc) is irrational
    fl = (f.b + sqrt_disc) // (2 * abs(f.c))
    delta = fl if f.c > 0 else -fl
    m = ((0, -1), (1, delta))
    return act(m, f), m


def _reduce_indefinite(f: BinaryQF) -> tuple[BinaryQF, Mat2]:
    d = _check_indefinite(f)
    s = isqrt(d)
    g, u = f, IDENTITY2
    for _ in range(_STEP_CAP):
        if indefinite_reduced(g):
            return g, u
        g, m = _rho_step(g, s)
        u = mat2_mul(u, m)
    raise CapExceededError("indefinite reduction exceeded the step cap")


def indefinite_cycle(f: BinaryQF) -> list[BinaryQF]:
    """The closed cycle of reduced forms containing a reduction of f."""
    d = _check_indefinite(f)
    s = isqrt(d)
    start, _ = _reduce_indefinite(f)
    cycle = [start]
    g, _ = _rho_step(start, s)
    for _ in range(_STEP_CAP):
        if g == start:
            return cycle
        cycle.append(g)
        g, _ = _rho_step(g, s)
    raise CapExceededError("indefinite cycle exceeded the step cap")


def principal_form(disc: int) -> BinaryQF:
    if disc % 4 not in (0, 1):
        raise UsageError("discriminant must be 0 or 1 mod 4")
    b = disc % 2
    return BinaryQF(1, b, (b * b - disc) // 4)


def pell(disc: int) -> tuple[int, int]:
    """Fundamental solution of X^2 - disc*Y^2 = 4.

    Walks one full cycle of the principal form's reduced orbit; the composed
    step matrices give the fundamental automorph, whose trace and lower-left
    entry encode (X, Y).
    """
    d = _check_indefinite(principal_form(disc))
    s = isqrt(d)
    start, _ = _reduce_indefinite(principal_form(disc))
    g, m = _rho_step(start, s)
    u = m
    for _ in range(_STEP_CAP):
        if g == start:
            x = abs(u[0][0] + u[1][1])
            y_num = u[1][0]
            if y_num % start.a:
                raise CapExceededError("automorph does not divide cleanly")
            y = abs(y_num // start.a)
            if x * x - disc * y * y != 4:
                raise CapExceededError("cycle automorph fails the Pell identity")
            return x, y
        g, m = _rho_step(g, s)
        u = mat2_mul(u, m)
    raise CapExceededError("Pell cycle exceeded the step cap")


# ---------------------------------------------------------------------------
# the quadruple -> form dictionary


def form_of_quadruple(quad) -> BinaryQF:
    """The form (n+a)x^2 + (n+a+b-c)xy + (n+b)y^2 attached to [n, a, b, c].

    Its primitive values minus n are the curvatures tangent to the first
    circle; the discriminant is exactly -4n^2.
    """
    if descartes_form(quad) != 0:
        raise UsageError("quadruple does not satisfy the Descartes identity")
    n, a, b, c = (int(v) for v in quad)
    form = BinaryQF(n + a, n + a + b - c, n + b)
    assert form.discriminant == -4 * n * n
    return form


def _euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _degenerate_multiset(form: BinaryQF, n: int, n_max: int) -> Counter:
    # disc = 0: change basis so the null direction is (1, 0), leaving c*y^2;
    # primitive vectors are counted per translation period along the null
    # direction, giving multiplicity phi(y)
    if form.a == 0:
        w_val = form.c
    else:
        g = gcd(form.b, 2 * form.a)
        e = (-form.b // g, 2 * form.a // g)
        # complete e to a unimodular basis; f(w) is the surviving coefficient
        _, x, y = _xgcd(e[0], e[1])
        w = (-y, x)
        assert e[0] * w[1] - e[1] * w[0] in (1, -1)
        w_val = form(*w)
    if w_val <= 0:
        raise UsageError("quadruple is not positively oriented")
    counts: Counter = Counter()
    if 0 - n <= n_max:
        counts[-n] += 1
    k = 1
    while w_val * k * k - n <= n_max:
        counts[w_val * k * k - n] += _euler_phi(k)
        k += 1
    return counts


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def tangent_curvatures(quad, n_max: int) -> Counter:
    """Multiset {f(x,y) - n : gcd(x,y) = 1} of values <= n_max.

    Representations are counted modulo negation, matching one circle per
    primitive vector pair +-(x, y).  For n = 0 the form is degenerate and
    multiplicities are per translation period along the strip.
    """
    form = form_of_quadruple(quad)
    n = int(quad[0])
    if n == 0:
        return _degenerate_multiset(form, n, n_max)
    if form.a <= 0:
        raise UsageError("quadruple is not positively oriented")
    bound = n_max + n
    counts: Counter = Counter()
    if bound < 0:
        return counts
    a, b, c = form.a, form.b, form.c
    disc = 4 * n * n
    if form(1, 0) <= bound:
        counts[form(1, 0) - n] += 1
    y = 1
    while disc * y * y <= 4 * a * bound:
        # solve a x^2 + b x y + c y^2 <= bound for x at fixed y; widen the
        # isqrt window by one on each side and let the value filter decide
        rad = 4 * a * bound - disc * y * y
        root = isqrt(rad)
        lo = (-b * y - root) // (2 * a) - 1
        hi = (root - b * y) // (2 * a) + 1
        for x in range(lo, hi + 1):
            v = form(x, y)
            if v <= bound and gcd(x, y) == 1:
                counts[v - n] += 1
        y += 1
    return counts
