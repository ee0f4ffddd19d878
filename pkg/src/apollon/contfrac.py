"""Continued fractions in the dialects the rest of the library needs:
classical expansions, LR cutting sequences, convergents, periodic expansions
of quadratic irrationals, good rational approximations, and Zaremba
denominator searches.

Quadratic irrationals stay exact throughout: a root is an integer coefficient
triple plus a branch bit, and the periodic expansion runs on (P, Q, D) surd
states with Q dividing D - P*P, so period detection is integer state equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from apollon.errors import CapExceededError, UsageError

_FLOAT_DEPTH_CAP = 40
_DEFAULT_FLOAT_DEPTH = 16
_PERIOD_STEP_CAP = 10**5
_ZAREMBA_CAP = 10**7
_BEST_APPROX_CAP = 10**6


def _floor_surd(a: int, b: int, c: int, d: int) -> int:
    """floor((a + b*sqrt(d)) / c) computed exactly, for b >= 0, c != 0."""
    if c == 0:
        raise UsageError("zero denominator in surd")
    n = b * b * d
    s = isqrt(n)
    if s * s == n:
        return (a + s) // c
    # s < b*sqrt(d) < s+1 strictly, so the open unit gap holds no integer
    if c > 0:
        return (a + s) // c
    return (-a - s - 1) // (-c)


@dataclass(frozen=True)
class QuadraticRoot:
    """Root (-b + sqrt(b^2 - 4ac)) / (2a) of a x^2 + b x + c; minus branch if
    plus is False.  Exact: only the integers a, b, c and the branch are kept.
    """

    a: int
    b: int
    c: int
    plus: bool = True

    def __post_init__(self) -> None:
        if self.a == 0:
            raise UsageError("leading coefficient must be nonzero")
        if self.discriminant <= 0:
            raise UsageError("root must be real and simple (discriminant > 0)")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def surd(self) -> tuple[int, int, int]:
        """(P, Q, D) with value (P + sqrt(D)) / Q; Q | D - P*P holds."""
        if self.plus:
            return -self.b, 2 * self.a, self.discriminant
        return self.b, -2 * self.a, self.discriminant

    def is_rational(self) -> bool:
        d = self.discriminant
        return isqrt(d) ** 2 == d

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise UsageError("irrational root has no fraction form")
        p, q, d = self.surd()
        return Fraction(p + isqrt(d), q)

    def floor(self) -> int:
        p, q, d = self.surd()
        return _floor_surd(p, 1, q, d)

    def cmp_fraction(self, fr: Fraction) -> int:
        """Sign of (self - fr), exactly."""
        p, q, d = self.surd()
        # (p + sqrt(d))/q - n/m has the sign of (m*p - n*q) + m*sqrt(d), times q
        n, m = fr.numerator, fr.denominator
        a = m * p - n * q
        t = m * m * d
        if a >= 0:
            num = 1
        elif t > a * a:
            num = 1
        elif t < a * a:
            num = -1
        else:
            num = 0
        return num if q > 0 else -num

    def __float__(self) -> float:
        p, q, d = self.surd()
        return (p + d**0.5) / q


def _exactify(x) -> "Fraction | QuadraticRoot":
    if isinstance(x, QuadraticRoot):
        return x.as_fraction() if x.is_rational() else x
    if isinstance(x, tuple) and len(x) == 3:
        return _exactify(QuadraticRoot(*x))
    if isinstance(x, bool):
        raise UsageError("boolean is not a number here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    raise UsageError(f"unsupported numeric input {x!r}")


def _cmp(alpha, fr: Fraction) -> int:
    if isinstance(alpha, QuadraticRoot):
        return alpha.cmp_fraction(fr)
    return (alpha > fr) - (alpha < fr)


@dataclass(frozen=True)
class CFExpansion:
    """a0 plus partial quotients, optionally with a trailing repeating block.

    period counts how many entries at the end of (a0, *quotients) repeat
    forever; 0 means the expansion is finite (or truncated, when exact is
    False).
    """

    a0: int
    quotients: tuple[int, ...] = ()
    period: int = 0
    exact: bool = True

    def __post_init__(self) -> None:
        if any(q < 1 for q in self.quotients):
            raise UsageError("partial quotients after a0 must be >= 1")
        if not 0 <= self.period <= 1 + len(self.quotients):
            raise UsageError("period marker out of range")

    @property
    def entries(self) -> tuple[int, ...]:
        return (self.a0,) + self.quotients

    def unroll(self, count: int) -> list[int]:
        """First count partial quotients, cycling the periodic tail."""
        ents = list(self.entries)
        if self.period and count > len(ents):
            cycle = ents[-self.period :]
            while len(ents) < count:
                ents.extend(cycle)
        return ents[:count]

    def value(self) -> Fraction:
        if self.period:
            raise UsageError("periodic expansion has no rational value")
        val = Fraction(self.entries[-1])
        for a in self.entries[-2::-1]:
            val = a + 1 / val
        return val

    def variant(self) -> "CFExpansion":
        """The other canonical expansion of the same rational."""
        if self.period or not self.exact:
            raise UsageError("variants exist for finite expansions only")
        ents = list(self.entries)
        if len(ents) == 1:
            ents = [ents[0] - 1, 1]
        elif ents[-1] >= 2:
            ents = ents[:-1] + [ents[-1] - 1, 1]
        else:
            ents = ents[:-2] + [ents[-2] + 1]
        return CFExpansion(ents[0], tuple(ents[1:]))

    def word(self, max_letters: int | None = None) -> str:
        """LR view L^a0 R^a1 L^a2 ...; needs a0 >= 0."""
        if self.a0 < 0:
            raise UsageError("LR word needs a nonnegative integer part")
        if self.period and max_letters is None:
            raise UsageError("periodic word needs an explicit letter count")
        ents = list(self.entries)
        if self.period and max_letters is not None:
            while sum(ents) < max_letters:
                ents.extend(ents[-self.period :])
        out = []
        for i, a in enumerate(ents):
            out.append(("L" if i % 2 == 0 else "R") * a)
            if max_letters is not None and sum(map(len, out)) >= max_letters:
                break
        word = "".join(out)
        return word if max_letters is None else word[:max_letters]


def _euclid_quotients(x: Fraction) -> list[int]:
    out = []
    num, den = x.numerator, x.denominator
    while True:
        a, r = divmod(num, den)
        out.append(a)
        if r == 0:
            return out
        num, den = den, r


def periodic_cf(root: QuadraticRoot) -> tuple[list[int], list[int]]:
    """(preperiod, period) of a real quadratic irrational, exactly.

    Iterates the classical step a = floor(alpha), alpha' = 1/(alpha - a) on
    surd states (P, Q); repetition of a state closes the period.
    """
    if root.is_rational():
        raise UsageError("rational root has no periodic expansion")
    p, q, d = root.surd()
    assert (d - p * p) % q == 0
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    for _ in range(_PERIOD_STEP_CAP):
        if (p, q) in seen:
            k = seen[(p, q)]
            return quotients[:k], quotients[k:]
        seen[(p, q)] = len(quotients)
        a = _floor_surd(p, 1, q, d)
        quotients.append(a)
        p = a * q - p
        q = (d - p * p) // q
    raise CapExceededError("period detection exceeded the step cap")


def cf_expand(x, depth: int | None = None) -> CFExpansion:
    """Continued fraction of a rational, float, or quadratic irrational.

    Rationals expand fully (truncated if depth is given); floats are read
    exactly from their bit pattern with a depth cap; quadratic irrationals
    come back with the periodic tail marked.  A root with square discriminant
    is rational and takes the rational path.
    """
    if isinstance(x, float):
        if depth is None:
            depth = _DEFAULT_FLOAT_DEPTH
        if depth > _FLOAT_DEPTH_CAP:
            raise UsageError(f"float expansion depth is capped at {_FLOAT_DEPTH_CAP}")
    val = _exactify(x)
    if isinstance(val, QuadraticRoot):
        pre, per = periodic_cf(val)
        stream = pre + per
        return CFExpansion(stream[0], tuple(stream[1:]), period=len(per))
    quotients = _euclid_quotients(val)
    if depth is not None and depth < 1:
        raise UsageError("depth must be at least 1")
    if depth is not None and len(quotients) > depth:
        return CFExpansion(quotients[0], tuple(quotients[1:depth]), exact=False)
    return CFExpansion(quotients[0], tuple(quotients[1:]))


def convergents(cf: CFExpansion, count: int | None = None) -> list[Fraction]:
    """p_k/q_k by the standard recurrence; count unrolls a periodic tail."""
    stream = cf.unroll(count) if count is not None else list(cf.entries)
    out = []
    p_prev, q_prev, p_cur, q_cur = 1, 0, stream[0], 1
    out.append(Fraction(p_cur, q_cur))
    for a in stream[1:]:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        out.append(Fraction(p_cur, q_cur))
    return out


def cutting_sequence(alpha, steps: int) -> str:
    """LR word of the vertical geodesic at alpha via the Stern-Brocot walk.

    Each mediant comparison emits L (alpha above) or R (alpha below); landing
    exactly on a mediant is the cusp, which we enter with a final L.
    """
    val = _exactify(alpha)
    if _cmp(val, Fraction(0)) <= 0:
        raise UsageError("cutting sequence needs alpha > 0")
    lo, hi = (0, 1), (1, 0)
    word: list[str] = []
    while len(word) < steps:
        med = (lo[0] + hi[0], lo[1] + hi[1])
        c = _cmp(val, Fraction(med[0], med[1]))
        if c == 0:
            word.append("L")
            break
        if c > 0:
            word.append("L")
            lo = med
        else:
            word.append("R")
            hi = med
    return "".join(word)


def is_good_approximation(alpha, frac) -> bool:
    """|alpha - p/q| < 1/(2q^2), tested exactly.

    Pass (p, q) as a tuple to keep a non-reduced denominator; a Fraction is
    already reduced.
    """
    if isinstance(frac, tuple):
        p, q = frac
    else:
        p, q = frac.numerator, frac.denominator
    if q <= 0:
        raise UsageError("denominator must be positive")
    val = _exactify(alpha)
    lower = Fraction(2 * p * q - 1, 2 * q * q)
    upper = Fraction(2 * p * q + 1, 2 * q * q)
    return _cmp(val, lower) > 0 and _cmp(val, upper) < 0


def best_approximations(alpha, q_max: int) -> list[Fraction]:
    """All reduced p/q with q <= q_max beating 1/(2q^2), by brute force."""
    if q_max < 1:
        raise UsageError("q_max must be at least 1")
    if q_max > _BEST_APPROX_CAP:
        raise CapExceededError(f"q_max is capped at {_BEST_APPROX_CAP}")
    val = _exactify(alpha)
    out: list[Fraction] = []
    seen: set[Fraction] = set()
    for q in range(1, q_max + 1):
        if isinstance(val, QuadraticRoot):
            p0, q0, d = val.surd()
            fl = _floor_surd(p0 * q, q, q0, d)
        else:
            fl = (val.numerator * q) // val.denominator
        for p in (fl, fl + 1):
            if is_good_approximation(val, (p, q)):
                fr = Fraction(p, q)
                if fr not in seen:
                    seen.add(fr)
                    out.append(fr)
    return out


def zaremba_denominators(z: int, n: int, last_ge_2: bool = False) -> set[int]:
    """Continuant denominators reachable with partial quotients in [1, z].

    Growth is pruned at n; a (previous, current) continuant pair determines
    all future growth, so visited pairs are traversed once (every edge is
    still inspected once for recording).

    The two classical exceptional-set claims use different word conventions,
    so both are offered.  By default every quotient word counts, and z = 1
    reaches exactly the Fibonacci numbers.  With last_ge_2 only canonical
    words (final quotient at least 2) count; that is the convention under
    which 6, 54 and 150 are the known failures for z = 4, where 6 would
    otherwise sneak in as the continuant of (1, 4, 1).
    """
    if z < 1:
        raise UsageError("quotient bound must be at least 1")
    if n < 1:
        raise UsageError("bound must be at least 1")
    if n > _ZAREMBA_CAP:
        raise CapExceededError(f"Zaremba bound is capped at {_ZAREMBA_CAP}")
    found = {1}
    visited = {(0, 1)}
    stack = [(0, 1)]
    while stack:
        prev, cur = stack.pop()
        for a in range(1, z + 1):
            nq = a * cur + prev
            if nq > n:
                continue
            if a >= 2 or not last_ge_2:
                found.add(nq)
            if (cur, nq) not in visited:
                visited.add((cur, nq))
                stack.append((cur, nq))
    return found


def zaremba_missing(z: int, n: int, last_ge_2: bool = False) -> list[int]:
    """Denominators <= n that no [1, z]-quotient word reaches."""
    got = zaremba_denominators(z, n, last_ge_2)
    return [q for q in range(1, n + 1) if q not in got]
