"""Integer and Gaussian-integer arithmetic with quadratic and quartic symbols.

Kronecker symbol conventions (the standard extension of Legendre/Jacobi):

    (a|0)  = 1 if a = +-1, else 0
    (a|-1) = -1 if a < 0, else +1
    (a|2)  = 0 if a even, +1 if a = +-1 (mod 8), -1 if a = +-3 (mod 8)
    (a|n)  multiplicative in both arguments

The quartic residue symbol lives in Z[i].  For an odd prime pi and
gcd(alpha, pi) = 1 it is the unique unit i^k with

    alpha^((N(pi)-1)/4) = i^k  (mod pi),

extended multiplicatively to odd composite denominators (a quartic Jacobi
symbol) and evaluated here by Euclidean descent with quartic reciprocity,
so no factoring is required.  Denominators are normalized to their primary
associate, the one congruent to 1 mod (1+i)^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from apollon.errors import NotRepresentableError, UsageError

# ---------------------------------------------------------------------------
# rational primes


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24; probabilistic beyond."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, b in enumerate(sieve) if b]


# ---------------------------------------------------------------------------
# Kronecker symbol


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out 2s of the denominator
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            sign = -sign
    # Jacobi loop; n odd positive from here on
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a mod p (odd prime), or None; Tonelli-Shanks."""
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# ---------------------------------------------------------------------------
# Gaussian integers


@dataclass(frozen=True)
class GaussianInt:
    """An element a + b*i of Z[i]."""

    re: int
    im: int = 0

    def __add__(self, other: "GaussianInt") -> "GaussianInt":
        other = as_gaussian(other)
        return GaussianInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: "GaussianInt") -> "GaussianInt":
        other = as_gaussian(other)
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: "GaussianInt") -> "GaussianInt":
        return as_gaussian(other) - self

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        other = as_gaussian(other)
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "GaussianInt":
        return GaussianInt(-self.re, -self.im)

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def is_odd(self) -> bool:
        """Odd means coprime to 1+i, i.e. norm is odd."""
        return self.norm() % 2 == 1

    def __divmod__(self, other: "GaussianInt") -> tuple["GaussianInt", "GaussianInt"]:
        """Nearest-integer division: remainder has norm < norm(other)."""
        other = as_gaussian(other)
        if other.is_zero():
            raise ZeroDivisionError("Gaussian division by zero")
        n = other.norm()
        prod = self * other.conj()
        q = GaussianInt(_round_half(prod.re, n), _round_half(prod.im, n))
        return q, self - q * other

    def __floordiv__(self, other: "GaussianInt") -> "GaussianInt":
        return divmod(self, other)[0]

    def __mod__(self, other: "GaussianInt") -> "GaussianInt":
        return divmod(self, other)[1]

    def divides(self, other: "GaussianInt") -> bool:
        return (as_gaussian(other) % self).is_zero()

    def exact_div(self, other: "GaussianInt") -> "GaussianInt":
        q, r = divmod(self, as_gaussian(other))
        if not r.is_zero():
            raise UsageError(f"{other} does not divide {self}")
        return q

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        return f"{self.re}{self.im:+d}i"


I = GaussianInt(0, 1)
GAUSSIAN_UNITS = (GaussianInt(1), I, GaussianInt(-1), GaussianInt(0, -1))


def as_gaussian(z) -> GaussianInt:
    if isinstance(z, GaussianInt):
        return z
    if isinstance(z, int):
        return GaussianInt(z)
    if isinstance(z, complex) and z.real == int(z.real) and z.imag == int(z.imag):
        return GaussianInt(int(z.real), int(z.imag))
    raise UsageError(f"not a Gaussian integer: {z!r}")


def _round_half(num: int, den: int) -> int:
    """Round num/den to the nearest integer (den > 0), halves toward +inf."""
    return (2 * num + den) // (2 * den)


def gaussian_gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    """A greatest common divisor in Z[i], normalized to the first quadrant."""
    a, b = as_gaussian(a), as_gaussian(b)
    while not b.is_zero():
        a, b = b, a % b
    return first_quadrant_associate(a)


def gaussian_xgcd(a: GaussianInt, b: GaussianInt) -> tuple[GaussianInt, GaussianInt, GaussianInt]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b), g first-quadrant normalized."""
    a, b = as_gaussian(a), as_gaussian(b)
    r0, r1 = a, b
    x0, x1 = GaussianInt(1), GaussianInt(0)
    y0, y1 = GaussianInt(0), GaussianInt(1)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    g = first_quadrant_associate(r0)
    if not r0.is_zero():
        u = _unit_quotient(g, r0)
        x0, y0 = u * x0, u * y0
    return g, x0, y0


def first_quadrant_associate(z: GaussianInt) -> GaussianInt:
    """The associate with re > 0, im >= 0 (zero maps to zero)."""
    if z.is_zero():
        return z
    for u in GAUSSIAN_UNITS:
        w = u * z
        if w.re > 0 and w.im >= 0:
            return w
    raise AssertionError("unreachable")


def _unit_quotient(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    """The unit u with a = u*b, assuming a, b associates."""
    for u in GAUSSIAN_UNITS:
        if u * b == a:
            return u
    raise UsageError(f"{a} and {b} are not associates")


def is_primary(z: GaussianInt) -> bool:
    """Primary means z = 1 mod (1+i)^3, i.e. re odd, im even, re+im = 1 mod 4."""
    return z.re % 2 == 1 and z.im % 2 == 0 and (z.re + z.im) % 4 == 1


def primary_associate(z: GaussianInt) -> tuple[GaussianInt, int]:
    """(w, k) with w = i^k * z primary; requires z odd."""
    z = as_gaussian(z)
    if not z.is_odd():
        raise UsageError(f"{z} is even; no primary associate")
    for k in range(4):
        w = GAUSSIAN_UNITS[k] * z
        if is_primary(w):
            return w, k
    raise AssertionError("unreachable")


def gaussian_factor_two_unit(z: GaussianInt) -> tuple[int, int, GaussianInt]:
    """Write z = i^s * (1+i)^t * w with w primary; returns (s, t, w)."""
    z = as_gaussian(z)
    if z.is_zero():
        raise UsageError("cannot factor zero")
    one_plus_i = GaussianInt(1, 1)
    t = 0
    while not z.is_odd():
        z = z.exact_div(one_plus_i)
        t += 1
    w, k = primary_associate(z)
    # w = i^k z  =>  z = i^(4-k) w
    return (4 - k) % 4, t, w


# ---------------------------------------------------------------------------
# quartic residue symbol


def quartic_symbol_prime(alpha: GaussianInt, pi: GaussianInt) -> GaussianInt:
    """[alpha/pi]_4 for pi an odd Gaussian prime, by the defining power."""
    alpha, pi = as_gaussian(alpha), as_gaussian(pi)
    n = pi.norm()
    if n % 2 == 0:
        raise UsageError("denominator must be odd")
    e = (n - 1) // 4
    r = _gaussian_pow_mod(alpha, e, pi)
    for u in GAUSSIAN_UNITS:
        if (r - u) % pi == GaussianInt(0):
            return u
    raise UsageError(f"{alpha} not coprime to {pi}")


def _gaussian_pow_mod(base: GaussianInt, e: int, mod: GaussianInt) -> GaussianInt:
    result = GaussianInt(1)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def quartic_symbol(alpha, beta) -> GaussianInt:
    """Quartic Jacobi symbol [alpha/beta]_4 in Z[i], beta odd, by reciprocity.

    beta is replaced by its primary associate.  Returns a unit of Z[i], or
    raises if gcd(alpha, beta) is not a unit.
    """
    alpha, beta = as_gaussian(alpha), as_gaussian(beta)
    if not beta.is_odd():
        raise UsageError("quartic symbol needs an odd denominator")
    if beta.is_unit():
        return GaussianInt(1)
    beta, _ = primary_associate(beta)
    if not gaussian_gcd(alpha, beta).is_unit():
        raise UsageError(f"{alpha} and {beta} are not coprime")
    result = GaussianInt(1)
    while True:
        alpha = alpha % beta
        if alpha.is_zero():
            raise UsageError("arguments not coprime")
        s, t, alpha = gaussian_factor_two_unit(alpha)
        # supplementary laws for beta = a+bi primary:
        #   [i/beta] = i^((1-a)/2),  [(1+i)/beta] = i^((a-b-b^2-1)/4)
        a, b = beta.re, beta.im
        exp = s * ((1 - a) // 2) + t * ((a - b - b * b - 1) // 4)
        result = result * GAUSSIAN_UNITS[exp % 4]
        if alpha.is_unit():
            return result
        # reciprocity for primary alpha, beta:
        #   [alpha/beta] = [beta/alpha] * (-1)^((N(alpha)-1)/4 * (N(beta)-1)/4)
        if ((alpha.norm() - 1) // 4) % 2 == 1 and ((beta.norm() - 1) // 4) % 2 == 1:
            result = -result
        alpha, beta = beta, alpha


def trial_factor(n: int, bound: int = 1_000_000) -> dict[int, int]:
    """Factor n > 0 by trial division up to `bound`.

    The cofactor after trial division must be 1 or prime; otherwise raises
    CapExceededError (factoring beyond this is out of scope).
    """
    from apollon.errors import CapExceededError

    if n <= 0:
        raise UsageError("trial_factor needs n > 0")
    out: dict[int, int] = {}
    for p in [2, 3]:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n and f <= bound:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        if not is_probable_prime(n):
            raise CapExceededError(f"cofactor {n} not factorable by trial division")
        out[n] = out.get(n, 0) + 1
    return out


def primary_half(n: int) -> GaussianInt:
    """A primary beta whose split-prime part satisfies N(beta) = (split part of n).

    For odd n, every prime p = 1 mod 4 dividing n contributes a primary
    Gaussian prime factor pi_p (one of the conjugate pair) to its exponent;
    inert primes p = 3 mod 4 are dropped, since the quartic character of a
    rational number modulo an inert prime is trivial.
    """
    if n <= 0 or n % 2 == 0:
        raise UsageError("primary_half needs odd n > 0")
    beta = GaussianInt(1)
    for p, e in trial_factor(n).items():
        if p % 4 == 1:
            x, y = two_squares(p)
            pi, _ = primary_associate(GaussianInt(x, y))
            for _ in range(e):
                beta = beta * pi
    return primary_associate(beta)[0] if beta.is_odd() else beta


def quartic_symbol_rational(a: int, b: int) -> int:
    """The rational quartic symbol (a|b)_4 = [a / primary_half(b)]_4.

    Well-defined (independent of the conjugate choices inside the half) only
    when the result is real; raises UsageError when it comes out imaginary.
    """
    beta = primary_half(b)
    if beta.is_unit():
        return 1
    sym = quartic_symbol(GaussianInt(a), beta)
    if sym.im != 0:
        raise UsageError(f"quartic symbol of {a} over {b} is imaginary (ill-defined)")
    return sym.re


# ---------------------------------------------------------------------------
# sums of two squares and the Zagier involution


def two_squares(p: int) -> tuple[int, int]:
    """(x, y) with x^2 + y^2 = p and 0 < x <= y, for p = 2 or p = 1 mod 4 prime."""
    if not is_probable_prime(p):
        raise UsageError(f"{p} is not prime")
    if p == 2:
        return (1, 1)
    if p % 4 == 3:
        raise NotRepresentableError(f"{p} = 3 mod 4 is not a sum of two squares")
    x = sqrt_mod_prime(p - 1, p)
    assert x is not None
    g = gaussian_gcd(GaussianInt(p), GaussianInt(x, 1))
    a, b = abs(g.re), abs(g.im)
    if a * a + b * b != p:
        raise AssertionError(f"descent failed for {p}")
    return (min(a, b), max(a, b))


def zagier_involution(triple: tuple[int, int, int], p: int) -> tuple[int, int, int]:
    """The three-branch involution on {(x,y,z) > 0 : x^2 + 4yz = p}.

    Its fixed points count solutions with x = y; for prime p = 4k+1 the unique
    fixed point is (1, 1, k), which forces the solution set to have odd size
    and hence p to be a sum of two squares.
    """
    x, y, z = triple
    if x <= 0 or y <= 0 or z <= 0 or x * x + 4 * y * z != p:
        raise UsageError(f"{triple} is not a positive solution of x^2+4yz={p}")
    if x == y - z or x == 2 * y:
        # both boundaries force p composite
        raise UsageError(f"{triple} lies on a branch boundary; {p} is composite")
    if x < y - z:
        out = (x + 2 * z, z, y - x - z)
    elif x < 2 * y:
        out = (2 * y - x, y, x - y + z)
    else:
        out = (x - 2 * y, x - y + z, y)
    ox, oy, oz = out
    assert ox > 0 and oy > 0 and oz > 0 and ox * ox + 4 * oy * oz == p
    return out


def zagier_solutions(p: int) -> Iterator[tuple[int, int, int]]:
    """All positive (x, y, z) with x^2 + 4yz = p."""
    x = 1
    while x * x < p:
        rest = p - x * x
        if rest % 4 == 0:
            m = rest // 4
            for y in range(1, m + 1):
                if m % y == 0:
                    yield (x, y, m // y)
        x += 1
