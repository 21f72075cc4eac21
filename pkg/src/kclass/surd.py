"""Exact arithmetic for real quadratic irrationals and continued fractions.

Values are stored as (a + b*sqrt(d))/c with integer a, b, c and d
squarefree.  The canonical form has c > 0, gcd(a, b, c) = 1, and d = 1
exactly when the value is rational (then b = 0).  Rational values are
representable so that intermediate arithmetic stays closed, but the
continued-fraction entry points insist on irrational input.
"""
from __future__ import annotations

import re
from math import gcd, isqrt

from .matrix import IntMatrix


_TRIAL_BOUND = 10 ** 5


def _squarefree_decompose(d: int) -> tuple[int, int]:
    """d = s*s * d0 with d0 squarefree; returns (s, d0).

    Trial division is capped: a leftover cofactor with no prime factor
    below the cap is taken whole if it is not a perfect square.  That is
    exact whenever the true squarefree part has only primes below the
    cap, which holds for every value derived from a base field with
    small d (discriminants met here are square multiples of such d).
    """
    s = 1
    d0 = 1
    n = d
    p = 2
    while p * p <= n and p <= _TRIAL_BOUND:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                d0 *= p
        p += 1 if p == 2 else 2
    if n > 1:
        r = isqrt(n)
        if r * r == n:
            s *= r
        else:
            d0 *= n
    return s, d0


class QuadraticIrrational:
    """Canonical (a + b*sqrt(d))/c, exact throughout."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int = 1):
        if c == 0:
            raise ValueError("zero denominator")
        if d < 1:
            raise ValueError("radicand must be >= 1")
        if b:
            s, d0 = _squarefree_decompose(d)
            b *= s
            d = d0
            if d == 1:
                a += b
                b = 0
        else:
            d = 1
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(abs(a), abs(b)), c)
        if g > 1:
            a //= g
            b //= g
            c //= g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticIrrational is immutable")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def key(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = QuadraticIrrational(other, 0, 1)
        return isinstance(other, QuadraticIrrational) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def _common_d(self, other: "QuadraticIrrational") -> int:
        if self.b and other.b and self.d != other.d:
            raise ValueError("values live in different quadratic fields")
        return self.d if self.b else other.d

    @staticmethod
    def _coerce(x):
        if isinstance(x, QuadraticIrrational):
            return x
        if isinstance(x, int):
            return QuadraticIrrational(x, 0, 1)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._common_d(other)
        a = self.a * other.c + other.a * self.c
        b = self.b * other.c + other.b * self.c
        return QuadraticIrrational(a, b, self.c * other.c, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticIrrational(-self.a, -self.b, self.c, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d = self._common_d(other)
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return QuadraticIrrational(a, b, self.c * other.c, d)

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadraticIrrational":
        if self.a == 0 and self.b == 0:
            raise ZeroDivisionError("reciprocal of zero")
        # 1/x = c(a - b sqrt(d)) / (a^2 - b^2 d)
        norm = self.a * self.a - self.b * self.b * self.d
        return QuadraticIrrational(self.c * self.a, -self.c * self.b, norm, self.d)

    def conjugate(self) -> "QuadraticIrrational":
        return QuadraticIrrational(self.a, -self.b, self.c, self.d)

    def sign(self) -> int:
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.b > 0:
            if self.a >= 0:
                return 1
            return 1 if self.b * self.b * self.d > self.a * self.a else -1
        if self.a <= 0:
            return -1
        return 1 if self.a * self.a > self.b * self.b * self.d else -1

    def floor(self) -> int:
        if self.b == 0:
            return self.a // self.c
        s = isqrt(self.b * self.b * self.d)
        # b*sqrt(d) lies strictly between s and s+1 (resp. -s-1 and -s),
        # and the open unit interval contains no integer
        num = self.a + s if self.b > 0 else self.a - s - 1
        return num // self.c

    def __str__(self) -> str:
        if self.b == 0:
            return f"{self.a}/{self.c}" if self.c != 1 else str(self.a)
        op = "+" if self.b > 0 else "-"
        return f"({self.a}{op}{abs(self.b)}*sqrt({self.d}))/{self.c}"

    __repr__ = __str__


_FULL = re.compile(
    r"^\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*(?:/\s*(-?\d+))?$")
_BARE = re.compile(
    r"^(?:(-?\d+)\s*([+-])\s*)?(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)$")
_ROOT = re.compile(r"^(-?)\s*sqrt\(\s*(\d+)\s*\)$")


def parse_surd(text: str) -> QuadraticIrrational:
    """Parse "(a+b*sqrt(d))/c" and the obvious abbreviations.

    Accepted: "(A+B*sqrt(D))/C", "(A-B*sqrt(D))/C" (the /C may be
    omitted), "A+B*sqrt(D)", "B*sqrt(D)", "sqrt(D)", "-sqrt(D)".
    Rational inputs (perfect-square D) are rejected.
    """
    s = text.strip()
    m = _FULL.match(s)
    if m:
        a, sgn, b, d, c = m.groups()
        val = QuadraticIrrational(int(a), int(b) if sgn == "+" else -int(b),
                                  int(c) if c is not None else 1, int(d))
    else:
        m = _BARE.match(s)
        if m:
            a, sgn, b, d = m.groups()
            b = int(b) if sgn in (None, "+") else -int(b)
            val = QuadraticIrrational(int(a) if a is not None else 0, b, 1, int(d))
        else:
            m = _ROOT.match(s)
            if not m:
                raise ValueError(f"cannot parse quadratic irrational: {text!r}")
            neg, d = m.groups()
            val = QuadraticIrrational(0, -1 if neg else 1, 1, int(d))
    if val.is_rational:
        raise ValueError(f"not irrational: {text!r}")
    return val


def mobius_apply(M: IntMatrix, x: QuadraticIrrational) -> QuadraticIrrational:
    """(M00 x + M01) / (M10 x + M11)."""
    if M.rows != 2 or M.cols != 2:
        raise ValueError("Moebius transform needs a 2x2 matrix")
    num = x * M[0, 0] + M[0, 1]
    den = x * M[1, 0] + M[1, 1]
    return num * den.reciprocal()


def cf_expansion(x: QuadraticIrrational, max_steps: int = 10 ** 4) -> tuple[list[int], list[int]]:
    """Exact continued fraction (preperiod, minimal period).

    Iterates x -> 1/(x - floor(x)) with exact surd states; the first
    repeated state closes the minimal period.
    """
    if x.is_rational:
        raise ValueError("continued fraction of a rational: not supported here")
    seen: dict[tuple[int, int, int, int], int] = {}
    digits: list[int] = []
    cur = x
    for k in range(max_steps):
        key = cur.key()
        if key in seen:
            j = seen[key]
            return digits[:j], digits[j:]
        seen[key] = k
        q = cur.floor()
        digits.append(q)
        cur = (cur - q).reciprocal()
    raise RuntimeError("continued fraction failed to close (step bound hit)")


def digit_matrix(q: int) -> IntMatrix:
    return IntMatrix([[q, 1], [1, 0]])


def convergent_matrix(digits) -> IntMatrix:
    M = IntMatrix.identity(2)
    for q in digits:
        M = M @ digit_matrix(q)
    return M


def _inv2(M: IntMatrix) -> IntMatrix:
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if det not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return IntMatrix([[det * M[1, 1], -det * M[0, 1]],
                      [-det * M[1, 0], det * M[0, 0]]])


def cf_value(preperiod, period) -> QuadraticIrrational:
    """The quadratic irrational with the given continued fraction."""
    if not period:
        raise ValueError("period must be nonempty")
    G = convergent_matrix(period)
    a, b, c, dd = G[0, 0], G[0, 1], G[1, 0], G[1, 1]
    # purely periodic tail y satisfies c y^2 + (dd - a) y - b = 0
    disc = (a - dd) * (a - dd) + 4 * b * c
    y = QuadraticIrrational(a - dd, 1, 2 * c, disc)
    return mobius_apply(convergent_matrix(preperiod), y)


def _rotations(seq: list[int]):
    for r in range(len(seq)):
        yield r, seq[r:] + seq[:r]


def sturmian_equivalent(x: QuadraticIrrational, y: QuadraticIrrational) -> bool:
    """Whether x and y have eventually coinciding continued fractions.

    Equivalent to integral Moebius equivalence (determinant +-1), which
    decides ordered-group isomorphism of Z + xZ and Z + yZ.
    """
    if x.is_rational or y.is_rational:
        raise ValueError("inputs must be irrational")
    if x.d != y.d:
        return False
    _, p1 = cf_expansion(x)
    _, p2 = cf_expansion(y)
    if len(p1) != len(p2):
        return False
    return any(rot == p2 for _, rot in _rotations(p1))


def equivalence_witness(x: QuadraticIrrational, y: QuadraticIrrational) -> IntMatrix | None:
    """A unimodular M with mobius_apply(M, x) == y, or None.

    Built from the continued fractions: if the tail of x after m digits
    equals the tail of y after n digits, then y = G_n(y) G_m(x)^{-1} x.
    """
    if x.is_rational or y.is_rational:
        raise ValueError("inputs must be irrational")
    if x.d != y.d:
        return None
    pre1, per1 = cf_expansion(x)
    pre2, per2 = cf_expansion(y)
    if len(per1) != len(per2):
        return None
    for r, rot in _rotations(per1):
        if rot == per2:
            Gx = convergent_matrix(pre1 + per1[:r])
            Gy = convergent_matrix(pre2)
            M = Gy @ _inv2(Gx)
            assert mobius_apply(M, x) == y
            return M
    return None
