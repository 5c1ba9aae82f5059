"""Exact quadratic-field coordinates and float tolerance conventions.

A coordinate is either a plain Python float (compared with the global
tolerance TOL_EQ), a plain int, or a QuadNum a + b*tau where tau is the
positive root of x^2 = p*x + q for a fixed real quadratic field.  All
QuadNum comparisons are decided exactly with integer arithmetic, so two
distinct numbers never collide and equal numbers never split, no matter
how close their float values are.  A point source uses one representation
consistently.
"""

from __future__ import annotations

import math
from fractions import Fraction


TOL_EQ = 1e-9


class QuadField:
    """Real quadratic field Q(tau), tau the positive root of x^2 = p x + q.

    The discriminant D = p^2 + 4q must be positive and not a perfect
    square, so tau is irrational and (a, b) -> a + b*tau is injective on
    rational pairs.
    """

    __slots__ = ("name", "p", "q", "disc", "tau", "tau_conj")

    def __init__(self, name: str, p: int, q: int):
        disc = p * p + 4 * q
        if disc <= 0:
            raise ValueError("field discriminant must be positive")
        r = math.isqrt(disc)
        if r * r == disc:
            raise ValueError("discriminant %d is a perfect square; tau would be rational" % disc)
        self.name = name
        self.p = p
        self.q = q
        self.disc = disc
        self.tau = (p + math.sqrt(disc)) / 2.0
        self.tau_conj = (p - math.sqrt(disc)) / 2.0

    def sign(self, a, b) -> int:
        """Exact sign of a + b*tau for rational a, b."""
        # 2(a + b*tau) = (2a + p*b) + b*sqrt(D)
        if type(a) is int and type(b) is int:
            u = 2 * a + self.p * b
            v = b
        else:
            u = 2 * Fraction(a) + self.p * Fraction(b)
            v = Fraction(b)
        if v == 0:
            return 0 if u == 0 else (1 if u > 0 else -1)
        if u == 0:
            return 1 if v > 0 else -1
        if u > 0 and v > 0:
            return 1
        if u < 0 and v < 0:
            return -1
        t = u * u - v * v * self.disc  # sign(u + v sqrt(D)) = sign(u) * sign(t) here
        if t == 0:
            return 0
        if u > 0:  # v < 0
            return 1 if t > 0 else -1
        return 1 if t < 0 else -1  # u < 0, v > 0

    def __repr__(self):
        return "QuadField(%r, p=%d, q=%d)" % (self.name, self.p, self.q)

    def __eq__(self, other):
        return isinstance(other, QuadField) and (self.p, self.q) == (other.p, other.q)

    def __hash__(self):
        return hash(("QuadField", self.p, self.q))


GOLDEN = QuadField("golden", 1, 1)    # tau = (1 + sqrt5)/2
SILVER = QuadField("silver", 2, 1)    # tau = 1 + sqrt2

_FIELDS = {"golden": GOLDEN, "silver": SILVER}


def field_by_name(name: str) -> QuadField:
    try:
        return _FIELDS[name]
    except KeyError:
        raise ValueError("unknown quadratic field %r (have: %s)" % (name, sorted(_FIELDS)))


class QuadNum:
    """a + b*tau with rational a, b; exact ring arithmetic and ordering."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field: QuadField):
        self.a = a
        self.b = b
        self.field = field

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadNum):
            if other.field != self.field:
                raise ValueError("mixed quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(other, 0, self.field)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) + other
        return QuadNum(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) - other
        return QuadNum(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return other - float(self)
        return o - self

    def __neg__(self):
        return QuadNum(-self.a, -self.b, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return float(self) * other
        p, q = self.field.p, self.field.q
        # (a1 + b1 t)(a2 + b2 t), t^2 = p t + q
        return QuadNum(
            self.a * o.a + q * self.b * o.b,
            self.a * o.b + self.b * o.a + p * self.b * o.b,
            self.field,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(1, 1) / Fraction(other)
            return QuadNum(self.a * f, self.b * f, self.field)
        return float(self) / float(other)

    def conj(self) -> "QuadNum":
        """Galois conjugate: tau -> p - tau."""
        return QuadNum(self.a + self.field.p * self.b, -self.b, self.field)

    # -- comparisons (exact) ----------------------------------------------
    def _sign_diff(self, other) -> int:
        o = self._coerce(other)
        if o is None:  # float comparison, exact via Fraction(float)
            o = QuadNum(Fraction(other), 0, self.field)
        return self.field.sign(self.a - o.a, self.b - o.b)

    def __eq__(self, other):
        if not isinstance(other, (QuadNum, int, Fraction, float)):
            return NotImplemented
        return self._sign_diff(other) == 0

    def __lt__(self, other):
        return self._sign_diff(other) < 0

    def __le__(self, other):
        return self._sign_diff(other) <= 0

    def __gt__(self, other):
        return self._sign_diff(other) > 0

    def __ge__(self, other):
        return self._sign_diff(other) >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)  # agree with int/Fraction hashing
        return hash((self.a, self.b, self.field.p, self.field.q))

    def __float__(self):
        return float(self.a) + float(self.b) * self.field.tau

    def __repr__(self):
        return "QuadNum(%s, %s, %s)" % (self.a, self.b, self.field.name)


# -- generic coordinate helpers (float | int | QuadNum) --------------------

def as_float(c) -> float:
    return float(c)


def coord_eq(c1, c2, tol: float = TOL_EQ) -> bool:
    """Equality: exact when both coordinates are exact, |.| <= tol otherwise."""
    if _is_exact(c1) and _is_exact(c2):
        return c1 == c2
    return abs(float(c1) - float(c2)) <= tol


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction, QuadNum))


def is_exact_coord(c) -> bool:
    return _is_exact(c)


def coord_key(c):
    """Hashable key identifying a coordinate value.

    Exact coordinates key exactly (ints and QuadNum(a, 0) agree).  Floats
    snap to a TOL_EQ-sized grid; callers relying on float keys must keep
    distinct values well separated relative to TOL_EQ.
    """
    if isinstance(c, QuadNum):
        if c.b == 0:
            return ("E", c.a, 0)
        return ("E", c.a, c.b, c.field.p, c.field.q)
    if isinstance(c, (int, Fraction)):
        return ("E", Fraction(c), 0) if isinstance(c, Fraction) else ("E", c, 0)
    return ("F", round(float(c) / TOL_EQ))


def exact_from_float(x: float) -> Fraction:
    """The exact rational value of a binary float."""
    return Fraction(x)
