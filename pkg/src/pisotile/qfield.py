"""Exact arithmetic in the real quadratic field Q(beta), beta^2 = a*beta + b.

Elements are stored as ``u + v*beta`` with rational ``u, v``.  Every order
decision (comparison, floor, sign) is made with integer arithmetic only;
floating point appears solely in :func:`approx`-derived conversions used
for display.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt
from numbers import Rational

from .errors import ContextMismatch, DegreeOne, NotPisot, Reducible


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n = s**2 * d`` and ``d`` square-free (n > 0)."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= m
    return s, d


def sign_of_surd(m, n, D: int) -> int:
    """Exact sign of ``m + n*sqrt(D)`` for rationals m, n and a non-square D > 0."""
    sm = (m > 0) - (m < 0)
    sn = (n > 0) - (n < 0)
    if sn == 0:
        return sm
    if sm == 0 or sm == sn:
        return sn
    # opposite signs: compare m^2 with n^2 D (never equal, D not a square)
    return sm if m * m > n * n * D else sn


def floor_surd(M: int, N: int, D: int, den: int) -> int:
    """floor((M + N*sqrt(D)) / den) for integers, den > 0, D non-square."""
    if N == 0:
        return M // den
    r = isqrt(N * N * D)
    s = r if N > 0 else -r - 1
    # M + N*sqrt(D) lies strictly inside (M+s, M+s+1)
    return (M + s) // den


class PisotQuad:
    """Validated context for the quadratic Pisot number beta with beta^2 = a*beta + b.

    Attributes are fixed at construction; the Parry data is computed on first
    access and cached.
    """

    def __init__(self, a: int, b: int):
        a, b = int(a), int(b)
        if b == 0:
            raise DegreeOne(f"X^2 - {a}X has the root 0; beta would be the integer {a}")
        D = a * a + 4 * b
        if _is_square(D):
            raise Reducible(f"X^2 - ({a})X - ({b}) has integer roots (discriminant {D})")
        if D < 0:
            raise NotPisot(f"complex roots for a={a}, b={b}")
        # beta = (a + sqrt D)/2 > 1  <=>  (a - 2) + sqrt D > 0
        if sign_of_surd(a - 2, 1, D) <= 0:
            raise NotPisot(f"dominant root of X^2 - ({a})X - ({b}) is not > 1")
        # |beta2| < 1 with beta2 = (a - sqrt D)/2  <=>  a - 2 < sqrt D < a + 2
        if sign_of_surd(a + 2, -1, D) <= 0 or sign_of_surd(2 - a, 1, D) <= 0:
            raise NotPisot(f"conjugate of beta for a={a}, b={b} has modulus >= 1")
        self.a = a
        self.b = b
        self.D = D
        self.sq, self.d = squarefree_decomposition(D)
        self.disc = self.d if self.d % 4 == 1 else 4 * self.d
        self.norm_beta = -b
        self.is_unit = abs(b) == 1
        self.digit_alphabet_max = floor_surd(a, 1, D, 2)
        self.beta_conj_sign = sign_of_surd(a, -1, D)

    def __repr__(self):
        return f"PisotQuad(a={self.a}, b={self.b})"

    def __eq__(self, other):
        return isinstance(other, PisotQuad) and (self.a, self.b) == (other.a, other.b)

    def __hash__(self):
        return hash(("PisotQuad", self.a, self.b))

    def __reduce__(self):
        return (PisotQuad, (self.a, self.b))

    # -- handy elements -------------------------------------------------
    def elem(self, u=0, v=0) -> "QuadElem":
        return QuadElem(self, u, v)

    @property
    def one(self) -> "QuadElem":
        return QuadElem(self, 1, 0)

    @property
    def zero(self) -> "QuadElem":
        return QuadElem(self, 0, 0)

    @property
    def beta(self) -> "QuadElem":
        return QuadElem(self, 0, 1)

    @property
    def beta2(self) -> "QuadElem":
        """The Galois conjugate a - beta (the contraction ratio of the tiles)."""
        return QuadElem(self, self.a, -1)

    @cached_property
    def parry(self):
        from .numeration import d_beta_one

        return d_beta_one(self)

    @cached_property
    def orbit_of_one(self) -> list["QuadElem"]:
        """T^k(1) for k = 0..n-1; the height of subtile a is entry a-1."""
        from .numeration import t_orbit_of_one

        return t_orbit_of_one(self)[0]

    def height(self, node: int) -> "QuadElem":
        return self.orbit_of_one[node - 1]

    def parse(self, text: str) -> "QuadElem":
        """Parse ``"P/Q"``, an integer, or ``"K+L*B"`` into an element."""
        t = text.replace(" ", "")
        if t.endswith("B"):
            head = t[:-2] if t.endswith("*B") else t[:-1]
            if head in ("", "+", "-") or head[-1] in "+-":
                head += "1"
            # split K and L at the last sign that is not the leading one
            idx = max(head.rfind("+"), head.rfind("-"))
            if idx <= 0:
                return QuadElem(self, 0, Fraction(head))
            return QuadElem(self, Fraction(head[:idx]), Fraction(head[idx:]))
        return QuadElem(self, Fraction(t), 0)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class QuadElem:
    """The element u + v*beta of Q(beta); immutable."""

    __slots__ = ("ctx", "u", "v")

    def __init__(self, ctx: PisotQuad, u=0, v=0):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "u", _as_fraction(u))
        object.__setattr__(self, "v", _as_fraction(v))

    def __setattr__(self, key, value):
        raise AttributeError("QuadElem is immutable")

    def __reduce__(self):
        return (QuadElem, (self.ctx, self.u, self.v))

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.ctx, other, 0)
        return NotImplemented

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.ctx, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.ctx, -self.u, -self.v)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.ctx, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.ctx.a, self.ctx.b
        vv = self.v * o.v
        return QuadElem(self.ctx, self.u * o.u + vv * b, self.u * o.v + o.u * self.v + vv * a)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(beta)")
        c = self.conj()
        return QuadElem(self.ctx, c.u / n, c.v / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadElem(self.ctx, 1, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- field structure ------------------------------------------------------
    def conj(self) -> "QuadElem":
        # beta + beta2 = a
        return QuadElem(self.ctx, self.u + self.v * self.ctx.a, -self.v)

    def norm(self) -> Fraction:
        # (u + v beta)(u + v beta2) = u^2 + a u v - b v^2
        a, b = self.ctx.a, self.ctx.b
        return self.u * self.u + a * self.u * self.v - b * self.v * self.v

    def trace(self) -> Fraction:
        return 2 * self.u + self.ctx.a * self.v

    def is_rational(self) -> bool:
        return self.v == 0

    def in_z_beta(self) -> bool:
        return self.u.denominator == 1 and self.v.denominator == 1

    def surd_form(self) -> tuple[Fraction, Fraction, int]:
        """Return (P, Q, d) with self = P + Q*sqrt(d), d square-free."""
        ctx = self.ctx
        return self.u + self.v * ctx.a / 2, self.v * ctx.sq / 2, ctx.d

    # -- order ---------------------------------------------------------------
    def sign(self) -> int:
        # u + v(a + sqrt D)/2 = ((2u + a v) + v sqrt D)/2
        return sign_of_surd(2 * self.u + self.ctx.a * self.v, self.v, self.ctx.D)

    def cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare QuadElem with {type(other).__name__}")
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return self.ctx == other.ctx and self.u == other.u and self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.ctx.a, self.ctx.b, self.u, self.v))

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def floor(self) -> int:
        ctx = self.ctx
        m = 2 * self.u + ctx.a * self.v
        n = self.v
        L = m.denominator * n.denominator // gcd(m.denominator, n.denominator)
        return floor_surd(int(m * L), int(n * L), ctx.D, 2 * L)

    def __floor__(self):
        return self.floor()

    def __float__(self):
        lo, hi = approx(self, 60)
        return float((lo + hi) / 2)

    # -- display -------------------------------------------------------------
    def coords(self) -> str:
        """Exact coordinates in the form ``K+L*B``."""
        return f"{_fmt_q(self.u)}{_fmt_signed(self.v)}*B"

    def surd_str(self) -> str:
        P, Q, d = self.surd_form()
        if Q == 0:
            return _fmt_q(P)
        den = P.denominator * Q.denominator // gcd(P.denominator, Q.denominator)
        n1, n2 = int(P * den), int(Q * den)
        root = f"sqrt({d})" if abs(n2) == 1 else f"{abs(n2)}*sqrt({d})"
        if n1 == 0:
            body = root if n2 > 0 else f"-{root}"
            return body if den == 1 else f"({body})/{den}"
        body = f"{n1} {'+' if n2 > 0 else '-'} {root}"
        return body if den == 1 else f"({body})/{den}"

    def __repr__(self):
        return f"QuadElem({self.coords()})"

    __str__ = coords


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_signed(q: Fraction) -> str:
    s = _fmt_q(q)
    return s if s.startswith("-") else "+" + s


def conj(x: QuadElem) -> QuadElem:
    return x.conj()


def norm(x: QuadElem) -> Fraction:
    return x.norm()


def cmp(x: QuadElem, y: QuadElem) -> int:
    return x.cmp(y)


def floor(x: QuadElem) -> int:
    return x.floor()


def pisot_new(a: int, b: int) -> PisotQuad:
    ctx = PisotQuad(a, b)
    ctx.parry  # noqa: B018  (forces the second construction stage)
    return ctx


def approx(x: QuadElem, bits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure [lo, hi] of the real value of x with hi - lo <= 2**-bits."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    ctx = x.ctx
    m = 2 * x.u + ctx.a * x.v  # x = (m + v sqrt D)/2
    v = x.v
    if v == 0:
        return x.u, x.u
    # sqrt D in [r/2^k, (r+1)/2^k]; width of x is |v| 2^-k / 2
    k = bits + max(0, abs(v).numerator.bit_length() - abs(v).denominator.bit_length() + 1)
    r = isqrt(ctx.D << (2 * k))
    s_lo, s_hi = Fraction(r, 1 << k), Fraction(r + 1, 1 << k)
    if v > 0:
        return (m + v * s_lo) / 2, (m + v * s_hi) / 2
    return (m + v * s_hi) / 2, (m + v * s_lo) / 2
