"""The beta-transformation T(x) = beta*x mod 1 and everything built on it.

Digit words are plain integer lists: for (10,3) the first digit of d_beta(1)
is 10, so string encodings would be ambiguous.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import kernels
from .errors import DigitOutOfRange, IterationCapExceeded, NegativeInput, OutOfRange
from .qfield import PisotQuad, QuadElem

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class ParryData:
    """d_beta(1) and its quasi-greedy version d*_beta(1).

    ``d_one`` holds the digits of d_beta(1) up to the start of its period and
    ``d_one_period`` the period (empty when the expansion is finite).
    ``d_star`` is ``(m, period)`` and ``t`` lists t_1..t_n, so that
    d*_beta(1) = t_1..t_m (t_{m+1}..t_n)^inf.
    """

    d_one: tuple[int, ...]
    d_one_period: tuple[int, ...]
    d_star: tuple[int, tuple[int, ...]]
    n: int
    t: tuple[int, ...]

    @property
    def m(self) -> int:
        return self.d_star[0]

    @property
    def simple(self) -> bool:
        return not self.d_one_period


@dataclass(frozen=True)
class Expansion:
    integer_part: tuple[int, ...] = ()
    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    @property
    def finite(self) -> bool:
        return not self.period

    def digits(self, count: int) -> list[int]:
        """First ``count`` fractional digits."""
        out = list(self.preperiod[:count])
        while len(out) < count:
            if not self.period:
                out.extend([0] * (count - len(out)))
                break
            out.extend(self.period[: count - len(out)])
        return out


@dataclass(frozen=True)
class DensityReport:
    b_squarefree: bool
    b_coprime_disc: bool
    qr_all_odd_primes: bool
    mod8_ok: bool
    overall: bool
    per_prime: tuple[tuple[int, int, int, bool], ...] = field(default_factory=tuple)


# -- integer state helpers ---------------------------------------------------

def _as_elem(x, ctx: PisotQuad) -> QuadElem:
    if isinstance(x, QuadElem):
        return x
    return QuadElem(ctx, Fraction(x), 0)


def _to_state(x: QuadElem) -> tuple[int, int, int]:
    """x = (U + V*beta)/q with integers and q > 0."""
    q = x.u.denominator * x.v.denominator // gcd(x.u.denominator, x.v.denominator)
    return int(x.u * q), int(x.v * q), q


def _from_state(ctx, U, V, q) -> QuadElem:
    return QuadElem(ctx, Fraction(U, q), Fraction(V, q))


def _check_unit_interval(x: QuadElem):
    if x.sign() < 0 or x.cmp(1) >= 0:
        raise OutOfRange(f"{x.coords()} is not in [0, 1)")


# -- operations --------------------------------------------------------------

def t_beta_step(x, ctx: PisotQuad | None = None) -> tuple[int, QuadElem]:
    """One greedy step: (floor(beta*x), beta*x - floor(beta*x))."""
    if ctx is None:
        ctx = x.ctx
    x = _as_elem(x, ctx)
    _check_unit_interval(x)
    y = x * ctx.beta
    digit = y.floor()
    return digit, y - digit


def _orbit(ctx, U, V, q, cap):
    """Iterate T from (U+V beta)/q; return (digits, states, loop_start).

    ``states[k]`` is the state after k+1 steps.  ``loop_start`` is the index j
    such that states[-1] re-enters at states[j], or None if the orbit hit 0.
    """
    a, b, D = ctx.a, ctx.b, ctx.D
    digits, states = [], []
    seen = {}
    for _ in range(cap):
        d, U, V = kernels.t_step(a, b, D, q, U, V)
        digits.append(d)
        if U == 0 and V == 0:
            states.append((U, V))
            return digits, states, None
        key = (U, V)
        if key in seen:
            return digits, states, seen[key]
        seen[key] = len(states)
        states.append(key)
    raise IterationCapExceeded(f"T_beta orbit longer than {cap} steps")


def d_beta_one(ctx: PisotQuad, cap: int = DEFAULT_CAP) -> ParryData:
    # T(1) is computed as beta - floor(beta); the kernel step from 1 does that
    digits, states, loop = _orbit(ctx, 1, 0, 1, cap)
    if loop is None:
        t = tuple(digits[:-1]) + (digits[-1] - 1,)
        return ParryData(tuple(digits), (), (0, t), len(t), t)
    # states[j] = T^{j+1}(1); the last step re-entered states[loop]
    m = loop + 1
    pre, per = tuple(digits[:m]), tuple(digits[m:])
    return ParryData(pre, per, (m, per), len(digits), pre + per)


def t_orbit_of_one(ctx: PisotQuad, cap: int = DEFAULT_CAP):
    """(values, relabelling): T^k(1) for k < n and node indices sorted by value."""
    parry = ctx.parry
    values = [ctx.one]
    U, V = 1, 0
    for _ in range(parry.n - 1):
        _, U, V = kernels.t_step(ctx.a, ctx.b, ctx.D, 1, U, V)
        values.append(ctx.elem(U, V))
    order = sorted(range(1, parry.n + 1), key=_cmp_key(values))
    return values, tuple(order)


def _cmp_key(values):
    from functools import cmp_to_key

    return cmp_to_key(lambda i, j: values[i - 1].cmp(values[j - 1]))


def expand(x, ctx: PisotQuad, cap: int = DEFAULT_CAP) -> Expansion:
    """Greedy beta-expansion of x >= 0 (integer part, preperiod, period)."""
    x = _as_elem(x, ctx)
    if x.sign() < 0:
        raise NegativeInput(f"{x.coords()} is negative")
    if not x:
        return Expansion()
    k = 0
    scale = ctx.one
    while x.cmp(scale) >= 0:
        scale = scale * ctx.beta
        k += 1
    U, V, q = _to_state(x / scale)
    a, b, D = ctx.a, ctx.b, ctx.D
    head = []
    for _ in range(k):
        d, U, V = kernels.t_step(a, b, D, q, U, V)
        head.append(d)
    if U == 0 and V == 0:
        return Expansion(tuple(head))
    seen = {(U, V): 0}
    digits = []
    for _ in range(cap):
        d, U, V = kernels.t_step(a, b, D, q, U, V)
        digits.append(d)
        if U == 0 and V == 0:
            return Expansion(tuple(head), tuple(digits))
        j = seen.get((U, V))
        if j is not None:
            return Expansion(tuple(head), tuple(digits[:j]), tuple(digits[j:]))
        seen[(U, V)] = len(digits)
    raise IterationCapExceeded(f"expansion not periodic within {cap} digits")


def _lex_cmp(pre1, per1, pre2, per2) -> int:
    """Lexicographic comparison of two eventually periodic sequences."""
    per1 = per1 or (0,)
    per2 = per2 or (0,)
    la, lb = len(per1), len(per2)
    horizon = max(len(pre1), len(pre2)) + la * lb // gcd(la, lb)
    for i in range(horizon):
        x = pre1[i] if i < len(pre1) else per1[(i - len(pre1)) % la]
        y = pre2[i] if i < len(pre2) else per2[(i - len(pre2)) % lb]
        if x != y:
            return -1 if x < y else 1
    return 0


def is_admissible(w, ctx: PisotQuad) -> bool:
    """Parry's condition: every shift of w (w.0^inf, or pre.period^inf) is < d*_beta(1)."""
    if isinstance(w, tuple) and len(w) == 2 and all(isinstance(p, (list, tuple)) for p in w):
        pre, per = tuple(w[0]), tuple(w[1])
    else:
        pre, per = tuple(w), ()
    top = ctx.digit_alphabet_max
    for digit in pre + per:
        if not 0 <= digit <= top:
            raise DigitOutOfRange(f"digit {digit} outside 0..{top}")
    parry = ctx.parry
    m, dper = parry.d_star
    dpre = parry.t[:m]
    for i in range(len(pre)):
        if _lex_cmp(pre[i:], per, dpre, dper) >= 0:
            return False
    for i in range(len(per)):
        if _lex_cmp(per[i:], per, dpre, dper) >= 0:
            return False
    return True


def adm_step(ctx: PisotQuad, node: int, label: int):
    """Target of the admissibility-graph edge (node, label), or None."""
    parry = ctx.parry
    t = parry.t
    if label < 0 or label > t[node - 1]:
        return None
    if label < t[node - 1]:
        return 1
    return node + 1 if node < parry.n else parry.m + 1


def language_node(w, ctx: PisotQuad):
    """Terminal node of w in the admissibility graph from node 1, or None (reject)."""
    node = 1
    for digit in w:
        node = adm_step(ctx, node, digit)
        if node is None:
            return None
    return node


def is_purely_periodic(x, ctx: PisotQuad, cap: int = DEFAULT_CAP) -> tuple[bool, int | None]:
    x = _as_elem(x, ctx)
    _check_unit_interval(x)
    U, V, q = _to_state(x)
    mu, lam = kernels.orbit_tail_period(ctx.a, ctx.b, q, U, V, cap)
    if mu < 0:
        raise IterationCapExceeded(f"orbit of {x.coords()} exceeds {cap} steps")
    return (True, lam) if mu == 0 else (False, None)


def satisfies_F(ctx: PisotQuad) -> bool:
    """Finiteness property (F) for a quadratic Pisot number: a >= b >= 1."""
    return ctx.a >= ctx.b >= 1


def quadratic_pisot_criterion(ctx: PisotQuad) -> bool:
    """Two-branch coefficient test; it characterizes quadratic Pisot numbers, not (F)."""
    a, b = ctx.a, ctx.b
    return a >= b >= 1 or (a >= 3 and -a + 2 <= b <= -1)


def _prime_factors(n: int) -> list[int]:
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D/p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def density_report(ctx: PisotQuad) -> DensityReport:
    if ctx.is_unit:
        return DensityReport(True, True, True, True, True, ())
    b = abs(ctx.b)
    primes = _prime_factors(b)
    squarefree = all(b % (p * p) for p in primes)
    coprime = gcd(b, ctx.disc) == 1
    qr = all(kronecker(ctx.d, p) == 1 for p in primes if p != 2)
    mod8 = b % 2 == 1 or ctx.d % 8 == 1
    per_prime = []
    for p in primes:
        k = kronecker(ctx.disc, p)
        e, f = (2, 1) if k == 0 else ((1, 1) if k == 1 else (1, 2))
        per_prime.append((p, e, f, k == 1))
    return DensityReport(squarefree, coprime, qr, mod8,
                         squarefree and coprime and qr and mod8, tuple(per_prime))


def boundary_hypotheses(ctx: PisotQuad) -> tuple[bool, str]:
    """Whether (beta) has only degree-1, unramified prime divisors with
    beta*O meeting Z in N(beta)*Z.  Returns (ok, reason)."""
    if ctx.is_unit:
        return True, ""
    for p, e, f, split in density_report(ctx).per_prime:
        if not split:
            kind = "ramified" if e > 1 else "inert"
            return False, f"prime {p} is {kind} in Q(sqrt({ctx.d}))"
        if ctx.a % p == 0 and ctx.b % (p * p) == 0:
            return False, f"beta is divisible by the rational prime {p}"
    return True, ""


def lem_pp_blocks(p: int, q: int, ctx: PisotQuad) -> bool:
    """True when gcd(q, N(beta)) > 1, which rules out a purely periodic p/q."""
    return gcd(q, ctx.norm_beta) > 1
