import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decimal import Decimal

from oracles import beta_dec, dec
from pisotile.errors import ContextMismatch, DegreeOne, NotPisot, Reducible
from pisotile.qfield import approx, cmp, conj, floor, norm, pisot_new


def test_contexts(ctx103, ctx43):
    assert ctx103.norm_beta == -3 and ctx103.disc == 28 and ctx103.d == 7
    assert ctx43.norm_beta == -3 and ctx43.disc == 28
    assert ctx103.beta.surd_str() == "5 + 2*sqrt(7)"
    assert ctx43.beta.surd_str() == "2 + sqrt(7)"
    assert ctx103.digit_alphabet_max == 10 and ctx43.digit_alphabet_max == 4
    assert ctx103.beta_conj_sign == -1
    assert not ctx103.is_unit and pisot_new(1, 1).is_unit


@pytest.mark.parametrize("a,b,exc", [(2, -1, Reducible), (3, 0, DegreeOne), (1, -1, NotPisot),
                                     (1, 2, Reducible), (2, 5, NotPisot), (0, 2, NotPisot),
                                     (-3, 1, NotPisot)])
def test_rejections(a, b, exc):
    with pytest.raises(exc):
        pisot_new(a, b)


def test_conj_examples(ctx103, ctx43):
    assert conj(ctx103.beta) == 10 - ctx103.beta
    assert conj(ctx103.elem(Fraction(7, 2))) == Fraction(7, 2)
    assert conj(ctx43.beta - 4) == -ctx43.beta


def test_norm_examples(ctx103, ctx43):
    assert norm(ctx103.beta) == -3
    assert norm(ctx43.beta) == -3
    assert norm(ctx103.one) == 1


def test_cmp_examples(ctx103):
    assert cmp(ctx103.beta, ctx103.elem(10)) == 1
    assert cmp(ctx103.beta, ctx103.beta) == 0
    assert cmp(ctx103.beta - 10, ctx103.elem(Fraction(1, 3))) == -1


def test_floor_examples(ctx103, ctx43):
    assert floor(ctx103.beta) == 10
    assert floor(ctx103.elem(Fraction(7, 2))) == 3
    assert floor(ctx43.beta2) == -1


def test_approx_examples(ctx103):
    lo, hi = approx(ctx103.beta, 20)
    assert hi - lo <= Fraction(1, 2**20)
    assert lo <= Fraction(102915026, 10**7) <= hi + Fraction(1, 10**7)
    assert approx(ctx103.zero, 10) == (0, 0)
    g = ctx103.elem(Fraction(19, 24), Fraction(-1, 24))  # (7 - sqrt 7)/12
    lo, hi = approx(g, 40)
    assert abs(lo - Fraction(362854057411, 10**12)) < Fraction(1, 10**11)
    with pytest.raises(ValueError):
        approx(g, 0)


def test_parse(ctx103):
    assert ctx103.parse("-10+1*B") == ctx103.beta - 10
    assert ctx103.parse("11-B") == 11 - ctx103.beta
    assert ctx103.parse("3/4") == Fraction(3, 4)
    assert ctx103.parse("1/2-1/3*B") == ctx103.elem(Fraction(1, 2), Fraction(-1, 3))


def test_context_mismatch(ctx103, ctx43):
    with pytest.raises(ContextMismatch):
        ctx103.beta + ctx43.beta


def test_display(ctx103):
    g = ctx103.elem(Fraction(19, 24), Fraction(-1, 24))
    assert g.surd_str() == "(7 - sqrt(7))/12"
    assert g.coords() == "19/24-1/24*B"


def _rand_elem(rng, ctx, bits=64):
    def q():
        return Fraction(rng.randint(-2**bits, 2**bits), rng.randint(1, 2**bits))
    return ctx.elem(q(), q())


CONTEXTS = [(10, 3), (4, 3), (1, 1), (3, -1), (5, 2), (7, -3)]


def test_field_axioms_seeded():
    rng = random.Random(20240611)
    for i in range(10_000):
        ctx = pisot_new(*CONTEXTS[i % len(CONTEXTS)])
        x, y, z = (_rand_elem(rng, ctx, 20) for _ in range(3))
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        if x:
            assert x * x.inverse() == 1
        assert conj(x * y) == conj(x) * conj(y)
        assert conj(x + y) == conj(x) + conj(y)
        assert conj(conj(x)) == x
        assert norm(x * y) == norm(x) * norm(y)


elem_parts = st.fractions(min_value=-2**64, max_value=2**64, max_denominator=2**64)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(CONTEXTS), elem_parts, elem_parts)
def test_floor_brackets(ab, u, v):
    ctx = pisot_new(*ab)
    x = ctx.elem(u, v)
    k = floor(x)
    assert x.cmp(k) >= 0 and x.cmp(k + 1) < 0


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(CONTEXTS), elem_parts, elem_parts, elem_parts, elem_parts)
def test_cmp_matches_decimal(ab, u1, v1, u2, v2):
    ctx = pisot_new(*ab)
    x, y = ctx.elem(u1, v1), ctx.elem(u2, v2)
    dx, dy = dec((x.u, x.v), *ab), dec((y.u, y.v), *ab)
    if abs(dx - dy) > abs(dx) * Decimal('1e-60') + Decimal('1e-60'):
        assert cmp(x, y) == (1 if dx > dy else -1)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(CONTEXTS), elem_parts, elem_parts, st.integers(1, 80))
def test_approx_encloses(ab, u, v, bits):
    ctx = pisot_new(*ab)
    x = ctx.elem(u, v)
    lo, hi = approx(x, bits)
    assert hi - lo <= Fraction(1, 2**bits)
    d = dec((x.u, x.v), *ab)
    eps = abs(d) * Decimal('1e-70') + Decimal('1e-70')
    assert Fraction(lo) - Fraction(eps) <= Fraction(d) <= Fraction(hi) + Fraction(eps)


def test_beta_is_dominant_root():
    for ab in CONTEXTS:
        ctx = pisot_new(*ab)
        beta, beta2 = beta_dec(*ab)
        assert abs(Fraction(beta) - Fraction(approx(ctx.beta, 60)[0])) < Fraction(1, 2**55)
        assert abs(beta2) < 1 < beta
        assert ctx.beta * ctx.beta == ctx.a * ctx.beta + ctx.b
