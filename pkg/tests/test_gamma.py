import random
from fractions import Fraction

import pytest

from pisotile.errors import BadInterval, DeadEndNode, HypothesesFail
from pisotile.gamma import (Enclosure, Interval, attractor_hull, cookie_cantor, digit_pattern,
                            gamma, gamma_scan, hull_table, inf_in_interval, interval_nodes,
                            subtile_graph, subtile_min)
from pisotile.graphs import BoundaryNode, boundary_graph
from pisotile.qfield import pisot_new


def _node_graph(ctx, K, L):
    g = boundary_graph(ctx)
    return g.digit_graph(0), g.index(BoundaryNode(1, ctx.elem(K, L), 1))


def test_golden_hull_43(ctx43):
    dg, v = _node_graph(ctx43, -4, 1)
    alpha = -ctx43.beta2  # sqrt 7 - 2
    h = attractor_hull(dg, v, ctx43)
    assert h.exact
    assert h.lo == -4 * alpha / (1 - alpha * alpha)
    assert h.hi == (2 - 2 * alpha) / (1 - alpha * alpha)
    assert abs(float(h.lo) + 4.4305) < 1e-4 and abs(float(h.hi) - 1.2153) < 1e-4


def test_golden_hull_103(ctx103):
    dg, v = _node_graph(ctx103, -10, 1)
    alpha = -ctx103.beta2  # 2 sqrt 7 - 5
    h = attractor_hull(dg, v, ctx103)
    assert h.lo == -10 * alpha / (1 - alpha * alpha)
    assert h.hi == (-8 * alpha + 2) / (1 - alpha * alpha)


@pytest.mark.parametrize("ab", [(4, 3), (10, 3)])
def test_bellman_exact(ab):
    ctx = pisot_new(*ab)
    dg = boundary_graph(ctx).digit_graph(0)
    table = hull_table(dg, ctx)
    assert table.exact
    r = ctx.beta2
    for v, out in dg.items():
        # a negative ratio swaps lo and hi of the tail
        assert min(p + r * table.hi[t] for p, t in out) == table.lo[v]
        assert max(p + r * table.lo[t] for p, t in out) == table.hi[v]


@pytest.mark.parametrize("ab", [(4, 3), (10, 3)])
def test_hull_contains_random_paths(ab):
    ctx = pisot_new(*ab)
    dg = boundary_graph(ctx).digit_graph(0)
    table = hull_table(dg, ctx)
    r = float(ctx.beta2)
    lo = {v: float(x) for v, x in table.lo.items()}
    hi = {v: float(x) for v, x in table.hi.items()}
    rng = random.Random(3)
    for _ in range(2000):
        v0 = v = rng.choice(list(dg))
        s, c = 0.0, 1.0
        for _ in range(30):
            p, v = rng.choice(dg[v])
            s += c * p
            c *= r
        tail = (c * lo[v], c * hi[v])
        assert lo[v0] - 1e-9 <= s + min(tail) and s + max(tail) <= hi[v0] + 1e-9


def test_policy_cycle_value(ctx103):
    # a single self-loop labelled 1 has value 1/(1 - beta2)
    table = hull_table({0: [(1, 0)]}, ctx103)
    assert table.lo[0] == table.hi[0] == 1 / (1 - ctx103.beta2)


def test_dead_end(ctx103):
    with pytest.raises(DeadEndNode):
        hull_table({0: [(1, 1)], 1: []}, ctx103)


def test_cookie_cantor(ctx103):
    alpha = -ctx103.beta2
    (lo, hi), full = cookie_cantor(alpha, 3)
    assert lo == 0 and hi == 2 / (1 - alpha) and not full
    assert cookie_cantor(alpha, 4)[1]
    assert cookie_cantor(alpha, 1) == ((0, 0), True)
    with pytest.raises(ValueError):
        cookie_cantor(alpha, 0)


def test_digit_pattern_103(ctx103):
    dg, v = _node_graph(ctx103, -10, 1)
    pat = digit_pattern(dg, v)
    assert pat is not None
    assert set(pat.period) == {frozenset({0, 1, 2}), frozenset({8, 9, 10})}


def test_interval_nodes(ctx43, ctx103):
    dg = boundary_graph(ctx43).digit_graph(0)
    assert interval_nodes(dg, hull_table(dg, ctx43), ctx43) == frozenset(dg)
    # three digits per level at ratio ~0.29 leave gaps
    dg = boundary_graph(ctx103).digit_graph(0)
    assert interval_nodes(dg, hull_table(dg, ctx103), ctx103) == frozenset()


def test_interval_nodes_cantor(ctx103):
    # digits {0, 10} at ratio ~ -0.29 leave a gap
    dg = {0: [(0, 0), (10, 0)]}
    assert interval_nodes(dg, hull_table(dg, ctx103), ctx103) == frozenset()


def test_inf_in_interval_attained(ctx103):
    dg, v = _node_graph(ctx103, -10, 1)
    q = inf_in_interval(dg, v, ctx103.zero, ctx103.one, ctx103, lo_closed=False, hi_closed=False)
    assert q.exact and q.attained
    assert q.value == ctx103.elem(Fraction(19, 24), Fraction(-1, 24))


def test_inf_in_interval_proven_node(ctx43):
    dg, v = _node_graph(ctx43, -4, 1)
    q = inf_in_interval(dg, v, ctx43.zero, ctx43.one, ctx43, lo_closed=False, hi_closed=False)
    assert q.exact and q.value == 0 and not q.attained


def test_inf_in_interval_cantor(ctx103):
    dg = {0: [(0, 0), (10, 0)]}
    table = hull_table(dg, ctx103)
    lo, hi = table.interval(0)
    # the minimum itself is attained
    q = inf_in_interval(dg, 0, lo, hi, ctx103, negate=False)
    assert q.exact and q.value == lo and q.attained
    # the gap between the two first-level pieces holds no point
    r = ctx103.beta2
    q = inf_in_interval(dg, 0, r * lo, 10 + r * hi, ctx103, negate=False,
                        lo_closed=False, hi_closed=False)
    assert q.empty
    with pytest.raises(BadInterval):
        inf_in_interval(dg, 0, hi, lo, ctx103)
    assert inf_in_interval(dg, 0, lo, lo, ctx103, lo_closed=False).empty


def test_inf_enclosure_on_budget(ctx103):
    dg = {0: [(0, 0), (10, 0)]}
    table = hull_table(dg, ctx103)
    lo, hi = table.interval(0)
    mid = (lo + hi) / 2 + Fraction(1, 7)
    q = inf_in_interval(dg, 0, mid, hi, ctx103, negate=False, max_boxes=3)
    assert q.kind in ("exact", "enclosure")
    if q.kind == "enclosure":
        assert isinstance(q.value, Enclosure) and q.lower() <= float(hi)


def test_interval_helper(ctx103):
    iv = Interval(ctx103.zero, ctx103.one, False, True)
    assert not iv.contains(ctx103.zero) and iv.contains(ctx103.one)
    assert iv.meets(ctx103.elem(-1), ctx103.elem(Fraction(1, 2)))
    assert not iv.meets(ctx103.elem(-1), ctx103.zero)


def test_subtile_min(ctx103):
    m2, exact = subtile_min(2, ctx103)
    assert exact and m2 > 0
    assert subtile_min(1, ctx103)[0] <= 0
    assert sorted(subtile_graph(ctx103)) == [1, 2]


def test_gamma_43(ctx43):
    res = gamma(ctx43, scan=False)
    assert res.value == 0 and res.exact and res.mode == "exact"
    assert res.situation == "C" and str(res.witness) == "[1,-4+1*B,1]"


def test_gamma_103(ctx103):
    res = gamma(ctx103, scan=False)
    assert res.value == ctx103.elem(Fraction(19, 24), Fraction(-1, 24))
    assert res.value == (7 - (ctx103.beta - 5) / 2) / 12
    assert abs(res.decimal() - 0.362854057411) < 1e-11
    assert res.situation == "C" and str(res.witness) == "[1,-10+1*B,1]"


@pytest.mark.parametrize("ab", [(1, 1), (2, 1), (3, 1)])
def test_gamma_full(ab):
    res = gamma(pisot_new(*ab), scan=False)
    assert res.value == 1 and res.situation == "Full"


@pytest.mark.parametrize("ab", [(3, -1), (4, -2)])
def test_gamma_zero_negative_norm(ab):
    res = gamma(pisot_new(*ab), scan=False)
    assert res.value == 0 and res.situation == "Zero"


def test_gamma_hypotheses():
    with pytest.raises(HypothesesFail):
        gamma(pisot_new(2, 2), scan=False)


def test_gamma_consistent_with_scan():
    for ab in [(3, 2), (5, 2)]:
        ctx = pisot_new(*ab)
        res = gamma(ctx, scan=False)
        first = gamma_scan(ctx, 60, 1)[1]
        g = res.decimal()
        assert first is None or first >= g - 1e-12


def test_gamma_scan(ctx103, ctx43):
    below, first = gamma_scan(ctx103, 120, Fraction(1, 2))
    assert below < first and Fraction(3629, 10**4) < first < Fraction(2, 5)
    assert gamma_scan(pisot_new(1, 1), 80, 1)[1] is None
    assert gamma_scan(ctx43, 120, Fraction(1, 20))[1] < Fraction(1, 20)
    with pytest.raises(ValueError):
        gamma_scan(ctx103, 1, 1)


def test_gamma_scan_threads(ctx103):
    assert gamma_scan(ctx103, 60, Fraction(1, 2), threads=3) == gamma_scan(ctx103, 60, Fraction(1, 2))
