"""Value sets of graph-directed IFS with ratio beta2, and the threshold gamma(beta).

A digit graph is a mapping ``node -> [(label, target), ...]``; its value set
at a node v is V(v) = { sum_i p_{i+1} * beta2**i : (p_i) labels an infinite
path from v }, so V(v) = union over edges of p + beta2 * V(target).
"""
from __future__ import annotations

import heapq
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import kernels
from .errors import BadInterval, DeadEndNode
from .graphs import adm_graph, boundary_graph, start_nodes
from .numeration import density_report
from .qfield import PisotQuad, QuadElem, approx

log = logging.getLogger("pisotile.gamma")

DEFAULT_TOL = Fraction(1, 2**40)
LO, HI = 0, 1


# -- hulls by policy iteration -----------------------------------------------

@dataclass(frozen=True)
class HullTable:
    """Exact [lo, hi] of every value set of a digit graph.

    ``policy[(v, side)]`` is the edge (label, target) realizing the bound.
    """

    lo: dict
    hi: dict
    policy: dict
    exact: bool
    ratio: QuadElem

    def interval(self, v):
        return self.lo[v], self.hi[v]


@dataclass(frozen=True)
class Hull:
    lo: QuadElem
    hi: QuadElem
    policy: dict
    exact: bool


def _evaluate(states, succ_of, const_of, r):
    """Exact values of a fixed policy: each state has one successor."""
    val = {}
    for s0 in states:
        if s0 in val:
            continue
        path, pos = [], {}
        s = s0
        while s not in val and s not in pos:
            pos[s] = len(path)
            path.append(s)
            s = succ_of[s]
        if s in pos:
            cyc = path[pos[s]:]
            total, rk = 0 * r, 1 + 0 * r
            for c in cyc:
                total = total + const_of[c] * rk
                rk = rk * r
            val[cyc[0]] = total / (1 - rk)
            for c in reversed(cyc[1:]):
                val[c] = const_of[c] + r * val[succ_of[c]]
            path = path[: pos[s]]
        for c in reversed(path):
            val[c] = const_of[c] + r * val[succ_of[c]]
    return val


def hull_table(dg: dict, ctx: PisotQuad) -> HullTable:
    r = ctx.beta2
    flip = r.sign() < 0  # a negative ratio swaps min and max of the tail
    edges = {}
    for v, out in dg.items():
        if not out:
            raise DeadEndNode(f"node {v} has no outgoing edge")
        edges[v] = sorted(out)
    states = [(v, side) for v in edges for side in (LO, HI)]

    def nxt(side, t):
        return (t, side ^ flip)

    # start from the smallest label on lo states and the largest on hi states
    choice = {(v, LO): edges[v][0] for v in edges}
    choice.update({(v, HI): max(edges[v], key=lambda e: (e[0], -e[1])) for v in edges})
    for _ in range(10 * len(states) + 10):
        succ = {s: nxt(s[1], choice[s][1]) for s in states}
        const = {s: choice[s][0] for s in states}
        val = _evaluate(states, succ, const, r)
        changed = False
        for s in states:
            v, side = s
            sgn = 1 if side == LO else -1  # minimize sgn * value
            cur = val[s]
            best, best_e = None, None
            for e in edges[v]:
                cand = e[0] + r * val[nxt(side, e[1])]
                if best is None or (cand - best).sign() * sgn < 0:
                    best, best_e = cand, e
            # switch only on strict improvement; ties keep the smallest edge
            if (best - cur).sign() * sgn < 0:
                choice[s] = best_e
                changed = True
        if not changed:
            break
    else:  # pragma: no cover - policy iteration on finite games terminates
        raise RuntimeError("policy iteration did not stabilize")
    exact = _bellman_ok(edges, val, r, flip)
    lo = {v: val[(v, LO)] for v in edges}
    hi = {v: val[(v, HI)] for v in edges}
    return HullTable(lo, hi, dict(choice), exact, r)


def _bellman_ok(edges, val, r, flip) -> bool:
    for v, out in edges.items():
        lo_c = [p + r * val[(t, LO ^ flip)] for p, t in out]
        hi_c = [p + r * val[(t, HI ^ flip)] for p, t in out]
        if min(lo_c) != val[(v, LO)] or max(hi_c) != val[(v, HI)]:
            return False
    return True


def attractor_hull(dg: dict, start, ctx: PisotQuad, table: HullTable | None = None) -> Hull:
    table = table or hull_table(dg, ctx)
    pol = {side: table.policy[(start, side)] for side in (LO, HI)}
    return Hull(table.lo[start], table.hi[start], pol, table.exact)


def reachable_digit_graph(dg: dict, start) -> dict:
    seen, todo = set(), [start]
    while todo:
        v = todo.pop()
        if v not in seen:
            seen.add(v)
            todo.extend(t for _, t in dg[v])
    return {v: dg[v] for v in sorted(seen)}


# -- interval structure -----------------------------------------------------------

def cookie_cantor(alpha: QuadElem, n: int):
    """Hull [0, (n-1)/(1-alpha)] of X(alpha, n) and whether X equals it."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return (0 * alpha, 0 * alpha), True
    return (0 * alpha, (n - 1) / (1 - alpha)), (alpha * n).cmp(1) >= 0


@dataclass(frozen=True)
class DigitPattern:
    """Label sets per depth: ``prefix`` then ``period`` repeated forever."""

    prefix: tuple[frozenset, ...]
    period: tuple[frozenset, ...]

    def at(self, depth: int) -> frozenset:
        if depth < len(self.prefix):
            return self.prefix[depth]
        return self.period[(depth - len(self.prefix)) % len(self.period)]


def digit_pattern(dg: dict, start) -> DigitPattern | None:
    """Per-depth digit sets if the path labels from ``start`` form a product
    of per-depth sets; None otherwise."""
    init = frozenset([start])
    delta, todo = {}, [init]
    while todo:
        S = todo.pop()
        if S in delta:
            continue
        row = {}
        for v in S:
            for lab, t in dg[v]:
                row.setdefault(lab, set()).add(t)
        delta[S] = {lab: frozenset(ts) for lab, ts in row.items()}
        todo.extend(delta[S].values())
    # Moore refinement (all states accept; missing labels go to a dead state)
    cls = {S: 0 for S in delta}
    while True:
        sig = {S: tuple(sorted((lab, cls[T]) for lab, T in delta[S].items())) for S in delta}
        ids = {}
        new = {S: ids.setdefault(sig[S], len(ids)) for S in sorted(delta, key=lambda X: sorted(X))}
        if len(ids) == len(set(cls.values())):
            cls = new
            break
        cls = new
    for S in delta:
        if len({cls[T] for T in delta[S].values()}) != 1:
            return None
    seq, seen_cls = [], {}
    S = init
    while cls[S] not in seen_cls:
        seen_cls[cls[S]] = len(seq)
        seq.append(frozenset(delta[S]))
        S = next(iter(delta[S].values()))
    j = seen_cls[cls[S]]
    return DigitPattern(tuple(seq[:j]), tuple(seq[j:]))


def _cookie_full(dg, v, ctx) -> bool:
    """Digit-pattern shortcut: every depth offers a run of n consecutive digits
    and |beta2| >= 1/n."""
    pat = digit_pattern(dg, v)
    if pat is None:
        return False
    runs = set()
    for D in pat.prefix + pat.period:
        lo, hi = min(D), max(D)
        if len(D) != hi - lo + 1:
            return False
        runs.add(len(D))
    if len(runs) != 1:
        return False
    return cookie_cantor(abs(ctx.beta2), runs.pop())[1]


def interval_nodes(dg: dict, table: HullTable, ctx: PisotQuad | None = None) -> frozenset:
    """Largest successor-closed node set on which every value set is its hull.

    A node qualifies when the child intervals p + beta2*[lo(t), hi(t)] cover
    [lo(v), hi(v)] without gaps; on a successor-closed set of such nodes the
    hulls solve the IFS equation, so they are the attractor.
    """
    r = table.ratio
    ok = set()
    for v, out in dg.items():
        pieces = []
        for p, t in out:
            x, y = p + r * table.lo[t], p + r * table.hi[t]
            pieces.append((x, y) if x <= y else (y, x))
        pieces = sorted(pieces, key=_Key0)
        reach = table.lo[v]
        good = pieces[0][0] == reach
        for x, y in pieces:
            if x > reach:
                good = False
                break
            if y > reach:
                reach = y
        if good and reach == table.hi[v]:
            ok.add(v)
    if ctx is not None:
        ok |= {v for v in dg if v not in ok and _cookie_full(dg, v, ctx)}
    while True:
        keep = {v for v in ok if all(t in ok for _, t in dg[v])}
        if keep == ok:
            return frozenset(ok)
        ok = keep


class _Key0:
    __slots__ = ("iv",)

    def __init__(self, iv):
        self.iv = iv

    def __lt__(self, other):
        c = self.iv[0].cmp(other.iv[0])
        return c < 0 if c else self.iv[1] < other.iv[1]


# -- constrained infimum ------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: QuadElem
    hi: QuadElem
    lo_closed: bool = True
    hi_closed: bool = True

    def contains(self, x: QuadElem) -> bool:
        c1, c2 = x.cmp(self.lo), x.cmp(self.hi)
        return (c1 > 0 or (c1 == 0 and self.lo_closed)) and (c2 < 0 or (c2 == 0 and self.hi_closed))

    def meets(self, lo: QuadElem, hi: QuadElem) -> bool:
        """Whether [lo, hi] intersects this interval."""
        c1, c2 = hi.cmp(self.lo), lo.cmp(self.hi)
        return (c1 > 0 or (c1 == 0 and self.lo_closed)) and (c2 < 0 or (c2 == 0 and self.hi_closed))


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction | None  # None: no point of the set was found inside the interval

    @property
    def possibly_empty(self) -> bool:
        return self.hi is None

    def __str__(self):
        hi = "?" if self.hi is None else f"{float(self.hi):.12g}"
        return f"[{float(self.lo):.12g}, {hi}]"


@dataclass(frozen=True)
class InfQuery:
    target_interval: Interval
    kind: str  # "empty" | "exact" | "enclosure"
    value: QuadElem | Enclosure | None = None
    attained: bool = False
    witness: tuple = ()  # labels of a path prefix leading to the optimum
    boxes: int = 0

    @property
    def empty(self) -> bool:
        return self.kind == "empty"

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    def lower(self) -> Fraction | QuadElem | None:
        if self.kind == "exact":
            return self.value
        if self.kind == "enclosure":
            return self.value.lo
        return None


class _QKey:
    __slots__ = ("x",)

    def __init__(self, x):
        self.x = x

    def __lt__(self, other):
        return self.x.cmp(other.x) < 0


def inf_in_interval(dg: dict, start, lo, hi, ctx: PisotQuad, tol=DEFAULT_TOL, *,
                    lo_closed=True, hi_closed=True, negate=True,
                    table: HullTable | None = None, proven: frozenset | None = None,
                    max_boxes: int = 200_000) -> InfQuery:
    """inf of (-V(start)) ∩ I (or V(start) ∩ I when ``negate`` is False).

    Branch and bound over path prefixes: a prefix stands for the set
    s + c*V(node) whose hull is known exactly.  Hull endpoints are attained,
    so a box whose lower end lies in I settles the query; a box over a node
    whose value set is an interval settles it at max(box lo, I lo).
    """
    lo = lo if isinstance(lo, QuadElem) else ctx.elem(lo)
    hi = hi if isinstance(hi, QuadElem) else ctx.elem(hi)
    if lo > hi:
        raise BadInterval(f"{lo.coords()} > {hi.coords()}")
    interval = Interval(lo, hi, lo_closed, hi_closed)
    if lo == hi and not (lo_closed and hi_closed):
        return InfQuery(interval, "empty")
    dg = reachable_digit_graph(dg, start)
    table = table or hull_table(dg, ctx)
    if proven is None:
        proven = interval_nodes(dg, table, ctx)
    r = ctx.beta2
    tol = Fraction(tol)

    def box(s, c, v):
        x, y = s + c * table.lo[v], s + c * table.hi[v]
        return (x, y) if c.sign() > 0 else (y, x)

    c0 = ctx.elem(-1 if negate else 1)
    heap, counter = [], itertools.count()
    seen = set()
    best_upper = None

    def push(s, c, v, path):
        nonlocal best_upper
        key = (s.u, s.v, c.u, c.v, v)
        if key in seen:
            return
        seen.add(key)
        blo, bhi = box(s, c, v)
        if not interval.meets(blo, bhi):
            return
        if interval.contains(bhi) and (best_upper is None or bhi < best_upper):
            best_upper = bhi
        prio = blo if blo > lo else lo
        heapq.heappush(heap, (_QKey(prio), next(counter), s, c, v, blo, bhi, path))

    push(ctx.zero, c0, start, ())
    boxes = 0
    while heap:
        key, _, s, c, v, blo, bhi, path = heapq.heappop(heap)
        boxes += 1
        if interval.contains(blo):
            return InfQuery(interval, "exact", blo, True, path, boxes)
        # here blo lies below I (boxes above I were never pushed)
        if v in proven:
            attained = lo_closed
            return InfQuery(interval, "exact", lo, attained, path, boxes)
        width = bhi - blo
        if Fraction(approx(width, 64)[1]) < tol or boxes >= max_boxes:
            lo_bound = approx(key.x, 64)[0]
            up = None if best_upper is None else approx(best_upper, 64)[1]
            return InfQuery(interval, "enclosure", Enclosure(lo_bound, up), False, path, boxes)
        for p, t in dg[v]:
            push(s + c * p, c * r, t, path + (p,))
    return InfQuery(interval, "empty", None, False, (), boxes)


# -- subtiles --------------------------------------------------------------------

def subtile_graph(ctx: PisotQuad) -> dict:
    return adm_graph(ctx).reversed_digit_graph()


def subtile_min(a: int, ctx: PisotQuad) -> tuple[QuadElem, bool]:
    """(min of the value set of subtile a, exact flag)."""
    table = hull_table(subtile_graph(ctx), ctx)
    return table.lo[a], table.exact


# -- gamma ------------------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    situation: str
    witness: object
    query: InfQuery


@dataclass(frozen=True)
class GammaResult:
    value: QuadElem | Enclosure
    situation: str  # "A" | "B" | "C" | "Full" | "Zero"
    witness: object = None
    exact: bool = True
    mode: str = "exact"
    cross_check: tuple | None = None
    candidates: tuple = field(default_factory=tuple)

    def decimal(self) -> float:
        if isinstance(self.value, Enclosure):
            return float(self.value.lo)
        return float(self.value)


def _candidate_key(c: Candidate):
    low = c.query.lower()
    return low if isinstance(low, QuadElem) else None


def gamma(ctx: PisotQuad, tol=DEFAULT_TOL, scan: bool = True, scan_qmax: int = 60,
          threads: int = 1) -> GammaResult:
    cross = gamma_scan(ctx, scan_qmax, Fraction(1), threads=threads) if scan else None
    if ctx.b < 0:
        # beta2 in (0,1): a purely periodic x equals the conjugate of its
        # periodic series, sum u_i beta2^-i / (1 - beta2^-k) <= 0
        return GammaResult(ctx.zero, "Zero", None, True, "exact", cross)
    dens = density_report(ctx)
    exact_mode = ctx.is_unit or dens.overall
    g = boundary_graph(ctx)
    starts = start_nodes(g, ctx)
    dg = g.digit_graph(0)
    cands = []
    for nd in starts:
        idx = g.index(nd)
        ha, hb = ctx.height(nd.a), ctx.height(nd.b)
        if nd.x:
            q = inf_in_interval(dg, idx, ctx.zero, ha, ctx, tol, lo_closed=False, hi_closed=False)
            cands.append(Candidate("C", nd, q))
        else:
            lo_h, hi_h = (ha, hb) if ha < hb else (hb, ha)
            q = inf_in_interval(dg, idx, lo_h, hi_h, ctx, tol, hi_closed=False)
            cands.append(Candidate("B", nd, q))
    sub = subtile_graph(ctx)
    for a in range(1, ctx.parry.n + 1):
        h = ctx.height(a)
        if h.cmp(1) >= 0:
            continue
        q = inf_in_interval(sub, a, h, h, ctx, tol)
        cands.append(Candidate("A", a, q))
    live = [c for c in cands if not c.query.empty]
    for c in cands:
        log.debug("candidate %s %s: %s %s", c.situation, c.witness, c.query.kind, c.query.value)
    mode = "exact" if exact_mode else "lower-bound"
    if not live:
        return GammaResult(ctx.one, "Full", None, exact_mode, mode, cross, tuple(cands))
    exact_live = [c for c in live if c.query.exact]
    best = None
    for c in exact_live:
        if best is None or c.query.value < best.query.value:
            best = c
    fuzzy = [c for c in live if not c.query.exact]
    if best is not None and best.query.value.cmp(1) >= 0:
        best = None
    if best is not None and all(best.query.value <= c.query.value.lo for c in fuzzy):
        return GammaResult(best.query.value, best.situation, best.witness, exact_mode, mode,
                           cross, tuple(cands))
    # an undecided candidate may lie below the exact ones
    lows = [(c.query.value.lo, c) for c in fuzzy]
    if best is not None:
        lows.append((approx(best.query.value, 64)[0], best))
    low, who = min(lows, key=lambda t: t[0])
    ups = [c.query.value.hi for c in fuzzy if c.query.value.hi is not None]
    if best is not None:
        ups.append(approx(best.query.value, 64)[1])
    up = min(ups) if ups else None
    if low >= 1:
        return GammaResult(ctx.one, "Full", None, False, "enclosure", cross, tuple(cands))
    return GammaResult(Enclosure(low, up), who.situation, who.witness, False,
                       "enclosure", cross, tuple(cands))


# -- scan oracle ------------------------------------------------------------------

def _scan_chunk(args):
    a, b, qs, upper, cap = args
    norm = abs(b)
    fails = None
    for q in qs:
        if gcd(q, norm) != 1:
            continue
        pmax = min(q - 1, int(upper * q))
        for p in range(1, pmax + 1):
            if gcd(p, q) != 1:
                continue
            x = Fraction(p, q)
            mu, _ = kernels.orbit_tail_period(a, b, q, p, 0, cap)
            if mu != 0:
                if fails is None or x < fails:
                    fails = x
    return fails


def gamma_scan(ctx: PisotQuad, qmax: int, upper, threads: int = 1, cap: int = 10**6):
    """(lower_bracket, first_failure) from testing every reduced p/q <= upper,
    q <= qmax, gcd(q, N(beta)) = 1.  ``lower_bracket`` is the largest tested
    rational below the first failure (``upper`` capped below 1 when none fails)."""
    if qmax < 2:
        raise ValueError("qmax must be >= 2")
    upper = Fraction(upper)
    qs = list(range(2, qmax + 1))
    if threads > 1:
        chunks = [qs[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(threads) as ex:
            results = list(ex.map(_scan_chunk, [(ctx.a, ctx.b, ch, upper, cap) for ch in chunks]))
    else:
        results = [_scan_chunk((ctx.a, ctx.b, qs, upper, cap))]
    found = [f for f in results if f is not None]
    first = min(found) if found else None
    bound = first if first is not None else upper
    below = Fraction(0)
    for q in qs:
        if gcd(q, ctx.norm_beta) != 1:
            continue
        # largest p/q strictly below the bound
        p = (bound.numerator * q - 1) // bound.denominator if first is not None else int(bound * q)
        p = min(p, q - 1)
        if p >= 1 and Fraction(p, q) > below:
            below = Fraction(p, q)
    return below, first
