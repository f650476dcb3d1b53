"""Complete tiles in R x Z_p: conjugate embedding, Hensel-lifted p-adic root and the Monna map."""
from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import kernels
from .errors import DenominatorNotInvertible, NonSplitPrime, NotDividingNorm
from .graphs import adm_graph
from .numeration import density_report
from .qfield import PisotQuad, QuadElem


@dataclass(frozen=True)
class PadicCtx:
    p: int
    k: int
    root: int

    @property
    def modulus(self) -> int:
        return self.p ** self.k


@dataclass(frozen=True)
class TilePoint:
    subtile: int
    real: float
    monna: Fraction
    residue: int
    word: tuple[int, ...]


def hensel_root(ctx: PisotQuad, p: int, k: int) -> PadicCtx:
    """Root r = 0 mod p of X^2 - aX - b, lifted to Z/p^k (the place dividing beta)."""
    if k < 1:
        raise ValueError("precision k must be >= 1")
    if ctx.b % p:
        raise NotDividingNorm(f"{p} does not divide N(beta) = {ctx.norm_beta}")
    info = {q: split for q, _, _, split in density_report(ctx).per_prime}
    if not info.get(p, False) or ctx.a % p == 0:
        raise NonSplitPrime(f"{p} does not split into distinct degree-1 places")
    mod = p**k
    r = 0
    # Newton iteration doubles the p-adic precision each round
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        m = p**prec
        f = r * r - ctx.a * r - ctx.b
        df = 2 * r - ctx.a
        r = (r - f * pow(df, -1, m)) % m
    return PadicCtx(p, k, r % mod)


def _inv_mod(den: int, pc: PadicCtx) -> int:
    if den % pc.p == 0:
        raise DenominatorNotInvertible(f"denominator {den} is divisible by {pc.p}")
    return pow(den, -1, pc.modulus)


def phi_f(x: QuadElem, pc: PadicCtx) -> int:
    """Image of u + v*beta in Z/p^k under beta -> root."""
    mod = pc.modulus
    u = x.u.numerator * _inv_mod(x.u.denominator, pc)
    v = x.v.numerator * _inv_mod(x.v.denominator, pc)
    return (u + v * pc.root) % mod


def monna(residue: int, pc: PadicCtx) -> Fraction:
    """sum a_i p^i  ->  sum a_i p^(-i-1), a value in [0, 1)."""
    if not 0 <= residue < pc.modulus:
        raise ValueError("residue out of range")
    num, x = 0, residue
    for _ in range(pc.k):
        num = num * pc.p + x % pc.p
        x //= pc.p
    return Fraction(num, pc.modulus)


def _real(ctx: PisotQuad, K, L) -> float:
    """Float of K + L*beta2 from exact integers (error below 2^-60)."""
    m = 2 * K + ctx.a * L
    s = isqrt(L * L * ctx.D << 120)
    num = (m << 60) - (s if L > 0 else -s)
    return float(Fraction(num, 1 << 61))


def _powers(ctx: PisotQuad, pc: PadicCtx, depth: int):
    powK, powL, powR = [1], [0], [1]
    for _ in range(1, max(depth, 1)):
        K, L = powK[-1], powL[-1]
        powK.append(ctx.b * L)
        powL.append(K + ctx.a * L)
        powR.append(powR[-1] * pc.root % pc.modulus)
    return powK, powL, powR


def _enumerate(args):
    a, b, p, k, root, depth, first_edges = args
    ctx = PisotQuad(a, b)
    pc = PadicCtx(p, k, root)
    adm = adm_graph(ctx)
    out_edges = adm.digit_graph()
    powK, powL, powR = _powers(ctx, pc, depth)
    pts = []
    # words are read from node 1, most significant digit first
    stack = [(node, [lab], lab * powK[depth - 1], lab * powL[depth - 1], lab * powR[depth - 1])
             for lab, node in reversed(first_edges)]
    while stack:
        node, word, K, L, R = stack.pop()
        j = len(word)
        if j == depth:
            res = R % pc.modulus
            pts.append(TilePoint(node, _real(ctx, K, L), monna(res, pc), res, tuple(word)))
            continue
        i = depth - 1 - j
        for lab, t in reversed(out_edges[node]):
            stack.append((t, word + [lab], K + lab * powK[i], L + lab * powL[i],
                          R + lab * powR[i]))
    return pts


def tile_points(ctx: PisotQuad, pc: PadicCtx, depth: int, x_shift=None, threads: int = 1):
    """Points of the complete tile (or of the x-tile when ``x_shift`` is given)
    from all admissible words of length ``depth``, in lexicographic word order.

    Shorter words appear with leading zeros.  For a shift x only subtiles a
    with x < T^(a-1)(1) contribute, each point moved by phi(x).
    """
    if x_shift is not None and x_shift != 0:
        sx = x_shift if isinstance(x_shift, QuadElem) else ctx.elem(Fraction(x_shift))
        ok = {a for a in range(1, ctx.parry.n + 1) if sx < ctx.height(a)}
        sR = phi_f(sx, pc)
        dx = float(sx.conj())
        out = []
        for pt in tile_points(ctx, pc, depth, None, threads):
            if pt.subtile in ok:
                res = (pt.residue + sR) % pc.modulus
                out.append(TilePoint(pt.subtile, pt.real + dx, monna(res, pc), res, pt.word))
        return out
    if depth == 0:
        return [TilePoint(1, 0.0, Fraction(0), 0, ())]
    first = adm_graph(ctx).out_edges(1)
    base = (ctx.a, ctx.b, pc.p, pc.k, pc.root, depth)
    if threads > 1 and len(first) > 1:
        with ProcessPoolExecutor(threads) as ex:
            chunks = list(ex.map(_enumerate, [base + ([e],) for e in first]))
        return [pt for ch in chunks for pt in ch]
    return _enumerate(base + (first,))


def path_count(ctx: PisotQuad, depth: int) -> int:
    """Number of admissibility-graph paths of the given length from node 1."""
    adm = adm_graph(ctx)
    counts = {v: 0 for v in range(1, adm.n + 1)}
    counts[1] = 1
    for _ in range(depth):
        nxt = {v: 0 for v in counts}
        for f, _, t in adm.edges:
            nxt[t] += counts[f]
        counts = nxt
    return sum(counts.values())


def write_csv(points, path) -> int:
    """Write points with header ``subtile,real,monna,residue,word`` to a path or
    an open text stream; return the row count."""
    if hasattr(path, "write"):
        return _write_rows(points, path)
    with open(path, "w", newline="") as fh:
        return _write_rows(points, fh)


def _write_rows(points, fh) -> int:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["subtile", "real", "monna", "residue", "word"])
    rows = 0
    for pt in points:
        m = pt.monna
        w.writerow([pt.subtile, f"{pt.real:.12g}", f"{m.numerator}/{m.denominator}",
                    pt.residue, ",".join(map(str, pt.word))])
        rows += 1
    return rows


@dataclass(frozen=True)
class StripeReport:
    depth: int
    half_width: float
    modulus: int
    counts: tuple[int, ...]
    total: int

    @property
    def missing(self) -> list[int]:
        return [r for r, c in enumerate(self.counts) if c == 0]

    @property
    def full(self) -> bool:
        return not self.missing


def stripe_diagnostic(ctx: PisotQuad, pc: PadicCtx, depth: int, half_width: float = 0.2,
                      backend=None) -> StripeReport:
    """Residues mod p^k hit by depth-N tile points with |real| < half_width."""
    adm = adm_graph(ctx)
    estart, elabel, etarget = [0], [], []
    for v in range(1, adm.n + 1):
        for lab, t in adm.out_edges(v):
            elabel.append(lab)
            etarget.append(t - 1)
        estart.append(len(elabel))
    powK, powL, powR = _powers(ctx, pc, depth)
    counts, total = kernels.stripe_cover(estart, elabel, etarget, depth, powK, powL, powR,
                                         pc.modulus, float(ctx.beta2), half_width,
                                         backend=backend)
    return StripeReport(depth, half_width, pc.modulus, tuple(counts), total)
