"""Admissibility graph and boundary graph of a quadratic Pisot number."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .errors import HypothesesFail
from .numeration import boundary_hypotheses
from .qfield import PisotQuad, QuadElem


@dataclass(frozen=True)
class AdmGraph:
    n: int
    m: int
    edges: tuple[tuple[int, int, int], ...]

    def out_edges(self, node: int) -> list[tuple[int, int]]:
        return [(lab, to) for frm, lab, to in self.edges if frm == node]

    def in_edges(self, node: int) -> list[tuple[int, int]]:
        """(source, label) pairs of edges ending at ``node``."""
        return [(frm, lab) for frm, lab, to in self.edges if to == node]

    def digit_graph(self) -> dict[int, list[tuple[int, int]]]:
        return {v: self.out_edges(v) for v in range(1, self.n + 1)}

    def reversed_digit_graph(self) -> dict[int, list[tuple[int, int]]]:
        """Edges b -> a labelled e for every edge a -e-> b (the subtile IFS)."""
        out = {v: [] for v in range(1, self.n + 1)}
        for frm, lab, to in self.edges:
            out[to].append((lab, frm))
        for v in out:
            out[v].sort()
        return out


def adm_graph(ctx: PisotQuad) -> AdmGraph:
    parry = ctx.parry
    n, m, t = parry.n, parry.m, parry.t
    edges = set()
    for a in range(1, n + 1):
        for lab in range(t[a - 1]):
            edges.add((a, lab, 1))
        edges.add((a, t[a - 1], a + 1 if a < n else m + 1))
    return AdmGraph(n, m, tuple(sorted(edges)))


@dataclass(frozen=True)
class BoundaryNode:
    a: int
    x: QuadElem
    b: int

    @property
    def K(self) -> int:
        return int(self.x.u)

    @property
    def L(self) -> int:
        return int(self.x.v)

    def key(self) -> tuple[int, int, int, int]:
        return (self.a, self.K, self.L, self.b)

    def swap(self) -> "BoundaryNode":
        return BoundaryNode(self.b, -self.x, self.a)

    def __str__(self):
        return f"[{self.a},{self.x.coords()},{self.b}]"


@dataclass(frozen=True)
class BoundaryGraph:
    """Nodes sorted by key; edges are (from index, p, q, to index), sorted."""

    nodes: tuple[BoundaryNode, ...]
    edges: tuple[tuple[int, int, int, int], ...]

    def index(self, node: BoundaryNode) -> int:
        return self._lookup()[node.key()]

    def _lookup(self):
        cache = self.__dict__.get("_idx")
        if cache is None:
            cache = {nd.key(): i for i, nd in enumerate(self.nodes)}
            object.__setattr__(self, "_idx", cache)
        return cache

    def find(self, a: int, x: QuadElem, b: int) -> int | None:
        return self._lookup().get((a, int(x.u), int(x.v), b))

    def __contains__(self, node: BoundaryNode) -> bool:
        return node.key() in self._lookup()

    def digit_graph(self, side: int = 0) -> dict[int, list[tuple[int, int]]]:
        """Node index -> [(label, target)] using the p (side 0) or q (side 1) labels."""
        out = {i: [] for i in range(len(self.nodes))}
        for frm, p, q, to in self.edges:
            out[frm].append(((p, q)[side], to))
        for v in out:
            out[v] = sorted(set(out[v]))
        return out

    def reachable(self, starts) -> "BoundaryGraph":
        """Subgraph induced on nodes reachable from ``starts`` (nodes or indices)."""
        succ = {i: [] for i in range(len(self.nodes))}
        for frm, _, _, to in self.edges:
            succ[frm].append(to)
        seen = set()
        todo = deque(s if isinstance(s, int) else self.index(s) for s in starts)
        while todo:
            v = todo.popleft()
            if v in seen:
                continue
            seen.add(v)
            todo.extend(succ[v])
        return _restrict(self, seen)


def _build(nodes, raw_edges=()) -> BoundaryGraph:
    nodes = sorted(set(nodes), key=BoundaryNode.key)
    pos = {nd.key(): i for i, nd in enumerate(nodes)}
    edges = sorted({(pos[f.key()], p, q, pos[t.key()]) for f, p, q, t in raw_edges})
    return BoundaryGraph(tuple(nodes), tuple(edges))


def _restrict(g: BoundaryGraph, keep) -> BoundaryGraph:
    raw = [(g.nodes[f], p, q, g.nodes[t]) for f, p, q, t in g.edges if f in keep and t in keep]
    return _build((g.nodes[i] for i in keep), raw)


def check_hypotheses(ctx: PisotQuad) -> None:
    ok, reason = boundary_hypotheses(ctx)
    if not ok:
        raise HypothesesFail(reason)


def candidate_box(ctx: PisotQuad) -> tuple[int, int, QuadElem]:
    """(Kmax, Lmax, R): integer bounds |K| <= Kmax, |L| <= Lmax for x = K + L*beta,
    and the conjugate bound R = floor(beta)/(1 - |beta2|).

    From |x| <= 1 and |conj x| <= R: L = (x - conj x)/sqrt(D) and
    K = (beta*conj x - beta2*x)/sqrt(D); one extra lattice unit of margin.
    """
    beta, beta2 = ctx.beta, ctx.beta2
    R = ctx.one * ctx.digit_alphabet_max / (1 - abs(beta2))
    sqrt_d = beta - beta2
    lmax = ((1 + R) / sqrt_d).floor() + 1
    kmax = ((beta * R + abs(beta2)) / sqrt_d).floor() + 1
    return kmax, lmax, R


def candidate_nodes(ctx: PisotQuad) -> list[BoundaryNode]:
    check_hypotheses(ctx)
    kmax, lmax, R = candidate_box(ctx)
    n = ctx.parry.n
    heights = [ctx.height(a) for a in range(1, n + 1)]
    out = []
    for K in range(-kmax, kmax + 1):
        for L in range(-lmax, lmax + 1):
            x = ctx.elem(K, L)
            if abs(x).cmp(1) >= 0 or abs(x.conj()).cmp(R) > 0:
                continue
            for a in range(1, n + 1):
                if (x + heights[a - 1]).sign() <= 0:
                    continue
                for b in range(1, n + 1):
                    if (heights[b - 1] - x).sign() <= 0:
                        continue
                    if not x and a == b:
                        continue
                    out.append(BoundaryNode(a, x, b))
    out.sort(key=BoundaryNode.key)
    return out


def _div_beta(ctx: PisotQuad, K: int, L: int):
    """(K + L beta)/beta in Z[beta] coordinates, or None when it leaves Z[beta]."""
    # 1/beta = (beta - a)/b
    if K % ctx.b:
        return None
    k = K // ctx.b
    return L - k * ctx.a, k


def boundary_graph(ctx: PisotQuad, prune: bool = True) -> BoundaryGraph:
    cands = candidate_nodes(ctx)
    adm = adm_graph(ctx)
    incoming = {v: adm.in_edges(v) for v in range(1, adm.n + 1)}
    keys = {nd.key(): nd for nd in cands}
    raw = []
    for nd in cands:
        K, L = nd.K, nd.L
        for a1, p in incoming[nd.a]:
            for b1, q in incoming[nd.b]:
                c = _div_beta(ctx, K + q - p, L)
                if c is None:
                    continue
                tgt = keys.get((a1, c[0], c[1], b1))
                if tgt is not None:
                    raw.append((nd, p, q, tgt))
    g = _build(cands, raw)
    return prune_graph(g) if prune else g


def prune_graph(g: BoundaryGraph) -> BoundaryGraph:
    """Drop out-degree-0 nodes until none remain."""
    alive = set(range(len(g.nodes)))
    while True:
        has_out = {f for f, _, _, t in g.edges if f in alive and t in alive}
        if has_out == alive:
            break
        alive = has_out
    return _restrict(g, alive)


def start_nodes(g: BoundaryGraph, ctx: PisotQuad) -> list[BoundaryNode]:
    out = []
    for nd in g.nodes:
        if nd.x.sign() < 0 or nd.x.cmp(ctx.height(nd.b)) >= 0:
            continue
        if not nd.x and nd.a >= nd.b:
            continue
        out.append(nd)
    return out


# -- serialization -------------------------------------------------------------

def to_json(g) -> str:
    if isinstance(g, AdmGraph):
        doc = {"n": g.n, "edges": [{"from": f, "label": lab, "to": t} for f, lab, t in g.edges]}
        return json.dumps(doc, indent=1)
    doc = {
        "nodes": [{"a": nd.a, "x": {"K": nd.K, "L": nd.L}, "b": nd.b} for nd in g.nodes],
        "edges": [{"from": f, "p": p, "q": q, "to": t} for f, p, q, t in g.edges],
    }
    return json.dumps(doc, indent=1)


def from_json(text: str, ctx: PisotQuad) -> BoundaryGraph:
    doc = json.loads(text)
    nodes = [BoundaryNode(n["a"], ctx.elem(n["x"]["K"], n["x"]["L"]), n["b"]) for n in doc["nodes"]]
    raw = [(nodes[e["from"]], e["p"], e["q"], nodes[e["to"]]) for e in doc["edges"]]
    return _build(nodes, raw)


def to_dot(g, name: str | None = None) -> str:
    lines = []
    if isinstance(g, AdmGraph):
        lines.append(f"digraph {name or 'admissibility'} {{")
        for v in range(1, g.n + 1):
            lines.append(f'  n{v} [label="{v}"];')
        for f, lab, t in g.edges:
            lines.append(f'  n{f} -> n{t} [label="{lab}"];')
    else:
        lines.append(f"digraph {name or 'boundary'} {{")
        for i, nd in enumerate(g.nodes):
            lines.append(f'  n{i} [label="{nd}"];')
        for f, p, q, t in g.edges:
            lines.append(f'  n{f} -> n{t} [label="({p},{q})"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
