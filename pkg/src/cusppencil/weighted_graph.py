"""Weighted graphs and the classical blow-up / blow-down calculus.

A weighted graph is a finite simple graph whose vertices carry integer
weights.  Vertex identifiers are arbitrary hashable values; every operation
returns a new graph and leaves its argument untouched.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .exact import bareiss_det, is_negative_definite, signature

Vertex = Hashable

DEFAULT_CANON_LIMIT = 16


class WeightedGraphError(ValueError):
    """Invalid graph construction or operation precondition."""


class BlowDownError(WeightedGraphError):
    def __init__(self, vertex, clause: str):
        super().__init__(f"cannot blow down {vertex!r}: {clause}")
        self.vertex = vertex
        self.clause = clause


class CanonicalSizeError(WeightedGraphError):
    pass


def _vkey(v) -> tuple[str, str]:
    # total order on heterogeneous vertex ids, only used for deterministic output
    return (type(v).__name__, repr(v)) if not isinstance(v, int) else ("", f"{v:+020d}")


class WeightedGraph:
    """Immutable simple graph with integer vertex weights."""

    __slots__ = ("_w", "_adj", "_hash")

    def __init__(self, weights: Mapping[Vertex, int], edges: Iterable[Sequence[Vertex]] = ()):
        w = {v: int(x) for v, x in weights.items()}
        adj: dict[Vertex, set] = {v: set() for v in w}
        for e in edges:
            u, v = tuple(e)
            if u == v:
                raise WeightedGraphError(f"self-loop at {u!r}")
            if u not in w or v not in w:
                raise WeightedGraphError(f"edge {(u, v)!r} has an undeclared endpoint")
            if v in adj[u]:
                raise WeightedGraphError(f"duplicate edge {(u, v)!r}")
            adj[u].add(v)
            adj[v].add(u)
        self._w = w
        self._adj = {v: frozenset(s) for v, s in adj.items()}
        self._hash = None

    # -- construction -------------------------------------------------------
    @classmethod
    def empty(cls) -> "WeightedGraph":
        return cls({})

    @classmethod
    def chain(cls, weights: Sequence[int]) -> "WeightedGraph":
        """Linear chain with vertices ``0 .. n-1``."""
        return cls(dict(enumerate(weights)), [(i, i + 1) for i in range(len(weights) - 1)])

    # -- accessors ----------------------------------------------------------
    @property
    def vertices(self) -> frozenset:
        return frozenset(self._w)

    @property
    def edges(self) -> frozenset:
        return frozenset(frozenset((u, v)) for u in self._adj for v in self._adj[u])

    def weight(self, v: Vertex) -> int:
        return self._w[v]

    @property
    def weights(self) -> dict:
        return dict(self._w)

    def neighbours(self, v: Vertex) -> frozenset:
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v])

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        return u in self._adj and v in self._adj[u]

    def sorted_vertices(self) -> list:
        return sorted(self._w, key=_vkey)

    def edge_list(self) -> list[tuple]:
        out = []
        for e in self.edges:
            u, v = sorted(e, key=_vkey)
            out.append((u, v))
        return sorted(out, key=lambda p: (_vkey(p[0]), _vkey(p[1])))

    def __len__(self) -> int:
        return len(self._w)

    def __contains__(self, v) -> bool:
        return v in self._w

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self._w == other._w and self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._w.items()), self.edges))
        return self._hash

    def __repr__(self) -> str:
        ws = ", ".join(f"{v!r}: {self._w[v]}" for v in self.sorted_vertices())
        return f"WeightedGraph({{{ws}}}, {self.edge_list()!r})"

    # -- structural helpers -------------------------------------------------
    def _rebuild(self, weights: dict, edges: Iterable) -> "WeightedGraph":
        return WeightedGraph(weights, edges)

    def remove(self, *vs: Vertex) -> "WeightedGraph":
        drop = set(vs)
        for v in drop:
            if v not in self._w:
                raise WeightedGraphError(f"unknown vertex {v!r}")
        w = {v: x for v, x in self._w.items() if v not in drop}
        edges = [tuple(e) for e in self.edges if not (e & drop)]
        return WeightedGraph(w, edges)

    def relabel(self, mapping: Mapping) -> "WeightedGraph":
        w = {mapping[v]: x for v, x in self._w.items()}
        return WeightedGraph(w, [(mapping[u], mapping[v]) for u, v in self.edge_list()])

    def components(self) -> list[frozenset]:
        seen: set = set()
        out = []
        for s in self.sorted_vertices():
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                u = stack.pop()
                for x in self._adj[u]:
                    if x not in comp:
                        comp.add(x)
                        stack.append(x)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def is_forest(self) -> bool:
        return len(self.edges) == len(self) - len(self.components())

    def is_tree(self) -> bool:
        return len(self) > 0 and len(self.components()) == 1 and self.is_forest()


def fresh_vertex(g: WeightedGraph) -> Vertex:
    """A vertex id not used in ``g`` (next integer when ids are integers)."""
    vs = g.vertices
    if all(isinstance(v, int) and not isinstance(v, bool) for v in vs):
        return max(vs, default=-1) + 1
    for k in itertools.count(1):
        if f"e{k}" not in vs:
            return f"e{k}"


# ---------------------------------------------------------------------------
# blow-ups and blow-downs
# ---------------------------------------------------------------------------

def _check_new(g: WeightedGraph, new) -> Vertex:
    if new is None:
        return fresh_vertex(g)
    if new in g:
        raise WeightedGraphError(f"new vertex id {new!r} already in use")
    return new


def blow_up_free(g: WeightedGraph, new: Vertex | None = None) -> tuple[WeightedGraph, Vertex]:
    e = _check_new(g, new)
    w = g.weights
    w[e] = -1
    return WeightedGraph(w, g.edge_list()), e


def blow_up_at_vertex(g: WeightedGraph, v: Vertex, new: Vertex | None = None) -> tuple[WeightedGraph, Vertex]:
    if v not in g:
        raise WeightedGraphError(f"unknown vertex {v!r}")
    e = _check_new(g, new)
    w = g.weights
    w[v] -= 1
    w[e] = -1
    return WeightedGraph(w, g.edge_list() + [(v, e)]), e


def blow_up_at_edge(g: WeightedGraph, edge: Sequence[Vertex], new: Vertex | None = None) -> tuple[WeightedGraph, Vertex]:
    u, v = tuple(edge)
    if not g.has_edge(u, v):
        raise WeightedGraphError(f"missing edge {(u, v)!r}")
    e = _check_new(g, new)
    w = g.weights
    w[u] -= 1
    w[v] -= 1
    w[e] = -1
    edges = [p for p in g.edge_list() if set(p) != {u, v}] + [(u, e), (e, v)]
    return WeightedGraph(w, edges), e


def blow_down_obstruction(g: WeightedGraph, e: Vertex) -> str | None:
    """Name the first failing blow-down precondition, or ``None``."""
    if e not in g:
        return "unknown vertex"
    if g.weight(e) != -1:
        return f"weight is {g.weight(e)}, not -1"
    nb = g.neighbours(e)
    if len(nb) > 2:
        return f"{len(nb)} neighbours (at most 2 allowed)"
    if len(nb) == 2:
        a, b = nb
        if g.has_edge(a, b):
            return "the two neighbours are adjacent"
    return None


def can_blow_down(g: WeightedGraph, e: Vertex) -> bool:
    return blow_down_obstruction(g, e) is None


def blow_down(g: WeightedGraph, e: Vertex) -> WeightedGraph:
    why = blow_down_obstruction(g, e)
    if why is not None:
        raise BlowDownError(e, why)
    nb = list(g.neighbours(e))
    w = g.weights
    del w[e]
    for x in nb:
        w[x] += 1
    edges = [p for p in g.edge_list() if e not in p]
    if len(nb) == 2:
        edges.append(tuple(nb))
    return WeightedGraph(w, edges)


def contractible_vertices(g: WeightedGraph) -> list:
    return [v for v in g.sorted_vertices() if can_blow_down(g, v)]


# ---------------------------------------------------------------------------
# operation records (witnesses)
# ---------------------------------------------------------------------------

def apply_op(g: WeightedGraph, op: Mapping[str, Any]) -> WeightedGraph:
    kind = op["op"]
    if kind == "blow_down":
        return blow_down(g, op["at"])
    if kind == "blow_up_free":
        return blow_up_free(g, op.get("new"))[0]
    if kind == "blow_up_vertex":
        return blow_up_at_vertex(g, op["at"], op.get("new"))[0]
    if kind == "blow_up_edge":
        return blow_up_at_edge(g, op["at"], op.get("new"))[0]
    raise WeightedGraphError(f"unknown operation {kind!r}")


def replay(g: WeightedGraph, ops: Iterable[Mapping[str, Any]]) -> WeightedGraph:
    for op in ops:
        g = apply_op(g, op)
    return g


# ---------------------------------------------------------------------------
# lattice invariants
# ---------------------------------------------------------------------------

def intersection_matrix(g: WeightedGraph, order: Sequence[Vertex] | None = None) -> tuple[list, list[list[int]]]:
    """Return ``(vertex_order, matrix)``; diagonal = weights, 1 on edges."""
    order = list(order) if order is not None else g.sorted_vertices()
    idx = {v: i for i, v in enumerate(order)}
    n = len(order)
    m = [[0] * n for _ in range(n)]
    for v in order:
        m[idx[v]][idx[v]] = g.weight(v)
        for u in g.neighbours(v):
            m[idx[v]][idx[u]] = 1
    return order, m


@dataclass(frozen=True)
class LatticeInvariants:
    n: int
    det: int
    neg_definite: bool
    signature: tuple[int, int, int]

    @property
    def I(self) -> int:  # noqa: E743 - the conserved quantity (-1)^n det
        return (-1) ** self.n * self.det

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "det": self.det,
            "I": self.I,
            "neg_definite": self.neg_definite,
            "signature": list(self.signature),
        }


def lattice_invariants(g: WeightedGraph) -> LatticeInvariants:
    _, m = intersection_matrix(g)
    return LatticeInvariants(len(g), bareiss_det(m), is_negative_definite(m), signature(m))


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _refine(vs: list, adj, colors: dict) -> dict:
    while True:
        sig = {v: (colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in vs}
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in vs}
        if len(ranks) == len(set(colors[v] for v in vs)):
            return new
        colors = new


def _general_key(vs: list, adj, labels: dict) -> tuple:
    ranks = {s: i for i, s in enumerate(sorted(set(labels.values())))}
    colors = _refine(vs, adj, {v: ranks[labels[v]] for v in vs})
    best = None
    stack = [colors]
    while stack:
        col = stack.pop()
        cells: dict[int, list] = {}
        for v in vs:
            cells.setdefault(col[v], []).append(v)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            order = sorted(vs, key=col.__getitem__)
            pos = {v: i for i, v in enumerate(order)}
            key = (
                tuple(labels[v] for v in order),
                tuple(sorted(tuple(sorted((pos[u], pos[v]))) for u in vs for v in adj[u] if pos[u] < pos[v])),
            )
            if best is None or key < best:
                best = key
            continue
        for v in cells[target]:
            c2 = {u: 2 * col[u] for u in vs}
            c2[v] -= 1
            stack.append(_refine(vs, adj, c2))
    return best


def _tree_key(vs: list, adj, labels: dict) -> tuple:
    if len(vs) == 1:
        return (labels[vs[0]], ())
    deg = {v: len(adj[v]) for v in vs}
    layer = [v for v in vs if deg[v] <= 1]
    remaining = len(vs)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for u in adj[v]:
                deg[u] -= 1
                if deg[u] == 1:
                    nxt.append(u)
        layer = nxt
    centers = layer

    def enc(v, parent):
        return (labels[v], tuple(sorted(enc(c, v) for c in adj[v] if c != parent)))

    return min(enc(c, None) for c in centers)


def canonical_form(g: WeightedGraph, mark: Vertex | None = None, limit: int = DEFAULT_CANON_LIMIT) -> tuple:
    """Isomorphism-invariant key of ``g`` (optionally with one marked vertex).

    Trees use a centre-rooted encoding; other components use colour refinement
    with exhaustive individualization.  Graphs above ``limit`` vertices are
    rejected.
    """
    if len(g) > limit:
        raise CanonicalSizeError(f"graph has {len(g)} vertices; canonical labeling limit is {limit}")
    adj = {v: g.neighbours(v) for v in g.vertices}
    labels = {v: (g.weight(v), v == mark) for v in g.vertices}
    keys = []
    for comp in g.components():
        vs = list(comp)
        n_edges = sum(len(adj[v]) for v in vs) // 2
        if n_edges == len(vs) - 1:
            keys.append(("T", _tree_key(vs, adj, labels)))
        else:
            keys.append(("G", _general_key(vs, adj, labels)))
    return tuple(sorted(keys))


# ---------------------------------------------------------------------------
# equivalence to the empty graph
# ---------------------------------------------------------------------------

@dataclass
class EmptyEquivalenceOutcome:
    """``verdict`` is ``"equivalent"``, ``"not_equivalent"`` or ``"unknown"``."""

    verdict: str
    witness: list[dict] | None = None
    certificate: dict | None = None
    depth: int = 0

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent"

    def as_dict(self) -> dict:
        d: dict = {"verdict": self.verdict, "depth": self.depth}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.certificate is not None:
            d["certificate"] = self.certificate
        return d


def greedy_contract(g: WeightedGraph, order: str = "sorted") -> tuple[WeightedGraph, list[dict]]:
    """Blow down contractible vertices until none is left."""
    ops: list[dict] = []
    while True:
        cand = contractible_vertices(g)
        if not cand:
            return g, ops
        v = cand[-1] if order == "reverse" else cand[0]
        g = blow_down(g, v)
        ops.append({"op": "blow_down", "at": v})


def _gate(g: WeightedGraph) -> dict | None:
    inv = lattice_invariants(g)
    if inv.I != 1:
        return {"invariant": "I=(-1)^n det", "value": inv.I, "required": 1, "det": inv.det, "n": inv.n}
    if not inv.neg_definite:
        return {"invariant": "negative_definite", "value": False, "required": True,
                "signature": list(inv.signature)}
    return None


def _blow_up_moves(h: WeightedGraph):
    e = fresh_vertex(h)
    yield {"op": "blow_up_free", "new": e}
    for v in h.sorted_vertices():
        yield {"op": "blow_up_vertex", "at": v, "new": e}
    for u, v in h.edge_list():
        yield {"op": "blow_up_edge", "at": [u, v], "new": e}


def equiv_empty(g: WeightedGraph, depth: int = 2, max_vertices: int = DEFAULT_CANON_LIMIT,
                max_states: int = 20000) -> EmptyEquivalenceOutcome:
    """Three-phase decision of ``g ~ empty``.

    1. greedy blow-downs; empty result gives a witness;
    2. lattice gate: ``(-1)^n det == 1`` and negative definiteness are
       necessary, their failure is a certificate;
    3. bounded search over blow-up/blow-down sequences with at most ``depth``
       blow-ups; exhaustion yields ``unknown``.
    """
    h, ops = greedy_contract(g)
    if len(h) == 0:
        return EmptyEquivalenceOutcome("equivalent", witness=ops, depth=0)
    cert = _gate(g)
    if cert is not None:
        return EmptyEquivalenceOutcome("not_equivalent", certificate=cert, depth=0)
    if depth <= 0 or len(g) > max_vertices:
        return EmptyEquivalenceOutcome("unknown", depth=depth)

    # 0-1 shortest path: blow-downs are free, blow-ups cost one
    counter = itertools.count()
    start = canonical_form(g, limit=max_vertices)
    best: dict = {start: 0}
    heap = [(0, next(counter), start, g, [])]
    done: set = set()
    while heap:
        cost, _, key, cur, path = heapq.heappop(heap)
        if key in done:
            continue
        done.add(key)
        if len(done) > max_states:
            break
        red, gops = greedy_contract(cur)
        if len(red) == 0:
            return EmptyEquivalenceOutcome("equivalent", witness=path + gops, depth=depth)
        moves = [({"op": "blow_down", "at": v}, 0) for v in contractible_vertices(cur)]
        if cost < depth and len(cur) < max_vertices:
            moves += [(m, 1) for m in _blow_up_moves(cur)]
        for op, c in moves:
            nxt = apply_op(cur, op)
            k = canonical_form(nxt, limit=max_vertices)
            nc = cost + c
            if k in done or best.get(k, nc + 1) <= nc:
                continue
            best[k] = nc
            heapq.heappush(heap, (nc, next(counter), k, nxt, path + [op]))
    return EmptyEquivalenceOutcome("unknown", depth=depth)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def graph_from_json(doc: Mapping) -> WeightedGraph:
    """Parse ``{"vertices": [...], "edges": [...]}`` or ``{"chain": [...]}``."""
    if "chain" in doc:
        chain = doc["chain"]
        if not isinstance(chain, list) or not all(isinstance(x, int) for x in chain):
            raise WeightedGraphError("'chain' must be a list of integers")
        return WeightedGraph.chain(chain)
    try:
        verts = doc["vertices"]
        weights = {}
        for i, item in enumerate(verts):
            vid, wt = item["id"], item["weight"]
            if not isinstance(wt, int) or isinstance(wt, bool):
                raise WeightedGraphError(f"vertices[{i}].weight must be an integer")
            if vid in weights:
                raise WeightedGraphError(f"vertices[{i}]: duplicate id {vid!r}")
            weights[vid] = wt
        edges = [tuple(e) for e in doc.get("edges", [])]
    except (KeyError, TypeError) as exc:
        raise WeightedGraphError(f"malformed graph document: {exc}") from None
    for i, e in enumerate(edges):
        if len(e) != 2:
            raise WeightedGraphError(f"edges[{i}] must have exactly two endpoints")
    return WeightedGraph(weights, edges)


def graph_to_json(g: WeightedGraph) -> dict:
    return {
        "vertices": [{"id": v, "weight": g.weight(v)} for v in g.sorted_vertices()],
        "edges": [list(e) for e in g.edge_list()],
    }
