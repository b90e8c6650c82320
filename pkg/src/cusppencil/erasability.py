"""Weighted pairs, contraction, and bounded computation of the erasure length.

A weighted pair ``(G, v)`` is erasable when some finite sequence of pair
blow-ups (always at the current distinguished vertex or at an edge incident
to it) produces ``(G_n, e_n)`` with ``G_n - e_n`` equivalent to the empty
graph.  ``ell`` is the least such ``n``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Hashable, Mapping, Sequence

from .weighted_graph import (
    DEFAULT_CANON_LIMIT,
    WeightedGraph,
    WeightedGraphError,
    _vkey,
    blow_down,
    blow_up_at_edge,
    blow_up_at_vertex,
    can_blow_down,
    canonical_form,
    equiv_empty,
    fresh_vertex,
    graph_from_json,
    graph_to_json,
)

DEFAULT_DEPTH = 6


class PairError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedPair:
    graph: WeightedGraph
    distinguished: Hashable

    def __post_init__(self):
        if len(self.graph) == 0:
            raise PairError("a weighted pair needs a nonempty graph")
        if self.distinguished not in self.graph:
            raise PairError(f"distinguished vertex {self.distinguished!r} is not in the graph")

    @property
    def v(self):
        return self.distinguished

    def rest(self) -> WeightedGraph:
        """The graph with the distinguished vertex removed."""
        return self.graph.remove(self.distinguished)

    def key(self, limit: int = DEFAULT_CANON_LIMIT) -> tuple:
        return canonical_form(self.graph, mark=self.distinguished, limit=limit)

    def __repr__(self) -> str:
        return f"WeightedPair({self.graph!r}, v={self.distinguished!r})"


# ---------------------------------------------------------------------------
# construction helpers
# ---------------------------------------------------------------------------

def chain_pair(weights: Sequence[int], star: int) -> WeightedPair:
    return WeightedPair(WeightedGraph.chain(weights), star)


_STAR_ITEM = re.compile(r"^\s*([+-]?\d+)\s*(\*?)\s*$")


def parse_chain_pair(text: str | Sequence[Any]) -> WeightedPair:
    """Parse ``"[-2,-1*,-1,-3]"`` (or ``[-2, "-1*", -1, -3]``) into a chain pair."""
    if isinstance(text, str):
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise PairError(f"chain pair must be bracketed: {text!r}")
        items = [s for s in body[1:-1].split(",")]
        if items == [""]:
            raise PairError("empty chain pair")
    else:
        items = [str(x) for x in text]
    weights, stars = [], []
    for i, item in enumerate(items):
        m = _STAR_ITEM.match(item)
        if not m:
            raise PairError(f"entry {i} ({item.strip()!r}) is not an integer")
        weights.append(int(m.group(1)))
        if m.group(2):
            stars.append(i)
    if len(stars) != 1:
        raise PairError(f"exactly one starred entry required, found {len(stars)}")
    return chain_pair(weights, stars[0])


def format_chain_pair(p: WeightedPair) -> str | None:
    """Inverse of :func:`parse_chain_pair` when ``p`` is a chain, else ``None``."""
    g = p.graph
    if not g.is_tree() or any(g.degree(v) > 2 for v in g.vertices):
        return None
    ends = [v for v in g.sorted_vertices() if g.degree(v) <= 1]
    order = [ends[0]]
    while len(order) < len(g):
        order.append(next(u for u in g.neighbours(order[-1]) if u not in order[-2:-1] and u != order[-1]))
    return "[" + ",".join(f"{g.weight(v)}{'*' if v == p.v else ''}" for v in order) + "]"


def triangle_pair(x: int) -> WeightedPair:
    """Triangle with distinguished ``-1*`` joined to a ``-1`` and an ``x`` vertex, which are also joined."""
    g = WeightedGraph({"v": -1, "a": -1, "b": x}, [("v", "a"), ("v", "b"), ("a", "b")])
    return WeightedPair(g, "v")


def star_pair(y: int) -> WeightedPair:
    """Distinguished ``-1*`` centre with three leaves of weights ``-2, -2, y``."""
    g = WeightedGraph({"v": -1, "a": -2, "b": -2, "c": y}, [("v", "a"), ("v", "b"), ("v", "c")])
    return WeightedPair(g, "v")


def corpus() -> dict[str, WeightedPair]:
    """Named regression pairs: erasable with ``ell = 0``, non-erasable, and prunable."""
    out = {
        "ell0:[-1,-1*]": parse_chain_pair("[-1,-1*]"),
        "ell0:[-2,-1,-1*]": parse_chain_pair("[-2,-1,-1*]"),
        "chain:[-3,-1*,-1,-2]": parse_chain_pair("[-3,-1*,-1,-2]"),
    }
    for x in (-4, -3, -1, 0, 1, 2):
        out[f"triangle:x={x}"] = triangle_pair(x)
    for y in (-3, -2, -1, 0, 1, 2):
        out[f"star:y={y}"] = star_pair(y)
    # pairs with a contractible vertex, paired with their contractions
    out["contractible:[-3,-1*,-2,-1,-3]"] = parse_chain_pair("[-3,-1*,-2,-1,-3]")
    for x in (-3, -1, 0):
        out[f"contractible:[-1*,-2,-1,{x},-4]"] = parse_chain_pair(f"[-1*,-2,-1,{x},-4]")
        out[f"contractible:[-1,-2,-1*,{x - 1},-4]"] = parse_chain_pair(f"[-1,-2,-1*,{x - 1},-4]")
    out["prune-a:[0,-2,-1*]"] = parse_chain_pair("[0,-2,-1*]")
    out["prune-b:[-3,-2,-1*,-2,-2]"] = parse_chain_pair("[-3,-2,-1*,-2,-2]")
    return out


# ---------------------------------------------------------------------------
# pair calculus
# ---------------------------------------------------------------------------

def _new_base(g: WeightedGraph) -> int | None:
    """First id for vertices created during a search, or ``None`` for non-integer ids."""
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in g.vertices):
        return None
    return max(g.vertices, default=-1) + 1


def pair_blow_up_ops(p: WeightedPair, new) -> list[dict]:
    v = p.v
    ops = [{"op": "blow_up_vertex", "at": v, "new": new}]
    for u in sorted(p.graph.neighbours(v), key=_vkey):
        ops.append({"op": "blow_up_edge", "at": [v, u], "new": new})
    return ops


def apply_pair_op(p: WeightedPair, op: Mapping[str, Any]) -> WeightedPair:
    if op["op"] == "blow_up_vertex":
        if op["at"] != p.v:
            raise PairError("pair blow-ups happen at the distinguished vertex")
        g, e = blow_up_at_vertex(p.graph, p.v, op.get("new"))
    elif op["op"] == "blow_up_edge":
        a, b = op["at"]
        if p.v not in (a, b):
            raise PairError("pair blow-ups happen at edges incident to the distinguished vertex")
        g, e = blow_up_at_edge(p.graph, (a, b), op.get("new"))
    else:
        raise PairError(f"not a pair blow-up: {op['op']!r}")
    return WeightedPair(g, e)


def pair_blow_ups(p: WeightedPair, new=None) -> list[WeightedPair]:
    """All ``1 + deg(v)`` blow-ups of ``p``; the new vertex becomes distinguished."""
    if new is None:
        new = fresh_vertex(p.graph)
    return [apply_pair_op(p, op) for op in pair_blow_up_ops(p, new)]


def contractible_vertices(p: WeightedPair) -> list:
    g, v = p.graph, p.v
    nb = g.neighbours(v)
    return [w for w in g.sorted_vertices() if w != v and w not in nb and can_blow_down(g, w)]


def contract(p: WeightedPair, w) -> WeightedPair:
    if w not in contractible_vertices(p):
        raise PairError(f"{w!r} is not a contractible vertex of the pair")
    return WeightedPair(blow_down(p.graph, w), p.v)


def normalize(p: WeightedPair) -> tuple[WeightedPair, list]:
    """Contract until no contractible vertex remains; returns the contracted ids too."""
    done = []
    while True:
        cand = contractible_vertices(p)
        if not cand:
            return p, done
        p = contract(p, cand[0])
        done.append(cand[0])


def prune(p: WeightedPair) -> str | None:
    """Sufficient non-erasability tests.

    ``"a"``: some vertex other than ``v`` and its neighbours has weight >= 0.
    ``"b"``: at least two vertices, ``v`` of negative weight, and every other
    weight below -1.
    """
    g, v = p.graph, p.v
    nb = g.neighbours(v)
    for w in g.sorted_vertices():
        if w != v and w not in nb and g.weight(w) >= 0:
            return "a"
    if len(g) >= 2 and g.weight(v) < 0 and all(g.weight(w) < -1 for w in g.vertices if w != v):
        return "b"
    return None


# ---------------------------------------------------------------------------
# bounded search
# ---------------------------------------------------------------------------

@dataclass
class ErasabilityOutcome:
    """``verdict`` is ``"erasable"``, ``"not_erasable"`` or ``"unknown"``."""

    verdict: str
    depth: int
    ell: int | None = None
    witness: list[dict] | None = None
    reason: str | None = None
    nodes: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def witnesses(self) -> int:
        return 0 if self.witness is None else 1

    def as_dict(self) -> dict:
        d: dict = {"verdict": self.verdict, "witnesses": self.witnesses, "depth": self.depth}
        if self.ell is not None:
            d["ell"] = self.ell
        if self.witness is not None:
            d["witness"] = [{"op": o["op"], "at": o["at"]} for o in self.witness]
        if self.reason is not None:
            d["reason"] = self.reason
        d["nodes"] = self.nodes
        return d


def _path_key(path: list[dict]) -> tuple:
    return tuple((o["op"], repr(o["at"])) for o in path)


def ell_bounded(p: WeightedPair, depth: int = DEFAULT_DEPTH, equiv_depth: int = 1,
                limit: int = DEFAULT_CANON_LIMIT) -> ErasabilityOutcome:
    """Breadth-first deepening over normalized pair blow-ups, up to ``depth`` blow-ups.

    Contraction preserves the erasure length, so every node is normalized
    and memoized by its canonical form.  The verdict is ``not_erasable`` only
    when every branch closes by :func:`prune` (or revisits a closed state)
    and every emptiness test was decisive.
    """
    base = _new_base(p.graph)
    start, _ = normalize(p)
    seen = {start.key(limit)}
    frontier: list[tuple[WeightedPair, list[dict]]] = [(start, [])]
    nodes = 0
    undecided = False
    truncated = False
    pruned: dict[str, int] = {}
    for level in range(depth + 1):
        hits = []
        nxt: list[tuple[WeightedPair, list[dict]]] = []
        for q, path in frontier:
            nodes += 1
            why = prune(q)
            if why is not None:
                pruned[why] = pruned.get(why, 0) + 1
                continue
            res = equiv_empty(q.rest(), depth=equiv_depth, max_vertices=limit)
            if res.equivalent:
                hits.append(path)
                continue
            if res.verdict == "unknown":
                undecided = True
            if level == depth:
                truncated = True
                continue
            if len(q.graph) >= limit:
                undecided = True
                continue
            new = base + level if base is not None else f"n{level}"
            for op in pair_blow_up_ops(q, new):
                child, _ = normalize(apply_pair_op(q, op))
                k = child.key(limit)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append((child, path + [op]))
        if hits:
            best = min(hits, key=_path_key)
            return ErasabilityOutcome("erasable", depth, ell=level, witness=best, nodes=nodes,
                                      stats={"pruned": pruned})
        if not nxt:
            if undecided or truncated:
                return ErasabilityOutcome("unknown", depth, nodes=nodes, stats={"pruned": pruned})
            reason = "prune:" + "+".join(sorted(pruned)) if pruned else "exhausted"
            return ErasabilityOutcome("not_erasable", depth, reason=reason, nodes=nodes,
                                      stats={"pruned": pruned})
        frontier = nxt
    return ErasabilityOutcome("unknown", depth, nodes=nodes, stats={"pruned": pruned})


def replay_witness(p: WeightedPair, witness: Sequence[Mapping]) -> WeightedPair:
    for op in witness:
        p = apply_pair_op(p, op)
    return p


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def pair_from_json(doc: Mapping) -> WeightedPair:
    if "chain_pair" in doc:
        return parse_chain_pair(doc["chain_pair"])
    if "distinguished" not in doc:
        raise PairError("pair document needs 'distinguished' (or 'chain_pair')")
    try:
        g = graph_from_json(doc)
    except WeightedGraphError as exc:
        raise PairError(str(exc)) from None
    return WeightedPair(g, doc["distinguished"])


def pair_to_json(p: WeightedPair) -> dict:
    d = graph_to_json(p.graph)
    d["distinguished"] = p.v
    return d
