"""Resolution of the base point of the pencil spanned by ``d L`` and a unicuspidal curve.

The base points are the infinitely near points ``P_1, ..., P_m`` on the
successive strict transforms of the curve, with ``m = n + nu_tilde``.  The
multiplicities past the singular ones are all 1, and proximities follow the
greedy capacity rule of :func:`cusppencil.cusp_numerics.proximity_matrix`.
The degree of a horizontal exceptional curve ``E_i`` is read off as
``C_m . E_i``, since the generic member of the base-point-free pencil on
``S_m`` is numerically equivalent to ``C_m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cusp_numerics import (
    CuspProfile,
    ProfileError,
    deficits,
    genus_zero_check,
    nu_tilde,
    proximity_matrix,
)
from .weighted_graph import (
    BlowDownError,
    WeightedGraph,
    blow_down,
    blow_up_at_edge,
    blow_up_at_vertex,
    blow_up_free,
)


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class ResolutionPlan:
    profile: CuspProfile
    m: int
    full_seq: tuple[int, ...]
    prox: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.profile.n

    @property
    def N(self) -> int:
        return self.profile.N

    @property
    def d(self) -> int:
        return self.profile.degree

    @property
    def nu_tilde(self) -> int:
        return self.m - self.n

    def proximate_to(self, i: int) -> list[int]:
        """1-based indices ``j`` with ``P_j -> P_i``."""
        return [j + 1 for j in range(self.m) if self.prox[j][i - 1]]

    def proximate_of(self, j: int) -> list[int]:
        """1-based indices ``i`` with ``P_j -> P_i``."""
        return [i + 1 for i in range(self.m) if self.prox[j - 1][i]]


def plan(profile: CuspProfile) -> ResolutionPlan:
    if not genus_zero_check(profile):
        raise PlanError(f"profile {profile.as_dict()} fails the genus-zero check")
    nt = nu_tilde(profile)
    if nt < 0:
        raise PlanError(f"profile has negative type (nu_tilde = {nt})")
    m = profile.n + nt
    full = profile.multiplicities + (1,) * nt
    prox = proximity_matrix(full)
    return ResolutionPlan(profile, m, full, tuple(tuple(r) for r in prox))


def identity_residuals(p: ResolutionPlan) -> tuple[int, int]:
    """``(d^2 - sum r^2, 3d - 2 - sum r)`` over the full sequence; both vanish."""
    return p.d ** 2 - sum(r * r for r in p.full_seq), 3 * p.d - 2 - sum(p.full_seq)


# ---------------------------------------------------------------------------
# dual graph
# ---------------------------------------------------------------------------

C_VERTEX = "C"


@dataclass(frozen=True)
class DualGraph:
    """Exceptional curves ``1..m`` as a weighted graph plus the contacts of ``C_m``."""

    exceptional: WeightedGraph
    c_intersections: tuple[int, ...]

    def with_curve(self) -> WeightedGraph:
        """Graph including ``C`` (weight 0) joined to every ``E_i`` it meets.

        Contacts of multiplicity >= 2 are recorded only in ``c_intersections``.
        """
        w = dict(self.exceptional.weights)
        w[C_VERTEX] = 0
        edges = list(self.exceptional.edges)
        edges += [(C_VERTEX, i + 1) for i, c in enumerate(self.c_intersections) if c > 0]
        return WeightedGraph(w, edges)


def dual_graph(p: ResolutionPlan) -> DualGraph:
    m = p.m
    weights = {i: -1 - len(p.proximate_to(i)) for i in range(1, m + 1)}
    edges = []
    for j in range(2, m + 1):
        for i in p.proximate_of(j):
            later = any(p.prox[k - 1][i - 1] and p.prox[k - 1][j - 1] for k in range(j + 1, m + 1))
            if not later:
                edges.append((i, j))
    return DualGraph(WeightedGraph(weights, edges), tuple(deficits(p.full_seq, [list(r) for r in p.prox])))


def replay_dual_graph(p: ResolutionPlan) -> WeightedGraph:
    """Build the exceptional graph by performing the blow-ups one at a time."""
    g = WeightedGraph.empty()
    for j in range(1, p.m + 1):
        targets = p.proximate_of(j)
        if not targets:
            g, _ = blow_up_free(g, new=j)
        elif len(targets) == 1:
            g, _ = blow_up_at_vertex(g, targets[0], new=j)
        else:
            g, _ = blow_up_at_edge(g, tuple(targets), new=j)
    return g


# ---------------------------------------------------------------------------
# dicriticals
# ---------------------------------------------------------------------------

@dataclass
class DicriticalReport:
    indices: list[int]
    degrees: dict[int, int]
    nu_tilde: int
    m: int
    diagnostics: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.indices)

    @property
    def has_degree_one(self) -> bool:
        return any(v == 1 for v in self.degrees.values())

    @property
    def section_index(self) -> int | None:
        return self.m if self.degrees.get(self.m) == 1 else None

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def as_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "degrees": [self.degrees[i] for i in self.indices],
            "count": self.count,
            "degree_one": self.has_degree_one,
            "section_index": self.section_index,
            "diagnostics": list(self.diagnostics),
        }


def dicriticals(p: ResolutionPlan, graph: DualGraph | None = None) -> DicriticalReport:
    """Horizontal curves are those meeting ``C_m``; inconsistencies become diagnostics."""
    graph = graph or dual_graph(p)
    cs = graph.c_intersections
    h = [i + 1 for i, c in enumerate(cs) if c > 0]
    rep = DicriticalReport(h, {i: cs[i - 1] for i in h}, p.nu_tilde, p.m)
    diag = rep.diagnostics
    if any(c < 0 for c in cs):
        diag.append("THEOREM-VIOLATION: negative contact with an exceptional curve")
    if rep.count not in (1, 2):
        diag.append(f"THEOREM-VIOLATION: {rep.count} dicriticals, expected 1 or 2")
    if p.m not in h:
        diag.append("THEOREM-VIOLATION: E_m is not horizontal")
    if not rep.has_degree_one:
        diag.append("THEOREM-VIOLATION: no dicritical of degree 1")
    if (rep.section_index is not None) != (p.nu_tilde > 0):
        diag.append("THEOREM-VIOLATION: E_m is a section iff nu_tilde > 0 fails")
    return rep


# ---------------------------------------------------------------------------
# consistency checks
# ---------------------------------------------------------------------------

def verify_exceptional_contracts(p: ResolutionPlan, graph: DualGraph | None = None) -> list[dict]:
    """Blow down ``E_m, E_{m-1}, ..., E_1`` in turn; returns the witness ops."""
    g = (graph or dual_graph(p)).exceptional
    ops = []
    for i in range(p.m, 0, -1):
        try:
            g = blow_down(g, i)
        except BlowDownError as exc:
            raise PlanError(f"exceptional graph does not contract at E_{i}: {exc}") from None
        ops.append({"op": "blow_down", "at": i})
    if len(g):
        raise PlanError("exceptional graph did not contract to the empty graph")
    return ops


def tree_check(p: ResolutionPlan, graph: DualGraph | None = None) -> bool:
    """The graph of ``E_1..E_m`` and ``C_m`` is a tree with simple contacts (positive type only)."""
    if p.nu_tilde <= 0:
        raise PlanError("tree_check applies to profiles with nu_tilde > 0")
    graph = graph or dual_graph(p)
    if any(c > 1 for c in graph.c_intersections):
        return False
    return graph.with_curve().is_tree()


def fiber_forest_check(p: ResolutionPlan, graph: DualGraph | None = None) -> bool:
    """Vertical exceptional curves span a forest disjoint from ``C_m``.

    Vertical curves lie in fibres of the ruling on ``S_m`` and every fibre
    support has a tree as dual graph, so this holds for any profile.
    """
    graph = graph or dual_graph(p)
    vertical = [i + 1 for i, c in enumerate(graph.c_intersections) if c == 0]
    g = graph.exceptional
    sub = WeightedGraph({i: g.weight(i) for i in vertical},
                        [tuple(e) for e in g.edges if all(x in vertical for x in e)])
    return sub.is_forest()


def resolve_report(profile: CuspProfile) -> dict:
    """JSON-ready summary used by the command line."""
    p = plan(profile)
    dg = dual_graph(p)
    rep = dicriticals(p, dg)
    try:
        verify_exceptional_contracts(p, dg)
        contracts = True
    except PlanError:
        contracts = False
    tree = tree_check(p, dg) if p.nu_tilde > 0 else None
    g = dg.exceptional
    return {
        "m": p.m,
        "full_seq": list(p.full_seq),
        "weights": [g.weight(i) for i in range(1, p.m + 1)],
        "edges": sorted([sorted(e) for e in g.edges]),
        "C_intersections": list(dg.c_intersections),
        "dicriticals": {"indices": rep.indices, "degrees": [rep.degrees[i] for i in rep.indices]},
        "checks": {
            "degree_one": rep.has_degree_one,
            "count": rep.count,
            "section": rep.section_index is not None,
            "tree": tree,
            "contracts": contracts,
            "fiber_forest": fiber_forest_check(p, dg),
        },
        "diagnostics": rep.diagnostics,
    }


__all__ = [
    "C_VERTEX",
    "DicriticalReport",
    "DualGraph",
    "PlanError",
    "ProfileError",
    "ResolutionPlan",
    "dicriticals",
    "dual_graph",
    "fiber_forest_check",
    "identity_residuals",
    "plan",
    "replay_dual_graph",
    "resolve_report",
    "tree_check",
    "verify_exceptional_contracts",
]
