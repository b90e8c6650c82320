from __future__ import annotations

import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cusppencil.exact import bareiss_det, is_negative_definite, order_echelon, signature
from cusppencil.weighted_graph import (
    BlowDownError,
    WeightedGraph,
    blow_down,
    blow_up_at_edge,
    blow_up_at_vertex,
    blow_up_free,
    can_blow_down,
    canonical_form,
    contractible_vertices,
    equiv_empty,
    graph_from_json,
    graph_to_json,
    intersection_matrix,
    lattice_invariants,
)


@st.composite
def graphs(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    w = {i: draw(st.integers(-5, 1)) for i in range(n)}
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())]
    return WeightedGraph(w, edges)


def sympy_det(g: WeightedGraph) -> int:
    _, m = intersection_matrix(g)
    return int(sympy.Matrix(m).det()) if m else 1


# --- exact linear algebra -------------------------------------------------

@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_sympy(rows):
    assert bareiss_det(rows) == int(sympy.Matrix(rows).det())


def test_signature_and_definiteness():
    assert signature([[-2, 1], [1, -2]]) == (0, 2, 0)
    assert is_negative_definite([[-2, 1], [1, -2]])
    assert not is_negative_definite([[-1, 1], [1, -1]])
    assert signature([[-1, 1], [1, -1]]) == (0, 1, 1)


def test_order_echelon_kernel():
    from fractions import Fraction as F

    rows = [[F(1), F(2), F(0)], [F(2), F(4), F(0)], [F(0), F(1), F(1)]]
    pivots, kernel = order_echelon(rows)
    assert [p[0] for p in pivots] == [0, 1]
    assert len(kernel) == 1
    comb = kernel[0]
    assert all(sum(c * r[k] for c, r in zip(comb, rows)) == 0 for k in range(3))


# --- blow-ups ---------------------------------------------------------------

def test_blow_up_at_vertex_and_edge():
    g = WeightedGraph.chain([-2, -2])
    h, e = blow_up_at_edge(g, (0, 1))
    assert h.weights == {0: -3, 1: -3, e: -1}
    assert not h.has_edge(0, 1) and h.has_edge(0, e) and h.has_edge(1, e)
    h, e = blow_up_at_vertex(g, 0)
    assert h.weight(0) == -3 and h.weight(e) == -1 and h.neighbours(e) == {0}


def test_blow_down_clauses():
    with pytest.raises(BlowDownError):
        blow_down(WeightedGraph.chain([-2]), 0)
    tri = WeightedGraph({0: -1, 1: -2, 2: -2}, [(0, 1), (0, 2), (1, 2)])
    assert not can_blow_down(tri, 0)
    star = WeightedGraph({0: -1, 1: -2, 2: -2, 3: -2}, [(0, 1), (0, 2), (0, 3)])
    assert not can_blow_down(star, 0)
    assert blow_down(WeightedGraph.chain([-2, -1, -2]), 1) == WeightedGraph({0: -1, 2: -1}, [(0, 2)])


def test_blow_down_chain_to_empty():
    g = WeightedGraph.chain([-2, -1])
    g = blow_down(g, 1)
    assert g.weights == {0: -1}
    assert len(blow_down(g, 0)) == 0


@settings(max_examples=200, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_inverse_law(g, rnd):
    moves = [blow_up_free(g)]
    if len(g):
        moves.append(blow_up_at_vertex(g, rnd.choice(g.sorted_vertices())))
    if g.edges:
        moves.append(blow_up_at_edge(g, rnd.choice(g.edge_list())))
    h, e = rnd.choice(moves)
    assert blow_down(h, e) == g


@settings(max_examples=200, deadline=None)
@given(graphs(), st.randoms(use_true_random=False))
def test_lattice_invariants_conserved(g, rnd):
    inv = lattice_invariants(g)
    assert inv.det == sympy_det(g)
    h, _ = blow_up_at_vertex(g, rnd.choice(g.sorted_vertices())) if len(g) else blow_up_free(g)
    new = lattice_invariants(h)
    assert new.I == inv.I
    assert new.neg_definite == inv.neg_definite
    for e in contractible_vertices(h):
        k = lattice_invariants(blow_down(h, e))
        assert (k.I, k.neg_definite) == (inv.I, inv.neg_definite)


def test_chain_determinant_defect_value():
    # hand cofactor expansion: det [[-2,1,0],[1,0,1],[0,1,-2]] = -2*(0-1) - 1*(-2-0) = 4
    inv = lattice_invariants(WeightedGraph.chain([-2, 0, -2]))
    assert inv.det == 4
    assert inv.I == -4
    assert not inv.neg_definite


def test_empty_graph_invariants():
    inv = lattice_invariants(WeightedGraph.empty())
    assert inv.det == 1 and inv.I == 1 and inv.neg_definite


# --- canonical forms and equivalence -----------------------------------------

@settings(max_examples=100, deadline=None)
@given(graphs(max_n=6), st.randoms(use_true_random=False))
def test_canonical_form_is_label_invariant(g, rnd):
    vs = g.sorted_vertices()
    perm = vs[:]
    rnd.shuffle(perm)
    h = g.relabel({v: f"x{p}" for v, p in zip(vs, perm)})
    assert canonical_form(g) == canonical_form(h)


def test_canonical_form_distinguishes_weights():
    assert canonical_form(WeightedGraph.chain([-2, -3])) != canonical_form(WeightedGraph.chain([-2, -2]))
    assert canonical_form(WeightedGraph.chain([-2, -3])) == canonical_form(WeightedGraph.chain([-3, -2]))


def test_equiv_empty_positive_and_gate():
    r = equiv_empty(WeightedGraph.chain([-2, -2, -1]))
    assert r.equivalent and r.verdict == "equivalent"
    g = WeightedGraph.chain([-2, -2, -1])
    for op in r.witness:
        g = blow_down(g, op["at"])
    assert len(g) == 0
    # I = -3 != 1, so no blow-up sequence can reach the empty graph
    r = equiv_empty(WeightedGraph.chain([-3]))
    assert r.verdict == "not_equivalent"


def test_equiv_empty_rejects_zero_vertex():
    # det 0, so I = 0 and the lattice gate fires
    r = equiv_empty(WeightedGraph.chain([0]))
    assert r.verdict == "not_equivalent"


def test_equiv_empty_two_minus_ones():
    # [[-1,1],[1,-1]] is degenerate
    assert equiv_empty(WeightedGraph.chain([-1, -1])).verdict == "not_equivalent"
    assert equiv_empty(WeightedGraph.chain([-1, -2, -2])).equivalent


def test_json_round_trip():
    g = WeightedGraph({0: -1, 1: -2, 2: -3}, [(0, 1), (1, 2)])
    assert graph_from_json(graph_to_json(g)) == g
    assert graph_from_json({"chain": [-1, -2, -3]}) == g


def test_random_walk_regression():
    rng = random.Random(3)
    g = WeightedGraph.chain([-2, -1, -3])
    I = lattice_invariants(g).I
    for _ in range(300):
        g, _ = blow_up_at_vertex(g, rng.choice(g.sorted_vertices())) if len(g) < 8 else (
            blow_down(g, contractible_vertices(g)[0]), None)
        assert lattice_invariants(g).I == I


@st.composite
def symmetric_matrices(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = draw(st.integers(-3, 3))
    return m


@settings(max_examples=300, deadline=None)
@given(symmetric_matrices())
def test_signature_matches_sympy(m):
    # the characteristic polynomial is real-rooted, so Descartes' rule is exact
    coeffs = [c for c in sympy.Matrix(m).charpoly().all_coeffs()]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(a != b for a, b in zip(signs, signs[1:]))

    pos = changes(coeffs)
    neg = changes([c * (-1) ** i for i, c in enumerate(reversed(coeffs))][::-1])
    assert signature(m) == (pos, neg, len(m) - pos - neg)
    assert is_negative_definite(m) == (neg == len(m))


def test_signature_regressions():
    assert signature([[1, 0, 1, 1], [0, 0, 0, 0], [1, 0, 1, 1], [1, 0, 1, 1]]) == (1, 0, 3)
    # eigenvalues -1, 0, 2 - sqrt(2), 2 + sqrt(2)
    assert signature([[1, 1, 1, 1], [1, 0, 1, 0], [1, 1, 1, 1], [1, 0, 1, 1]]) == (2, 1, 1)


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=5))
def test_equiv_empty_soundness_and_monotonicity(g):
    found = None
    for depth in range(4):
        r = equiv_empty(g, depth=depth)
        if r.verdict == "equivalent":
            h = g
            for op in r.witness:
                from cusppencil.weighted_graph import apply_op

                h = apply_op(h, op)
            assert len(h) == 0
            found = depth if found is None else found
        elif r.verdict == "not_equivalent":
            inv = lattice_invariants(g)
            assert inv.I != 1 or not inv.neg_definite
        if found is not None:
            assert r.verdict == "equivalent"


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=6), st.data())
def test_canonical_form_sees_weight_changes(g, data):
    if not len(g):
        return
    v = data.draw(st.sampled_from(g.sorted_vertices()))
    w = dict(g.weights)
    w[v] += data.draw(st.sampled_from([-1, 1]))
    assert canonical_form(g) != canonical_form(WeightedGraph(w, g.edges))
