"""Acceptance gate: one test per criterion, each against an independent oracle.

The terminal summary (see conftest) prints one PASS/FAIL line per criterion.
Criteria 7 and 8 assert the literal statements and currently fail; the
failure messages list the counterexamples.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction
from math import gcd

import pytest
import sympy

from cusppencil import catalog
from cusppencil.cusp_numerics import (
    admissible_profiles,
    euclid_sequence,
    nu_emb,
    nu_tilde,
    section_obstruction,
    verify_euclid_identities,
)
from cusppencil.erasability import (
    WeightedPair,
    contract,
    contractible_vertices,
    corpus,
    ell_bounded,
    parse_chain_pair,
    star_pair,
    triangle_pair,
)
from cusppencil.linear_systems import (
    HomogeneousForm,
    TruncatedSeries,
    map_degree_probe,
    monomials,
    multiplicity_sequence_from_param,
)
from cusppencil.pencil_resolution import dicriticals, dual_graph, plan, tree_check
from cusppencil.weighted_graph import (
    WeightedGraph,
    blow_down,
    blow_up_at_edge,
    blow_up_at_vertex,
    blow_up_free,
    contractible_vertices as graph_contractible,
    intersection_matrix,
    lattice_invariants,
)

pytestmark = pytest.mark.acceptance


class Clock:
    def __init__(self, limit: float):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        return False

    def check(self):
        assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


# --- independent oracles ---------------------------------------------------------

def subtractive_euclid(a: int, b: int) -> tuple[int, ...]:
    a, b = min(a, b), max(a, b)
    return () if a == 0 else (a,) + subtractive_euclid(a, b - a)


def rank_dim(curve, ell: int, j: int) -> int:
    t = sympy.Symbol("t")
    x = sum(sympy.Rational(str(curve.x[i])) * t ** i for i in range(curve.x.prec))
    y = sum(sympy.Rational(str(curve.y[i])) * t ** i for i in range(curve.y.prec))
    rows = []
    for a, b, _ in monomials(ell):
        s = sympy.expand(x ** a * y ** b)
        rows.append([s.coeff(t, k) for k in range(j)])
    return len(rows) - (sympy.Matrix(rows).rank() if j else 0) - 1


def characteristic_sequences(max_mult: int, max_weight: int) -> set[tuple[int, ...]]:
    """Minimal multiplicity sequences of branches from characteristic exponents.

    The sequence is the concatenation of S(b0, b1), S(e1, b2 - b1), ... with
    e_k the running gcd; ``max_weight`` bounds sum r(r - 1).
    """
    out = {()}

    def weight(seq):
        return sum(r * (r - 1) for r in seq)

    def extend(seq, e, last):
        for step in range(1, max_weight + 2):
            if step % e == 0:
                continue
            nxt = seq + subtractive_euclid(e, step)
            if weight(nxt) > max_weight:
                break
            g = gcd(e, step)
            if g == 1:
                out.add(tuple(r for r in nxt if r >= 2))
            else:
                extend(nxt, g, last + step)

    for b0 in range(2, max_mult + 1):
        for b1 in range(b0 + 1, b0 + max_weight + 2):
            if b1 % b0 == 0:
                continue
            seq = subtractive_euclid(b0, b1)
            if weight(seq) > max_weight:
                break
            g = gcd(b0, b1)
            if g == 1:
                out.add(tuple(r for r in seq if r >= 2))
            else:
                extend(seq, g, b1)
    return out


def oracle_profiles(max_degree: int) -> set[tuple[int, tuple[int, ...]]]:
    seqs = characteristic_sequences(max_degree - 1, (max_degree - 1) * (max_degree - 2))
    out = set()
    for d in range(1, max_degree + 1):
        for s in seqs:
            if s and s[0] > d - 1:
                continue
            if sum(r * (r - 1) for r in s) != (d - 1) * (d - 2):
                continue
            if d * d - sum(r * r for r in s) >= 0:
                out.add((d, s))
    return out


def deficit_oracle(p) -> list[int]:
    """C_m . E_i from the classes dL - sum r_j e_j and e_i - sum_{j -> i} e_j."""
    m = p.m
    C = sympy.Matrix([[-r for r in p.full_seq]])
    rows = []
    for i in range(1, m + 1):
        v = [0] * m
        v[i - 1] = 1
        for j in p.proximate_to(i):
            v[j - 1] -= 1
        rows.append(v)
    E = sympy.Matrix(rows)
    return list(C * (-sympy.eye(m)) * E.T)


def simple_tree(vertices, edges) -> bool:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return len({find(v) for v in vertices}) == 1


PROFILES = admissible_profiles(10)


# --- criteria ------------------------------------------------------------------------

def test_criterion_1_euclid_identities():
    with Clock(5) as clk:
        bad = [(a, b) for a in range(1, 201) for b in range(1, 201) if not verify_euclid_identities(a, b)[2]]
    clk.check()
    assert not bad
    for a, b in [(1, 1), (2, 3), (4, 6), (13, 200), (200, 199), (144, 89)]:
        s = euclid_sequence(a, b)
        assert s == subtractive_euclid(a, b)
        assert sum(s) == a + b - gcd(a, b) and sum(r * r for r in s) == a * b


def test_criterion_2_cubic_dimension_table():
    with Clock(2) as clk:
        c, _ = catalog.get("cusp3").load()
        window = c.semigroup_window()
        dims = {j: c.dim_X(3, j) for j in range(2, 10)}
    clk.check()
    assert window == [0, 2, 3, 4, 5, 6, 7, 8, 9]
    assert dims == {j: 10 - j for j in range(2, 10)}
    assert dims[9] == 1 and dims[8] == 2
    assert all(rank_dim(c, 3, j) == dims[j] for j in (2, 8, 9))


def test_criterion_3_window_size_identity():
    with Clock(30) as clk:
        sizes = {d: len(catalog.get(f"cusp{d}").load()[0].semigroup_window()) for d in range(3, 7)}
    clk.check()
    for d, n in sizes.items():
        gens = {a * (d - 1) + b * d for a in range(d + 2) for b in range(d + 2)}
        assert n == len([k for k in gens if k <= d * d]) == (d * d + 3 * d) // 2


def test_criterion_4_series_cross_oracle():
    for a in range(2, 9):
        for b in range(a + 1, 9):
            if gcd(a, b) != 1:
                continue
            r = multiplicity_sequence_from_param(TruncatedSeries.monomial(a, 64), TruncatedSeries.monomial(b, 64))
            e = subtractive_euclid(a, b)
            assert r.embedded == e == euclid_sequence(a, b), (a, b)
            assert r.minimal == tuple(x for x in e if x >= 2), (a, b)


def test_criterion_5_nu_catalog():
    for d in range(3, 9):
        c, prof = catalog.get(f"cusp{d}").load()
        r = multiplicity_sequence_from_param(c.x, c.y)
        assert prof.multiplicities == r.minimal == (d - 1,)
        assert nu_tilde(prof) == d * d - (d - 1) ** 2 == 2 * d - 1
        assert nu_emb(prof) == nu_tilde(prof) - r.minimal[-1] == d


def test_criterion_6_dicritical_engine():
    with Clock(60) as clk:
        profiles = admissible_profiles(10)
        reports = [(prof, plan(prof), dicriticals(plan(prof))) for prof in profiles]
    clk.check()
    found = {(p.degree, p.multiplicities) for p in profiles}
    assert found == oracle_profiles(10)
    for prof, p, rep in reports:
        degs = deficit_oracle(p)
        horizontal = [i + 1 for i, x in enumerate(degs) if x > 0]
        assert rep.indices == horizontal
        assert rep.count in (1, 2), prof
        assert any(degs[i - 1] == 1 for i in horizontal), prof
        assert (rep.section_index is not None) == (nu_tilde(prof) > 0), prof
        assert rep.ok, rep.diagnostics


def test_criterion_7_plan_consistency():
    tree_failures = []
    for prof in PROFILES:
        p = plan(prof)
        d = prof.degree
        assert sum(p.full_seq) == 3 * d - 2
        assert sum(r * r for r in p.full_seq) == d * d
        g = dual_graph(p).exceptional
        for i in range(p.m, 0, -1):
            g = blow_down(g, i)
        assert len(g) == 0
        if p.nu_tilde > 0:
            dg = dual_graph(p)
            cs = deficit_oracle(p)
            verts = list(range(1, p.m + 1)) + ["C"]
            edges = [tuple(e) for e in dg.exceptional.edges] + [("C", i + 1) for i, c in enumerate(cs) if c > 0]
            oracle = all(c <= 1 for c in cs) and simple_tree(verts, edges)
            assert tree_check(p, dg) == oracle
            if not oracle:
                tree_failures.append((d, prof.multiplicities))
    assert not tree_failures, f"tree_check fails (C meets two adjacent dicriticals) for {tree_failures}"


def test_criterion_8_obstruction_analysis():
    with Clock(60) as clk:
        reports = {d: section_obstruction(d) for d in range(1, 13)}
    clk.check()
    violations = []
    for d, rep in reports.items():
        brute = set()

        def rec(prefix, sq, s, cap):
            if sq == d * d and s == 3 * d - 2:
                brute.add(tuple(prefix))
                return
            for r in range(min(cap, max(d - 1, 1)), 0, -1):
                if sq + r * r <= d * d and s + r <= 3 * d - 2:
                    rec(prefix + [r], sq + r * r, s + r, r)

        rec([], 0, 0, d)
        enumerated = {c.sequence for c in rep.candidates}
        assert enumerated <= brute
        for seq in enumerated:
            if seq[-1] >= 2 and not (seq[-1] == 2 and d % 2 == 0):
                violations.append((d, seq))
        # the version that carries the derivation's hypothesis holds
        assert rep.conclusion_holds
    assert not violations, f"solutions with r_m >= 2 but not (r_m = 2, d even): {violations}"


NON_ERASABLE = {
    "chain [-3,-1*,-1,-2]": parse_chain_pair("[-3,-1*,-1,-2]"),
    **{f"triangle x={x}": triangle_pair(x) for x in (-4, -3, -1, 0, 1)},
    **{f"star y={y}": star_pair(y) for y in (-2, -1, 0, 1)},
}


def test_criterion_9_erasability_corpus():
    with Clock(120) as clk:
        for s in ("[-1,-1*]", "[-2,-1,-1*]"):
            r = ell_bounded(parse_chain_pair(s), 6)
            assert (r.verdict, r.ell) == ("erasable", 0), s
        for name, p in NON_ERASABLE.items():
            r = ell_bounded(p, 6)
            assert r.witnesses == 0, name
        for name, p in corpus().items():
            if not name.startswith("prune"):
                continue
            t0 = time.perf_counter()
            r = ell_bounded(p, 6)
            assert r.verdict == "not_erasable" and r.nodes == 1, name
            assert time.perf_counter() - t0 < 0.1, name
    clk.check()


def _random_graph(rng: random.Random, n: int) -> WeightedGraph:
    w = {i: rng.randint(-4, 0) for i in range(n)}
    return WeightedGraph(w, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35])


def test_criterion_10_graph_calculus():
    rng = random.Random(2024)
    samples = []
    with Clock(30) as clk:
        steps = 0
        while steps < 10_000:
            g = _random_graph(rng, rng.randint(1, 6))
            inv = lattice_invariants(g)
            for _ in range(50):
                downs = graph_contractible(g)
                if downs and (len(g) > 10 or rng.random() < 0.4):
                    g = blow_down(g, rng.choice(downs))
                elif len(g) == 0 or rng.random() < 0.2:
                    g = blow_up_free(g)[0]
                elif g.edges and rng.random() < 0.5:
                    g = blow_up_at_edge(g, rng.choice(g.edge_list()))[0]
                else:
                    g = blow_up_at_vertex(g, rng.choice(g.sorted_vertices()))[0]
                new = lattice_invariants(g)
                steps += 1
                assert (new.I, new.neg_definite) == (inv.I, inv.neg_definite)
                if steps % 100 == 0:
                    samples.append((g, new))
                inv = new
        for _ in range(1000):
            g = _random_graph(rng, rng.randint(1, 7))
            moves = [blow_up_free(g), blow_up_at_vertex(g, rng.choice(g.sorted_vertices()))]
            if g.edges:
                moves.append(blow_up_at_edge(g, rng.choice(g.edge_list())))
            h, e = rng.choice(moves)
            assert blow_down(h, e) == g
    clk.check()
    for g, inv in samples:
        _, m = intersection_matrix(g)
        M = sympy.Matrix(m) if m else sympy.zeros(0, 0)
        det = M.det() if m else 1
        assert inv.I == (-1) ** len(g) * det
        if m:
            assert inv.neg_definite == (-M).is_positive_definite


def _random_contractible_pair(rng: random.Random) -> WeightedPair:
    while True:
        g = _random_graph(rng, rng.randint(2, 4))
        v = rng.choice(g.sorted_vertices())
        far = [e for e in g.edge_list() if v not in e]
        if far and rng.random() < 0.5:
            g2, _ = blow_up_at_edge(g, rng.choice(far))
        else:
            g2, _ = blow_up_at_vertex(g, rng.choice([u for u in g.sorted_vertices() if u != v]))
        p = WeightedPair(g2, v)
        if contractible_vertices(p):
            return p


def test_criterion_11_contraction_invariance():
    rng = random.Random(11)
    pairs = [p for p in corpus().values() if contractible_vertices(p)]
    assert pairs
    pairs += [_random_contractible_pair(rng) for _ in range(100)]
    for p in pairs:
        for w in contractible_vertices(p):
            a, b = ell_bounded(p, 4), ell_bounded(contract(p, w), 4)
            assert (a.verdict, a.ell) == (b.verdict, b.ell), (p, w)


def test_criterion_12_birationality_probe():
    with Clock(30) as clk:
        c, _ = catalog.get("cusp3").load()
        net = c.net_basis()
        cubic = map_degree_probe(net, trials=10, seed=0)
        control = map_degree_probe([HomogeneousForm.monomial(e) for e in [(2, 0, 0), (0, 2, 0), (0, 0, 2)]],
                                   trials=10, seed=0)
    clk.check()
    assert cubic["trials"] >= 10 and cubic["count"] == 1 and cubic["stable"]
    assert control["count"] == 4
    # explicit inverse of (F, Y^3, X Y^2): X/Y = c/b, Z/Y = a/b + (c/b)^3
    F, G, H = net
    rng = random.Random(5)
    for _ in range(10):
        a, b, cc = (Fraction(rng.choice([k for k in range(-9, 10) if k])) for _ in range(3))
        pt = (cc / b, Fraction(1), a / b + (cc / b) ** 3)
        X, Y, Z = sympy.symbols("X Y Z")
        vals = [f.to_sympy(X, Y, Z).subs({X: pt[0], Y: pt[1], Z: pt[2]}) for f in (F, G, H)]
        assert vals[0] * b == a * vals[1] and vals[2] * b == cc * vals[1]
