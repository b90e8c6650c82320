from __future__ import annotations

import pytest
import sympy

from cusppencil.cusp_numerics import CuspProfile, admissible_profiles
from cusppencil.pencil_resolution import (
    PlanError,
    dicriticals,
    dual_graph,
    fiber_forest_check,
    identity_residuals,
    plan,
    replay_dual_graph,
    resolve_report,
    tree_check,
    verify_exceptional_contracts,
)
from cusppencil.weighted_graph import intersection_matrix

PROFILES = admissible_profiles(10)


def gram_oracle(p):
    """Intersection matrix of strict transforms from the total-transform classes."""
    m = p.m
    rows = []
    for i in range(1, m + 1):
        v = [0] * m
        v[i - 1] = 1
        for j in p.proximate_to(i):
            v[j - 1] -= 1
        rows.append(v)
    E = sympy.Matrix(rows)
    return E * (-sympy.eye(m)) * E.T


@pytest.mark.parametrize("d,mult,m,full", [
    (1, (), 1, (1,)),
    (3, (2,), 6, (2, 1, 1, 1, 1, 1)),
    (5, (2,) * 6, 7, (2, 2, 2, 2, 2, 2, 1)),
])
def test_plan_examples(d, mult, m, full):
    p = plan(CuspProfile(d, mult))
    assert (p.m, p.full_seq) == (m, full)
    assert identity_residuals(p) == (0, 0)


def test_plan_rejects_bad_profiles():
    with pytest.raises(PlanError):
        plan(CuspProfile(4, (2,)))


def test_cubic_dual_graph():
    dg = dual_graph(plan(CuspProfile(3, (2,))))
    g = dg.exceptional
    assert [g.weight(i) for i in range(1, 7)] == [-3, -2, -2, -2, -2, -1]
    assert dg.c_intersections == (0, 0, 0, 0, 0, 1)
    assert len(verify_exceptional_contracts(plan(CuspProfile(3, (2,))))) == 6


def test_conic_and_line():
    dg = dual_graph(plan(CuspProfile(2, ())))
    assert dg.exceptional.is_tree() and len(dg.exceptional) == 4
    assert dg.c_intersections == (0, 0, 0, 1)
    rep = dicriticals(plan(CuspProfile(1, ())))
    assert rep.indices == [1] and rep.degrees == {1: 1}


def test_quintic_two_dicriticals():
    rep = dicriticals(plan(CuspProfile(5, (2,) * 6)))
    assert rep.indices == [6, 7] and rep.degrees == {6: 1, 7: 1}
    assert rep.section_index == 7 and rep.ok


@pytest.mark.parametrize("prof", PROFILES, ids=lambda p: f"d{p.degree}-{'.'.join(map(str, p.multiplicities))}")
def test_dual_graph_matches_oracles(prof):
    p = plan(prof)
    dg = dual_graph(p)
    order, mat = intersection_matrix(dg.exceptional, list(range(1, p.m + 1)))
    assert sympy.Matrix(mat) == gram_oracle(p)
    assert replay_dual_graph(p) == dg.exceptional
    assert dg.c_intersections[-1] == p.full_seq[-1]
    assert fiber_forest_check(p, dg)
    rep = dicriticals(p, dg)
    assert rep.ok, rep.diagnostics


def test_tree_check_requires_positive_type():
    p = plan(CuspProfile(3, (2,)))
    assert tree_check(p)
    assert tree_check(plan(CuspProfile(2, ())))


def test_tree_check_cycle_through_curve():
    # C meets E_6 and E_7, which are adjacent
    p = plan(CuspProfile(5, (2,) * 6))
    assert not tree_check(p)
    assert fiber_forest_check(p)


def test_resolve_report_keys():
    r = resolve_report(CuspProfile(3, (2,)))
    assert list(r) == ["m", "full_seq", "weights", "edges", "C_intersections", "dicriticals", "checks", "diagnostics"]
    assert r["edges"] == [[1, 3], [2, 3], [3, 4], [4, 5], [5, 6]]
