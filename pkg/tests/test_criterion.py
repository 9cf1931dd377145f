"""Criterion engine: Hermitian scenarios, plane models, inner criterion, orbit condition."""

from functools import lru_cache
from itertools import permutations

import pytest

from galoispts.criterion import (FAIL, PASS, UNVERIFIED, A, InconsistencyError, ScenarioError,
                                 ScenarioParams, check_inner_criterion, check_outer_criterion,
                                 diagonal_in_frame, fermat_orbit_condition, hermitian_scenario,
                                 inner_scenario, linear_automorphism_group, model_orbit_condition,
                                 power_identity, transfer_family, verify_model_galois,
                                 wrong_g_model)
from galoispts.curve import enumerate_points, make_curve
from galoispts.divisor import Divisor, divisor_of_function
from galoispts.field import make_field
from galoispts.galois import split_divisor
from galoispts.projective import ProjMatrix, ProjPoint, apply, collinear, orbit


@lru_cache(maxsize=None)
def scenario(q, s):
    return hermitian_scenario(q, s)


@lru_cache(maxsize=None)
def model(q, s):
    return scenario(q, s).model()


def test_params_validation():
    with pytest.raises(ScenarioError, match="s must divide q-1"):
        hermitian_scenario(2, 2)
    with pytest.raises(ScenarioError):
        ScenarioParams(3, 3, 2, 2, 8, None)
    with pytest.raises(ScenarioError):
        ScenarioParams(3, 3, 2, 1, 9, None)


@pytest.mark.parametrize("q,s", [(2, 1), (3, 1), (3, 2)])
def test_scenario_shape(q, s):
    scn = scenario(q, s)
    assert scn.report.verdict == PASS
    assert [G.order for G in scn.groups] == [s * (q + 1)] * 3
    Q1, Q2, Q3 = scn.points
    assert Q1 == ProjPoint(Q1.ctx, (1, 0, 0)) and Q2 == ProjPoint(Q1.ctx, (0, 0, 1))
    assert Q3.coords[1] != 0
    assert apply(scn.Phi, Q1) == Q1 and apply(scn.Phi, Q2) == Q3
    assert scn.curve.is_preserved_by(scn.Phi) and scn.curve.is_preserved_by(scn.Psi)
    # G_k fixes the two points other than Q_k
    for k, G in enumerate(scn.groups):
        for i, Q in enumerate(scn.points):
            if i != k:
                assert all(apply(g, Q) == Q for g in G)
    assert all(G.is_cyclic() for G in scn.groups)


def test_g3_moves_q3():
    scn = scenario(3, 1)
    Q3 = scn.points[2]
    assert all(apply(g, Q3) != Q3 for g in scn.groups[2] if not g.is_identity())


def test_c_prime_witnesses_are_multiples_of_q_k():
    scn = scenario(3, 1)
    for w in scn.report.conditions["c'"].witnesses:
        Qk = scn.points[w["k"] - 1]
        assert w["lhs"] == w["rhs"] == 4 * Divisor.point(Qk)


def test_power_identity_q3_s2():
    F9 = make_field(3, 2)
    rows = power_identity(3, 2, F9)
    assert len(rows) == 8 and all(ok for _, ok in rows)
    for a in range(1, 9):
        # independent check through matrix powers (m = 1 here)
        lhs = A(F9, a, 3) @ A(F9, a, 3)
        rhs = ProjMatrix.diag(F9, 1, F9.pow(a, 2), 1)
        assert lhs == rhs


def test_hermitian_cubic_automorphism_group():
    C = make_curve({"hermitian": 2}, make_field(2, 2))
    assert linear_automorphism_group(C).order == 216


def test_no_swap_for_q2():
    """No linear automorphism fixes Q1 and swaps Q2 with any admissible Q3 when q = 2."""
    scn = scenario(2, 1)
    C = scn.curve
    G = linear_automorphism_group(C)
    Q1, Q2 = scn.points[:2]
    for Q3 in enumerate_points(C):
        if Q3.coords[1] == 0:
            continue
        assert not any(apply(g, Q1) == Q1 and apply(g, Q2) == Q3 and apply(g, Q3) == Q2 for g in G)
    assert scn.swaps == (False, False)


def test_transfer_family_maps_q2_to_q3():
    scn = scenario(3, 1)
    fam = list(transfer_family(scn.curve, 3, scn.points[2], fix_q1=True))
    assert fam
    for M in fam:
        assert scn.curve.is_preserved_by(M)
        assert apply(M, scn.points[0]) == scn.points[0]
        assert apply(M, scn.points[1]) == scn.points[2]


@pytest.mark.parametrize("q,s", [(2, 1), (3, 1)])
def test_c_prime_symmetric_under_relabeling(q, s):
    scn = scenario(q, s)
    for perm in permutations(range(3)):
        groups = [scn.groups[i] for i in perm]
        points = [scn.points[i] for i in perm]
        gens = {n + 1: scn.generators[i + 1] for n, i in enumerate(perm)}
        rep = check_outer_criterion(scn.curve, groups, points, gens)
        assert rep.verdict == PASS


def test_missing_generators_leave_a_unverified():
    scn = scenario(2, 1)
    rep = check_outer_criterion(scn.curve, scn.groups, scn.points)
    assert rep.conditions["a"].status == UNVERIFIED and rep.verdict == UNVERIFIED


def test_b_and_d_prime_violations():
    scn = scenario(2, 1)
    G1, G2, G3 = scn.groups
    rep = check_outer_criterion(scn.curve, (G1, G1, G3), scn.points, scn.generators)
    assert rep.conditions["b"].status == FAIL
    Q1, Q2, Q3 = scn.points
    g = next(h for h in G1 if not h.is_identity())
    rep = check_outer_criterion(scn.curve, (G3, G1, G2), (Q1, Q3, apply(g, Q3)))
    assert rep.conditions["d'"].status == FAIL
    assert rep.conditions["d'"].witnesses


@pytest.mark.parametrize("q,s", [(2, 1), (3, 1), (3, 2)])
def test_model_pole_divisors_agree(q, s):
    scn = scenario(q, s)
    m = model(q, s)
    Df = split_divisor(scn.curve, scn.f)
    Dg = split_divisor(scn.curve, scn.g)
    assert Df.negative() == Dg.negative()
    assert m.incidences[1].count("Y") and m.incidences[2].count("X") and m.incidences[3].count("Z")
    assert not collinear(*m.vertices)


@pytest.mark.parametrize("q,s,deg,mode", [(2, 1, 3, "linear"), (3, 1, 4, "linear"), (3, 2, 8, "source")])
def test_model_degree_and_verification(q, s, deg, mode):
    m = model(q, s)
    assert m.image_degree == deg == m.expected_degree
    ver = verify_model_galois(m)
    assert ver.ok
    assert [v.group_order for v in ver.vertices] == [deg] * 3
    assert all(v.mode == mode for v in ver.vertices)
    assert all(v.on_image is False for v in ver.vertices)


def test_wrong_g_fails_at_its_vertex():
    m = wrong_g_model(scenario(2, 1))
    ver = verify_model_galois(m)
    assert not ver.ok and 2 in ver.failing()
    v2 = ver.vertices[1]
    assert not v2.certificate.invariant
    assert any(f["reason"] in ("divisor moved", "value changed") for f in v2.certificate.failures)


def test_inner_scenario_hermitian_q2():
    C = make_curve({"hermitian": 2}, make_field(2, 2))
    scn = inner_scenario(C)
    assert scn.report.verdict == PASS
    assert all(G.order == 2 for G in scn.groups)
    m = scn.model()
    assert m.image_degree == 3 == m.expected_degree
    assert verify_model_galois(m).ok


def test_inner_criterion_negative_controls():
    C = make_curve({"hermitian": 2}, make_field(2, 2))
    scn = inner_scenario(C)
    P1, P2, P3 = scn.points
    G1, G2, G3 = scn.groups
    rep = check_inner_criterion(C, (G1, G1, G3), scn.points, scn.generators)
    assert rep.conditions["b"].status == FAIL
    other = next(X for X in orbit(G1, P2) if X != P2)
    from galoispts.galois import decomposition_group

    rep = check_inner_criterion(C, (G1, G2, decomposition_group(C, other)), (P1, P2, other))
    assert rep.conditions["d"].status == FAIL


@pytest.mark.parametrize("d,F", [(3, make_field(2, 2)), (4, make_field(13)), (5, make_field(11)),
                                 (6, make_field(7))])
def test_fermat_orbit_condition_holds(d, F):
    C = make_curve({"fermat": d}, F)
    V = [ProjPoint(F, v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    res = fermat_orbit_condition(C, *V)
    assert res.hypothesis and res.holds and res.group_order == d * d
    for r in res.reports:
        assert r.group.is_cyclic() and diagonal_in_frame(r.group, V)


def test_fermat_orbit_condition_collinear_centers():
    F = make_field(13)
    C = make_curve({"fermat": 4}, F)
    res = fermat_orbit_condition(C, *(ProjPoint(F, v) for v in ((1, 0, 0), (0, 1, 0), (1, 1, 0))))
    assert not res.hypothesis and not res.holds and "collinear" in res.reason


def test_fermat_orbit_condition_non_galois_centers():
    F = make_field(13)
    C = make_curve({"fermat": 4}, F)
    res = fermat_orbit_condition(C, *(ProjPoint(F, v) for v in ((1, 0, 0), (0, 1, 0), (1, 1, 1))))
    assert not res.hypothesis and "not outer Galois" in res.reason


def test_model_orbit_condition_q2_fails_with_witness():
    res = model_orbit_condition(model(2, 1))
    assert res.hypothesis and not res.holds
    w = res.witness
    assert w["image"] not in res.support and apply(w["element"], w["point"]) == w["image"]
