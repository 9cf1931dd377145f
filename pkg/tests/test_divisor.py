"""Divisors: line pullbacks, principal divisors, pushforward, linear-form functions."""

import random

import pytest
from hypothesis import assume, given, strategies as st

from galoispts.criterion import A, hermitian_scenario
from galoispts.curve import LineComponent, enumerate_points, make_curve
from galoispts.divisor import (Divisor, LinFormProduct, SplittingError, coordinate_line,
                               divisor_of_function, line_divisor_split, line_intersection_divisor,
                               orbit_sum, pushforward, splitting_field)
from galoispts.field import compositum, extension, make_field
from galoispts.projective import (ProjLine, ProjMatrix, ProjPoint, apply, group_closure,
                                  points_on_line)

F4, F9, F13 = make_field(2, 2), make_field(3, 2), make_field(13)
W = F4.gen
# keep random composita inside table-sized fields
SMALL_EXT = 1 << 16

CURVES = {
    "hermitian2": (make_curve({"hermitian": 2}, F4)),
    "hermitian3": (make_curve({"hermitian": 3}, F9)),
    "fermat3": (make_curve({"fermat": 3}, F4)),
    "fermat4": (make_curve({"fermat": 4}, F13)),
}


def random_line(F, rng):
    while True:
        v = [rng.randrange(F.q) for _ in range(3)]
        if any(v):
            return ProjLine(F, v)


def P(F, *v):
    return ProjPoint(F, v)


def test_hermitian_axis_pullbacks():
    C = CURVES["hermitian2"]
    assert line_intersection_divisor(C, coordinate_line(F4, 0)) == 3 * Divisor.point(P(F4, 0, 0, 1))
    assert line_intersection_divisor(C, coordinate_line(F4, 2)) == 3 * Divisor.point(P(F4, 1, 0, 0))


def test_fermat_cubic_line_at_infinity():
    C = CURVES["fermat3"]
    D = line_intersection_divisor(C, coordinate_line(F4, 2))
    want = Divisor(F4, {P(F4, 1, 1, 0): 1, P(F4, 1, W, 0): 1, P(F4, 1, F4.mul(W, W), 0): 1})
    assert D == want


def test_line_component_detected():
    C = make_curve({"explicit": {(1, 1, 0): 1, (0, 1, 1): 1}}, F13)  # Y (X + Z)
    with pytest.raises(LineComponent):
        line_intersection_divisor(C, coordinate_line(F13, 1))


def test_splitting_error_names_sufficient_field():
    C = CURVES["fermat4"]
    L = coordinate_line(F13, 2)  # X^4 + Y^4: -1 is not a fourth power mod 13
    with pytest.raises(SplittingError) as err:
        line_intersection_divisor(C, L)
    n = err.value.required_n
    assert splitting_field(C, L).n == n
    D = line_intersection_divisor(C, L, make_field(13, n))
    assert D.degree == 4
    with pytest.raises(SplittingError):
        line_intersection_divisor(C, L, make_field(13, n)) if n == 1 else line_intersection_divisor(C, L, F13)


@pytest.mark.parametrize("name", sorted(CURVES))
def test_bezout_on_random_lines(name):
    C = CURVES[name]
    rng = random.Random(name)
    for _ in range(100):
        L = random_line(C.ctx, rng)
        D = line_divisor_split(C, L)
        assert D.degree == C.degree
        assert all(c > 0 for _, c in D)
        ext = D.ctx
        pts = points_on_line(L.over(ext))
        vals = C.over(ext).evaluate_many([X.coords for X in pts])
        on = {X for X, v in zip(pts, vals) if v == 0}
        assert set(D.support) == on


def test_principal_divisor_examples():
    C = CURVES["hermitian2"]
    X, Z = coordinate_line(F4, 0), coordinate_line(F4, 2)
    x = LinFormProduct({X: 1, Z: -1})
    assert divisor_of_function(C, x) == 3 * Divisor.point(P(F4, 0, 0, 1)) - 3 * Divisor.point(P(F4, 1, 0, 0))
    assert divisor_of_function(C, x * x.inverse()).is_zero()
    C3 = CURVES["hermitian3"]
    X9, Z9 = coordinate_line(F9, 0), coordinate_line(F9, 2)
    D = divisor_of_function(C3, LinFormProduct({X9: 2, Z9: -2}))
    assert D == 8 * Divisor.point(P(F9, 0, 0, 1)) - 8 * Divisor.point(P(F9, 1, 0, 0))


@given(st.sampled_from(sorted(CURVES)), st.integers(0, 2**31), st.integers(1, 3))
def test_principal_divisors_have_degree_zero(name, seed, k):
    C = CURVES[name]
    rng = random.Random(seed)
    lines = [random_line(C.ctx, rng) for _ in range(2 * k)]
    exps = [rng.randint(-3, 3) for _ in range(2 * k - 1)]
    exps.append(-sum(exps))
    F = LinFormProduct(list(zip(lines, exps)), ctx=C.ctx)
    ext = C.ctx
    for L in F.factors:
        ext = compositum(ext, splitting_field(C, L))
    assume(ext.q <= SMALL_EXT)
    D = divisor_of_function(C, F, ext)
    assert D.degree == 0


@given(st.sampled_from(sorted(CURVES)), st.integers(0, 2**31))
def test_pushforward_laws(name, seed):
    C = CURVES[name]
    rng = random.Random(seed)
    F = C.ctx
    while True:
        try:
            M = ProjMatrix(F, [rng.randrange(F.q) for _ in range(9)])
            break
        except ValueError:
            pass
    D1 = line_divisor_split(C, random_line(F, rng))
    D2 = line_divisor_split(C, random_line(F, rng))
    assume(compositum(D1.ctx, D2.ctx).q <= SMALL_EXT)
    D = D1 + D2
    assert pushforward(M.inverse(), pushforward(M, D)) == D
    assert pushforward(M, D1 + D2) == pushforward(M, D1) + pushforward(M, D2)
    assert pushforward(M, 3 * D1) == 3 * pushforward(M, D1)
    assert pushforward(M, D).degree == D.degree
    assert pushforward(ProjMatrix.identity(D.ctx), D) == D


def test_pushforward_examples():
    D = 3 * Divisor.point(P(F4, 0, 0, 1))
    assert pushforward(ProjMatrix.diag(F4, 1, W, 1), D) == D
    E = Divisor.point(P(F4, 1, 0, 0)) + 2 * Divisor.point(P(F4, 0, 1, 1))
    assert pushforward(ProjMatrix(F4, [1, 1, 0, 0, 1, 0, 0, W, 1]), E).degree == 3


@pytest.mark.parametrize("q,s", [(2, 1), (3, 1), (3, 2)])
def test_line_divisor_covariance_under_hermitian_groups(q, s):
    scn = hermitian_scenario(q, s)
    C = scn.curve
    rng = random.Random(q * 10 + s)
    lines = [random_line(C.ctx, rng) for _ in range(6)]
    lines += [coordinate_line(C.ctx, i) for i in range(3)]
    for G in scn.groups:
        for g in G:
            for L in lines:
                D = line_divisor_split(C, L)
                gL = apply(g, L)
                E = line_intersection_divisor(C, gL, D.ctx)
                assert pushforward(g, D) == E


def test_orbit_sum_degree():
    scn = hermitian_scenario(2, 1)
    G1 = scn.groups[0]
    for Q in scn.points:
        assert orbit_sum(G1, Q).degree == G1.order


@given(st.sampled_from(sorted(CURVES)), st.integers(0, 2**31))
def test_function_compose_matches_evaluation(name, seed):
    C = CURVES[name]
    F = C.ctx
    rng = random.Random(seed)
    lines = [random_line(F, rng) for _ in range(3)]
    f = LinFormProduct({lines[0]: 2, lines[1]: -1, lines[2]: -1}, const=rng.randrange(1, F.q), ctx=F) \
        if len(set(lines)) == 3 else LinFormProduct({}, ctx=F)
    while True:
        try:
            M = ProjMatrix(F, [rng.randrange(F.q) for _ in range(9)])
            break
        except ValueError:
            pass
    g = f.compose(M)
    for _ in range(10):
        v = [rng.randrange(F.q) for _ in range(3)]
        if not any(v):
            continue
        X = ProjPoint(F, v)
        assert g.evaluate(X) == f.evaluate(apply(M, X))
    assert (f * f.inverse()).is_constant()


def test_function_rejects_nonzero_degree():
    with pytest.raises(ValueError):
        LinFormProduct({coordinate_line(F4, 0): 1})


def test_divisor_equality_across_fields():
    D = 2 * Divisor.point(P(F4, 1, 0, 0))
    F16 = extension(F4, 2)
    assert D == D.over(F16)
    assert (D - D).is_zero()
    assert D.negative().is_zero() and D.positive() == D
