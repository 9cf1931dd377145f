"""Finite fields: construction, arithmetic laws, embeddings, roots of unity, linear algebra."""

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from galoispts.field import (CapExceeded, ContextMismatch, FieldElem, FieldError, compositum,
                             embed, embedding, extension, field_for_order, make_field,
                             prime_power, root_of_unity)
from galoispts.linalg import solve_linear
from galoispts import poly

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (13, 1)]
LAWS = [(2, 2), (2, 4), (2, 6), (3, 2), (3, 6), (5, 3), (13, 1), (2, 12), (3, 8)]


def _brute_irreducible(p, f):
    """No monic factor of degree <= deg/2, by trial division over GF(p)."""
    F = make_field(p, 1)
    n = len(f) - 1
    for k in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            g = list(low) + [1]
            if not any(poly.mod(F, f, g)):
                return False
    return True


def _naive_mul(p, mod, a, b):
    """Schoolbook product of coefficient lists reduced by the monic modulus."""
    n = len(mod) - 1
    prod = [0] * (2 * n)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(2 * n - 1, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n + 1):
                prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
    return prod[:n]


def test_prime_field_modulus_is_x():
    F = make_field(2, 1, 0)
    assert F.q == 2
    assert list(F.modulus) == [0, 1]


def test_gf4_modulus_is_the_only_irreducible_quadratic():
    assert list(make_field(2, 2, 0).modulus) == [1, 1, 1]


def test_gf729_group_order():
    F = make_field(3, 6, 0)
    rng = random.Random(1)
    for _ in range(20):
        g = rng.randrange(1, F.q)
        assert F.pow(g, 728) == 1
    assert F.pow(F.primitive, 728 // 2) != 1
    assert F.pow(F.primitive, 728 // 7) != 1
    assert F.pow(F.primitive, 728 // 13) != 1


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (2, 6), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)])
@pytest.mark.parametrize("seed", [0, 1, 7])
def test_moduli_irreducible_by_trial_division(p, n, seed):
    F = make_field(p, n, seed)
    assert _brute_irreducible(p, list(F.modulus))


def test_reproducible_moduli_across_processes():
    import subprocess
    import sys

    code = ("from galoispts.field import make_field;"
            "print([list(make_field(p, n, s).modulus) for p, n in [(2, 8), (3, 5), (5, 4)] for s in (0, 3)])")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    here = [list(make_field(p, n, s).modulus) for p, n in [(2, 8), (3, 5), (5, 4)] for s in (0, 3)]
    assert out.stdout.strip() == str(here)
    assert make_field(2, 8, 0) is make_field(2, 8, 0)


def test_rejects_composite_and_huge():
    with pytest.raises(FieldError):
        make_field(6, 1)
    with pytest.raises(FieldError):
        make_field(2, 0)
    with pytest.raises(CapExceeded):
        make_field(2, 65)
    with pytest.raises(FieldError):
        field_for_order(12)
    assert prime_power(81) == (3, 4)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (2, 12), (3, 8), (5, 3)])
def test_multiplication_matches_schoolbook(p, n):
    F = make_field(p, n)
    rng = random.Random(p * 100 + n)
    for _ in range(200):
        a, b = rng.randrange(F.q), rng.randrange(F.q)
        want = _naive_mul(p, list(F.modulus), F.to_coeffs(a), F.to_coeffs(b))
        assert F.to_coeffs(F.mul(a, b)) == want


@pytest.mark.parametrize("p,n", SMALL)
def test_exhaustive_inverse_and_group_order(p, n):
    F = make_field(p, n)
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1
        assert F.mul(a, F.pow(a, F.q - 2)) == 1


@pytest.mark.parametrize("p,n", LAWS)
def test_frobenius_is_a_ring_homomorphism(p, n):
    F = make_field(p, n)
    rng = random.Random(n)
    for _ in range(100):
        a, b = rng.randrange(F.q), rng.randrange(F.q)
        assert F.pow(F.add(a, b), p) == F.add(F.pow(a, p), F.pow(b, p))
        assert F.pow(F.mul(a, b), p) == F.mul(F.pow(a, p), F.pow(b, p))
        assert F.frobenius(a) == F.pow(a, p)


@given(st.sampled_from(LAWS), st.data())
def test_field_axioms(pn, data):
    F = make_field(*pn)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    assert F.sub(a, b) == F.add(a, F.neg(b))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_field_elem_operators_and_mismatch():
    F = make_field(3, 2)
    x = FieldElem(F, F.gen)
    assert x * x.inverse() == 1
    assert (x + 1) - 1 == x
    assert x ** (F.q - 1) == 1
    assert x.frobenius() == x ** 3
    with pytest.raises(ContextMismatch):
        x + FieldElem(make_field(3, 3), 1)


EMBED_PAIRS = [((2, 1), (2, 2)), ((2, 2), (2, 4)), ((2, 1), (2, 4)), ((3, 1), (3, 2)),
               ((2, 2), (2, 6)), ((2, 3), (2, 6)), ((3, 2), (3, 6)), ((2, 4), (2, 8))]


@pytest.mark.parametrize("src,dst", EMBED_PAIRS)
def test_embedding_is_a_homomorphism_exhaustively(src, dst):
    A, B = make_field(*src), make_field(*dst)
    e = embedding(A, B)
    assert e(0) == 0 and e(1) == 1
    images = set()
    for a in range(A.q):
        images.add(e(a))
        for b in range(A.q):
            assert e(A.add(a, b)) == B.add(e(a), e(b))
            assert e(A.mul(a, b)) == B.mul(e(a), e(b))
    assert len(images) == A.q


def test_embedding_functoriality():
    F4, F16, F256 = make_field(2, 2), make_field(2, 4), make_field(2, 8)
    for a in range(4):
        assert embed(embed(a, F4, F16), F16, F256) == embed(a, F4, F256)
    F9, F729, F3_12 = make_field(3, 2), make_field(3, 6), make_field(3, 12)
    for a in range(9):
        assert embed(embed(a, F9, F729), F729, F3_12) == embed(a, F9, F3_12)


def test_generator_of_gf4_lands_on_order_three():
    F4, F16 = make_field(2, 2), make_field(2, 4)
    g = embed(F4.gen, F4, F16)
    assert g != 1 and F16.pow(g, 3) == 1


def test_embedding_preimage():
    F9, F729 = make_field(3, 2), make_field(3, 6)
    e = embedding(F9, F729)
    for a in range(9):
        assert e.preimage(e(a)) == a
    outside = next(v for v in range(F729.q) if e.preimage(v) is None)
    assert F729.pow(outside, 9) != outside


def test_embedding_rejects_bad_degrees():
    with pytest.raises(ContextMismatch):
        embedding(make_field(2, 2), make_field(2, 3))
    with pytest.raises(ContextMismatch):
        embedding(make_field(2, 2), make_field(3, 2))
    assert compositum(make_field(2, 2), make_field(2, 3)).n == 6
    assert extension(make_field(3, 2), 3) is make_field(3, 6)


def test_root_of_unity_examples():
    F4 = make_field(2, 2)
    w = root_of_unity(F4, 3)
    assert w != 1 and w ** 3 == 1
    F13 = make_field(13, 1)
    z = root_of_unity(F13, 4)
    assert z ** 4 == 1 and z ** 2 == F13.q - 1
    assert z.v in (5, 8)
    with pytest.raises(FieldError):
        root_of_unity(F4, 2)


@pytest.mark.parametrize("p,n,r", [(2, 2, 3), (13, 1, 4), (13, 1, 12), (3, 4, 16), (2, 6, 9), (11, 1, 5)])
def test_root_of_unity_has_exact_order(p, n, r):
    F = make_field(p, n)
    z = root_of_unity(F, r)
    assert z ** r == 1
    assert all(z ** k != 1 for k in range(1, r))


def test_solve_linear_examples():
    F = make_field(13)
    E = lambda v: FieldElem(F, v)
    ident = [[E(int(i == j)) for j in range(3)] for i in range(3)]
    assert solve_linear(ident) == []
    zero = [[E(0), E(0), E(0)]]
    assert len(solve_linear(zero)) == 3
    rng = random.Random(5)
    while True:
        m = [[E(rng.randrange(13)) for _ in range(5)] for _ in range(5)]
        if not solve_linear(m):
            break
    rhs = [E(rng.randrange(13)) for _ in range(5)]
    x = solve_linear(m, "solve", rhs)
    for row, b in zip(m, rhs):
        acc = E(0)
        for a, xi in zip(row, x):
            acc = acc + a * xi
        assert acc == b


def test_solve_linear_inconsistent():
    F = make_field(5)
    E = lambda v: FieldElem(F, v)
    m = [[E(1), E(1)], [E(2), E(2)]]
    assert solve_linear(m, "solve", [E(1), E(3)]) is None


@given(st.sampled_from([(2, 2), (3, 2), (13, 1), (2, 4)]), st.integers(1, 5), st.integers(1, 6),
       st.integers(0, 2**31).map(random.Random))
def test_nullspace_vectors_are_annihilated(pn, rows, cols, rng):
    F = make_field(*pn)
    m = [[FieldElem(F, rng.randrange(F.q)) for _ in range(cols)] for _ in range(rows)]
    basis = solve_linear(m)
    assert len(basis) >= cols - rows
    for v in basis:
        for row in m:
            acc = FieldElem(F, 0)
            for a, x in zip(row, v):
                acc = acc + a * x
            assert acc == 0
