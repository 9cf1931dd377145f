"""Dense univariate polynomials over a FieldCtx.

A polynomial is a list of element codes, lowest degree first, with no trailing
zeros (the zero polynomial is ``[]``). Only what the rest of the package needs
is here: Euclidean arithmetic, root extraction with multiplicities and
distinct-degree factor degrees.
"""

import random
from math import lcm

X = [0, 1]


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a):
    return len(a) - 1


def add(ctx, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = ctx.add(out[i], c)
    return trim(out)


def sub(ctx, a, b):
    return add(ctx, a, [ctx.neg(c) for c in b])


def scale(ctx, a, c):
    if c == 0:
        return []
    return trim([ctx.mul(x, c) for x in a])


def mul(ctx, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    cadd, cmul = ctx.add, ctx.mul
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = cadd(out[i + j], cmul(x, y))
    return trim(out)


def divmod_(ctx, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db = len(b) - 1
    inv_lead = ctx.inv(b[-1])
    if len(a) <= db:
        return [], trim(a)
    quot = [0] * (len(a) - db)
    cadd, cmul, cneg = ctx.add, ctx.mul, ctx.neg
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        c = cmul(c, inv_lead)
        quot[k - db] = c
        nc = cneg(c)
        for i, y in enumerate(b):
            if y:
                a[k - db + i] = cadd(a[k - db + i], cmul(nc, y))
    return trim(quot), trim(a[:db])


def mod(ctx, a, b):
    return divmod_(ctx, a, b)[1]


def monic(ctx, a):
    if not a:
        return []
    return scale(ctx, a, ctx.inv(a[-1]))


def gcd(ctx, a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(ctx, a, b)
    return monic(ctx, a)


def derivative(ctx, a):
    return trim([ctx.mul(i % ctx.p, a[i]) for i in range(1, len(a))])


def evaluate(ctx, a, x):
    acc = 0
    for c in reversed(a):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


def powmod(ctx, base, e, m):
    result = [1]
    base = mod(ctx, base, m)
    while e:
        if e & 1:
            result = mod(ctx, mul(ctx, result, base), m)
        e >>= 1
        if e:
            base = mod(ctx, mul(ctx, base, base), m)
    return result


def _split(ctx, g, rng, out):
    """Append the roots of a monic product of distinct linear factors."""
    d = degree(g)
    if d <= 0:
        return
    if d == 1:
        out.append(ctx.neg(g[0]))
        return
    while True:
        a = rng.randrange(ctx.q)
        if ctx.p == 2:
            t = mod(ctx, [0, a], g)
            acc = list(t)
            for _ in range(ctx.n - 1):
                t = mod(ctx, mul(ctx, t, t), g)
                acc = add(ctx, acc, t)
            h = acc
        else:
            h = sub(ctx, powmod(ctx, [a, 1], (ctx.q - 1) // 2, g), [1])
        f = gcd(ctx, g, h)
        if 0 < degree(f) < d:
            _split(ctx, f, rng, out)
            _split(ctx, divmod_(ctx, g, f)[0], rng, out)
            return


def roots(ctx, f):
    """Roots of f in ctx with multiplicities, sorted by element code."""
    f = trim(f)
    if degree(f) <= 0:
        return []
    xq = powmod(ctx, X, ctx.q, f)
    g = gcd(ctx, f, sub(ctx, xq, X))
    found = []
    _split(ctx, g, random.Random(0x5EED), found)
    result = []
    for r in sorted(found):
        lin = [ctx.neg(r), 1]
        m = 0
        while True:
            quo, rem = divmod_(ctx, f, lin)
            if rem:
                break
            f = quo
            m += 1
        result.append((r, m))
    return result


def factor_degrees(ctx, f):
    """Sorted degrees of the distinct irreducible factors of f over ctx."""
    f = monic(ctx, trim(f))
    if degree(f) <= 0:
        return []
    rest = f
    h = X
    degs = []
    k = 0
    while degree(rest) > 0:
        k += 1
        h = powmod(ctx, h, ctx.q, f)
        g = gcd(ctx, rest, sub(ctx, h, X))
        if degree(g) > 0:
            degs.append(k)
            while degree(g) > 0:
                rest = divmod_(ctx, rest, g)[0]
                g = gcd(ctx, rest, g)
    return degs


def splitting_degree(ctx, f):
    """Degree over ctx of the smallest extension where f splits completely."""
    degs = factor_degrees(ctx, f)
    return lcm(*degs) if degs else 1


def is_irreducible(ctx, f):
    """Rabin-style test: no factor of degree <= deg/2."""
    f = trim(f)
    n = degree(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    h = X
    for _ in range(n // 2):
        h = powmod(ctx, h, ctx.q, f)
        if degree(gcd(ctx, f, sub(ctx, h, X))) > 0:
            return False
    return True
