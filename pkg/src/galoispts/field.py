"""Exact arithmetic in GF(p^n).

Elements of a field are encoded as integers ``0 <= v < p**n`` whose base-p
digits are the coefficients (lowest first) of the residue polynomial modulo
the field's modulus. Contexts are cached per ``(p, n, seed)``, so equal
parameters give the very same object and bit-identical moduli.

Three scalar backends sit behind one interface:

* prime fields (n == 1): plain modular arithmetic;
* table fields (q <= TABLE_CAP): log/exp and Zech tables;
* large fields: schoolbook polynomial arithmetic modulo the modulus.

Table fields also expose :attr:`FieldCtx.kt` for the vectorized kernels.
"""

from functools import cached_property, lru_cache
from math import gcd, lcm

import numpy as np

from . import _config
from . import poly
from .kernels import KernelTables, MODE_CHAR2, MODE_PRIME, MODE_ZECH


class FieldError(ValueError):
    pass


class ContextMismatch(FieldError):
    """Raised when elements of different fields are combined."""


class CapExceeded(FieldError):
    pass


def _is_prime(p):
    from sympy import isprime

    return isprime(p)


def _prime_factors(m):
    from sympy import factorint

    return sorted(factorint(m))


# --------------------------------------------------------------------------
# digit helpers (used by the large-field backend and table construction)
# --------------------------------------------------------------------------

def _to_digits(v, p, n):
    out = []
    for _ in range(n):
        v, r = divmod(v, p)
        out.append(r)
    return out


def _from_digits(d, p):
    v = 0
    for c in reversed(d):
        v = v * p + c
    return v


def _polymulmod_digits(a, b, mod_low, p, n):
    """(a*b) mod (x^n + mod_low) over GF(p), digit lists of length n."""
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c:
            for i in range(n):
                prod[k - n + i] = (prod[k - n + i] - c * mod_low[i]) % p
    return prod[:n]


def _clmulmod(a, b, modint, n):
    """Carry-less product modulo the characteristic-2 modulus ``modint``."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> n) & 1:
            a ^= modint
    return r


class FieldCtx:
    """The finite field GF(p^n) with a fixed modulus.

    Build instances with :func:`make_field`. The scalar methods (``add``,
    ``mul``, ...) take and return element codes.
    """

    def __init__(self, p, n, modulus, seed):
        self.p = p
        self.n = n
        self.seed = seed
        self.modulus = tuple(modulus)
        self.q = p**n
        self.key = (p, n, seed)
        self.zero = 0
        self.one = 1
        self.is_table = self.q <= _config.TABLE_CAP
        if n == 1:
            self._init_prime()
        elif self.is_table:
            self._init_tables()
        else:
            self._init_poly()

    # -- construction -----------------------------------------------------

    def _init_prime(self):
        p = self.p
        self.add = lambda a, b: (a + b) % p
        self.sub = lambda a, b: (a - b) % p
        self.neg = lambda a: (-a) % p
        self.mul = lambda a, b: (a * b) % p

        def inv(a):
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, -1, p)

        def power(a, e):
            if e < 0:
                return pow(inv(a), -e, p)
            return pow(a, e, p)

        self.inv = inv
        self.pow = power

    def _slow_mul(self):
        p, n = self.p, self.n
        if p == 2:
            modint = _from_digits(self.modulus, 2)
            return lambda a, b: _clmulmod(a, b, modint, n)
        mod_low = self.modulus[:n]
        return lambda a, b: _from_digits(
            _polymulmod_digits(_to_digits(a, p, n), _to_digits(b, p, n), mod_low, p, n), p)

    def _slow_pow(self, mul, a, e):
        r = 1
        while e:
            if e & 1:
                r = mul(r, a)
            e >>= 1
            if e:
                a = mul(a, a)
        return r

    def _digit_add(self):
        p, n = self.p, self.n
        if p == 2:
            return lambda a, b: a ^ b
        return lambda a, b: _from_digits(
            [(x + y) % p for x, y in zip(_to_digits(a, p, n), _to_digits(b, p, n))], p)

    def _digit_neg(self):
        p, n = self.p, self.n
        if p == 2:
            return lambda a: a
        return lambda a: _from_digits([(-x) % p for x in _to_digits(a, p, n)], p)

    def _init_poly(self):
        mul = self._slow_mul()
        add = self._digit_add()
        neg = self._digit_neg()
        qm1 = self.q - 1

        def inv(a):
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return self._slow_pow(mul, a, qm1 - 1)

        def power(a, e):
            if e < 0:
                a, e = inv(a), -e
            if a == 0:
                return 1 if e == 0 else 0
            return self._slow_pow(mul, a, e % qm1 if e else 0)

        self.add = add
        self.neg = neg
        self.sub = lambda a, b: add(a, neg(b))
        self.mul = mul
        self.inv = inv
        self.pow = power

    def _primitive_element(self, mul):
        qm1 = self.q - 1
        if qm1 == 1:
            return 1
        cofactors = [qm1 // r for r in _prime_factors(qm1)]
        for g in range(2 if self.n == 1 else 1, self.q):
            if all(self._slow_pow(mul, g, c) != 1 for c in cofactors):
                return g
        raise FieldError("no primitive element found; modulus is not irreducible")

    def _vector_mul_by(self, g, mulx, ints):
        """Array of g * v for every element code v (vectorized)."""
        p, n = self.p, self.n
        acc = np.zeros_like(ints)
        cur = ints
        for c in _to_digits(g, p, n):
            if c:
                if p == 2:
                    acc = acc ^ cur
                else:
                    acc = _vadd_digits(acc, _vscale_digits(cur, c, p, n), p, n)
            cur = mulx[cur]
        return acc

    def _init_tables(self):
        p, n, q = self.p, self.n, self.q
        ints = np.arange(q, dtype=np.int64)
        if p == 2:
            modint = _from_digits(self.modulus, 2)
            t = ints << 1
            mulx = np.where((t >> n) & 1, t ^ modint, t)
        else:
            top_w = p ** (n - 1)
            top = ints // top_w
            low = (ints % top_w) * p
            corr = np.array([_from_digits([(-t * m) % p for m in self.modulus[:n]], p)
                             for t in range(p)], dtype=np.int64)
            mulx = _vadd_digits(low, corr[top], p, n)
        g = self._primitive_element(self._slow_mul())
        self.generator = g
        mulg = self._vector_mul_by(g, mulx, ints).tolist()
        qm1 = q - 1
        exp = [0] * (2 * qm1)
        cur = 1
        for k in range(qm1):
            exp[k] = cur
            cur = mulg[cur]
        exp[qm1:] = exp[:qm1]
        log = [-1] * q
        for k in range(qm1):
            log[exp[k]] = k
        self._exp, self._log = exp, log
        exp_arr = np.array(exp, dtype=np.int64)
        log_arr = np.array(log, dtype=np.int64)
        if p == 2:
            zech_arr = np.zeros(1, dtype=np.int64)
            mode = MODE_CHAR2
        else:
            one_plus = _vadd_digits(exp_arr[:qm1], np.ones(qm1, dtype=np.int64), p, n)
            zech_arr = log_arr[one_plus]
            mode = MODE_ZECH
        self._zech = zech_arr.tolist()
        self.__dict__["kt"] = KernelTables(mode, p, qm1, exp_arr, log_arr, zech_arr)
        self._bind_table_ops()

    def _bind_table_ops(self):
        exp, log, zech = self._exp, self._log, self._zech
        qm1 = self.q - 1
        half = qm1 // 2

        if self.p == 2:
            def add(a, b):
                return a ^ b

            def neg(a):
                return a
        else:
            def add(a, b):
                if not a:
                    return b
                if not b:
                    return a
                la = log[a]
                k = log[b] - la
                if k < 0:
                    k += qm1
                z = zech[k]
                return 0 if z < 0 else exp[la + z]

            def neg(a):
                return exp[log[a] + half] if a else 0

        def mul(a, b):
            if not a or not b:
                return 0
            return exp[log[a] + log[b]]

        def inv(a):
            if not a:
                raise ZeroDivisionError("inverse of zero")
            return exp[qm1 - log[a]]

        def power(a, e):
            if not a:
                if e < 0:
                    raise ZeroDivisionError("inverse of zero")
                return 1 if e == 0 else 0
            return exp[(log[a] * e) % qm1]

        self.add = add
        self.neg = neg
        self.sub = lambda a, b: add(a, neg(b))
        self.mul = mul
        self.inv = inv
        self.pow = power

    # -- kernel tables --------------------------------------------------------

    @cached_property
    def kt(self):
        """Kernel tables (log/exp/Zech as int64 arrays)."""
        if not self.is_table:
            raise CapExceeded(f"GF({self.p}^{self.n}) exceeds the table cap "
                              f"{_config.TABLE_CAP}; vectorized kernels unavailable")
        # prime fields build tables lazily; extension fields did it in __init__
        p = self.p
        qm1 = p - 1
        g = 1 if p == 2 else self._primitive_element(self.mul)
        self.generator = g
        exp = np.empty(2 * qm1, dtype=np.int64)
        cur = 1
        for k in range(qm1):
            exp[k] = cur
            cur = cur * g % p
        exp[qm1:] = exp[:qm1]
        log = np.full(p, -1, dtype=np.int64)
        log[exp[:qm1]] = np.arange(qm1)
        mode = MODE_CHAR2 if p == 2 else MODE_PRIME
        return KernelTables(mode, p, qm1, exp, log, np.zeros(1, dtype=np.int64))

    @cached_property
    def primitive(self):
        """Least primitive element in code order."""
        if "generator" in self.__dict__:
            return self.generator
        return self._primitive_element(self.mul)

    # -- helpers ----------------------------------------------------------------

    def elem(self, v):
        return FieldElem(self, v)

    def from_coeffs(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) > self.n or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"invalid coefficient list {coeffs} for GF({self.p}^{self.n})")
        return _from_digits(coeffs, self.p)

    def to_coeffs(self, v):
        return _to_digits(v, self.p, self.n)

    def from_int(self, k):
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def frobenius(self, v):
        return self.pow(v, self.p)

    @property
    def gen(self):
        """Code of the class of x modulo the modulus."""
        return self.p if self.n > 1 else self.neg(self.modulus[0]) % self.p

    def elements(self):
        return range(self.q)

    def descriptor(self):
        return {"p": self.p, "n": self.n, "seed": self.seed}

    def __repr__(self):
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (make_field, (self.p, self.n, self.seed))


def _vadd_digits(a, b, p, n):
    out = np.zeros_like(a)
    w = 1
    for _ in range(n):
        out += ((a // w + b // w) % p) * w
        w *= p
    return out


def _vscale_digits(a, c, p, n):
    out = np.zeros_like(a)
    w = 1
    for _ in range(n):
        out += (((a // w) % p) * c % p) * w
        w *= p
    return out


_OFFSET_MIX = 0x9E3779B97F4A7C15


def make_field(p, n=1, seed=0):
    """Return the cached context for GF(p^n) selected by ``seed``.

    The modulus is the first irreducible monic polynomial of degree n met
    when walking the p**n candidates (lower coefficients as base-p digits)
    starting from an offset derived from ``seed``; seed 0 starts at 0.
    """
    return _make_field(int(p), int(n), int(seed))


@lru_cache(maxsize=None)
def _make_field(p, n, seed):
    if n < 1:
        raise FieldError(f"extension degree must be positive, got {n}")
    if p < 2 or not _is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if p**n > 2**_config.ELEMENT_BITS:
        raise CapExceeded(f"GF({p}^{n}) needs more than {_config.ELEMENT_BITS} bits per element")
    count = p**n
    offset = (seed * _OFFSET_MIX) % count if seed else 0
    if n == 1:
        return FieldCtx(p, 1, (offset, 1), seed)
    prime = make_field(p, 1, 0)
    for i in range(count):
        low = _to_digits((offset + i) % count, p, n)
        cand = low + [1]
        if low[0] != 0 and poly.is_irreducible(prime, cand):
            return FieldCtx(p, n, cand, seed)
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")  # pragma: no cover


def field_for_order(q, seed=0):
    """GF(q) for a prime power q."""
    from sympy import factorint

    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, n), = f.items()
    return make_field(p, n, seed)


def prime_power(q):
    """(p, e) with q == p**e, or raise FieldError."""
    from sympy import factorint

    f = factorint(q)
    if q < 2 or len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, e), = f.items()
    return p, e


def compositum(a, b):
    if a.p != b.p:
        raise ContextMismatch(f"{a} and {b} have different characteristic")
    if a.seed != b.seed:
        raise ContextMismatch(f"{a} and {b} come from different seeds")
    return make_field(a.p, lcm(a.n, b.n), a.seed)


def extension(ctx, k):
    """The degree-k extension of ctx in the same seed family."""
    return make_field(ctx.p, ctx.n * k, ctx.seed)


def field_with_at_least(ctx, size):
    """Smallest extension of ctx (same seed family) with at least ``size`` elements."""
    k = 1
    while ctx.p ** (ctx.n * k) < size:
        k += 1
    return extension(ctx, k)


# --------------------------------------------------------------------------
# embeddings
# --------------------------------------------------------------------------

class Embedding:
    """A field homomorphism src -> dst given by the image of src's generator."""

    def __init__(self, src, dst, gen_image):
        self.src = src
        self.dst = dst
        self.gen_image = gen_image
        self._powers = None
        self._table = None
        self._inverse = None

    def _gen_powers(self):
        if self._powers is None:
            d = self.dst
            pw = [1]
            for _ in range(self.src.n - 1):
                pw.append(d.mul(pw[-1], self.gen_image))
            self._powers = pw
        return self._powers

    def __call__(self, v):
        if self._table is not None:
            return self._table[v]
        if self.src.n == 1 or self.src is self.dst:
            return v
        d = self.dst
        acc = 0
        for c, pw in zip(_to_digits(v, self.src.p, self.src.n), self._gen_powers()):
            if c:
                acc = d.add(acc, d.mul(c, pw))
        return acc

    def table(self):
        """Full image list; only for small source fields."""
        if self._table is None:
            if self.src.q > _config.TABLE_CAP:
                raise CapExceeded(f"{self.src} too large to tabulate an embedding")
            self._table = [self(v) for v in range(self.src.q)]
        return self._table

    def array(self):
        return np.asarray(self.table(), dtype=np.int64)

    def preimage(self, w):
        """Element of src mapping to w, or None when w is not in the image."""
        if self._inverse is None:
            self._inverse = {y: x for x, y in enumerate(self.table())}
        return self._inverse.get(w)


_EMBEDDINGS = {}
_MAXIMAL = {}


def _apply_gen_image(F, C, r, v):
    """Image in C of v in F under the embedding sending F.gen to r."""
    if F.n == 1:
        return v
    acc = 0
    pw = 1
    for c in _to_digits(v, F.p, F.n):
        if c:
            acc = C.add(acc, C.mul(c, pw))
        pw = C.mul(pw, r)
    return acc


def _maximal_images(C):
    """Generator images of the maximal subfields of C, chosen compatibly."""
    if C.key in _MAXIMAL:
        return _MAXIMAL[C.key]
    from sympy import primefactors

    chosen = {}
    for ell in primefactors(C.n):
        k = C.n // ell
        if k == 1:
            continue
        F = make_field(C.p, k, C.seed)
        for r, _ in poly.roots(C, list(F.modulus)):
            if all(_agree(F, r, make_field(C.p, k2, C.seed), r2, C) for k2, r2 in chosen.items()):
                chosen[k] = r
                break
        else:  # pragma: no cover - excluded by Galois theory
            raise FieldError(f"internal: no compatible embedding of {F} into {C}")
    _MAXIMAL[C.key] = chosen
    return chosen


def _agree(F1, r1, F2, r2, C):
    g = gcd(F1.n, F2.n)
    if g == 1:
        return True
    S = make_field(C.p, g, C.seed)
    a = _apply_gen_image(F1, C, r1, _lattice(S, F1)(S.gen))
    b = _apply_gen_image(F2, C, r2, _lattice(S, F2)(S.gen))
    return a == b


def _lattice(A, C):
    key = (A.key, C.key)
    if key in _EMBEDDINGS:
        return _EMBEDDINGS[key]
    if A is C or A.n == 1:
        emb = Embedding(A, C, A.gen if A is C else 0)
    else:
        maxi = _maximal_images(C)
        k = min(k for k in maxi if k % A.n == 0)
        F = make_field(C.p, k, C.seed)
        inner = _lattice(A, F)
        emb = Embedding(A, C, _apply_gen_image(F, C, maxi[k], inner(A.gen)))
    _EMBEDDINGS[key] = emb
    return emb


def embedding(src, dst):
    """The cached homomorphism src -> dst.

    Within one seed family the maps are chosen compatibly (each field's
    maximal subfields get the first root of their modulus that agrees with
    the choices already made on common subfields), so composing embeddings
    along any chain gives the direct embedding. Across seed families the
    generator goes to the first root of src's modulus in dst.
    """
    if src is dst:
        return _lattice(src, dst)
    if src.p != dst.p:
        raise ContextMismatch(f"cannot embed {src} into {dst}: characteristics differ")
    if dst.n % src.n:
        raise ContextMismatch(f"cannot embed {src} into {dst}: {src.n} does not divide {dst.n}")
    if src.seed == dst.seed or src.n == 1:
        return _lattice(src, dst)
    key = (src.key, dst.key)
    if key not in _EMBEDDINGS:
        rts = poly.roots(dst, list(src.modulus))
        if not rts:  # pragma: no cover - impossible for irreducible moduli
            raise FieldError(f"internal: {src.modulus} has no root in {dst}")
        _EMBEDDINGS[key] = Embedding(src, dst, rts[0][0])
    return _EMBEDDINGS[key]


def embed(x, src, dst=None):
    """Embed a FieldElem (or a code of ``src``) into ``dst``.

    Called as ``embed(elem, dst)`` or ``embed(elem_or_code, src, dst)``.
    """
    if dst is None:
        src, dst = x.ctx, src
    if isinstance(x, FieldElem):
        if x.ctx is not src:
            raise ContextMismatch(f"element of {x.ctx} passed with source {src}")
        return FieldElem(dst, embedding(src, dst)(x.v))
    return embedding(src, dst)(x)


def root_of_unity(ctx, r):
    """Element of exact multiplicative order r, derived from ctx.primitive."""
    if r < 1 or (ctx.q - 1) % r:
        raise FieldError(f"{r} does not divide |{ctx}^*| = {ctx.q - 1}")
    return FieldElem(ctx, ctx.pow(ctx.primitive, (ctx.q - 1) // r))


class FieldElem:
    """An element of a FieldCtx with operator overloading.

    Integers mix in as elements of the prime subfield. Mixing two different
    fields raises ContextMismatch.
    """

    __slots__ = ("ctx", "v")

    def __init__(self, ctx, v):
        self.ctx = ctx
        self.v = int(v)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ContextMismatch(f"cannot combine elements of {self.ctx} and {other.ctx}")
            return other.v
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.ctx, self.ctx.add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.ctx, self.ctx.sub(self.v, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.ctx, self.ctx.sub(o, self.v))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.ctx, self.ctx.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(self.v, self.ctx.inv(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.ctx, self.ctx.mul(o, self.ctx.inv(self.v)))

    def __neg__(self):
        return FieldElem(self.ctx, self.ctx.neg(self.v))

    def __pow__(self, e):
        return FieldElem(self.ctx, self.ctx.pow(self.v, e))

    def inverse(self):
        return FieldElem(self.ctx, self.ctx.inv(self.v))

    def frobenius(self):
        return FieldElem(self.ctx, self.ctx.frobenius(self.v))

    def is_zero(self):
        return self.v == 0

    @property
    def coeffs(self):
        return self.ctx.to_coeffs(self.v)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.ctx is other.ctx and self.v == other.v
        if isinstance(other, int):
            return self.v == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.key, self.v))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"{self.ctx}({self.coeffs})"
