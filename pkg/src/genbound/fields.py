"""Exact coefficient fields with vectorised arithmetic.

Elements of a finite field F_q are encoded as integers in ``[0, q)``.  For a
prime field this is the residue itself; for an extension F_{p^m} the base-p
digits of the integer (least significant first) are the coefficients of a
polynomial of degree < m reduced modulo the field's defining polynomial.
Rational elements are :class:`fractions.Fraction` objects held in numpy
object arrays.

Every field exposes the same array-level interface (``add``, ``sub``, ``mul``,
``neg``, ``inv``, ``matmul`` ...) so that the linear algebra and the closure
engine are written once.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from .errors import UsageError

# Multiplication uses log/antilog tables up to this order; an addition table
# is kept up to ADD_TABLE_MAX.
LOG_TABLE_MAX = 1 << 16
ADD_TABLE_MAX = 1 << 10
MAX_EXT_DEGREE = 8


# ----------------------------------------------------------------------------
# polynomials over F_p, coefficient lists, lowest degree first

def _poly_trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _poly_trim(out)


def _poly_divmod(f, g, p):
    f = _poly_trim(f)
    g = _poly_trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(g[-1], p - 2, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    f = list(f)
    while len(f) >= len(g):
        c = (f[-1] * inv_lead) % p
        shift = len(f) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        f = _poly_trim(f)
    return _poly_trim(q), f


def _poly_mod(f, g, p):
    return _poly_divmod(f, g, p)[1]


def _poly_sub(f, g, p):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _poly_trim([(a - b) % p for a, b in zip(f, g)])


def _poly_gcd(f, g, p):
    f, g = _poly_trim(f), _poly_trim(g)
    while g:
        f, g = g, _poly_mod(f, g, p)
    return f


def _poly_powmod(base, e, mod, p):
    result = [1]
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), mod, p)
        base = _poly_mod(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def is_irreducible(coeffs, p) -> bool:
    """Ben-Or test: a degree-m polynomial over F_p is irreducible iff
    gcd(x^(p^i) - x, f) = 1 for every i <= m/2."""
    f = _poly_trim([c % p for c in coeffs])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(m // 2):
        xp = _poly_powmod(xp, p, f, p)
        if len(_poly_gcd(f, _poly_sub(xp, x, p), p)) > 1:
            return False
    return True


def _int_to_digits(e, p, m):
    out = []
    for _ in range(m):
        e, d = divmod(e, p)
        out.append(d)
    return out


def _digits_to_int(digits, p):
    v = 0
    for d in reversed(digits):
        v = v * p + d
    return v


def check_prime(p) -> int:
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise UsageError(f"field characteristic must be an integer, got {p!r}")
    p = int(p)
    if p < 2 or p >= 2**31 or not sympy.isprime(p):
        raise UsageError(f"{p} is not a prime below 2^31")
    return p


# ----------------------------------------------------------------------------

class Field:
    """Common interface; see module docstring for the element encoding."""

    kind: str
    is_finite: bool = True

    # scalar conveniences, rarely in hot paths
    def from_int(self, k: int):
        """Image of the integer k under Z -> field."""
        return np.int64(int(k) % self.p)

    def zero(self):
        return self.asarray(0)[()]

    def one(self):
        return self.asarray(1)[()]

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def sum(self, a, axis):
        a = np.moveaxis(np.asarray(a), axis, 0)
        out = self.zeros(a.shape[1:])
        for x in a:
            out = self.add(out, x)
        return out

    def matmul(self, a, b):
        """Field matrix product over the last axis of ``a`` and the
        second-to-last axis of ``b`` (numpy broadcasting rules)."""
        a = np.asarray(a)
        b = np.asarray(b)
        if a.ndim == 1:
            return self.matmul(a[None, :], b)[..., 0, :]
        if b.ndim == 1:
            return self.matmul(a, b[:, None])[..., 0]
        out = None
        for k in range(a.shape[-1]):
            term = self.mul(a[..., :, k:k + 1], b[..., k:k + 1, :])
            out = term if out is None else self.add(out, term)
        if out is None:
            shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
            out = self.zeros(shape)
        return out

    def power(self, a, e: int):
        a = np.asarray(a)
        result = self.asarray(np.ones(a.shape, dtype=np.int64)) if self.is_finite else \
            self.asarray(np.full(a.shape, 1, dtype=object))
        base = a
        if e < 0:
            base = self.inv(base)
            e = -e
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def random(self, rng, shape):
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    def check(self, a):
        """Raise UsageError unless every entry encodes an element of this field."""
        a = np.asarray(a)
        if a.dtype == object or not np.issubdtype(a.dtype, np.integer):
            raise UsageError(f"entries are not elements of {self}")
        if a.size and (a.min() < 0 or a.max() >= self.q):
            raise UsageError(f"entries out of range for {self}")
        return a


@dataclass(frozen=True)
class PrimeField(Field):
    p: int
    kind = "prime"

    def __post_init__(self):
        check_prime(self.p)

    @property
    def m(self):
        return 1

    @property
    def q(self):
        return self.p

    @property
    def char(self):
        return self.p

    @property
    def modulus(self):
        return (0, 1)

    def __str__(self):
        return f"GF({self.p})"

    def asarray(self, data):
        a = np.asarray(data)
        if a.dtype == object or a.dtype.kind in "US":
            flat = [self._reduce(x) for x in a.reshape(-1)]
            return np.array(flat, dtype=np.int64).reshape(a.shape)
        if not np.issubdtype(a.dtype, np.integer):
            raise UsageError("floating-point entries are not exact")
        return np.mod(a.astype(np.int64), self.p)

    def _reduce(self, x) -> int:
        fr = _to_fraction(x)
        if fr.denominator % self.p == 0:
            raise UsageError(f"{x} has no image in {self}")
        return fr.numerator * pow(fr.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return np.mod(np.add(a, b), self.p)

    def sub(self, a, b):
        return np.mod(np.subtract(a, b), self.p)

    def neg(self, a):
        return np.mod(np.negative(a), self.p)

    def mul(self, a, b):
        # p < 2^31, so products of residues fit in int64
        return np.mod(np.multiply(a, b), self.p)

    @functools.cached_property
    def _inv_table(self):
        if self.p > (1 << 20):
            return None
        t = np.zeros(self.p, dtype=np.int64)
        t[1:] = [pow(x, -1, self.p) for x in range(1, self.p)]
        return t

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self.power(a, self.p - 2)

    def matmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        k = a.shape[-1]
        bound = k * (self.p - 1) ** 2
        if bound < 2**53:
            out = np.matmul(a.astype(np.float64), b.astype(np.float64))
            return np.fmod(out, self.p).astype(np.int64)
        if bound < 2**63:
            return np.mod(np.matmul(a, b), self.p)
        return Field.matmul(self, a, b)


@dataclass(frozen=True)
class ExtensionField(Field):
    p: int
    m: int
    modulus: tuple
    kind = "extension"

    def __post_init__(self):
        check_prime(self.p)
        if not (1 <= self.m <= MAX_EXT_DEGREE):
            raise UsageError(f"extension degree {self.m} outside 1..{MAX_EXT_DEGREE}")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise UsageError("modulus must be monic of degree m (coefficients lowest first)")
        if not is_irreducible(mod, self.p):
            raise UsageError(f"modulus {mod} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self):
        return self.p ** self.m

    @property
    def char(self):
        return self.p

    def __str__(self):
        return f"GF({self.p}^{self.m})"

    # scalar polynomial arithmetic on encoded ints
    def _mul_scalar(self, a: int, b: int) -> int:
        f = _poly_mul(_int_to_digits(a, self.p, self.m), _int_to_digits(b, self.p, self.m), self.p)
        r = _poly_mod(f, list(self.modulus), self.p)
        return _digits_to_int(r + [0] * (self.m - len(r)), self.p)

    def _add_scalar(self, a: int, b: int) -> int:
        da = _int_to_digits(a, self.p, self.m)
        db = _int_to_digits(b, self.p, self.m)
        return _digits_to_int([(x + y) % self.p for x, y in zip(da, db)], self.p)

    @functools.cached_property
    def _tables(self):
        q = self.q
        if q > LOG_TABLE_MAX:
            return None
        order = q - 1
        primes = sympy.primefactors(order) if order > 1 else []

        def spow(g, e):
            r = 1
            while e:
                if e & 1:
                    r = self._mul_scalar(r, g)
                g = self._mul_scalar(g, g)
                e >>= 1
            return r

        for g in range(1, q):
            if all(spow(g, order // ell) != 1 for ell in primes):
                break
        exp = np.zeros(2 * order + 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        cur = 1
        for k in range(order):
            exp[k] = cur
            log[cur] = k
            cur = self._mul_scalar(cur, g)
        exp[order:2 * order] = exp[:order]
        return exp, log

    @functools.cached_property
    def _powers(self):
        return np.array([self.p ** i for i in range(self.m)], dtype=np.int64)

    def _digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._powers) % self.p

    def _undigits(self, d):
        return (np.asarray(d, dtype=np.int64) * self._powers).sum(axis=-1)

    @functools.cached_property
    def _add_table(self):
        if self.q > ADD_TABLE_MAX:
            return None
        e = np.arange(self.q)
        return self._undigits((self._digits(e)[:, None, :] + self._digits(e)[None, :, :]) % self.p)

    @functools.cached_property
    def _neg_table(self):
        return self._undigits((-self._digits(np.arange(self.q))) % self.p)

    def asarray(self, data):
        a = np.asarray(data)
        if a.dtype == object:
            a = a.astype(np.int64)
        return self.check(a.astype(np.int64))

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._undigits((self._digits(a) + self._digits(b)) % self.p)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a.copy()
        if self.q <= LOG_TABLE_MAX:
            return self._neg_table[a]
        return self._undigits((-self._digits(a)) % self.p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._tables is None:
            return np.frompyfunc(self._mul_scalar, 2, 1)(a, b).astype(np.int64)
        exp, log = self._tables
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self._tables is None:
            return self.power(a, self.q - 2)
        exp, log = self._tables
        return exp[(self.q - 1 - log[a]) % (self.q - 1)]


@dataclass(frozen=True)
class RationalField(Field):
    kind = "rational"
    is_finite = False

    @property
    def q(self):
        return None

    @property
    def char(self):
        return 0

    @property
    def p(self):
        return None

    @property
    def m(self):
        return None

    def __str__(self):
        return "QQ"

    def from_int(self, k: int):
        return Fraction(int(k))

    def asarray(self, data):
        a = np.asarray(data, dtype=object)
        out = np.empty(a.shape, dtype=object)
        flat = out.reshape(-1)
        for i, x in enumerate(a.reshape(-1)):
            flat[i] = _to_fraction(x)
        return out

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def add(self, a, b):
        return np.add(a, b, dtype=object)

    def sub(self, a, b):
        return np.subtract(a, b, dtype=object)

    def neg(self, a):
        return np.negative(np.asarray(a, dtype=object))

    def mul(self, a, b):
        return np.multiply(a, b, dtype=object)

    def inv(self, a):
        a = np.asarray(a, dtype=object)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return np.divide(Fraction(1), a, dtype=object)

    def matmul(self, a, b):
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        if a.shape[-1] == 0:
            return Field.matmul(self, a, b)
        return np.matmul(a, b)

    def random(self, rng, shape, height=1):
        vals = rng.integers(-height, height + 1, size=shape)
        return self.asarray(vals.astype(object))

    def elements(self):
        raise UsageError("QQ is infinite")

    def check(self, a):
        a = np.asarray(a)
        if a.dtype != object or not all(isinstance(x, Fraction) for x in a.reshape(-1)):
            raise UsageError("entries are not elements of QQ")
        return a


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        raise UsageError("floating-point entries are not exact; pass integers or rational strings")
    return Fraction(int(x))


QQ = RationalField()


def prime_field(p: int) -> PrimeField:
    return PrimeField(check_prime(p))


@functools.lru_cache(maxsize=None)
def make_extension(p: int, m: int) -> Field:
    """Field of order p^m with the lexicographically smallest monic
    irreducible modulus (coefficient tuple read as a base-p integer, lowest
    degree least significant).  ``m = 1`` gives the prime field, modulus x."""
    p = check_prime(p)
    if not isinstance(m, (int, np.integer)) or not (1 <= m <= MAX_EXT_DEGREE):
        raise UsageError(f"extension degree must lie in 1..{MAX_EXT_DEGREE}, got {m!r}")
    m = int(m)
    if m == 1:
        return PrimeField(p)
    for code in range(p ** m):
        coeffs = _int_to_digits(code, p, m) + [1]
        if is_irreducible(coeffs, p):
            return ExtensionField(p, m, tuple(coeffs))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def field_from_params(p=None, m=1, rational=False) -> Field:
    if rational:
        return QQ
    if p is None:
        raise UsageError("either a prime p or the rational field is required")
    return make_extension(int(p), int(m))


def same_field(a: Field, b: Field) -> bool:
    return a == b


def embedding(small: Field, big: Field) -> np.ndarray:
    """Lookup array sending each element code of ``small`` to its image in
    ``big``.  Requires both finite, same characteristic, deg(small) | deg(big).
    The image of the generator x is the smallest root of small's modulus."""
    if not (small.is_finite and big.is_finite):
        raise UsageError("embeddings are only defined between finite fields")
    if small.p != big.p or big.m % small.m:
        raise UsageError(f"{small} does not embed in {big}")
    if small.m == 1:
        return np.arange(small.p, dtype=np.int64)
    if small == big:
        return np.arange(small.q, dtype=np.int64)
    cand = big.elements()
    acc = big.zeros(cand.shape)
    for c in reversed(small.modulus):
        acc = big.add(big.mul(acc, cand), np.full(cand.shape, c, dtype=np.int64))
    roots = cand[acc == 0]
    if roots.size == 0:  # pragma: no cover - impossible when m_small | m_big
        raise UsageError(f"{small} does not embed in {big}")
    beta = roots[0]
    beta_pows = [np.int64(1)]
    for _ in range(small.m - 1):
        beta_pows.append(big.mul(beta_pows[-1], beta))
    digits = (small.elements()[:, None] // np.array([small.p ** i for i in range(small.m)])) % small.p
    out = big.zeros(small.q)
    for i in range(small.m):
        out = big.add(out, big.mul(digits[:, i], beta_pows[i]))
    return out


def extension_of(base: Field, degree: int) -> Field:
    """The field F_{q^degree} for base = F_q, using the deterministic moduli."""
    if not base.is_finite:
        raise UsageError("extensions are only taken of finite fields")
    return make_extension(base.p, base.m * degree)
