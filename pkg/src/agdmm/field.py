"""Exact arithmetic in small finite fields GF(p^e).

Elements are integer codes in [0, q): the element whose coefficient vector
over GF(p) is (d_0, ..., d_{e-1}), written in the power basis of the modulus
root, has code sum(d_i * p**i). Codes 0..p-1 are the prime subfield, so small
integers act as expected. All operations accept plain ints or numpy integer
arrays of codes and broadcast elementwise; scalar inputs give int outputs.

Fields are table-backed: construction finds a multiplicative generator and
precomputes exp/log/inverse tables, which keeps every operation a couple of
numpy lookups. This targets desk-scale q (a few thousand), not crypto sizes.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DivisionByZero, FieldNotMatchingU, NotPrime, ReducibleModulus

# table-backed contexts stop being reasonable well before this
_MAX_Q = 1 << 16


def is_prime(n):
    """Deterministic trial-division primality check, fine for desk-scale p."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_rem(num, den, p):
    """Remainder of num mod den over GF(p); den monic, coefficients low-first."""
    num = list(num)
    d = len(den) - 1
    for k in range(len(num) - 1, d - 1, -1):
        c = num[k]
        if c:
            num[k] = 0
            for i in range(d):
                num[k - d + i] = (num[k - d + i] - c * den[i]) % p
    return num[:d]


def _int_to_poly(k, p, deg):
    """Base-p digits of k as a coefficient list of length deg."""
    out = []
    for _ in range(deg):
        out.append(k % p)
        k //= p
    return out


def is_irreducible(coeffs, p):
    """Trial-division irreducibility test for a monic polynomial over GF(p)."""
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for k in range(p ** d):
            div = _int_to_poly(k, p, d) + [1]
            if not any(_poly_rem(coeffs, div, p)):
                return False
    return True


def _smallest_irreducible(p, e):
    """Monic irreducible of degree e whose non-leading coefficients, read as a
    little-endian base-p integer, are smallest. Deterministic by construction."""
    for k in range(p ** e):
        coeffs = _int_to_poly(k, p, e) + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # cannot happen


class Field:
    """Arithmetic context for GF(p^e).

    The context owns all lookup tables; elements themselves are plain integer
    codes, so values from different fields must never be mixed. Instances are
    immutable after construction and safe to share across threads.
    """

    def __init__(self, p, e=1, modulus=None):
        if not is_prime(p):
            raise NotPrime(f"p = {p} is not prime")
        if e < 1:
            raise ValueError(f"extension degree must be >= 1, got {e}")
        q = p ** e
        if q > _MAX_Q:
            raise ValueError(f"field size {q} exceeds table-backed limit {_MAX_Q}")
        if modulus is None:
            modulus = _smallest_irreducible(p, e)
        else:
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != e + 1 or modulus[-1] != 1:
                raise ReducibleModulus(
                    f"modulus must be monic of degree {e}, got {list(modulus)}")
            if not is_irreducible(list(modulus), p):
                raise ReducibleModulus(f"modulus {list(modulus)} is reducible over GF({p})")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = modulus
        self._build_tables()

    # -- construction ------------------------------------------------------

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        self._weights = p ** np.arange(e, dtype=np.int64)
        codes = np.arange(q, dtype=np.int64)
        digits = np.empty((q, e), dtype=np.int64)
        rest = codes.copy()
        for i in range(e):
            digits[:, i] = rest % p
            rest //= p
        self._digits = digits
        # rows of x^k mod modulus for k in [e, 2e-2], used to fold products
        red = np.zeros((max(e - 1, 0), e), dtype=np.int64)
        row = [(-c) % p for c in self.modulus[:e]]  # x^e
        for k in range(e - 1):
            red[k] = row
            carry = row[e - 1]
            row = [0] + row[:e - 1]
            if carry:
                for i in range(e):
                    row[i] = (row[i] + carry * red[0][i]) % p
        self._reduction = red
        self._neg = self._pack((p - digits) % p)
        self._find_generator()
        inv = np.zeros(q, dtype=np.int64)
        if q > 1:
            nz = self._exp
            inv[nz] = self._exp[(q - 1 - self._log[nz]) % (q - 1)]
        self._inv = inv

    def _pack(self, digit_array):
        return digit_array @ self._weights

    def _mul_scalar(self, a, b):
        # schoolbook digit convolution; only used while bootstrapping tables
        p, e = self.p, self.e
        da = self._digits[a]
        db = self._digits[b]
        conv = [0] * (2 * e - 1)
        for i in range(e):
            if da[i]:
                for j in range(e):
                    conv[i + j] = (conv[i + j] + da[i] * db[j]) % p
        for k in range(2 * e - 2, e - 1, -1):
            c = conv[k]
            if c:
                conv[k] = 0
                row = self._reduction[k - e]
                for i in range(e):
                    conv[i] = (conv[i] + c * row[i]) % p
        return int(np.dot(conv[:e], self._weights))

    def _find_generator(self):
        q = self.q
        if q == 2:
            self.generator = 1
            self._exp = np.array([1], dtype=np.int64)
            self._log = np.array([0, 0], dtype=np.int64)
            return
        for g in range(2, q):
            walk = [1]
            cur = g
            while cur != 1:
                walk.append(cur)
                cur = self._mul_scalar(cur, g)
            if len(walk) == q - 1:
                self.generator = g
                exp = np.array(walk, dtype=np.int64)
                log = np.zeros(q, dtype=np.int64)  # log[0] is a masked sentinel
                log[exp] = np.arange(q - 1)
                self._exp = exp
                self._log = log
                return
        raise AssertionError("no multiplicative generator found")  # cannot happen

    # -- element codecs ----------------------------------------------------

    def to_digits(self, code):
        """Coefficient vector over GF(p) for one element code."""
        return tuple(int(d) for d in self._digits[int(code)])

    def from_digits(self, digits):
        """Element code from a coefficient vector (length e, entries mod p)."""
        digits = [int(d) % self.p for d in digits]
        if len(digits) != self.e:
            raise ValueError(f"expected {self.e} digits, got {len(digits)}")
        return int(np.dot(digits, self._weights))

    def check_codes(self, a):
        """Validate that every entry of a is a legal element code."""
        arr = np.asarray(a)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"element codes must lie in [0, {self.q})")
        return arr.astype(np.int64)

    def elements(self):
        """All q element codes in canonical order."""
        return np.arange(self.q, dtype=np.int64)

    # -- arithmetic (broadcasts over numpy arrays) --------------------------

    @staticmethod
    def _ret(x):
        x = np.asarray(x)
        return int(x) if x.ndim == 0 else x

    def add(self, a, b):
        d = (self._digits[np.asarray(a)] + self._digits[np.asarray(b)]) % self.p
        return self._ret(self._pack(d))

    def sub(self, a, b):
        d = (self._digits[np.asarray(a)] - self._digits[np.asarray(b)]) % self.p
        return self._ret(self._pack(d))

    def neg(self, a):
        return self._ret(self._neg[np.asarray(a)])

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        zero = (a == 0) | (b == 0)
        idx = (self._log[a] + self._log[b]) % (self.q - 1)
        out = np.where(zero, 0, self._exp[idx])
        return self._ret(out)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise DivisionByZero("zero has no multiplicative inverse")
        return self._ret(self._inv[a])

    def pow(self, a, n):
        """a**n with n a non-negative integer exponent; 0**0 = 1."""
        n = int(n)
        if n < 0:
            raise ValueError("negative exponents are not supported; invert first")
        a = np.asarray(a)
        if n == 0:
            return self._ret(np.ones_like(a))
        idx = (self._log[a] * (n % (self.q - 1))) % (self.q - 1)
        out = np.where(a == 0, 0, self._exp[idx])
        return self._ret(out)

    # -- solvers used for place enumeration ---------------------------------

    def nth_roots(self, c, n):
        """All y in GF(q) with y**n == c, found by exhaustive scan.

        For c != 0 the count is 0 or gcd(n, q-1); for c == 0 the only root is 0.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        ys = self.elements()
        vals = self.pow(ys, n)
        return [int(y) for y in ys[vals == int(c)]]

    def trace_values(self, u):
        """Tr(y) = y + y^p + ... + y^(p^(u-1)) for every y, as an array."""
        if self.q != self.p ** u:
            raise FieldNotMatchingU(f"field has q = {self.q}, not {self.p}^{u}")
        ys = self.elements()
        total = np.zeros_like(ys)
        cur = ys
        for _ in range(u):
            total = self.add(total, cur)
            cur = self.pow(cur, self.p)
        return total

    def trace_preimages(self, u, target):
        """All y with Tr_{p^u/p}(y) == target; count is 0 or p^(u-1)."""
        vals = self.trace_values(u)
        return [int(y) for y in self.elements()[vals == int(target)]]

    # -- serialization and identity -----------------------------------------

    def to_json(self):
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["p"]), int(obj["e"]), obj["modulus"])

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus))

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.q})"
        return f"GF({self.p}^{self.e}; modulus={list(self.modulus)})"


def make_field(p, e=1, modulus=None):
    """Build a field context; picks the canonical modulus when none is given."""
    return Field(p, e, modulus)


def arith(field, op, a, b):
    """Dispatch one of the basic binary operations by name."""
    try:
        fn = {"add": field.add, "sub": field.sub, "mul": field.mul}[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)
