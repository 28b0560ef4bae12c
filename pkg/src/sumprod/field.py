"""Finite fields F_q = F_p[t]/(modulus) with dense integer element indices.

An element with coefficient vector (c_0, ..., c_{l-1}) is stored as the integer
c_0 + c_1 p + ... + c_{l-1} p^(l-1).  Index 0 is zero and index 1 is one.  All
arithmetic methods on :class:`FieldSpec` accept Python ints or integer numpy
arrays and broadcast like numpy ufuncs.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DegreeOutOfRange,
    DivisionByZero,
    FieldTooLarge,
    NonPrime,
    ReducibleModulus,
)

DEFAULT_CAP = 2**20


def default_cap() -> int:
    """Largest permitted q; the SUMPROD_CAP environment variable overrides it."""
    env = os.environ.get("SUMPROD_CAP")
    return int(env) if env else DEFAULT_CAP


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# Polynomials over F_p: coefficient lists, lowest degree first, no trailing zeros.


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_mod(a, m, p):
    """Remainder of a modulo m; m need not be monic."""
    a = list(a)
    _trim(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * c) % p
        _trim(a)
    return a


def _poly_powmod(a, e, m, p):
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(coeffs, p: int) -> bool:
    """Rabin's irreducibility test for a polynomial over F_p (lowest degree first)."""
    f = _trim([c % p for c in coeffs])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    for r in prime_factors(n):
        h = _poly_sub(_poly_powmod(x, p ** (n // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return not _poly_sub(_poly_powmod(x, p**n, f, p), x, p)


def encode(coeffs, p: int) -> int:
    return sum(int(c) * p**i for i, c in enumerate(coeffs))


def decode(index: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        index, r = divmod(index, p)
        out.append(r)
    return out


def _check_params(p, l, cap):
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if l < 1:
        raise DegreeOutOfRange(f"extension degree must be >= 1, got {l}")
    cap = default_cap() if cap is None else cap
    if p**l > cap:
        raise FieldTooLarge(f"q = {p}^{l} exceeds the cap {cap}")


def make_field(p: int, l: int = 1, cap: int | None = None) -> FieldSpec:
    """Build F_{p^l} using the monic irreducible modulus of smallest encoding."""
    _check_params(p, l, cap)
    for low in range(p**l):
        coeffs = decode(low, p, l) + [1]
        if is_irreducible(coeffs, p):
            return FieldSpec(p, l, tuple(coeffs), cap=cap)
    raise AssertionError("no irreducible polynomial found")  # unreachable


_FIELD_RE = re.compile(r"^\s*(\d+)(?:\^(\d+))?(?:/(\d+))?\s*$")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    l: int
    modulus: tuple
    cap: int | None = None

    def __post_init__(self):
        _check_params(self.p, self.l, self.cap)
        mod = tuple(int(c) for c in self.modulus)
        if len(mod) != self.l + 1 or mod[-1] != 1:
            raise ReducibleModulus(f"modulus must be monic of degree {self.l}")
        if any(not 0 <= c < self.p for c in mod):
            raise ReducibleModulus("modulus coefficients out of range")
        if not is_irreducible(mod, self.p):
            raise ReducibleModulus(f"modulus {mod} is reducible over F_{self.p}")
        object.__setattr__(self, "modulus", mod)

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.l, self.modulus) == (other.p, other.l, other.modulus)

    def __hash__(self):
        return hash((self.p, self.l, self.modulus))

    @property
    def q(self) -> int:
        return self.p**self.l

    @property
    def modulus_encoding(self) -> int:
        return encode(self.modulus, self.p)

    def __str__(self):
        return f"{self.p}^{self.l}/{self.modulus_encoding}"

    def __repr__(self):
        return f"FieldSpec('{self}')"

    @classmethod
    def parse(cls, text: str, cap: int | None = None) -> FieldSpec:
        """Parse "p", "p^l" or "p^l/modulus-encoding"."""
        m = _FIELD_RE.match(text)
        if not m:
            raise ValueError(f"bad field description {text!r}")
        p, l = int(m.group(1)), int(m.group(2) or 1)
        if m.group(3) is None:
            return make_field(p, l, cap=cap)
        enc = int(m.group(3))
        coeffs = decode(enc, p, l + 1)
        if encode(coeffs, p) != enc:
            raise ReducibleModulus(f"encoding {enc} does not describe a degree-{l} polynomial")
        return cls(p, l, tuple(coeffs), cap=cap)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # digit vectors

    @cached_property
    def _powers(self):
        return np.array([self.p**i for i in range(self.l)], dtype=np.int64)

    def digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        out = np.empty(a.shape + (self.l,), dtype=np.int64)
        for i in range(self.l):
            a, out[..., i] = np.divmod(a, self.p)
        return out

    def from_digits(self, d) -> np.ndarray:
        return np.asarray(d, dtype=np.int64) @ self._powers

    # scalar kernels used to build the tables

    def _smul(self, a: int, b: int) -> int:
        if self.l == 1:
            return a * b % self.p
        prod = _poly_mul(decode(a, self.p, self.l), decode(b, self.p, self.l), self.p)
        return encode(_poly_mod(prod, self.modulus, self.p), self.p)

    def _spow(self, a: int, e: int) -> int:
        if self.l == 1:
            return pow(a, e, self.p)
        result, base = 1, a
        while e:
            if e & 1:
                result = self._smul(result, base)
            base = self._smul(base, base)
            e >>= 1
        return result

    def mul_matrix(self, c: int) -> np.ndarray:
        """Matrix of x -> c*x acting on coefficient vectors (column j = c*t^j)."""
        cols = [decode(self._smul(c, self.p**j), self.p, self.l) for j in range(self.l)]
        return np.array(cols, dtype=np.int64).T

    def _scale(self, arr, c):
        if self.l == 1:
            return arr * c % self.p
        return self.from_digits(self.digits(arr) @ self.mul_matrix(c).T % self.p)

    @cached_property
    def primitive_element(self) -> int:
        n = self.q - 1
        factors = prime_factors(n)
        for g in range(1, self.q):
            if all(self._spow(g, n // r) != 1 for r in factors):
                return g
        raise AssertionError("multiplicative group is not cyclic")  # unreachable

    @cached_property
    def exp_table(self) -> np.ndarray:
        g = self.primitive_element
        n = self.q - 1
        table = np.array([1], dtype=np.int64)
        while len(table) < n:
            step = self._spow(g, len(table))
            table = np.concatenate([table, self._scale(table, step)])
        table = table[:n]
        table.setflags(write=False)
        return table

    @cached_property
    def log_table(self) -> np.ndarray:
        log = np.zeros(self.q, dtype=np.int64)
        log[self.exp_table] = np.arange(self.q - 1)
        log.setflags(write=False)
        return log

    @cached_property
    def trace_vector(self) -> np.ndarray:
        """Tr(t^j) for j < l; the trace is F_p-linear in the coefficients."""
        tau = [int(np.trace(self.mul_matrix(self.p**j))) % self.p for j in range(self.l)]
        return np.array(tau, dtype=np.int64)

    @cached_property
    def _roots(self):
        return np.exp(2j * np.pi * np.arange(self.p) / self.p)

    # vectorized arithmetic

    def add(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.l == 1:
            out = (a + b) % self.p
        else:
            out = self.from_digits((self.digits(a) + self.digits(b)) % self.p)
        return _box(out)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.l == 1:
            out = -a % self.p
        else:
            out = self.from_digits(-self.digits(a) % self.p)
        return _box(out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.l == 1:
            return _box(a * b % self.p)
        log = self.log_table
        out = self.exp_table[(log[a] + log[b]) % (self.q - 1)]
        return _box(np.where((a == 0) | (b == 0), 0, out))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("0 has no multiplicative inverse")
        return _box(self.exp_table[-self.log_table[a] % (self.q - 1)])

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return _box(np.ones_like(a))
        if e < 0:
            a, e = np.asarray(self.inv(a)), -e
        out = self.exp_table[self.log_table[a] * (e % (self.q - 1)) % (self.q - 1)]
        return _box(np.where(a == 0, 0, out))

    def trace(self, a):
        """Absolute trace Tr(a) = a + a^p + ... + a^(p^(l-1)), as an integer in [0, p)."""
        a = np.asarray(a, dtype=np.int64)
        if self.l == 1:
            return _box(a.copy())
        return _box(self.digits(a) @ self.trace_vector % self.p)

    def character(self, a):
        """Canonical additive character exp(2 pi i Tr(a) / p)."""
        out = self._roots[np.asarray(self.trace(a))]
        return complex(out) if np.ndim(out) == 0 else out

    def subfield(self, d: int) -> np.ndarray:
        """Elements of the copy of F_{p^d} inside this field (fixed points of x -> x^(p^d))."""
        if d < 1 or self.l % d:
            raise ValueError(f"subfield degree {d} does not divide {self.l}")
        x = self.elements()
        return x[np.asarray(self.pow(x, self.p**d)) == x]


def _box(out):
    return int(out) if np.ndim(out) == 0 else out


def trace_by_frobenius(F: FieldSpec, a: int) -> int:
    """Tr(a) as the literal Frobenius sum; slow, kept as a cross-check."""
    total, x = 0, int(a)
    for _ in range(F.l):
        total = F.add(total, x)
        x = F._spow(x, F.p)
    if total >= F.p:
        raise AssertionError("trace left the prime subfield")
    return total


_OPS = {"add": 2, "sub": 2, "mul": 2, "inv": 1, "neg": 1}


def field_arith(F: FieldSpec, op: str, a, b=None):
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    fn = getattr(F, op)
    return fn(a, b) if _OPS[op] == 2 else fn(a)


def char_value(F: FieldSpec, a):
    return F.character(a)


def trace(F: FieldSpec, a):
    return F.trace(a)
