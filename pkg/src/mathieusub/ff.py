"""Finite fields GF(p^k) with integer-coded elements.

An element of GF(p^k) is stored as the integer ``sum(c_i * p**i)`` where
``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` is its residue modulo the field's
defining polynomial.  Integer order on these codes is the canonical
enumeration order used everywhere a "first" element is selected.

Fields with at most ``2**16`` elements carry log/exp tables and digit
tables so that array arithmetic is fully vectorized; larger fields fall
back to scalar polynomial arithmetic.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint, isprime

MAX_DEGREE = 8
MAX_ORDER = 1 << 62
TABLE_LIMIT = 1 << 16
KERNEL_TABLE_LIMIT = 1024


class FieldError(ValueError):
    """Invalid field construction or field spec."""


class FieldMismatchError(ValueError):
    """Operands belong to different fields."""


class FieldZeroDivisionError(ZeroDivisionError):
    """Inversion of the zero element."""


# -- polynomials over GF(p), coefficient lists low -> high -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _poly_powmod(a: Sequence[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Ben-Or test: monic ``poly`` has no factor of degree <= deg/2."""
    poly = list(poly)
    k = len(poly) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(k // 2):
        power = _poly_powmod(power, p, poly, p)
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(poly, _trim(diff), p)
        if len(g) > 1:
            return False
    return True


def _digits(code: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _undigits(digits: Iterable[int], p: int) -> int:
    code = 0
    for d in reversed(list(digits)):
        code = code * p + d
    return code


# -- field descriptor --------------------------------------------------------

@dataclass(frozen=True)
class Field:
    """GF(p^k) descriptor.  Build with :func:`make_field`, not directly."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.k

    q = order

    @property
    def characteristic(self) -> int:
        return self.p

    def __repr__(self) -> str:
        return f"GF({self.spec})"

    @property
    def spec(self) -> str:
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    @property
    def tabled(self) -> bool:
        return self.order <= TABLE_LIMIT

    @property
    def _modular(self) -> bool:
        return self.k == 1 and self.p < (1 << 31)

    # -- tables ------------------------------------------------------------

    @cached_property
    def _pw(self) -> np.ndarray:
        return self.p ** np.arange(self.k, dtype=np.int64)

    @cached_property
    def _digit_table(self) -> np.ndarray:
        codes = np.arange(self.order, dtype=np.int64)
        return (codes[:, None] // self._pw[None, :]) % self.p

    @cached_property
    def _log_exp(self) -> tuple[np.ndarray, np.ndarray, int]:
        """Discrete log/exp tables w.r.t. the first generator in code order."""
        q = self.order
        gen = self._first_generator()
        exp = np.empty(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_scalar_slow(x, gen)
        exp[q - 1:] = exp[: q - 1]
        return log, exp, gen

    def _first_generator(self) -> int:
        q = self.order
        if q == 2:
            return 1
        primes = list(factorint(q - 1))
        for g in range(2, q):
            if all(self._pow_scalar_slow(g, (q - 1) // r) != 1 for r in primes):
                return g
        raise AssertionError("multiplicative group has no generator")

    @cached_property
    def kernel_tables(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Full ``q x q`` addition and multiplication tables, or None if too big."""
        q = self.order
        if q > KERNEL_TABLE_LIMIT:
            return None
        a = np.arange(q, dtype=np.int64)
        add_t = self.add(a[:, None], a[None, :]).astype(np.int64)
        mul_t = self.mul(a[:, None], a[None, :]).astype(np.int64)
        return np.ascontiguousarray(add_t), np.ascontiguousarray(mul_t)

    # -- scalar arithmetic on codes ----------------------------------------

    def _mul_scalar_slow(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        prod = _poly_mod(_poly_mul(_digits(a, self.p, self.k), _digits(b, self.p, self.k), self.p),
                         self.modulus, self.p)
        return _undigits(prod, self.p)

    def _pow_scalar_slow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._mul_scalar_slow(result, base)
            base = self._mul_scalar_slow(base, base)
            e >>= 1
        return result

    def add_scalar(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p, k = self.p, self.k
        return _undigits([(x + y) % p for x, y in zip(_digits(a, p, k), _digits(b, p, k))], p)

    def neg_scalar(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        p, k = self.p, self.k
        return _undigits([-x % p for x in _digits(a, p, k)], p)

    def sub_scalar(self, a: int, b: int) -> int:
        return self.add_scalar(a, self.neg_scalar(b))

    def mul_scalar(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        if self.tabled:
            log, exp, _ = self._log_exp
            return int(exp[log[a] + log[b]])
        return self._mul_scalar_slow(a, b)

    def inv_scalar(self, a: int) -> int:
        if a == 0:
            raise FieldZeroDivisionError(f"inverse of zero in {self!r}")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self.tabled:
            log, exp, _ = self._log_exp
            return int(exp[(-log[a]) % (self.order - 1)])
        return self._pow_scalar_slow(a, self.order - 2)

    def pow_scalar(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv_scalar(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        if self.tabled:
            log, exp, _ = self._log_exp
            return int(exp[(int(log[a]) * e) % (self.order - 1)])
        return self._pow_scalar_slow(a, e)

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise FieldZeroDivisionError("zero has no multiplicative order")
        n = self.order - 1
        if self.tabled:
            log, _, _ = self._log_exp
            return n // math.gcd(int(log[a]), n)
        order = n
        for r, e in factorint(n).items():
            for _ in range(e):
                if self.pow_scalar(a, order // r) == 1:
                    order //= r
                else:
                    break
        return order

    # -- vectorized arithmetic on int64 code arrays ------------------------

    def _generic(self, fn, *arrays):
        out = np.frompyfunc(fn, len(arrays), 1)(*arrays)
        return np.asarray(out, dtype=np.int64)

    def add(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._modular:
            return (a + b) % self.p
        if self.tabled:
            d = self._digit_table
            return ((d[a] + d[b]) % self.p) @ self._pw
        return self._generic(self.add_scalar, a, b)

    def neg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self._modular:
            return (-a) % self.p
        if self.tabled:
            return ((-self._digit_table[a]) % self.p) @ self._pw
        return self._generic(self.neg_scalar, a)

    def sub(self, a, b) -> np.ndarray:
        return self.add(a, self.neg(b))

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._modular:
            return (a * b) % self.p
        if self.tabled:
            log, exp, _ = self._log_exp
            out = exp[np.where(a == 0, 0, log[a]) + np.where(b == 0, 0, log[b])]
            return np.where((a == 0) | (b == 0), 0, out)
        return self._generic(self.mul_scalar, a, b)

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldZeroDivisionError(f"inverse of zero in {self!r}")
        return self._generic(self.inv_scalar, a)

    def sum(self, a, axis=None) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self._modular:
            return np.sum(a % self.p, axis=axis) % self.p
        if self.tabled:
            d = self._digit_table[a]
            if axis is None:
                return (d.reshape(-1, self.k).sum(axis=0) % self.p) @ self._pw
            ax = axis if axis >= 0 else a.ndim + axis
            return (d.sum(axis=ax) % self.p) @ self._pw
        def fold(row):
            return functools.reduce(self.add_scalar, (int(x) for x in row), 0)
        if axis is None:
            return np.int64(fold(a.ravel()))
        return np.apply_along_axis(fold, axis, a).astype(np.int64)

    def scatter_sum(self, values, targets, size: int) -> np.ndarray:
        """Field sum of ``values`` grouped by integer ``targets`` in ``[0, size)``."""
        values = np.asarray(values, dtype=np.int64).ravel()
        targets = np.asarray(targets, dtype=np.int64).ravel()
        if self._modular:
            out = np.zeros(size, dtype=np.int64)
            np.add.at(out, targets, values)
            return out % self.p
        if self.tabled:
            d = self._digit_table[values]
            acc = np.zeros((size, self.k), dtype=np.int64)
            np.add.at(acc, targets, d)
            return (acc % self.p) @ self._pw
        out = [0] * size
        for v, t in zip(values.tolist(), targets.tolist()):
            out[t] = self.add_scalar(out[t], v)
        return np.asarray(out, dtype=np.int64)

    # -- element helpers ---------------------------------------------------

    def __call__(self, value: int | str | Sequence[int]) -> "FieldElem":
        if isinstance(value, str):
            return FieldElem(self, self.parse(value))
        if isinstance(value, (list, tuple)):
            if len(value) > self.k or any(not 0 <= c < self.p for c in value):
                raise FieldError(f"bad coefficient vector {value!r} for {self!r}")
            return FieldElem(self, _undigits(value, self.p))
        value = int(value)
        if self.k == 1:
            return FieldElem(self, value % self.p)
        if not 0 <= value < self.order:
            raise FieldError(f"code {value} out of range for {self!r}")
        return FieldElem(self, value)

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    def elements(self) -> Iterable["FieldElem"]:
        """All elements in canonical enumeration order."""
        for code in range(self.order):
            yield FieldElem(self, code)

    def coeffs(self, code: int) -> tuple[int, ...]:
        return tuple(_digits(code, self.p, self.k))

    def format(self, code: int) -> str:
        """Literal for ``code``: decimal for prime fields, k base-p digits otherwise."""
        if self.k == 1:
            return str(int(code))
        digits = _digits(int(code), self.p, self.k)[::-1]
        if self.p <= 10:
            return "".join(str(d) for d in digits)
        return ":".join(str(d) for d in digits)

    def parse(self, text: str) -> int:
        """Inverse of :meth:`format`; prime-field literals may be any integer."""
        text = text.strip()
        if self.k == 1:
            try:
                return int(text) % self.p
            except ValueError:
                raise FieldError(f"bad field element {text!r} for {self!r}") from None
        negate = text.startswith("-")
        body = text[1:] if negate else text
        parts = body.split(":") if ":" in body else list(body)
        try:
            digits = [int(s) for s in parts]
        except ValueError:
            raise FieldError(f"bad field element {text!r} for {self!r}") from None
        if len(digits) != self.k or any(not 0 <= d < self.p for d in digits):
            raise FieldError(f"field element {text!r} needs {self.k} base-{self.p} digits")
        code = _undigits(digits[::-1], self.p)
        return self.neg_scalar(code) if negate else code


@functools.cache
def make_field(p: int, k: int = 1) -> Field:
    """GF(p^k) with the smallest monic irreducible modulus in code order."""
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise FieldError(f"characteristic {p!r} is not prime")
    if not isinstance(k, int) or not 1 <= k <= MAX_DEGREE:
        raise FieldError(f"extension degree {k!r} outside [1, {MAX_DEGREE}]")
    if p ** k >= MAX_ORDER:
        raise FieldError(f"field order {p}^{k} too large")
    if k == 1:
        return Field(p, 1, (0, 1))
    for tail in range(p ** k):
        poly = _digits(tail, p, k) + [1]
        if poly[0] != 0 and is_irreducible(poly, p):
            return Field(p, k, tuple(poly))
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


_FIELD_SPEC = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_field_spec(spec: str) -> Field:
    """Parse ``p`` or ``p^k``."""
    m = _FIELD_SPEC.match(spec.strip())
    if not m:
        raise FieldError(f"bad field spec token {spec!r} (expected p or p^k)")
    p = int(m.group(1))
    k = int(m.group(2)) if m.group(2) else 1
    try:
        return make_field(p, k)
    except FieldError as exc:
        raise FieldError(f"bad field spec token {spec!r}: {exc}") from None


# -- elements ------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElem:
    field: Field
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatchError(f"{other.field!r} operand mixed with {self.field!r}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.add_scalar(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.sub_scalar(self.value, b))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return FieldElem(self.field, self.field.neg_scalar(self.value))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.mul_scalar(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElem(self.field, self.field.mul_scalar(self.value, self.field.inv_scalar(b)))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow_scalar(self.value, int(e)))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv_scalar(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == self.field.from_int(int(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def order(self) -> int:
        return self.field.multiplicative_order(self.value)

    def __repr__(self):
        return f"{self.field!r}({self.field.format(self.value)})"

    def __str__(self):
        return self.field.format(self.value)


def field_arith(op: str, a: FieldElem, b: FieldElem | int | None = None) -> FieldElem:
    """Dispatch ``add|sub|mul|inv|pow`` by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {op!r}")


def find_primitive_root_of_unity(F: Field, d: int) -> FieldElem | None:
    """First element (canonical order) of multiplicative order exactly ``d``.

    Returns None when no such element exists, i.e. when ``p | d`` or
    ``d`` does not divide ``q - 1``.  For fields beyond the table limit the
    root is ``a^((q-1)/d)`` for the first ``a`` that yields order ``d``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    q = F.order
    if d % F.p == 0 or (q - 1) % d:
        return None
    if d == 1:
        return F.one
    if F.tabled:
        log, _, _ = F._log_exp
        n = q - 1
        orders = n // np.gcd(log[1:], n)
        hits = np.flatnonzero(orders == d)
        return FieldElem(F, int(hits[0]) + 1)
    for a in range(2, q):
        b = F.pow_scalar(a, (q - 1) // d)
        if F.multiplicative_order(b) == d:
            return FieldElem(F, b)
    raise AssertionError("unreachable: d divides q-1")
