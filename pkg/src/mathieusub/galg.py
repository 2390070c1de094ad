"""Arithmetic in the group algebra K[G].

Elements are dense coefficient vectors of field codes indexed by group
element index.  ``tr(u)`` is the coefficient of the identity element.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .ff import Field, FieldElem, FieldMismatchError
from .group import FiniteGroup

RADICAL_MEMORY_CAP = 1 << 22


class InfeasibleInstance(RuntimeError):
    """The requested exact computation exceeds its memory or budget cap."""


class ElementSyntaxError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AlgebraElem:
    field: Field
    group: FiniteGroup
    coeffs: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.int64).reshape(-1)
        if c.shape[0] != self.group.order:
            raise ValueError(f"expected {self.group.order} coefficients, got {c.shape[0]}")
        if np.any(c < 0) or np.any(c >= self.field.order):
            raise ValueError("coefficient codes out of range")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def _same(self, other: "AlgebraElem") -> None:
        if not isinstance(other, AlgebraElem):
            raise TypeError(f"expected AlgebraElem, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"{other.field!r} element mixed with {self.field!r}")
        if other.group != self.group:
            raise ValueError(f"{other.group!r} element mixed with {self.group!r}")

    def _new(self, coeffs) -> "AlgebraElem":
        return AlgebraElem(self.field, self.group, coeffs)

    def __add__(self, other):
        self._same(other)
        return self._new(self.field.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._same(other)
        return self._new(self.field.sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return self._new(self.field.neg(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, AlgebraElem):
            return algebra_mul(self, other)
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatchError("scalar from a different field")
            return self._new(self.field.mul(self.coeffs, other.value))
        if isinstance(other, (int, np.integer)):
            return self._new(self.field.mul(self.coeffs, self.field.from_int(int(other))))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (FieldElem, int, np.integer)):
            return self * other
        return NotImplemented

    def __pow__(self, m: int):
        return power(self, m)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElem):
            return NotImplemented
        return (self.field == other.field and self.group == other.group
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field, self.group, self.coeffs.tobytes()))

    def __bool__(self):
        return bool(np.any(self.coeffs))

    def __repr__(self):
        return f"AlgebraElem({self.field!r}[{self.group!r}]: {format_element(self)})"

    def tr(self) -> FieldElem:
        return tr(self)

    @property
    def code(self) -> int:
        """Base-q integer with digit i the coefficient of group index i."""
        q = self.field.order
        c = 0
        for x in reversed(self.coeffs.tolist()):
            c = c * q + x
        return c


@dataclass(frozen=True)
class RadicalCertificate:
    """Cycle of the power sequence u, u^2, ...: ``u^(preperiod+period) == u^preperiod``."""

    preperiod: int
    period: int
    in_radical: bool


# -- constructors --------------------------------------------------------------

def zero(F: Field, G: FiniteGroup) -> AlgebraElem:
    return AlgebraElem(F, G, np.zeros(G.order, dtype=np.int64))


def one(F: Field, G: FiniteGroup) -> AlgebraElem:
    return basis(F, G, G.identity)


def basis(F: Field, G: FiniteGroup, g: int, coeff: int = 1) -> AlgebraElem:
    c = np.zeros(G.order, dtype=np.int64)
    c[g] = coeff
    return AlgebraElem(F, G, c)


def from_code(F: Field, G: FiniteGroup, code: int) -> AlgebraElem:
    q = F.order
    c = np.zeros(G.order, dtype=np.int64)
    for i in range(G.order):
        code, c[i] = divmod(code, q)
    return AlgebraElem(F, G, c)


# -- operations ----------------------------------------------------------------

def algebra_mul(u: AlgebraElem, v: AlgebraElem) -> AlgebraElem:
    """Group-algebra convolution ``(uv)_g = sum_{ab=g} u_a v_b``."""
    u._same(v)
    return u._new(kernels.convolve(u.field, u.group, u.coeffs, v.coeffs))


def power(u: AlgebraElem, m: int) -> AlgebraElem:
    if m < 0:
        raise ValueError("negative powers are not defined in K[G]")
    result = one(u.field, u.group)
    base = u
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return result


def tr(u: AlgebraElem) -> FieldElem:
    return FieldElem(u.field, int(u.coeffs[u.group.identity]))


def is_in_VG(u: AlgebraElem) -> bool:
    return int(u.coeffs[u.group.identity]) == 0


def is_idempotent(u: AlgebraElem) -> bool:
    return u * u == u


def is_nilpotent(u: AlgebraElem) -> bool:
    """``u^|G| == 0``: a nilpotent operator on a |G|-dimensional space dies by then."""
    return not power(u, u.group.order)


def nilpotency_index(u: AlgebraElem) -> int | None:
    """Least m >= 1 with ``u^m == 0``, or None if u is not nilpotent."""
    p = u
    for m in range(1, u.group.order + 1):
        if not p:
            return m
        p = p * u
    return None


def left_mult_matrix(u: AlgebraElem) -> np.ndarray:
    """Matrix of ``v -> u v`` in the group basis (column j is ``u * g_j``)."""
    G = u.group
    n = G.order
    M = np.zeros((n, n), dtype=np.int64)
    # u * g_j has coefficient u_a at a*g_j
    M[G.table, np.arange(n)[None, :]] = u.coeffs[:, None]
    return M


def mat_mul(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.sum(F.mul(A[:, :, None], B[None, :, :]), axis=1)


def mat_power(F: Field, A: np.ndarray, m: int) -> np.ndarray:
    n = A.shape[0]
    result = np.zeros((n, n), dtype=np.int64)
    result[np.arange(n), np.arange(n)] = 1
    base = A
    while m:
        if m & 1:
            result = mat_mul(F, result, base)
        m >>= 1
        if m:
            base = mat_mul(F, base, base)
    return result


def matrix_trace(F: Field, A: np.ndarray) -> FieldElem:
    return FieldElem(F, int(F.sum(np.diagonal(A))))


def radical_membership(u: AlgebraElem, memory_cap: int = RADICAL_MEMORY_CAP) -> RadicalCertificate:
    """Exact cycle of the power sequence and whether ``tr(u^m) = 0`` for all large m.

    Powers are stored until the first repeat; ``u`` is in the radical of
    V_G iff every power on the cycle has zero constant term.
    """
    seen: dict[bytes, int] = {}
    traces: list[int] = []
    p = u
    m = 1
    while True:
        key = p.coeffs.tobytes()
        if key in seen:
            j = seen[key]
            break
        if len(seen) >= memory_cap:
            raise InfeasibleInstance(f"power sequence exceeds memory cap {memory_cap}")
        seen[key] = m
        traces.append(int(p.coeffs[u.group.identity]))
        p = p * u
        m += 1
    in_rad = all(t == 0 for t in traces[j - 1:])
    return RadicalCertificate(preperiod=j, period=m - j, in_radical=in_rad)


# -- literals ------------------------------------------------------------------

_TERM = re.compile(r"^\s*(?:(-?[0-9:]+)\s*\*\s*)?(-)?g(\d+)\s*$")


def parse_element(text: str, F: Field, G: FiniteGroup) -> AlgebraElem:
    """Parse ``coeff*g<index>`` terms joined by ``+`` or ``,`` (e.g. ``1*g1+1*g2``).

    A bare ``g<i>`` means coefficient 1; ``0`` denotes the zero element.
    """
    text = text.strip()
    coeffs = np.zeros(G.order, dtype=np.int64)
    if text in ("", "0"):
        return AlgebraElem(F, G, coeffs)
    for tok in re.split(r"[+,]", text):
        m = _TERM.match(tok)
        if not m:
            raise ElementSyntaxError(f"bad term {tok.strip()!r}")
        c = F.parse(m.group(1)) if m.group(1) is not None else 1
        if m.group(2):
            c = F.neg_scalar(c)
        g = int(m.group(3))
        if g >= G.order:
            raise ElementSyntaxError(f"group index {g} out of range in term {tok.strip()!r}")
        coeffs[g] = F.add_scalar(int(coeffs[g]), c)
    return AlgebraElem(F, G, coeffs)


def format_element(u: AlgebraElem) -> str:
    terms = [f"{u.field.format(c)}*g{i}" for i, c in enumerate(u.coeffs.tolist()) if c]
    return "+".join(terms) if terms else "0"
