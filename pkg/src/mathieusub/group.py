"""Finite groups: products of cyclic groups and small Cayley-table groups.

Elements are integer indices in ``[0, |G|)``.  For ``Z_{d_1} x ... x Z_{d_n}``
the index of ``(b_1, ..., b_n)`` is the mixed-radix number
``b_1 + b_2 d_1 + b_3 d_1 d_2 + ...``, so the identity is index 0 and
coefficient vectors of group-algebra elements index directly by it.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

MAX_GROUP_ORDER = 10_000
ASSOC_EXHAUSTIVE_LIMIT = 64


class GroupError(ValueError):
    """Invalid group construction, element or spec."""


@dataclass(frozen=True)
class CyclicSubgroup:
    generator: int
    order: int
    elements: tuple[int, ...]  # generator powers g^0, g^1, ..., g^(order-1)


class FiniteGroup:
    """Common interface; concrete groups are :class:`AbelianGroup` and :class:`CayleyGroup`."""

    name: str
    order: int
    identity: int = 0

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return self.order

    def __repr__(self):
        return self.name

    @property
    def table(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def inverse(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return bool(np.array_equal(t, t.T))

    def _check(self, *elems: int) -> None:
        for g in elems:
            if not 0 <= int(g) < self.order:
                raise GroupError(f"element index {g} out of range for {self.name}")

    def op(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.table[a, b])

    def power(self, g: int, m: int) -> int:
        self._check(g)
        if m < 0:
            g, m = int(self.inverse[g]), -m
        result, base = self.identity, g
        while m:
            if m & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            m >>= 1
        return result

    def element_order(self, g: int) -> int:
        self._check(g)
        m, x = 1, g
        while x != self.identity:
            x = int(self.table[x, g])
            m += 1
        return m

    def cyclic_subgroups(self) -> list[CyclicSubgroup]:
        """Distinct cyclic subgroups, each tagged with its lowest-index generator."""
        if self.order > MAX_GROUP_ORDER:
            raise GroupError("group too large for subgroup enumeration")
        seen: set[frozenset[int]] = set()
        out = []
        for g in range(self.order):
            powers = [self.identity]
            x = g
            while x != self.identity:
                powers.append(x)
                x = int(self.table[x, g])
            key = frozenset(powers)
            if key not in seen:
                seen.add(key)
                out.append(CyclicSubgroup(g, len(powers), tuple(powers)))
        return out


class AbelianGroup(FiniteGroup):
    """``Z_{d_1} x ... x Z_{d_n}`` written multiplicatively."""

    def __init__(self, factors: Sequence[int] = ()):
        factors = tuple(int(d) for d in factors)
        if any(d < 2 for d in factors):
            raise GroupError(f"cyclic factors must be >= 2, got {factors}")
        order = math.prod(factors)
        if order > MAX_GROUP_ORDER:
            raise GroupError(f"group order {order} exceeds {MAX_GROUP_ORDER}")
        self.factors = factors
        self.order = order
        self.identity = 0
        self.name = "x".join(f"Z{d}" for d in factors) if factors else "Z1"
        self._radix = np.array([math.prod(factors[:i]) for i in range(len(factors))], dtype=np.int64)

    @property
    def key(self):
        return ("abelian", self.factors)

    @property
    def is_abelian(self) -> bool:
        return True

    def coords(self, g) -> np.ndarray:
        """Exponent vector(s) of index/indices ``g``."""
        g = np.asarray(g, dtype=np.int64)
        if not self.factors:
            return np.zeros(g.shape + (0,), dtype=np.int64)
        d = np.array(self.factors, dtype=np.int64)
        return (g[..., None] // self._radix) % d

    def index(self, beta) -> np.ndarray | int:
        """Mixed-radix index of exponent vector(s); exponents are reduced mod d_i."""
        beta = np.asarray(beta, dtype=np.int64)
        if not self.factors:
            out = np.zeros(beta.shape[:-1], dtype=np.int64)
        else:
            out = (beta % np.array(self.factors, dtype=np.int64)) @ self._radix
        return int(out) if out.ndim == 0 else out

    @cached_property
    def exponents(self) -> np.ndarray:
        """``|G| x n`` matrix of exponent vectors in index order (the box D)."""
        return self.coords(np.arange(self.order))

    @cached_property
    def table(self) -> np.ndarray:
        c = self.exponents
        return np.ascontiguousarray(self.index(c[:, None, :] + c[None, :, :]), dtype=np.int64)

    @cached_property
    def inverse(self) -> np.ndarray:
        return np.asarray(self.index(-self.exponents), dtype=np.int64).reshape(self.order)

    def op(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.index(self.coords(a) + self.coords(b)))

    def element_order(self, g: int) -> int:
        self._check(g)
        m = 1
        for b, d in zip(self.coords(g).tolist(), self.factors):
            m = math.lcm(m, d // math.gcd(b, d))
        return m


class CayleyGroup(FiniteGroup):
    """Group given by a validated multiplication table."""

    def __init__(self, table, name: str = "G"):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square matrix")
        n = t.shape[0]
        if n > MAX_GROUP_ORDER:
            raise GroupError(f"group order {n} exceeds {MAX_GROUP_ORDER}")
        expected = np.arange(n)
        if not (np.array_equal(np.sort(t, axis=1), np.broadcast_to(expected, (n, n)))
                and np.array_equal(np.sort(t, axis=0), np.broadcast_to(expected[:, None], (n, n)))):
            raise GroupError("Cayley table is not a Latin square")
        ids = [e for e in range(n) if np.array_equal(t[e], expected) and np.array_equal(t[:, e], expected)]
        if not ids:
            raise GroupError("Cayley table has no identity")
        e = ids[0]
        if n <= ASSOC_EXHAUSTIVE_LIMIT:
            # (ab)c == a(bc) for all triples
            if not np.array_equal(t[t, :], t[:, t]):
                raise GroupError("Cayley table is not associative")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, n, size=(3, 4096))
            if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
                raise GroupError("Cayley table is not associative")
        inv = np.argmax(t == e, axis=1)
        if not np.array_equal(t[inv, expected], np.full(n, e)):
            raise GroupError("inverses inconsistent with table")
        t.setflags(write=False)
        self._table = t
        self._inverse = inv.astype(np.int64)
        self.order = n
        self.identity = int(e)
        self.name = name

    @property
    def key(self):
        return ("cayley", self.order, self._table.tobytes())

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse


# -- builtin groups --------------------------------------------------------

def _perm_group(perms: list[tuple[int, ...]], name: str) -> CayleyGroup:
    perms = sorted(perms)
    pos = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(perms):
        for j, b in enumerate(perms):
            # (a*b)(x) = a(b(x))
            table[i, j] = pos[tuple(a[b[x]] for x in range(len(a)))]
    return CayleyGroup(table, name)


def _closure(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    ident = tuple(range(len(gens[0])))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(a[g[x]] for x in range(len(a)))
                if c not in elems:
                    elems.add(c)
                    nxt.append(c)
        frontier = nxt
    return list(elems)


def _quaternion_group() -> CayleyGroup:
    # basis units 1, i, j, k as (sign, unit) with Hamilton products
    unit_mul = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elems = [(s, u) for u in range(4) for s in (1, -1)]  # 1, -1, i, -i, j, -j, k, -k
    pos = {e: i for i, e in enumerate(elems)}
    table = np.empty((8, 8), dtype=np.int64)
    for i, (s1, u1) in enumerate(elems):
        for j, (s2, u2) in enumerate(elems):
            s, u = unit_mul[(u1, u2)]
            table[i, j] = pos[(s1 * s2 * s, u)]
    return CayleyGroup(table, "Q8")


def builtin_group(name: str) -> CayleyGroup:
    """``S3`` (permutations of 3 letters), ``D4`` (square symmetries) or ``Q8``."""
    if name == "S3":
        return _perm_group(list(itertools.permutations(range(3))), "S3")
    if name == "D4":
        return _perm_group(_closure([(1, 2, 3, 0), (0, 3, 2, 1)]), "D4")
    if name == "Q8":
        return _quaternion_group()
    raise GroupError(f"unknown builtin group {name!r} (expected S3, D4 or Q8)")


BUILTIN_GROUPS = ("S3", "D4", "Q8")

_FACTOR = re.compile(r"^Z(\d+)$")


def parse_group_spec(spec: str) -> FiniteGroup:
    """``Z<d1>xZ<d2>x...`` (e.g. ``Z2xZ2xZ5``, ``Z1`` for trivial) or ``S3|D4|Q8``."""
    spec = spec.strip()
    if spec in BUILTIN_GROUPS:
        return builtin_group(spec)
    if spec == "Z1":
        return AbelianGroup(())
    factors = []
    for tok in spec.split("x"):
        m = _FACTOR.match(tok)
        if not m or int(m.group(1)) < 2:
            raise GroupError(f"bad group spec token {tok!r} in {spec!r}")
        factors.append(int(m.group(1)))
    return AbelianGroup(factors)


def group_op(G: FiniteGroup, a: int, b: int) -> int:
    return G.op(a, b)


def element_order(G: FiniteGroup, g: int) -> int:
    return G.element_order(g)


def cyclic_subgroups(G: FiniteGroup) -> list[CyclicSubgroup]:
    return G.cyclic_subgroups()


def abelian_groups(order: int) -> list[tuple[int, ...]]:
    """Invariant-factor forms ``d_1 | d_2 | ... | d_n`` of all abelian groups of ``order``."""
    if order == 1:
        return [()]

    def extend(prefix: tuple[int, ...], remaining: int) -> list[tuple[int, ...]]:
        if remaining == 1:
            return [prefix]
        out = []
        last = prefix[-1] if prefix else 1
        for d in range(max(2, last), remaining + 1, last):
            if remaining % d == 0 and d % last == 0:
                rest = remaining // d
                # every later factor is a multiple of d
                if rest == 1 or rest % d == 0:
                    out.extend(extend(prefix + (d,), rest))
        return out

    return sorted(extend((), order), key=lambda f: (len(f), f))
