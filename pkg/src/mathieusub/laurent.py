"""Sparse Laurent polynomials over GF(p) and the positive-characteristic counterexample.

``f = z^-1 + z^(p-1)`` has ``tr(f^m) = 0`` for every m >= 1 while
``tr(z^-1 f^(p^k - 1)) = (-1)^(p^(k-1))``, so the constant-term-free Laurent
polynomials are not a Mathieu subspace of GF(p)[z^-1, z].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from sympy import isprime

from . import kernels


class VerificationFailure(AssertionError):
    def __init__(self, message: str, **params):
        super().__init__(message)
        self.params = params


@dataclass(frozen=True)
class LaurentPoly:
    p: int
    terms: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(e): int(c) % self.p for e, c in self.terms.items() if int(c) % self.p}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def monomial(cls, p: int, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls(p, {exponent: coeff})

    def _same(self, other: "LaurentPoly") -> None:
        if other.p != self.p:
            raise ValueError(f"characteristic mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.p, out)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return laurent_mul(self, other)

    def __pow__(self, m: int) -> "LaurentPoly":
        return laurent_pow(self, m)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, tuple(self.terms.items())))

    def tr(self) -> int:
        return self.terms.get(0, 0)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*z^{e}" if c != 1 else f"z^{e}" for e, c in self.terms.items())


def laurent_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a._same(b)
    out: dict[int, int] = {}
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            out[e1 + e2] = (out.get(e1 + e2, 0) + c1 * c2) % a.p
    return LaurentPoly(a.p, out)


def laurent_pow(a: LaurentPoly, m: int) -> LaurentPoly:
    if m < 0:
        raise ValueError("negative exponent")
    result = LaurentPoly(a.p, {0: 1})
    base = a
    while m:
        if m & 1:
            result = laurent_mul(result, base)
        m >>= 1
        if m:
            base = laurent_mul(base, base)
    return result


def frobenius(a: LaurentPoly) -> LaurentPoly:
    """``a^p`` via ``(sum c z^e)^p = sum c^p z^(pe)`` in characteristic p."""
    return LaurentPoly(a.p, {a.p * e: pow(c, a.p, a.p) for e, c in a.terms.items()})


def counterexample_poly(p: int) -> LaurentPoly:
    """``z^-1 + z^(p-1)``."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    return LaurentPoly(p, {-1: 1, p - 1: 1})


# -- binomials mod p ------------------------------------------------------------

def binom_mod_p(n: int, r: int, p: int) -> int:
    """C(n, r) mod p as the product of digit binomials in base p."""
    if r < 0 or r > n:
        raise ValueError(f"need 0 <= r <= n, got n={n}, r={r}")
    out = 1
    while n or r:
        n, ni = divmod(n, p)
        r, ri = divmod(r, p)
        if ri > ni:
            return 0
        out = out * math.comb(ni, ri) % p
    return out


def pascal_row_mod_p(n: int, p: int) -> list[int]:
    """Row n of Pascal's triangle reduced mod p (oracle for small n)."""
    row = [1]
    for _ in range(n):
        row = [1] + [(row[i] + row[i + 1]) % p for i in range(len(row) - 1)] + [1]
    return row


# -- verifications ------------------------------------------------------------------

@dataclass
class Report:
    name: str
    params: dict
    rows: list = field(default_factory=list)
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {"name": self.name, "params": self.params, "checks": self.checks,
                "ok": self.ok, "failures": self.failures, "rows": self.rows}


def _closed_form_trace(p: int, m: int) -> int:
    # the constant term of f^m comes only from b = m/p copies of z^(p-1)
    return binom_mod_p(m, m // p, p) if m % p == 0 else 0


def traces_of_powers(p: int, M: int, chunk: int = 512) -> np.ndarray:
    """``tr(f^m)`` for m = 1..M by repeated multiplication by f.

    Each chunk starts from ``f^m0`` computed by sparse binary powering and
    then steps a dense window, so chunks are independent.
    """
    f = counterexample_poly(p)
    out = np.zeros(M, dtype=np.int64)
    for m0 in range(1, M + 1, chunk):
        m1 = min(M, m0 + chunk - 1)
        start = laurent_pow(f, m0)
        off = m1
        dense = np.zeros(m1 * p + 1, dtype=np.int64)
        for e, c in start.terms.items():
            dense[e + off] = c
        out[m0 - 1] = start.tr()
        if m1 > m0:
            tr, _ = kernels.laurent_sweep(dense, off, p, m1 - m0)
            out[m0:m1] = tr
    return out


def verify_trace_of_powers(p: int, M: int) -> Report:
    """``tr(f^m) = 0`` for 1 <= m <= M, by direct powers and by the binomial closed form."""
    if M < 1:
        raise ValueError("M must be >= 1")
    rep = Report("trace-of-powers", {"p": p, "M": M})
    direct = traces_of_powers(p, M)
    for m in range(1, M + 1):
        d = int(direct[m - 1])
        closed = _closed_form_trace(p, m)
        rep.rows.append({"m": m, "trace": d, "closed_form": closed})
        rep.checks += 1
        if d != 0 or closed != 0 or d != closed:
            rep.failures.append({"p": p, "m": m, "direct": d, "closed_form": closed})
    return rep


def verify_shifted_trace(p: int, k_max: int) -> Report:
    """``tr(z^-1 f^(p^k-1)) = (-1)^(p^(k-1))`` mod p, also equal to C(p^k-1, p^(k-1)) mod p."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if p ** k_max > 10 ** 5:
        raise ValueError("p^k_max exceeds the exponent budget 10^5")
    rep = Report("shifted-trace", {"p": p, "k_max": k_max})
    f = counterexample_poly(p)
    zinv = LaurentPoly.monomial(p, -1)
    for k in range(1, k_max + 1):
        direct = laurent_mul(zinv, laurent_pow(f, p ** k - 1)).tr()
        expected = (-1) ** (p ** (k - 1)) % p
        binom = binom_mod_p(p ** k - 1, p ** (k - 1), p)
        rep.rows.append({"k": k, "trace": direct, "expected": expected, "binomial": binom})
        rep.checks += 1
        if not direct == expected == binom:
            rep.failures.append({"p": p, "k": k, "direct": direct, "expected": expected, "binomial": binom})
    return rep


def verify_binomial_congruences(p: int, k_max: int, b_max: int) -> Report:
    """``C(p^k-1, a) = (-1)^a`` and ``C(bp, b) = 0`` mod p over the given ranges."""
    if p ** k_max > 10 ** 4:
        raise ValueError("p^k_max exceeds 10^4")
    if b_max > 10 ** 3:
        raise ValueError("b_max exceeds 10^3")
    rep = Report("binomial-congruences", {"p": p, "k_max": k_max, "b_max": b_max})
    for k in range(1, k_max + 1):
        n = p ** k - 1
        bad = 0
        for a in range(n + 1):
            rep.checks += 1
            if binom_mod_p(n, a, p) != (-1) ** a % p:
                bad += 1
                rep.failures.append({"eq": "alternating", "p": p, "k": k, "a": a})
        rep.rows.append({"eq": "alternating", "k": k, "checked": n + 1, "violations": bad})
    bad = 0
    for b in range(1, b_max + 1):
        rep.checks += 1
        if binom_mod_p(b * p, b, p) != 0:
            bad += 1
            rep.failures.append({"eq": "vanishing", "p": p, "b": b})
    rep.rows.append({"eq": "vanishing", "b_max": b_max, "checked": b_max, "violations": bad})
    return rep


@dataclass(frozen=True)
class ZnReduction:
    n: int
    diagonal: tuple[int, ...]
    witness_f: str
    witness_multiplier: str
    statement: str


def zn_reduction_note(n: int, p: int = 2) -> ZnReduction:
    """Diagonal copy of Z in Z^n carrying the one-variable counterexample."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        arg = "z"
    else:
        arg = "(" + "*".join(f"z{i + 1}" for i in range(n)) + ")"
    return ZnReduction(
        n=n,
        diagonal=(1,) * n,
        witness_f=f"{arg}^-1 + {arg}^{p - 1}",
        witness_multiplier=f"{arg}^-1",
        statement=(f"Z embeds in Z^{n} as {{(a,...,a)}}; the constant-term-free subspace of "
                   f"GF({p})[Z^{n}] is not a Mathieu subspace: all powers of f have zero constant "
                   f"term but {arg}^-1 * f^(p^k-1) does not for every k."),
    )
