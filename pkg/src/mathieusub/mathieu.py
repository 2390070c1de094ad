"""Decide whether V_G (zero constant term) is a Mathieu subspace of K[G].

A NotMathieu verdict always carries a witness that re-validates with the
predicates in :mod:`mathieusub.galg`: either a nonzero idempotent with zero
constant term, or an element whose large powers all have zero constant
term but which is not nilpotent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from sympy import primefactors

from . import kernels
from .ff import Field, FieldElem, find_primitive_root_of_unity
from .galg import (
    AlgebraElem,
    RadicalCertificate,
    format_element,
    from_code,
    is_idempotent,
    is_in_VG,
    is_nilpotent,
    one,
    radical_membership,
)
from .group import AbelianGroup, CyclicSubgroup, FiniteGroup

DEFAULT_BUDGET = 1 << 20
MAX_SUBSET_LENGTH = 24

LARGE_CHAR = "fast-path-large-char"
UNICOUNTER = "unicounter-idempotent"
ABELIAN_ROOTS = "abelian-root-criterion"
OBSTRUCTION = "cyclic-subgroup-obstruction"
EXHAUSTIVE_IDEMPOTENT = "exhaustive-idempotent"
REDUCED_EXHAUSTIVE = "p-power-reduction+exhaustive-idempotent"
EXHAUSTIVE_RADICAL = "exhaustive-radical"
BUDGET_EXCEEDED = "budget-exceeded"


class Outcome(str, Enum):
    MATHIEU = "mathieu"
    NOT_MATHIEU = "not_mathieu"
    INDETERMINATE = "indeterminate"


class WitnessKind(str, Enum):
    IDEMPOTENT = "nonzero_idempotent_in_vg"
    RADICAL = "non_nilpotent_radical_element"


class WitnessError(AssertionError):
    """A constructed witness failed re-validation (an implementation bug)."""


class FrameError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    kind: WitnessKind
    element: AlgebraElem
    certificate: RadicalCertificate | None = None

    def validate(self) -> bool:
        e = self.element
        if self.kind is WitnessKind.IDEMPOTENT:
            return bool(e) and is_idempotent(e) and is_in_VG(e)
        cert = radical_membership(e)
        return cert.in_radical and not is_nilpotent(e)

    def as_dict(self) -> dict:
        F = self.element.field
        out = {
            "kind": self.kind.value,
            "coeffs": [F.format(c) for c in self.element.coeffs.tolist()],
            "element": format_element(self.element),
        }
        if self.certificate is not None:
            out["preperiod"] = self.certificate.preperiod
            out["period"] = self.certificate.period
        return out


@dataclass(frozen=True)
class Verdict:
    field: Field
    group: FiniteGroup
    outcome: Outcome
    method: str
    witness: Witness | None = None
    examined: int = 0
    reason: str | None = None

    def as_dict(self) -> dict:
        return {
            "field": self.field.spec,
            "group": self.group.name,
            "outcome": self.outcome.value,
            "method": self.method,
            "witness": self.witness.as_dict() if self.witness else None,
            "examined": self.examined,
            "reason": self.reason,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


@dataclass(frozen=True)
class EvalFrame:
    """Evaluation points S = C_1 x ... x C_n, C_i the powers of a primitive d_i-th root."""

    field: Field
    factors: tuple[int, ...]
    roots: tuple[FieldElem, ...]
    group: AbelianGroup
    exponents: np.ndarray     # |G| x n, the box D in index order
    points: np.ndarray        # |G| x n field codes; row l is xi^(exponents[l])
    root_powers: tuple[np.ndarray, ...]

    @property
    def order(self) -> int:
        return self.group.order


@dataclass(frozen=True)
class SylowCheck:
    status: str               # "pass" | "fail" | "not_applicable"
    prime: int | None = None


@dataclass(frozen=True)
class SubsetSumResult:
    passes: bool
    failing: tuple[int, ...] | None = None   # 1-based indices


@dataclass(frozen=True)
class RadicalCensus:
    preperiod: np.ndarray
    period: np.ndarray
    in_radical: np.ndarray
    nilpotent: np.ndarray


# -- helpers -----------------------------------------------------------------

def _p_split(n: int, p: int) -> tuple[int, int]:
    r = 0
    while n % p == 0:
        n //= p
        r += 1
    return r, n


def _checked(verdict: Verdict) -> Verdict:
    if verdict.outcome is Outcome.NOT_MATHIEU:
        if verdict.witness is None or not verdict.witness.validate():
            raise WitnessError(f"invalid witness for {verdict.field!r}[{verdict.group!r}] via {verdict.method}")
    return verdict


def _lift(u: AlgebraElem, G: FiniteGroup, index_map: Sequence[int]) -> AlgebraElem:
    """Push ``u`` in K[H] into K[G] along the injective map H-index -> G-index."""
    coeffs = np.zeros(G.order, dtype=np.int64)
    coeffs[np.asarray(index_map, dtype=np.int64)] = u.coeffs
    return AlgebraElem(u.field, G, coeffs)


def _p_free_embedding(factors: Sequence[int], p: int):
    """Reduced factors plus, for each, its source position and embedding step p^s."""
    reduced, slots = [], []
    for i, d in enumerate(factors):
        s, m = _p_split(int(d), p)
        if m > 1:
            reduced.append(m)
            slots.append((i, p ** s))
    return tuple(reduced), slots


def _reduction_map(G: AbelianGroup, p: int) -> tuple[AbelianGroup, np.ndarray]:
    reduced, slots = _p_free_embedding(G.factors, p)
    H = AbelianGroup(reduced)
    beta = np.zeros((H.order, len(G.factors)), dtype=np.int64)
    for j, (pos, step) in enumerate(slots):
        beta[:, pos] = H.exponents[:, j] * step
    return H, np.atleast_1d(G.index(beta))


def p_cross_reduction(factors: Sequence[int], p: int) -> tuple[int, ...]:
    """Drop p-power cyclic factors, splitting ``Z_{p^s m}`` as ``Z_{p^s} x Z_m`` first.

    The verdict for the reduced group equals the verdict for the original.
    """
    return _p_free_embedding(factors, p)[0]


# -- exhaustive deciders ---------------------------------------------------------

def _chunk(total: int, workers: int) -> int:
    return max(1 << 12, -(-total // (16 * max(1, workers))))


def decide_exhaustive_idempotent(K: Field, G: FiniteGroup, budget: int = DEFAULT_BUDGET,
                                 workers: int = 1) -> Verdict:
    """Search every element with zero constant term for a nonzero idempotent.

    Candidates are enumerated by code: digit j (base q) is the coefficient of
    the j-th non-identity group element, so the reported witness is the
    smallest such code.
    """
    n, q = G.order, K.order
    total = q ** (n - 1)
    if total > budget:
        return Verdict(K, G, Outcome.INDETERMINATE, BUDGET_EXCEEDED, examined=0,
                       reason=f"{total} candidates exceed budget {budget}")
    free_pos = np.array([g for g in range(n) if g != G.identity], dtype=np.int64)
    hit = kernels.first_hit(lambda lo, hi: kernels.idempotent_scan(K, G, lo, hi, free_pos),
                            total, _chunk(total, workers), workers)
    if hit < 0:
        return Verdict(K, G, Outcome.MATHIEU, EXHAUSTIVE_IDEMPOTENT, examined=total)
    coeffs = np.zeros(n, dtype=np.int64)
    x = hit
    for pos in free_pos:
        x, coeffs[pos] = divmod(x, q)
    w = Witness(WitnessKind.IDEMPOTENT, AlgebraElem(K, G, coeffs))
    return _checked(Verdict(K, G, Outcome.NOT_MATHIEU, EXHAUSTIVE_IDEMPOTENT, w, examined=hit + 1))


def radical_census(K: Field, G: FiniteGroup, budget: int = DEFAULT_BUDGET) -> RadicalCensus:
    """Radical certificate of every element of K[G], indexed by element code."""
    total = K.order ** G.order
    if total > budget:
        raise ValueError(f"{total} elements exceed budget {budget}")
    parts = [kernels.radical_sweep(K, G, lo, min(total, lo + (1 << 14)))
             for lo in range(0, total, 1 << 14)]
    return RadicalCensus(*(np.concatenate([p[i] for p in parts]) for i in range(4)))


def decide_exhaustive_radical(K: Field, G: FiniteGroup, budget: int = DEFAULT_BUDGET,
                              workers: int = 1) -> Verdict:
    """Check that every element of the radical of V_G is nilpotent, by enumeration."""
    total = K.order ** G.order
    if total > budget:
        return Verdict(K, G, Outcome.INDETERMINATE, BUDGET_EXCEEDED, examined=0,
                       reason=f"{total} elements exceed budget {budget}")

    def scan(lo: int, hi: int) -> int:
        _, _, rad, nil = kernels.radical_sweep(K, G, lo, hi)
        bad = np.flatnonzero(rad & ~nil)
        return lo + int(bad[0]) if bad.size else -1

    hit = kernels.first_hit(scan, total, _chunk(total, workers), workers)
    if hit < 0:
        return Verdict(K, G, Outcome.MATHIEU, EXHAUSTIVE_RADICAL, examined=total)
    u = from_code(K, G, hit)
    w = Witness(WitnessKind.RADICAL, u, radical_membership(u))
    return _checked(Verdict(K, G, Outcome.NOT_MATHIEU, EXHAUSTIVE_RADICAL, w, examined=hit + 1))


# -- witness constructors ----------------------------------------------------------

def witness_unicounter(K: Field, G: FiniteGroup) -> AlgebraElem:
    """``u = -sum_{g != 1} g``, a nonzero idempotent in V_G when ``p | |G|-1``."""
    n = G.order
    if n < 2 or (n - 1) % K.p:
        raise ValueError(f"needs |G| >= 2 and p | |G|-1; got p={K.p}, |G|={n}")
    coeffs = np.full(n, K.neg_scalar(1), dtype=np.int64)
    coeffs[G.identity] = 0
    u = AlgebraElem(K, G, coeffs)
    # general identity u^2 = (|G|-1) - (|G|-2) u, before using p | |G|-1
    sq = u * u
    if sq != one(K, G) * (n - 1) - u * (n - 2):
        raise WitnessError("u^2 = (|G|-1) - (|G|-2)u failed")
    if sq != u or not u or not is_in_VG(u):
        raise WitnessError("unicounter element is not a nonzero idempotent in V_G")
    return u


def build_eval_frame(K: Field, factors: Sequence[int]) -> EvalFrame:
    factors = tuple(int(d) for d in factors)
    G = AbelianGroup(factors)
    if G.order % K.p == 0:
        raise FrameError(f"characteristic {K.p} divides |G| = {G.order}")
    roots = []
    for d in factors:
        xi = find_primitive_root_of_unity(K, d)
        if xi is None:
            raise FrameError(f"{K!r} has no primitive {d}-th root of unity")
        roots.append(xi)
    powers = []
    for xi, d in zip(roots, factors):
        pw = [1]
        for _ in range(d - 1):
            pw.append(K.mul_scalar(pw[-1], xi.value))
        powers.append(np.array(pw, dtype=np.int64))
    D = G.exponents
    points = np.zeros(D.shape, dtype=np.int64)
    for i, pw in enumerate(powers):
        points[:, i] = pw[D[:, i]]
    return EvalFrame(K, factors, tuple(roots), G, D, points, tuple(powers))


def _monomial_values(frame: EvalFrame, alpha: Sequence[int]) -> np.ndarray:
    """``a^alpha`` for every a in S (exponents reduced mod d_i)."""
    K = frame.field
    vals = np.ones(frame.order, dtype=np.int64)
    for i, d in enumerate(frame.factors):
        vals = K.mul(vals, frame.root_powers[i][(frame.exponents[:, i] * int(alpha[i])) % d])
    return vals


def _terms(frame: EvalFrame, f) -> list[tuple[tuple[int, ...], int]]:
    items = f.items() if isinstance(f, dict) else f
    out = []
    for alpha, c in items:
        alpha = tuple(int(a) for a in np.atleast_1d(alpha)) if frame.factors else ()
        if len(alpha) != len(frame.factors):
            raise ValueError(f"exponent {alpha} has wrong arity")
        code = c.value if isinstance(c, FieldElem) else frame.field(int(c)).value
        out.append((alpha, code))
    return out


def functional_L(frame: EvalFrame, f) -> FieldElem:
    """``sum_{a in S} f(a)`` for ``f`` given as (exponent tuple, coefficient) pairs."""
    K = frame.field
    total = np.zeros(frame.order, dtype=np.int64)
    for alpha, c in _terms(frame, f):
        total = K.add(total, K.mul(_monomial_values(frame, alpha), c))
    return FieldElem(K, int(K.sum(total)))


def phi(frame: EvalFrame, f) -> AlgebraElem:
    """Image in K[G] under ``z_i -> e_i`` (exponents reduced into D)."""
    K, G = frame.field, frame.group
    coeffs = np.zeros(G.order, dtype=np.int64)
    for alpha, c in _terms(frame, f):
        g = G.index(alpha) if frame.factors else 0
        coeffs[g] = K.add_scalar(int(coeffs[g]), c)
    return AlgebraElem(K, G, coeffs)


def verify_kernel_correspondence(frame: EvalFrame, samples: int = 64, seed: int = 0,
                                 max_terms: int = 6) -> bool:
    """Check that ``phi(f)`` lies in V_G exactly when ``L(f) = 0``.

    Every monomial of the box D is checked, plus ``samples`` random
    combinations whose exponents range beyond D so the reduction is exercised.
    """
    K = frame.field
    d = K.from_int(frame.order)
    rng = np.random.default_rng(seed)
    polys = [[(tuple(int(a) for a in alpha), 1)] for alpha in frame.exponents]
    hi = np.array([3 * di for di in frame.factors], dtype=np.int64)
    lo = -2 * hi // 3
    for _ in range(samples):
        t = int(rng.integers(1, max_terms + 1))
        alphas = rng.integers(lo, hi, size=(t, len(frame.factors))) if frame.factors else np.zeros((t, 0))
        coeffs = rng.integers(0, K.order, size=t)
        polys.append([(tuple(int(a) for a in al), int(c)) for al, c in zip(alphas, coeffs)])
    for f in polys:
        L = functional_L(frame, f).value
        image = phi(frame, f)
        if L != K.mul_scalar(d, int(image.coeffs[0])):
            return False
        if (L == 0) != is_in_VG(image):
            return False
    return True


def witness_idempotent_abelian(frame: EvalFrame, J: Iterable) -> AlgebraElem:
    """``e_J = d^-1 sum_{chi in J} sum_g chi(g^-1) g`` with ``chi_beta(e_i) = xi_i^beta_i``.

    ``J`` holds character indices (ints in index order, or exponent tuples).
    ``e_J`` is idempotent with constant term ``|J|/d``.
    """
    K, G = frame.field, frame.group
    betas = []
    for j in J:
        idx = int(j) if np.ndim(j) == 0 else int(G.index(j))
        if not 0 <= idx < G.order:
            raise ValueError(f"character index {j} out of range")
        betas.append(idx)
    if not betas:
        raise ValueError("J must be non-empty")
    if len(set(betas)) != len(betas):
        raise ValueError("J has repeated characters")
    coeffs = np.zeros(G.order, dtype=np.int64)
    for b in betas:
        beta = frame.exponents[b]
        # chi_beta(g_alpha^-1) = prod_i xi_i^(-beta_i alpha_i)
        coeffs = K.add(coeffs, _monomial_values(frame, -beta) if frame.factors else np.ones(1, np.int64))
    dinv = K.inv_scalar(K.from_int(frame.order))
    return AlgebraElem(K, G, K.mul(coeffs, dinv))


# -- theorem-based deciders ------------------------------------------------------------

def decide_abelian_root_criterion(K: Field, factors) -> Verdict | None:
    """For abelian G with |G| = p^r d, p not dividing d, and a primitive d-th root in K:
    Mathieu iff p > d.  Returns None when K lacks the root (criterion not applicable).
    """
    G = factors if isinstance(factors, AbelianGroup) else AbelianGroup(factors)
    p = K.p
    _, d = _p_split(G.order, p)
    if find_primitive_root_of_unity(K, d) is None:
        return None
    if p > d:
        return Verdict(K, G, Outcome.MATHIEU, ABELIAN_ROOTS)
    H, index_map = _reduction_map(G, p)
    frame = build_eval_frame(K, H.factors)
    e = witness_idempotent_abelian(frame, range(1, p + 1))
    w = Witness(WitnessKind.IDEMPOTENT, _lift(e, G, index_map))
    return _checked(Verdict(K, G, Outcome.NOT_MATHIEU, ABELIAN_ROOTS, w))


def sylow_necessary_condition(K: Field, G: FiniteGroup) -> SylowCheck:
    """Fail with the smallest prime q | |G| exceeding p, when K has the needed root.

    With no such prime the condition holds trivially ("pass"); with one but
    no primitive d-th root (d the p-free part of |G|) it is not applicable.
    """
    p = K.p
    bad = [q for q in primefactors(G.order) if q > p]
    if not bad:
        return SylowCheck("pass")
    _, d = _p_split(G.order, p)
    if find_primitive_root_of_unity(K, d) is None:
        return SylowCheck("not_applicable")
    return SylowCheck("fail", min(bad))


def _obstruction_scan(K: Field, G: FiniteGroup, budget: int, workers: int):
    examined = 0
    memo: dict[int, Verdict] = {}
    for c in G.cyclic_subgroups():
        if c.order < 2:
            continue
        if c.order == G.order and isinstance(G, AbelianGroup):
            continue
        if c.order not in memo:
            memo[c.order] = decide(K, AbelianGroup((c.order,)), budget, workers)
            examined += memo[c.order].examined
        v = memo[c.order]
        if v.outcome is Outcome.NOT_MATHIEU:
            return (c, v), examined
    return None, examined


def subgroup_obstruction_scan(K: Field, G: FiniteGroup, budget: int = DEFAULT_BUDGET,
                              workers: int = 1) -> tuple[CyclicSubgroup, Verdict] | None:
    """First cyclic subgroup C whose V_C is not Mathieu (which forces the same for G).

    The returned verdict is for ``K[Z_|C|]``; index j there is ``c.elements[j]`` in G.
    """
    return _obstruction_scan(K, G, budget, workers)[0]


def decide(K: Field, G: FiniteGroup, budget: int = DEFAULT_BUDGET, workers: int = 1) -> Verdict:
    """Full pipeline: large characteristic, unicounter idempotent, abelian root
    criterion, cyclic-subgroup obstruction, then exhaustive idempotent search.
    """
    n, p = G.order, K.p
    if p > n:
        return Verdict(K, G, Outcome.MATHIEU, LARGE_CHAR)
    if n >= 2 and (n - 1) % p == 0:
        w = Witness(WitnessKind.IDEMPOTENT, witness_unicounter(K, G))
        return _checked(Verdict(K, G, Outcome.NOT_MATHIEU, UNICOUNTER, w))
    if isinstance(G, AbelianGroup):
        v = decide_abelian_root_criterion(K, G)
        if v is not None:
            return v
    hit, examined = _obstruction_scan(K, G, budget, workers)
    if hit is not None:
        c, sub = hit
        w = Witness(sub.witness.kind, _lift(sub.witness.element, G, c.elements))
        return _checked(Verdict(K, G, Outcome.NOT_MATHIEU, OBSTRUCTION, w, examined,
                                reason=f"subgroup of order {c.order} generated by g{c.generator}"))
    if isinstance(G, AbelianGroup):
        H, index_map = _reduction_map(G, p)
        if H.order < G.order:
            v = decide_exhaustive_idempotent(K, H, budget, workers)
            w = None
            if v.witness is not None:
                w = Witness(v.witness.kind, _lift(v.witness.element, G, index_map))
            v = Verdict(K, G, v.outcome, REDUCED_EXHAUSTIVE if v.outcome is not Outcome.INDETERMINATE
                        else v.method, w, examined + v.examined, v.reason)
        else:
            v = decide_exhaustive_idempotent(K, G, budget, workers)
            v = Verdict(K, G, v.outcome, v.method, v.witness, examined + v.examined, v.reason)
    else:
        v = decide_exhaustive_idempotent(K, G, budget, workers)
        v = Verdict(K, G, v.outcome, v.method, v.witness, examined + v.examined, v.reason)
    if v.outcome is Outcome.MATHIEU and sylow_necessary_condition(K, G).status == "fail":
        raise WitnessError(f"Mathieu verdict for {K!r}[{G!r}] contradicts the prime-divisor condition")
    return _checked(v)


# -- subset sums ---------------------------------------------------------------------

def subset_sum_check(c: Sequence[FieldElem]) -> SubsetSumResult:
    """Pass iff no non-empty subset of ``c`` sums to zero; else a minimal failing subset.

    Among failing subsets of minimal size the lexicographically smallest
    (1-based, sorted) index tuple is returned.
    """
    c = list(c)
    if not c:
        raise ValueError("need at least one coefficient")
    if len(c) > MAX_SUBSET_LENGTH:
        raise ValueError(f"at most {MAX_SUBSET_LENGTH} coefficients")
    F = c[0].field
    for x in c:
        if not isinstance(x, FieldElem) or x.field != F:
            raise ValueError("coefficients must be elements of one field")
        if not x:
            raise ValueError("zero coefficient")
    sums = np.zeros(1, dtype=np.int64)
    for x in c:
        sums = np.concatenate([sums, F.add(sums, x.value)])
    zero_masks = np.flatnonzero(sums == 0)
    zero_masks = zero_masks[zero_masks != 0]
    if zero_masks.size == 0:
        return SubsetSumResult(True)
    counts = np.array([bin(int(m)).count("1") for m in zero_masks])
    best = zero_masks[counts == counts.min()]
    subsets = [tuple(i + 1 for i in range(len(c)) if (int(m) >> i) & 1) for m in best]
    return SubsetSumResult(False, min(subsets))
