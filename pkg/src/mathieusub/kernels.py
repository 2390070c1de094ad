"""Hot loops, each with a numba kernel and a batched pure-numpy path.

The backend is chosen by the ``MATHIEUSUB_BACKEND`` environment variable
(``numba`` or ``numpy``; default ``numba`` when it imports).  The numba
kernels work on full ``q x q`` addition/multiplication tables and are only
used for fields with at most ``ff.KERNEL_TABLE_LIMIT`` elements; everything
else, and every call under the ``numpy`` backend, goes through the
vectorized field operations of :class:`~mathieusub.ff.Field`.

Both paths enumerate candidates in the same canonical order, so the first
hit, and therefore every reported witness, is identical across backends.
"""

from __future__ import annotations

import contextlib
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

try:
    import numba
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap if not (args and callable(args[0])) else args[0]

_env = os.environ.get("MATHIEUSUB_BACKEND", "numba").strip().lower()
if _env not in ("numba", "numpy"):
    raise RuntimeError(f"MATHIEUSUB_BACKEND must be 'numba' or 'numpy', got {_env!r}")
_backend = _env if HAS_NUMBA else "numpy"


def active_backend() -> str:
    return _backend


@contextlib.contextmanager
def use_backend(name: str):
    """Temporarily switch backend (tests and benchmarks)."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(name)
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba is not installed")
    prev, _backend = _backend, name
    try:
        yield
    finally:
        _backend = prev


def _tables(F):
    if _backend != "numba":
        return None
    return F.kernel_tables


# -- numba kernels -----------------------------------------------------------

@njit(cache=True, nogil=True)
def _conv_into(w, u, v, cayley, add_t, mul_t):
    n = u.shape[0]
    for i in range(n):
        w[i] = 0
    for a in range(n):
        ua = u[a]
        if ua == 0:
            continue
        for b in range(n):
            vb = v[b]
            if vb == 0:
                continue
            t = cayley[a, b]
            w[t] = add_t[w[t], mul_t[ua, vb]]


@njit(cache=True, nogil=True)
def _conv_nb(u, v, cayley, add_t, mul_t):
    w = np.zeros(u.shape[0], np.int64)
    _conv_into(w, u, v, cayley, add_t, mul_t)
    return w


@njit(cache=True, nogil=True)
def _idempotent_scan_nb(start, stop, q, free_pos, n, cayley, add_t, mul_t):
    e = np.zeros(n, np.int64)
    sq = np.zeros(n, np.int64)
    m = free_pos.shape[0]
    for c in range(max(start, 1), stop):
        x = c
        for j in range(m):
            e[free_pos[j]] = x % q
            x //= q
        _conv_into(sq, e, e, cayley, add_t, mul_t)
        same = True
        for i in range(n):
            if sq[i] != e[i]:
                same = False
                break
        if same:
            return c
    return -1


@njit(cache=True, nogil=True)
def _radical_sweep_nb(start, stop, q, n, identity, cayley, add_t, mul_t, seen):
    count = stop - start
    pre = np.zeros(count, np.int64)
    per = np.zeros(count, np.int64)
    inrad = np.zeros(count, np.bool_)
    nil = np.zeros(count, np.bool_)
    cap = seen.shape[0] + 2
    hist_code = np.zeros(cap, np.int64)
    hist_tr = np.zeros(cap, np.int64)
    u = np.zeros(n, np.int64)
    pw = np.zeros(n, np.int64)
    nxt = np.zeros(n, np.int64)
    for c in range(start, stop):
        x = c
        for i in range(n):
            u[i] = x % q
            pw[i] = u[i]
            x //= q
        m = 1
        j = 0
        while True:
            code = 0
            for i in range(n - 1, -1, -1):
                code = code * q + pw[i]
            if seen[code] >= 0:
                j = seen[code]
                break
            seen[code] = m
            hist_code[m] = code
            hist_tr[m] = pw[identity]
            m += 1
            _conv_into(nxt, pw, u, cayley, add_t, mul_t)
            for i in range(n):
                pw[i] = nxt[i]
        r = c - start
        pre[r] = j
        per[r] = m - j
        ok = True
        for s in range(j, m):
            if hist_tr[s] != 0:
                ok = False
                break
        inrad[r] = ok
        nil[r] = hist_code[j] == 0
        for s in range(1, m):
            seen[hist_code[s]] = -1
    return pre, per, inrad, nil


@njit(cache=True, nogil=True)
def _laurent_sweep_nb(cur, off, p, steps):
    L = cur.shape[0]
    shift = p - 1
    traces = np.zeros(steps, np.int64)
    nxt = np.zeros(L, np.int64)
    for s in range(steps):
        for i in range(L):
            acc = 0
            if i + 1 < L:
                acc += cur[i + 1]
            if i - shift >= 0:
                acc += cur[i - shift]
            nxt[i] = acc % p
        for i in range(L):
            cur[i] = nxt[i]
        traces[s] = cur[off]
    return traces, cur


# -- numpy paths ---------------------------------------------------------------

def _conv_np(F, G, u, v):
    n = G.order
    nz_u = np.flatnonzero(u)
    nz_v = np.flatnonzero(v)
    if nz_u.size == 0 or nz_v.size == 0:
        return np.zeros(n, dtype=np.int64)
    prod = F.mul(u[nz_u][:, None], v[nz_v][None, :])
    targets = G.table[np.ix_(nz_u, nz_v)]
    return F.scatter_sum(prod, targets, n)


def _conv_batch_np(F, G, U, V):
    """Row-wise products of two ``B x n`` batches."""
    B, n = U.shape
    prod = F.mul(U[:, :, None], V[:, None, :])
    targets = G.table[None, :, :] + (np.arange(B, dtype=np.int64) * n)[:, None, None]
    return F.scatter_sum(prod, targets, B * n).reshape(B, n)


def _batch_size(n: int) -> int:
    return max(1, min(4096, (1 << 21) // max(1, n * n)))


def _decode(codes, q, positions, n):
    out = np.zeros((codes.shape[0], n), dtype=np.int64)
    x = codes.copy()
    for pos in positions:
        out[:, pos] = x % q
        x //= q
    return out


def _idempotent_scan_np(F, G, start, stop, free_pos):
    q, n = F.order, G.order
    step = _batch_size(n)
    for lo in range(max(start, 1), stop, step):
        codes = np.arange(lo, min(stop, lo + step), dtype=np.int64)
        E = _decode(codes, q, free_pos, n)
        hit = np.flatnonzero(np.all(_conv_batch_np(F, G, E, E) == E, axis=1))
        if hit.size:
            return int(codes[hit[0]])
    return -1


def _radical_sweep_np(F, G, start, stop):
    q, n = F.order, G.order
    weights = np.array([q ** i for i in range(n)], dtype=np.int64)
    pre_all, per_all, rad_all, nil_all = [], [], [], []
    step = _batch_size(n)
    for lo in range(start, stop, step):
        codes = np.arange(lo, min(stop, lo + step), dtype=np.int64)
        B = codes.shape[0]
        U = _decode(codes, q, range(n), n)
        P = U.copy()
        hist_code, hist_tr = [], []
        active = np.ones(B, dtype=bool)
        pre = np.zeros(B, dtype=np.int64)
        per = np.zeros(B, dtype=np.int64)
        m = 1
        while active.any():
            code = P @ weights
            if hist_code:
                H = np.stack(hist_code, axis=1)
                match = H == code[:, None]
                found = active & match.any(axis=1)
                pre[found] = np.argmax(match[found], axis=1) + 1
                per[found] = m - pre[found]
                active &= ~found
            hist_code.append(code)
            hist_tr.append(P[:, G.identity].copy())
            P = _conv_batch_np(F, G, P, U)
            m += 1
        H = np.stack(hist_code, axis=1)
        T = np.stack(hist_tr, axis=1)
        cols = np.arange(1, H.shape[1] + 1)[None, :]
        window = (cols >= pre[:, None]) & (cols < (pre + per)[:, None])
        pre_all.append(pre)
        per_all.append(per)
        rad_all.append(~np.any(window & (T != 0), axis=1))
        nil_all.append(H[np.arange(B), pre - 1] == 0)
    if not pre_all:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty.astype(bool), empty.astype(bool)
    return (np.concatenate(pre_all), np.concatenate(per_all),
            np.concatenate(rad_all), np.concatenate(nil_all))


def _laurent_sweep_np(cur, off, p, steps):
    cur = cur.copy()
    shift = p - 1
    traces = np.zeros(steps, dtype=np.int64)
    for s in range(steps):
        nxt = np.zeros_like(cur)
        nxt[:-1] += cur[1:]
        nxt[shift:] += cur[: cur.shape[0] - shift]
        cur = nxt % p
        traces[s] = cur[off]
    return traces, cur


# -- dispatchers ------------------------------------------------------------------

def convolve(F, G, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Coefficient vector of ``u v`` in ``F[G]``."""
    tabs = _tables(F)
    if tabs is not None:
        return _conv_nb(u, v, G.table, *tabs)
    return _conv_np(F, G, u, v)


def idempotent_scan(F, G, start: int, stop: int, free_pos: np.ndarray) -> int:
    """First candidate code in ``[start, stop)`` whose element is a nonzero idempotent, else -1."""
    tabs = _tables(F)
    if tabs is not None:
        return int(_idempotent_scan_nb(start, stop, F.order, free_pos, G.order, G.table, *tabs))
    return _idempotent_scan_np(F, G, start, stop, free_pos)


def radical_sweep(F, G, start: int, stop: int):
    """Per-element ``(preperiod, period, in_radical, nilpotent)`` for codes in ``[start, stop)``.

    The code of an element is ``sum(coeff[i] * q**i)`` over all group indices.
    """
    tabs = _tables(F)
    if tabs is not None:
        seen = np.full(F.order ** G.order, -1, dtype=np.int64)
        return _radical_sweep_nb(start, stop, F.order, G.order, G.identity, G.table, *tabs, seen)
    return _radical_sweep_np(F, G, start, stop)


def laurent_sweep(cur: np.ndarray, off: int, p: int, steps: int):
    """Multiply a dense Laurent vector by ``z^-1 + z^(p-1)`` ``steps`` times.

    Returns the constant term after each step and the final vector.  The
    caller sizes ``cur`` so that no exponent leaves the window.
    """
    cur = np.ascontiguousarray(cur, dtype=np.int64)
    if _backend == "numba":
        return _laurent_sweep_nb(cur.copy(), off, p, steps)
    return _laurent_sweep_np(cur, off, p, steps)


def first_hit(scan: Callable[[int, int], int], total: int, chunk: int, workers: int = 1) -> int:
    """Smallest code in ``[0, total)`` reported by ``scan`` over chunked ranges.

    Chunks are processed in waves of ``workers``; the answer is the minimum
    hit of the first wave that has one, so it does not depend on scheduling.
    """
    bounds = [(lo, min(total, lo + chunk)) for lo in range(0, total, chunk)]
    if workers <= 1:
        for lo, hi in bounds:
            hit = scan(lo, hi)
            if hit >= 0:
                return hit
        return -1
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for w in range(0, len(bounds), workers):
            wave = bounds[w:w + workers]
            hits = [h for h in pool.map(lambda b: scan(*b), wave) if h >= 0]
            if hits:
                return min(hits)
    return -1


def warm_up() -> None:
    """Compile every numba kernel once on a tiny input."""
    if not HAS_NUMBA:
        return
    t = np.zeros((2, 2), dtype=np.int64)
    t[0, 1] = t[1, 0] = 1
    add_t = np.array([[0, 1], [1, 0]], dtype=np.int64)
    mul_t = np.array([[0, 0], [0, 1]], dtype=np.int64)
    u = np.array([1, 1], dtype=np.int64)
    _conv_nb(u, u, t, add_t, mul_t)
    _idempotent_scan_nb(0, 2, 2, np.array([1], dtype=np.int64), 2, t, add_t, mul_t)
    _radical_sweep_nb(0, 4, 2, 2, 0, t, add_t, mul_t, np.full(4, -1, dtype=np.int64))
    _laurent_sweep_nb(np.zeros(4, dtype=np.int64), 1, 2, 1)
