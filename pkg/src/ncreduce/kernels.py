"""Dense elimination over GF(p) on int64 arrays.

Each kernel has a numba version and a pure-numpy version with identical
output.  Set ``NCREDUCE_DISABLE_NUMBA=1`` before import to force the numpy
path (numba is also skipped when it is not installed).
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("NCREDUCE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _rref_mod_p_numpy(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.int64) % p
    m, n = a.shape
    pivots = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, col]), -1, p)
        a[r] = a[r] * inv % p
        factors = a[:, col].copy()
        factors[r] = 0
        rows = np.nonzero(factors)[0]
        if rows.size:
            a[rows] = (a[rows] - np.outer(factors[rows], a[r])) % p
        pivots[r] = col
        r += 1
    return a[:r], pivots[:r].copy()


def _rank_mod_p_numpy(a: np.ndarray, p: int) -> int:
    return _rref_mod_p_numpy(a, p)[0].shape[0]


if HAVE_NUMBA:

    @njit(cache=True)
    def _inv_mod(x, p):
        # extended Euclid; x in [1, p)
        t, new_t = 0, 1
        r, new_r = p, x
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @njit(cache=True)
    def _rref_mod_p_jit(a, p):
        m, n = a.shape
        for i in range(m):
            for j in range(n):
                a[i, j] %= p
        pivots = np.empty(min(m, n), dtype=np.int64)
        r = 0
        for col in range(n):
            if r == m:
                break
            k = -1
            for i in range(r, m):
                if a[i, col] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(n):
                    tmp = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = tmp
            inv = _inv_mod(a[r, col], p)
            for j in range(col, n):
                a[r, j] = a[r, j] * inv % p
            for i in range(m):
                if i == r:
                    continue
                f = a[i, col]
                if f == 0:
                    continue
                for j in range(col, n):
                    if a[r, j] != 0:
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[r] = col
            r += 1
        return r, pivots

    def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
        """Reduced row echelon form mod p; returns (nonzero rows, pivot columns)."""
        work = np.array(a, dtype=np.int64, copy=True)
        if work.size == 0:
            return work[:0], np.empty(0, dtype=np.int64)
        r, piv = _rref_mod_p_jit(work, np.int64(p))
        return work[:r], piv[:r].copy()

    @njit(cache=True)
    def _rank_mod_p_jit(a, p):
        m, n = a.shape
        r = 0
        for col in range(n):
            if r == m:
                break
            k = -1
            for i in range(r, m):
                if a[i, col] % p != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(n):
                    tmp = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = tmp
            inv = _inv_mod(a[r, col] % p, p)
            for i in range(r + 1, m):
                f = a[i, col] % p
                if f == 0:
                    continue
                f = f * inv % p
                for j in range(col, n):
                    a[i, j] = (a[i, j] - f * (a[r, j] % p)) % p
            r += 1
        return r

    def rank_mod_p(a: np.ndarray, p: int) -> int:
        work = np.array(a, dtype=np.int64, copy=True) % p
        if work.size == 0:
            return 0
        return int(_rank_mod_p_jit(work, np.int64(p)))

else:
    rref_mod_p = _rref_mod_p_numpy
    rank_mod_p = _rank_mod_p_numpy


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def nullspace_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : a @ x = 0 mod p}, one vector per row."""
    n = a.shape[1]
    rows, piv = rref_mod_p(a, p)
    free = [j for j in range(n) if j not in set(piv.tolist())]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, j in enumerate(free):
        basis[k, j] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = (-rows[i, j]) % p
    return basis
