"""Sparse row echelon forms over QQ and GF(p).

Rows are dicts ``column -> coefficient``.  The pivot of a row is its largest
column, so with columns numbered in degree-lexicographic order the pivot of
a relation row is its leading word.

Over QQ rows are kept as primitive integer vectors and eliminated
fraction-free: ``r <- a*r - b*P`` followed by removal of the content.
Over GF(p) pivots are normalized to 1.  Large-enough GF(p) batches are sent
to the dense kernels in :mod:`ncreduce.kernels`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .freealg import PrimeField, RationalField

# below this many cells the dense kernel's setup cost is not worth paying
DENSE_MIN_CELLS = 256
DENSE_MAX_CELLS = 1 << 22


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for c in row.values():
        g = math.gcd(g, c)
        if g == 1:
            return row
    if g > 1:
        return {k: c // g for k, c in row.items()}
    return row


def integer_row(row: Mapping[int, object]) -> dict[int, int]:
    """Scale a rational row to a primitive integer row."""
    if all(type(c) is int for c in row.values()):
        return _primitive({k: c for k, c in row.items() if c})
    den = 1
    fr = {}
    for k, c in row.items():
        c = Fraction(c)
        if c:
            fr[k] = c
            den = den * c.denominator // math.gcd(den, c.denominator)
    return _primitive({k: int(c * den) for k, c in fr.items()})


class SparseEchelon:
    """An echelon basis of a subspace, keyed by pivot column."""

    def __init__(self, field):
        self.field = field
        self.modular = isinstance(field, PrimeField)
        self.p = field.p if self.modular else 0
        self.pivots: dict[int, dict[int, object]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rows(self) -> list[dict[int, object]]:
        return [self.pivots[c] for c in sorted(self.pivots)]

    def _prepare(self, row: Mapping[int, object]) -> dict[int, object]:
        if self.modular:
            f = self.field
            return {k: f(c) for k, c in row.items() if f(c)}
        return integer_row(row)

    def add_pivot_row(self, row: Mapping[int, object], prepared: bool = False) -> None:
        """Insert a row whose pivot is known to be new; no reduction."""
        if not prepared:
            row = self._prepare(row)
        if not row:
            return
        c = max(row)
        if c in self.pivots:
            raise ValueError(f"pivot column {c} already present")
        if self.modular:
            inv = pow(row[c], -1, self.p)
            if inv != 1:
                row = {k: v * inv % self.p for k, v in row.items()}
        self.pivots[c] = row

    def insert(self, row: Mapping[int, object]) -> bool:
        """Reduce ``row`` against the basis; keep it if something is left."""
        row = self._prepare(row)
        pivots = self.pivots
        if self.modular:
            p = self.p
            while row:
                c = max(row)
                piv = pivots.get(c)
                if piv is None:
                    inv = pow(row[c], -1, p)
                    if inv != 1:
                        row = {k: v * inv % p for k, v in row.items()}
                    pivots[c] = row
                    return True
                f = row[c]
                for k, v in piv.items():
                    s = (row.get(k, 0) - f * v) % p
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
            return False
        while row:
            c = max(row)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = row
                return True
            a, b = piv[c], row[c]
            g = math.gcd(a, b)
            a, b = a // g, b // g
            if a < 0:
                a, b = -a, -b
            new = {k: a * v for k, v in row.items()} if a != 1 else row
            for k, v in piv.items():
                s = new.get(k, 0) - b * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            row = _primitive(new)
        return False

    def extend(self, rows: Iterable[Mapping[int, object]]) -> int:
        return sum(self.insert(r) for r in rows)

    def normal_form(self, vec: Mapping[int, object]) -> dict[int, object]:
        """Fully reduce ``vec``; the result has no pivot columns.

        Over QQ the result carries Fraction coefficients.
        """
        f = self.field
        if self.modular:
            out = {k: f(c) for k, c in vec.items() if f(c)}
        else:
            out = {k: Fraction(c) for k, c in vec.items() if c}
        pivots = self.pivots
        while True:
            hits = [k for k in out if k in pivots]
            if not hits:
                return out
            c = max(hits)
            piv = pivots[c]
            if self.modular:
                m = out[c]
                for k, v in piv.items():
                    s = (out.get(k, 0) - m * v) % self.p
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
            else:
                m = out[c] / piv[c]
                for k, v in piv.items():
                    s = out.get(k, 0) - m * v
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self.normal_form(vec)


def echelon(field, rows: list[Mapping[int, object]], ncols: int,
            pivot_rows: list[Mapping[int, object]] = ()) -> SparseEchelon:
    """Echelon basis of the span of ``pivot_rows`` + ``rows``.

    ``pivot_rows`` must already have pairwise distinct pivots and be rows of
    an echelon basis over ``field`` (primitive integers, or monic mod p).  Over GF(p),
    mid-sized batches are reduced densely by the compiled kernel.
    """
    modular = isinstance(field, PrimeField)
    nrows = len(rows) + len(pivot_rows)
    cells = nrows * ncols
    if modular and DENSE_MIN_CELLS <= cells <= DENSE_MAX_CELLS:
        return dense_echelon_mod_p(field, list(pivot_rows) + list(rows), ncols)
    ech = SparseEchelon(field)
    for r in pivot_rows:
        ech.add_pivot_row(r, prepared=True)
    for r in rows:
        ech.insert(r)
    return ech


def dense_echelon_mod_p(field: PrimeField, rows: list[Mapping[int, object]], ncols: int) -> SparseEchelon:
    p = field.p
    mat = np.zeros((len(rows), ncols), dtype=np.int64)
    last = ncols - 1
    for i, r in enumerate(rows):
        for k, c in r.items():
            # reversed columns: the leftmost pivot of the kernel is the largest word
            mat[i, last - k] = field(c)
    red, piv = kernels.rref_mod_p(mat, p)
    ech = SparseEchelon(field)
    for i in range(red.shape[0]):
        nz = np.nonzero(red[i])[0]
        ech.pivots[last - int(piv[i])] = {last - int(j): int(red[i, j]) for j in nz}
    return ech


def rank(field, rows: list[Mapping[int, object]], ncols: int) -> int:
    if isinstance(field, RationalField):
        ech = SparseEchelon(field)
        ech.extend(rows)
        return ech.rank
    return echelon(field, rows, ncols).rank
