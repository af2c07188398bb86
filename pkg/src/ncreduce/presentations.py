"""Finitely presented graded and filtered algebras, truncated at a finite degree.

Dimensions come from linear algebra on relation multiples rather than from
rewriting.  For a graded ideal generated by relations r_k the degree-n part is

    I_n = sum_x x * I_{n - deg x} + span{ r_k * w : deg r_k + deg w = n },

and for the filtered span S_n = span{u * r_k * w : total degree <= n} the same
recursion holds with "<= n".  The rows x*b inherit distinct leading words from
the echelon basis of the smaller degree, so only the r_k*w rows need reducing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels, linalg
from .freealg import (FreeAlgebra, NcPolynomial, PrimeField, StructureError, Word,
                      change_ring, homogenize, specialize)

GRADED = "graded"
FILTERED = "filtered"

DEFAULT_MAX_DEGREE = 8


class ModeError(ValueError):
    """Operation called on a presentation of the wrong mode."""


class PresentationError(ValueError):
    """Invalid presentation data."""


def _monic_key(f: NcPolynomial):
    fld = f.ring.field
    lead = f.terms[f.leading_word()]
    inv = fld.inv(lead)
    return frozenset((w, fld.mul(c, inv)) for w, c in f.terms.items())


@dataclass(frozen=True)
class Presentation:
    """K<X>/(relations), either graded or filtered by generator weights."""

    ring: FreeAlgebra
    relations: tuple[NcPolynomial, ...]
    mode: str = GRADED
    dropped: tuple[NcPolynomial, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.mode not in (GRADED, FILTERED):
            raise PresentationError(f"unknown mode {self.mode!r}")
        seen = set()
        rels = []
        for r in self.relations:
            if not isinstance(r, NcPolynomial) or r.ring != self.ring:
                raise StructureError("relations must live in the presentation's free algebra")
            if r.is_zero():
                raise PresentationError("zero relation")
            if r.degree() == 0:
                raise PresentationError("constant relation: the algebra would be zero")
            if self.mode == FILTERED and r.degree() == 1 and () in r.terms:
                raise PresentationError(f"unit relation {r!r}: a degree-one element set to a scalar")
            if self.mode == GRADED and not r.is_homogeneous():
                raise PresentationError(f"graded presentation with inhomogeneous relation {r!r}")
            key = _monic_key(r)
            if key not in seen:
                seen.add(key)
                rels.append(r)
        object.__setattr__(self, "relations", tuple(rels))

    @property
    def field(self):
        return self.ring.field

    @property
    def generators(self) -> list[tuple[str, int]]:
        return list(zip(self.ring.names, self.ring.degrees))

    def with_mode(self, mode: str) -> Presentation:
        return Presentation(self.ring, self.relations, mode)

    def with_relations(self, relations: Sequence[NcPolynomial]) -> Presentation:
        return Presentation(self.ring, tuple(relations), self.mode)

    def is_homogeneous(self) -> bool:
        return all(r.is_homogeneous() for r in self.relations)

    def __repr__(self):
        gens = ", ".join(self.ring.names)
        rels = ", ".join(repr(r) for r in self.relations)
        return f"<{gens} | {rels}> ({self.mode}, {self.field!r})"


def presentation(names, relations, mode: str = GRADED, degrees=None, field=None) -> Presentation:
    """Build a presentation from a callable or a list of relations.

    ``relations`` may be a function receiving the generators, e.g.
    ``presentation("xy", lambda x, y: [x*y - 2*y*x])``.
    """
    from .freealg import QQ

    ring = FreeAlgebra(names, degrees, QQ if field is None else field)
    if callable(relations):
        relations = relations(*ring.gens())
    return Presentation(ring, tuple(relations), mode)


@dataclass(frozen=True)
class HilbertTable:
    max_degree: int
    dims: tuple[int, ...]
    field: object
    mode: str

    def __getitem__(self, n):
        return self.dims[n]

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def differences(self) -> tuple[int, ...]:
        return tuple(d - (self.dims[n - 1] if n else 0) for n, d in enumerate(self.dims))


# -- the truncation engine -----------------------------------------------------


class IdealTruncation:
    """Degree-by-degree echelon bases of a two-sided ideal (graded) or of the
    filtered span of relation multiples."""

    def __init__(self, pres: Presentation, kind: str):
        if kind == GRADED and not pres.is_homogeneous():
            raise ModeError("graded truncation needs homogeneous relations")
        self.pres = pres
        self.kind = kind
        self.ring = pres.ring
        self.field = pres.field
        self.degrees = self.ring.degrees
        # relation terms as echelon-ready scalars: primitive integers over QQ
        self.relations = []
        for r in pres.relations:
            terms = dict(r.terms)
            if not isinstance(self.field, PrimeField):
                terms = linalg.integer_row(terms)
            self.relations.append((r.degree(), tuple(terms.items())))
        self._cols: list[tuple[Word, ...]] = []
        self._index: list[dict[Word, int]] = []
        self._ech: list[linalg.SparseEchelon] = []
        self._nf_cache: dict[tuple[int, Word], dict[int, object]] = {}

    def columns(self, n: int) -> tuple[Word, ...]:
        self._ensure(n)
        return self._cols[n]

    def index(self, n: int) -> dict[Word, int]:
        self._ensure(n)
        return self._index[n]

    def echelon(self, n: int) -> linalg.SparseEchelon:
        self._ensure(n)
        return self._ech[n]

    def _words(self, n: int) -> tuple[Word, ...]:
        if self.kind == GRADED:
            return self.ring.words_of_degree(n)
        return self.ring.words_up_to(n)

    def _ensure(self, n: int) -> None:
        while len(self._ech) <= n:
            self._step(len(self._ech))

    def _step(self, n: int) -> None:
        cols = self._words(n)
        index = {w: k for k, w in enumerate(cols)}
        self._cols.append(cols)
        self._index.append(index)
        pivot_rows = []
        for x, dx in enumerate(self.degrees):
            m = n - dx
            if m < 0:
                continue
            lower = self._cols[m]
            for row in self._ech[m].rows():
                pivot_rows.append({index[(x,) + lower[k]]: c for k, c in row.items()})
        rel_rows = []
        for e, r in self.relations:
            if e > n:
                continue
            tails = self.ring.words_of_degree(n - e) if self.kind == GRADED else self.ring.words_up_to(n - e)
            for w in tails:
                rel_rows.append({index[u + w]: c for u, c in r})
        self._ech.append(linalg.echelon(self.field, rel_rows, len(cols), pivot_rows))

    def dim(self, n: int) -> int:
        return len(self.columns(n)) - self.echelon(n).rank

    def dims(self, N: int) -> tuple[int, ...]:
        return tuple(self.dim(n) for n in range(N + 1))

    def standard_words(self, n: int) -> list[Word]:
        """Words that are not leading words of the span: a basis of the quotient."""
        piv = self.echelon(n).pivots
        return [w for k, w in enumerate(self.columns(n)) if k not in piv]

    def word_normal_form(self, w: Word, n: int) -> dict[int, object]:
        key = (n, w)
        nf = self._nf_cache.get(key)
        if nf is None:
            nf = self.echelon(n).normal_form({self.index(n)[w]: 1})
            self._nf_cache[key] = nf
        return nf

    def normal_form(self, f: NcPolynomial, n: int) -> dict[int, object]:
        idx = self.index(n)
        try:
            vec = {idx[w]: c for w, c in f.terms.items()}
        except KeyError as exc:
            raise ValueError(f"{f!r} has a term outside degree {n}") from exc
        return self.echelon(n).normal_form(vec)

    def in_span(self, f: NcPolynomial, n: int) -> bool:
        return not self.normal_form(f, n)


@lru_cache(maxsize=128)
def truncation(pres: Presentation, kind: str | None = None) -> IdealTruncation:
    return IdealTruncation(pres, kind or pres.mode)


# -- public operations -----------------------------------------------------------


def hilbert_dims(pres: Presentation, N: int) -> HilbertTable:
    if pres.mode != GRADED:
        raise ModeError("hilbert_dims needs a graded presentation; use filtered_dims")
    if N < 0:
        raise ValueError("N must be nonnegative")
    return HilbertTable(N, truncation(pres, GRADED).dims(N), pres.field, GRADED)


def filtered_dims(pres: Presentation, N: int) -> HilbertTable:
    if pres.mode != FILTERED:
        raise ModeError("filtered_dims needs a filtered presentation; use hilbert_dims")
    if N < 0:
        raise ValueError("N must be nonnegative")
    return HilbertTable(N, truncation(pres, FILTERED).dims(N), pres.field, FILTERED)


def leading_ideal_presentation(pres: Presentation) -> Presentation:
    if pres.mode != FILTERED:
        raise ModeError("leading ideal is taken of a filtered presentation")
    return Presentation(pres.ring, tuple(r.leading_part() for r in pres.relations), GRADED)


class GrCheck(NamedTuple):
    ok: bool
    first_failing_degree: int | None
    graded_dims: tuple[int, ...]
    filtered_differences: tuple[int, ...]

    def __bool__(self):
        return self.ok


def check_gr_presentation(pres: Presentation, N: int) -> GrCheck:
    """Does K<X>/(leading parts) have the same Hilbert function as gr of the filtration?"""
    if pres.mode != FILTERED:
        pres = pres.with_mode(FILTERED)
    gr = hilbert_dims(leading_ideal_presentation(pres), N).dims
    diffs = filtered_dims(pres, N).differences()
    bad = next((n for n in range(N + 1) if gr[n] != diffs[n]), None)
    return GrCheck(bad is None, bad, gr, diffs)


def rees_variable_name(ring: FreeAlgebra) -> str:
    name = "T"
    while name in ring.names:
        name += "_"
    return name


def rees_presentation(pres: Presentation) -> Presentation:
    """Homogenize with a new central degree-one generator T."""
    if pres.mode != FILTERED:
        pres = pres.with_mode(FILTERED)
    ring = pres.ring.extended(rees_variable_name(pres.ring), 1)
    t = ring.ngens - 1
    T = ring.gen(t)
    rels = [homogenize(change_ring(r, ring), t) for r in pres.relations]
    rels += [T * x - x * T for x in ring.gens()[:-1]]
    return Presentation(ring, tuple(rels), GRADED)


def specialize_presentation(rees: Presentation, value: int) -> list[NcPolynomial]:
    """Specialize the last generator of a Rees presentation at 0 or 1.

    Returns the nonzero specialized relations in the ring without T.
    """
    ring = rees.ring
    t = ring.ngens - 1
    base = FreeAlgebra(ring.names[:-1], ring.degrees[:-1], ring.field)
    out = []
    for r in rees.relations:
        s = specialize(r, t, value)
        if not s.is_zero():
            out.append(change_ring(s, base))
    return out


# -- zero divisors -------------------------------------------------------------


class ZeroDivisorWitness(NamedTuple):
    left: NcPolynomial
    right: NcPolynomial
    bidegree: tuple[int, int]


def _kernel_vector(field, vectors: list[dict[int, object]]):
    """A nonzero c with sum c_k vectors[k] == 0, or None."""
    m = len(vectors)
    if m == 0:
        return None
    if isinstance(field, PrimeField):
        ncols = 1 + max((k for v in vectors for k in v), default=-1)
        if ncols == 0:
            return [1] + [0] * (m - 1)
        mat = np.zeros((ncols, m), dtype=np.int64)
        for j, v in enumerate(vectors):
            for k, c in v.items():
                mat[k, j] = c
        basis = kernels.nullspace_mod_p(mat, field.p)
        if basis.shape[0] == 0:
            return None
        return [int(c) for c in basis[0]]
    # tag columns 0..m-1 sit below every data column, so a row whose pivot is a
    # tag column is a pure dependency
    ech = linalg.SparseEchelon(field)
    for j, v in enumerate(vectors):
        row = {m + k: Fraction(c) for k, c in v.items()}
        row[j] = Fraction(1)
        ech.insert(row)
    for piv, row in ech.pivots.items():
        if piv < m:
            return [Fraction(row.get(j, 0)) for j in range(m)]
    return None


def zero_divisor_scan(pres: Presentation, N: int, first_only: bool = False) -> list[ZeroDivisorWitness]:
    """Homogeneous pairs (f, g) of nonzero classes with f*g = 0, up to total degree N.

    Per bidegree: every pair of standard words with zero product, or else at
    most one pair found from the kernel of multiplication by a single
    standard word.  An empty list certifies only that no homogeneous zero
    divisor was found in degrees <= N.
    """
    if pres.mode != GRADED:
        raise ModeError("zero_divisor_scan needs a graded presentation")
    eng = truncation(pres, GRADED)
    ring = pres.ring
    fld = pres.field
    out: list[ZeroDivisorWitness] = []

    def poly(words, coeffs):
        return NcPolynomial(ring, {w: c for w, c in zip(words, coeffs) if c})

    for total in range(2, N + 1):
        for i in range(1, total):
            j = total - i
            left, right = eng.standard_words(i), eng.standard_words(j)
            if not left or not right:
                continue
            prod = {(a, b): eng.word_normal_form(a + b, total) for a in left for b in right}
            # every pair of standard words is tested exactly
            pairs = [(ring.word(a), ring.word(b)) for a in left for b in right if not prod[a, b]]
            if not pairs:
                for a in left:
                    c = _kernel_vector(fld, [prod[a, b] for b in right])
                    if c is not None:
                        pairs = [(ring.word(a), poly(right, c))]
                        break
            if not pairs:
                for b in right:
                    c = _kernel_vector(fld, [prod[a, b] for a in left])
                    if c is not None:
                        pairs = [(poly(left, c), ring.word(b))]
                        break
            for f, g in pairs:
                out.append(ZeroDivisorWitness(f, g, (i, j)))
                if first_only:
                    return out
    return out


def multiples_matrix(pres: Presentation, n: int, kind: str | None = None) -> tuple[list[dict[int, object]], int]:
    """Literal rows u*r*w of degree n (or <= n when filtered), column-indexed by words."""
    kind = kind or pres.mode
    ring = pres.ring
    cols = ring.words_of_degree(n) if kind == GRADED else ring.words_up_to(n)
    index = {w: k for k, w in enumerate(cols)}
    rows = []
    for r in pres.relations:
        e = r.degree()
        for du in range(n - e + 1):
            for u in ring.words_of_degree(du):
                rest = n - e - du
                tails = ring.words_of_degree(rest) if kind == GRADED else ring.words_up_to(rest)
                for w in tails:
                    rows.append({index[u + v + w]: c for v, c in r.terms.items()})
    return rows, len(cols)
