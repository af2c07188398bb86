"""p-adic valuation on QQ, reduction to GF(p), and p-local Smith invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .freealg import FreeAlgebra, NcPolynomial, PrimeField, Residue, is_prime

INF = math.inf


class NotIntegralError(ArithmeticError):
    """A scalar with negative valuation was pushed into the residue field."""


@dataclass(frozen=True)
class Valuation:
    """The discrete valuation of QQ attached to a prime ``p``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    @property
    def residue_field(self) -> PrimeField:
        return PrimeField(self.p)


def _as_valuation(v) -> Valuation:
    return v if isinstance(v, Valuation) else Valuation(int(v))


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp(q, v) -> int | float:
    """Exponent of p in q; ``math.inf`` for zero."""
    p = _as_valuation(v).p
    q = Fraction(q)
    if q == 0:
        return INF
    return _vp_int(q.numerator, p) - _vp_int(q.denominator, p)


def reduce_scalar(q, v) -> Residue:
    v = _as_valuation(v)
    q = Fraction(q)
    if vp(q, v) < 0:
        raise NotIntegralError(f"{q} is not integral at p={v.p}")
    return Residue(q.numerator * pow(q.denominator, -1, v.p), v.p)


def normalize_content(f: NcPolynomial, v) -> NcPolynomial:
    """Scale ``f`` by a power of p so that its smallest coefficient valuation is 0."""
    v = _as_valuation(v)
    if f.is_zero():
        raise ValueError("content of the zero polynomial")
    m = min(vp(c, v) for c in f.terms.values())
    return f.scale(Fraction(v.p) ** (-m))


def reduce_poly(f: NcPolynomial, v) -> NcPolynomial:
    v = _as_valuation(v)
    ring = f.ring.with_field(v.residue_field)
    out = {}
    for w, c in f.terms.items():
        out[w] = reduce_scalar(c, v).value
    return NcPolynomial(ring, out)


def scaled_degree(m: int, e: int) -> int:
    """ceil(m / e), exact for negative m."""
    if e <= 0:
        raise ValueError("ramification step must be positive")
    return -((-m) // e)


# -- p-local Smith form --------------------------------------------------------


@dataclass(frozen=True)
class PLocalSmithForm:
    rank: int
    exponents: tuple[int, ...]

    @property
    def unit_count(self) -> int:
        """Number of invariants that are units; equals the rank mod p."""
        return sum(1 for e in self.exponents if e == 0)


def _integral_row(row: Mapping[int, object], p: int) -> dict[int, int]:
    """Clear p-free denominators; multiplying by a unit keeps the lattice."""
    fr = {j: Fraction(c) for j, c in row.items() if c != 0}
    den = 1
    for c in fr.values():
        if c.denominator % p == 0:
            raise NotIntegralError(f"entry {c} is not integral at p={p}")
        den = den * c.denominator // math.gcd(den, c.denominator)
    return {j: int(c * den) for j, c in fr.items()}


def p_local_smith(rows: Sequence[Mapping[int, object]] | Sequence[Sequence], v) -> PLocalSmithForm:
    """Rank and p-exponents of the elementary divisors of a row lattice over Z_(p).

    ``rows`` is a list of sparse rows (column -> scalar) or of dense sequences.
    Elimination always pivots on an entry of least valuation, so exponents
    come out nondecreasing and no column operations are needed.
    """
    p = _as_valuation(v).p
    work: list[dict[int, int]] = []
    for r in rows:
        if not isinstance(r, Mapping):
            r = {j: c for j, c in enumerate(r) if c != 0}
        r = _integral_row(r, p)
        if r:
            work.append(r)

    exps: list[int] = []
    while work:
        best = None
        for i, r in enumerate(work):
            for j, c in sorted(r.items()):
                e = _vp_int(c, p)
                if best is None or e < best[0] or (e == best[0] and (i, j) < best[1:]):
                    best = (e, i, j)
                    if e == 0:
                        break
            if best is not None and best[0] == 0:
                break
        e, i, j = best
        exps.append(e)
        piv = work.pop(i)
        a = piv[j]
        nxt: list[dict[int, int]] = []
        for r in work:
            b = r.get(j)
            if b is not None:
                # r <- (a/p^e) r - (b/p^e) piv : unit multiple of r minus Z_(p) multiple of piv
                g = math.gcd(a, b)
                ca, cb = a // g, b // g
                new = {}
                for k in r.keys() | piv.keys():
                    c = ca * r.get(k, 0) - cb * piv.get(k, 0)
                    if c:
                        new[k] = c
                r = _strip_unit_content(new, p)
            if r:
                nxt.append(r)
        work = nxt
    exps.sort()
    return PLocalSmithForm(len(exps), tuple(exps))


def _strip_unit_content(row: dict[int, int], p: int) -> dict[int, int]:
    if not row:
        return row
    g = 0
    for c in row.values():
        g = math.gcd(g, c)
    g //= p ** _vp_int(g, p)
    if g > 1:
        row = {k: c // g for k, c in row.items()}
    return row


def scale_to_integral(rows: Sequence[Mapping[int, object]], v) -> tuple[list[dict[int, Fraction]], int]:
    """Multiply every row by one power p^k so all entries are p-integral; returns (rows, k)."""
    v = _as_valuation(v)
    k = 0
    for r in rows:
        for c in r.values():
            e = vp(c, v)
            if e < -k:
                k = -e
    s = Fraction(v.p) ** k
    return [{j: Fraction(c) * s for j, c in r.items()} for r in rows], k


def reduced_ring(ring: FreeAlgebra, v) -> FreeAlgebra:
    return ring.with_field(_as_valuation(v).residue_field)
