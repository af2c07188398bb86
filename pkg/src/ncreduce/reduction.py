"""Reduction of rational presentations at a prime and the good-reduction tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .dvr import (PLocalSmithForm, Valuation, _as_valuation, _vp_int, normalize_content,
                  p_local_smith, reduce_poly, reduced_ring, scale_to_integral)
from .freealg import QQ, RationalField
from .presentations import (FILTERED, GRADED, GrCheck, HilbertTable, ModeError, Presentation,
                            ZeroDivisorWitness, check_gr_presentation, filtered_dims, hilbert_dims,
                            leading_ideal_presentation, multiples_matrix, rees_presentation,
                            truncation, zero_divisor_scan)


def _require_rational(pres: Presentation):
    if not isinstance(pres.field, RationalField):
        raise ValueError("reduction starts from a presentation over QQ")


def reduce_presentation(pres: Presentation, v) -> Presentation:
    """Content-normalize every relation, then reduce it coefficientwise mod p."""
    _require_rational(pres)
    v = _as_valuation(v)
    ring = reduced_ring(pres.ring, v)
    kept, dropped = [], []
    for r in pres.relations:
        rbar = reduce_poly(normalize_content(r, v), v)
        if rbar.is_zero():
            dropped.append(r)
        else:
            kept.append(rbar)
    return Presentation(ring, tuple(kept), pres.mode, tuple(dropped))


@dataclass(frozen=True)
class ReductionReport:
    p: int
    max_degree: int
    dims_K: HilbertTable
    dims_kv: HilbertTable
    defect: tuple[int, ...]
    reduces_well: bool
    domain_up_to_N: bool
    first_bad_degree: int | None
    zero_divisor: ZeroDivisorWitness | None = None
    dropped_relations: int = 0


def good_reduction_report(pres: Presentation, v, N: int) -> ReductionReport:
    """Compare Hilbert functions over QQ and over GF(p) up to degree N."""
    _require_rational(pres)
    if pres.mode != GRADED:
        raise ModeError("good_reduction_report needs a graded presentation; use lift_report")
    v = _as_valuation(v)
    red = reduce_presentation(pres, v)
    dk = hilbert_dims(pres, N)
    dv = hilbert_dims(red, N)
    defect = tuple(b - a for a, b in zip(dk.dims, dv.dims))
    if any(d < 0 for d in defect):
        raise AssertionError(f"semicontinuity violated at p={v.p}: {dk.dims} vs {dv.dims}")
    bad = next((n for n, d in enumerate(defect) if d), None)
    zd = zero_divisor_scan(red, N, first_only=True)
    return ReductionReport(
        p=v.p,
        max_degree=N,
        dims_K=dk,
        dims_kv=dv,
        defect=defect,
        reduces_well=bad is None,
        domain_up_to_N=not zd,
        first_bad_degree=bad,
        zero_divisor=zd[0] if zd else None,
        dropped_relations=len(red.dropped),
    )


def saturation_defect(pres: Presentation, v, n: int) -> int:
    """rank_QQ - rank_GF(p) of the literal degree-n relation multiples.

    Built from the rows u*r*w directly, independently of the incremental
    engine behind :func:`good_reduction_report`.
    """
    _require_rational(pres)
    if pres.mode != GRADED:
        raise ModeError("saturation_defect needs a graded presentation")
    v = _as_valuation(v)
    normalized = pres.with_relations([normalize_content(r, v) for r in pres.relations])
    rows, ncols = multiples_matrix(normalized, n, GRADED)
    rational = linalg.SparseEchelon(QQ)
    rational.extend(rows)
    fp = v.residue_field
    reduced = [{k: fp(c) for k, c in r.items()} for r in rows]
    modular = linalg.rank(fp, reduced, ncols)
    return rational.rank - modular


@dataclass(frozen=True)
class LiftReport:
    """Filtered presentation checked through its leading-ideal presentation."""

    p: int
    max_degree: int
    leading: Presentation
    gr_check: GrCheck
    gr_report: ReductionReport
    filtered_dims_K: HilbertTable
    filtered_dims_kv: HilbertTable
    filtered_defect: tuple[int, ...]
    lift_applies: bool
    lift_verified: bool

    @property
    def reduces_well(self) -> bool:
        return not any(self.filtered_defect)

    @property
    def first_bad_degree(self) -> int | None:
        return next((n for n, d in enumerate(self.filtered_defect) if d), None)


def lift_report(pres: Presentation, v, N: int) -> LiftReport:
    """If gr reduces well and the leading parts present gr, filtered dims must lift."""
    _require_rational(pres)
    v = _as_valuation(v)
    if pres.mode != FILTERED:
        pres = pres.with_mode(FILTERED)
    lead = leading_ideal_presentation(pres)
    gr_check = check_gr_presentation(pres, N)
    gr_report = good_reduction_report(lead, v, N)
    fk = filtered_dims(pres, N)
    fv = filtered_dims(reduce_presentation(pres, v), N)
    fdef = tuple(b - a for a, b in zip(fk.dims, fv.dims))
    applies = gr_check.ok and gr_report.reduces_well
    verified = fk.differences() == gr_report.dims_kv.dims and not any(fdef)
    return LiftReport(v.p, N, lead, gr_check, gr_report, fk, fv, fdef, applies, verified)


# -- lattices ----------------------------------------------------------------------


def _image_rows(pres: Presentation, M: int, n: int):
    """Normal forms of all words of degree <= n inside the degree-<=M truncation."""
    eng = truncation(pres, FILTERED)
    words = pres.ring.words_up_to(n)
    return [eng.word_normal_form(w, M) for w in words], eng


def lattice_rank(pres: Presentation, v, n: int) -> PLocalSmithForm:
    """p-local Smith form of the lattice spanned by the images of words of degree <= n."""
    _require_rational(pres)
    rows, _ = _image_rows(pres, n, n)
    rows, _ = scale_to_integral(rows, v)
    return p_local_smith(rows, v)


def lattice_rank_check(pres: Presentation, v, n: int) -> bool:
    """rank over O_v of F_n(Lambda) equals dim_K F_nA."""
    expected = truncation(pres, FILTERED).dim(n)
    return lattice_rank(pres, v, n).rank == expected


def _eliminate_columns(rows: list[dict[int, int]], cols, p: int) -> list[dict[int, int]]:
    """Unimodular Z_(p) row operations clearing ``cols``; returns rows with no entry there."""
    work = [dict(r) for r in rows if r]
    for c in sorted(cols, reverse=True):
        best = None
        for i, r in enumerate(work):
            b = r.get(c)
            if b is not None:
                e = _vp_int(b, p)
                if best is None or e < best[0]:
                    best = (e, i)
        if best is None:
            continue
        piv = work.pop(best[1])
        a = piv[c]
        nxt = []
        for r in work:
            b = r.get(c)
            if b is not None:
                g = math.gcd(a, b)
                ca, cb = a // g, b // g
                new = {}
                for k in r.keys() | piv.keys():
                    s = ca * r.get(k, 0) - cb * piv.get(k, 0)
                    if s:
                        new[k] = s
                r = new
            if r:
                nxt.append(r)
        work = nxt
    return work


@dataclass(frozen=True)
class Obs21Result:
    """Smith exponents of p^a*(Lambda meet F_n) and of (p^a*Lambda) meet F_n.

    ``saturated`` records whether the words of degree <= n already span
    Lambda meet F_n; it can fail at primes where sigma-type data is not
    integral, and does not enter ``ok``.
    """

    ok: bool
    truncated: tuple[int, ...]
    intersected: tuple[int, ...]
    a: int
    saturated: bool = True

    def __bool__(self):
        return self.ok


def obs21_invariants(pres: Presentation, v, n: int, a: int, margin: int | None = None) -> Obs21Result:
    """Compare p^a*(Lambda meet F_n) with (p^a*Lambda) meet F_n at truncation n + margin.

    Lambda is the O_v-span of the images of all words.  Each meet is formed
    inside the degree-(n + margin) truncation by clearing the coordinates of
    standard words of degree > n with unimodular Z_(p) row operations; the
    left side scales after intersecting, the right side before.
    """
    _require_rational(pres)
    v = _as_valuation(v)
    if a < 0:
        raise ValueError("a must be nonnegative")
    if margin is None:
        margin = max((r.degree() for r in pres.relations), default=1)
    M = n + margin
    eng = truncation(pres, FILTERED)
    all_rows, _ = _image_rows(pres, M, M)
    scaled, _ = scale_to_integral(all_rows, v)
    one = Fraction(1)
    shift = Fraction(v.p) ** a
    base = [linalg_int_row(r, one, v.p) for r in scaled]
    n_low = len(pres.ring.words_up_to(n))
    std_high = [c for c in range(n_low, len(eng.columns(M))) if c not in eng.echelon(M).pivots]
    meet = _eliminate_columns(base, std_high, v.p)
    lhs_rows = [{k: c * v.p ** a for k, c in r.items()} for r in meet]
    rhs_rows = _eliminate_columns([linalg_int_row(r, shift, v.p) for r in scaled], std_high, v.p)
    lhs = p_local_smith(lhs_rows, v).exponents
    rhs = p_local_smith(rhs_rows, v).exponents
    words_only = p_local_smith(base[:n_low], v).exponents
    return Obs21Result(lhs == rhs, lhs, rhs, a, words_only == p_local_smith(meet, v).exponents)


def linalg_int_row(row: dict[int, Fraction], scale: Fraction, p: int) -> dict[int, int]:
    """Scale by ``scale`` and clear p-free denominators (a unit multiple)."""
    den = 1
    vals = {}
    for k, c in row.items():
        c = Fraction(c) * scale
        if c:
            vals[k] = c
            den = den * c.denominator // math.gcd(den, c.denominator)
    if den % p == 0:
        raise ValueError("row is not p-integral")
    return {k: int(c * den) for k, c in vals.items()}


def obs21_check(pres: Presentation, v, n: int, a: int) -> bool:
    return obs21_invariants(pres, v, n, a).ok


def rees_lattice_check(pres: Presentation, v, N: int) -> bool:
    """Through Rees degree N, the integral Rees lattice meets the kernel of T := 1
    exactly in (T - 1) times the lattice one degree down.

    The lattice is the O_v-span of word images.  Both sides are compared by
    their p-local Smith exponents, which suffices since one contains the other.
    """
    _require_rational(pres)
    v = _as_valuation(v)
    if pres.mode != FILTERED:
        pres = pres.with_mode(FILTERED)
    rees = rees_presentation(pres)
    t = rees.ring.ngens - 1
    big = truncation(rees, GRADED)
    small = truncation(pres, FILTERED)
    offsets = [0]
    for n in range(N + 1):
        offsets.append(offsets[-1] + len(big.columns(n)))
    base = offsets[-1]

    def rees_vec(w, n):
        return {offsets[n] + k: c for k, c in big.word_normal_form(w, n).items()}

    gens, cuts = [], []
    for n in range(N + 1):
        for w in rees.ring.words_of_degree(n):
            row = rees_vec(w, n)
            stripped = tuple(x for x in w if x != t)
            row.update({base + k: c for k, c in small.word_normal_form(stripped, N).items()})
            gens.append(row)
    for n in range(N):
        for w in rees.ring.words_of_degree(n):
            row = dict(rees_vec(w + (t,), n + 1))
            for k, c in rees_vec(w, n).items():
                row[k] = row.get(k, 0) - c
            cuts.append({k: c for k, c in row.items() if c})
    scaled, _ = scale_to_integral(gens + cuts, v)
    one = Fraction(1)
    ints = [linalg_int_row(r, one, v.p) for r in scaled]
    gens, cuts = ints[:len(gens)], ints[len(gens):]
    phi_cols = sorted({k for r in gens for k in r if k >= base})
    kernel = _eliminate_columns(gens, phi_cols, v.p)
    return p_local_smith(kernel, v).exponents == p_local_smith(cuts, v).exponents
