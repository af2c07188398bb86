"""Acceptance criteria; each test prints one PASS/FAIL line."""

import random
import time
from fractions import Fraction

from ncreduce import (FILTERED, GRADED, BadPrimeError, FreeAlgebra, GwaElement, NcPolynomial,
                      Presentation, UniPoly, bad_prime_detect, check_gr_presentation, filtered_dims,
                      good_reduction_report, gwa_catalog, gwa_commutator_check, gwa_dims, gwa_reduce,
                      gwa_to_presentation, hilbert_dims, lattice_rank_check, leading_ideal_presentation,
                      obs21_check, reduce_presentation, rees_presentation, specialize_presentation,
                      zero_divisor_scan)

import oracles
from corpus import lattice_corpus, quantum_plane, weyl


def test_criterion_1_good_reduction(criterion):
    pres = quantum_plane(3)
    start = time.perf_counter()
    reports = {p: good_reduction_report(pres, p, 8) for p in (2, 5, 7)}
    elapsed = time.perf_counter() - start
    expected = tuple(range(1, 10))
    rels = [dict(r.terms) for r in pres.relations]
    oracle_K = tuple(oracles.graded_dims(2, rels, 8))
    ok = oracle_K == expected and elapsed < 5.0
    for p, rep in reports.items():
        oracle_p = tuple(oracles.graded_dims(2, rels, 8, p=p))
        ok &= rep.dims_K.dims == expected == rep.dims_kv.dims == oracle_p
        ok &= rep.defect == (0,) * 9 and rep.reduces_well
    criterion(1, ok, f"quantum plane q=3, p in (2, 5, 7), N=8: dims {expected} over QQ and GF(p), "
                     f"defect 0, dense oracle agrees, {elapsed:.2f}s (< 5s)")


def test_criterion_2_domain_loss(criterion):
    pres = quantum_plane(2)
    rep = good_reduction_report(pres, 2, 6)
    red = reduce_presentation(pres, 2)
    w = zero_divisor_scan(red, 6)[0]
    x, y = red.ring.gens()
    ok = (rep.defect == (0,) * 7 and not rep.domain_up_to_N
          and (w.left, w.right, tuple(w.bidegree)) == (x, y, (1, 1))
          and (rep.zero_divisor.left, rep.zero_divisor.right) == (x, y))
    criterion(2, ok, f"quantum plane q=2 at p=2, N=6: defect {rep.defect}, "
                     f"witness ({w.left!r}, {w.right!r}) at bidegree {tuple(w.bidegree)}")


def test_criterion_3_lift(criterion):
    pres = weyl()
    N = 8
    lead = leading_ideal_presentation(pres)
    x, y = pres.ring.gens()
    gr_ok = check_gr_presentation(pres, N).ok
    gr_red = hilbert_dims(reduce_presentation(lead, 5), N).dims
    filt = filtered_dims(pres, N)
    ok = (lead.relations == (x * y - y * x,) and gr_ok
          and gr_red == tuple(n + 1 for n in range(N + 1))
          and filt.dims == tuple((n + 1) * (n + 2) // 2 for n in range(N + 1))
          and filt.differences() == gr_red)
    criterion(3, ok, f"Weyl at p=5, N=8: leading ideal <{lead.relations[0]!r}>, gr check {gr_ok}, "
                     f"reduced gr dims {gr_red}, filtered dims {filt.dims}")


def test_criterion_4_rees(criterion):
    results = []
    for label, pres in (("Weyl", weyl()), ("quantum plane q=3", quantum_plane(3, FILTERED))):
        rees = rees_presentation(pres)
        dims_ok = hilbert_dims(rees, 8).dims == filtered_dims(pres, 8).dims
        at1 = specialize_presentation(rees, 1)
        at0 = specialize_presentation(rees, 0)
        spec_ok = (sorted(map(repr, at1)) == sorted(map(repr, pres.relations))
                   and sorted(map(repr, at0)) == sorted(map(repr, leading_ideal_presentation(pres).relations)))
        results.append((label, dims_ok, spec_ok))
    ok = all(d and s for _, d, s in results)
    criterion(4, ok, "; ".join(f"{lab}: Rees dims = filtered dims for n <= 8 {d}, "
                                f"T:=1 / T:=0 reproduce input / leading ideal {s}" for lab, d, s in results))


def test_criterion_5_gwa_identities(criterion):
    data = gwa_catalog("weyl")
    rng = random.Random(20261018)
    comm_ok = gwa_commutator_check(data) == UniPoly.const(1)
    X = GwaElement.X(data)
    rule_ok = True
    for _ in range(100):
        f = UniPoly([Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(0, 5))])
        shifted = f.compose_affine(1, 1)
        rule_ok &= X * GwaElement.poly(data, f) == GwaElement.poly(data, shifted) * X

    def rand_elem():
        comps = {}
        for _ in range(rng.randint(0, 3)):
            comps[rng.randint(-3, 3)] = UniPoly([Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(0, 4))])
        return GwaElement(data, comps)

    assoc_ok = True
    for _ in range(200):
        a, b, c = rand_elem(), rand_elem(), rand_elem()
        assoc_ok &= (a * b) * c == a * (b * c)
    cross_ok = all(filtered_dims(gwa_to_presentation(data, 2), N).dims == gwa_dims(data, N, 2).dims
                   for N in range(7))
    ok = comm_ok and rule_ok and assoc_ok and cross_ok
    criterion(5, ok, f"Weyl GWA: XY - YX = 1 {comm_ok}, X f(h) = f(h+1) X on 100 random f {rule_ok}, "
                     f"associativity on 200 triples {assoc_ok}, cross-model dims N <= 6 {cross_ok}")


def test_criterion_6_bad_prime(criterion):
    data = gwa_catalog("quantum_weyl", {"q": 3})
    verdict = bad_prime_detect(data, 3)
    try:
        gwa_reduce(data, 3)
        raised = False
    except BadPrimeError:
        raised = True
    bad_ok = (not verdict.good and verdict.coefficient == "alpha"
              and verdict.value == Fraction(1, 3) and verdict.valuation == -1 and raised)
    good = bad_prime_detect(data, 5).good
    commutes = gwa_to_presentation(gwa_reduce(data, 5)) == reduce_presentation(gwa_to_presentation(data), 5)
    ok = bad_ok and good and commutes
    criterion(6, ok, f"quantum Weyl q=3: p=3 bad ({verdict.reason}), gwa_reduce raised {raised}; "
                     f"p=5 good {good}, reductions commute {commutes}")


def test_criterion_7_semicontinuity_grid(criterion):
    p, N = 2, 5
    F = FreeAlgebra("xy")
    start = time.perf_counter()
    count, violations, defects, first = 0, 0, 0, None
    for rels in oracles.quadratic_grid(p):
        pres = Presentation(F, tuple(NcPolynomial(F, r) for r in rels), GRADED)
        dk = hilbert_dims(pres, N).dims
        dv = hilbert_dims(reduce_presentation(pres, p), N).dims
        count += 1
        if any(b < a for a, b in zip(dk, dv)):
            violations += 1
        if dk != dv:
            defects += 1
            if first is None:
                first = (rels, pres)
    elapsed = time.perf_counter() - start
    flagged = None
    oracle_ok = False
    if first is not None:
        rels, pres = first
        rep = good_reduction_report(pres, p, N)
        flagged = rep.first_bad_degree
        data = [dict(r) for r in rels]
        ok_k = list(rep.dims_K.dims) == oracles.graded_dims(2, data, N)
        ok_v = list(rep.dims_kv.dims) == oracles.graded_dims(2, data, N, p=p)
        bad = next(n for n in range(N + 1) if rep.defect[n])
        oracle_ok = ok_k and ok_v and flagged == bad and not rep.reduces_well
    ok = violations == 0 and first is not None and oracle_ok and elapsed < 60.0
    instance = " , ".join(repr(r) for r in first[1].relations) if first else "none"
    criterion(7, ok, f"{count} presentations at p=2, n <= 5: {violations} semicontinuity violations, "
                     f"{defects} with positive defect; first [{instance}] flagged at degree {flagged}; "
                     f"{elapsed:.1f}s (< 60s)")


def test_criterion_8_lattice_identities(criterion):
    failures = []
    checks = 0
    for label, pres in lattice_corpus():
        for p in (2, 3, 5):
            for n in range(5):
                checks += 1
                if not lattice_rank_check(pres, p, n):
                    failures.append(f"lattice_rank {label} p={p} n={n}")
                for a in range(3):
                    checks += 1
                    if not obs21_check(pres, p, n, a):
                        failures.append(f"obs21 {label} p={p} n={n} a={a}")
    ok = not failures
    detail = "none" if ok else ", ".join(failures[:5])
    criterion(8, ok, f"{checks} lattice checks over {len(lattice_corpus())} corpus presentations, "
                     f"p in (2, 3, 5), n <= 4, a <= 2; failures: {detail}")
