"""JSON presentation files and reduction reports."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from . import __version__
from .freealg import QQ, FreeAlgebra, NcPolynomial, PrimeField, parse_rational
from .presentations import FILTERED, GRADED, HilbertTable, Presentation, PresentationError


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _locate(text: str, needle) -> tuple[int, int]:
    token = json.dumps(needle) if not isinstance(needle, str) or not needle.startswith('"') else needle
    pos = text.find(token)
    if pos < 0:
        return 1, 1
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def parse_presentation(text: str) -> Presentation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None

    def fail(msg, near=None):
        line, col = _locate(text, near) if near is not None else (1, 1)
        raise ParseError(msg, line, col)

    if not isinstance(doc, dict):
        fail("top level must be an object")
    gens = doc.get("generators")
    if not isinstance(gens, list):
        fail('"generators" must be a list', "generators")
    names, degrees = [], []
    for g in gens:
        if not isinstance(g, dict) or not isinstance(g.get("name"), str) or not g["name"]:
            fail("each generator needs a nonempty string name", "generators")
        deg = g.get("degree", 1)
        if not isinstance(deg, int) or isinstance(deg, bool) or deg < 1:
            fail(f"generator {g['name']!r} needs a positive integer degree", g["name"])
        if g["name"] in names:
            fail(f"duplicate generator name {g['name']!r}", g["name"])
        names.append(g["name"])
        degrees.append(deg)
    mode = doc.get("mode", GRADED)
    if mode not in (GRADED, FILTERED):
        fail(f"mode must be {GRADED!r} or {FILTERED!r}", mode)
    field = QQ
    if "field" in doc:
        fld = doc["field"]
        if fld == "QQ":
            field = QQ
        elif isinstance(fld, str) and fld.startswith("GF(") and fld.endswith(")"):
            try:
                field = PrimeField(int(fld[3:-1]))
            except ValueError as exc:
                fail(str(exc), fld)
        else:
            fail(f"unknown field {fld!r}", fld)
    ring = FreeAlgebra(names, degrees, field)
    rels_doc = doc.get("relations", [])
    if not isinstance(rels_doc, list):
        fail('"relations" must be a list', "relations")
    rels = []
    for rel in rels_doc:
        if not isinstance(rel, list):
            fail("each relation is a list of terms", "relations")
        terms: dict = {}
        for term in rel:
            if not isinstance(term, dict) or "word" not in term or "coeff" not in term:
                fail('each term needs "word" and "coeff"', "relations")
            word = term["word"]
            if not isinstance(word, list) or any(w not in names for w in word):
                fail(f"word {word!r} uses an undeclared generator", word)
            coeff = term["coeff"]
            if not isinstance(coeff, (str, int)) or isinstance(coeff, bool):
                fail("coefficients are strings like \"3/4\"", coeff)
            try:
                c = parse_rational(str(coeff))
            except ValueError as exc:
                fail(str(exc), coeff)
            key = tuple(names.index(w) for w in word)
            terms[key] = terms.get(key, Fraction(0)) + c
        poly = NcPolynomial(ring, {w: field(c) for w, c in terms.items()})
        if poly.is_zero():
            fail("relation is zero", "relations")
        rels.append(poly)
    try:
        return Presentation(ring, tuple(rels), mode)
    except PresentationError as exc:
        fail(str(exc), "relations")


def load_presentation(path) -> tuple[Presentation, bytes]:
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError("file is not UTF-8") from None
    return parse_presentation(text), raw


def _coeff_str(field, c) -> str:
    if isinstance(field, PrimeField):
        return str(int(c))
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def presentation_to_doc(pres: Presentation) -> dict:
    ring = pres.ring
    doc = {
        "generators": [{"name": n, "degree": d} for n, d in zip(ring.names, ring.degrees)],
        "mode": pres.mode,
        "relations": [
            [{"word": [ring.names[i] for i in w], "coeff": _coeff_str(ring.field, c)}
             for w, c in r.sorted_terms()]
            for r in pres.relations
        ],
    }
    if ring.field != QQ:
        doc["field"] = repr(ring.field)
    return doc


def dumps(doc) -> str:
    """Stable serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_presentation(pres: Presentation) -> str:
    return dumps(presentation_to_doc(pres))


def input_hash(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def metadata(raw: bytes, primes, max_degree: int) -> dict:
    return {
        "tool": "ncreduce",
        "version": __version__,
        "input_sha256": input_hash(raw),
        "primes": list(primes),
        "max_degree": max_degree,
    }


def table_doc(t: HilbertTable) -> dict:
    return {"field": repr(t.field), "mode": t.mode, "dims": list(t.dims)}


def witness_doc(w) -> dict | None:
    if w is None:
        return None
    return {"left": repr(w.left), "right": repr(w.right), "bidegree": list(w.bidegree)}


def reduction_report_doc(rep, meta: dict) -> dict:
    warnings = []
    if not rep.domain_up_to_N and rep.zero_divisor is not None:
        z = rep.zero_divisor
        warnings.append(f"reduction has zero divisors: ({z.left!r}) * ({z.right!r}) = 0 "
                        f"in bidegree {tuple(z.bidegree)}")
    if rep.dropped_relations:
        warnings.append(f"{rep.dropped_relations} relation(s) vanished mod p")
    return {
        "metadata": meta,
        "p": rep.p,
        "max_degree": rep.max_degree,
        "dims_K": table_doc(rep.dims_K),
        "dims_kv": table_doc(rep.dims_kv),
        "defect": list(rep.defect),
        "reduces_well": rep.reduces_well,
        "domain_up_to_N": rep.domain_up_to_N,
        "first_bad_degree": rep.first_bad_degree,
        "zero_divisor": witness_doc(rep.zero_divisor),
        "warnings": warnings,
    }


def lift_report_doc(rep, meta: dict) -> dict:
    gr = reduction_report_doc(rep.gr_report, meta)
    gr.pop("metadata")
    doc = {
        "metadata": meta,
        "p": rep.p,
        "max_degree": rep.max_degree,
        "dims_K": table_doc(rep.filtered_dims_K),
        "dims_kv": table_doc(rep.filtered_dims_kv),
        "defect": list(rep.filtered_defect),
        "reduces_well": rep.reduces_well,
        "domain_up_to_N": rep.gr_report.domain_up_to_N,
        "first_bad_degree": rep.first_bad_degree,
        "zero_divisor": witness_doc(rep.gr_report.zero_divisor),
        "warnings": list(gr["warnings"]),
        "gr": gr,
        "leading_relations": [repr(r) for r in rep.leading.relations],
        "gr_presentation_ok": rep.gr_check.ok,
        "gr_first_failing_degree": rep.gr_check.first_failing_degree,
        "lift_applies": rep.lift_applies,
        "lift_verified": rep.lift_verified,
    }
    if rep.lift_applies and not rep.lift_verified:
        doc["warnings"].append("gr reduces well but the filtered dimensions did not lift")
    return doc
