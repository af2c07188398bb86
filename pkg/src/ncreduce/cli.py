"""ncreduce command line: dims, reduce, rees and gwa subcommands.

Exit codes: 0 success, 1 a defect (or bad prime) was found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__, fileio
from .freealg import QQ, is_prime
from .gwa import (CATALOG, BadPrimeError, CatalogError, GwaElement, UniPoly, bad_prime_detect,
                  gwa_catalog, gwa_commutator_check, gwa_dims, gwa_reduce, gwa_to_presentation,
                  natural_degree_of_h)
from .presentations import (DEFAULT_MAX_DEGREE, FILTERED, GRADED, ModeError, filtered_dims,
                            hilbert_dims, leading_ideal_presentation, rees_presentation,
                            specialize_presentation)
from .reduction import good_reduction_report, lift_report, reduce_presentation

MAX_GENERATORS = 4
MAX_DEGREE = 10

EXIT_OK, EXIT_DEFECT, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- helpers --------------------------------------------------------------------------


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    if p >= 2 ** 31:
        raise argparse.ArgumentTypeError(f"{p} is too large (primes must be below 2^31)")
    return p


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def _param(text: str) -> tuple[str, Fraction]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        return key.strip(), QQ(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _envelope(args, ngens: int | None = None):
    if args.unsafe_limits:
        return
    N = getattr(args, "max_degree", 0) or 0
    if N > MAX_DEGREE:
        raise UsageError(f"limit exceeded: --max-degree {N} > {MAX_DEGREE} (pass --unsafe-limits to override)")
    if ngens is not None and ngens > MAX_GENERATORS:
        raise UsageError(f"limit exceeded: {ngens} generators > {MAX_GENERATORS} "
                         "(pass --unsafe-limits to override)")


def _load(args):
    try:
        pres, raw = fileio.load_presentation(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror or exc}") from None
    except fileio.ParseError as exc:
        raise UsageError(f"{args.input}: {exc}") from None
    _envelope(args, pres.ring.ngens)
    return pres, raw


def _label(field) -> str:
    return repr(field)


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells)


def _dims_line(field, dims) -> str:
    return f"{_label(field)}: " + " ".join(str(d) for d in dims)


# -- dims -------------------------------------------------------------------------


def cmd_dims(args, out) -> int:
    pres, _ = _load(args)
    N = args.max_degree
    fn = hilbert_dims if pres.mode == GRADED else filtered_dims
    tables = [fn(pres, N)]
    for p in args.prime or ():
        tables.append(fn(reduce_presentation(pres, p), N))
    if args.format == "json":
        out.write(fileio.dumps({
            "mode": pres.mode,
            "max_degree": N,
            "dims": [fileio.table_doc(t) for t in tables],
        }))
        return EXIT_OK
    kind = "graded dims" if pres.mode == GRADED else "filtered dims"
    header = ["n"] + [f"{kind} over {_label(t.field)}" for t in tables]
    rows = [[n] + [t[n] for t in tables] for n in range(N + 1)]
    out.write(_table(header, rows) + "\n")
    for t in tables:
        out.write(_dims_line(t.field, t.dims) + "\n")
    return EXIT_OK


# -- reduce -------------------------------------------------------------------------


def _report_one(pres, p, N, meta):
    if pres.mode == FILTERED:
        return fileio.lift_report_doc(lift_report(pres, p, N), meta)
    return fileio.reduction_report_doc(good_reduction_report(pres, p, N), meta)


def cmd_reduce(args, out) -> int:
    pres, raw = _load(args)
    if not args.prime:
        raise UsageError("reduce needs at least one --prime")
    N = args.max_degree
    primes = list(dict.fromkeys(args.prime))
    meta = fileio.metadata(raw, primes, N)
    # reports are independent; assembly keeps the order of --prime
    with ThreadPoolExecutor(max_workers=min(4, len(primes))) as pool:
        reports = list(pool.map(lambda p: _report_one(pres, p, N, meta), primes))
    bad = any(any(r["defect"]) or (r.get("gr") and any(r["gr"]["defect"])) for r in reports)
    if args.format == "json":
        out.write(fileio.dumps({"metadata": meta, "reports": reports}))
    else:
        for r in reports:
            _print_report(r, out)
    return EXIT_DEFECT if bad else EXIT_OK


def _print_report(r, out):
    kind = "filtered" if "gr" in r else "graded"
    out.write(f"p = {r['p']} ({kind}, N = {r['max_degree']})\n")
    k, kv = r["dims_K"], r["dims_kv"]
    rows = [[n, k["dims"][n], kv["dims"][n], r["defect"][n]] for n in range(r["max_degree"] + 1)]
    out.write(_table(["n", f"dim over {k['field']}", f"dim over {kv['field']}", "defect"], rows) + "\n")
    out.write(f"reduces_well: {str(r['reduces_well']).lower()}\n")
    out.write(f"first_bad_degree: {r['first_bad_degree']}\n")
    out.write(f"domain_up_to_N: {str(r['domain_up_to_N']).lower()}\n")
    if "gr" in r:
        out.write(f"leading relations: {', '.join(r['leading_relations']) or '(none)'}\n")
        out.write(f"gr_presentation_ok: {str(r['gr_presentation_ok']).lower()}\n")
        out.write(f"gr reduces_well: {str(r['gr']['reduces_well']).lower()}\n")
        out.write(f"lift_applies: {str(r['lift_applies']).lower()}  "
                  f"lift_verified: {str(r['lift_verified']).lower()}\n")
    for w in r["warnings"]:
        out.write(f"warning: {w}\n")
    out.write("\n")


# -- rees ---------------------------------------------------------------------------


def cmd_rees(args, out) -> int:
    pres, _ = _load(args)
    if pres.mode != FILTERED:
        raise ModeError("rees needs a filtered presentation")
    N = args.max_degree
    rees = rees_presentation(pres)
    at1 = specialize_presentation(rees, 1)
    at0 = specialize_presentation(rees, 0)
    lead = leading_ideal_presentation(pres)
    rd = hilbert_dims(rees, N)
    fd = filtered_dims(pres, N)
    gd = hilbert_dims(lead, N)
    diffs = fd.differences()
    ok = [rd[n] == fd[n] and gd[n] == diffs[n] for n in range(N + 1)]
    same1 = sorted(map(repr, at1)) == sorted(map(repr, pres.relations))
    same0 = sorted(map(repr, at0)) == sorted(map(repr, lead.relations))
    field = _label(pres.field)
    if args.format == "json":
        out.write(fileio.dumps({
            "rees": fileio.presentation_to_doc(rees),
            "rees_relations": [repr(r) for r in rees.relations],
            "specialize_T1": [repr(r) for r in at1],
            "specialize_T0": [repr(r) for r in at0],
            "T1_matches_input": same1,
            "T0_matches_leading_ideal": same0,
            "field": field,
            "rees_dims": list(rd.dims),
            "filtered_dims": list(fd.dims),
            "gr_dims": list(gd.dims),
            "consistent": ok,
        }))
    else:
        out.write("Rees relations:\n")
        out.writelines(f"  {r!r}\n" for r in rees.relations)
        out.write("T := 1:\n")
        out.writelines(f"  {r!r}\n" for r in at1)
        out.write("T := 0:\n")
        out.writelines(f"  {r!r}\n" for r in at0)
        out.write(f"T := 1 reproduces the input: {'OK' if same1 else 'MISMATCH'}\n")
        out.write(f"T := 0 reproduces the leading ideal: {'OK' if same0 else 'MISMATCH'}\n")
        rows = [[n, rd[n], fd[n], gd[n], diffs[n], "OK" if ok[n] else "MISMATCH"] for n in range(N + 1)]
        out.write(_table(["n", f"Rees dim over {field}", f"filtered dim over {field}",
                          f"gr dim over {field}", "first difference", "check"], rows) + "\n")
    return EXIT_OK if all(ok) and same0 and same1 else EXIT_DEFECT


# -- gwa ----------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([XYh])|(\*\*|[-+*^()]))")


class ExprError(ValueError):
    pass


def parse_gwa_expr(text: str, data) -> GwaElement:
    """Sums and products of X, Y, h, integers and parentheses; ^ or ** for powers."""
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"unexpected character {text[pos:].lstrip()[:1]!r} at position {pos + 1}")
        num, atom, op = m.groups()
        start = m.start(m.lastindex)
        tokens.append((int(num) if num else atom or ("^" if op == "**" else op), start))
        pos = m.end()
    i = 0

    def peek():
        return tokens[i][0] if i < len(tokens) else None

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok[0]

    def where():
        return tokens[i][1] + 1 if i < len(tokens) else len(text) + 1

    def expr():
        val = term()
        while peek() in ("+", "-"):
            val = val + term() if take() == "+" else val - term()
        return val

    def term():
        val = factor()
        while peek() == "*":
            take()
            val = val * factor()
        return val

    def factor():
        if peek() in ("-", "+"):
            sign = take()
            val = factor()
            return -val if sign == "-" else val
        val = power()
        return val

    def power():
        base = atom()
        if peek() == "^":
            take()
            if not isinstance(peek(), int):
                raise ExprError(f"exponent must be a nonnegative integer at position {where()}")
            return base ** take()
        return base

    def atom():
        tok = peek()
        if tok is None:
            raise ExprError("unexpected end of expression")
        if isinstance(tok, int):
            take()
            return GwaElement.scalar(data, tok)
        if tok == "X":
            take()
            return GwaElement.X(data)
        if tok == "Y":
            take()
            return GwaElement.Y(data)
        if tok == "h":
            take()
            return GwaElement.h(data)
        if tok == "(":
            take()
            val = expr()
            if peek() != ")":
                raise ExprError(f"expected ')' at position {where()}")
            take()
            return val
        raise ExprError(f"unexpected {tok!r} at position {where()}")

    if not tokens:
        raise ExprError("empty expression")
    result = expr()
    if i != len(tokens):
        raise ExprError(f"unexpected {tokens[i][0]!r} at position {where()}")
    return result


def _gwa_data(args):
    if not args.name:
        raise UsageError("--name is required")
    params = dict(args.param or ())
    try:
        return gwa_catalog(args.name, params)
    except CatalogError as exc:
        raise UsageError(exc.args[0]) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _describe(data) -> dict:
    s = data.sigma
    H = UniPoly.h(data.field)
    return {
        "name": data.name,
        "field": _label(data.field),
        "sigma": repr(H.compose_affine(s.alpha, s.beta)),
        "a": repr(data.a),
        "commutator": repr(gwa_commutator_check(data)),
    }


def cmd_gwa(args, out) -> int:
    sub = args.gwa_command
    if sub == "catalog":
        if args.name:
            docs = [_describe(_gwa_data(args))]
        else:
            docs = []
            for name, (_, keys) in sorted(CATALOG.items()):
                defaults = {k: 2 for k in keys if k == "q"}
                d = _describe(gwa_catalog(name, defaults))
                d["parameters"] = list(keys)
                docs.append(d)
        if args.format == "json":
            out.write(fileio.dumps(docs if not args.name else docs[0]))
        else:
            for d in docs:
                params = f" (parameters: {', '.join(d['parameters']) or 'none'})" if "parameters" in d else ""
                out.write(f"{d['name']}{params} over {d['field']}\n"
                          f"  sigma(h) = {d['sigma']}\n  a = {d['a']}\n  XY - YX = {d['commutator']}\n")
        return EXIT_OK

    data = _gwa_data(args)
    if sub == "mult":
        if args.prime:
            p = args.prime[0]
            try:
                data = gwa_reduce(data, p)
            except BadPrimeError as exc:
                out.write(f"error: {exc}\n")
                return EXIT_DEFECT
        try:
            value = parse_gwa_expr(" ".join(args.expr), data)
        except ExprError as exc:
            raise UsageError(f"bad expression: {exc}") from None
        if args.format == "json":
            out.write(fileio.dumps({"field": _label(data.field), "normal_form": repr(value)}))
        else:
            out.write(f"{value!r}\n")
        return EXIT_OK

    if sub == "reduce":
        if not args.prime:
            raise UsageError("gwa reduce needs --prime")
        docs, code = [], EXIT_OK
        for p in args.prime:
            verdict = bad_prime_detect(data, p)
            if not verdict.good:
                docs.append({"p": p, "good": False, "reason": verdict.reason,
                             "coefficient": verdict.coefficient, "value": str(verdict.value),
                             "valuation": verdict.valuation})
                code = EXIT_DEFECT
                continue
            doc = _describe(gwa_reduce(data, p))
            doc.update({"p": p, "good": True, "nondomain": verdict.nondomain})
            docs.append(doc)
        if args.format == "json":
            out.write(fileio.dumps(docs))
        else:
            for d in docs:
                if d["good"]:
                    out.write(f"p = {d['p']}: sigma(h) = {d['sigma']}, a = {d['a']} over {d['field']}\n")
                    if d["nondomain"]:
                        out.write("  warning: a reduces to 0, so Y*X = 0 and the reduction is not a domain\n")
                else:
                    out.write(f"p = {d['p']}: bad prime: {d['reason']}\n")
        return code

    if sub == "dims":
        deg = args.degree_of_h or natural_degree_of_h(data)
        table = gwa_dims(data, args.max_degree, deg)
        check = None
        if args.check:
            check = filtered_dims(gwa_to_presentation(data, deg), args.max_degree)
        if args.format == "json":
            doc = {"name": data.name, "degree_of_h": deg, "dims": fileio.table_doc(table)}
            if check is not None:
                doc["presentation_dims"] = fileio.table_doc(check)
                doc["agree"] = check.dims == table.dims
            out.write(fileio.dumps(doc))
        else:
            out.write(" ".join(map(str, table.dims)) + "\n")
            if check is not None:
                verdict = "OK" if check.dims == table.dims else "MISMATCH"
                out.write(f"presentation over {_label(check.field)}: "
                          f"{' '.join(map(str, check.dims))} {verdict}\n")
        return EXIT_OK if check is None or check.dims == table.dims else EXIT_DEFECT
    raise UsageError(f"unknown gwa subcommand {sub!r}")


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncreduce", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ncreduce {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--unsafe-limits", action="store_true",
                        help=f"allow more than {MAX_GENERATORS} generators or degree above {MAX_DEGREE}")
    common.add_argument("--max-degree", "-N", type=_nonneg, default=DEFAULT_MAX_DEGREE)
    common.add_argument("--prime", "-p", type=_prime, action="append")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (("dims", "dimension table of a presentation"),
                        ("reduce", "good-reduction report at each --prime"),
                        ("rees", "Rees presentation and its consistency checks")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("--input", "-i", required=True)

    gwa = sub.add_parser("gwa", help="generalized Weyl algebras from the catalog")
    gsub = gwa.add_subparsers(dest="gwa_command", required=True)
    for name in ("catalog", "mult", "reduce", "dims"):
        sp = gsub.add_parser(name, parents=[common])
        sp.add_argument("--name")
        sp.add_argument("--param", type=_param, action="append", metavar="KEY=VALUE")
        if name == "mult":
            sp.add_argument("expr", nargs="+")
        if name == "dims":
            sp.add_argument("--degree-of-h", type=int, default=None)
            sp.add_argument("--check", action="store_true",
                            help="compare against the dimensions of the presentation")
    return parser


COMMANDS = {"dims": cmd_dims, "reduce": cmd_reduce, "rees": cmd_rees, "gwa": cmd_gwa}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        _envelope(args)
        return COMMANDS[args.command](args, out)
    except (UsageError, ModeError) as exc:
        err.write(f"ncreduce: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
