"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 a mathematical property
failed, 3 insufficient precision.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .cache import CacheEntry, ResultCache, cache_key
from .coha import bidegree, shuffle_multiply, star_multiply, vprim_dims
from .dtseries import (
    DEFAULT_MARGIN,
    compute_dt_table,
    omega,
    reineke_checks,
    reineke_dt,
    reineke_polynomial,
    verify_bounds,
)
from .errors import CohaError, IndexMapMismatch, InsufficientPrecision, NonIntegralCoefficient, ParseError
from .io import (
    format_poly,
    parse_gamma,
    parse_poly,
    parse_quiver,
    quiver_digest,
    table_from_json,
    table_to_json,
    table_to_tsv,
)
from .qarith import format_half_laurent
from .quiver import build_sign_twist, dim_vectors, euler_form, n_bound

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_quiver(path):
    with open(path, encoding="utf-8") as fh:
        return parse_quiver(fh.read())


def _dt_table(Q, D, qprec, cache_dir, err):
    """Table from the cache when present, otherwise computed (and stored)."""
    cache = ResultCache(cache_dir) if cache_dir else None
    key = cache_key(Q, D, qprec)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            print(f"cache hit {key[:12]}", file=err)
            return table_from_json(hit.value)
    table = compute_dt_table(Q, D, qprec)
    table.quiver_digest = quiver_digest(Q)
    if cache is not None:
        cache.put(CacheEntry(key, table_to_json(table)))
    return table


def _write(text, out_path, out):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_dt(args, out, err) -> int:
    Q = _read_quiver(args.quiver)
    table = _dt_table(Q, args.max_dim, args.qprec, args.cache, err)
    report = verify_bounds(table, Q)
    text = table_to_json(table) if args.format == "json" else table_to_tsv(table)
    _write(text, args.out, out)
    if args.omega:
        for gamma in dim_vectors(Q.vertex_count, table.D, min_total=1):
            print(f"Omega({','.join(map(str, gamma))}) = {format_half_laurent(omega(table, Q, gamma))}", file=err)
    for f in report.failures:
        print(f"bound violation: {f}", file=err)
    if not report.ok:
        return EXIT_MATH
    if not report.precision_ok:
        print("precision does not cover every admissible window", file=err)
        return EXIT_PRECISION
    if not report.margin_ok:
        print(f"note: vanishing above some windows verified by less than {DEFAULT_MARGIN} u-steps", file=err)
    return EXIT_OK


def cmd_verify(args, out, err) -> int:
    Q = _read_quiver(args.quiver)
    table = _dt_table(Q, args.max_dim, args.qprec, args.cache, err)
    report = verify_bounds(table, Q)
    ok = report.ok and report.precision_ok
    out.write("gamma\tk\tfactorize\toracle\tstatus\n")
    for gamma in dim_vectors(Q.vertex_count, args.max_dim, min_total=1):
        chi = euler_form(Q, gamma, gamma)
        row = table.for_gamma(gamma)
        ceil = table.ceilings.get(gamma)
        d_max = max(n_bound(Q, gamma), 0) + 1
        d_max = max([d_max] + [(k - chi) // 2 for k in row if k >= chi])
        if ceil is not None:
            d_max = min(d_max, (ceil - 1 - chi) // 2)
        oracle = vprim_dims(Q, gamma, d_max) if d_max >= 0 else []
        expected = {2 * d + chi: c for d, c in enumerate(oracle)}
        ks = sorted(set(row) | {k for k, c in expected.items() if c})
        g = ",".join(map(str, gamma))
        for k in ks:
            got, want = row.get(k, 0), expected.get(k)
            status = "ok" if got == want else "MISMATCH"
            if got != want:
                ok = False
            out.write(f"{g}\t{k}\t{got}\t{'-' if want is None else want}\t{status}\n")
        out.write(f"{g}\tOmega = {format_half_laurent(omega(table, Q, gamma))}\t(d <= {d_max} checked)\n")
    for f in report.failures:
        out.write(f"bound violation: {f}\n")
    out.write("verify: " + ("PASS" if ok else "FAIL") + "\n")
    return EXIT_OK if ok else EXIT_MATH


def cmd_mult(args, out, err) -> int:
    Q = _read_quiver(args.quiver)
    g1, g2 = parse_gamma(args.gamma1), parse_gamma(args.gamma2)
    f1 = parse_poly(args.poly1, Q, g1)
    f2 = parse_poly(args.poly2, Q, g2)
    if args.star:
        prod = star_multiply(Q, build_sign_twist(Q), f1, f2)
    else:
        prod = shuffle_multiply(Q, f1, f2)
    out.write(format_poly(prod.poly) + "\n")
    if prod.poly.homogeneous_degree() is None:
        label = "undefined (zero element)" if not prod.poly else "undefined (not homogeneous)"
    else:
        label = str(bidegree(Q, prod))
    out.write(f"bidegree: {label}\n")
    return EXIT_OK


def _format_q_poly(poly) -> str:
    if not poly:
        return "0"
    parts = []
    for k, c in sorted(poly.items(), reverse=True):
        mono = "1" if k == 0 else ("q" if k == 1 else f"q^{k}")
        parts.append(mono if c == 1 else (f"{c}" if k == 0 else f"{c}*{mono}"))
    return " + ".join(parts)


def cmd_reineke(args, out, err) -> int:
    if args.loops < 1:
        raise UsageError("--loops must be at least 1")
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    d = reineke_dt(args.loops, args.max_n, args.qprec)
    checks = reineke_checks(args.loops, d, args.max_n)
    ok = True
    for n in range(1, args.max_n + 1):
        fails = checks[n]
        ok = ok and not fails
        status = "ok" if not fails else "FAIL: " + "; ".join(fails)
        out.write(f"DT_{n}^({args.loops})(q) = {_format_q_poly(reineke_polynomial(d, n))}\t[{status}]\n")
    return EXIT_OK if ok else EXIT_MATH


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cohadt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True
    cache_default = os.environ.get("COHA_CACHE_DIR")

    p = sub.add_parser("dt", help="quantum DT invariants of a quiver")
    p.add_argument("--quiver", required=True)
    p.add_argument("--max-dim", type=int, required=True)
    p.add_argument("--qprec", type=int, default=None, help="q-exponent truncation (default: automatic)")
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--out")
    p.add_argument("--cache", default=cache_default)
    p.add_argument("--omega", action="store_true", help="also print Omega(gamma) to stderr")
    p.set_defaults(func=cmd_dt)

    p = sub.add_parser("verify", help="cross-check the factorization against the primitive-dimension oracle")
    p.add_argument("--quiver", required=True)
    p.add_argument("--max-dim", type=int, required=True)
    p.add_argument("--qprec", type=int, default=None)
    p.add_argument("--cache", default=cache_default)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mult", help="shuffle product of two elements")
    p.add_argument("--quiver", required=True)
    p.add_argument("--gamma1", required=True)
    p.add_argument("--poly1", required=True)
    p.add_argument("--gamma2", required=True)
    p.add_argument("--poly2", required=True)
    p.add_argument("--star", action="store_true", help="use the sign-twisted product")
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("reineke", help="DT invariants of the m-loop quiver")
    p.add_argument("--loops", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--qprec", type=int, default=None)
    p.set_defaults(func=cmd_reineke)
    return parser


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "max_dim", 0) is not None and getattr(args, "max_dim", 0) < 0:
            raise UsageError("--max-dim must be nonnegative")
        return args.func(args, out, err)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_INPUT
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return EXIT_INPUT
    except OSError as exc:
        print(f"I/O error: {exc}", file=err)
        return EXIT_INPUT
    except InsufficientPrecision as exc:
        print(f"insufficient precision: {exc}", file=err)
        return EXIT_PRECISION
    except (NonIntegralCoefficient, IndexMapMismatch) as exc:
        print(f"property violation: {exc}", file=err)
        return EXIT_MATH
    except CohaError as exc:
        # symmetry / shape errors on user input
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
