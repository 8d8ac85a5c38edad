"""Command-line entry point: ``hofwalk <command> ...``.

Every command prints JSON (sorted keys) on stdout, except ``butterfly``,
which writes CSV unless given ``--json``.  Exact values are emitted as cyclotomic coefficient
vectors next to a float rendering.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .cyclo import CyclotomicNumber, FluxContext, coprime_fluxes, format_float
from .moments import ROUTES, moment_table
from .walks import closed_Zn_dp, enumerate_Z

EXIT_OK = 0
EXIT_MISMATCH = 1
SPECTRAL_TOLERANCE = 1e-6


def exact_record(x: CyclotomicNumber) -> dict:
    return {"exact": x.to_json(), "float": format_float(x), "text": x.radical_str()}


def _emit(obj: object) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False))


def _flux(parser: argparse.ArgumentParser, args: argparse.Namespace) -> FluxContext:
    if args.q < 1 or not 0 <= args.p <= args.q:
        parser.error(f"need 0 <= p <= q and q >= 1, got p={args.p}, q={args.q}")
    if math.gcd(args.p, args.q) != 1:
        parser.error(f"p and q must be coprime, got gcd({args.p}, {args.q}) = {math.gcd(args.p, args.q)}")
    if args.q == 1:
        return FluxContext(0, 1)
    if args.p in (0, args.q):
        parser.error("p must satisfy 1 <= p < q when q > 1")
    return FluxContext(args.p, args.q)


def _even_n(parser: argparse.ArgumentParser, n: int) -> int:
    if n < 0 or n % 2:
        parser.error(f"n must be even and non-negative, got {n}")
    return n


# -- commands ---------------------------------------------------------------


def cmd_zn(parser, args) -> int:
    ctx = _flux(parser, args)
    n = _even_n(parser, args.n)
    if args.route == "enum":
        h = n // 2
        try:
            value = ctx.zero()
            for m in range(h + 1):
                value = value + enumerate_Z(m, m, h - m, h - m, ctx, max_length=args.max_length)
        except ValueError as exc:
            parser.error(str(exc))
    else:
        value = closed_Zn_dp(n, ctx)
    _emit({"n": n, "p": ctx.p, "q": ctx.q, "route": args.route, **exact_record(value)})
    return EXIT_OK


def cmd_moments(parser, args) -> int:
    ctx = _flux(parser, args)
    n = _even_n(parser, args.n)
    routes = list(ROUTES) if args.route == "all" else [args.route]
    tables = {r: moment_table(ctx, n, r) for r in routes}
    reference = tables[routes[0]]
    mismatches = []
    for r in routes[1:]:
        for k in range(0, n + 1, 2):
            if tables[r][k] != reference[k]:
                mismatches.append({"n": k, "routes": [routes[0], r], routes[0]: str(reference[k]), r: str(tables[r][k])})
    value = reference[n]
    out = {"n": n, "p": ctx.p, "q": ctx.q, "route": args.route, **exact_record(value)}
    if args.table:
        out["table"] = [exact_record(reference[k]) | {"n": k} for k in range(0, n + 1, 2)]
    if mismatches:
        out["mismatches"] = mismatches
    _emit(out)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def cmd_band(parser, args) -> int:
    from .spectrum import band_poly_via_determinant, band_poly_via_kreft

    ctx = _flux(parser, args)
    band = band_poly_via_determinant(ctx) if args.route == "det" else band_poly_via_kreft(ctx)
    coeffs = [exact_record(c) | {"power": i} for i, c in enumerate(band.b)]
    _emit({"p": ctx.p, "q": ctx.q, "route": args.route, "coefficients": coeffs})
    return EXIT_OK


def cmd_asympt(parser, args) -> int:
    from .asympt import UnsupportedSingularityError, dominant_singularities, growth_constants

    ctx = _flux(parser, args)
    try:
        gc = growth_constants(ctx)
    except UnsupportedSingularityError:
        dom = dominant_singularities(ctx)
        _emit(dom.to_dict() | {"p": ctx.p, "q": ctx.q, "supported": False})
        return EXIT_MISMATCH
    _emit(gc.to_dict() | {"p": ctx.p, "q": ctx.q, "supported": True})
    return EXIT_OK


def cmd_butterfly(parser, args) -> int:
    from .hofstadter import butterfly_export, butterfly_rows

    if args.qmax < 1:
        parser.error("--qmax must be at least 1")
    if args.samples < 2:
        parser.error("--samples must be at least 2")
    if args.format == "json":
        rows = butterfly_rows(args.qmax, method=args.method, samples=args.samples)
        keys = ("p", "q", "band_index", "E_lo", "E_hi")
        text = json.dumps([dict(zip(keys, r)) for r in rows], indent=2) + "\n"
    else:
        text = butterfly_export(args.qmax, samples=args.samples, method=args.method)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_dos(parser, args) -> int:
    from .hofstadter import DensityOfStates

    ctx = _flux(parser, args)
    if args.grid < 2:
        parser.error("--grid must be at least 2")
    dos = DensityOfStates(ctx)
    lo, hi = -4.0, 4.0
    samples = []
    for i in range(args.grid):
        e = lo + (hi - lo) * i / (args.grid - 1)
        samples.append({"E": e, "rho": float(dos(e))})
    _emit(
        {
            "p": ctx.p,
            "q": ctx.q,
            "bands": [[a, b] for a, b in dos.bands],
            "normalization": dos.integrate(),
            "samples": samples,
        }
    )
    return EXIT_OK


def _xcheck_job(job: tuple[int, int, int, bool]) -> list[dict]:
    """All routes for one flux up to nmax; returns the list of disagreements."""
    from .hofstadter import trace_moments_numeric

    p, q, nmax, spectral = job
    ctx = FluxContext(p, q)
    tables = {r: moment_table(ctx, nmax, r) for r in ROUTES}
    problems = []
    for n in range(0, nmax + 1, 2):
        ref = tables["series"][n]
        for r in ROUTES[1:]:
            if tables[r][n] != ref:
                problems.append({"p": p, "q": q, "n": n, "route": r, "expected": str(ref), "got": str(tables[r][n])})
    if spectral:
        numeric = trace_moments_numeric(ctx, range(0, nmax + 1, 2))
        for n, v in numeric.items():
            exact = tables["series"][n].to_complex().real
            err = abs(v - exact) / max(1.0, abs(exact))
            if err > SPECTRAL_TOLERANCE:
                problems.append({"p": p, "q": q, "n": n, "route": "spectral", "expected": exact, "got": v, "error": err})
    return problems


def _workers() -> int:
    cap = os.environ.get("HOFWALK_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def cmd_xcheck(parser, args) -> int:
    if args.qmax < 1:
        parser.error("--qmax must be at least 1")
    nmax = _even_n(parser, args.nmax)
    jobs = [(c.p, c.q, nmax, not args.no_spectral) for c in coprime_fluxes(args.qmax, include_trivial=True)]
    workers = min(_workers(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_xcheck_job, jobs))
    else:
        results = [_xcheck_job(j) for j in jobs]
    problems = sorted((x for r in results for x in r), key=lambda d: (d["q"], d["p"], d["n"], d["route"]))
    _emit(
        {
            "fluxes": [[p, q] for p, q, _, _ in jobs],
            "nmax": nmax,
            "routes": list(ROUTES) + ([] if args.no_spectral else ["spectral"]),
            "spectral_tolerance": SPECTRAL_TOLERANCE,
            "mismatches": problems,
            "ok": not problems,
        }
    )
    return EXIT_MISMATCH if problems else EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hofwalk", description="Walk area moments and Hofstadter spectra at rational flux.")
    sub = parser.add_subparsers(dest="command", required=True)

    def flux_args(sp):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)

    sp = sub.add_parser("zn", help="Z_n(w) for closed walks of length n")
    flux_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--route", choices=["enum", "dp"], default="dp")
    sp.add_argument("--max-length", type=int, default=12, help="enumeration cap for --route enum")
    sp.set_defaults(func=cmd_zn)

    sp = sub.add_parser("moments", help="exact moments up to n by one or all routes")
    flux_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--route", choices=[*ROUTES, "all"], default="series")
    sp.add_argument("--table", action="store_true", help="also print every even moment up to n")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("band", help="band polynomial b(z)")
    flux_args(sp)
    sp.add_argument("--route", choices=["det", "kreft"], default="det")
    sp.set_defaults(func=cmd_band)

    sp = sub.add_parser("asympt", help="growth constants alpha, beta")
    flux_args(sp)
    sp.set_defaults(func=cmd_asympt)

    sp = sub.add_parser("butterfly", help="band intervals for all p/q with q <= qmax, as CSV")
    sp.add_argument("--qmax", type=int, required=True)
    sp.add_argument("--out", default="-")
    sp.add_argument("--method", choices=["edges", "scan"], default="edges")
    sp.add_argument("--samples", type=int, default=10_000, help="grid size for --method scan")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv", help="CSV output (default)")
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON list of rows")
    sp.set_defaults(format="csv")
    sp.set_defaults(func=cmd_butterfly)

    sp = sub.add_parser("dos", help="density of states sampled on a grid over [-4, 4]")
    flux_args(sp)
    sp.add_argument("--grid", type=int, default=201)
    sp.set_defaults(func=cmd_dos)

    sp = sub.add_parser("xcheck", help="cross-validate every route")
    sp.add_argument("--qmax", type=int, required=True)
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--no-spectral", action="store_true")
    sp.set_defaults(func=cmd_xcheck)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(parser, args)


if __name__ == "__main__":
    sys.exit(main())
