"""Command-line surface: p2, sweep, moment, spectrum, verify.

Exit codes are a stable contract: 0 success, 1 verification or convergence
failure, 2 usage error.  Exact rationals are serialized as separate
numerator/denominator decimal strings so downstream tooling can check
exactness; all decimal rendering honors --precision (default 15 significant
digits).
"""

from __future__ import annotations

import argparse
import csv
import decimal
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import anticoncentration as ac
from . import moments, verify
from .combinatorics import as_occupation, enumerate_basis
from .irreps import explicit_norm_sq, operator_spectrum
from .ladder import SectorOperator

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    """Bad flag values or malformed occupation strings (exit 2)."""


def render_decimal(value, sig: int) -> str:
    """Render a Fraction or float to `sig` significant digits."""
    if isinstance(value, Fraction):
        with decimal.localcontext() as ctx:
            ctx.prec = sig
            return str(decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator))
    return f"{float(value):.{sig}g}"


def parse_occupation(text: str, modes: int, photons: int):
    """Parse 'fock:a,b,...' (or bare 'a,b,...') and validate the sector."""
    body = text[5:] if text.startswith("fock:") else text
    try:
        counts = tuple(int(part) for part in body.split(","))
        occ = as_occupation(counts)
    except ValueError as exc:
        raise UsageError(f"cannot parse occupation {text!r}: {exc}") from None
    if occ.m != modes:
        raise UsageError(f"occupation {text!r} has {occ.m} modes, expected {modes}")
    if occ.total != photons:
        raise UsageError(
            f"occupation {text!r} carries {occ.total} photons, expected {photons}"
        )
    return occ


def _resolve_jobs(flag_value, fallback: int) -> int:
    """--jobs wins; else the BOSONIC_MOMENTS_JOBS mirror; else the fallback."""
    if flag_value:
        return max(1, flag_value)
    env = os.environ.get("BOSONIC_MOMENTS_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"BOSONIC_MOMENTS_JOBS must be an integer, got {env!r}")
    return fallback


# ------------------------------------------------------------------- p2


def cmd_p2(args) -> int:
    report = ac.p2_report(
        args.modes, args.photons, method=args.method, samples=args.samples, seed=args.seed
    )
    sig = args.precision
    payload = {
        "m": report.m,
        "n": report.n,
        "method": report.method,
        "p2": render_decimal(report.p2, sig),
    }
    if report.is_exact:
        exact = report.p2_closed if report.method == "closed" else report.p2_beta
        payload["p2_exact_num"] = str(exact.numerator)
        payload["p2_exact_den"] = str(exact.denominator)
    payload.update(
        {
            "regime": report.regime,
            "asymptote": render_decimal(report.asymptote, sig),
            "pz_bound_half": render_decimal(report.pz_bound(0.5), sig),
        }
    )
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        fields = list(payload)
        writer = csv.DictWriter(sys.stdout, fieldnames=fields)
        writer.writeheader()
        writer.writerow(payload)
    return EXIT_OK


# ---------------------------------------------------------------- sweep


def _sweep_row(task) -> dict:
    c, beta, n, method, sig = task
    m = round(c * n**beta)
    if method == "auto":
        route = "closed" if n <= ac.EXACT_PATH_MAX_PHOTONS else "integral"
    else:
        route = method
    if route == "closed":
        value = ac.p2_closed(m, n)
    elif route == "beta":
        value = ac.p2_beta(m, n)
    elif route == "integral":
        value = ac.p2_integral(m, n, tolerance=1e-12)
    elif route == "mc":
        value = ac.mc_p2(m, n, samples=10_000, seed=n).mean
    else:
        raise UsageError(f"unknown sweep method {route!r}")
    regime_label = "degenerate" if m == 1 else ac.regime(m, n)
    return {
        "n": n,
        "m": m,
        "p2": render_decimal(value, sig),
        "asymptote": render_decimal(ac.asymptote(m, n, c, beta), sig),
        "method": route,
        "regime": regime_label,
    }


SWEEP_FIELDS = ["n", "m", "p2", "asymptote", "method", "regime"]


def cmd_sweep(args) -> int:
    if args.n_min < 1 or args.n_max < args.n_min or args.n_step < 1:
        raise UsageError("need 1 <= n-min <= n-max and n-step >= 1")
    grid = list(range(args.n_min, args.n_max + 1, args.n_step))
    tasks = [(args.c, args.beta, n, args.method, args.precision) for n in grid]
    jobs = _resolve_jobs(args.jobs, os.cpu_count() or 1)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_row, tasks))
    else:
        rows = [_sweep_row(task) for task in tasks]
    rows.sort(key=lambda row: row["n"])

    try:
        with open(args.out, "w", newline="", encoding="utf-8") as handle:
            if args.format == "csv":
                writer = csv.DictWriter(handle, fieldnames=SWEEP_FIELDS)
                writer.writeheader()
                writer.writerows(rows)
            else:
                json.dump(rows, handle, indent=2)
                handle.write("\n")
    except OSError as exc:
        print(f"cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    if args.emit_plot_script:
        script = args.out + ".gp"
        with open(script, "w", encoding="utf-8") as handle:
            handle.write(_gnuplot_script(args.out, args.c, args.beta))
        print(f"wrote {args.out} and {script}")
    else:
        print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def _gnuplot_script(csv_path: str, c: float, beta: float) -> str:
    return (
        "set datafile separator ','\n"
        "set key left top\n"
        "set xlabel 'n'\n"
        "set ylabel 'P2'\n"
        f"set title 'outcome collision probability, m = round({c} n^{beta})'\n"
        f"plot '{csv_path}' every ::1 using 1:3 with linespoints title 'P2', \\\n"
        f"     '{csv_path}' every ::1 using 1:4 with lines dashtype 2 title 'asymptote'\n"
    )


# --------------------------------------------------------------- moment


def cmd_moment(args) -> int:
    inp = parse_occupation(args.input, args.modes, args.photons)
    out = parse_occupation(args.output, args.modes, args.photons)
    if args.modes == 1:
        exact = Fraction(1)  # single mode: the one outcome has probability 1
    else:
        rho, obs = moments.sector_operator_pair(args.modes, args.photons, inp, out)
        exact = moments.second_moment(rho, obs)
    sig = args.precision
    print(f"second moment = {exact.numerator}/{exact.denominator}" )
    print(f"             ~= {render_decimal(exact, sig)}")
    if args.mc_check:
        est = moments.mc_second_moment(
            inp, out, samples=args.mc_check, seed=args.seed, jobs=_resolve_jobs(args.jobs, 1)
        )
        print(
            f"mc estimate  = {render_decimal(est.mean, sig)}"
            f" +- {render_decimal(est.std_error, 6)} ({est.samples} samples)"
        )
        if est.std_error == 0.0:
            ok = est.mean == float(exact)
        else:
            ok = abs(est.mean - float(exact)) <= 3.0 * est.std_error
        print("verdict      = PASS" if ok else "verdict      = FAIL")
        if not ok:
            return EXIT_VERIFICATION
    return EXIT_OK


# -------------------------------------------------------------- spectrum


def cmd_spectrum(args) -> int:
    obs_occ = parse_occupation(args.obs, args.modes, args.photons)
    if args.modes == 1:
        raise UsageError("spectrum needs at least two modes (one mode is degenerate)")
    basis = enumerate_basis(args.modes, args.photons)
    op = SectorOperator.fock_projector(basis, obs_occ)
    spectrum = operator_spectrum(op)
    sig = args.precision
    total = spectrum.total_norm_sq()
    mismatch = None
    if args.verify_projection:
        for k, _, norm in spectrum.entries:
            explicit = explicit_norm_sq(op, k)
            if explicit != norm:
                mismatch = (k, norm, explicit)
                break
    if args.format == "json":
        payload = {
            "m": spectrum.m,
            "n": spectrum.n,
            "obs": list(obs_occ.counts),
            "blocks": [
                {
                    "k": k,
                    "dim": dim,
                    "norm_num": str(norm.numerator),
                    "norm_den": str(norm.denominator),
                    "norm": render_decimal(norm, sig),
                }
                for k, dim, norm in spectrum.entries
            ],
            "total_norm": render_decimal(total, sig),
            "projection_verified": args.verify_projection and mismatch is None,
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"block spectrum of |{','.join(map(str, obs_occ.counts))}> projector"
              f" on ({args.modes}, {args.photons})")
        print(f"{'k':>3} {'dim':>8} {'norm (exact)':>20} {'norm':>22}")
        for k, dim, norm in spectrum.entries:
            exact = f"{norm.numerator}/{norm.denominator}"
            print(f"{k:>3} {dim:>8} {exact:>20} {render_decimal(norm, sig):>22}")
        exact_total = f"{total.numerator}/{total.denominator}"
        print(f"{'sum':>12} {exact_total:>20} {render_decimal(total, sig):>22}")
    if mismatch is not None:
        k, norm, explicit = mismatch
        print(
            f"projection check FAILED at k={k}: closed {norm} vs explicit {explicit}",
            file=sys.stderr,
        )
        return EXIT_VERIFICATION
    return EXIT_OK


# --------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    results = verify.run_all(
        max_modes=args.max_modes,
        max_photons=args.max_photons,
        seed=args.seed,
        mc_samples=args.mc_samples,
        skip_mc=args.skip_mc,
        jobs=_resolve_jobs(args.jobs, 1),
    )
    all_ok = True
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        tag = " [mc]" if res.stochastic else ""
        print(f"{status} {res.name}{tag}: {res.checks} checks, {len(res.failures)} failures")
        if not res.passed:
            all_ok = False
            print(f"  first failing case: {res.failures[0]}")
    return EXIT_OK if all_ok else EXIT_VERIFICATION


# ----------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bosonic-moments",
        description="Exact Haar second moments and outcome-collision statistics "
        "for Fock-state linear optics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p2 = sub.add_parser("p2", help="outcome-collision probability for one (m, n)")
    p2.add_argument("--modes", type=int, required=True)
    p2.add_argument("--photons", type=int, required=True)
    p2.add_argument(
        "--method",
        choices=["auto", "closed", "beta", "integral", "mc"],
        default="auto",
    )
    p2.add_argument("--samples", type=int, default=10_000)
    p2.add_argument("--seed", type=int, default=0)
    p2.add_argument("--format", choices=["json", "csv"], default="json")
    p2.add_argument("--precision", type=int, default=15)
    p2.set_defaults(func=cmd_p2)

    sweep = sub.add_parser("sweep", help="P2 along a mode-scaling family m = round(c n^beta)")
    sweep.add_argument("--c", type=float, required=True)
    sweep.add_argument("--beta", type=float, required=True)
    sweep.add_argument("--n-min", type=int, required=True)
    sweep.add_argument("--n-max", type=int, required=True)
    sweep.add_argument("--n-step", type=int, default=1)
    sweep.add_argument(
        "--method",
        choices=["auto", "closed", "beta", "integral", "mc"],
        default="auto",
    )
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--precision", type=int, default=15)
    sweep.add_argument("--jobs", type=int, default=None)
    sweep.add_argument("--emit-plot-script", action="store_true")
    sweep.set_defaults(func=cmd_sweep)

    moment = sub.add_parser("moment", help="exact Haar second moment for one input/output pair")
    moment.add_argument("--modes", type=int, required=True)
    moment.add_argument("--photons", type=int, required=True)
    moment.add_argument("--input", required=True, metavar="fock:a,b,...")
    moment.add_argument("--output", required=True, metavar="fock:a,b,...")
    moment.add_argument("--mc-check", type=int, default=None, metavar="SAMPLES")
    moment.add_argument("--seed", type=int, default=0)
    moment.add_argument("--jobs", type=int, default=None)
    moment.add_argument("--precision", type=int, default=15)
    moment.set_defaults(func=cmd_moment)

    spectrum = sub.add_parser("spectrum", help="per-block projection norms of a Fock projector")
    spectrum.add_argument("--modes", type=int, required=True)
    spectrum.add_argument("--photons", type=int, required=True)
    spectrum.add_argument("--obs", required=True, metavar="fock:a,b,...")
    spectrum.add_argument("--format", choices=["table", "json"], default="table")
    spectrum.add_argument("--verify-projection", action="store_true")
    spectrum.add_argument("--precision", type=int, default=15)
    spectrum.set_defaults(func=cmd_spectrum)

    ver = sub.add_parser("verify", help="run every invariant suite")
    ver.add_argument("--max-modes", type=int, default=4)
    ver.add_argument("--max-photons", type=int, default=4)
    ver.add_argument("--seed", type=int, default=2024)
    ver.add_argument("--mc-samples", type=int, default=20_000)
    ver.add_argument("--skip-mc", action="store_true")
    ver.add_argument("--jobs", type=int, default=None)
    ver.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ac.QuadratureError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
