"""Command line: ``cesaro-hl verify`` scans and ``cesaro-hl selfcheck`` identities.

Exit codes: 0 success, 1 assertion failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import __version__
from .arith import CesaroParams, build_lambda_table, iroot
from .explicit import TERM_NAMES, TruncationConfig, evaluate, loglog_slope
from .specfun.bessel import BesselError
from .zeros import ZeroLoadError, load_zeros

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
RESIDUAL_SLOPE_MAX = 0.15
DIRECT_SLOPE_TOL = 0.05
LEAK_MAX = 1e-8
CSV_COLUMNS = ["ell", "k", "N", "direct", *TERM_NAMES, "explicit", "residual", "total_tail"]


class UsageError(Exception):
    pass


def parse_n_grid(text: str) -> list[int]:
    """'a..b:geometric:count', 'a..b:linear:count' or a comma list."""
    text = text.strip()
    if not text:
        raise UsageError("empty N grid")
    if ".." in text:
        try:
            rng, kind, count = text.split(":")
            lo, hi = (int(float(x)) for x in rng.split(".."))
            count = int(count)
        except ValueError:
            raise UsageError(f"bad N grid {text!r}; expected a..b:geometric:count") from None
        if count < 1 or lo < 2 or hi < lo:
            raise UsageError(f"bad N grid {text!r}")
        if count == 1:
            return [lo]
        if kind == "geometric":
            vals = [round(lo * (hi / lo) ** (i / (count - 1))) for i in range(count)]
        elif kind == "linear":
            vals = [round(lo + (hi - lo) * i / (count - 1)) for i in range(count)]
        else:
            raise UsageError(f"unknown grid kind {kind!r}")
    else:
        try:
            vals = [int(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad N list {text!r}") from None
    if not vals:
        raise UsageError("empty N grid")
    if min(vals) < 2:
        raise UsageError("N values must be >= 2")
    return vals


def _parse_list(text, conv, what):
    try:
        vals = [conv(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad {what} list {text!r}") from None
    if not vals:
        raise UsageError(f"empty {what} list")
    return vals


def read_config(path) -> dict:
    """key = value lines; '#' comments; keys are flag names without dashes."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, val = (p.strip() for p in line.split("=", 1))
            out[key.replace("-", "_")] = val.strip("\"'")
    return out


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cesaro-hl", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="scan (ell, k, N) and compare the development with the direct sum")
    v.add_argument("--config", help="key = value file mirroring the flags; flags win")
    v.add_argument("--ell", default="1", help="comma list of exponents")
    v.add_argument("--k", default="2.5", help="comma list of Cesaro orders")
    v.add_argument("--n", default="4096..1048576:geometric:9", help="a..b:geometric:count or comma list")
    v.add_argument("--zeros", help="zero table (default: bundled, or $CESARO_ZEROS)")
    v.add_argument("--max-zeros", type=int, default=None, help="use only the first this many ordinates")
    v.add_argument("--zero-height", type=float, default=None, help="cutoff T on the ordinates")
    v.add_argument("--jmax", type=int, default=200, help="cutoff on the Bessel index j")
    v.add_argument("--out", help="output file (default stdout)")
    v.add_argument("--format", choices=("csv", "json"), default="csv")
    v.add_argument("--strict-k", action="store_true", help="reject k <= 1")
    v.add_argument("--nk-scale", action="store_true", help="report the N^k-scaled form")
    v.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("selfcheck", help="run the identity suites")
    s.add_argument("--only", help="comma list of suites")
    s.add_argument("--zeros", help="zero table checked by the 'zeros' suite")
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            conf = read_config(known.config or args.config)
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
        given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
        for key, val in conf.items():
            if key in given or key == "config":
                continue
            if not hasattr(args, key):
                raise UsageError(f"unknown config key {key!r}")
            cur = getattr(args, key)
            if isinstance(cur, bool):
                if val.lower() not in _BOOL:
                    raise UsageError(f"config {key}: expected true/false, got {val!r}")
                val = _BOOL[val.lower()]
            elif key in ("jmax", "workers", "max_zeros"):
                val = int(val)
            elif key == "zero_height":
                val = float(val)
            setattr(args, key, val)
    return args


# ---------------------------------------------------------------------------
# verify


@dataclass
class Cell:
    ell: int
    k: float
    n: int


_WORKER_STATE = {}


def _init_worker(zeros_path, max_zeros):
    _WORKER_STATE["zeros"] = load_zeros(zeros_path, max_zeros)


def _run_cell(cell: Cell, trunc, strict, nk_scale, zeros=None):
    zeros = zeros if zeros is not None else _WORKER_STATE["zeros"]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params = CesaroParams(cell.ell, cell.k, cell.n, strict=strict)
    table = build_lambda_table(max(iroot(cell.n, cell.ell), 1))
    return evaluate(params, zeros, trunc, table, nk_scale=nk_scale)


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _row(rep):
    p = rep.params
    return [p.ell, p.k, p.n_cap, rep.direct, *rep.terms.m, rep.explicit_sum, rep.residual, rep.total_tail]


def summarize(reports):
    """Slope diagnostics per (ell, k) series; returns (lines, failures)."""
    series = {}
    for rep in reports:
        series.setdefault((rep.params.ell, rep.params.k), []).append(rep)
    lines, failures = [], []
    for (ell, k), reps in series.items():
        ns = [r.params.n_cap for r in reps]
        leak = max(max(r.terms.relative_leakage()) for r in reps)
        status = "PASS"
        why = []
        if leak >= LEAK_MAX:
            why.append(f"imaginary leakage {leak:.2e} >= {LEAK_MAX:g}")
        if len(set(ns)) >= 3:
            rs = loglog_slope(ns, [r.residual for r in reps])
            ds = loglog_slope(ns, [r.direct for r in reps])
            expect = 0.5 + 1.0 / ell
            line = f"# ell={ell} k={k:g} residual_slope={rs:.6f} direct_slope={ds:.6f} expected_direct={expect:.6f}"
            if k > 1:
                if rs > RESIDUAL_SLOPE_MAX:
                    why.append(f"residual slope {rs:.4f} > {RESIDUAL_SLOPE_MAX}")
                if abs(ds - expect) > DIRECT_SLOPE_TOL:
                    why.append(f"direct slope {ds:.4f} not within {DIRECT_SLOPE_TOL} of {expect:.4f}")
            else:
                line += " (k <= 1: slopes not asserted)"
        else:
            line = f"# ell={ell} k={k:g} fewer than 3 N values: slopes not fitted"
        if why:
            status = "FAIL"
            failures.append(f"ell={ell} k={k:g}: " + "; ".join(why))
        lines.append(f"{line} max_rel_leak={leak:.3e} status={status}")
    return lines, failures


def render_csv(reports, summary_lines) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for rep in reports:
        buf.write(",".join(_fmt(x) for x in _row(rep)) + "\n")
    for line in summary_lines:
        buf.write(line + "\n")
    return buf.getvalue()


def render_json(reports, summary_lines, failures) -> str:
    rows = []
    for rep in reports:
        rows.append(
            {
                "ell": rep.params.ell,
                "k": rep.params.k,
                "N": rep.params.n_cap,
                "direct": rep.direct,
                "terms": dict(zip(TERM_NAMES, rep.terms.m)),
                "tails": {n: (t if math.isfinite(t) else str(t)) for n, t in zip(TERM_NAMES, rep.terms.tails)},
                "imag_leakage": dict(zip(TERM_NAMES, rep.terms.imag_leakage)),
                "notes": {n: s for n, s in zip(TERM_NAMES, rep.terms.notes) if s},
                "explicit": rep.explicit_sum,
                "residual": rep.residual,
                "total_tail": rep.total_tail if math.isfinite(rep.total_tail) else str(rep.total_tail),
                "zero_height": rep.zero_height,
                "jmax": rep.jmax,
                "nk_scale": rep.nk_scale,
                "timings": rep.timings,
            }
        )
    return json.dumps({"rows": rows, "summary": summary_lines, "failures": failures}, indent=2) + "\n"


def cmd_verify(args) -> int:
    ells = _parse_list(args.ell, int, "ell")
    ks = _parse_list(args.k, float, "k")
    ns = parse_n_grid(args.n)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    if args.jmax < 0:
        raise UsageError("--jmax must be >= 0")
    for ell in ells:
        for k in ks:
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    CesaroParams(ell, k, max(ns), strict=args.strict_k)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            if k <= 1:
                print(f"warning: k={k:g} <= 1, M6 tail reported as unreliable", file=sys.stderr)
    zeros = load_zeros(args.zeros, args.max_zeros)
    trunc = TruncationConfig(zero_height_T=args.zero_height, bessel_jmax=args.jmax)
    if args.zero_height is not None and not zeros.empty and args.zero_height > zeros.height:
        raise UsageError(f"--zero-height {args.zero_height} exceeds the table height {zeros.height}")
    cells = [Cell(ell, k, n) for ell in ells for k in ks for n in ns]
    t0 = time.perf_counter()
    if args.workers == 1:
        reports = []
        for c in cells:
            try:
                reports.append(_run_cell(c, trunc, args.strict_k, args.nk_scale, zeros))
            except (BesselError, OverflowError) as exc:
                print(f"error in cell ell={c.ell} k={c.k:g} N={c.n}: {exc}", file=sys.stderr)
                return EXIT_FAIL
    else:
        with ProcessPoolExecutor(args.workers, initializer=_init_worker, initargs=(args.zeros, args.max_zeros)) as pool:
            futs = [pool.submit(_run_cell, c, trunc, args.strict_k, args.nk_scale) for c in cells]
            reports = []
            for c, f in zip(cells, futs):
                try:
                    reports.append(f.result())
                except (BesselError, OverflowError) as exc:
                    print(f"error in cell ell={c.ell} k={c.k:g} N={c.n}: {exc}", file=sys.stderr)
                    return EXIT_FAIL
    lines, failures = summarize(reports)
    text = render_csv(reports, lines) if args.format == "csv" else render_json(reports, lines, failures)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"{len(reports)} cells in {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    for f in failures:
        print(f"assertion failed: {f}", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


# ---------------------------------------------------------------------------
# selfcheck


def cmd_selfcheck(args) -> int:
    from .selfcheck import SUITES

    names = list(SUITES) if not args.only else _parse_list(args.only, str.strip, "suite")
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    ok = True
    for name in names:
        t0 = time.perf_counter()
        try:
            rows = SUITES[name](args.zeros) if name == "zeros" else SUITES[name]()
        except ZeroLoadError as exc:
            print(f"FAIL {name}: {exc}")
            ok = False
            continue
        for r in rows:
            tag = "PASS" if r.ok else "FAIL"
            ok &= r.ok
            extra = f" ({r.detail})" if r.detail else ""
            print(f"{tag} {name}: {r.name}: achieved {r.achieved:.3e}, required < {r.required:.1e}{extra}")
        print(f"     {name}: {time.perf_counter() - t0:.1f} s")
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        if args.cmd == "verify":
            return cmd_verify(args)
        return cmd_selfcheck(args)
    except SystemExit as exc:
        # argparse: --help exits 0, bad flags exit 2
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZeroLoadError as exc:
        print(f"zero table error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
