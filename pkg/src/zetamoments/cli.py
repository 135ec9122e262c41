"""Command-line front end: rmt | hybrid | zeta | selftest, emitting CSV or JSON tables."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import subprocess
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ACCURACY = 3

SMCHECK_TOL = 1e-6


class UsageError(Exception):
    pass


class AccuracyFailure(Exception):
    def __init__(self, message: str, rows: list[dict] | None = None):
        super().__init__(message)
        self.rows = rows or []


# ------------------------------------------------------------- formatting


def artifact_version() -> str:
    """Package version plus the short commit id when run from a git checkout."""
    try:
        rev = subprocess.run(
            ["git", "rev-parse", "--short=12", "HEAD"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
        if rev.returncode == 0 and rev.stdout.strip():
            return f"{__version__}+g{rev.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return f"{__version__}+unknown"


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _flatten(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, (complex, np.complexfloating)):
            out[f"{k}_re"] = float(v.real)
            out[f"{k}_im"] = float(v.imag)
        elif isinstance(v, np.generic):
            out[k] = v.item()
        elif isinstance(v, (list, tuple)):
            out[k] = " ".join(str(x) for x in v)
        else:
            out[k] = v
    return out


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render(rows: list[dict], fmt: str) -> str:
    flat = [_flatten(r) for r in rows]
    if fmt == "json":
        return json.dumps(flat, indent=1, allow_nan=True) + "\n"
    if not flat:
        return ""
    cols: list[str] = []
    for r in flat:
        cols.extend(c for c in r if c not in cols)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in flat:
        w.writerow([_csv_cell(r.get(c)) for c in cols])
    return buf.getvalue()


def _stamp(rows: list[dict], config: dict, seed) -> list[dict]:
    h = config_hash(config)
    v = artifact_version()
    return [{**r, "seed": seed, "config_hash": h, "version": v} for r in rows]


# ---------------------------------------------------------------- parsing


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="write the table here instead of stdout")
    p = _Parser(prog="zetamoments", description="Moments of derivatives at zeros: matrix models and zeta data.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    r = sub.add_parser("rmt", parents=[common], help="CUE derivative moments: Monte Carlo, exact and leading order")
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--orders", type=_int_list, required=True, help="n_1,...,n_k (a single n is repeated k times)")
    r.add_argument("--n", type=_int_list, required=True, help="matrix sizes")
    r.add_argument("--samples", type=int, default=100_000)
    r.add_argument("--seed", type=int, default=7)
    r.add_argument("--method", choices=("cmv", "qr"), default="cmv")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--no-exact", action="store_true", help="skip the exact finite-N value")

    h = sub.add_parser("hybrid", help="hybrid Euler-Hadamard matrix model")
    hs = h.add_subparsers(dest="hybrid_command", parser_class=_Parser)
    sm = hs.add_parser("smcheck", parents=[common], help="Fourier coefficients s_m: closed form vs quadrature")
    sm.add_argument("--logx", type=float, required=True)
    sm.add_argument("--y", type=float, required=True)
    sm.add_argument("--k", type=_complex, default=1.0)
    sm.add_argument("--nodes", type=int, default=4096)
    t13 = hs.add_parser("t13", parents=[common], help="first-derivative moment of the model vs e^{ik pi/2} N^k / Gamma(k+2)")
    t13.add_argument("--k", type=_complex, required=True)
    t13.add_argument("--n", type=int, required=True)
    t13.add_argument("--samples", type=int, default=100_000)
    t13.add_argument("--logx", type=float, default=3.0)
    t13.add_argument("--y", type=float, default=10.0)
    t13.add_argument("--seed", type=int, default=7)
    t13.add_argument("--method", choices=("cmv", "qr"), default="cmv")

    z = sub.add_parser("zeta", help="sums over zeta zeros")
    zs = z.add_subparsers(dest="zeta_command", parser_class=_Parser)
    zm = zs.add_parser("moments", parents=[common], help="derivative moments at checkpoints (zero counts)")
    zm.add_argument("--orders", type=_int_list, required=True)
    zm.add_argument("--zeros", required=True)
    zm.add_argument("--checkpoints", type=_int_list, required=True)
    zm.add_argument("--cache", help="JSON-lines result cache")
    zm.add_argument("--workers", type=int, default=1)
    zl = zs.add_parser("landau", parents=[common], help="sum of m^{-rho} over zeros vs the Landau main term")
    zl.add_argument("--m", type=int, required=True)
    zl.add_argument("--zeros", required=True)
    zl.add_argument("--count", type=int, help="use the first COUNT zeros")
    zp = zs.add_parser("px", parents=[common], help="P_X products summed over zeros")
    zp.add_argument("--k", type=float, help="real power of P_X (all orders zero)")
    zp.add_argument("--orders", type=_int_list, help="derivative orders n_1,...,n_k")
    zp.add_argument("--x", default="auto", help="cutoff X, or 'auto' for X = log T")
    zp.add_argument("--zeros", required=True)
    zp.add_argument("--count", type=int)
    zg = zs.add_parser("genzeros", parents=[common], help="generate zero ordinates locally")
    zg.add_argument("--count", type=int, required=True)
    zg.add_argument("--digits", type=int, default=12)

    st = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    st.add_argument("--quick", action="store_true")
    st.add_argument("--seed", type=int, default=None)
    st.add_argument("--zeros", help="zeros file (defaults to the bundled dataset)")
    st.add_argument("--only", type=_int_list, help="criterion numbers to run")
    st.add_argument("--workers", type=int, default=1)
    return p


# --------------------------------------------------------------- commands


def cmd_rmt(args) -> list[dict]:
    from .exact import MixedMomentSpec, exact_derivative_moment, theorem3_prediction
    from .rmt import mixed_moment_mc

    orders = list(args.orders)
    if len(orders) == 1 and args.k > 1:
        orders = orders * args.k
    if len(orders) != args.k:
        raise UsageError(f"--orders has {len(orders)} entries but --k is {args.k}")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    rows = []
    for N in args.n:
        try:
            spec = MixedMomentSpec(N, tuple(orders))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        est = mixed_moment_mc(spec, args.samples, args.seed, method=args.method, workers=args.workers)
        pred = theorem3_prediction(spec)
        row = {"N": N, "k": args.k, "orders": orders, "samples": args.samples, "mc": est.mean, "stderr": est.stderr}
        if not args.no_exact:
            ex = complex(exact_derivative_moment(spec))
            row.update({"exact": ex, "mc_z_score": abs(est.mean - ex) / est.stderr if est.stderr else math.inf})
        row.update({"prediction": pred, "ratio_mc": est.mean / pred})
        if not args.no_exact:
            row["ratio_exact"] = row["exact"] / pred
        rows.append(row)
    return rows


def cmd_hybrid(args) -> list[dict]:
    from .hybrid import HybridParams, SmoothingKernel, hybrid_moment_mc, theorem13_prediction
    from .hybrid.fx import s_m_closed_form, s_m_numeric
    from .hybrid.model import assembled_theorem13, hybrid_exact_toeplitz

    if args.hybrid_command is None:
        raise UsageError("hybrid needs a subcommand: smcheck | t13")
    try:
        kernel = SmoothingKernel(args.y)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.hybrid_command == "smcheck":
        if args.logx < math.log(2):
            raise UsageError("--logx must be at least log 2")
        params = HybridParams(args.logx, kernel)
        top = 2 * math.ceil(args.logx)
        ms = np.arange(0, top + 1)
        num = s_m_numeric(params, args.k, ms, args.nodes)
        rows = []
        for m, v in zip(ms.tolist(), num):
            c = s_m_closed_form(params, args.k, m)
            rows.append({"m": m, "logx": args.logx, "Y": args.y, "k": args.k, "closed": c, "numeric": complex(v), "abs_diff": abs(complex(v) - c)})
        worst = max(r["abs_diff"] for r in rows)
        print(f"max |delta s_m| = {worst:.3e}", file=sys.stderr)
        if worst > SMCHECK_TOL:
            raise AccuracyFailure(f"max |delta s_m| = {worst:.3e} exceeds {SMCHECK_TOL:g}", rows)
        return rows
    k = args.k
    if k.imag == 0 and k.real <= -3 and k.real == round(k.real):
        raise UsageError("k must avoid -3, -4, -5, ...")
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    params = HybridParams(args.logx, kernel, args.n)
    kk = k.real if k.imag == 0 else k
    est = hybrid_moment_mc(params, kk, args.samples, args.seed, method=args.method)
    pred = theorem13_prediction(k, args.n)
    row = {
        "N": args.n,
        "k": k,
        "logx": args.logx,
        "Y": args.y,
        "samples": args.samples,
        "mc": est.mean,
        "stderr": est.stderr,
        "prediction": pred,
        "ratio": est.mean / pred,
        "assembled": assembled_theorem13(params, k, args.n),
    }
    if k.imag == 0 and k.real >= 0 and k.real == round(k.real) and args.n <= 400:
        ex = hybrid_exact_toeplitz(params, int(k.real), args.n)
        row.update({"exact_finite_n": ex, "ratio_exact": ex / pred})
    return [row]


def _load(path: str, count: int | None = None):
    from .zeta import load_zeros

    if not Path(path).is_file():
        raise UsageError(f"zeros file not found: {path}")
    return load_zeros(path, limit=count)


def cmd_zeta(args) -> list[dict]:
    from .euler import DerivativeSpec
    from .zeta import ResultCache, generate_zeros
    from .zeta.moments import discrete_moment_checkpoints, landau_empirical, p_x_sum_over_zeros

    cmd = args.zeta_command
    if cmd is None:
        raise UsageError("zeta needs a subcommand: moments | landau | px | genzeros")
    if cmd == "genzeros":
        if args.count < 1:
            raise UsageError("--count must be positive")
        if not args.output:
            raise UsageError("genzeros needs --output")
        ds = generate_zeros(args.count)
        ds.write(args.output, digits=args.digits)
        return []
    if cmd == "moments":
        ds = _load(args.zeros)
        if max(args.checkpoints) > ds.count or min(args.checkpoints) < 1:
            raise UsageError(f"checkpoints must lie in 1..{ds.count}")
        if any(o < 0 for o in args.orders):
            raise UsageError("orders must be non-negative")
        params = {"orders": args.orders, "checkpoints": sorted(args.checkpoints)}
        cache = ResultCache(args.cache) if args.cache else None
        rows = cache.get(ds.digest, "moments", params) if cache is not None else None
        if rows is None:
            reps = discrete_moment_checkpoints(ds, args.orders, args.checkpoints, workers=args.workers)
            rows = [{"orders": args.orders, **r.as_dict()} for r in reps]
            if cache is not None:
                cache.put(ds.digest, "moments", params, rows)
        return rows
    ds = _load(args.zeros, args.count)
    if ds.count == 0:
        raise UsageError("the zeros file is empty")
    T = float(ds.ordinates[-1])
    if cmd == "landau":
        if args.m < 2:
            raise UsageError("the Landau formula needs m >= 2")
        emp, pred = landau_empirical(ds, args.m, T)
        return [{"m": args.m, "T": T, "count": ds.count, "empirical": emp, "predicted": pred, "ratio": emp / pred if pred else None, "abs_empirical": abs(emp)}]
    if cmd == "px":
        X = None if args.x == "auto" else float(args.x)
        if X is not None and X < 2:
            raise UsageError("X must be at least 2")
        orders = args.orders or [0]
        if args.k is not None and any(orders):
            raise UsageError("--k needs all orders zero")
        rep = p_x_sum_over_zeros(ds, X, DerivativeSpec(tuple(orders)), T, k=args.k)
        return [
            {
                "T": T,
                "X": rep.X,
                "k": args.k if args.k is not None else len(orders),
                "orders": orders,
                "count": rep.count,
                "sum": rep.sum,
                "normalized": rep.normalized,
                "error_class": rep.prediction.error_class.value,
                "main_term": rep.prediction.main,
                "log_log_exponent": rep.prediction.log_log_exponent,
            }
        ]
    raise UsageError(f"unknown zeta command {cmd!r}")


def cmd_selftest(args) -> list[dict]:
    from .acceptance import DEFAULT_SEED, run_suite

    seed = DEFAULT_SEED if args.seed is None else args.seed
    include = args.only
    if include and any(n not in range(1, 13) for n in include):
        raise UsageError("criteria are numbered 1..12")

    def progress(res):
        print(f"{res.line()}  [{res.runtime:.1f}s]", file=sys.stderr, flush=True)

    results = run_suite(quick=args.quick, seed=seed, zeros=args.zeros, include=include, workers=args.workers, progress=progress)
    rows = [{"criterion": r.number, "title": r.title, "passed": r.passed, "quick": args.quick, "metrics": json.dumps(r.metrics, sort_keys=True, default=_json_default)} for r in results]
    if not all(r.passed for r in results):
        raise AccuracyFailure("some acceptance criteria failed", rows)
    return rows


def _json_default(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.generic):
        return v.item()
    raise TypeError(type(v))


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "format", "workers")}


def _emit(rows: list[dict], args) -> None:
    if not rows:
        return
    text = render(rows, args.format)
    if args.output and getattr(args, "zeta_command", None) != "genzeros":
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
        if args.command == "selftest" and args.seed is None:
            from .acceptance import DEFAULT_SEED

            args.seed = DEFAULT_SEED
        handler = {"rmt": cmd_rmt, "hybrid": cmd_hybrid, "zeta": cmd_zeta, "selftest": cmd_selftest}[args.command]
        config = _config(args)
        if getattr(args, "zeros", None) and Path(args.zeros).is_file():
            config["zeros_sha256"] = hashlib.sha256(Path(args.zeros).read_bytes()).hexdigest()
        seed = getattr(args, "seed", None)
        try:
            rows = handler(args)
        except AccuracyFailure as exc:
            _emit(_stamp(exc.rows, config, seed), args)
            print(f"accuracy failure: {exc}", file=sys.stderr)
            return EXIT_ACCURACY
        _emit(_stamp(rows, config, seed), args)
        return EXIT_OK
    except UsageError as exc:
        print(str(exc).rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
