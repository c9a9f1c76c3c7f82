"""Command-line interface: ``odometer-rqa <subcommand> ...``.

Exit codes: 0 success, 1 no result (failed pattern check, no alpha bracket),
2 domain error or bad arguments, 3 tolerance not reachable under the k cap.
Every file written starts with a header line holding the tool version and the
canonical run configuration; JSON printed to stdout carries the same data in
its ``config`` and ``version`` keys.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analysis import NoBracket, det_extremes, det_profile, find_alpha_for_liminf
from .distmatrix import (
    BRUTE_MAX_K,
    MATRIX_MAX_K,
    brute_force_count,
    build_matrix,
    count_close_pairs,
    ell_str,
    parse_ell,
    row_one_count_inf,
    verify_patterns,
)
from .exact import DomainError, ToleranceUnreachable, as_fraction, as_threshold, parse_alpha
from .maps import ApproxMap, DelahayeMap, orbit
from .rqa import corr_integral_f, corr_integral_fk, det_inf_f

PROG = "odometer-rqa"


@dataclass
class RunConfig:
    """Parsed arguments in canonical form (exact alpha, eps as a polynomial in a)."""

    subcommand: str
    options: dict = field(default_factory=dict)

    def canonical(self) -> str:
        return json.dumps({"subcommand": self.subcommand, **self.options}, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_canonical(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        sub = data.pop("subcommand")
        return cls(sub, data)

    def header(self) -> str:
        return f"{PROG} {__version__} {self.canonical()}"


def num(x) -> dict:
    """A number as a decimal string plus an exact rational string."""
    q = x if isinstance(x, Fraction) else as_fraction(x)
    return {"decimal": repr(float(q)), "exact": str(q)}


def approx_json(v) -> dict:
    return {"value": num(v.exact if v.exact is not None else v.value), "error_radius": num(v.error_radius),
            "k_used": v.k_used}


def _emit(cfg: RunConfig, payload: dict) -> None:
    payload = {"version": __version__, "config": json.loads(cfg.canonical()), **payload}
    print(json.dumps(payload, indent=2, sort_keys=True))


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _canon_eps(eps: str, alpha: Fraction) -> str:
    return as_threshold(eps, alpha).poly_str()


# -- subcommands --------------------------------------------------------------

def cmd_orbit(args) -> int:
    a = parse_alpha(args.alpha)
    x0 = as_threshold(args.x0, a).value
    if not 0 <= x0 <= 1:
        raise DomainError("x0 must lie in [0, 1]")
    if args.n < 0:
        raise DomainError("n must be non-negative")
    g = DelahayeMap(a) if args.k is None else ApproxMap(a, args.k)
    cfg = RunConfig("orbit", {"alpha": str(a), "k": args.k, "x0": str(x0), "n": args.n})
    xs = orbit(g, x0, args.n)
    lines = [f"# {cfg.header()}", "iter,x,x_exact"]
    lines += [f"{i},{float(x)!r},{x}" for i, x in enumerate(xs)]
    text = "\n".join(lines) + "\n"
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_matrix(args) -> int:
    a = parse_alpha(args.alpha)
    ell = parse_ell(args.ell)
    cfg = RunConfig("matrix", {"alpha": str(a), "k": args.k, "ell": ell_str(ell), "eps": _canon_eps(args.eps, a)})
    M = build_matrix(args.k, a, ell, args.eps)
    if args.pbm:
        Path(args.pbm).write_bytes(M.to_pbm(cfg.header()))
    summary = M.summary()
    summary["eps_value"] = num(M.eps.value)
    if args.json:
        _write_text(args.json, f"# {cfg.header()}\n" + json.dumps(summary, sort_keys=True) + "\n")
    _emit(cfg, summary)
    return 0


def cmd_integral(args) -> int:
    a = parse_alpha(args.alpha)
    ell = parse_ell(args.ell)
    eps = as_threshold(args.eps, a)
    opts = {"alpha": str(a), "ell": ell_str(ell), "eps": eps.poly_str(), "tol": args.tol, "k": args.k,
            "det": args.det}
    cfg = RunConfig("integral", opts)
    payload = {"eps_value": num(eps.value)}
    if args.k is not None:
        c = corr_integral_fk(a, args.k, ell, eps)
        payload.update(quantity=f"c_{ell_str(ell)} of f_(alpha,k)", value=num(c), error_radius=num(0), k_used=args.k)
        if args.det:
            payload["det"] = num(corr_integral_fk(a, args.k, "inf", eps) / corr_integral_fk(a, args.k, 1, eps))
    elif args.det:
        payload.update(quantity="det_inf of f_alpha", **approx_json(det_inf_f(a, eps, args.tol)))
    else:
        payload.update(quantity=f"c_{ell_str(ell)} of f_alpha", **approx_json(corr_integral_f(a, ell, eps, args.tol)))
    _emit(cfg, payload)
    return 0


def cmd_profile(args) -> int:
    a = parse_alpha(args.alpha)
    cfg = RunConfig("profile", {"alpha": str(a), "points": args.points, "tol": args.tol})
    prof = det_profile(a, args.points, args.tol)
    if args.csv:
        _write_text(args.csv, prof.to_csv(cfg.header()))
    if args.svg:
        _write_text(args.svg, prof.to_svg(cfg.header()))
    lo, hi = prof.argmin(), prof.argmax()
    _emit(cfg, {
        "k_used": prof.k_used,
        "s": prof.s,
        "points": len(prof.eps),
        "error_radius": num(prof.det[0].error_radius),
        "min": {"eps": num(prof.eps[lo]), "det": num(prof.det[lo].exact)},
        "max": {"eps": num(prof.eps[hi]), "det": num(prof.det[hi].exact)},
        "certified_upper": max(prof.cell_upper_bounds()),
    })
    return 0


def cmd_extremes(args) -> int:
    a = parse_alpha(args.alpha)
    cfg = RunConfig("extremes", {"alpha": str(a), "tol": args.tol, "points": args.points})
    ex = det_extremes(a, args.tol, args.points)
    _emit(cfg, {
        "utdet": approx_json(ex.utdet),
        "otdet": approx_json(ex.otdet),
        "argmin_eps": num(ex.argmin_eps),
        "argmax_eps": num(ex.argmax_eps),
        "otdet_grid_estimate": ex.otdet_grid_estimate,
        "otdet_certified_upper": ex.otdet_certified_upper,
    })
    return 0


def cmd_scan_alpha(args) -> int:
    target = as_fraction(args.target)
    cfg = RunConfig("scan-alpha", {"target": str(target), "tol": args.tol})
    try:
        res = find_alpha_for_liminf(target, args.tol)
    except NoBracket as exc:
        _emit(cfg, {"error": str(exc), "scanned": [{"alpha": str(a), "utdet": v.value} for a, v in exc.scanned]})
        return 1
    _emit(cfg, {
        "alpha": num(res.alpha),
        "utdet": approx_json(res.utdet),
        "bisection_steps": res.bisection_steps,
        "scanned": [{"alpha": str(a), "utdet": v.value} for a, v in res.scanned],
    })
    return 0


def cmd_verify(args) -> int:
    a = parse_alpha(args.alpha)
    ell = parse_ell(args.ell)
    cfg = RunConfig("verify", {"alpha": str(a), "k": args.k, "ell": ell_str(ell), "eps": _canon_eps(args.eps, a)})
    rep = verify_patterns(build_matrix(args.k, a, ell, args.eps))
    _emit(cfg, {"all_hold": rep.all_hold, "patterns": rep.as_dict()})
    return 0 if rep.all_hold else 1


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def cmd_bench(args) -> int:
    a = parse_alpha(args.alpha)
    ell = parse_ell(args.ell)
    cfg = RunConfig("bench", {"alpha": str(a), "ell": ell_str(ell), "eps": _canon_eps(args.eps, a),
                              "k_min": args.k_min, "k_max": args.k_max})
    rows = []
    ok = True
    for k in range(args.k_min, args.k_max + 1):
        row = {"k": k}
        fast, row["fast_seconds"] = _timed(count_close_pairs, k, a, ell, args.eps)
        row["fast_count"] = fast
        if ell == float("inf"):
            ro, row["row_one_seconds"] = _timed(row_one_count_inf, k, a, args.eps)
            row["row_one_count"] = ro
            ok &= ro == fast
        if k <= BRUTE_MAX_K:
            naive, row["naive_seconds"] = _timed(brute_force_count, k, a, ell, args.eps)
            row["naive_count"] = naive
            row["agree"] = naive == fast
            ok &= naive == fast
        else:
            row["naive"] = f"refused: naive fill capped at k <= {BRUTE_MAX_K}"
        rows.append(row)
    _emit(cfg, {"rows": rows, "all_agree": ok})
    return 0 if ok else 1


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog=PROG, description="Recurrence quantification for odometer interval maps.")
    p.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("orbit", help="orbit of f_alpha (or f_alpha,k) as CSV")
    s.add_argument("--alpha", required=True)
    s.add_argument("--k", type=int, default=None, help="use the approximation f_alpha,k")
    s.add_argument("--x0", default="0", help="start point, rational or expression in a")
    s.add_argument("--n", type=int, default=16)
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=cmd_orbit)

    s = sub.add_parser("matrix", help="ell-distance matrix D_k(eps) as PBM and JSON")
    s.add_argument("--alpha", required=True)
    s.add_argument("--k", type=int, required=True, help=f"word length (at most {MATRIX_MAX_K})")
    s.add_argument("--ell", default="1")
    s.add_argument("--eps", required=True)
    s.add_argument("--pbm")
    s.add_argument("--json")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("integral", help="correlation integral (or det with --det) of f_alpha")
    s.add_argument("--alpha", required=True)
    s.add_argument("--ell", default="1")
    s.add_argument("--eps", required=True)
    s.add_argument("--tol", type=float, default=0.01)
    s.add_argument("--k", type=int, default=None, help="exact value for f_alpha,k instead")
    s.add_argument("--det", action="store_true", help="asymptotic determinism c_inf / c_1")
    s.set_defaults(func=cmd_integral)

    s = sub.add_parser("profile", help="det_inf over one fundamental domain of eps")
    s.add_argument("--alpha", required=True)
    s.add_argument("--points", type=int, default=512)
    s.add_argument("--tol", type=float, default=0.01)
    s.add_argument("--svg")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("extremes", help="liminf and limsup of det_inf as eps -> 0")
    s.add_argument("--alpha", required=True)
    s.add_argument("--tol", type=float, default=0.01)
    s.add_argument("--points", type=int, default=512)
    s.set_defaults(func=cmd_extremes)

    s = sub.add_parser("scan-alpha", help="find alpha with a prescribed liminf of det_inf")
    s.add_argument("--target", required=True)
    s.add_argument("--tol", type=float, default=0.005)
    s.set_defaults(func=cmd_scan_alpha)

    s = sub.add_parser("verify", help="check the six row/column patterns of D_k(eps)")
    s.add_argument("--alpha", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--ell", default="1")
    s.add_argument("--eps", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="naive matrix fill against the fast counting paths")
    s.add_argument("--alpha", default="1/3")
    s.add_argument("--ell", default="inf")
    s.add_argument("--eps", default="a")
    s.add_argument("--k-min", type=int, default=4)
    s.add_argument("--k-max", type=int, default=10)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToleranceUnreachable as exc:
        print(f"error: {exc} (best radius {exc.best_radius:.3g} at k = {exc.k_used})", file=sys.stderr)
        return 3


run = main

if __name__ == "__main__":
    sys.exit(main())
