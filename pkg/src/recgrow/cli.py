"""Command-line front end.

Exit codes: 0 all checks pass, 1 a mathematical check failed (an inequality
the theorems guarantee did not hold), 2 bad input or unmet hypothesis.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import io as rio
from .places import INFINITY, Place

COMMANDS = ("constants", "verify", "degree-growth", "horizon", "zannier", "numfield")
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Path
    mu_selector: str = "inf"
    mu: Place = INFINITY
    n_max: Optional[int] = None
    epsilon: Optional[Fraction] = None
    precision_bits: Optional[int] = None
    output_format: str = "csv"
    output_path: Optional[Path] = None


def _rational_arg(text: str) -> Fraction:
    try:
        return rio.parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _place_arg(text: str) -> str:
    try:
        rio.parse_place(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recgrow",
        description="Exact growth bounds for power sums over Q(x) and integer recurrences.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "constants": "bound constants (C~, q, S, C1, C2) for a place mu",
        "verify": "scan mu(G_n) against the lower and upper bounds",
        "degree-growth": "scan deg G_n against n * max deg alpha - C",
        "horizon": "scan linear independence of {pi * alpha^n}",
        "zannier": "check the subspace-type inequality on one instance",
        "numfield": "check |G_n| >= (max |alpha|)^(n(1-eps)) for an integer recurrence",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--input", "-i", required=True, type=Path)
        p.add_argument("--format", "-f", dest="output_format", choices=("csv", "json"),
                       default="json" if name in ("constants", "zannier") else "csv")
        p.add_argument("--output", "-o", type=Path, default=None)
        if name in ("constants", "verify"):
            p.add_argument("--mu", default="inf", type=_place_arg,
                           help="inf | point:<rational> | factor:<poly>")
        if name in ("verify", "degree-growth", "horizon", "numfield"):
            p.add_argument("--n-max", type=_nonneg_int, default=None)
        if name == "numfield":
            p.add_argument("--epsilon", type=_rational_arg, default=None)
            p.add_argument("--precision-bits", type=_nonneg_int, default=None)
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Parse argv; usage errors exit with status 2."""
    parser = _parser()
    args = parser.parse_args(list(argv))
    if not args.input.is_file():
        parser.error(f"input file not found: {args.input}")
    selector = getattr(args, "mu", "inf")
    eps = getattr(args, "epsilon", None)
    if eps is not None and not 0 < eps < 1:
        parser.error("--epsilon must lie in (0, 1)")
    return RunConfig(
        command=args.command,
        input_path=args.input,
        mu_selector=selector,
        mu=rio.parse_place(selector),
        n_max=getattr(args, "n_max", None),
        epsilon=eps,
        precision_bits=getattr(args, "precision_bits", None),
        output_format=args.output_format,
        output_path=args.output,
    )


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------

def _b(v: bool) -> str:
    return "true" if v else "false"


def _csv(comments: list[str], header: list[str], rows: list[list]) -> str:
    buf = _io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _run_constants(cfg: RunConfig):
    from .bounds import bound_constants, theorem1_constant

    spec = rio.load_spec(cfg.input_path)
    consts = bound_constants(spec, cfg.mu)
    data = {"mu": cfg.mu_selector, "t": spec.t, **consts.to_json(),
            "upper_constant": theorem1_constant(spec, cfg.mu)}
    if cfg.output_format == "json":
        return _json(data), EXIT_OK
    rows = [[k, json.dumps(v) if isinstance(v, list) else v] for k, v in data.items()]
    return _csv([], ["key", "value"], rows), EXIT_OK


def _run_verify(cfg: RunConfig):
    from .bounds import verify_bounds

    spec = rio.load_spec(cfg.input_path)
    rep = verify_bounds(spec, cfg.mu, 100 if cfg.n_max is None else cfg.n_max)
    code = EXIT_OK if rep.n0_observed is not None and not rep.lower_violations else EXIT_VIOLATION
    c = rep.constants
    if cfg.output_format == "json":
        return _json({
            "mu": cfg.mu_selector,
            "constants": c.to_json(),
            "upper_constant": rep.upper_constant,
            "n0_observed": rep.n0_observed,
            "zero_rows": rep.zero_rows,
            "rows": [{"n": r.n, "mu_Gn": r.mu_Gn, "lower": r.lower, "upper": r.upper,
                      "ok": r.ok, "zero_skip": r.zero_skip} for r in rep.rows],
        }), code
    comments = [
        f"n0_observed={'none' if rep.n0_observed is None else rep.n0_observed}",
        f"mu={cfg.mu_selector} c_tilde={c.c_tilde} q={c.q} size_over_C={c.S.size_over_C} "
        f"c1={c.c1} c2={c.c2} upper_constant={rep.upper_constant}",
    ]
    rows = [[r.n, "" if r.zero_skip else r.mu_Gn, r.lower, r.upper, _b(r.ok), _b(r.zero_skip)]
            for r in rep.rows]
    return _csv(comments, ["n", "mu_Gn", "lower", "upper", "ok", "zero_skip"], rows), code


def _run_degree(cfg: RunConfig):
    from .bounds import corollary_degree_bound

    spec = rio.load_spec(cfg.input_path)
    rep = corollary_degree_bound(spec, 100 if cfg.n_max is None else cfg.n_max)
    code = EXIT_OK if rep.n0_observed is not None else EXIT_VIOLATION
    if cfg.output_format == "json":
        return _json({
            "constant": rep.constant,
            "max_alpha_degree": rep.max_alpha_degree,
            "n0_observed": rep.n0_observed,
            "rows": [{"n": r.n, "deg_Gn": r.deg_Gn, "nu_inf_Gn": r.nu_inf, "lower": r.lower,
                      "slack": r.slack, "ok": r.ok, "zero_skip": r.zero_skip} for r in rep.rows],
        }), code
    comments = [
        f"n0_observed={'none' if rep.n0_observed is None else rep.n0_observed}",
        f"constant={rep.constant} max_alpha_degree={rep.max_alpha_degree}",
    ]
    blank = lambda v: "" if v is None else v  # noqa: E731
    rows = [[r.n, blank(r.deg_Gn), blank(r.nu_inf), r.lower, blank(r.slack), _b(r.ok),
             _b(r.zero_skip)] for r in rep.rows]
    header = ["n", "deg_Gn", "nu_inf_Gn", "lower", "slack", "ok", "zero_skip"]
    return _csv(comments, header, rows), code


def _run_horizon(cfg: RunConfig):
    from .bounds import _require_nondegenerate, horizon_of, independence_scan

    spec = rio.load_spec(cfg.input_path)
    _require_nondegenerate(spec)
    n_max = 100 if cfg.n_max is None else cfg.n_max
    scan = independence_scan(spec, n_max)
    h = horizon_of(scan)
    # element pi_{j,k} alpha_j^n is labelled "j:k", j the 1-based term, k the power of n
    fmt_sub = lambda s: ";".join(f"{j + 1}:{k}" for j, k in s) if s else ""  # noqa: E731
    if cfg.output_format == "json":
        return _json({
            "n_max": n_max,
            "horizon": h,
            "pis": [list(p) for p in scan[0].witness.pis] if scan else [],
            "dependent": [{"n": n, "subset": [[j + 1, k] for j, k in r.witness.dependent_subset]}
                          for n, r in enumerate(scan) if not r.independent],
        }), EXIT_OK
    rows = [[n, _b(r.independent), fmt_sub(r.witness.dependent_subset)]
            for n, r in enumerate(scan)]
    return _csv([f"horizon={'none' if h is None else h}"],
                ["n", "independent", "dependent_subset"], rows), EXIT_OK


def _run_zannier(cfg: RunConfig):
    from .bounds import zannier_check

    inst = rio.zannier_from_dict(rio.load_document(cfg.input_path))
    res = zannier_check(inst)
    code = EXIT_OK if res.ok else EXIT_VIOLATION
    data = {"n": inst.n, "r": inst.r, "size_over_C": inst.S.size_over_C,
            "lhs": res.lhs, "rhs": res.rhs, "ok": res.ok}
    if cfg.output_format == "json":
        return _json(data), code
    return _csv([], list(data), [[_b(v) if isinstance(v, bool) else v for v in data.values()]]), code


def _run_numfield(cfg: RunConfig):
    from .numfield import EpsilonCheckConfig, IntRecurrence, verify_epsilon_inequality

    d = rio.numfield_from_dict(rio.load_document(cfg.input_path))
    bits = cfg.precision_bits or d["precision_bits"]
    eps = cfg.epsilon if cfg.epsilon is not None else d.get("epsilon")
    if eps is None:
        raise ValueError("numfield needs epsilon (input file or --epsilon)")
    n_max = cfg.n_max if cfg.n_max is not None else d.get("n_max", 100)
    rec = IntRecurrence(d["char_coeffs"], d["initial_terms"], bits)
    rep = verify_epsilon_inequality(rec, EpsilonCheckConfig(eps, n_max, bits))
    code = EXIT_OK if rep.min_n is not None else EXIT_VIOLATION
    ok_str = {"pass": "true", "fail": "false", "undecided": "undecided"}
    if cfg.output_format == "json":
        return _json({
            "epsilon": rio.format_rational(rep.epsilon),
            "n_max": n_max,
            "precision_bits": bits,
            "min_n": rep.min_n,
            "undecided": rep.undecided,
            "rows": [{"n": r.n, "abs_Gn": str(r.abs_Gn),
                      "threshold_log": f"{float(r.log_threshold_hi):.12f}",
                      "ok": ok_str[r.status]} for r in rep.rows],
        }), code
    rows = [[r.n, str(r.abs_Gn), f"{float(r.log_threshold_hi):.12f}", ok_str[r.status]]
            for r in rep.rows]
    comments = [f"min_n={'none' if rep.min_n is None else rep.min_n}",
                f"epsilon={rio.format_rational(rep.epsilon)} precision_bits={bits}"]
    return _csv(comments, ["n", "abs_Gn_digits", "threshold_log", "ok"], rows), code


_HANDLERS = {
    "constants": _run_constants,
    "verify": _run_verify,
    "degree-growth": _run_degree,
    "horizon": _run_horizon,
    "zannier": _run_zannier,
    "numfield": _run_numfield,
}


def run(cfg: RunConfig) -> int:
    try:
        text, code = _HANDLERS[cfg.command](cfg)
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"recgrow {cfg.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.output_path is None:
        sys.stdout.write(text)
    else:
        cfg.output_path.write_text(text)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    cfg = parse_config(sys.argv[1:] if argv is None else argv)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
