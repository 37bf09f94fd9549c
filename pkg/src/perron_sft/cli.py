"""perron-sft command line.

Every command prints one JSON document on stdout. Exit codes: 0 ok,
1 verification found discrepancies, 2 invalid input, 3 assumption violated,
4 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from . import __version__, measures, oracle, poly, spectral
from .errors import ParseError, SFTError
from .graph import DigraphInput, digraph_perron
from .words import ShiftSpec, as_word, validate_spec, word_str


# ------------------------------------------------------------- JSON output

def _fmt(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x) or math.isinf(x):
            return "null"
        return "%.17g" % x
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_fmt(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in obj) + "]"
    return json.dumps(str(obj))


def dumps(obj) -> str:
    return _fmt(obj)


# ----------------------------------------------------------------- parsing

def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", path=path) from exc


def _parse_word(raw, q: int, where: str):
    if isinstance(raw, str):
        if q > 10:
            raise ParseError(f"{where}: digit strings are ambiguous for q > 10, use a list", position=where)
        return as_word(raw)
    if isinstance(raw, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in raw):
        return tuple(raw)
    raise ParseError(f"{where}: a word is a digit string or a list of integers", position=where)


def parse_spec_document(text: str):
    """Returns (ShiftSpec, options dict)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                         line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict) or "q" not in doc:
        raise ParseError("spec must be an object with keys q and forbidden")
    q = doc["q"]
    if not isinstance(q, int) or isinstance(q, bool):
        raise ParseError("q must be an integer", position="q")
    forb = doc.get("forbidden", [])
    if not isinstance(forb, list):
        raise ParseError("forbidden must be a list", position="forbidden")
    words = [_parse_word(w, q, f"forbidden[{k}]") for k, w in enumerate(forb)]
    return validate_spec(q, words), dict(doc.get("options", {}))


def parse_matrix_document(text: str) -> DigraphInput:
    """Text form (n, then n rows of 0/1) or JSON (a list of rows or {"matrix": rows})."""
    stripped = text.strip()
    if stripped.startswith("[") or stripped.startswith("{"):
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                             line=exc.lineno, column=exc.colno) from exc
        rows = doc["matrix"] if isinstance(doc, dict) else doc
    else:
        lines = [ln.split() for ln in stripped.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty matrix file")
        try:
            n = int(lines[0][0])
            rows = [[int(t) for t in ln] for ln in lines[1:]]
        except ValueError as exc:
            raise ParseError(f"non-integer token: {exc}") from exc
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ParseError(f"expected {n} rows of {n} entries", line=1)
    return DigraphInput(np.array(rows, dtype=np.int64))


# ------------------------------------------------------------------ report

def _words_out(words, q):
    return [word_str(w, q) for w in words]


def report_dict(rep: spectral.SpectralReport, labels=None) -> dict:
    spec = rep.spec
    A = rep.adjacency.entries.astype(float)
    out = {
        "input": {"q": spec.q, "forbidden": _words_out(spec.forbidden, spec.q), "p": spec.p},
        "theta": rep.theta,
        "entropy": rep.entropy,
        "period": rep.period,
        "irreducible": rep.irreducible,
        "primitive": rep.primitive,
        "labels": labels if labels is not None else _words_out(rep.labels, spec.q),
        "u": rep.u,
        "v": rep.v,
        "normalization": rep.normalization,
        "normalization_note": rep.normalization_note,
        "R": rep.R,
        "C": rep.C,
        "diagnostics": {
            "right_residual": float(np.abs(A @ rep.v - rep.theta * rep.v).max()),
            "left_residual": float(np.abs(rep.u @ A - rep.theta * rep.u).max()),
            "states": rep.adjacency.size,
            "one_plus_rprime": rep.one_plus_rprime,
        },
    }
    if rep.system is not None:
        sysm = rep.system
        out["r"] = {"numerator": sysm.r.num.to_list(), "denominator": sysm.r.den.to_list()}
        out["diagnostics"]["D"] = sysm.D.to_list()
        out["diagnostics"]["S"] = sysm.S.to_list()
        out["diagnostics"]["route"] = sysm.route
    else:
        out["r"] = {"numerator": [0], "denominator": [1]}
    if not rep.irreducible:
        out["diagnostics"]["warning"] = "reducible shift: positivity of u and v is not guaranteed"
    return out


# ---------------------------------------------------------------- commands

def _load(args):
    spec, opts = parse_spec_document(_read(args.spec))
    tol_root = args.tol_root if args.tol_root is not None else opts.get("tol_root", poly.ROOT_TOL)
    tol_sing = args.tol_singular if args.tol_singular is not None else opts.get("tol_singular", poly.SINGULAR_TOL)
    return spec, {"tol_root": float(tol_root), "tol_singular": float(tol_sing)}


def cmd_analyze(args):
    spec, tols = _load(args)
    return report_dict(spectral.analyze(spec, **tols)), 0


def _cli_word(raw: str, q: int):
    raw = raw.strip()
    if raw.startswith("["):
        try:
            return _parse_word(json.loads(raw), q, "word")
        except json.JSONDecodeError as exc:
            raise ParseError(f"cannot read word {raw!r}") from exc
    return _parse_word(raw, q, "word")


def cmd_measure(args):
    spec, tols = _load(args)
    rep = spectral.analyze(spec, **tols)
    w = _cli_word(args.word, spec.q)
    return {"word": word_str(w, spec.q), "n": len(w), "measure": measures.parry_measure(rep, w)}, 0


def cmd_count(args):
    spec, _ = _load(args)
    if args.max_n < 0:
        raise ParseError("--max-n must be >= 0")
    out = {"f": spectral.count_series(spec, args.max_n)}
    if not spec.is_full_shift:
        sysm = spectral.correlation_system(spec)
        out["f_i"] = spectral.end_count_series(spec, args.max_n, sysm)
        out["g_i"] = spectral.begin_count_series(spec, args.max_n, sysm)
        out["forbidden"] = _words_out(spec.forbidden, spec.q)
    return out, 0


def cmd_escape(args):
    spec, tols = _load(args)
    hole = [_cli_word(h, spec.q) for h in (args.hole or [])]
    theta = spectral.perron_root_mp(spec, tol_root=tols["tol_root"])
    union = measures.union_spec(spec, hole)
    rho = measures.escape_rate(spec, hole, theta=theta)
    return {
        "hole": _words_out(hole, spec.q),
        "union_forbidden": _words_out(union.forbidden, spec.q),
        "theta": float(theta),
        "lambda": float(theta) * math.exp(-rho),
        "rho": rho,
    }, 0


def cmd_local(args):
    spec, tols = _load(args)
    rep = spectral.analyze(spec, **tols)
    pre = _cli_word(args.preperiod, spec.q) if args.preperiod else ()
    if args.cycle:
        alpha = measures.EventuallyPeriodicPoint.periodic(_cli_word(args.cycle, spec.q), pre)
    else:
        alpha = measures.EventuallyPeriodicPoint.aperiodic(pre)
    rho = measures.local_escape_rate(rep, alpha)
    out = {"rho": rho, "g_alpha": 1.0 / rho, "minimal_period": alpha.minimal_period()}
    if args.n_max:
        out["t"] = measures.local_escape_convergence(rep, alpha, args.n_max)
    return out, 0


def cmd_graph(args):
    g = parse_matrix_document(_read(args.matrix))
    kw = {}
    if args.tol_root is not None:
        kw["tol_root"] = args.tol_root
    if args.tol_singular is not None:
        kw["tol_singular"] = args.tol_singular
    rep = digraph_perron(g, **kw)
    out = report_dict(rep, labels=list(range(1, g.n + 1)))
    out["input"] = {"n": g.n, "matrix": g.entries.tolist()}
    out["vertices"] = "1-indexed"
    return out, 0


def cmd_verify(args):
    spec, _ = _load(args)
    rep = oracle.verify(spec, n_count=args.max_n)
    out = {
        "pass": rep.passed,
        "theta_hat": rep.theta_hat,
        "discrepancies": rep.discrepancies,
        "flags": rep.flags,
        "checks": rep.checks,
        "counts": rep.counts,
    }
    return out, 0 if rep.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="perron-sft", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-root", type=float, default=None,
                        help=f"relative residual accepted for polynomial roots (default {poly.ROOT_TOL:g})")
    common.add_argument("--tol-singular", type=float, default=None,
                        help=f"|D(theta)| below this times the coefficient scale counts as zero (default {poly.SINGULAR_TOL:g})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="Perron root, eigenvectors, normalisation")
    p.add_argument("spec", help="spec JSON file, or - for stdin")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("measure", parents=[common], help="Parry measure of a cylinder")
    p.add_argument("spec")
    p.add_argument("--word", required=True, help="digit string, or a JSON list for q > 10")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("count", parents=[common], help="f(n), f_i(n), g_i(n) tables")
    p.add_argument("spec")
    p.add_argument("--max-n", type=int, required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("escape", parents=[common], help="escape rate into a hole")
    p.add_argument("spec")
    p.add_argument("--hole", nargs="+", help="hole words")
    p.set_defaults(func=cmd_escape)

    p = sub.add_parser("local", parents=[common], help="local escape rate at an eventually periodic point")
    p.add_argument("spec")
    p.add_argument("--cycle", default="", help="repeating block; omit for a non-periodic prefix")
    p.add_argument("--preperiod", default="", help="preperiod, or the known prefix when --cycle is omitted")
    p.add_argument("--n-max", type=int, default=0, help="also print t_1..t_n")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("graph", parents=[common], help="Perron data of a (0,1) digraph matrix")
    p.add_argument("matrix", help="text (n, then n rows) or JSON matrix file")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("verify", parents=[common], help="cross-check against the oracles")
    p.add_argument("spec")
    p.add_argument("--max-n", type=int, default=None, help="enumeration length (default from PERRON_SFT_BUDGET)")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, code = args.func(args)
    except SFTError as exc:
        print(dumps({"error": exc.to_dict()}))
        print(f"perron-sft: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_code
    print(dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
