"""Command-line front end: ``verify``, ``apply`` and ``matrix``."""
from __future__ import annotations

import argparse
import csv
import io
import sys
from itertools import product as iproduct

from . import classical as cl
from . import finite as fin
from . import fock
from .errors import (BetaZero, DimensionMismatch, IndexOutOfRange, InvalidConfig, ParseError,
                     UnboundedBlock, UnknownOperator, UnknownSuite, WrongSpinCount)
from .modes import pmono_text
from .suites import SUITES, RunConfig, field_from_config, report_lines, run_suite
from .textform import parse_expression

# ---------------------------------------------------------------------------
# operators for ``apply`` and ``matrix``
#
# Each entry: (space, required parameters, defaults, function(params, value)).


def _fock_T(p, F):
    return fock.T_ab_k(p["a"], p["b"], p["k"], F)


def _classical_flow(p, f, s):
    sysm = cl.ClassicalSystem(s, p["M"], f.field)
    return sysm.flow(f.with_cutoff(p["M"]))


OPERATORS = {
    "fock:H1": ("fock", (), {}, lambda p, F: fock.hamiltonian_H1_apply(F)),
    "fock:H": ("fock", (), {}, lambda p, F: fock.hamiltonian_H_apply(F)),
    "fock:H-corrected": ("fock", (), {}, lambda p, F: fock.hamiltonian_H_apply(F, corrected=True)),
    "fock:H2scalar": ("fock", (), {}, lambda p, F: fock.hamiltonian_H2_scalar_apply(F)),
    "fock:H2rat": ("fock", (), {}, lambda p, F: fock.rational_H2_apply(F)),
    "fock:grading": ("fock", (), {}, lambda p, F: fock.grading_apply(F)),
    "fock:alpha": ("fock", ("n", "a"), {}, lambda p, F: fock.heisenberg_apply(p["n"], p["a"], F)),
    "fock:T": ("fock", ("a", "b"), {"k": 0}, _fock_T),
    "fock:T-explicit": ("fock", ("a", "b"), {"k": 0},
                        lambda p, F: fock.T_ab_explicit(p["a"], p["b"], p["k"], F)),
    "fock:T-rational": ("fock", ("a", "b"), {"k": 0},
                        lambda p, F: fock.rational_T_ab_k(p["a"], p["b"], p["k"], F)),
    "fock:S": ("fock", ("k",), {}, lambda p, F: fock.moment_Sk(p["k"], F)),
    "fock:S-rational": ("fock", ("k",), {}, lambda p, F: fock.rational_moment_Sk(p["k"], F)),
    "finite:d": ("finite", ("i",), {}, lambda p, v: fin.dunkl_d_apply(p["i"], v)),
    "finite:D": ("finite", ("i",), {}, lambda p, v: fin.heckman_dunkl_apply(p["i"], v)),
    "finite:Drat": ("finite", ("i",), {}, lambda p, v: fin.rational_dunkl_apply(p["i"], v)),
    "finite:H": ("finite", (), {}, lambda p, v: fin.hamiltonian_H_apply(v)),
    "finite:Hn": ("finite", ("n",), {}, lambda p, v: fin.hamiltonian_Hn_apply(p["n"], v)),
    "finite:t": ("finite", ("a", "b"), {"k": 0},
                 lambda p, v: fin.yangian_finite_mode(p["a"], p["b"], p["k"], v)),
    "finite:t-rational": ("finite", ("a", "b"), {"k": 0},
                          lambda p, v: fin.yangian_finite_mode(p["a"], p["b"], p["k"], v, rational=True)),
    "finite:K": ("finite", ("i", "j"), {}, lambda p, v: fin.permutation_apply("K", p["i"], p["j"], v)),
    "finite:P": ("finite", ("i", "j"), {}, lambda p, v: fin.permutation_apply("P", p["i"], p["j"], v)),
    "finite:sigma": ("finite", ("i", "j"), {}, lambda p, v: fin.permutation_apply("sigma", p["i"], p["j"], v)),
    "finite:E": ("finite", ("a", "b"), {"i": 0},
                 lambda p, v: fin.gl_action(p["a"], p["b"], p["i"] or "global", v)),
    "classical:flow": ("classical", (), {"M": 4}, None),
}


def _operator(name: str):
    op = OPERATORS.get(name)
    if op is None:
        raise UnknownOperator(f"unknown operator {name!r}; choose from {', '.join(sorted(OPERATORS))}")
    return op


def _params(pairs, required, defaults) -> dict:
    p = dict(defaults)
    for item in pairs or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise InvalidConfig(f"parameter {item!r} is not key=value")
        try:
            p[key.strip()] = int(val)
        except ValueError:
            raise InvalidConfig(f"parameter {key} needs an integer value") from None
    missing = [k for k in required if k not in p]
    if missing:
        raise InvalidConfig(f"missing operator parameters: {', '.join(missing)}")
    return p


def apply_expression(name: str, text: str, params: dict, s: int | None = None, N: int | None = None,
                     beta: str = "sym", lam: str = "sym") -> str:
    """Apply a named operator to parsed text and return the image as text."""
    space, required, defaults, fn = _operator(name)
    p = _params([f"{k}={v}" for k, v in params.items()], required, defaults)
    fld = field_from_config(RunConfig("apply", beta=beta, lam=lam))
    value = parse_expression(text, fld, s=s, N=N, kind=space)
    if space == "classical":
        return str(_classical_flow(p, value, s or max((g[1] for g in value.gens()), default=1)))
    return str(fn(p, value))


# ---------------------------------------------------------------------------
# matrix blocks


def _entry(c) -> str:
    if c.is_rational():
        return str(c.to_fraction())
    return str(c)


def dump_matrix(name: str, grade: int | None, s: int, sector=None, params: dict | None = None,
                beta: str = "sym", lam: str = "sym") -> str:
    """CSV text of a Fock operator on one graded block.

    Rows are target basis vectors, columns source basis vectors, both in the
    order of :func:`spincms.fock.graded_basis`.
    """
    space, required, defaults, fn = _operator(name)
    if space != "fock":
        raise UnboundedBlock(f"{name} does not act on a graded Fock block")
    if grade is None or grade < 0:
        raise UnboundedBlock("a block needs a nonnegative grade")
    nu = tuple(sector) if sector is not None else (0,) * s
    if len(nu) != s:
        raise UnboundedBlock(f"sector must have {s} entries")
    p = _params([f"{k}={v}" for k, v in (params or {}).items()], required, defaults)
    fld = field_from_config(RunConfig("matrix", beta=beta, lam=lam))
    src = fock.graded_basis(grade, s, fld, nu)
    tgt_nu = nu
    if "a" in p and "b" in p and name.startswith("fock:T"):
        tgt_nu = tuple(x + (d == p["a"]) - (d == p["b"]) for d, x in enumerate(nu, start=1))
    tgt_grade = grade - p["n"] if name == "fock:alpha" else grade
    if name == "fock:alpha":
        tgt_nu = nu
    tgt = fock.graded_basis(tgt_grade, s, fld, tgt_nu) if tgt_grade >= 0 else []
    index = {pm: r for r, G in enumerate(tgt) for (_, pm, _) in G.terms}
    rows = [["0"] * len(src) for _ in tgt]
    for col, F in enumerate(src):
        img = fn(p, F)
        for (lab, pm, ax), c in img.terms.items():
            r = index.get(pm)
            if r is None or tuple(lab) != tgt_nu:
                raise UnboundedBlock(f"{name} leaves the block (term {pmono_text(pm)})")
            rows[r][col] = _entry(c)

    def names(B):
        return " ".join(pmono_text(next(iter(G.terms))[1]) or "1" for G in B)

    buf = io.StringIO()
    buf.write(f"# operator {name} params {sorted(p.items())} s={s} grade={grade} sector={list(nu)}\n")
    buf.write(f"# rows: target basis grade={tgt_grade} sector={list(tgt_nu)}: {names(tgt)}\n")
    buf.write(f"# columns: source basis: {names(src)}\n")
    buf.write(f"# shape {len(tgt)}x{len(src)}; basis order is graded_basis order (monomials sorted as ((n,a),exponent) tuples)\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument handling

_CONFIG_KEYS = {"s": int, "n": int, "grade": int, "degree": int, "beta": str, "lambda": str,
                "mode-cutoff": int, "zmax": int, "trials": int, "seed": int, "out": str, "timing": bool}


def read_config(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key, val = key.strip().replace("_", "-"), val.strip()
            if not sep or key not in _CONFIG_KEYS:
                raise InvalidConfig(f"{path}:{lineno}: unknown or malformed entry {line!r}")
            kind = _CONFIG_KEYS[key]
            try:
                if kind is bool:
                    out[key] = val.lower() in ("1", "true", "yes", "on")
                else:
                    out[key] = kind(val)
            except ValueError:
                raise InvalidConfig(f"{path}:{lineno}: bad value for {key}") from None
    return out


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spincms", description="Exact checks for the spin CMS model.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("suite")
    v.add_argument("--s", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--grade", type=int)
    v.add_argument("--degree", type=int)
    v.add_argument("--beta")
    v.add_argument("--lambda", dest="lam")
    v.add_argument("--mode-cutoff", type=int)
    v.add_argument("--zmax", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.add_argument("--out")
    v.add_argument("--timing", action="store_true", default=None,
                   help="add wall-clock times (the report is then not reproducible)")
    v.add_argument("--config", help="file of key = value lines; flags take precedence")

    a = sub.add_parser("apply", help="apply an operator to an expression")
    a.add_argument("op")
    a.add_argument("expr")
    a.add_argument("--s", type=int)
    a.add_argument("--n", type=int)
    a.add_argument("--beta", default="sym")
    a.add_argument("--lambda", dest="lam", default="sym")
    a.add_argument("-p", "--param", action="append", default=[], metavar="KEY=INT")

    m = sub.add_parser("matrix", help="dump an operator block as CSV")
    m.add_argument("op")
    m.add_argument("--grade", type=int)
    m.add_argument("--sector", type=int, nargs="+")
    m.add_argument("--s", type=int, default=1)
    m.add_argument("--beta", default="sym")
    m.add_argument("--lambda", dest="lam", default="sym")
    m.add_argument("-p", "--param", action="append", default=[], metavar="KEY=INT")
    m.add_argument("--out")

    sub.add_parser("list", help="list suites and operators")
    return ap


def config_from_args(args) -> RunConfig:
    merged = read_config(args.config) if args.config else {}
    flags = {"s": args.s, "n": args.n, "grade": args.grade, "degree": args.degree, "beta": args.beta,
             "lambda": args.lam, "mode-cutoff": args.mode_cutoff, "zmax": args.zmax,
             "trials": args.trials, "seed": args.seed, "out": args.out, "timing": args.timing}
    merged.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig(
        suite=args.suite, s=merged.get("s"), n=merged.get("n"), degree=merged.get("degree"),
        grade=merged.get("grade"), beta=merged.get("beta", "sym"), lam=merged.get("lambda", "sym"),
        mode_cutoff=merged.get("mode-cutoff"), zmax=merged.get("zmax"), trials=merged.get("trials"),
        seed=merged.get("seed", 0), out=merged.get("out"), timing=bool(merged.get("timing", False)))


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            cfg = config_from_args(args)
            report = run_suite(cfg)
            text = "\n".join(report_lines(report)) + "\n"
            if cfg.out:
                _write(text, cfg.out)
            sys.stdout.write(text)
            return 0 if report["ok"] else 1
        if args.command == "apply":
            space, required, defaults, _ = _operator(args.op)
            p = _params(args.param, required, defaults)
            out = apply_expression(args.op, args.expr, p, s=args.s, N=args.n, beta=args.beta, lam=args.lam)
            print(out)
            return 0
        if args.command == "matrix":
            space, required, defaults, _ = _operator(args.op)
            p = _params(args.param, required, defaults)
            _write(dump_matrix(args.op, args.grade, args.s, args.sector, p, args.beta, args.lam), args.out)
            return 0
        print("suites:", " ".join(sorted(SUITES)))
        print("operators:", " ".join(sorted(OPERATORS)))
        return 0
    except (UnknownSuite, UnknownOperator, InvalidConfig, ParseError, UnboundedBlock, BetaZero,
            DimensionMismatch, IndexOutOfRange, WrongSpinCount) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
