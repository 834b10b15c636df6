"""Command-line driver.

Algebra sources are either a file in the structure-equation language or a
catalog reference such as ``heisenberg:2``, ``exampleA:3/2,4`` or
``exampleB:3,1,-2``.

Exit codes: 0 success or the condition holds, 1 the condition fails,
2 unreadable or unparsable input, 3 semantic or validation error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, fields, is_dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import acceptance, linalg
from .catalog import CATALOG_NAMES, CatalogError, VaismanCandidate, catalog_get, heisenberg
from .dsl import DSLError, ParseError, SemanticError, parse_algebra, parse_metric, print_algebra
from .exterior import Form, beta, exterior_d
from .liealg import (
    HypothesisError, InvalidAlgebraError, NotNilpotentError, StructureEquations, adapted_coframe,
    algebra_invariants, classify_complex_structure, validate_algebra,
)
from .metrics import (
    HermitianMatrix, NotAdaptedError, NotHermitianError, NotPositiveError, RealityError,
    classify_metric, k_gauduchon_profile, lee_form_general, lee_form_of_power, lee_form_two_step,
    metric_form, michelsohn_root,
)
from .scalar import Scalar
from .search import find_balanced, find_lcb, rigidity_experiment, two_zero_obstruction

OK, FAILS, PARSE, SEMANTIC = 0, 1, 2, 3

_SEMANTIC_ERRORS = (SemanticError, CatalogError, InvalidAlgebraError, HypothesisError, NotAdaptedError,
                    NotPositiveError, NotHermitianError, RealityError, NotNilpotentError)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


# -- input --------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(PARSE, f"cannot read {path}: {exc.strerror}") from None


def _catalog_ref(ref: str):
    name, _, params = ref.partition(":")
    args = [p.strip() for p in params.split(",") if p.strip()] if params else []
    return catalog_get(name, *args)


def load_algebra(source: str) -> StructureEquations:
    """Parse and validate; invalid algebras are refused with exit code 3."""
    if os.path.exists(source):
        text = _read(source)
        try:
            alg = parse_algebra(text)
        except DSLError as exc:
            raise CliError(exc.exit_code, f"{source}:{exc}") from None
    elif source.partition(":")[0] in CATALOG_NAMES:
        entry = _catalog_ref(source)
        alg = entry.algebra if isinstance(entry, VaismanCandidate) else entry
    else:
        raise CliError(PARSE, f"{source}: no such file or catalog entry")
    report = validate_algebra(alg)
    if not report.valid:
        msgs = "; ".join(f"a{f.generator}: {f.kind}: {f.message}" for f in report.failures)
        raise CliError(SEMANTIC, f"invalid algebra {alg.name}: {msgs}")
    return alg


def load_metric(path: Optional[str], n: int):
    if path is None:
        return None
    try:
        m = parse_metric(_read(path))
    except DSLError as exc:
        raise CliError(exc.exit_code, f"{path}:{exc}") from None
    if m.n != n:
        raise CliError(SEMANTIC, f"{path}: metric has size {m.n}, algebra has dimension {n}")
    return m


# -- output ------------------------------------------------------------------------

def plain(x):
    """JSON-ready view: exact scalars and forms become strings."""
    if isinstance(x, (Scalar, Fraction, Form)):
        return str(x)
    if isinstance(x, StructureEquations):
        return {"name": x.name, "n": x.n, "d": [str(f) for f in x.d_alpha]}
    if isinstance(x, HermitianMatrix):
        return plain(x.entries)
    if is_dataclass(x):
        return {f.name: plain(getattr(x, f.name)) for f in fields(x)}
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return [[f"{z.real!r}{z.imag:+.17g}i" for z in row] for row in x]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def _text(value, indent=0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        return "\n".join(f"{pad}- {_inline(v)}" if _flat(v) or not isinstance(v, (dict, list))
                         else _text(v, indent + 1) for v in value)
    return f"{pad}{value}"


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)
    return not isinstance(v, dict)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    return "none" if v is None else str(v)


class Output:
    def __init__(self, fmt: str, out: Optional[str]):
        self.fmt, self.out = fmt, out

    def emit(self, payload: dict, text: Optional[str] = None):
        if self.fmt == "structured":
            body = json.dumps(plain(payload), indent=2, sort_keys=True) + "\n"
        else:
            body = text if text is not None else _text(plain(payload)) + "\n"
        if self.out:
            with open(self.out, "w", encoding="utf-8") as fh:
                fh.write(body)
        else:
            sys.stdout.write(body)


# -- commands ---------------------------------------------------------------------------

def cmd_parse(args, out):
    alg = load_algebra(args.source)
    out.emit({"algebra": alg, "text": print_algebra(alg)}, print_algebra(alg))
    return OK


def cmd_validate(args, out):
    # parse only; validation failures are the answer here
    if os.path.exists(args.source):
        try:
            alg = parse_algebra(_read(args.source))
        except DSLError as exc:
            raise CliError(exc.exit_code, f"{args.source}:{exc}") from None
    else:
        alg = load_algebra(args.source)
    report = validate_algebra(alg)
    lines = [f"{alg.name}: {'valid' if report.valid else 'invalid'}"]
    lines += [f"  a{f.generator}: {f.kind}: {f.message}" for f in report.failures]
    out.emit({"algebra": alg.name, "valid": report.valid, "failures": report.failures},
             "\n".join(lines) + "\n")
    return OK if report.valid else SEMANTIC


def cmd_invariants(args, out):
    alg = load_algebra(args.source)
    out.emit({"algebra": alg.name, **asdict(algebra_invariants(alg))})
    return OK


def cmd_classify_j(args, out):
    alg = load_algebra(args.source)
    out.emit({"algebra": alg.name, **asdict(classify_complex_structure(alg))})
    return OK


def cmd_adapt(args, out):
    alg = load_algebra(args.source)
    M, adapted = adapted_coframe(alg)
    text = "change of co-frame (a'_i = sum_j M_ij a_j):\n" + linalg.mat_str(M) + "\n" + print_algebra(adapted)
    out.emit({"algebra": alg.name, "matrix": M, "adapted": adapted, "text": print_algebra(adapted)}, text)
    return OK


def _metric_matrix(args, alg) -> HermitianMatrix:
    m = load_metric(args.metric, alg.n)
    if m is None:
        return HermitianMatrix.identity(alg.n)
    if m.kind != "H":
        raise CliError(SEMANTIC, "this command needs an H metric file")
    H = m.hermitian()
    if not H.is_positive():
        raise CliError(SEMANTIC, "metric matrix is not positive definite")
    return H


def cmd_classify_metric(args, out):
    alg = load_algebra(args.source)
    H = _metric_matrix(args, alg)
    rep = classify_metric(alg, H)
    out.emit({"algebra": alg.name, **rep.flags(), "k_gauduchon": rep.k_gauduchon, "lee": rep.lee,
              "gauduchon_scalar": rep.gauduchon_scalar})
    return OK


def cmd_lee(args, out):
    alg = load_algebra(args.source)
    m = load_metric(args.metric, alg.n)
    if m is not None and m.kind == "Atilde":
        a = m.nn_form()
        sol = lee_form_two_step(alg, a)
        general = lee_form_of_power(alg, a.form())
        out.emit({"algebra": alg.name, "lee": sol.theta, "coefficients": sol.coefficients,
                  "b": sol.b, "k": sol.k, "balanced": sol.balanced, "lcb": sol.lcb,
                  "real_coefficients": sol.real_coefficients, "agrees_with_general": general == sol.theta})
        return OK if general == sol.theta else FAILS
    H = _metric_matrix(args, alg)
    out.emit({"algebra": alg.name, "lee": lee_form_general(alg, metric_form(H))})
    return OK


def cmd_kprofile(args, out):
    alg = load_algebra(args.source)
    if alg.n < 3:
        raise CliError(SEMANTIC, "the k-Gauduchon profile needs complex dimension >= 3")
    scalar, profile = k_gauduchon_profile(alg, _metric_matrix(args, alg))
    out.emit({"algebra": alg.name, "gauduchon_scalar": scalar, "k_gauduchon": profile})
    return OK


def cmd_root(args, out):
    try:
        m = parse_metric(_read(args.metric_file))
    except DSLError as exc:
        raise CliError(exc.exit_code, f"{args.metric_file}:{exc}") from None
    if m.kind != "Atilde":
        raise CliError(SEMANTIC, "root needs an Atilde metric file")
    res = michelsohn_root(m.nn_form())
    out.emit({"exact": res.exact, "H": res.H, "residual": res.residual})
    return OK


def _feasibility(res, alg):
    return {"algebra": alg.name, "status": res.status, "solution_space_dim": res.solution_space_dim,
            "witness_atilde": res.witness.atilde if res.witness else None, "lee": res.lee,
            "certificate": res.certificate, "trials_used": res.trials_used}


def cmd_search_balanced(args, out):
    alg = load_algebra(args.source)
    res = find_balanced(alg, np.random.default_rng(args.seed or 0), trials=args.trials or 10_000)
    out.emit(_feasibility(res, alg))
    return OK if res.status == "found" else FAILS


def cmd_search_lcb(args, out):
    alg = load_algebra(args.source)
    res = find_lcb(alg, np.random.default_rng(args.seed or 0), trials=args.trials or 2_000)
    out.emit(_feasibility(res, alg))
    return OK if res.status == "found" else FAILS


def _parse_theta(spec: Optional[str], n: int) -> Form:
    if spec is None:
        return beta(n, n)
    parts = [p for p in spec.split(",") if p.strip()]
    if len(parts) != n:
        raise CliError(SEMANTIC, f"--theta needs {n} real coefficients, got {len(parts)}")
    theta = Form(n)
    for i, p in enumerate(parts, start=1):
        try:
            c = Fraction(p.strip())
        except (ValueError, ZeroDivisionError):
            raise CliError(PARSE, f"--theta: malformed rational {p!r}") from None
        theta = theta + beta(n, i) * c
    return theta


def cmd_obstruct(args, out):
    alg = load_algebra(args.source)
    theta = _parse_theta(args.theta, alg.n)
    try:
        rep = two_zero_obstruction(alg, theta)
    except ValueError as exc:
        raise CliError(SEMANTIC, str(exc)) from None
    out.emit({"algebra": alg.name, "theta": rep.theta, "kernel_dim": rep.kernel_dim,
              "kernel_basis": rep.kernel_basis, "nondegenerate_solution_exists": rep.nondegenerate_solution_exists,
              "certificate": rep.certificate})
    return OK if rep.nondegenerate_solution_exists else FAILS


def cmd_rigidity(args, out):
    alg = load_algebra(args.source)
    trials = args.trials or 100
    rep = rigidity_experiment(alg, trials, args.seed or 0)
    is_heis = alg.n % 2 == 0 and alg == heisenberg(alg.n // 2)
    out.emit({"algebra": alg.name, "trials": trials, "balanced_fraction": rep.balanced_fraction,
              "gauduchon_zero_fraction": rep.gauduchon_zero_fraction,
              "pluriclosed_fraction": rep.pluriclosed_fraction,
              "scalar_signs": sorted(set(rep.scalar_signs)), "sign_constant": rep.sign_constant,
              "heisenberg": is_heis, "rigid": rep.rigid, "vaisman_ok": rep.vaisman_ok})
    if is_heis and not (rep.rigid and rep.vaisman_ok):
        return FAILS
    return OK


def cmd_catalog(args, out):
    if not args.name:
        out.emit({"entries": list(CATALOG_NAMES)}, "\n".join(CATALOG_NAMES) + "\n")
        return OK
    entry = catalog_get(args.name, *args.params)
    if isinstance(entry, VaismanCandidate):
        text = (print_algebra(entry.algebra) + f"metric: {entry.metric}\nbeta: {entry.beta}\n"
                + "H:\n" + linalg.mat_str([list(r) for r in entry.matrix]) + "\n")
        out.emit({"algebra": entry.algebra, "text": print_algebra(entry.algebra), "metric": entry.metric,
                  "beta": entry.beta, "H": entry.matrix}, text)
        return OK
    out.emit({"algebra": entry, "text": print_algebra(entry)}, print_algebra(entry))
    return OK


def cmd_verify(args, out):
    seed = 42 if args.seed is None else args.seed
    report = acceptance.verify_paper(seed)
    if args.format == "structured":
        sys.stdout.write(report.structured())
    else:
        sys.stdout.write(report.text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.structured())
    if not report.passed:
        sys.stderr.write("failing criteria: " + ", ".join(map(str, report.failing)) + "\n")
        return FAILS
    return OK


# -- argument parsing ---------------------------------------------------------------------

def _globals(parser: argparse.ArgumentParser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(None), help="random seed")
    parser.add_argument("--trials", type=int, default=default(None), help="number of random trials")
    parser.add_argument("--format", choices=("text", "structured"), default=default("text"))
    parser.add_argument("--out", default=default(None), help="write output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilherm", description=__doc__.split("\n\n")[0])
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, source=True, metric=False):
        p = sub.add_parser(name, help=help_)
        _globals(p, suppress=True)
        if source:
            p.add_argument("source", help="algebra file or catalog reference name:p1,p2")
        if metric:
            p.add_argument("--metric", help="metric file (H, or Atilde where accepted); default identity")
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, "parse and print an algebra in canonical form")
    add("validate", cmd_validate, "check integrability and d^2 = 0")
    add("invariants", cmd_invariants, "nilpotency step, center, k")
    add("classify-j", cmd_classify_j, "nilpotent / bi-invariant / abelian complex structure")
    add("adapt", cmd_adapt, "rewrite a 2-step algebra in an adapted co-frame")
    add("classify-metric", cmd_classify_metric, "special-metric flags of an invariant metric", metric=True)
    add("lee", cmd_lee, "Lee form of a metric (H) or of a positive (n-1,n-1)-form (Atilde)", metric=True)
    add("kprofile", cmd_kprofile, "k-Gauduchon profile and Gauduchon scalar", metric=True)
    p = add("root", cmd_root, "H whose (n-1)-th power has the given Atilde", source=False)
    p.add_argument("metric_file", help="Atilde metric file")
    add("search-balanced", cmd_search_balanced, "look for a balanced metric")
    add("search-lcb", cmd_search_lcb, "look for an lcb metric")
    p = add("obstruct-20", cmd_obstruct, "nondegenerate (2,0)-forms with dw = theta ^ w")
    p.add_argument("--theta", help="real coefficients t_1..t_n of theta = sum t_i (a_i + ~a_i); "
                                   "default a_n + ~a_n")
    add("rigidity", cmd_rigidity, "random-metric rigidity experiment")
    p = add("catalog", cmd_catalog, "list or print catalog entries", source=False)
    p.add_argument("name", nargs="?")
    p.add_argument("params", nargs="*")
    add("verify-paper", cmd_verify, "run the full acceptance suite", source=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Output(args.format, None if args.command == "verify-paper" else args.out)
    try:
        return args.func(args, out)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return PARSE
    except _SEMANTIC_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
