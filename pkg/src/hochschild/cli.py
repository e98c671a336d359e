"""
Command-line driver.

    python -m hochschild cohomology --sample "trunc_poly(2)" --max-degree 4
    python -m hochschild verify --suite gerst --sample field
    python -m hochschild dpoly-eval "d" --with "x" --product bracket
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from . import dpoly, e2, gerst
from .algebra import AlgebraError, SpecFormatError, center, from_json, sample_library
from .cochain import DEFAULT_BUDGET, BudgetError, basis_cochains, cohomology
from .exactlin import fmt
from .verify import SUITES, run_suites

COMMANDS = ("describe", "cohomology", "bracket-table", "verify", "e2-extract", "dpoly-eval")


@dataclass
class RunConfig:
    command: str
    sample: Optional[str] = None
    spec: Optional[str] = None
    max_degree: int = 2
    degree: int = 1
    other_degree: Optional[int] = None
    window: int = 2
    suites: list = field(default_factory=list)
    fmt: str = "text"
    out: Optional[str] = None
    budget: int = DEFAULT_BUDGET
    timing: bool = False
    limit: Optional[int] = None
    seed: int = 0
    expr: Optional[str] = None
    other: Optional[str] = None
    operation: str = "bracket"
    apply_to: list = field(default_factory=list)
    num_vars: Optional[int] = None
    check_degree: int = 3

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.command != "dpoly-eval" and (self.sample is None) == (self.spec is None):
            raise ValueError("give exactly one of --sample or --spec")
        if self.max_degree < 0 or self.degree < 0 or self.window < 0:
            raise ValueError("degrees must be >= 0")


class UsageError(Exception):
    pass


def load_algebra(cfg: RunConfig):
    if cfg.sample is not None:
        return sample_library(cfg.sample)
    try:
        with open(cfg.spec) as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {cfg.spec}: {e.strerror}") from None
    return from_json(text)


def _vec(v: dict, labels) -> str:
    if not v:
        return "0"
    parts = []
    for k, c in sorted(v.items()):
        parts.append(f"{fmt(c)}*{labels[k]}")
    return " + ".join(parts)


# -- commands -------------------------------------------------------------------------------

def cmd_describe(cfg: RunConfig):
    A = load_algebra(cfg)
    Z = center(A)
    doc = {
        "name": A.name,
        "dim": A.dim,
        "basis": list(A.basis_labels),
        "unit": {A.basis_labels[k]: fmt(v) for k, v in sorted(A.unit_vec.items())},
        "commutative": A.is_commutative,
        "center_dim": Z.dim,
        "products": [
            [A.basis_labels[i], A.basis_labels[j], _vec(v, A.basis_labels)]
            for (i, j), v in sorted(A.products.items())
        ],
    }
    lines = [f"{A.name}: dim {A.dim}, basis {', '.join(A.basis_labels)}",
             f"unit: {_vec(A.unit_vec, A.basis_labels)}",
             f"commutative: {A.is_commutative}; center dim {Z.dim}"]
    lines += [f"  {a} * {b} = {v}" for a, b, v in doc["products"]]
    return True, doc, lines


def cmd_cohomology(cfg: RunConfig):
    A = load_algebra(cfg)
    rep = cohomology(A, cfg.max_degree, budget=cfg.budget)
    doc = rep.to_json()
    lines = [f"HH^n({A.name}) for n = 0..{cfg.max_degree}: {rep.dims}"]
    for n, reps in enumerate(rep.representatives):
        for r in reps:
            lines.append(f"  HH^{n}: {r.describe()}")
    return True, doc, lines


def _label(f) -> str:
    labels = f.algebra.basis_labels
    (I, r), = f.rows.items()
    (k, _), = r.items()
    return "[" + ",".join(labels[i] for i in I) + "->" + labels[k] + "]"


def cmd_bracket_table(cfg: RunConfig):
    """Signed brackets of all pairs of basis cochains of the given arities."""
    A = load_algebra(cfg)
    p = cfg.degree
    q = cfg.other_degree if cfg.other_degree is not None else p
    if p + q < 1:
        raise UsageError("the bracket needs total arity >= 1")
    size = A.dim ** (p + 1) * A.dim ** (q + 1)
    if size > cfg.budget:
        raise BudgetError(f"bracket table of arities {p}, {q}", size, cfg.budget)
    rows = []
    lines = [f"signed brackets on {A.name}, arities {p} and {q}"]
    for f in basis_cochains(A, p):
        for g in basis_cochains(A, q):
            b = gerst.bracket_signed(f, g)
            rows.append({"f": _label(f), "g": _label(g), "bracket": b.to_nested(as_str=True),
                         "text": b.describe()})
            lines.append(f"  [{_label(f)}, {_label(g)}] = {b.describe()}")
    doc = {"algebra": A.name, "arities": [p, q], "conventions": gerst.sign_conventions(), "rows": rows}
    return True, doc, lines


def cmd_verify(cfg: RunConfig):
    A = load_algebra(cfg)
    rep = run_suites(A, cfg.suites or None, seed=cfg.seed)
    doc = rep.to_json(with_timing=cfg.timing)
    lines = [f"verify {A.name}"]
    for name, checks in rep.suites.items():
        npass = sum(c.ok for c in checks)
        head = f"[{name}] {npass}/{len(checks)} passed"
        if cfg.timing:
            head += f" in {rep.timing[name]:.2f}s"
        lines.append(head)
        for c in checks:
            lines.append(f"  {'PASS' if c.ok else 'FAIL'} {c.name} ({c.count})")
            if not c.ok:
                lines.append(f"       witness: {json.dumps(c.witness, sort_keys=True)}")
    lines.append("all checks passed" if rep.ok else f"{len(rep.failures())} check(s) failed")
    return rep.ok, doc, lines


def cmd_e2_extract(cfg: RunConfig):
    A = load_algebra(cfg)
    P = e2.hochschild_presentation(A, cfg.window, budget=cfg.budget)
    rep = e2.validate_presentation(P, limit=cfg.limit, seed=cfg.seed)
    B = e2.ExtractedBracket(P)
    n = mismatches = 0
    first = None
    for p in range(cfg.window + 1):
        for q in range(cfg.window + 1 - p):
            if p + q < 1:
                continue
            for f in basis_cochains(A, p):
                for g in basis_cochains(A, q):
                    n += 1
                    got = e2.as_cochain(A, B(e2.as_element(f), e2.as_element(g)))
                    if got != gerst.bracket_signed(f, g):
                        mismatches += 1
                        first = first or [_label(f), _label(g)]
    ok = rep.ok and mismatches == 0
    doc = {
        "algebra": A.name,
        "window": cfg.window,
        "validation": rep.to_json(),
        "bracket_pairs": n,
        "bracket_mismatches": mismatches,
        "first_mismatch": first,
        "conventions": gerst.sign_conventions(),
    }
    lines = [f"2-algebra presentation of the Hochschild cochains of {A.name}, arity <= {cfg.window}"]
    for c in rep.checks:
        lines.append(f"  {'PASS' if c.ok else 'FAIL'} {c.name} ({c.count})")
    lines.append(f"extracted bracket vs signed bracket: {n - mismatches}/{n} pairs agree")
    if cfg.out:
        doc["presentation"] = e2.to_json(P)
    return ok, doc, lines


def cmd_dpoly_eval(cfg: RunConfig):
    if cfg.expr is None:
        raise UsageError("dpoly-eval needs an operator expression")
    f = dpoly.parse(cfg.expr, cfg.num_vars)
    m = f.num_vars
    result = f
    ok = True
    checks = []
    if cfg.other is not None:
        g = dpoly.parse(cfg.other, m)
        ops = {"cup": (dpoly.cup_op, dpoly.pointwise_cup),
               "circle": (dpoly.circle_op, dpoly.pointwise_circle),
               "bracket": (dpoly.bracket_op, dpoly.pointwise_bracket)}
        if cfg.operation not in ops:
            raise UsageError(f"unknown product {cfg.operation!r}")
        sym, pt = ops[cfg.operation]
        result = sym(f, g)
        bad = dpoly.agreement_failures(result, pt(dpoly.as_function(f), f.arity, dpoly.as_function(g), g.arity),
                                       cfg.check_degree)
        ok = not bad
        checks.append({"name": f"{cfg.operation} symbolic = pointwise (degree <= {cfg.check_degree})",
                       "ok": ok, "witness": bad or None})
    doc = {"operator": dpoly.format_op(result), "arity": result.arity, "num_vars": m, "checks": checks}
    lines = [f"{dpoly.format_op(result)}   (arity {result.arity})"]
    for c in checks:
        lines.append(f"  {'PASS' if c['ok'] else 'FAIL'} {c['name']}")
    if cfg.apply_to:
        args = [dpoly.parse_poly(a, m) for a in cfg.apply_to]
        val = dpoly.apply(result, args)
        doc["value"] = dpoly.format_poly(val, m)
        lines.append(f"applied to ({', '.join(cfg.apply_to)}): {doc['value']}")
    return ok, doc, lines


HANDLERS = {
    "describe": cmd_describe,
    "cohomology": cmd_cohomology,
    "bracket-table": cmd_bracket_table,
    "verify": cmd_verify,
    "e2-extract": cmd_e2_extract,
    "dpoly-eval": cmd_dpoly_eval,
}


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    t = time.perf_counter()
    ok, doc, lines = HANDLERS[cfg.command](cfg)
    if cfg.timing:
        elapsed = time.perf_counter() - t
        lines.append(f"elapsed {elapsed:.2f}s")
        doc["elapsed_seconds"] = round(elapsed, 3)
    if cfg.fmt == "json":
        stdout.write(dumps(doc))
    else:
        stdout.write("\n".join(lines) + "\n")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(dumps(doc))
    return 0 if ok else 1


# -- argument parsing ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hochschild", description=__doc__.strip().splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, algebra=True):
        if algebra:
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--sample", help="sample algebra key, e.g. 'trunc_poly(2)'")
            src.add_argument("--spec", help="algebra spec JSON file")
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max dimension of any cochain or bar space")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--out", help="also write the JSON report here")
        p.add_argument("--timing", action="store_true", help="report wall-clock times")

    common(sub.add_parser("describe", help="summarize an algebra"))
    p = sub.add_parser("cohomology", help="Hochschild cohomology dimensions")
    common(p)
    p.add_argument("--max-degree", type=int, default=2)
    p = sub.add_parser("bracket-table", help="signed brackets of basis cochains")
    common(p)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--other-degree", type=int)
    p = sub.add_parser("verify", help="run invariant suites")
    common(p)
    p.add_argument("--suite", action="append", default=[], help=f"one of {', '.join(SUITES)} or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("e2-extract", help="bracket from the 2-algebra homotopies")
    common(p)
    p.add_argument("--window", type=int, default=2, help="max cochain arity")
    p.add_argument("--limit", type=int, help="subsample each validation family")
    p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("dpoly-eval", help="polydifferential operator calculus")
    common(p, algebra=False)
    p.add_argument("expr")
    p.add_argument("--with", dest="other")
    p.add_argument("--product", choices=("cup", "circle", "bracket"), default="bracket")
    p.add_argument("--apply", nargs="+", default=[], help="polynomial arguments")
    p.add_argument("--vars", type=int, help="number of variables")
    p.add_argument("--check-degree", type=int, default=3)
    return ap


def config_from_args(ns) -> RunConfig:
    g = lambda k, d=None: getattr(ns, k, d)
    return RunConfig(
        command=ns.command, sample=g("sample"), spec=g("spec"), max_degree=g("max_degree", 2),
        degree=g("degree", 1), other_degree=g("other_degree"), window=g("window", 2),
        suites=g("suite", []) or [], fmt=ns.format, out=ns.out, budget=g("budget", DEFAULT_BUDGET),
        timing=ns.timing, limit=g("limit"), seed=g("seed", 0), expr=g("expr"), other=g("other"),
        operation=g("product", "bracket"), apply_to=g("apply", []) or [], num_vars=g("vars"),
        check_degree=g("check_degree", 3))


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except SpecFormatError as e:
        print(f"error: malformed algebra spec: {e}", file=sys.stderr)
    except BudgetError as e:
        print(f"error: {e}", file=sys.stderr)
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
    except (UsageError, AlgebraError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
    return 2
