"""Command-line front end: JSON in, JSON out.

Every command prints one JSON document tagged ``"schema": "gkz-logseries/1"``.
Exit status is 0 on success, 2 when a mathematical precondition fails (the
document is then a structured error object), and 1 for unreadable input.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .exceptions import GKZError, MathematicalPreconditionError, NonGenericWeight
from .families import FamilySpec, family
from .indicial import fake_exponents
from .lattice import AMatrix, kernel_basis
from .logseries import LogSeries, default_truncation, fundamental_system, verify_annihilation
from .perturb import exponent_test, perturbation_data
from .toricgb import toric_groebner
from .validation import (as_fraction, check_int_matrix, check_int_vector, check_rational_vector,
                         format_rational, load_json_argument, rational_list)

SCHEMA = "gkz-logseries/1"
COMMANDS = ("kernel", "groebner", "exponents", "perturb", "solve", "verify", "family")


@dataclass
class JobConfig:
    command: str
    matrix: Any = None
    beta: Any = None
    weight: Any = None
    B: Any = None
    v: Any = None
    truncation: Any = None
    radius: int | None = None
    fixture: str | None = None
    family: str | None = None
    m: int | None = None
    l: int | None = None
    input: str | None = None
    out: str | None = None
    json_pretty: bool = False
    fail_on_unstabilized: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.radius is not None and self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.truncation is not None and as_fraction(self.truncation) <= 0:
            raise ValueError("truncation must be positive")


class InputError(Exception):
    """Missing or malformed input (exit status 1)."""


@dataclass
class Problem:
    A: AMatrix
    beta: tuple | None
    weight: tuple | None
    B: list | None
    v: tuple | None
    source: dict

    def header(self) -> dict:
        out = {"matrix": self.A.tolist()}
        if self.beta is not None:
            out["beta"] = rational_list(self.beta)
        if self.weight is not None:
            out["weight"] = rational_list(self.weight)
        if self.B is not None:
            out["B"] = [list(b) for b in self.B]
        out.update(self.source)
        return out


def _parse(value):
    return load_json_argument(value) if isinstance(value, str) else value


def _problem(cfg: JobConfig, need_beta=True, need_weight=True) -> Problem:
    spec: FamilySpec | None = None
    source: dict = {}
    if cfg.fixture:
        spec = family(cfg.fixture)
        source = {"fixture": cfg.fixture}
    elif cfg.family:
        spec = family(cfg.family, cfg.m, cfg.l)
        source = {"family": cfg.family, "params": dict(spec.params)}
    if spec is not None:
        A = spec.A
        beta, weight, B = spec.beta, spec.w, spec.B
    else:
        if cfg.matrix is None:
            raise InputError("give --matrix, --fixture, or --family")
        A = AMatrix(check_int_matrix(_parse(cfg.matrix), "matrix"))
        beta = weight = B = None
    if cfg.beta is not None:
        beta = check_rational_vector(_parse(cfg.beta), A.d, "beta")
    if cfg.weight is not None:
        weight = check_rational_vector(_parse(cfg.weight), A.n, "weight")
    if cfg.B is not None:
        B = [check_int_vector(b, A.n, "B row") for b in _parse(cfg.B)]
    v = None if cfg.v is None else check_rational_vector(_parse(cfg.v), A.n, "v")
    if need_beta and beta is None:
        raise InputError("this command needs --beta")
    if need_weight and weight is None:
        raise InputError("this command needs --weight")
    return Problem(A, None if beta is None else tuple(beta),
                   None if weight is None else tuple(weight), B, v, source)


def _generic_basis(p: Problem):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        gb = toric_groebner(p.A, p.weight)
    if not gb.generic:
        raise NonGenericWeight("weight ties on a reduced Groebner basis element",
                               ties=[list(g) for g in gb.ties])
    return gb


# --------------------------------------------------------------------------
# commands


def cmd_kernel(cfg):
    p = _problem(cfg, need_beta=False, need_weight=False)
    basis = kernel_basis(p.A)
    return {"problem": p.header(), "rank": len(basis), "basis": [list(b) for b in basis]}


def cmd_groebner(cfg):
    p = _problem(cfg, need_beta=False)
    gb = toric_groebner(p.A, p.weight)
    out = {"problem": p.header()}
    out.update(gb.to_json())
    out["ties"] = [list(g) for g in gb.ties]
    return out


def _targets(p, gb):
    if p.v is not None:
        return [p.v]
    return [fe.v for fe in fake_exponents(p.A, p.beta, gb)]


def cmd_exponents(cfg):
    p = _problem(cfg)
    gb = _generic_basis(p)
    found = fake_exponents(p.A, p.beta, gb)
    rows = []
    for fe in found:
        entry = fe.to_json()
        try:
            data = perturbation_data(p.A, p.beta, gb, fe.v, p.B, cfg.radius)
        except MathematicalPreconditionError as exc:
            entry["certificate"] = {"status": "not certified", "error": exc.to_dict()}
        else:
            test = exponent_test(data)
            entry["certificate"] = {
                "status": "certified" if test.is_certified_exponent else "not certified",
                "m_in_PN": test.m_in_PN,
                "reason": "m(s) is not in P_N" if test.is_certified_exponent
                else "m(s) lies in P_N, so the test is inconclusive",
                "stabilized": data.supports.stabilized,
            }
        rows.append(entry)
    return {"problem": p.header(), "exponents": rows, "diagnostics": found.diagnostics}


def cmd_perturb(cfg):
    p = _problem(cfg)
    gb = _generic_basis(p)
    records = [perturbation_data(p.A, p.beta, gb, v, p.B, cfg.radius).to_json()
               for v in _targets(p, gb)]
    return {"problem": p.header(), "perturbations": records}


def _summary(reports) -> dict:
    reports = list(reports)
    weights = [as_fraction(r["weight"]) for r in reports if r["weight"] is not None]
    return {"pass": all(r["pass"] for r in reports),
            "weight": format_rational(min(weights)) if weights else None}


def cmd_solve(cfg):
    p = _problem(cfg)
    gb = _generic_basis(p)
    fs = fundamental_system(p.A, p.beta, p.weight, cfg.truncation, cfg.radius, p.B, gb)
    blocks, errors = [], []
    for e in fs.exponents:
        if e.data is None:
            errors.append({"exponent": rational_list(e.v), **e.report["error"]})
            continue
        block = e.to_json()
        block["verify"] = _summary(s["verify"] for s in block["solutions"])
        blocks.append(block)
    out = {"problem": p.header(), "T": format_rational(fs.T), "exponents": blocks,
           "n_solutions": sum(len(b["solutions"]) for b in blocks),
           "verify": _summary(b["verify"] for b in blocks)}
    out["stabilized"] = all(b["report"]["stabilized"] for b in blocks)
    if errors:
        out["errors"] = errors
    return out


def cmd_verify(cfg):
    if cfg.input is None:
        raise InputError("verify needs an input document (path, inline JSON, or '-')")
    doc = json.loads(sys.stdin.read()) if cfg.input == "-" else load_json_argument(cfg.input)
    if not isinstance(doc, dict) or "problem" not in doc or "exponents" not in doc:
        raise InputError("input is not a solve document")
    prob = doc["problem"]
    A = AMatrix(check_int_matrix(prob["matrix"], "matrix"))
    beta = check_rational_vector(prob["beta"], A.d, "beta")
    w = check_rational_vector(prob["weight"], A.n, "weight")
    gb = toric_groebner(A, w)
    blocks = []
    agree = True
    for block in doc["exponents"]:
        v = block["exponent"]
        reports = []
        for sol in block["solutions"]:
            series = LogSeries.from_json(sol, v, w)
            rep = verify_annihilation(series, A, beta, gb).to_json()
            if "verify" in sol:
                stored = sol["verify"]
                agree &= stored["pass"] == rep["pass"] and stored["weight"] == rep["weight"]
            reports.append(rep)
        blocks.append({"exponent": list(v), "solutions": reports, "verify": _summary(reports)})
    out = {"problem": prob, "exponents": blocks, "verify": _summary(b["verify"] for b in blocks),
           "matches_embedded": agree}
    if "verify" in doc:
        out["matches_embedded"] = agree and doc["verify"]["pass"] == out["verify"]["pass"]
    return out


def cmd_family(cfg):
    name = cfg.family or cfg.fixture
    if not name:
        raise InputError("family needs --name (or --fixture)")
    spec = family(name, cfg.m, cfg.l)
    out = spec.to_json()
    out["T"] = format_rational(default_truncation(toric_groebner(spec.A, spec.w)))
    return out


HANDLERS = {"kernel": cmd_kernel, "groebner": cmd_groebner, "exponents": cmd_exponents,
            "perturb": cmd_perturb, "solve": cmd_solve, "verify": cmd_verify,
            "family": cmd_family}


def render(doc: dict, pretty: bool) -> str:
    return json.dumps(doc, indent=2 if pretty else None, sort_keys=True,
                      separators=None if pretty else (",", ":")) + "\n"


def run(cfg: JobConfig) -> tuple[int, str]:
    """Execute one job; returns the exit status and the JSON text."""
    try:
        doc = HANDLERS[cfg.command](cfg)
        code = 0
        if cfg.fail_on_unstabilized and doc.get("stabilized") is False:
            code = 2
            doc["error"] = {"error": "Unstabilized", "precondition":
                            "support classification complete at the chosen radius"}
    except MathematicalPreconditionError as exc:
        doc, code = exc.to_dict(), 2
    except (InputError, GKZError, OSError, ValueError, TypeError, KeyError,
            json.JSONDecodeError) as exc:
        doc, code = {"error": type(exc).__name__, "message": str(exc)}, 1
    doc = {"schema": SCHEMA, "command": cfg.command, **doc}
    return code, render(doc, cfg.json_pretty)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkzlog", description="Logarithmic series solutions of GKZ systems.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--matrix", help="integer matrix A as JSON or a JSON file path")
        sp.add_argument("--beta", help="parameter vector as JSON (rationals as strings)")
        sp.add_argument("--weight", help="weight vector w as JSON")
        sp.add_argument("--B", dest="B", help="perturbation directions as a JSON list of rows")
        sp.add_argument("--v", help="restrict to one fake exponent")
        sp.add_argument("--truncation", help="weight truncation T")
        sp.add_argument("--radius", type=int, help="search radius for support classification")
        sp.add_argument("--fixture", help="bundled fixture: sst352, noncm, sst363")
        sp.add_argument("--family", "--name", dest="family", help="family: aomoto or fc")
        sp.add_argument("--m", type=int)
        sp.add_argument("--l", type=int)
        sp.add_argument("--out", help="write the JSON here instead of standard output")
        sp.add_argument("--pretty", action="store_true", help="indent the JSON")
        sp.add_argument("--fail-on-unstabilized", action="store_true")
        if name == "verify":
            sp.add_argument("input", nargs="?", help="solve output: path, inline JSON, or '-'")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = JobConfig(args.command, matrix=args.matrix, beta=args.beta, weight=args.weight,
                        B=args.B, v=args.v, truncation=args.truncation, radius=args.radius,
                        fixture=args.fixture, family=args.family, m=args.m, l=args.l,
                        input=getattr(args, "input", None), out=args.out,
                        json_pretty=args.pretty,
                        fail_on_unstabilized=args.fail_on_unstabilized)
    except ValueError as exc:
        sys.stdout.write(render({"schema": SCHEMA, "command": args.command,
                                 "error": "ValueError", "message": str(exc)}, args.pretty))
        return 1
    code, text = run(cfg)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            sys.stderr.write(f"cannot write {cfg.out}: {exc}\n")
            return 1
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
