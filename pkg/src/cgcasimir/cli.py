"""Batch command-line surface.

Subcommands: ``algebra | rank | solve | verify | theorem | realize``.
Summaries go to stdout; JSON artifacts are written only with ``--out``.
Exit codes: 0 success/verified, 1 verification failure, 2 invalid input.
All output is deterministic for fixed flags (the only randomness, the
rank trials, is seeded).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import liealg, realization, solver, theorems, uea
from .grading import default_target_grades
from .liealg import make_cga, parse_spec


@dataclass
class RunConfig:
    subcommand: str
    d: Optional[int] = None
    ell: Optional[str] = None
    degree: Optional[int] = None
    grade: str = "auto"
    method: str = "pipeline"
    trials: int = 5
    seed: int = 0
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    format: str = "json"
    which: Optional[str] = None
    gen: Optional[str] = None


class CliError(Exception):
    def __init__(self, message: str, code: int = 2):
        super().__init__(message)
        self.code = code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgcasimir",
        description="Casimir operators of centrally extended conformal Galilei algebras",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, need_spec=True):
        if need_spec:
            p.add_argument("--d", type=int, required=True, help="spatial dimension (1 or 2)")
            p.add_argument("--ell", required=True, help="spin parameter, e.g. 3/2 or 2")
        p.add_argument("--out", dest="output_path", help="write the JSON artifact here")
        p.add_argument("--format", choices=["json", "text"], default="json",
                       help="stdout summary format")

    p = sub.add_parser("algebra", help="emit the bracket table")
    common(p)

    p = sub.add_parser("rank", help="invariant count from the structure matrix")
    common(p)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("solve", help="search for Casimir operators")
    common(p)
    p.add_argument("--degree", type=int, required=True, help="degree bound of the ansatz")
    p.add_argument("--grade", default="auto",
                   help='target grade, e.g. "0,2,0", or "auto" for the default at this degree')
    p.add_argument("--method", choices=["pipeline", "algebraic"], default="pipeline")

    p = sub.add_parser("verify", help="check a stored element (or report) for centrality")
    common(p)
    p.add_argument("--in", dest="input_path", required=True)

    p = sub.add_parser("theorem", help="build a closed-form Casimir and check it")
    common(p)
    p.add_argument("--which", choices=["quadratic", "quartic"], required=True)
    p.add_argument("--method", choices=["pipeline", "algebraic"], default="pipeline",
                   help="solver path used for ground truth when the closed form fails")

    p = sub.add_parser("realize", help="map an element to a differential operator")
    common(p)
    p.add_argument("--in", dest="input_path")
    p.add_argument("--gen", help="realize a single generator by name instead of a file")

    return parser


def parse_args(argv: Sequence[str]) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(subcommand=ns.subcommand)
    for field in ("d", "ell", "degree", "grade", "method", "trials", "seed",
                  "input_path", "output_path", "format", "which", "gen"):
        if hasattr(ns, field):
            setattr(cfg, field, getattr(ns, field))
    return cfg


def _spec(cfg: RunConfig):
    return parse_spec(cfg.d, cfg.ell)


def _emit(cfg: RunConfig, payload: dict, text: str):
    print(text if cfg.format == "text" else json.dumps(payload, indent=2, sort_keys=True))
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True))
            fh.write("\n")


def _resolve_target(cfg: RunConfig, spec) -> tuple[tuple[int, ...], int]:
    if cfg.grade == "auto":
        for g, d in default_target_grades(spec):
            if d == cfg.degree:
                return g, cfg.degree
        raise CliError(
            f"no default grade at degree {cfg.degree}; pass --grade explicitly")
    try:
        grade = tuple(int(x) for x in cfg.grade.split(","))
    except ValueError:
        raise CliError(f"cannot parse grade {cfg.grade!r}") from None
    expected = 2 if spec.d == 1 else 3
    if len(grade) != expected:
        raise CliError(f"grade for d={spec.d} needs {expected} components")
    return grade, cfg.degree


def cmd_algebra(cfg: RunConfig) -> int:
    alg = make_cga(_spec(cfg))
    payload = liealg.to_json_dict(alg)
    _emit(cfg, payload, f"{alg!r}: basis {', '.join(g.name for g in alg.basis)}")
    return 0


def cmd_rank(cfg: RunConfig) -> int:
    alg = make_cga(_spec(cfg))
    count = liealg.bb_count(alg, trials=cfg.trials, seed=cfg.seed)
    print(count)
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            json.dump({"spec": {"d": alg.spec.d, "ell": alg.spec.ell_str()},
                       "invariant_count": count}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def cmd_solve(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    alg = make_cga(spec)
    grade, degree = _resolve_target(cfg, spec)
    report = solver.solve_casimirs(alg, grade, degree, method=cfg.method)
    lines = [
        f"grade {grade} degree <= {degree} method {cfg.method}",
        f"ansatz {len(report.ansatz.monomials)} monomials, "
        f"candidates {report.candidate_dim}, casimir dim {report.casimir_dim}, "
        f"canonical dim {len(report.canonical)}",
    ]
    for e in report.canonical:
        lines.append(f"  {e}")
    _emit(cfg, report.to_json_dict(), "\n".join(lines))
    return 0 if report.verified else 1


def _load_elements(cfg: RunConfig, alg) -> list[uea.UEAElement]:
    with open(cfg.input_path) as fh:
        data = json.load(fh)
    if "terms" in data:
        return [uea.from_json_dict(alg, data)]
    if "canonical" in data:
        if "spec" in data and parse_spec(**data["spec"]) != alg.spec:
            raise CliError(f"{cfg.input_path} was produced for "
                           f"d={data['spec']['d']} ell={data['spec']['ell']}")
        return solver.report_elements_from_json(alg, data)
    raise CliError(f"{cfg.input_path}: neither an element nor a report")


def cmd_verify(cfg: RunConfig) -> int:
    alg = make_cga(_spec(cfg))
    elements = _load_elements(cfg, alg)
    failures = []
    for idx, e in enumerate(elements):
        bad = solver.verify_casimir(alg, e)
        if bad is not None:
            g, res = bad
            failures.append({"element": idx, "generator": g.name,
                             "residual_terms": len(res.terms)})
    payload = {
        "spec": {"d": alg.spec.d, "ell": alg.spec.ell_str()},
        "elements": len(elements),
        "failures": failures,
        "verified": not failures,
    }
    if failures:
        f = failures[0]
        text = (f"FAIL: element {f['element']} does not commute with "
                f"{f['generator']} ({f['residual_terms']} residual terms)")
    else:
        text = f"OK: {len(elements)} element(s) commute with every generator"
    _emit(cfg, payload, text)
    return 0 if not failures else 1


def cmd_theorem(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    tr, payload = theorems.theorem_casimir_report(spec, cfg.which, method=cfg.method)
    lines = [f"closed form {cfg.which} for d={spec.d} ell={spec.ell_str()}"]
    if tr.verified:
        lines.append("as printed: verified against every generator")
    else:
        lines.append(f"as printed: FAILS; {len(tr.discrepancies)} coefficient(s) corrected "
                     f"from the solver:")
        for d in tr.discrepancies:
            lines.append(f"  {d.term}: printed {d.closed_form}, solver {d.solver}")
    lines.append(f"emitted element verifies: {payload['verified']}")
    _emit(cfg, payload, "\n".join(lines))
    return 0 if payload["verified"] else 1


def cmd_realize(cfg: RunConfig) -> int:
    spec = _spec(cfg)
    alg = make_cga(spec)
    if cfg.gen is not None:
        op = realization.realize_generator(spec, alg.generator(cfg.gen))
        label = cfg.gen
    elif cfg.input_path:
        elements = _load_elements(cfg, alg)
        if len(elements) != 1:
            raise CliError("realize expects exactly one element")
        op = realization.realize_element(alg, elements[0])
        label = cfg.input_path
    else:
        raise CliError("realize needs --in FILE or --gen NAME")
    scalar, residual = realization.is_parameter_scalar(op)
    payload = {
        "spec": {"d": spec.d, "ell": spec.ell_str()},
        "input": label,
        "operator": realization.diffop_json_dict(op),
        "parameter_scalar": scalar,
        "residual_components": len(residual.terms),
    }
    text = (f"{label} -> {realization.pretty_diffop(op)}\n"
            f"parameter scalar: {scalar}")
    _emit(cfg, payload, text)
    return 0


_HANDLERS = {
    "algebra": cmd_algebra,
    "rank": cmd_rank,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "theorem": cmd_theorem,
    "realize": cmd_realize,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else list(argv))
    except SystemExit as exc:  # argparse reports its own errors on code 2
        return int(exc.code or 0)
    try:
        return _HANDLERS[cfg.subcommand](cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        # covers bad specs, degree/trials bounds, out-of-range closed forms
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: bad input ({exc})", file=sys.stderr)
        return 2
    except solver.ReducedCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
