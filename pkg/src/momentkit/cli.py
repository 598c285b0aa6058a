"""Batch command-line front end.

Verbs: check, represent, extend-moments, hb-extend, build-measure, verify.
Each run reads one JSON input file, dispatches to the library, and emits a
canonical JSON result; multiple inputs fan out with ``--jobs``.  Exit codes
are a stable contract:

    0  positive verdict / representation verified
    1  negative verdict (with a witness or reason in the payload)
    2  input error (unreadable file, schema violation)
    3  numerical failure (solver non-convergence, inconclusive band)
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    BracketExhausted,
    DegreeTooHigh,
    EigFailure,
    IoError,
    LpFailure,
    LpUnbounded,
    MomentkitError,
    RankDetectionAmbiguous,
    SchemaError,
)
from .extend import Functional, hb_extend_step, verify_positive
from .funcspace import FunctionVec, Subspace
from .jsonio import (
    FiniteSpaceInput,
    MomentInput,
    dumps_canonical,
    encode_atomic,
    encode_measure,
    encode_poly,
    encode_support,
    parse_input,
)
from .measure import (
    BinningSpec,
    RepresentOptions,
    approx_below,
    integrate,
    represent_via_adapted,
    seminorm_rho,
)
from .moments import (
    extend_search,
    haviland_grid_check,
    positivity_certificate,
    recover_atoms,
    riesz,
    verify_truncated,
)
from .simplex import collect_lp_stats

log = logging.getLogger("momentkit")

VERBS = ("check", "represent", "extend-moments", "hb-extend", "build-measure", "verify")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


@dataclass(frozen=True)
class Command:
    verb: str
    input_path: str
    tol: float = 1e-8
    grid: int = 200
    bins: int = 64
    rule: str = "midpoint"
    output: str | None = None
    schema_check_only: bool = False


@dataclass(frozen=True)
class RunResult:
    verdict: str
    exit_code: int
    payload: dict

    def to_json(self) -> str:
        doc = dict(self.payload)
        doc.setdefault("schema", "1")
        doc["verdict"] = self.verdict
        doc["exit_code"] = self.exit_code
        return dumps_canonical(doc) + "\n"


def run(cmd: Command) -> RunResult:
    """Execute one command; never raises on schema-valid input."""
    log.info("run %s on %s", cmd.verb, cmd.input_path)
    try:
        with collect_lp_stats() as stats:
            parsed = parse_input(cmd.input_path)
            if cmd.schema_check_only:
                return RunResult("schema-ok", EXIT_OK, {"verb": cmd.verb})
            result = _dispatch(cmd, parsed)
        result.payload.setdefault("diagnostics", {})
        result.payload["diagnostics"]["lp_solves"] = stats["solves"]
        result.payload["diagnostics"]["lp_iterations"] = stats["iterations"]
        return result
    except (SchemaError, IoError, DegreeTooHigh) as exc:
        log.error("input error: %s", exc)
        return RunResult("input-error", EXIT_INPUT, {"verb": cmd.verb, "error": str(exc)})
    except (LpFailure, LpUnbounded, EigFailure, RankDetectionAmbiguous, BracketExhausted) as exc:
        log.error("numerical failure: %s", exc)
        return RunResult(
            "numerical-failure", EXIT_NUMERICAL,
            {"verb": cmd.verb, "error": str(exc), "error_kind": type(exc).__name__},
        )
    except MomentkitError as exc:
        log.error("negative verdict: %s", exc)
        return RunResult(
            "failed", EXIT_NEGATIVE,
            {"verb": cmd.verb, "error": str(exc), "error_kind": type(exc).__name__},
        )
    except Exception as exc:  # defensive: exit-code totality
        log.exception("unexpected failure")
        return RunResult(
            "numerical-failure", EXIT_NUMERICAL,
            {"verb": cmd.verb, "error": f"unexpected {type(exc).__name__}: {exc}"},
        )


def _dispatch(cmd: Command, parsed) -> RunResult:
    verb = cmd.verb
    if verb == "check":
        return _run_check(cmd, _as_moments(parsed, verb))
    if verb == "represent":
        return _run_represent(cmd, _as_moments(parsed, verb))
    if verb == "extend-moments":
        return _run_extend_moments(cmd, _as_moments(parsed, verb))
    if verb == "hb-extend":
        return _run_hb_extend(cmd, _as_finite(parsed, verb))
    if verb == "build-measure":
        return _run_build_measure(cmd, _as_finite(parsed, verb))
    if verb == "verify":
        if isinstance(parsed, MomentInput):
            return _run_verify_moments(cmd, parsed)
        return _run_verify_finite(cmd, parsed)
    raise SchemaError("verb", f"unknown verb {verb!r}")


def _as_moments(parsed, verb: str) -> MomentInput:
    if not isinstance(parsed, MomentInput):
        raise SchemaError("", f"verb {verb!r} expects a moment-sequence input file")
    return parsed


def _as_finite(parsed, verb: str) -> FiniteSpaceInput:
    if not isinstance(parsed, FiniteSpaceInput):
        raise SchemaError("", f"verb {verb!r} expects a finite-space input file")
    return parsed


# --- verb handlers ------------------------------------------------------------

def _run_check(cmd: Command, inp: MomentInput) -> RunResult:
    seq = inp.sequence
    cert = positivity_certificate(seq, cmd.tol)
    payload = {
        "verb": "check",
        "moments": list(seq.moments),
        "support": encode_support(seq.support),
        "certificate": {
            "verdict": cert.verdict,
            "tol": cert.tol,
            "matrices": [
                {
                    "label": w.label,
                    "size": w.size,
                    "lambda_min": w.lambda_min,
                    **({"witness_poly": encode_poly(w.witness),
                        "witness_value": riesz(seq, w.witness)} if w.witness else {}),
                }
                for w in cert.witnesses
            ],
            "notes": list(cert.notes),
        },
    }
    grid_info = {"ran": False}
    if seq.support.kind == "interval" and cmd.grid >= 2:
        grid = np.linspace(seq.support.a, seq.support.b, cmd.grid)
        ok, worst = haviland_grid_check(seq, grid, max(cmd.tol, 1e-7))
        grid_info = {
            "ran": True,
            "points": cmd.grid,
            "passed": ok,
            "witness_poly": encode_poly(worst),
            "witness_value": riesz(seq, worst),
        }
    payload["grid_check"] = grid_info

    if cert.verdict == "representable":
        return RunResult("representable", EXIT_OK, payload)
    if cert.verdict == "not-representable":
        return RunResult("not-representable", EXIT_NEGATIVE, payload)
    return RunResult("inconclusive", EXIT_NUMERICAL, payload)


def _run_represent(cmd: Command, inp: MomentInput) -> RunResult:
    seq = inp.sequence
    mu = recover_atoms(seq)
    report = verify_truncated(seq, mu, tol=cmd.tol)
    payload = {
        "verb": "represent",
        "moments": list(seq.moments),
        "support": encode_support(seq.support),
        "atomic_measure": encode_atomic(mu),
        "verification": {
            "through_degree": report.through_degree,
            "max_relative_residual": report.max_relative_residual,
            "degree_2d_residual": report.degree_2d_residual,
            "tol": report.tol,
            "passed": report.passed,
        },
    }
    if report.passed:
        return RunResult("represented", EXIT_OK, payload)
    return RunResult("verification-failed", EXIT_NEGATIVE, payload)


def _run_extend_moments(cmd: Command, inp: MomentInput) -> RunResult:
    seq = inp.sequence
    found = extend_search(seq, cmd.tol)
    payload = {
        "verb": "extend-moments",
        "moments": list(seq.moments),
        "support": encode_support(seq.support),
    }
    if found is None:
        payload["extension"] = None
        return RunResult("no-positive-extension", EXIT_NEGATIVE, payload)
    payload["extension"] = {
        "m_next": found.m_next,
        "m_next_next": found.m_next_next,
        "lambda_min": found.lambda_min,
    }
    return RunResult("extended", EXIT_OK, payload)


def _run_hb_extend(cmd: Command, fs: FiniteSpaceInput) -> RunResult:
    if fs.functional is None:
        raise SchemaError("functional", "hb-extend requires functional values")
    current = fs.functional
    names = list(fs.basis_names)
    trace = []
    for name, target in fs.targets:
        if current.domain.contains(target):
            continue
        current, step = hb_extend_step(current, target, cmd.rule)
        names.append(name)
        trace.append({
            "target": name,
            "interval_lo": step.interval_lo,
            "interval_hi": step.interval_hi,
            "chosen": step.chosen,
        })
    ok, worst = verify_positive(current, cmd.tol)
    payload = {
        "verb": "hb-extend",
        "rule": cmd.rule,
        "trace": trace,
        "functional": {name: float(c) for name, c in zip(names, current.coeffs)},
        "positivity": {"ok": ok, "worst_value": worst, "tol": cmd.tol},
    }
    if ok:
        return RunResult("extended-positive", EXIT_OK, payload)
    return RunResult("positivity-failed", EXIT_NEGATIVE, payload)


def _default_designated(fs: FiniteSpaceInput) -> Subspace:
    """Default designated subspace: block indicators completed by the domain
    basis (greedy independent union)."""
    vectors = fs.algebra.indicators() + list(fs.domain.basis)
    current = Subspace(fs.ground, ())
    for v in vectors:
        if not current.contains(v):
            current = current.extended_by(v)
    return current


def _run_build_measure(cmd: Command, fs: FiniteSpaceInput) -> RunResult:
    if fs.functional is None:
        raise SchemaError("functional", "build-measure requires functional values")
    if fs.algebra is None:
        raise SchemaError("sigma_algebra", "build-measure requires a partition")
    designated = fs.designated if fs.designated is not None else _default_designated(fs)
    opts = RepresentOptions(
        rule=cmd.rule,
        tol=cmd.tol,
        subspace_variant=fs.subspace_variant,
        witnesses=fs.witnesses or None,
    )
    mu, report = represent_via_adapted(fs.domain, designated, fs.functional, fs.algebra, opts)

    binning = []
    if cmd.bins >= 1 and fs.domain.dim:
        one = FunctionVec(fs.ground, np.ones(fs.ground.size))
        # Replay the recorded extension steps to evaluate rho diagnostics.
        Lt = fs.functional
        for step in report.trace.steps:
            Lt = Functional(Lt.domain.extended_by(step.target), np.append(Lt.coeffs, step.chosen))
        Lt_one = Lt(one)
        for name, g in zip(fs.basis_names, fs.domain.basis):
            lo = float(g.values.min())
            hi = float(g.values.max())
            spec = BinningSpec(lo, hi + max(1.0, hi - lo) * 1e-9, cmd.bins)
            phi = approx_below(g, spec)
            rho = seminorm_rho(Lt, g - phi.as_vec())
            bound = Lt_one * spec.width
            binning.append({
                "name": name,
                "width": spec.width,
                "rho_gap": rho,
                "bound": bound,
                "ok": rho <= bound + cmd.tol,
            })

    payload = {
        "verb": "build-measure",
        "measure": encode_measure(mu),
        "density": {
            "distances": list(report.density.distances),
            "tol": report.density.tol,
            "dense": report.density.dense,
        },
        "residuals": {name: r for name, r in zip(fs.basis_names, report.residuals)},
        "max_residual": report.max_residual,
        "positivity": {"ok": report.positive_ok, "worst_value": report.worst_positive_value},
        "adaptedness": None if report.adaptedness is None else [
            {
                "target_index": e.target_index,
                "witness_index": e.witness_index,
                "passed": e.passed,
            }
            for e in report.adaptedness.entries
        ],
        "t_decay_ok": all(e.ok for e in report.t_decay if e.t_target == e.t_target),
        "binning": binning,
        "notes": list(report.notes),
        "certified": report.certified,
    }
    if report.certified:
        return RunResult("measure-certified", EXIT_OK, payload)
    verdict = "density-failed" if not report.density_ok else "not-certified"
    return RunResult(verdict, EXIT_NEGATIVE, payload)


def _run_verify_moments(cmd: Command, inp: MomentInput) -> RunResult:
    if inp.atomic is None:
        raise SchemaError("atomic_measure", "verify requires an atomic_measure alongside moments")
    report = verify_truncated(inp.sequence, inp.atomic, tol=cmd.tol)
    payload = {
        "verb": "verify",
        "verification": {
            "through_degree": report.through_degree,
            "max_relative_residual": report.max_relative_residual,
            "degree_2d_residual": report.degree_2d_residual,
            "tol": report.tol,
            "passed": report.passed,
        },
    }
    if report.passed:
        return RunResult("verified", EXIT_OK, payload)
    return RunResult("verification-failed", EXIT_NEGATIVE, payload)


def _run_verify_finite(cmd: Command, fs: FiniteSpaceInput) -> RunResult:
    if fs.functional is None or fs.algebra is None or fs.measure is None:
        raise SchemaError("measure", "finite-space verify requires functional, sigma_algebra and measure")
    residuals = {}
    worst = 0.0
    for name, g in zip(fs.basis_names, fs.domain.basis):
        r = fs.functional(g) - integrate(g, fs.measure, fs.algebra)
        residuals[name] = r
        worst = max(worst, abs(r))
    payload = {"verb": "verify", "residuals": residuals, "max_residual": worst, "tol": cmd.tol}
    if worst <= cmd.tol:
        return RunResult("verified", EXIT_OK, payload)
    return RunResult("verification-failed", EXIT_NEGATIVE, payload)


# --- entry point ----------------------------------------------------------------

def _worker(args) -> tuple[str, str, int]:
    cmd = Command(**args)
    result = run(cmd)
    return cmd.input_path, result.to_json(), result.exit_code


def _configure_logging() -> None:
    level = os.environ.get("MOMENTKIT_LOG", "error").lower()
    mapping = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=mapping.get(level, logging.ERROR),
                        format="momentkit:%(levelname)s: %(message)s")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="momentkit",
        description="Positivity certificates, representing measures and "
                    "functional extension on desk-scale inputs.",
    )
    parser.add_argument("--version", action="version", version=f"momentkit {__version__}")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("inputs", nargs="+", metavar="INPUT", help="input JSON file(s)")
    parser.add_argument("--tol", type=float, default=1e-8, help="verdict tolerance (default 1e-8)")
    parser.add_argument("--grid", type=int, default=200,
                        help="grid size for the interval cross-check (default 200)")
    parser.add_argument("--bins", type=int, default=64,
                        help="bin count for the lower-approximation diagnostic (default 64)")
    parser.add_argument("--rule", choices=("midpoint", "lo", "hi"), default="midpoint",
                        help="extension value rule (default midpoint)")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for many inputs")
    parser.add_argument("--output", default=None,
                        help="output file (single input) or directory (multiple inputs)")
    parser.add_argument("--schema-check-only", action="store_true",
                        help="validate the input schema and exit")
    return parser


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    if args.tol <= 0:
        print("momentkit: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT

    jobs = []
    for path in args.inputs:
        jobs.append(dict(
            verb=args.verb,
            input_path=path,
            tol=args.tol,
            grid=args.grid,
            bins=args.bins,
            rule=args.rule,
            output=args.output,
            schema_check_only=args.schema_check_only,
        ))

    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_worker, jobs))
    else:
        results = [_worker(j) for j in jobs]

    worst = EXIT_OK
    multi = len(results) > 1
    for path, text, code in results:
        worst = max(worst, code)
        if args.output is None:
            sys.stdout.write(text)
        elif multi:
            out_dir = Path(args.output)
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / (Path(path).stem + ".out.json")).write_text(text, encoding="utf-8")
        else:
            Path(args.output).write_text(text, encoding="utf-8")
    return worst


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
