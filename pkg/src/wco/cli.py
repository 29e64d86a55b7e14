"""Command-line front end.

    wco certify --family unitary --draws 25 --seed 7
    wco certify --family cs-2.3 --params '{"p": 0, "a0": 0.3, "a1": 0.5, "c": 1}'
    wco classify --psi "exp(sin(z))" --phi "-z"

Reports are JSON documents on stdout (or ``--out``).  Exit status is 0
when every check passes, 1 when any fails and 2 on input errors.  A
relative ``--out`` path is resolved against ``$WCO_OUTPUT_DIR`` when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .config import DEFAULT_ORDER, SAFETY_RADIUS
from .errors import DomainError, NumericalFailure
from .parse import parse_symbol
from .theorems import (FAMILIES, CertificateReport, _param_json, certify_theorem,
                       classify_algebraic, draw_family, verify_case3_identity)

SCHEMA = "wco-report/1"
OUTPUT_DIR_ENV = "WCO_OUTPUT_DIR"

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    """Invalid command-line input; maps to exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    family: str | None = None
    order: int = DEFAULT_ORDER
    tolerance: float = 1e-8
    seed: int = 0
    draws: int | None = None
    params: dict | None = None
    safety_radius: float = SAFETY_RADIUS
    psi: str | None = None
    phi: str | None = None

    def __post_init__(self):
        if self.order < 8:
            raise InputError("order must be at least 8")
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive")
        if not 0.0 < self.safety_radius < 1.0:
            raise InputError("safety radius must lie in (0, 1)")
        if self.draws is not None and self.draws < 1:
            raise InputError("draws must be positive")

    def echo(self):
        return {k: _param_json(v) if k != "params" else _echo_params(v)
                for k, v in asdict(self).items() if v is not None}


def _echo_params(params):
    return {k: _param_json(v) for k, v in sorted(params.items())}


@dataclass
class ReportDocument:
    config: RunConfig
    results: list
    summary: dict
    duration: float = 0.0

    @property
    def passed(self):
        return all(r["verdict"] == "pass" for r in self.results)

    def to_dict(self):
        return {"schema": SCHEMA, "version": __version__, "config": self.config.echo(),
                "verdict": "pass" if self.passed else "fail", "summary": self.summary,
                "results": self.results, "duration_seconds": round(self.duration, 6)}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)


# ---------------------------------------------------------------------------
# parameter decoding
# ---------------------------------------------------------------------------


def _decode_value(v):
    if isinstance(v, bool):
        raise InputError("boolean parameters are not supported")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list):
        if len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
            return complex(v[0], v[1])
        return [_decode_value(x) for x in v]
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return complex(v["re"], v["im"])
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise InputError(f"cannot read {v!r} as a complex number") from None
    raise InputError(f"unsupported parameter value {v!r}")


def decode_params(text, family):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--params is not valid JSON: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise InputError("--params must be a JSON object")
    out = {}
    for k, v in raw.items():
        if family == "algebraic" and k in ("psi", "phi"):
            out[k] = str(v)
        elif k == "r":
            out[k] = float(v)
        else:
            out[k] = _decode_value(v)
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _certificate_entry(index, report: CertificateReport, rejected=0):
    entry = {"draw": index}
    if rejected:
        entry["rejected_before"] = rejected
    entry.update(report.to_dict())
    return entry


def cmd_certify(config: RunConfig) -> ReportDocument:
    """Certify one explicit parameter set or a seeded sweep of random draws."""
    if config.family not in FAMILIES:
        raise InputError(f"unknown family {config.family!r}")
    results, rejected_total = [], 0
    if config.params is not None:
        try:
            rep = certify_theorem(config.family, config.params, config.order,
                                  config.tolerance, config.seed)
        except (ValueError, TypeError, KeyError) as exc:
            raise InputError(str(exc)) from None
        results.append(_certificate_entry(0, rep))
    else:
        rng = np.random.default_rng(config.seed)
        for i in range(config.draws or 1):
            try:
                params, _, rejected = draw_family(config.family, rng, config.safety_radius)
            except NumericalFailure as exc:
                raise InputError(str(exc)) from None
            rejected_total += rejected
            rep = certify_theorem(config.family, params, config.order, config.tolerance,
                                  seed=(config.seed, i))
            results.append(_certificate_entry(i, rep, rejected))
    passed = sum(r["verdict"] == "pass" for r in results)
    summary = {"runs": len(results), "passed": passed, "failed": len(results) - passed,
               "rejected_draws": rejected_total}
    return ReportDocument(config, results, summary)


def cmd_classify(config: RunConfig) -> ReportDocument:
    """Classify ``W_{psi,phi}`` as algebraic of degree at most 2 or not."""
    try:
        psi, phi = parse_symbol(config.psi), parse_symbol(config.phi)
    except ValueError as exc:
        raise InputError(f"cannot parse symbol: {exc}") from None
    try:
        verdict = classify_algebraic(psi, phi, config.order, config.tolerance)
    except DomainError as exc:
        raise InputError(str(exc)) from None
    if verdict.algebraic:
        eq17 = verify_case3_identity(psi, phi, verdict, order=config.order)
        checks = [verdict.residual, eq17]
        entry = {"algebraic": True, "degree": verdict.degree, "case": verdict.case,
                 "A": _param_json(complex(verdict.A)), "B": _param_json(complex(verdict.B)),
                 "C": _param_json(complex(verdict.C))}
    else:
        checks = []
        entry = {"algebraic": False, "case": "not-algebraic-<=2", "reason": verdict.reason}
    entry["checks"] = [c.to_dict() for c in checks]
    entry["verdict"] = "pass" if all(c.passed for c in checks) else "fail"
    return ReportDocument(config, [entry], {"runs": 1, "algebraic": verdict.algebraic})


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="wco", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"wco {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    cert = sub.add_parser("certify", help="certify a symbol family")
    cert.add_argument("--family", required=True, choices=FAMILIES)
    cert.add_argument("--order", type=int, default=DEFAULT_ORDER)
    cert.add_argument("--tol", type=float, default=1e-8)
    cert.add_argument("--seed", type=int, default=0)
    cert.add_argument("--safety-radius", type=float, default=SAFETY_RADIUS)
    src = cert.add_mutually_exclusive_group()
    src.add_argument("--draws", type=int)
    src.add_argument("--params", help="JSON object of family parameters")
    cert.add_argument("--out")

    cls = sub.add_parser("classify", help="decide algebraicity of degree <= 2")
    cls.add_argument("--psi", required=True)
    cls.add_argument("--phi", required=True)
    cls.add_argument("--order", type=int, default=96)
    cls.add_argument("--tol", type=float, default=1e-8)
    cls.add_argument("--out")
    return parser


def _config_from_args(args):
    if args.command == "certify":
        params = decode_params(args.params, args.family) if args.params is not None else None
        return RunConfig("certify", args.family, args.order, args.tol, args.seed,
                         args.draws if params is None else None, params, args.safety_radius)
    return RunConfig("classify", order=args.order, tolerance=args.tol,
                     psi=args.psi, phi=args.phi)


def _output_path(path):
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _glue_symbol_args(argv):
    # expressions such as "-z" would otherwise be read as options
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--psi", "--phi"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_symbol_args(argv))
    start = time.perf_counter()
    try:
        config = _config_from_args(args)
        doc = cmd_certify(config) if config.command == "certify" else cmd_classify(config)
    except InputError as exc:
        print(f"wco: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc.duration = time.perf_counter() - start
    text = doc.to_json()
    if args.out:
        path = _output_path(args.out)
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_PASS if doc.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
