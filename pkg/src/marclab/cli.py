"""``marclab`` command-line front end.

Every subcommand delegates to one library operation and writes JSON or CSV
to stdout (or ``--out``).  Exit status: 0 on PASS, 1 on FAIL, 2 on usage,
schema or input errors.  ``MARCLAB_TOL`` overrides the relative tolerance.

CSV columns:
  superadd   m, gamma, sum_norm, defect
  certify    eps, k, condition, margin (with --trace-csv)
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .errors import MarclabError, NonAdmissibleError, SchemaError
from .norms import norm, verify_majorant_identities
from .numerics import NumericPolicy
from .phi import classify_phi, least_quasiconcave_majorant, parse_phi
from .reporting import dumps, sparkline_svg
from .stepfn import MaximalProfile, inequality_sweep, rearrangement, step_from_json
from .superadditivity import defect_csv, defect_sweep
from .noncompactness import (alt_certificate_check, alt_certificate_from_json, alt_witness_params,
                             build_packing, general_certificate_from_json, linf_certificate_from_json,
                             linf_lower_certificate, verify_general_lower_certificate, verify_packing,
                             verify_witness_params)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Parsed command line plus the numeric policy."""

    args: argparse.Namespace
    policy: NumericPolicy

    @property
    def command(self) -> str:
        return self.args.command

    @property
    def output(self) -> Optional[str]:
        return self.args.out

    @property
    def seed(self) -> Optional[int]:
        return getattr(self.args, "seed", None)


def run(config: RunConfig) -> int:
    return config.args.func(config.args, config.policy)


def parse_range(text: str) -> list[int]:
    """``"2..16"`` or ``"3"`` or ``"2,4,8"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            out = list(range(int(lo), int(hi) + 1))
        else:
            out = [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc
    if not out or min(out) < 1:
        raise UsageError(f"bad range {text!r}")
    return out


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _load_json(path: str) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}: {exc.msg}") from exc


def emit_report(text: str, out: Optional[str]) -> None:
    """Write a rendered report to ``out`` or stdout."""
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _phi(text: str):
    try:
        return parse_phi(text)
    except (MarclabError, ValueError) as exc:
        raise UsageError(f"bad --phi {text!r}: {exc}") from exc


# -- subcommands --------------------------------------------------------------

def cmd_phi(args, policy) -> int:
    phi = _phi(args.phi)
    doc = {"phi": phi.to_json(), "classification": classify_phi(phi, policy).to_json()}
    if args.at:
        ts = _floats(args.at)
        doc["values"] = [[t, phi(t)] for t in ts]
        try:
            doc["majorant"] = [[t, least_quasiconcave_majorant(phi, t, policy)] for t in ts]
        except NonAdmissibleError as exc:
            doc["majorant"] = str(exc)
    emit_report(dumps(doc), args.out)
    return EXIT_PASS


def cmd_rearrange(args, policy) -> int:
    f = step_from_json(_load_json(args.f))
    prof = rearrangement(f)
    doc = {"breakpoints": prof.breakpoints, "values": prof.values}
    if args.at:
        maxp = MaximalProfile(prof)
        pts = []
        for t in args.at.split(","):
            t = Fraction(t)
            pts.append({"t": t, "fstar": prof(t), "fstar_left": prof.left_limit(t), "fss": maxp(t)})
        doc["points"] = pts
    emit_report(dumps(doc), args.out)
    return EXIT_PASS


def cmd_norm(args, policy) -> int:
    f = step_from_json(_load_json(args.f))
    phi = _phi(args.phi)
    doc = {"m": norm(f, phi, "m", policy), "M": norm(f, phi, "M", policy)}
    if args.which != "both":
        doc = {args.which: doc[args.which]}
    if args.identities:
        doc["identities"] = verify_majorant_identities(f, phi, policy)
    emit_report(dumps(doc), args.out)
    return EXIT_PASS


def cmd_superadd(args, policy) -> int:
    phi = _phi(args.phi)
    ms = parse_range(args.m)
    gammas = _floats(args.gamma)
    rows = defect_sweep(phi, args.case, ms, gammas, args.t0, policy)
    emit_report(defect_csv(rows), args.out)
    if args.svg:
        g0 = gammas[0]
        Path(args.svg).write_text(sparkline_svg([r[3] for r in rows if r[1] == g0]))
    return EXIT_PASS


def cmd_pack(args, policy) -> int:
    center = [Fraction(c) for c in args.center.split(",")] if args.center else None
    p = build_packing(args.n, Fraction(args.t1), Fraction(args.side), center)
    rep = verify_packing(p)
    emit_report(dumps({"packing": p, "report": rep}), args.out)
    return EXIT_PASS if rep.ok else EXIT_FAIL


def cmd_certify(args, policy) -> int:
    doc = _load_json(args.cert)
    if args.kind == "general":
        v = verify_general_lower_certificate(general_certificate_from_json(doc), args.kmax, policy=policy,
                                             seed=args.seed)
    elif args.kind == "alt":
        v = alt_certificate_check(alt_certificate_from_json(doc), policy, args.centers)
    else:
        v = linf_lower_certificate(linf_certificate_from_json(doc))
    emit_report(v.trace_csv() if args.trace_csv else dumps(v), args.out)
    return EXIT_PASS if v.passed else EXIT_FAIL


def cmd_witness_params(args, policy) -> int:
    phi = _phi(args.phi)
    p = alt_witness_params(phi, args.case, args.normT, args.lam, args.centers, policy)
    checks = verify_witness_params(phi, p, policy)
    ok = all(c.ok for c in checks)
    emit_report(dumps({"params": p, "checks": [c.__dict__ for c in checks], "ok": ok}), args.out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_inequalities(args, policy) -> int:
    s = inequality_sweep(args.seed, args.trials, args.points)
    emit_report(dumps(s), args.out)
    return EXIT_PASS if s.failures == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="marclab", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"marclab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    phi_help = "power_log:alpha,beta[,L[,scale]] or a JSON phi document"

    p = sub.add_parser("phi", help="classify phi and evaluate its majorant")
    p.add_argument("--phi", required=True, help=phi_help)
    p.add_argument("--at", help="comma-separated points")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("rearrange", help="nonincreasing and maximal rearrangements")
    p.add_argument("--f", required=True, help="step function JSON")
    p.add_argument("--at", help="comma-separated rational points")
    p.set_defaults(func=cmd_rearrange)

    p = sub.add_parser("norm", help="Marcinkiewicz quasinorms of a step function")
    p.add_argument("--f", required=True, help="step function JSON")
    p.add_argument("--phi", required=True, help=phi_help)
    p.add_argument("--which", choices=["m", "M", "both"], default="both")
    p.add_argument("--identities", action="store_true", help="also compare against the majorant")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("superadd", help="superadditivity defect sweep (CSV: m,gamma,sum_norm,defect)")
    p.add_argument("--case", choices=["m", "M"], required=True)
    p.add_argument("--phi", required=True, help=phi_help)
    p.add_argument("--m", default="2..12", help="range such as 2..16")
    p.add_argument("--gamma", default="1", help="comma-separated exponents")
    p.add_argument("--t0", type=float, default=None)
    p.add_argument("--svg", help="write a defect-vs-m sparkline for the first gamma")
    p.set_defaults(func=cmd_superadd)

    p = sub.add_parser("pack", help="dyadic ball packing and its verification")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t1", required=True, help="rational measure, e.g. 1/5")
    p.add_argument("--side", default="1")
    p.add_argument("--center", help="comma-separated rational coordinates")
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("certify", help="check a lower-bound certificate (verdict JSON)")
    p.add_argument("kind", choices=["general", "alt", "linf"])
    p.add_argument("--cert", required=True)
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--centers", type=int, default=None, help="alt: number of centres to defeat")
    p.add_argument("--trace-csv", action="store_true", help="CSV: eps,k,condition,margin")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("witness-params", help="explicit parameters for the equimeasurable criterion")
    p.add_argument("--case", choices=["m", "M"], required=True)
    p.add_argument("--phi", required=True, help=phi_help)
    p.add_argument("--normT", type=float, default=1.0)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--centers", type=int, default=1)
    p.set_defaults(func=cmd_witness_params)

    p = sub.add_parser("inequalities", help="seeded sweep of rearrangement inequalities")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_inequalities)

    for sp in sub.choices.values():
        sp.add_argument("--out", help="output file (default stdout)")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        policy = NumericPolicy.from_env()
    except ValueError:
        print("marclab: MARCLAB_TOL must be a number", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(RunConfig(args, policy))
    except (UsageError, SchemaError) as exc:
        print(f"marclab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MarclabError as exc:
        print(f"marclab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
