import os
import sys
import json
import logging
import argparse

from scripts.bessel import (
    CLASSICAL_KINDS, BesselParams, u_at, u_at_one, u_prime_at_one, u_second_at_one,
)
from scripts.class_membership import ConditionId, SpiralParams
from scripts.config import DEFAULT_EPS, DEFAULT_SEED, DEFAULT_TUPLES, LOG_LEVEL
from scripts.errors import RegimeViolation, SpiraCertError
from scripts.evaluate import print_summary, run_suite
from scripts.function_model import RtauParams
from scripts.golden import canonical_records, diff_golden, load_golden, write_golden
from scripts.scan import ScanSpec, format_scan, run_scan
from scripts.theorems import (
    RTAU_CONDITIONS, THEOREM_CONDITIONS, certify, corollary_certificates,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# --- 1. Shared flag groups ---

def _add_bessel_args(parser: argparse.ArgumentParser):
    parser.add_argument("--c", type=float, required=True)
    parser.add_argument("--kappa", type=float, help="kappa = p + (b+1)/2 (or give --b and --p)")
    parser.add_argument("--b", type=float)
    parser.add_argument("--p", type=float)
    parser.add_argument("--eps", type=float, default=DEFAULT_EPS)


def _add_rtau_args(parser: argparse.ArgumentParser):
    parser.add_argument("--A", type=float, dest="A")
    parser.add_argument("--B", type=float, dest="B")
    parser.add_argument("--tau", type=str, help="complex, e.g. 1 or 0.5+0.5j")


def _add_spiral_args(parser: argparse.ArgumentParser):
    angle = parser.add_mutually_exclusive_group(required=True)
    angle.add_argument("--alpha", type=float, help="radians, |alpha| < pi/2")
    angle.add_argument("--alpha-deg", type=float, help="degrees")
    parser.add_argument("--beta", type=float, required=True)


def _bessel_params(args) -> BesselParams:
    if args.kappa is not None:
        return BesselParams(c=args.c, kappa=args.kappa)
    if args.b is None or args.p is None:
        raise RegimeViolation("give --kappa, or both --b and --p.")
    return BesselParams.from_bp(args.b, args.p, args.c)


def _spiral_params(args) -> SpiralParams:
    if args.alpha_deg is not None:
        return SpiralParams.from_degrees(args.alpha_deg, args.beta)
    return SpiralParams(alpha=args.alpha, beta=args.beta)


def _rtau_params(args) -> RtauParams | None:
    given = [v is not None for v in (args.A, args.B, args.tau)]
    if not any(given):
        return None
    if not all(given):
        raise SpiraCertError("--A, --B and --tau must be given together.")
    return RtauParams(A=args.A, B=args.B, tau=args.tau)


def _conditions(names: list[str] | None, rtau: RtauParams | None) -> list[ConditionId]:
    if not names:
        return [c for c in THEOREM_CONDITIONS if rtau is not None or c not in RTAU_CONDITIONS]
    return [ConditionId(name) for name in names]


def _target_for(condition: ConditionId, target: str | None) -> str | None:
    """--target only concerns the z u_p / z(2 - u_p) conditions."""
    if condition in (ConditionId.T1_HH, ConditionId.T2_Q, ConditionId.T3_GH, ConditionId.T4_66):
        return target
    return None


# --- 2. Subcommands ---

def cmd_eval(args) -> int:
    """Prints u_p(1), u_p'(1), u_p''(1) (and u_p(z) with --z) with their tail bounds."""
    if args.kind:
        if args.p is None:
            raise RegimeViolation("--kind needs --p.")
        p = BesselParams.classical(args.kind, args.p)
    else:
        if args.c is None:
            raise RegimeViolation("--c is required unless --kind is given.")
        p = _bessel_params(args)
    if not p.in_theorem_regime:
        message = f"c={p.c}, kappa={p.kappa} lies outside the theorem regime (c < 0, kappa > 0)."
        if not args.allow_degenerate:
            raise RegimeViolation(message + " Pass --allow-degenerate to evaluate anyway.")
        logger.warning(message)

    values = {
        "u": u_at_one(p, args.eps),
        "u_prime": u_prime_at_one(p, args.eps),
        "u_second": u_second_at_one(p, args.eps),
    }
    if args.z is not None:
        values["u_z"] = u_at(p, complex(args.z.replace(" ", "")), args.eps)

    if args.json:
        payload = {"params": p.echo()}
        for name, sv in values.items():
            payload[name] = sv.model_dump(mode="json")
        print(json.dumps(payload))
        return EXIT_OK
    print(f"params: {p.echo()}")
    for name, sv in values.items():
        print(f"{name:<10} {sv.value!r:<26} terms={sv.terms_used:<5} tail<={sv.tail_bound:.3e}")
    return EXIT_OK


def cmd_certify(args) -> int:
    """One JSON line per certificate; exit 1 when any requested condition fails."""
    p = _bessel_params(args)
    s = _spiral_params(args)
    r = _rtau_params(args)
    if args.corollary and s.beta != 0:
        raise SpiraCertError("--corollary fixes beta = 0; pass --beta 0.")
    if args.corollary:
        certs = corollary_certificates(p, s.alpha, r)
    else:
        certs = [certify(condition, p, s, r, _target_for(condition, args.target))
                 for condition in _conditions(args.cond, r)]

    failed = 0
    for cert in certs:
        print(cert.model_dump_json())
        if not cert.holds:
            failed += 1
    logger.info(f"{len(certs) - failed}/{len(certs)} conditions hold")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_scan(args) -> int:
    r = _rtau_params(args)
    c_steps = args.c_steps or args.steps
    kappa_steps = args.kappa_steps or args.steps
    spec = ScanSpec(
        c_range=tuple(args.c_range),
        kappa_range=tuple(args.kappa_range),
        c_steps=c_steps,
        kappa_steps=kappa_steps,
        alpha=args.alpha,
        beta=args.beta,
        conditions=tuple(ConditionId(name) for name in (args.cond or [ConditionId.T1_HH.value])),
        rtau=r,
        fmt=args.format,
    )
    text = format_scan(run_scan(spec, args.threads), spec.fmt)
    if args.out:
        with open(args.out, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        logger.info(f"Scan written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    """Runs the oracle suite, then diffs (or rewrites) the golden values."""
    reports = run_suite(args.tuples, args.seed, args.threads)

    if args.golden:
        current = canonical_records()
        if args.update_golden or not os.path.exists(args.golden):
            write_golden(args.golden, current)
            print(f"Golden values written to {args.golden}")
        else:
            reports.extend(diff_golden(current, load_golden(args.golden)))

    for report in reports:
        if args.all_reports or not report.verdict:
            print(report.model_dump_json())
    if args.report:
        with open(args.report, 'w', encoding='utf-8') as f:
            for report in reports:
                f.write(report.model_dump_json() + "\n")

    print_summary(reports)
    return EXIT_FAILED if any(not r.verdict for r in reports) else EXIT_OK


# --- 3. Parser ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spiracert",
        description="Generalized Bessel functions and uniformly spirallike class certificates.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="u_p(1) and its first two derivatives")
    p_eval.add_argument("--c", type=float)
    p_eval.add_argument("--kappa", type=float)
    p_eval.add_argument("--b", type=float)
    p_eval.add_argument("--p", type=float)
    p_eval.add_argument("--kind", choices=sorted(CLASSICAL_KINDS),
                        help="classical preset (fixes b and c; needs --p)")
    p_eval.add_argument("--z", type=str, help="also evaluate u_p(z), |z| <= 1")
    p_eval.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p_eval.add_argument("--allow-degenerate", action="store_true")
    p_eval.add_argument("--json", action="store_true")
    p_eval.set_defaults(func=cmd_eval)

    p_cert = sub.add_parser("certify", help="theorem condition certificates as JSON lines")
    _add_bessel_args(p_cert)
    _add_spiral_args(p_cert)
    _add_rtau_args(p_cert)
    p_cert.add_argument("--cond", action="append", choices=[c.value for c in THEOREM_CONDITIONS])
    p_cert.add_argument("--target", choices=["z_up", "z_two_minus_up"],
                        help="function the claim strength is read for")
    p_cert.add_argument("--corollary", action="store_true", help="beta = 0 corollary presets")
    p_cert.set_defaults(func=cmd_certify)

    p_scan = sub.add_parser("scan", help="(c, kappa) region map as CSV or JSON")
    p_scan.add_argument("--c-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p_scan.add_argument("--kappa-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p_scan.add_argument("--steps", type=int, default=11)
    p_scan.add_argument("--c-steps", type=int)
    p_scan.add_argument("--kappa-steps", type=int)
    p_scan.add_argument("--alpha", type=float, default=0.0)
    p_scan.add_argument("--beta", type=float, default=0.0)
    p_scan.add_argument("--cond", action="append", choices=[c.value for c in THEOREM_CONDITIONS])
    p_scan.add_argument("--format", choices=["csv", "json"], default="csv")
    p_scan.add_argument("--out")
    p_scan.add_argument("--threads", type=int)
    _add_rtau_args(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_verify = sub.add_parser("verify", help="randomized oracle suite and golden values")
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_verify.add_argument("--tuples", type=int, default=DEFAULT_TUPLES)
    p_verify.add_argument("--threads", type=int)
    p_verify.add_argument("--golden", help="golden-values JSON file; written on first use, diffed afterwards")
    p_verify.add_argument("--update-golden", action="store_true", help="rewrite an existing golden file")
    p_verify.add_argument("--report", help="write every report as JSON lines")
    p_verify.add_argument("--all-reports", action="store_true", help="print passing reports too")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    level = LOG_LEVEL
    if args.verbose == 1:
        level = "INFO"
    elif args.verbose > 1:
        level = "DEBUG"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args)
    except (SpiraCertError, ValueError, KeyError, OSError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
