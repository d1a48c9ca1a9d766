import math
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
import numpy as np

from scripts.bessel import BesselParams
from scripts.class_membership import SpiralParams, check_ucsp_sufficient
from scripts.config import (
    CERT_TOL, CHUNK_SIZE, DEFAULT_SEED, DEFAULT_TUPLES, DOMINATION_SLACK, resolve_threads,
)
from scripts.function_model import RtauParams, integral_G_coeffs
from scripts.oracle import (
    OracleReport, compare, derivative_dual_route, direct_sum_mp,
    direct_sum_sp_detail, direct_sum_ucsp_detail,
)
from scripts.theorems import thm1_lhs, thm2_lhs, thm3_lhs, thm4_lhs

logger = logging.getLogger(__name__)

# --- Configuration ---

C_RANGE = (-8.0, -0.01)
KAPPA_RANGE = (0.1, 10.0)
ALPHA_LIMIT = math.pi / 2 - 0.01
BETA_RANGE = (0.0, 0.99)
DERIVATIVE_TUPLES = 1_000
G_CROSSCHECK_TUPLES = 50
KNIFE_EDGE = 1e-6


def draw_tuples(rng: np.random.Generator, size: int) -> list[tuple]:
    """
    (c, kappa, alpha, beta, A, B, tau) tuples with cos(alpha) > beta,
    by rejection in a fixed draw order.
    """
    tuples = []
    while len(tuples) < size:
        need = size - len(tuples)
        c = rng.uniform(*C_RANGE, 2 * need)
        kappa = rng.uniform(*KAPPA_RANGE, 2 * need)
        alpha = rng.uniform(-ALPHA_LIMIT, ALPHA_LIMIT, 2 * need)
        beta = rng.uniform(*BETA_RANGE, 2 * need)
        B = rng.uniform(-1.0, 1.0, 2 * need)
        A = B + (1.0 - B) * rng.uniform(0.0, 1.0, 2 * need)
        tau = rng.uniform(0.1, 2.0, 2 * need) * np.exp(1j * rng.uniform(0.0, 2 * np.pi, 2 * need))
        for i in range(2 * need):
            if np.cos(alpha[i]) > beta[i] and A[i] > B[i]:
                tuples.append((float(c[i]), float(kappa[i]), float(alpha[i]), float(beta[i]),
                               float(A[i]), float(B[i]), complex(tau[i])))
                if len(tuples) == size:
                    break
    return tuples


def _holds(lhs: float, rhs: float) -> bool:
    return rhs - lhs >= -CERT_TOL


def _domination(target_id: str, upper: float, lower: float, params: dict) -> OracleReport:
    gap = upper - lower
    return OracleReport(
        target_id=target_id, closed_form=upper, brute_force=lower,
        abs_diff=abs(gap), rel_diff=abs(gap) / (1 + abs(upper)), N_used=0,
        verdict=gap >= -DOMINATION_SLACK, tolerance=DOMINATION_SLACK, params=params,
    )


def _implication(target_id: str, premise: bool, conclusion: bool, params: dict) -> OracleReport:
    return OracleReport(
        target_id=target_id, closed_form=float(premise), brute_force=float(conclusion),
        abs_diff=0.0, rel_diff=0.0, N_used=0, verdict=(not premise) or conclusion,
        params=params, detail=f"premise={premise}, conclusion={conclusion}",
    )


def check_tuple(index: int, tup: tuple) -> list[OracleReport]:
    """Every oracle check for one random parameter tuple."""
    c, kappa, alpha, beta, A, B, tau = tup
    p = BesselParams(c=c, kappa=kappa)
    s = SpiralParams(alpha=alpha, beta=beta)
    r = RtauParams(A=A, B=B, tau=tau)
    params = {"c": c, "kappa": kappa, "alpha": alpha, "beta": beta}
    rhs = s.cos_alpha - s.beta

    hh, _ = thm1_lhs(p, s)
    gh, _ = thm3_lhs(p, s)
    q = thm2_lhs(p, s)
    e66 = thm4_lhs(p, s)
    sp, sp_used, _ = direct_sum_sp_detail(p, s)
    ucsp, ucsp_used, _ = direct_sum_ucsp_detail(p, s)

    reports = [
        compare("IDENTITY_T1_HH", hh, sp, sp_used, params=params,
                escalate=lambda: direct_sum_mp(p, s)),
        compare("IDENTITY_T3_GH", gh, ucsp, ucsp_used, params=params,
                escalate=lambda: direct_sum_mp(p, s, ucsp=True)),
        _domination("DOMINATION_T2_OVER_T1", q, hh, params),
        _domination("DOMINATION_T4_OVER_T3", e66, gh, params),
        _implication("IMPLIES_T2_T1", _holds(q, rhs), _holds(hh, rhs), params),
        _implication("IMPLIES_T4_T3", _holds(e66, rhs), _holds(gh, rhs), params),
        _implication("IMPLIES_T7_T5", _holds(r.scale * q, rhs), _holds(r.scale * hh, rhs),
                     {**params, "rtau": r.echo()}),
    ]
    if index < DERIVATIVE_TUPLES:
        reports.append(derivative_dual_route(p, 1))
        reports.append(derivative_dual_route(p, 2))
    if index < G_CROSSCHECK_TUPLES and abs(rhs - hh) >= KNIFE_EDGE:
        g_cert = check_ucsp_sufficient(integral_G_coeffs(p), s)
        reports.append(OracleReport(
            target_id="G_VERDICT_T6", closed_form=hh, brute_force=g_cert.lhs,
            abs_diff=abs(hh - g_cert.lhs), rel_diff=abs(hh - g_cert.lhs) / (1 + abs(hh)),
            N_used=g_cert.meta["N"], verdict=_holds(hh, rhs) == g_cert.holds, params=params,
        ))
    return reports


def run_suite(n_tuples: int = DEFAULT_TUPLES, seed: int = DEFAULT_SEED,
              threads: int | None = None) -> list[OracleReport]:
    """
    Runs the randomized oracle suite. Tuples are drawn per fixed-size chunk
    from SeedSequence(seed).spawn(...), so reports do not depend on threads.
    """
    if n_tuples <= 0:
        return []
    n_chunks = math.ceil(n_tuples / CHUNK_SIZE)
    children = np.random.SeedSequence(seed).spawn(n_chunks)

    def run_chunk(chunk: int) -> list[OracleReport]:
        size = min(CHUNK_SIZE, n_tuples - chunk * CHUNK_SIZE)
        rng = np.random.default_rng(children[chunk])
        reports = []
        for j, tup in enumerate(draw_tuples(rng, size)):
            reports.extend(check_tuple(chunk * CHUNK_SIZE + j, tup))
        return reports

    workers = resolve_threads(threads)
    print(f"--- Running oracle suite: {n_tuples} tuples, seed {seed}, {workers} thread(s) ---")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        chunks = list(executor.map(run_chunk, range(n_chunks)))
    return [report for chunk in chunks for report in chunk]


def summarize(reports: list[OracleReport]) -> dict[str, tuple[int, int]]:
    """target_id -> (passed, failed), in first-seen order."""
    passed, failed = Counter(), Counter()
    order = []
    for report in reports:
        if report.target_id not in passed and report.target_id not in failed:
            order.append(report.target_id)
        (passed if report.verdict else failed)[report.target_id] += 1
    return {t: (passed[t], failed[t]) for t in order}


def print_summary(reports: list[OracleReport]):
    summary = summarize(reports)
    print("\n" + "=" * 30)
    print("--- ORACLE SUITE COMPLETE ---")
    for target_id, (ok, bad) in summary.items():
        print(f"{target_id:<24} pass={ok:<6} fail={bad}")
    total_failed = sum(bad for _, bad in summary.values())
    print(f"Total reports: {len(reports)}, failures: {total_failed}")
    print("=" * 30)
