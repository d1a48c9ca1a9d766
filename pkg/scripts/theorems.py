import math
import logging

from scripts.bessel import BesselParams, u_at_one, u_prime_at_one, u_second_at_one
from scripts.class_membership import (
    ROTATED_APERTURE_NOTE, Certificate, ClaimStrength, ConditionId, Method, SpiralParams, iff_strength,
)
from scripts.config import DEFAULT_EPS
from scripts.errors import InvalidRtauParams
from scripts.function_model import RtauParams

logger = logging.getLogger(__name__)

SUFF = ClaimStrength.SUFFICIENT
IFF = ClaimStrength.NECESSARY_AND_SUFFICIENT
SEE_NOTES = ClaimStrength.PAPER_CLAIMS_IFF_SEE_NOTES

# Claim strength per target function: z_up = z u_p(z), z_two_minus_up = z(2 - u_p(z)),
# I_f = I(kappa, c) f with f in R^tau(A, B), G = int_0^z (2 - u_p(t)) dt.
TARGETS = {
    ConditionId.T1_HH: {"z_up": SUFF, "z_two_minus_up": IFF},
    ConditionId.T2_Q: {"z_up": SUFF, "z_two_minus_up": SEE_NOTES},
    ConditionId.T3_GH: {"z_up": SUFF, "z_two_minus_up": IFF},
    ConditionId.T4_66: {"z_up": SUFF, "z_two_minus_up": SEE_NOTES},
    ConditionId.T5_D3: {"I_f": SEE_NOTES},
    ConditionId.T6_G_HH: {"G": IFF},
    ConditionId.T7_D3EXP: {"I_f": SEE_NOTES},
    ConditionId.T8_G_66: {"G": SEE_NOTES},
}

NOTES = {
    ConditionId.T1_HH: "Stated as a sufficient condition for z u_p in SP_p although the preamble "
                       "calls it necessary; exact (iff) for z(2 - u_p) in SP_pT.",
    ConditionId.T2_Q: "Bounds the (hh) sum through (kappa)_(n-1) >= kappa^(n-1); only sufficient "
                      "even where an iff is claimed for z(2 - u_p).",
    ConditionId.T3_GH: "Exact (iff) for z(2 - u_p) in UCSPT; sufficient for z u_p in UCSP.",
    ConditionId.T4_66: "Exponential bound on the (gh) sum, evaluated as displayed (c^2/(8 kappa)); "
                       "only sufficient although an iff is claimed.",
    ConditionId.T5_D3: "Runs through |a_n| <= (A-B)|tau|/n cancelling the n in (b1); only sufficient "
                       "although an iff is claimed.",
    ConditionId.T6_G_HH: "For G the factor n in (b1) cancels against 1/n, leaving the (hh) sum "
                         "exactly; iff for G in UCSPT.",
    ConditionId.T7_D3EXP: "(A-B)|tau| times the (q) bound; only sufficient although an iff is claimed.",
    ConditionId.T8_G_66: "The (66) bound dominates the (hh) sum that decides G; only sufficient "
                         "although an iff is claimed.",
}


def _claim(condition_id: ConditionId, target: str | None, s: SpiralParams) -> ClaimStrength:
    targets = TARGETS[condition_id]
    if target is None:
        target = next(iter(targets))
    if target not in targets:
        raise ValueError(
            f"{condition_id.value} makes no claim about '{target}'; choose from {sorted(targets)}."
        )
    if targets[target] is IFF:
        return iff_strength(s)
    return targets[target]


def _notes(condition_id: ConditionId, s: SpiralParams) -> str:
    if s.alpha == 0:
        return NOTES[condition_id]
    return f"{NOTES[condition_id]} {ROTATED_APERTURE_NOTE}"


def _certificate(condition_id: ConditionId, lhs: float, p: BesselParams, s: SpiralParams,
                 target: str | None, extra: dict) -> Certificate:
    meta = {
        "params": {**p.echo(), "alpha": s.alpha, "beta": s.beta},
        "cos_alpha": s.cos_alpha,
        "targets": {k: v.value for k, v in TARGETS[condition_id].items()},
        "notes": _notes(condition_id, s),
        **extra,
    }
    return Certificate.build(
        condition_id,
        lhs=lhs,
        rhs=s.cos_alpha - s.beta,
        method=Method.CLOSED_FORM,
        claim_strength=_claim(condition_id, target, s),
        meta=meta,
    )


def _series_meta(**values) -> dict:
    return {
        "series": {name: {"value": v.value, "terms_used": v.terms_used, "tail_bound": v.tail_bound}
                   for name, v in values.items()}
    }


# --- 1. Conditions on the Bessel values at z = 1 ---

def thm1_lhs(p: BesselParams, s: SpiralParams, eps: float = DEFAULT_EPS):
    u = u_at_one(p, eps)
    u1 = u_prime_at_one(p, eps)
    lhs = 2 * u1.value + (2 - s.cos_alpha - s.beta) * (u.value - 1)
    return lhs, _series_meta(u=u, u_prime=u1)


def thm1_condition(p: BesselParams, s: SpiralParams, target: str | None = None,
                   eps: float = DEFAULT_EPS) -> Certificate:
    """(hh): 2 u_p'(1) + (2 - cos a - b)(u_p(1) - 1) <= cos a - b."""
    p.require_theorem_regime()
    lhs, extra = thm1_lhs(p, s, eps)
    return _certificate(ConditionId.T1_HH, lhs, p, s, target, extra)


def thm2_lhs(p: BesselParams, s: SpiralParams) -> float:
    c, kappa = p.c, p.kappa
    return math.exp(-c / (4 * kappa)) * (
        -c / (2 * kappa) + (2 - s.cos_alpha - s.beta) * (1 - math.exp(c / (4 * kappa)))
    )


def thm2_condition(p: BesselParams, s: SpiralParams, target: str | None = None) -> Certificate:
    """(q): e^(-c/4k) [-c/2k + (2 - cos a - b)(1 - e^(c/4k))] <= cos a - b."""
    p.require_theorem_regime()
    return _certificate(ConditionId.T2_Q, thm2_lhs(p, s), p, s, target, {})


def thm3_lhs(p: BesselParams, s: SpiralParams, eps: float = DEFAULT_EPS):
    u = u_at_one(p, eps)
    u1 = u_prime_at_one(p, eps)
    u2 = u_second_at_one(p, eps)
    lhs = (2 * u2.value + (6 - s.cos_alpha - s.beta) * u1.value
           + (2 - s.cos_alpha - s.beta) * (u.value - 1))
    return lhs, _series_meta(u=u, u_prime=u1, u_second=u2)


def thm3_condition(p: BesselParams, s: SpiralParams, target: str | None = None,
                   eps: float = DEFAULT_EPS) -> Certificate:
    """(gh): 2 u_p''(1) + (6 - cos a - b) u_p'(1) + (2 - cos a - b)(u_p(1) - 1) <= cos a - b."""
    p.require_theorem_regime()
    lhs, extra = thm3_lhs(p, s, eps)
    return _certificate(ConditionId.T3_GH, lhs, p, s, target, extra)


def thm4_lhs(p: BesselParams, s: SpiralParams) -> float:
    c, kappa = p.c, p.kappa
    return math.exp(-c / (4 * kappa)) * (
        c ** 2 / (8 * kappa)
        + (6 - s.cos_alpha - s.beta) * (-c / (4 * kappa))
        + (2 - s.cos_alpha - s.beta) * (1 - math.exp(c / (4 * kappa)))
    )


def thm4_condition(p: BesselParams, s: SpiralParams, target: str | None = None) -> Certificate:
    """(66): e^(-c/4k) [c^2/8k + (6 - cos a - b)(-c/4k) + (2 - cos a - b)(1 - e^(c/4k))] <= cos a - b."""
    p.require_theorem_regime()
    return _certificate(ConditionId.T4_66, thm4_lhs(p, s), p, s, target, {})


# --- 2. The operator I(kappa, c) on R^tau(A, B) ---

def thm5_lhs(p: BesselParams, s: SpiralParams, r: RtauParams, eps: float = DEFAULT_EPS):
    base, extra = thm1_lhs(p, s, eps)
    extra["base_lhs"] = base
    return r.scale * base, extra


def thm5_condition(p: BesselParams, s: SpiralParams, r: RtauParams,
                   eps: float = DEFAULT_EPS) -> Certificate:
    """(d3): (A-B)|tau| [2 u_p'(1) + (2 - cos a - b)(u_p(1) - 1)] <= cos a - b."""
    p.require_theorem_regime()
    lhs, extra = thm5_lhs(p, s, r, eps)
    extra.update({"rtau": r.echo(), "scale": r.scale, "bound": "|a_n| <= (A-B)|tau|/n"})
    return _certificate(ConditionId.T5_D3, lhs, p, s, None, extra)


def thm7_lhs(p: BesselParams, s: SpiralParams, r: RtauParams) -> float:
    return r.scale * thm2_lhs(p, s)


def thm7_condition(p: BesselParams, s: SpiralParams, r: RtauParams) -> Certificate:
    """(A-B)|tau| e^(-c/4k) [-c/2k + (2 - cos a - b)(1 - e^(c/4k))] <= cos a - b."""
    p.require_theorem_regime()
    extra = {"rtau": r.echo(), "scale": r.scale, "base_lhs": thm2_lhs(p, s)}
    return _certificate(ConditionId.T7_D3EXP, thm7_lhs(p, s, r), p, s, None, extra)


# --- 3. The integral operator G ---

def thmG_conditions(p: BesselParams, s: SpiralParams,
                    eps: float = DEFAULT_EPS) -> tuple[Certificate, Certificate]:
    """The (hh) and (66) certificates read as statements about G in UCSPT."""
    hh = thm1_condition(p, s, eps=eps)
    e66 = thm4_condition(p, s)
    return (
        hh.relabel(ConditionId.T6_G_HH, iff_strength(s), targets={"G": IFF.value},
                   notes=_notes(ConditionId.T6_G_HH, s), source=ConditionId.T1_HH.value),
        e66.relabel(ConditionId.T8_G_66, SEE_NOTES, targets={"G": SEE_NOTES.value},
                    notes=_notes(ConditionId.T8_G_66, s), source=ConditionId.T4_66.value),
    )


# --- 4. Dispatch ---

THEOREM_CONDITIONS = [
    ConditionId.T1_HH, ConditionId.T2_Q, ConditionId.T3_GH, ConditionId.T4_66,
    ConditionId.T5_D3, ConditionId.T6_G_HH, ConditionId.T7_D3EXP, ConditionId.T8_G_66,
]
RTAU_CONDITIONS = {ConditionId.T5_D3, ConditionId.T7_D3EXP}


def certify(condition_id: ConditionId | str, p: BesselParams, s: SpiralParams,
            r: RtauParams | None = None, target: str | None = None) -> Certificate:
    """Evaluates one theorem condition by id."""
    condition_id = ConditionId(condition_id)
    if condition_id in RTAU_CONDITIONS and r is None:
        raise InvalidRtauParams(f"{condition_id.value} needs R^tau(A, B) parameters (A, B, tau).")
    if condition_id is ConditionId.T1_HH:
        return thm1_condition(p, s, target)
    if condition_id is ConditionId.T2_Q:
        return thm2_condition(p, s, target)
    if condition_id is ConditionId.T3_GH:
        return thm3_condition(p, s, target)
    if condition_id is ConditionId.T4_66:
        return thm4_condition(p, s, target)
    if condition_id is ConditionId.T5_D3:
        return thm5_condition(p, s, r)
    if condition_id is ConditionId.T7_D3EXP:
        return thm7_condition(p, s, r)
    if condition_id is ConditionId.T6_G_HH:
        return thmG_conditions(p, s)[0]
    if condition_id is ConditionId.T8_G_66:
        return thmG_conditions(p, s)[1]
    raise ValueError(f"{condition_id.value} is not a theorem condition.")


def corollary_certificates(p: BesselParams, alpha: float,
                           r: RtauParams | None = None) -> list[Certificate]:
    """The beta = 0 corollaries: the same certifiers with beta fixed to 0."""
    s = SpiralParams(alpha=alpha, beta=0.0)
    conditions = [c for c in THEOREM_CONDITIONS if r is not None or c not in RTAU_CONDITIONS]
    return [certify(c, p, s, r) for c in conditions]
