import logging
from typing import Any, Callable
import mpmath
from pydantic import BaseModel, ConfigDict, Field, model_validator

from scripts.bessel import BesselParams, u_derivative_at
from scripts.class_membership import (
    ConditionId, DiskGrid, SpiralParams, check_sp_sufficient, geometric_check,
)
from scripts.config import (
    DEFAULT_EPS, DERIVATIVE_REL_TOL, MAX_TERMS, ORACLE_REL_TOL, REFUTE_MARGIN,
)
from scripts.errors import RegimeViolation, SeriesNotConverged, SignViolation, ZeroDenominator
from scripts.function_model import CoeffFunction, RtauParams, SignClass

logger = logging.getLogger(__name__)

# --- Configuration ---

MP_DPS = 50


class OracleReport(BaseModel):
    """
    One brute-force comparison. rel_diff is abs_diff / (1 + |closed_form|).
    For comparisons verdict <=> rel_diff <= tolerance; refutation reports
    carry tolerance=None and verdict = "a violation was found".
    """
    model_config = ConfigDict(frozen=True)

    target_id: str
    closed_form: float
    brute_force: float
    abs_diff: float
    rel_diff: float
    N_used: int
    verdict: bool
    tolerance: float | None = None
    escalated: bool = False
    params: dict[str, Any] = Field(default_factory=dict)
    detail: str = ""

    @model_validator(mode="after")
    def _check(self):
        for name in ("closed_form", "brute_force", "abs_diff", "rel_diff"):
            value = getattr(self, name)
            if value != value or value in (float("inf"), float("-inf")):
                raise ValueError(f"{self.target_id}: {name} is not finite")
        return self


# --- 1. Compensated summation ---

class CompensatedSum:
    """
    Running sum with an error-free two-sum carry: total + carry tracks the
    exact sum of the added binary64 values far better than repeated +=.
    """

    def __init__(self):
        self.total = 0.0
        self.carry = 0.0

    def add(self, value: float):
        s = self.total + value
        # two-sum: s + err == total + value exactly
        value_part = s - self.total
        total_part = s - value_part
        self.carry += (self.total - total_part) + (value - value_part)
        self.total = s

    @property
    def value(self) -> float:
        return self.total + self.carry


def weighted_series(y: float, kappa: float, weight: Callable[[int], float], start: int,
                    eps: float = DEFAULT_EPS):
    """
    sum_{k >= start} weight(k) y^k / ((kappa)_k k!), summed in ascending k.

    The tail after index k is bounded by |t_k| r/(1-r) with
    r = weight(k+1)/weight(k) * |y| / ((kappa+k)(k+1)); valid once kappa+k > 0
    for weights whose consecutive ratio does not increase.
    Returns (value, terms_used, tail_bound).
    """
    base = 1.0
    for k in range(start):
        base *= y / ((kappa + k) * (k + 1))
    acc = CompensatedSum()
    k = start
    for used in range(1, MAX_TERMS + 1):
        term = weight(k) * base
        acc.add(term)
        denom = (kappa + k) * (k + 1)
        r = weight(k + 1) / weight(k) * abs(y) / abs(denom)
        if kappa + k > 0 and r < 1:
            tail = abs(term) * r / (1 - r)
            if tail <= eps:
                return acc.value, used, tail
        base *= y / denom
        k += 1
    raise SeriesNotConverged(f"direct sum did not converge within {MAX_TERMS} terms")


def weighted_series_mp(y: float, kappa: float, weight: Callable[[int], Any], start: int,
                       dps: int = MP_DPS):
    """The same series at dps significant digits with mpmath."""
    with mpmath.workdps(dps):
        y_mp, kappa_mp = mpmath.mpf(y), mpmath.mpf(kappa)
        base = mpmath.mpf(1)
        for k in range(start):
            base *= y_mp / ((kappa_mp + k) * (k + 1))
        total = mpmath.mpf(0)
        threshold = mpmath.mpf(10) ** (-dps)
        k = start
        for _ in range(MAX_TERMS):
            term = weight(k) * base
            total += term
            if k > abs(kappa_mp) + abs(y_mp) and abs(term) < threshold * (1 + abs(total)):
                return total
            base *= y_mp / ((kappa_mp + k) * (k + 1))
            k += 1
    raise SeriesNotConverged(f"mpmath direct sum did not converge within {MAX_TERMS} terms")


def _require_regime(p: BesselParams):
    if not p.in_theorem_regime:
        raise RegimeViolation(
            f"Oracle sums need c < 0 and kappa > 0 (got c={p.c}, kappa={p.kappa})."
        )


# Index shift k = n - 1: the (t1) summand of z u_p is (2k + 2 - gamma) y^k/((kappa)_k k!).
def _sp_weight(gamma):
    return lambda k: 2 * k + 2 - gamma


def _ucsp_weight(gamma):
    return lambda k: (k + 1) * (2 * k + 2 - gamma)


# --- 2. Direct sums of the coefficient conditions ---

def direct_sum_sp_detail(p: BesselParams, s: SpiralParams, eps: float = DEFAULT_EPS):
    _require_regime(p)
    return weighted_series(p.y, p.kappa, _sp_weight(s.cos_alpha + s.beta), 1, eps)


def direct_sum_sp(p: BesselParams, s: SpiralParams, eps: float = DEFAULT_EPS) -> float:
    """sum_{n>=2} (2n - cos a - b) (-c/4)^(n-1) / ((kappa)_(n-1) (n-1)!)."""
    return direct_sum_sp_detail(p, s, eps)[0]


def direct_sum_ucsp_detail(p: BesselParams, s: SpiralParams, eps: float = DEFAULT_EPS):
    _require_regime(p)
    return weighted_series(p.y, p.kappa, _ucsp_weight(s.cos_alpha + s.beta), 1, eps)


def direct_sum_ucsp(p: BesselParams, s: SpiralParams, eps: float = DEFAULT_EPS) -> float:
    """sum_{n>=2} n (2n - cos a - b) (-c/4)^(n-1) / ((kappa)_(n-1) (n-1)!)."""
    return direct_sum_ucsp_detail(p, s, eps)[0]


def direct_sum_mp(p: BesselParams, s: SpiralParams, ucsp: bool = False, dps: int = MP_DPS):
    with mpmath.workdps(dps):
        gamma = mpmath.cos(mpmath.mpf(s.alpha)) + mpmath.mpf(s.beta)
    weight = _ucsp_weight(gamma) if ucsp else _sp_weight(gamma)
    return weighted_series_mp(p.y, p.kappa, weight, 1, dps)


# --- 3. Extended-precision closed forms ---

def bessel_values_mp(p: BesselParams, dps: int = MP_DPS):
    """u_p(1), u_p'(1), u_p''(1) through 0F1(; kappa; -c/4)."""
    with mpmath.workdps(dps):
        y, kappa = mpmath.mpf(p.y), mpmath.mpf(p.kappa)
        u = mpmath.hyp0f1(kappa, y)
        u1 = y / kappa * mpmath.hyp0f1(kappa + 1, y)
        u2 = y ** 2 / (kappa * (kappa + 1)) * mpmath.hyp0f1(kappa + 2, y)
    return u, u1, u2


def closed_form_mp(condition_id: ConditionId | str, p: BesselParams, s: SpiralParams,
                   r: RtauParams | None = None, dps: int = MP_DPS):
    """The left-hand side of a theorem condition re-evaluated with mpmath."""
    condition_id = ConditionId(condition_id)
    u, u1, u2 = bessel_values_mp(p, dps)
    with mpmath.workdps(dps):
        c, kappa = mpmath.mpf(p.c), mpmath.mpf(p.kappa)
        gamma = mpmath.cos(mpmath.mpf(s.alpha)) + mpmath.mpf(s.beta)
        scale = (mpmath.mpf(r.A) - mpmath.mpf(r.B)) * abs(mpmath.mpc(r.tau)) if r else None
        hh = 2 * u1 + (2 - gamma) * (u - 1)
        q = mpmath.exp(-c / (4 * kappa)) * (-c / (2 * kappa) + (2 - gamma) * (1 - mpmath.exp(c / (4 * kappa))))
        gh = 2 * u2 + (6 - gamma) * u1 + (2 - gamma) * (u - 1)
        e66 = mpmath.exp(-c / (4 * kappa)) * (
            c ** 2 / (8 * kappa) + (6 - gamma) * (-c / (4 * kappa))
            + (2 - gamma) * (1 - mpmath.exp(c / (4 * kappa)))
        )
        values = {
            ConditionId.T1_HH: hh,
            ConditionId.T6_G_HH: hh,
            ConditionId.T2_Q: q,
            ConditionId.T3_GH: gh,
            ConditionId.T4_66: e66,
            ConditionId.T8_G_66: e66,
        }
        if scale is not None:
            values[ConditionId.T5_D3] = scale * hh
            values[ConditionId.T7_D3EXP] = scale * q
    if condition_id not in values:
        raise ValueError(f"No extended-precision form for {condition_id.value} with these arguments.")
    return values[condition_id]


# --- 4. Reports ---

def compare(target_id: str, closed_form: float, brute_force: float, N_used: int,
            tolerance: float = ORACLE_REL_TOL, params: dict | None = None,
            escalate: Callable[[], Any] | None = None) -> OracleReport:
    """
    Builds a comparison report; when the binary64 brute force misses the
    tolerance and an extended-precision route is given, the brute-force side
    is recomputed with it.
    """
    abs_diff = abs(closed_form - brute_force)
    rel_diff = abs_diff / (1 + abs(closed_form))
    escalated = False
    if rel_diff > tolerance and escalate is not None:
        logger.warning(f"{target_id}: rel_diff={rel_diff:.3e} > {tolerance:.1e}, escalating to mpmath")
        brute_force = float(escalate())
        abs_diff = abs(closed_form - brute_force)
        rel_diff = abs_diff / (1 + abs(closed_form))
        escalated = True
    return OracleReport(
        target_id=target_id,
        closed_form=closed_form,
        brute_force=brute_force,
        abs_diff=abs_diff,
        rel_diff=rel_diff,
        N_used=N_used,
        verdict=rel_diff <= tolerance,
        tolerance=tolerance,
        escalated=escalated,
        params=params or {},
    )


def derivative_dual_route(p: BesselParams, order: int, eps: float = DEFAULT_EPS) -> OracleReport:
    """
    u_p^(order)(1) by the shift recursion against the term-wise differentiated
    series sum_k k(k-1)..(k-order+1) y^k / ((kappa)_k k!).
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    # c = 0 is admitted here: both routes are then identically zero.
    if not (p.c <= 0 and p.kappa > 0):
        raise RegimeViolation(f"Need c <= 0 and kappa > 0 (got c={p.c}, kappa={p.kappa}).")
    recursion = u_derivative_at(p, order, 1.0, eps)
    if order == 1:
        direct, used, _ = weighted_series(p.y, p.kappa, lambda k: k, 1, eps)
        falling = lambda k: k
    else:
        direct, used, _ = weighted_series(p.y, p.kappa, lambda k: k * (k - 1), 2, eps)
        falling = lambda k: k * (k - 1)
    return compare(
        f"LEMMA3_ORDER{order}",
        closed_form=recursion.value,
        brute_force=direct,
        N_used=max(used, recursion.terms_used),
        tolerance=DERIVATIVE_REL_TOL,
        params=p.echo(),
        escalate=lambda: weighted_series_mp(p.y, p.kappa, falling, order),
    )


def _sample_rings(f: CoeffFunction, s: SpiralParams, grid: DiskGrid):
    """
    geometric_check one radius at a time, stopping at the first ring with a
    violation. Rings that pass through a zero of f are skipped.
    Returns the lowest-margin certificate seen, or None if every ring was skipped.
    """
    worst = None
    for radius in grid.radii:
        try:
            cert = geometric_check(f, s, DiskGrid(radii=(radius,), n_angles=grid.n_angles))
        except ZeroDenominator as e:
            logger.debug(f"refute_on_disk: skipping r={radius}: {e}")
            continue
        if worst is None or cert.margin < worst.margin:
            worst = cert
        if not cert.holds:
            break
    return worst


def refute_on_disk(f: CoeffFunction, s: SpiralParams) -> OracleReport:
    """
    Looks for a point of the disk where the SP_p(alpha, beta) inequality fails.

    When (t1) fails by more than REFUTE_MARGIN the radii 1 - 10^-k are probed
    along the positive axis first. The full default grid is sampled whenever
    that finds nothing (a zero of f inside the disk hides the violation from
    the axis). Finding nothing is inconclusive.
    """
    if f.sign_class is not SignClass.T:
        raise SignViolation("refute_on_disk probes T-class functions only.")
    t1 = check_sp_sufficient(f, s)
    found, searched = None, []
    if t1.margin < -REFUTE_MARGIN:
        searched.append("radial probe")
        found = _sample_rings(f, s, DiskGrid.radial_probe())
    if found is None or found.holds:
        searched.append("default grid")
        on_grid = _sample_rings(f, s, DiskGrid.default())
        if on_grid is not None and (found is None or on_grid.margin < found.margin):
            found = on_grid
    searched = " and ".join(searched)
    refuted = found is not None and not found.holds
    if refuted:
        detail = f"violation at z={found.meta['worst_point']} ({searched})"
    else:
        detail = f"no violation found on the {searched}: inconclusive"
    logger.info(f"refute_on_disk: t1 margin={t1.margin:.3e}, {detail}")
    sampled = found.margin if found is not None else 0.0
    abs_diff = abs(t1.margin - sampled)
    return OracleReport(
        target_id="REFUTE_T1",
        closed_form=t1.margin,
        brute_force=sampled,
        abs_diff=abs_diff,
        rel_diff=abs_diff / (1 + abs(t1.margin)),
        N_used=f.N,
        verdict=refuted,
        tolerance=None,
        params={"alpha": s.alpha, "beta": s.beta},
        detail=detail,
    )
