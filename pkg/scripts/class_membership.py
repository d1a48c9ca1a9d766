import math
import enum
import logging
from typing import Any
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from scripts.config import CERT_TOL, SAMPLE_SLACK, ZERO_GUARD
from scripts.errors import InvalidSpiralParams, ZeroDenominator
from scripts.function_model import CoeffFunction, RtauParams, SignClass, zfprime

logger = logging.getLogger(__name__)

# --- Configuration ---

DEFAULT_RADII = 48
DEFAULT_ANGLES = 256
REFINE_DEPTH = 6


class ConditionId(str, enum.Enum):
    T1_HH = "T1_HH"
    T2_Q = "T2_Q"
    T3_GH = "T3_GH"
    T4_66 = "T4_66"
    T5_D3 = "T5_D3"
    T6_G_HH = "T6_G_HH"
    T7_D3EXP = "T7_D3EXP"
    T8_G_66 = "T8_G_66"
    LEMMA1_T1 = "LEMMA1_T1"
    LEMMA1_B1 = "LEMMA1_B1"
    GEOMETRIC = "GEOMETRIC"
    RTAU_GEOMETRIC = "RTAU_GEOMETRIC"


class Method(str, enum.Enum):
    CLOSED_FORM = "CLOSED_FORM"
    DIRECT_SUM = "DIRECT_SUM"
    SAMPLED = "SAMPLED"


class ClaimStrength(str, enum.Enum):
    SUFFICIENT = "SUFFICIENT"
    NECESSARY_AND_SUFFICIENT = "NECESSARY_AND_SUFFICIENT"
    PAPER_CLAIMS_IFF_SEE_NOTES = "PAPER_CLAIMS_IFF_SEE_NOTES"
    REFUTES_ONLY = "REFUTES_ONLY"


# --- 1. Domain Types ---

class SpiralParams(BaseModel):
    """Aperture alpha (radians) and order beta of SP_p(alpha, beta) / UCSP(alpha, beta)."""
    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float

    @model_validator(mode="after")
    def _check(self):
        if not abs(self.alpha) < math.pi / 2:
            raise InvalidSpiralParams(f"|alpha| must be < pi/2, got alpha={self.alpha}.")
        if not 0 <= self.beta < 1:
            raise InvalidSpiralParams(f"beta must lie in [0, 1), got beta={self.beta}.")
        return self

    @classmethod
    def from_degrees(cls, alpha_deg: float, beta: float) -> "SpiralParams":
        return cls(alpha=math.radians(alpha_deg), beta=beta)

    @property
    def cos_alpha(self) -> float:
        return math.cos(self.alpha)

    @property
    def rhs(self) -> float:
        """cos(alpha) - beta, the right-hand side of every coefficient condition."""
        return self.cos_alpha - self.beta


class DiskGrid(BaseModel):
    """Polar sample points r e^{i theta} with theta uniform in [0, 2 pi)."""
    model_config = ConfigDict(frozen=True)

    radii: tuple[float, ...]
    n_angles: int = Field(ge=1)

    @model_validator(mode="after")
    def _check(self):
        if not self.radii or not all(0 < r < 1 for r in self.radii):
            raise ValueError("radii must be non-empty and inside (0, 1)")
        return self

    @classmethod
    def default(cls) -> "DiskGrid":
        return cls.uniform(DEFAULT_RADII, 0.96, DEFAULT_ANGLES, refine=True)

    @classmethod
    def uniform(cls, n_radii: int, r_max: float, n_angles: int, refine: bool = False) -> "DiskGrid":
        radii = list(np.linspace(r_max / n_radii, r_max, n_radii))
        if refine:
            radii += radial_probe_radii()
        return cls(radii=tuple(sorted(set(float(r) for r in radii))), n_angles=n_angles)

    @classmethod
    def radial_probe(cls) -> "DiskGrid":
        return cls(radii=tuple(radial_probe_radii()), n_angles=1)

    def points(self) -> np.ndarray:
        theta = 2 * np.pi * np.arange(self.n_angles) / self.n_angles
        return (np.asarray(self.radii)[:, None] * np.exp(1j * theta)[None, :]).ravel()

    def echo(self) -> dict:
        return {"n_radii": len(self.radii), "r_max": max(self.radii), "n_angles": self.n_angles}


def radial_probe_radii(depth: int = REFINE_DEPTH) -> list[float]:
    return [1 - 10.0 ** (-k) for k in range(1, depth + 1)]


class Certificate(BaseModel):
    """One evaluated inequality lhs <= rhs; holds iff margin = rhs - lhs >= -tol."""
    model_config = ConfigDict(frozen=True)

    condition_id: ConditionId
    lhs: float
    rhs: float
    margin: float
    holds: bool
    method: Method
    claim_strength: ClaimStrength | None = None
    meta: dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check(self):
        if not (math.isfinite(self.lhs) and math.isfinite(self.rhs)):
            raise ValueError(f"{self.condition_id.value}: lhs and rhs must be finite")
        return self

    @classmethod
    def build(cls, condition_id: ConditionId, lhs: float, rhs: float, method: Method,
              tol: float = CERT_TOL, claim_strength: ClaimStrength | None = None,
              meta: dict | None = None) -> "Certificate":
        margin = rhs - lhs
        meta = dict(meta or {})
        meta["tol"] = tol
        return cls(
            condition_id=condition_id,
            lhs=lhs,
            rhs=rhs,
            margin=margin,
            holds=margin >= -tol,
            method=method,
            claim_strength=claim_strength,
            meta=meta,
        )

    def relabel(self, condition_id: ConditionId, claim_strength: ClaimStrength | None = None,
                **meta_updates) -> "Certificate":
        meta = {**self.meta, **meta_updates}
        return self.model_copy(update={
            "condition_id": condition_id,
            "claim_strength": claim_strength or self.claim_strength,
            "meta": meta,
        })


# --- 2. Coefficient criteria ---

ROTATED_APERTURE_NOTE = (
    "Necessity on T is only borne out for alpha = 0; for alpha != 0 a T-class function can "
    "fail the coefficient condition and still satisfy the sampled inequality on the disk."
)


def iff_strength(s: SpiralParams) -> ClaimStrength:
    """Strength of a necessary-and-sufficient claim on T at this aperture."""
    if s.alpha == 0:
        return ClaimStrength.NECESSARY_AND_SUFFICIENT
    return ClaimStrength.PAPER_CLAIMS_IFF_SEE_NOTES


def _coefficient_claim(f: CoeffFunction, s: SpiralParams) -> ClaimStrength:
    if f.sign_class is SignClass.T:
        return iff_strength(s)
    return ClaimStrength.SUFFICIENT


def check_sp_sufficient(f: CoeffFunction, s: SpiralParams,
                        condition_id: ConditionId = ConditionId.LEMMA1_T1) -> Certificate:
    """sum_{n=2}^N (2n - cos(alpha) - beta)|a_n| <= cos(alpha) - beta."""
    cos_a = s.cos_alpha
    lhs = 0.0
    for n, a in enumerate(f.magnitudes(), start=2):
        lhs += (2 * n - cos_a - s.beta) * a
    claim = _coefficient_claim(f, s)
    meta = {
        "params": {"alpha": s.alpha, "beta": s.beta},
        "cos_alpha": cos_a,
        "N": f.N,
        "sign_class": f.sign_class.value,
    }
    if claim is ClaimStrength.PAPER_CLAIMS_IFF_SEE_NOTES:
        meta["notes"] = ROTATED_APERTURE_NOTE
    return Certificate.build(
        condition_id,
        lhs=lhs,
        rhs=cos_a - s.beta,
        method=Method.DIRECT_SUM,
        claim_strength=claim,
        meta=meta,
    )


def check_ucsp_sufficient(f: CoeffFunction, s: SpiralParams) -> Certificate:
    """sum n(2n - cos(alpha) - beta)|a_n| <= cos(alpha) - beta, i.e. (t1) applied to z f'."""
    return check_sp_sufficient(zfprime(f), s, condition_id=ConditionId.LEMMA1_B1)


# --- 3. Sampling on the disk ---

def _guard_zero(values: np.ndarray, z: np.ndarray, what: str):
    small = np.abs(values) < ZERO_GUARD
    if small.any():
        point = complex(z[np.argmax(small)])
        raise ZeroDenominator(f"|{what}| < {ZERO_GUARD} at z={point}", point=point)


def spiral_functional(f: CoeffFunction, s: SpiralParams, z: np.ndarray,
                      modulus: str = "standard") -> np.ndarray:
    """
    m(z) = Re{e^{-i alpha} z f'(z)/f(z)} - |z f'(z)/f(z) - 1| - beta.

    modulus="printed" replaces the modulus term with |z f'(z)/f'(z) - 1|.
    """
    fz = f.evaluate(z)
    dfz = f.derivative(z)
    _guard_zero(fz, z, "f(z)")
    q = z * dfz / fz
    if modulus == "standard":
        mod = np.abs(q - 1)
    elif modulus == "printed":
        _guard_zero(dfz, z, "f'(z)")
        mod = np.abs(z * dfz / dfz - 1)
    else:
        raise ValueError(f"modulus must be 'standard' or 'printed', got {modulus!r}")
    return np.real(np.exp(-1j * s.alpha) * q) - mod - s.beta


def geometric_check(f: CoeffFunction, s: SpiralParams, grid: DiskGrid | None = None,
                    modulus: str = "standard") -> Certificate:
    """
    Samples the defining inequality of SP_p(alpha, beta) on the grid.
    A negative minimum refutes membership; a positive one only suggests it.
    """
    grid = grid or DiskGrid.default()
    z = grid.points()
    m = spiral_functional(f, s, z, modulus)
    worst = int(np.argmin(m))
    lowest = float(m[worst])
    logger.info(f"geometric_check: min m(z) = {lowest:.3e} at z = {complex(z[worst])}")
    return Certificate.build(
        ConditionId.GEOMETRIC,
        lhs=-lowest,
        rhs=0.0,
        method=Method.SAMPLED,
        tol=SAMPLE_SLACK,
        claim_strength=ClaimStrength.REFUTES_ONLY,
        meta={
            "params": {"alpha": s.alpha, "beta": s.beta},
            "cos_alpha": s.cos_alpha,
            "N": f.N,
            "grid": grid.echo(),
            "modulus": modulus,
            "worst_point": [float(z[worst].real), float(z[worst].imag)],
        },
    )


def check_rtau_membership(f: CoeffFunction, r: RtauParams, grid: DiskGrid | None = None) -> Certificate:
    """Samples |(f'(z) - 1) / ((A-B) tau - B [f'(z) - 1])| < 1 on the grid."""
    grid = grid or DiskGrid.default()
    z = grid.points()
    g = f.derivative(z) - 1
    denom = (r.A - r.B) * r.tau - r.B * g
    _guard_zero(denom, z, "(A-B) tau - B [f'(z) - 1]")
    ratio = np.abs(g / denom)
    worst = int(np.argmax(ratio))
    highest = float(ratio[worst])
    return Certificate.build(
        ConditionId.RTAU_GEOMETRIC,
        lhs=highest,
        rhs=1.0,
        method=Method.SAMPLED,
        tol=SAMPLE_SLACK,
        claim_strength=ClaimStrength.REFUTES_ONLY,
        meta={
            "params": r.echo(),
            "N": f.N,
            "grid": grid.echo(),
            "worst_point": [float(z[worst].real), float(z[worst].imag)],
        },
    )
