import math
import logging
from pydantic import BaseModel, ConfigDict, model_validator

from scripts.config import DEFAULT_EPS, MAX_TERMS
from scripts.errors import NonAdmissibleKappa, RegimeViolation, SeriesNotConverged

logger = logging.getLogger(__name__)

# --- Configuration ---

# (b, c) choices under which u_p reduces to a classical kernel.
CLASSICAL_KINDS = {
    "bessel": (1.0, 1.0),
    "modified": (1.0, -1.0),
    "spherical": (2.0, 1.0),
}


def is_admissible(kappa: float) -> bool:
    """kappa must avoid the poles 0, -1, -2, ... of the Pochhammer denominator."""
    return math.isfinite(kappa) and not (kappa <= 0 and float(kappa).is_integer())


# --- 1. Domain Types ---

class BesselParams(BaseModel):
    """
    Real parameters of the normalized Bessel series
    u_p(z) = sum (-c/4)^n / ((kappa)_n n!) z^n, with kappa = p + (b+1)/2.
    """
    model_config = ConfigDict(frozen=True)

    c: float
    kappa: float
    b: float | None = None
    p: float | None = None

    @model_validator(mode="after")
    def _check_admissible(self):
        if not is_admissible(self.kappa):
            raise NonAdmissibleKappa(f"kappa={self.kappa} is a non-positive integer (or not finite).")
        if not math.isfinite(self.c):
            raise RegimeViolation(f"c={self.c} is not finite.")
        if (self.b is None) != (self.p is None):
            raise NonAdmissibleKappa("b and p must be given together.")
        if self.b is not None and not math.isclose(self.kappa, self.p + (self.b + 1) / 2,
                                                   rel_tol=1e-12, abs_tol=1e-12):
            raise NonAdmissibleKappa(
                f"kappa={self.kappa} does not equal p + (b+1)/2 = {self.p + (self.b + 1) / 2}."
            )
        return self

    @classmethod
    def from_bp(cls, b: float, p: float, c: float) -> "BesselParams":
        return cls(c=c, kappa=p + (b + 1) / 2, b=b, p=p)

    @classmethod
    def classical(cls, kind: str, p: float) -> "BesselParams":
        if kind not in CLASSICAL_KINDS:
            raise KeyError(f"Unknown kind '{kind}'. Choose from {sorted(CLASSICAL_KINDS)}.")
        b, c = CLASSICAL_KINDS[kind]
        return cls.from_bp(b, p, c)

    @property
    def y(self) -> float:
        """The series base -c/4 (never -0.0)."""
        return 0.0 - self.c / 4

    @property
    def in_theorem_regime(self) -> bool:
        return self.c < 0 and self.kappa > 0

    def require_theorem_regime(self) -> "BesselParams":
        if not self.in_theorem_regime:
            raise RegimeViolation(
                f"Theorems need c < 0 and kappa > 0 (got c={self.c}, kappa={self.kappa})."
            )
        return self

    def shifted(self, k: int) -> "BesselParams":
        """Parameters of u_{p+k}: kappa moves to kappa + k."""
        if self.b is None:
            return BesselParams(c=self.c, kappa=self.kappa + k)
        return BesselParams(c=self.c, kappa=self.kappa + k, b=self.b, p=self.p + k)

    def echo(self) -> dict:
        return self.model_dump(exclude_none=True)


class SeriesValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float | complex
    terms_used: int
    tail_bound: float

    @model_validator(mode="after")
    def _check(self):
        if self.terms_used < 1:
            raise ValueError("terms_used must be >= 1")
        if not self.tail_bound >= 0:
            raise ValueError("tail_bound must be >= 0")
        return self


# --- 2. Elementary Pieces ---

def pochhammer(a: float, n: int) -> float:
    """
    Rising factorial (a)_n = a(a+1)...(a+n-1), (a)_0 = 1, as a running
    product (no Gamma ratios, so no poles).
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    result = 1.0
    for k in range(n):
        result *= a + k
    return result


def _sum_series(y: float, kappa: float, z: complex | float, eps: float):
    """
    Sums sum_n (y z)^n / ((kappa)_n n!) with the ratio test
    t_{n+1}/t_n = y z / ((kappa+n)(n+1)).

    Stops at index n once kappa+n > 0 (ratios decrease from there on),
    r = |t_{n+1}/t_n| < 1, the geometric tail |t_n| r/(1-r) <= eps/2 and
    |t_n| <= eps/2 (or the tail is identically zero).
    """
    w = y * z
    term = 1.0 if isinstance(w, float) else complex(1.0)
    total = term
    for n in range(MAX_TERMS):
        denom = (kappa + n) * (n + 1)
        ratio = abs(w) / abs(denom)
        if kappa + n > 0 and ratio < 1:
            tail = abs(term) * ratio / (1 - ratio)
            if tail <= eps / 2 and (abs(term) <= eps / 2 or ratio == 0.0):
                return total, n + 1, tail
        term = term * w / denom
        total += term
    raise SeriesNotConverged(
        f"u_p series did not converge within {MAX_TERMS} terms (c={-4 * y}, kappa={kappa}, z={z})."
    )


# --- 3. Evaluations ---

def u_at(params: BesselParams, z: complex | float = 1.0, eps: float = DEFAULT_EPS) -> SeriesValue:
    """u_p(z) for |z| <= 1, truncated so that the reported tail bound is <= eps."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if abs(z) > 1:
        raise ValueError(f"|z| must be <= 1, got |z|={abs(z)}")
    if isinstance(z, int):
        z = float(z)
    value, terms, tail = _sum_series(params.y, params.kappa, z, eps)
    return SeriesValue(value=value, terms_used=terms, tail_bound=tail)


def u_derivative_at(params: BesselParams, order: int, z: complex | float = 1.0,
                    eps: float = DEFAULT_EPS) -> SeriesValue:
    """
    k-th derivative through the shift recursion
    u_p^(k)(z) = (-c/4)^k / (kappa)_k * u_{p+k}(z).
    """
    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    prefactor = params.y ** order / pochhammer(params.kappa, order)
    inner = u_at(params.shifted(order), z, eps)
    return SeriesValue(
        value=prefactor * inner.value,
        terms_used=inner.terms_used,
        tail_bound=abs(prefactor) * inner.tail_bound,
    )


def u_at_one(params: BesselParams, eps: float = DEFAULT_EPS) -> SeriesValue:
    return u_at(params, 1.0, eps)


def u_prime_at_one(params: BesselParams, eps: float = DEFAULT_EPS) -> SeriesValue:
    return u_derivative_at(params, 1, 1.0, eps)


def u_second_at_one(params: BesselParams, eps: float = DEFAULT_EPS) -> SeriesValue:
    return u_derivative_at(params, 2, 1.0, eps)


def u_coefficients(params: BesselParams, N: int) -> list[float]:
    """
    Coefficients a_2..a_N of z u_p(z), a_n = (-c/4)^(n-1) / ((kappa)_(n-1) (n-1)!),
    built by the running product a_(n+1) = a_n * y / ((kappa+n-1) n).
    """
    coeffs = []
    coeff = 1.0
    y, kappa = params.y, params.kappa
    for n in range(1, N):
        coeff = coeff * y / ((kappa + n - 1) * n)
        coeffs.append(coeff)
    return coeffs


def u_coefficient(params: BesselParams, n: int) -> float:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return u_coefficients(params, n)[-1]
