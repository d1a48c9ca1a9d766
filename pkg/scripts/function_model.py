import json
import enum
import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from scripts.bessel import BesselParams, u_coefficients
from scripts.config import DEFAULT_ORDER
from scripts.errors import InvalidRtauParams, SignViolation


class SignClass(str, enum.Enum):
    GENERAL = "GENERAL"
    T = "T"


# --- 1. Domain Types ---

class CoeffFunction(BaseModel):
    """
    A normalized analytic function z + sum_{n=2}^N a_n z^n, stored as a_2..a_N.

    For sign_class T the stored numbers are the magnitudes |a_n| and the
    function is z - sum |a_n| z^n; the sign is applied only on evaluation.
    """
    model_config = ConfigDict(frozen=True)

    coeffs: tuple[float | complex, ...] = ()
    sign_class: SignClass = SignClass.GENERAL

    @model_validator(mode="after")
    def _check(self):
        for n, a in enumerate(self.coeffs, start=2):
            if not np.isfinite(a):
                raise ValueError(f"a_{n} is not finite")
            if self.sign_class is SignClass.T and (isinstance(a, complex) or a < 0):
                raise SignViolation(f"T-class magnitude a_{n}={a} must be a non-negative real.")
        return self

    @classmethod
    def identity(cls, N: int = DEFAULT_ORDER, sign_class: SignClass = SignClass.GENERAL) -> "CoeffFunction":
        return cls(coeffs=(0.0,) * max(N - 1, 0), sign_class=sign_class)

    @property
    def N(self) -> int:
        return len(self.coeffs) + 1

    def magnitudes(self) -> list[float]:
        return [abs(a) for a in self.coeffs]

    def power_coefficients(self) -> np.ndarray:
        """Signed coefficients [0, 1, a_2, ..., a_N] in ascending powers of z."""
        tail = np.asarray(self.coeffs, dtype=complex if self._is_complex() else float)
        if self.sign_class is SignClass.T:
            tail = -tail
        return np.concatenate(([0.0, 1.0], tail))

    def _is_complex(self) -> bool:
        return any(isinstance(a, complex) for a in self.coeffs)

    def evaluate(self, z):
        return np.polynomial.polynomial.polyval(z, self.power_coefficients())

    def derivative(self, z):
        coeffs = np.polynomial.polynomial.polyder(self.power_coefficients())
        return np.polynomial.polynomial.polyval(z, coeffs)

    def to_json(self) -> str:
        coeffs = [[a.real, a.imag] if isinstance(a, complex) else a for a in self.coeffs]
        return json.dumps({"sign_class": self.sign_class.value, "coeffs": coeffs})

    @classmethod
    def from_json(cls, text: str) -> "CoeffFunction":
        data = json.loads(text)
        coeffs = tuple(complex(*a) if isinstance(a, list) else float(a) for a in data["coeffs"])
        return cls(coeffs=coeffs, sign_class=SignClass(data["sign_class"]))


class RtauParams(BaseModel):
    """Parameters (A, B, tau) of the class R^tau(A, B)."""
    model_config = ConfigDict(frozen=True)

    A: float
    B: float
    tau: complex

    @field_validator("tau", mode="before")
    @classmethod
    def _as_complex(cls, v):
        if isinstance(v, str):
            return complex(v.replace(" ", ""))
        if isinstance(v, (list, tuple)):
            return complex(*v)
        return complex(v)

    @model_validator(mode="after")
    def _check(self):
        if not (-1 <= self.B < self.A <= 1):
            raise InvalidRtauParams(f"Need -1 <= B < A <= 1 (got A={self.A}, B={self.B}).")
        if abs(self.tau) == 0:
            raise InvalidRtauParams("tau must be non-zero.")
        return self

    @property
    def scale(self) -> float:
        """The factor (A - B)|tau| shared by the coefficient bound and the conditions."""
        return (self.A - self.B) * abs(self.tau)

    def echo(self) -> dict:
        return {"A": self.A, "B": self.B, "tau": [self.tau.real, self.tau.imag]}


# --- 2. Constructors for the Bessel-derived functions ---

def make_z_up(params: BesselParams, N: int = DEFAULT_ORDER) -> CoeffFunction:
    return CoeffFunction(coeffs=tuple(u_coefficients(params, N)), sign_class=SignClass.GENERAL)


def make_z_two_minus_up(params: BesselParams, N: int = DEFAULT_ORDER) -> CoeffFunction:
    """z(2 - u_p(z)) = z - sum a_n z^n with the a_n of z u_p."""
    coeffs = u_coefficients(params, N)
    if any(a < 0 for a in coeffs):
        raise SignViolation(
            f"z(2 - u_p) is not in T for c={params.c}, kappa={params.kappa}: a coefficient is negative."
        )
    return CoeffFunction(coeffs=tuple(coeffs), sign_class=SignClass.T)


def integral_G_coeffs(params: BesselParams, N: int = DEFAULT_ORDER) -> CoeffFunction:
    """G(kappa, c, z) = int_0^z (2 - u_p(t)) dt = z - sum a_n/n z^n."""
    coeffs = u_coefficients(params, N)
    if any(a < 0 for a in coeffs):
        raise SignViolation(
            f"G is not in T for c={params.c}, kappa={params.kappa}: a coefficient is negative."
        )
    return CoeffFunction(
        coeffs=tuple(a / n for n, a in enumerate(coeffs, start=2)),
        sign_class=SignClass.T,
    )


def hadamard_I(params: BesselParams, f: CoeffFunction) -> CoeffFunction:
    """I(kappa, c) f = z u_p(z) * f(z), the coefficient-wise product."""
    kernel = u_coefficients(params, f.N)
    coeffs = tuple(k * a for k, a in zip(kernel, f.coeffs))
    if f.sign_class is SignClass.T and any(a < 0 for a in coeffs):
        raise SignViolation("I(kappa, c) does not keep this function in T (negative kernel coefficient).")
    return CoeffFunction(coeffs=coeffs, sign_class=f.sign_class)


def zfprime(f: CoeffFunction) -> CoeffFunction:
    return CoeffFunction(
        coeffs=tuple(n * a for n, a in enumerate(f.coeffs, start=2)),
        sign_class=f.sign_class,
    )


# --- 3. The class R^tau(A, B) ---

def rtau_coeff_bound(n: int, r: RtauParams) -> float:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return r.scale / n


def rtau_extremal_coeffs(n: int, r: RtauParams, N: int = DEFAULT_ORDER) -> CoeffFunction:
    """
    Coefficients of f(z) = int_0^z (1 + (A-B) tau t^(n-1) / (1 + B t^(n-1))) dt.

    Expanding the geometric series in -B t^(n-1) gives
    a_k = (A-B) tau (-B)^m / k at k = (m+1)(n-1) + 1, zero elsewhere.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if abs(r.B) >= 1:
        raise InvalidRtauParams(f"The extremal expansion needs |B| < 1 (got B={r.B}).")
    lead = (r.A - r.B) * (r.tau if r.tau.imag else r.tau.real)
    coeffs = [0.0 * lead] * max(N - 1, 0)
    m = 0
    while (k := (m + 1) * (n - 1) + 1) <= N:
        coeffs[k - 2] = lead * (-r.B) ** m / k
        m += 1
    return CoeffFunction(coeffs=tuple(coeffs), sign_class=SignClass.GENERAL)
