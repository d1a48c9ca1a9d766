import uvicorn
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel
import logging

from scripts.bessel import BesselParams, SeriesValue, u_at_one, u_prime_at_one, u_second_at_one
from scripts.class_membership import Certificate, ConditionId, SpiralParams
from scripts.config import DEFAULT_EPS, LOG_LEVEL
from scripts.errors import SpiraCertError
from scripts.function_model import RtauParams
from scripts.theorems import RTAU_CONDITIONS, THEOREM_CONDITIONS, certify

logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

app = FastAPI(
    title="SpiraCert",
    description="Generalized Bessel function values and spirallike class certificates.",
    version="1.0.0"
)

# Define request/response models
class EvalRequest(BaseModel):
    c: float
    kappa: float
    eps: float = DEFAULT_EPS
    allow_degenerate: bool = False
class EvalResponse(BaseModel):
    params: dict
    u: SeriesValue
    u_prime: SeriesValue
    u_second: SeriesValue
class CertifyRequest(BaseModel):
    c: float
    kappa: float
    alpha: float
    beta: float
    conditions: list[ConditionId] | None = None
    A: float | None = None
    B: float | None = None
    tau: float | str | list[float] | None = None
    target: str | None = None
class CertifyResponse(BaseModel):
    certificates: list[Certificate]
    all_hold: bool


def _domain_error(e: Exception) -> HTTPException:
    logger.warning(f"Rejected request: {e}")
    return HTTPException(status_code=422, detail=str(e))


# API Endpoints
@app.get("/health")
def health_check():
    return {"status": "healthy"}

@app.post("/eval", response_model=EvalResponse)
def evaluate(request: EvalRequest):
    try:
        p = BesselParams(c=request.c, kappa=request.kappa)
        if not p.in_theorem_regime and not request.allow_degenerate:
            p.require_theorem_regime()
        return {
            "params": p.echo(),
            "u": u_at_one(p, request.eps),
            "u_prime": u_prime_at_one(p, request.eps),
            "u_second": u_second_at_one(p, request.eps),
        }
    except (SpiraCertError, ValueError) as e:
        raise _domain_error(e)
    except Exception as e:
        logger.error(f"Error during evaluation: {e}")
        raise HTTPException(status_code=500, detail=str(e))

@app.post("/certify", response_model=CertifyResponse)
def certify_conditions(request: CertifyRequest):
    logger.info(f"Certify request: c={request.c}, kappa={request.kappa}, alpha={request.alpha}, beta={request.beta}")
    try:
        p = BesselParams(c=request.c, kappa=request.kappa)
        s = SpiralParams(alpha=request.alpha, beta=request.beta)
        r = None
        if request.A is not None or request.B is not None or request.tau is not None:
            r = RtauParams(A=request.A, B=request.B, tau=request.tau)
        conditions = request.conditions or [
            c for c in THEOREM_CONDITIONS if r is not None or c not in RTAU_CONDITIONS
        ]
        certificates = []
        for condition in conditions:
            target = request.target if condition in (
                ConditionId.T1_HH, ConditionId.T2_Q, ConditionId.T3_GH, ConditionId.T4_66
            ) else None
            certificates.append(certify(condition, p, s, r, target))
        return {"certificates": certificates, "all_hold": all(c.holds for c in certificates)}
    except (SpiraCertError, ValueError) as e:
        raise _domain_error(e)
    except Exception as e:
        logger.error(f"Error during certification: {e}")
        raise HTTPException(status_code=500, detail=str(e))


if __name__ == "__main__":
    uvicorn.run(app, host="0.0.0.0", port=8000)
