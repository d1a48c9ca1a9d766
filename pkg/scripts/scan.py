import json
import logging
from typing import Literal
from concurrent.futures import ThreadPoolExecutor
import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, model_validator

from scripts.bessel import BesselParams
from scripts.class_membership import ConditionId, SpiralParams
from scripts.config import resolve_threads
from scripts.errors import ScanSpecError
from scripts.function_model import RtauParams
from scripts.theorems import RTAU_CONDITIONS, THEOREM_CONDITIONS, certify

logger = logging.getLogger(__name__)

# --- Configuration ---

CSV_FLOAT_FORMAT = "%.17g"


class ScanSpec(BaseModel):
    """A rectangular (c, kappa) grid inside the theorem regime, c-major ascending."""
    model_config = ConfigDict(frozen=True)

    c_range: tuple[float, float]
    kappa_range: tuple[float, float]
    c_steps: int
    kappa_steps: int
    alpha: float
    beta: float
    conditions: tuple[ConditionId, ...] = (ConditionId.T1_HH,)
    rtau: RtauParams | None = None
    fmt: Literal["csv", "json"] = "csv"

    @model_validator(mode="after")
    def _check(self):
        c_lo, c_hi = self.c_range
        k_lo, k_hi = self.kappa_range
        if not c_lo < c_hi < 0:
            raise ScanSpecError(f"c range must satisfy lo < hi < 0, got {self.c_range}.")
        if not 0 < k_lo < k_hi:
            raise ScanSpecError(f"kappa range must satisfy 0 < lo < hi, got {self.kappa_range}.")
        if self.c_steps < 2 or self.kappa_steps < 2:
            raise ScanSpecError("steps per axis must be >= 2.")
        if not self.conditions:
            raise ScanSpecError("at least one condition is required.")
        for condition in self.conditions:
            if condition not in THEOREM_CONDITIONS:
                raise ScanSpecError(f"{condition.value} cannot be scanned (not a theorem condition).")
            if condition in RTAU_CONDITIONS and self.rtau is None:
                raise ScanSpecError(f"{condition.value} needs A, B and tau.")
        return self

    @property
    def spiral(self) -> SpiralParams:
        return SpiralParams(alpha=self.alpha, beta=self.beta)

    def columns(self) -> list[str]:
        columns = ["c", "kappa"]
        for condition in self.conditions:
            columns += [f"{condition.value}_lhs", f"{condition.value}_margin", f"{condition.value}_holds"]
        return columns


def _scan_row(spec: ScanSpec, s: SpiralParams, c: float) -> list[dict]:
    rows = []
    for kappa in np.linspace(*spec.kappa_range, spec.kappa_steps):
        p = BesselParams(c=float(c), kappa=float(kappa))
        row = {"c": float(c), "kappa": float(kappa)}
        for condition in spec.conditions:
            cert = certify(condition, p, s, spec.rtau)
            row[f"{condition.value}_lhs"] = cert.lhs
            row[f"{condition.value}_margin"] = cert.margin
            row[f"{condition.value}_holds"] = cert.holds
        rows.append(row)
    return rows


def run_scan(spec: ScanSpec, threads: int | None = None) -> pd.DataFrame:
    """One row per grid point; rows are assembled in c-major order whatever the thread count."""
    s = spec.spiral
    c_values = np.linspace(*spec.c_range, spec.c_steps)
    workers = resolve_threads(threads)
    logger.info(f"Scanning {spec.c_steps}x{spec.kappa_steps} grid with {workers} thread(s)")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        blocks = list(executor.map(lambda c: _scan_row(spec, s, c), c_values))
    rows = [row for block in blocks for row in block]
    return pd.DataFrame(rows, columns=spec.columns())


def format_scan(df: pd.DataFrame, fmt: str = "csv") -> str:
    if fmt == "csv":
        return df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    records = [
        {k: (v.item() if hasattr(v, "item") else v) for k, v in row.items()}
        for row in df.to_dict(orient="records")
    ]
    return json.dumps(records, indent=2) + "\n"
