import os
import json
import logging
from typing import Any
from pydantic import BaseModel, ConfigDict, TypeAdapter, ValidationError

from scripts.bessel import BesselParams, u_at_one, u_prime_at_one, u_second_at_one
from scripts.class_membership import SpiralParams
from scripts.errors import GoldenFileError
from scripts.oracle import OracleReport, compare, direct_sum_sp, direct_sum_ucsp
from scripts.theorems import thm2_lhs, thm4_lhs

logger = logging.getLogger(__name__)

# --- Configuration ---

GOLDEN_REL_TOL = 1e-12


class GoldenRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    target_id: str
    params: dict[str, Any]
    value: float

    @property
    def key(self) -> str:
        return f"{self.target_id}|{json.dumps(self.params, sort_keys=True)}"


GOLDEN_ADAPTER = TypeAdapter(list[GoldenRecord])


def _bessel_record(target_id: str, fn, c: float, kappa: float) -> GoldenRecord:
    value = fn(BesselParams(c=c, kappa=kappa)).value
    return GoldenRecord(target_id=target_id, params={"c": c, "kappa": kappa}, value=value)


def _spiral_record(target_id: str, fn, c: float, kappa: float, alpha: float, beta: float) -> GoldenRecord:
    value = fn(BesselParams(c=c, kappa=kappa), SpiralParams(alpha=alpha, beta=beta))
    params = {"c": c, "kappa": kappa, "alpha": alpha, "beta": beta}
    return GoldenRecord(target_id=target_id, params=params, value=value)


def canonical_records() -> list[GoldenRecord]:
    """The pinned example set, in a fixed order."""
    return [
        _bessel_record("u_at_one", u_at_one, -4.0, 1.0),
        _bessel_record("u_at_one", u_at_one, -2.0, 2.0),
        _bessel_record("u_prime_at_one", u_prime_at_one, -4.0, 1.0),
        _bessel_record("u_prime_at_one", u_prime_at_one, -1.0, 2.0),
        _bessel_record("u_second_at_one", u_second_at_one, -4.0, 1.0),
        _bessel_record("u_second_at_one", u_second_at_one, -2.0, 0.5),
        _spiral_record("direct_sum_sp", direct_sum_sp, -1.0, 1.0, 0.0, 0.0),
        _spiral_record("direct_sum_sp", direct_sum_sp, -4.0, 1.0, 0.0, 0.0),
        _spiral_record("direct_sum_ucsp", direct_sum_ucsp, -1.0, 1.0, 0.0, 0.0),
        _spiral_record("thm2_lhs", thm2_lhs, -1.0, 1.0, 0.0, 0.0),
        _spiral_record("thm4_lhs", thm4_lhs, -0.5, 2.0, 0.0, 0.0),
    ]


def load_golden(path: str) -> list[GoldenRecord]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise GoldenFileError(f"Cannot read golden file {path}: {e}") from e
    try:
        return GOLDEN_ADAPTER.validate_json(text)
    except ValidationError as e:
        raise GoldenFileError(f"Golden file {path} is corrupted:\n{e}") from e


def write_golden(path: str, records: list[GoldenRecord]):
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(GOLDEN_ADAPTER.dump_json(records, indent=2).decode('utf-8'))
    logger.info(f"Wrote {len(records)} golden records to {path}")


def diff_golden(current: list[GoldenRecord], golden: list[GoldenRecord],
                tolerance: float = GOLDEN_REL_TOL) -> list[OracleReport]:
    """One report per current record; records absent from the golden file fail."""
    pinned = {g.key: g for g in golden}
    reports = []
    for record in current:
        target_id = f"golden:{record.target_id}"
        if record.key not in pinned:
            reports.append(OracleReport(
                target_id=target_id, closed_form=record.value, brute_force=record.value,
                abs_diff=0.0, rel_diff=0.0, N_used=0, verdict=False, tolerance=tolerance,
                params=record.params, detail="missing from golden file",
            ))
            continue
        reports.append(compare(target_id, record.value, pinned[record.key].value, N_used=0,
                               tolerance=tolerance, params=record.params))
    missing = sum(1 for r in reports if r.detail)
    if missing:
        logger.warning(f"{missing} canonical records are not pinned in the golden file")
    return reports
