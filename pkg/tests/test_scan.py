import io
import json
import math
import pandas as pd
import pytest

from scripts.class_membership import ConditionId
from scripts.errors import ScanSpecError
from scripts.function_model import RtauParams
from scripts.scan import ScanSpec, format_scan, run_scan


def _spec(**overrides) -> ScanSpec:
    fields = dict(c_range=(-4.0, -0.5), kappa_range=(0.5, 5.0), c_steps=2, kappa_steps=2,
                  alpha=0.0, beta=0.0, conditions=(ConditionId.T1_HH,))
    fields.update(overrides)
    return ScanSpec(**fields)


def test_two_by_two_csv_layout():
    text = format_scan(run_scan(_spec(), threads=1))
    lines = text.splitlines()
    assert lines[0] == "c,kappa,T1_HH_lhs,T1_HH_margin,T1_HH_holds"
    assert len(lines) == 5
    df = pd.read_csv(io.StringIO(text))
    assert list(df["c"]) == [-4.0, -4.0, -0.5, -0.5]
    assert list(df["kappa"]) == [0.5, 5.0, 0.5, 5.0]


def test_output_is_thread_count_invariant():
    spec = _spec(c_steps=7, kappa_steps=5, conditions=(ConditionId.T1_HH, ConditionId.T4_66))
    outputs = {format_scan(run_scan(spec, threads=t)) for t in (1, 2, 8)}
    assert len(outputs) == 1
    json_outputs = {format_scan(run_scan(spec, threads=t), "json") for t in (1, 8)}
    assert len(json_outputs) == 1


def test_margin_increases_along_kappa():
    spec = _spec(c_steps=3, kappa_steps=12, conditions=(ConditionId.T1_HH, ConditionId.T3_GH))
    df = run_scan(spec, threads=2)
    for _, block in df.groupby("c", sort=False):
        for condition in ("T1_HH", "T3_GH"):
            margins = list(block[f"{condition}_margin"])
            assert margins == sorted(margins)


def test_region_is_empty_near_the_aperture_limit():
    alpha = 1.5
    spec = _spec(c_range=(-8.0, -1.0), kappa_range=(0.5, 10.0), c_steps=4, kappa_steps=4,
                 alpha=alpha, beta=math.cos(alpha) - 1e-3,
                 conditions=(ConditionId.T1_HH, ConditionId.T2_Q, ConditionId.T3_GH, ConditionId.T4_66))
    df = run_scan(spec)
    holds = df[[c for c in df.columns if c.endswith("_holds")]]
    assert not holds.to_numpy().any()


def test_json_rows_are_native():
    rows = json.loads(format_scan(run_scan(_spec()), "json"))
    assert len(rows) == 4
    assert isinstance(rows[0]["T1_HH_holds"], bool)
    assert rows[0]["c"] == -4.0


def test_rtau_conditions_in_scan():
    r = RtauParams(A=1.0, B=0.0, tau=2.0)
    df = run_scan(_spec(conditions=(ConditionId.T1_HH, ConditionId.T5_D3), rtau=r))
    assert list(df["T5_D3_lhs"]) == pytest.approx(list(2 * df["T1_HH_lhs"]), rel=1e-15)


@pytest.mark.parametrize("overrides", [
    {"c_range": (-1.0, 1.0)},
    {"c_range": (-1.0, -2.0)},
    {"kappa_range": (0.0, 1.0)},
    {"c_steps": 1},
    {"conditions": ()},
    {"conditions": (ConditionId.T5_D3,)},
    {"conditions": (ConditionId.GEOMETRIC,)},
])
def test_invalid_scan_spec(overrides):
    with pytest.raises(ScanSpecError):
        _spec(**overrides)
