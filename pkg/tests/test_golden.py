import json
import mpmath
import pytest

from scripts.errors import GoldenFileError
from scripts.golden import (
    GoldenRecord, canonical_records, diff_golden, load_golden, write_golden,
)


def test_round_trip_diffs_clean(tmp_path):
    path = tmp_path / "golden" / "values.json"
    records = canonical_records()
    write_golden(str(path), records)
    reports = diff_golden(canonical_records(), load_golden(str(path)))
    assert len(reports) == len(records)
    assert all(r.verdict for r in reports)
    assert all(r.target_id.startswith("golden:") for r in reports)


def test_canonical_values_match_bessel_oracle():
    records = {r.key: r for r in canonical_records()}
    u = records[GoldenRecord(target_id="u_at_one", params={"c": -4.0, "kappa": 1.0}, value=0.0).key]
    assert u.value == pytest.approx(float(mpmath.besseli(0, 2)), rel=1e-14)


def test_drifted_value_fails(tmp_path):
    path = tmp_path / "values.json"
    records = canonical_records()
    drifted = [records[0].model_copy(update={"value": records[0].value * (1 + 1e-9)})] + records[1:]
    write_golden(str(path), drifted)
    reports = diff_golden(records, load_golden(str(path)))
    assert not reports[0].verdict
    assert all(r.verdict for r in reports[1:])


def test_missing_record_fails(tmp_path):
    path = tmp_path / "values.json"
    records = canonical_records()
    write_golden(str(path), records[1:])
    reports = diff_golden(records, load_golden(str(path)))
    assert not reports[0].verdict
    assert reports[0].detail == "missing from golden file"


@pytest.mark.parametrize("text", ["{not json", json.dumps([{"target_id": "x"}]), json.dumps({"a": 1})])
def test_corrupted_file_raises(tmp_path, text):
    path = tmp_path / "values.json"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(GoldenFileError):
        load_golden(str(path))


def test_unreadable_file_raises(tmp_path):
    with pytest.raises(GoldenFileError):
        load_golden(str(tmp_path / "absent.json"))
