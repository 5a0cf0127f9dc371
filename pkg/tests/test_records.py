import json

import pytest

from locent.records import (
    InvariantViolation,
    RunManifest,
    ScatterRecord,
    csv_body,
    format_value,
    write_csv,
    write_manifest,
)


def make_record(**overrides):
    base = dict(
        family="gw",
        n_qubits=3,
        n=1,
        m=1,
        q=0.0,
        alpha=0.0,
        e_ab=0.5,
        e_a1=0.6,
        e_a2=0.7,
        le=0.55,
        delta1=0.05,
        delta2=-0.05,
        seed=7,
        state_index=0,
    )
    base.update(overrides)
    return ScatterRecord(**base)


def test_record_validates():
    make_record().validate()


def test_record_invariants_name_failures():
    with pytest.raises(InvariantViolation, match="delta2"):
        make_record(delta2=1e-6).validate()
    with pytest.raises(InvariantViolation, match="le >= 0"):
        make_record(le=-0.1).validate()
    with pytest.raises(InvariantViolation, match="e_a1"):
        make_record(e_a1=-1e-6).validate()


def test_format_value_significant_digits():
    assert format_value(0.1234567890123456) == "0.123456789012"
    assert format_value(1.0) == "1"
    assert format_value(3) == "3"
    assert format_value(True) == "1"
    assert format_value(1e-15) == "1e-15"


def test_csv_body_layout():
    body = csv_body(["a", "b"], [[1, 0.5], [2, 0.25]])
    assert body == "a,b\n1,0.5\n2,0.25\n"


def test_write_csv_and_manifest(tmp_path):
    path = str(tmp_path / "out.csv")
    digest = write_csv(path, ["x"], [[1.5]])
    manifest = RunManifest(
        command="locent scatter",
        config_hash="-",
        seed=3,
        code_version="0.1.0",
        wall_time_s=0.1,
        csv_path=path,
        csv_sha256=digest,
        rows=1,
    )
    mpath = write_manifest(manifest)
    data = json.loads(open(mpath).read())
    assert data["csv_sha256"] == digest
    assert data["seed"] == 3
    assert data["rows"] == 1
