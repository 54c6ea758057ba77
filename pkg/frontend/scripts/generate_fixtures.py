"""Regenerate the golden service responses used by the frontend tests.

Run from the repository root after any change to the analysis response
shape:  python frontend/scripts/generate_fixtures.py
The service is deterministic, so regeneration is stable.
"""

import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "tests"))
from conftest import r04_records_csv  # noqa: E402

from aebiplot.service import create_app  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "test" / "fixtures"
OUT.mkdir(parents=True, exist_ok=True)

with tempfile.TemporaryDirectory() as data_dir:
    client = TestClient(create_app(data_dir=data_dir))
    handle = client.post(
        "/v1/datasets",
        params={"patient": "patient_id", "group": "group",
                "grade": "grade", "cycle": "cycle", "name": "r04-grade-fixture"},
        content=r04_records_csv(),
    ).json()["id"]

    for name, body in [
        ("analysis_zero_thresholds", {"level": "grade", "cycle": 1}),
        ("analysis_raised_thresholds",
         {"level": "grade", "cycle": 1, "contrib_min": 0.05, "freq_min": 0.02}),
    ]:
        r = client.post(f"/v1/datasets/{handle}/analysis", json=body)
        r.raise_for_status()
        payload = r.json()
        payload["dataset_id"] = "fixture"  # stable across regenerations
        (OUT / f"{name}.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"wrote {OUT / name}.json")
