"""Tour of the HTTP API using an in-process client (no server needed).

The same endpoints back the web UI; run them against a live server with
``aebiplot serve`` instead.
"""

import json
import tempfile

from fastapi.testclient import TestClient

from aebiplot.service import create_app

CSV = """patient_id,arm,grade,cycle
p01,Drug,2,1
p02,Drug,3,1
p03,Drug,2,2
p04,Drug,6,1
p05,Placebo,2,1
p06,Placebo,1,1
p07,Placebo,2,2
p08,Drug,4,1
p09,Combo,3,1
p10,Combo,4,1
p11,Combo,5,1
p12,Combo,3,2
"""

with tempfile.TemporaryDirectory() as data_dir:
    client = TestClient(create_app(data_dir=data_dir))

    print("POST /v1/datasets  (column bindings in the query string)")
    r = client.post(
        "/v1/datasets",
        params={"patient": "patient_id", "group": "arm", "grade": "grade",
                "cycle": "cycle", "name": "api tour"},
        content=CSV,
    )
    handle = r.json()
    print(f"  -> {r.status_code}, id={handle['id']}, "
          f"{handle['n_records']} records, rejects={handle['rejects']}")

    print("\nGET /v1/datasets")
    listing = client.get("/v1/datasets").json()["datasets"]
    print(f"  -> {[m['name'] for m in listing]}")

    print("\nPOST /v1/datasets/{id}/analysis   (grade level, cycle 1)")
    r = client.post(f"/v1/datasets/{handle['id']}/analysis",
                    json={"level": "grade", "cycle": 1})
    body = r.json()
    print(f"  -> shares: {[round(s, 2) for s in body['ca']['inertia_shares_pct']]}")
    print(f"  -> view: {len(body['view']['class_points'])} class points, "
          f"loss {body['view']['loss_of_information_pct']:.2f}%")

    print("\nGET /v1/datasets/{id}/frequency?level=grade&cycle=1")
    r = client.get(f"/v1/datasets/{handle['id']}/frequency",
                   params={"level": "grade", "cycle": 1})
    print(json.dumps(r.json(), indent=2)[:400], "...")

    print("\nerrors come back as problem objects:")
    r = client.post(f"/v1/datasets/{handle['id']}/analysis", json={"level": "term"})
    print(f"  term level without a term column -> {r.status_code} {r.json()}")
