"""HTTP JSON API over datasets and analyses, plus on-disk persistence.

Datasets are immutable snapshots: the uploaded bytes are stored
content-addressed (sha256) with a sidecar metadata file per handle, so
re-uploading identical bytes yields a new handle over the same blob.
Analyses are recomputed on demand from the stored bytes, which makes
responses a pure function of (snapshot, request): identical requests return
byte-identical bodies, across restarts too.

Endpoints (all under /v1):

    POST /v1/datasets?patient=&group=&grade=[&domain=&term=&cycle=&name=]
        body: delimited text. 201 with handle + reject list.
    GET  /v1/datasets                 list handles
    GET  /v1/datasets/{id}            one handle
    POST /v1/datasets/{id}/analysis   body: AnalysisRequest JSON
    GET  /v1/datasets/{id}/frequency?level=&cycle=

Errors are JSON problem objects: {"code", "message", "details"}.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from . import ae_data, biplot, ca, contingency
from .ae_data import ClassLevel, ColumnMap, Dataset
from .errors import (
    AEAnalysisError,
    DegenerateTable,
    DimensionMismatch,
    EmptyDataset,
    MissingColumn,
    MissingField,
    OutOfRange,
    RankTooLow,
    RosterMismatch,
    SingleGroup,
)

DEFAULT_MAX_UPLOAD = 16 * 1024 * 1024

_STATUS_BY_ERROR = {
    MissingColumn: 400,
    EmptyDataset: 400,
    SingleGroup: 400,
    RosterMismatch: 400,
    OutOfRange: 400,
    DimensionMismatch: 400,
    MissingField: 422,
    DegenerateTable: 422,
    RankTooLow: 422,
}


def _problem(status: int, code: str, message: str, details: dict | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or {}},
    )


def _canonical_json(payload: dict) -> Response:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return Response(content=body, media_type="application/json")


@dataclass
class StoredDataset:
    meta: dict
    dataset: Dataset


class DatasetStore:
    """Content-addressed dataset persistence under a root directory.

    Blob files are immutable once written; handle metadata is written by a
    single writer under a lock, reads touch immutable files only.
    """

    def __init__(self, root: Path):
        self.root = Path(root)
        self.blobs = self.root / "blobs"
        self.handles = self.root / "handles"
        self.blobs.mkdir(parents=True, exist_ok=True)
        self.handles.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()
        self._cache: dict[str, StoredDataset] = {}

    def put(self, payload: bytes, bindings: ColumnMap, name: str | None) -> dict:
        dataset = ae_data.parse_dataset(payload, bindings)
        sha = hashlib.sha256(payload).hexdigest()
        with self._write_lock:
            blob_path = self.blobs / f"{sha}.txt"
            if not blob_path.exists():
                tmp = blob_path.with_suffix(".tmp")
                tmp.write_bytes(payload)
                os.replace(tmp, blob_path)
            handle_id = uuid.uuid4().hex[:12]
            while (self.handles / f"{handle_id}.json").exists():
                handle_id = uuid.uuid4().hex[:12]
            meta = {
                "id": handle_id,
                "name": name or f"dataset-{handle_id}",
                "created_at": datetime.now(timezone.utc).isoformat(),
                "sha256": sha,
                "bindings": {
                    "patient": bindings.patient,
                    "group": bindings.group,
                    "grade": bindings.grade,
                    "domain": bindings.domain,
                    "term": bindings.term,
                    "cycle": bindings.cycle,
                },
                "n_records": len(dataset.records),
                "n_rejects": len(dataset.rejects),
                "groups": [
                    {"label": g, "patients": dataset.patients_per_group[g]}
                    for g in dataset.groups
                ],
            }
            tmp = self.handles / f"{handle_id}.json.tmp"
            tmp.write_text(json.dumps(meta, indent=2), encoding="utf-8")
            os.replace(tmp, self.handles / f"{handle_id}.json")
        self._cache[handle_id] = StoredDataset(meta, dataset)
        return meta

    def get(self, handle_id: str) -> StoredDataset | None:
        cached = self._cache.get(handle_id)
        if cached is not None:
            return cached
        path = self.handles / f"{handle_id}.json"
        if not path.exists():
            return None
        meta = json.loads(path.read_text(encoding="utf-8"))
        payload = (self.blobs / f"{meta['sha256']}.txt").read_bytes()
        b = meta["bindings"]
        dataset = ae_data.parse_dataset(payload, ColumnMap(
            patient=b["patient"], group=b["group"], grade=b["grade"],
            domain=b.get("domain"), term=b.get("term"), cycle=b.get("cycle"),
        ))
        stored = StoredDataset(meta, dataset)
        self._cache[handle_id] = stored
        return stored

    def list(self) -> list[dict]:
        metas = []
        for path in self.handles.glob("*.json"):
            metas.append(json.loads(path.read_text(encoding="utf-8")))
        metas.sort(key=lambda m: (m["created_at"], m["id"]))
        return metas


class AnalysisRequest(BaseModel):
    level: str
    cycle: int | None = None
    contrib_min: float = Field(default=0.0, ge=0.0, le=1.0)
    freq_min: float = Field(default=0.0, ge=0.0, le=1.0)
    dims: tuple[int, int] = (1, 2)
    show_complements: bool = False


def run_analysis(dataset: Dataset, req: AnalysisRequest) -> dict:
    """The full pipeline behind POST .../analysis (pure function)."""
    level = ClassLevel.from_token(req.level)
    d = dataset if req.cycle is None else ae_data.filter_cycle(dataset, req.cycle)
    table = contingency.build_stacked(d, level)
    result = ca.decompose(table)
    cfg = biplot.BiplotConfig(
        dims=tuple(req.dims),
        contrib_min=req.contrib_min,
        freq_min=req.freq_min,
        show_complements=req.show_complements,
    )
    view = biplot.make_view(result, table, cfg)
    return {
        "request": {
            "level": level.value,
            "cycle": req.cycle,
            "contrib_min": req.contrib_min,
            "freq_min": req.freq_min,
            "dims": list(req.dims),
            "show_complements": req.show_complements,
        },
        "ca": result.to_json_dict(),
        "view": biplot.view_to_dict(view),
        "frequency_table": contingency.frequency_table(table).to_dict(),
    }


def create_app(
    data_dir: str | Path = "aebiplot-data",
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="aebiplot service", version="0.1.0", docs_url="/v1/docs", openapi_url="/v1/openapi.json")
    store = DatasetStore(Path(data_dir))
    app.state.store = store

    @app.exception_handler(AEAnalysisError)
    async def _on_module_error(_req: Request, exc: AEAnalysisError):
        status = _STATUS_BY_ERROR.get(type(exc), 400)
        return _problem(status, type(exc).__name__, str(exc))

    @app.exception_handler(ValueError)
    async def _on_value_error(_req: Request, exc: ValueError):
        return _problem(422, "InvalidRequest", str(exc))

    @app.post("/v1/datasets", status_code=201)
    async def upload_dataset(
        request: Request,
        patient: str = Query(...),
        group: str = Query(...),
        grade: str = Query(...),
        domain: str | None = Query(default=None),
        term: str | None = Query(default=None),
        cycle: str | None = Query(default=None),
        name: str | None = Query(default=None),
    ):
        payload = await request.body()
        if len(payload) > max_upload_bytes:
            return _problem(413, "PayloadTooLarge",
                            f"payload of {len(payload)} bytes exceeds limit",
                            {"limit": max_upload_bytes})
        if not payload.strip():
            return _problem(400, "EmptyDataset", "request body is empty")
        bindings = ColumnMap(patient=patient, group=group, grade=grade,
                             domain=domain, term=term, cycle=cycle)
        meta = store.put(payload, bindings, name)
        stored = store.get(meta["id"])
        rejects = [
            {"line": r.line, "reason": r.reason, "raw": r.raw}
            for r in stored.dataset.rejects
        ]
        return JSONResponse(status_code=201, content={**meta, "rejects": rejects})

    @app.get("/v1/datasets")
    async def list_datasets():
        return {"datasets": store.list()}

    @app.get("/v1/datasets/{handle_id}")
    async def get_dataset(handle_id: str):
        stored = store.get(handle_id)
        if stored is None:
            return _problem(404, "UnknownDataset", f"no dataset {handle_id!r}")
        return stored.meta

    @app.post("/v1/datasets/{handle_id}/analysis")
    async def analyze(handle_id: str, req: AnalysisRequest):
        stored = store.get(handle_id)
        if stored is None:
            return _problem(404, "UnknownDataset", f"no dataset {handle_id!r}")
        try:
            ClassLevel.from_token(req.level)
        except ValueError as exc:
            return _problem(422, "UnknownLevel", str(exc))
        payload = run_analysis(stored.dataset, req)
        return _canonical_json({"dataset_id": handle_id, **payload})

    @app.get("/v1/datasets/{handle_id}/frequency")
    async def frequency(handle_id: str, level: str = Query(...), cycle: int | None = Query(default=None)):
        stored = store.get(handle_id)
        if stored is None:
            return _problem(404, "UnknownDataset", f"no dataset {handle_id!r}")
        try:
            lv = ClassLevel.from_token(level)
        except ValueError as exc:
            return _problem(422, "UnknownLevel", str(exc))
        d = stored.dataset if cycle is None else ae_data.filter_cycle(stored.dataset, cycle)
        table = contingency.build_stacked(d, lv)
        return _canonical_json({
            "dataset_id": handle_id,
            "level": lv.value,
            "cycle": cycle,
            **contingency.frequency_table(table).to_dict(),
        })

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app
