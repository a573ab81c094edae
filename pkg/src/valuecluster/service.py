"""Local HTTP+JSON API wrapping the session workflow for the companion UI.

The service holds no state beyond session files in its data directory;
every successful mutation is persisted immediately, so a restart reproduces
identical responses.  Within one session, mutations take an exclusive lock
(concurrent mutation attempts get 409 "locked"); the progress endpoint
stays readable while a long stage runs.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from pathlib import Path

from fastapi import Body, FastAPI, Query
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .abstraction import (
    AbstractionConfig,
    load_questionnaire,
    preview as abstraction_preview,
    questionnaire_to_config,
)
from .clustering import NOISE, ClusteringConfig, expand_to_originals
from .corpus import corpus_from_values
from .distance import DistanceKind, WeightMatrix
from .errors import ConfigError, StageOrderError, ValueClusterError
from .profiles import PROFILES
from .projection import ProjectionOptions, scatter_payload
from .session import Session, Stage, TableLayout, load_session

__all__ = ["create_app", "ApiError"]


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, stage: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.stage = stage

    def body(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.stage is not None:
            out["stage"] = self.stage
        return out


class SessionStore:
    """Disk-backed session registry with per-session mutation locks."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._registry = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self.progress: dict[str, dict] = {}

    def _path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry:
            return self._locks.setdefault(session_id, threading.Lock())

    def add(self, session: Session) -> None:
        with self._registry:
            self._sessions[session.id] = session
        session.save(self._path(session.id))

    def get(self, session_id: str) -> Session:
        with self._registry:
            if session_id in self._sessions:
                return self._sessions[session_id]
        path = self._path(session_id)
        if not path.exists():
            raise ApiError(404, "not_found", f"no session {session_id!r}")
        session = load_session(path)
        with self._registry:
            return self._sessions.setdefault(session_id, session)

    @contextmanager
    def mutate(self, session_id: str):
        session = self.get(session_id)
        lock = self._lock_for(session_id)
        if not lock.acquire(blocking=False):
            raise ApiError(409, "locked", f"session {session_id!r} is busy with another mutation")
        try:
            yield session
            session.save(self._path(session_id))
        finally:
            lock.release()

    @contextmanager
    def read(self, session_id: str):
        session = self.get(session_id)
        lock = self._lock_for(session_id)
        with lock:
            yield session


_STAGES = {s.value: s for s in Stage}


def _summary(session: Session) -> dict:
    results = {
        "abstraction": {"present": session.mapping is not None},
        "distance": {"present": session.matrix is not None},
        "clustering": {"present": session.clustering is not None},
        "embedding": {"present": session.embedding is not None},
    }
    if session.mapping is not None:
        results["abstraction"]["groups"] = len(session.mapping)
    if session.matrix is not None:
        results["distance"]["n"] = session.matrix.n
    if session.clustering is not None:
        results["clustering"]["k"] = session.clustering.k
        results["clustering"]["noise_count"] = session.clustering.noise_count
    if session.embedding is not None:
        results["embedding"]["stress"] = session.embedding.stress
        results["embedding"]["iterations"] = session.embedding.iterations
    return {
        "id": session.id,
        "source": {
            "label": session.corpus.source_label,
            "total_occurrences": session.corpus.total_occurrences,
            "distinct_values": len(session.corpus),
        },
        "abstraction": session.abstraction_config.to_json_dict(),
        "distance": {"kind": session.distance_kind.value, **session.weights.to_json_dict()},
        "clustering": session.clustering_config.to_json_dict(),
        "embedding": session.projection_options.to_json_dict(),
        "history": list(session.history),
        "results": results,
    }


def _table_payload(session: Session, layout: TableLayout) -> dict:
    if session.clustering is None or session.mapping is None:
        raise ApiError(404, "result_missing", "clustering result missing", stage="cluster")
    clusters = []
    for exp in expand_to_originals(session.clustering, session.mapping):
        entry = {
            "id": exp.cluster_id,
            "noise": exp.cluster_id == NOISE,
            "original_count": exp.total_original_count,
            "abstracted_count": len(exp.groups),
        }
        if layout is TableLayout.REPRESENTATIVES:
            entry["items"] = [
                {
                    "representative": g.representative,
                    "count": g.total_count,
                    "abstracted": g.abstracted,
                    "originals": [[v, c] for v, c in g.originals],
                }
                for g in exp.groups
            ]
        else:
            entry["items"] = [v for g in exp.groups for v, _ in g.originals]
        clusters.append(entry)
    return {"layout": layout.value, "clusters": clusters}


def create_app(data_dir, run_threads: int = 1) -> FastAPI:
    """Build the API application persisting sessions under ``data_dir``."""
    app = FastAPI(title="valuecluster", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = SessionStore(Path(data_dir))
    app.state.store = store

    @app.exception_handler(ApiError)
    async def handle_api_error(request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        message = f"{first.get('msg', 'invalid request')} ({where})" if where else "invalid request"
        return JSONResponse(status_code=400, content={"code": "bad_request", "message": message})

    @app.exception_handler(ValueClusterError)
    async def handle_domain_error(request, exc: ValueClusterError):
        status = 422 if isinstance(exc, ConfigError) else 400
        body = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, StageOrderError):
            status = 409
            body["stage"] = exc.stage
        return JSONResponse(status_code=status, content=body)

    # --- session lifecycle -------------------------------------------------

    @app.post("/sessions")
    def create_session(body: dict = Body(...)):
        values = body.get("values")
        text = body.get("text")
        if (values is None) == (text is None):
            raise ApiError(400, "bad_request", "provide exactly one of 'values' or 'text'")
        if text is not None:
            if text.endswith("\n"):
                text = text[:-1]
            values = text.split("\n") if text else []
        if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
            raise ApiError(400, "bad_request", "'values' must be a list of strings")
        label = body.get("label", "upload")
        corpus = corpus_from_values(values, source_label=label)
        session = Session(corpus)
        store.add(session)
        return {
            "id": session.id,
            "total_occurrences": corpus.total_occurrences,
            "distinct_values": len(corpus),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        with store.read(session_id) as session:
            return _summary(session)

    # --- configuration -----------------------------------------------------

    @app.put("/sessions/{session_id}/abstraction")
    def put_abstraction(session_id: str, body: dict = Body(...)):
        config = AbstractionConfig.from_json_dict(body)
        from .abstraction import compile_rules

        compile_rules(config)
        with store.mutate(session_id) as session:
            session.set_abstraction_config(config)
            return _summary(session)

    @app.put("/sessions/{session_id}/distance")
    def put_distance(session_id: str, body: dict = Body(...)):
        body = dict(body)
        kind = DistanceKind(body.pop("kind", "levenshtein"))
        weights = WeightMatrix.from_json_dict(body)
        if kind is DistanceKind.LEVENSHTEIN and weights.sub is None:
            raise ConfigError("levenshtein kind needs substitution weights")
        with store.mutate(session_id) as session:
            session.set_weights(weights, kind)
            return _summary(session)

    @app.put("/sessions/{session_id}/clustering")
    def put_clustering(session_id: str, body: dict = Body(...)):
        config = ClusteringConfig.from_json_dict(body)
        with store.mutate(session_id) as session:
            session.set_clustering_config(config)
            return _summary(session)

    @app.put("/sessions/{session_id}/embedding")
    def put_embedding(session_id: str, body: dict = Body(...)):
        options = ProjectionOptions.from_json_dict(body)
        with store.mutate(session_id) as session:
            session.set_projection_options(options)
            return _summary(session)

    # --- pipeline ------------------------------------------------------------

    @app.post("/sessions/{session_id}/run")
    def run_stage(session_id: str, stage: str = Query(...)):
        if stage not in _STAGES:
            raise ApiError(400, "bad_request", f"unknown stage {stage!r}, expected one of {sorted(_STAGES)}")
        with store.mutate(session_id) as session:
            def progress(done: int, total: int):
                store.progress[session_id] = {"stage": stage, "done": done, "total": total}

            store.progress[session_id] = {"stage": stage, "done": 0, "total": 0}
            try:
                session.run_stage(_STAGES[stage], threads=run_threads, progress=progress)
            finally:
                store.progress.pop(session_id, None)
            return {
                "stage": stage,
                "history": session.history[-1],
                "summary": _summary(session)["results"],
            }

    @app.get("/sessions/{session_id}/progress")
    def get_progress(session_id: str):
        # no session lock: must stay readable while a run holds it
        progress = store.progress.get(session_id)
        if progress is None:
            return {"state": "idle"}
        return {"state": "running", **progress}

    # --- derived views ---------------------------------------------------------

    @app.get("/sessions/{session_id}/preview")
    def get_preview(session_id: str, limit: int = Query(100, ge=1)):
        with store.read(session_id) as session:
            mapping = abstraction_preview(session.corpus, session.abstraction_config, limit)
            return {
                "limit": limit,
                "groups": [
                    {"abstracted": g.abstracted, "originals": [[v, c] for v, c in g.originals]}
                    for g in mapping.groups
                ],
            }

    @app.get("/sessions/{session_id}/table")
    def get_table(session_id: str, layout: str = Query("representatives")):
        with store.read(session_id) as session:
            return _table_payload(session, TableLayout(layout))

    @app.get("/sessions/{session_id}/scatter")
    def get_scatter(session_id: str):
        with store.read(session_id) as session:
            if session.clustering is None:
                raise ApiError(404, "result_missing", "clustering result missing", stage="cluster")
            if session.embedding is None:
                raise ApiError(404, "result_missing", "embedding result missing", stage="project")
            points = scatter_payload(session.embedding, session.clustering, session.mapping)
            return {"points": points, "k": session.clustering.k}

    @app.get("/sessions/{session_id}/export.csv")
    def export_csv(session_id: str, layout: str = Query("representatives")):
        with store.read(session_id) as session:
            if session.clustering is None:
                raise ApiError(404, "result_missing", "clustering result missing", stage="cluster")
            content = session.cluster_table_csv(TableLayout(layout))
        return PlainTextResponse(content, media_type="text/csv; charset=utf-8")

    @app.get("/sessions/{session_id}/export.json")
    def export_json(session_id: str):
        with store.read(session_id) as session:
            return session.to_json_dict()

    # --- configuration aids ------------------------------------------------------

    @app.get("/questionnaire")
    def get_questionnaire():
        return load_questionnaire()

    @app.post("/questionnaire")
    def post_questionnaire(body: dict = Body(...)):
        answers = body.get("answers")
        if not isinstance(answers, dict):
            raise ApiError(400, "bad_request", "'answers' must map question ids to booleans")
        config = questionnaire_to_config(answers)
        return {"abstraction": config.to_json_dict()}

    @app.get("/profiles")
    def get_profiles():
        return {
            "profiles": [
                {"name": p.name, "description": p.description} for p in PROFILES.values()
            ]
        }

    @app.get("/profiles/{name}")
    def get_profile_config(name: str):
        profile = PROFILES.get(name)
        if profile is None:
            raise ApiError(404, "not_found", f"no profile {name!r}")
        return {
            "name": profile.name,
            "description": profile.description,
            "abstraction": profile.abstraction.to_json_dict(),
            "distance": {"kind": profile.kind.value, **profile.weights.to_json_dict()},
            "clustering": profile.clustering.to_json_dict(),
        }

    return app
