"""HTTP facade over a live experiment for human-in-the-loop labeling.

Sessions wrap an ExperimentEngine. Simulated mode auto-labels from held
ground truth; human mode parks queried indices as pending until every label
arrives, then applies them atomically and retrains. Pending payloads never
contain ground-truth labels.
"""

import json
import math
import threading
import uuid

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .errors import ConfigError, DataError
from .harness import ExperimentEngine, config_from_dict, config_to_dict


class CreateSessionRequest(BaseModel):
    config: dict
    mode: str = "simulated"


class LabelPair(BaseModel):
    index: int
    label: int


class SubmitLabelsRequest(BaseModel):
    labels: list[LabelPair]


class Session:
    def __init__(self, config, mode):
        self.id = uuid.uuid4().hex[:12]
        self.mode = mode
        self.engine = ExperimentEngine(config)
        self.pending = []  # global indices awaiting labels, human mode only
        self.received = {}  # index -> label collected so far
        self.lock = threading.Lock()


def _error(status, code, message):
    return HTTPException(status_code=status, detail={"code": code, "message": message})


def _render_hint(dim):
    if dim == 2:
        return {"kind": "scatter2d"}
    side = math.isqrt(dim)
    if side * side == dim:
        return {"kind": "image", "width": side, "height": side}
    return {"kind": "vector", "length": dim}


def _record_dict(r):
    return {
        "round": r.round,
        "n_labeled": r.n_labeled,
        "accuracy": r.accuracy,
        "selected_indices": list(r.selected),
        "wall_time": r.wall_time,
    }


def _pending_payload(session):
    pool = session.engine.pool
    dim = pool.X_train.shape[1]
    items = [
        {
            "index": int(i),
            "features": pool.X_train[i].tolist(),
            "render": _render_hint(dim),
        }
        for i in session.pending
    ]
    context = pool.X_train[:, :2].tolist() if dim == 2 else []
    return {
        "pending": items,
        "context_points": context,
        "num_classes": pool.num_classes,
        "round": session.engine.round,
    }


def create_app(snapshot_dir=None):
    app = FastAPI(title="activepool labeling service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions = {}
    app.state.sessions = sessions

    def get_session(session_id):
        session = sessions.get(session_id)
        if session is None:
            raise _error(404, "session_not_found", f"no session {session_id}")
        return session

    def snapshot(session):
        if snapshot_dir is None:
            return
        path = Path(snapshot_dir) / f"{session.id}.json"
        state = {
            "session_id": session.id,
            "mode": session.mode,
            "round": session.engine.round,
            "config": config_to_dict(session.engine.config),
            "labeled_mask": session.engine.pool.labeled_mask.tolist(),
            "records": [_record_dict(r) for r in session.engine.records],
        }
        path.write_text(json.dumps(state))

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest):
        if req.mode not in ("simulated", "human"):
            raise _error(422, "invalid_mode", f"unknown mode {req.mode!r}")
        try:
            config = config_from_dict(req.config)
            session = Session(config, req.mode)
        except (ConfigError, DataError, TypeError) as exc:
            raise _error(422, "invalid_config", str(exc))
        sessions[session.id] = session
        snapshot(session)
        return {
            "session_id": session.id,
            "mode": session.mode,
            "round": 0,
            "accuracy": session.engine.records[0].accuracy,
        }

    @app.post("/sessions/{session_id}/advance")
    def advance_round(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if session.pending:
                raise _error(
                    409, "labels_pending", f"{len(session.pending)} labels outstanding"
                )
            if session.engine.done:
                return {"done": True, "round": session.engine.round}
            if session.mode == "simulated":
                record = session.engine.step()
                snapshot(session)
                return {"done": False, "record": _record_dict(record)}
            idxs = session.engine.query_next()
            session.pending = [int(i) for i in idxs]
            session.received = {}
            return {"done": False, **_pending_payload(session)}

    @app.post("/sessions/{session_id}/labels")
    def submit_labels(session_id: str, req: SubmitLabelsRequest):
        session = get_session(session_id)
        with session.lock:
            if session.mode != "human":
                raise _error(409, "not_human_mode", "labels only accepted in human mode")
            K = session.engine.pool.num_classes
            for pair in req.labels:
                if pair.index not in session.pending:
                    raise _error(422, "not_pending", f"index {pair.index} is not pending")
                if not (0 <= pair.label < K):
                    raise _error(
                        422, "label_out_of_range", f"label {pair.label} outside [0, {K})"
                    )
            for pair in req.labels:
                session.received[pair.index] = pair.label
            remaining = [i for i in session.pending if i not in session.received]
            if remaining:
                return {"remaining": len(remaining)}
            idxs = list(session.pending)
            labels = [session.received[i] for i in idxs]
            session.pending = []
            session.received = {}
            record = session.engine.apply_labels(idxs, labels)
            snapshot(session)
            return {"remaining": 0, "record": _record_dict(record)}

    @app.get("/sessions/{session_id}/curve")
    def get_curve(session_id: str):
        session = get_session(session_id)
        return {
            "records": [_record_dict(r) for r in session.engine.records],
            "rounds_total": session.engine.config.rounds,
            "done": session.engine.done,
        }

    @app.get("/sessions/{session_id}/pending")
    def get_pending(session_id: str):
        return _pending_payload(get_session(session_id))

    @app.get("/sessions/{session_id}/config")
    def get_config(session_id: str):
        session = get_session(session_id)
        return {"mode": session.mode, "config": config_to_dict(session.engine.config)}

    return app


def serve(host="127.0.0.1", port=8000, snapshot_dir=None):
    import uvicorn

    uvicorn.run(create_app(snapshot_dir), host=host, port=port)
