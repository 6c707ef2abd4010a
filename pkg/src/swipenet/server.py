"""HTTP/JSON labeling service backing the browser UI.

All manifest mutations run under one lock and persist atomically
(write-to-temp, rename). Model inference is read-only.
"""

import threading

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse
from pydantic import BaseModel

from . import net
from .checkpoint import load_checkpoint
from .data import Manifest, apply_mean, compute_mean, load_image
from .transfer import estimate_label_noise


class LabelBody(BaseModel):
    id: str
    label: int


class AnswerBody(BaseModel):
    label: int


class ServerState:
    def __init__(self, manifest_path, checkpoint_path=None):
        self.manifest_path = manifest_path
        self.manifest = Manifest.load(manifest_path)
        self.lock = threading.Lock()
        self.model = load_checkpoint(checkpoint_path) if checkpoint_path else None
        self.mean = None
        if self.model is not None:
            size = self.model.spec.input_shape[1]
            train = [e for e in self.manifest.by_split("train") if e.label is not None]
            if train:
                imgs = np.stack([load_image(e.path, size) for e in train])
                self.mean = compute_mean(imgs)
        self.session = None  # consistency session state

    def p_like(self, entry):
        size = self.model.spec.input_shape[1]
        x = load_image(entry.path, size)[None]
        if self.mean is not None:
            x = apply_mean(x, self.mean)
        probs = net.predict_proba(self.model, x)
        return float(probs[0, 1])

    def counts(self):
        labeled = self.manifest.labeled()
        n = len(labeled)
        likes = sum(1 for e in labeled if e.label == 1)
        return {"n_labeled": n,
                "like_fraction": likes / n if n else 0.0}


def create_app(manifest_path, checkpoint_path=None, ui_dir=None):
    state = ServerState(manifest_path, checkpoint_path)
    app = FastAPI(title="swipenet labeling service")
    app.state.swipenet = state

    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    def entry_or_404(eid):
        e = state.manifest.by_id(eid)
        if e is None:
            raise HTTPException(404, f"unknown id {eid!r}")
        return e

    @app.get("/next")
    def next_item(strategy: str = "sequential"):
        unlabeled = state.manifest.unlabeled()
        if not unlabeled:
            raise HTTPException(404, "no unlabeled entries")
        if strategy == "sequential":
            e = unlabeled[0]
            out = {"id": e.id, "image_url": f"/image/{e.id}"}
            if state.model is not None:
                out["model_score"] = state.p_like(e)
            return out
        if strategy == "uncertainty":
            if state.model is None:
                raise HTTPException(409, "uncertainty strategy needs a model")
            best, best_gap, best_p = None, None, None
            for e in unlabeled:  # manifest order, so ties keep the first
                p = state.p_like(e)
                gap = abs(p - 0.5)
                if best_gap is None or gap < best_gap:
                    best, best_gap, best_p = e, gap, p
            return {"id": best.id, "image_url": f"/image/{best.id}",
                    "model_score": best_p}
        raise HTTPException(400, f"unknown strategy {strategy!r}")

    @app.post("/label")
    def post_label(body: LabelBody):
        if body.label not in (0, 1):
            raise HTTPException(400, f"label must be 0 or 1, got {body.label}")
        with state.lock:
            e = entry_or_404(body.id)
            e.label = body.label
            state.manifest.save(state.manifest_path)
            return state.counts()

    @app.get("/predict/{eid}")
    def predict(eid: str):
        if state.model is None:
            raise HTTPException(409, "no model loaded")
        e = entry_or_404(eid)
        return {"p_like": state.p_like(e)}

    @app.get("/stats")
    def stats():
        out = state.counts()
        out["splits"] = {s: len(state.manifest.by_split(s))
                         for s in ("train", "val", "test", "unassigned")}
        return out

    @app.get("/image/{eid}")
    def image(eid: str):
        e = entry_or_404(eid)
        return FileResponse(e.path)

    @app.get("/consistency/start")
    def consistency_start(n: int, seed: int = 0):
        labeled = state.manifest.labeled()
        if n > len(labeled):
            raise HTTPException(400, f"only {len(labeled)} labeled entries, "
                                     f"cannot relabel {n}")
        idx = np.random.default_rng(seed).choice(len(labeled), size=n, replace=False)
        with state.lock:
            state.session = {"ids": [labeled[i].id for i in idx],
                             "answers": [], "disagreements": []}
        return _consistency_state(state)

    @app.get("/consistency/state")
    def consistency_state():
        if state.session is None:
            raise HTTPException(404, "no consistency session running")
        return _consistency_state(state)

    @app.post("/consistency/answer")
    def consistency_answer(body: AnswerBody):
        if body.label not in (0, 1):
            raise HTTPException(400, f"label must be 0 or 1, got {body.label}")
        with state.lock:
            s = state.session
            if s is None:
                raise HTTPException(404, "no consistency session running")
            i = len(s["answers"])
            if i >= len(s["ids"]):
                raise HTTPException(400, "session already finished")
            eid = s["ids"][i]
            original = state.manifest.by_id(eid).label
            s["answers"].append(body.label)
            if body.label != original:
                s["disagreements"].append(eid)
        return _consistency_state(state)

    return app


def _consistency_state(state):
    s = state.session
    n = len(s["ids"])
    i = len(s["answers"])
    out = {"n": n, "index": i, "done": i >= n}
    if i < n:
        eid = s["ids"][i]
        out["current"] = {"id": eid, "image_url": f"/image/{eid}"}
    else:
        d = len(s["disagreements"])
        out.update(agreement_rate=(n - d) / n,
                   disagreements=s["disagreements"],
                   noise_estimate=estimate_label_noise(n, d))
    return out
