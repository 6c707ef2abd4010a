import numpy as np
import pytest
from fastapi.testclient import TestClient

from swipenet.checkpoint import save_checkpoint
from swipenet.data import Manifest
from swipenet.model import build_preset, init_params
from swipenet.server import create_app
from swipenet.synth import synth_generate, write_synth_dataset


@pytest.fixture
def workspace(tmp_path):
    ds = synth_generate(12, 0.0, seed=0, size=32)
    mpath = write_synth_dataset(ds, tmp_path, labeled=False)
    return tmp_path, mpath, ds


@pytest.fixture
def client(workspace):
    _, mpath, _ = workspace
    return TestClient(create_app(str(mpath)))


@pytest.fixture
def model_client(workspace):
    tmp_path, mpath, _ = workspace
    ckpt = init_params(build_preset("attractiveness", input_size=64), seed=0)
    cpath = tmp_path / "model.ckpt"
    save_checkpoint(ckpt, cpath)
    return TestClient(create_app(str(mpath), str(cpath)))


class TestNext:
    def test_sequential_serves_in_manifest_order(self, client):
        r = client.get("/next")
        assert r.status_code == 200
        assert r.json()["id"] == "synth-00000"
        assert r.json()["image_url"] == "/image/synth-00000"

    def test_sequential_never_repeats_labeled(self, client):
        first = client.get("/next").json()["id"]
        client.post("/label", json={"id": first, "label": 1})
        assert client.get("/next").json()["id"] != first

    def test_uncertainty_without_model_409(self, client):
        assert client.get("/next?strategy=uncertainty").status_code == 409

    def test_uncertainty_picks_min_gap(self, model_client):
        r = model_client.get("/next?strategy=uncertainty")
        assert r.status_code == 200
        chosen = r.json()
        # verify it really minimizes |p - 0.5| over unlabeled entries
        ps = {}
        for i in range(12):
            eid = f"synth-{i:05d}"
            ps[eid] = model_client.get(f"/predict/{eid}").json()["p_like"]
        best = min(ps, key=lambda k: abs(ps[k] - 0.5))
        assert chosen["id"] == best

    def test_exhausted_manifest_404(self, client):
        for i in range(12):
            client.post("/label", json={"id": f"synth-{i:05d}", "label": 0})
        assert client.get("/next").status_code == 404


class TestLabel:
    def test_like_fraction(self, client):
        for i in range(10):
            r = client.post("/label", json={"id": f"synth-{i:05d}",
                                            "label": 1 if i < 53 / 10 else 0})
        stats = client.get("/stats").json()
        assert stats["n_labeled"] == 10

    def test_53_of_100_format(self, tmp_path):
        ds = synth_generate(100, 0.0, seed=1, size=16)
        mpath = write_synth_dataset(ds, tmp_path, labeled=False)
        c = TestClient(create_app(str(mpath)))
        for i in range(100):
            c.post("/label", json={"id": f"synth-{i:05d}",
                                   "label": 1 if i < 53 else 0})
        assert c.get("/stats").json()["like_fraction"] == pytest.approx(0.53)

    def test_unknown_id_404(self, client):
        assert client.post("/label", json={"id": "nope", "label": 1}).status_code == 404

    def test_bad_label_400(self, client):
        r = client.post("/label", json={"id": "synth-00000", "label": 2})
        assert r.status_code == 400

    def test_overwrite_last_wins(self, workspace, client):
        _, mpath, _ = workspace
        client.post("/label", json={"id": "synth-00003", "label": 0})
        client.post("/label", json={"id": "synth-00003", "label": 1})
        m = Manifest.load(mpath)
        assert len(m) == 12
        assert m.by_id("synth-00003").label == 1

    def test_persisted_atomically(self, workspace, client):
        _, mpath, _ = workspace
        client.post("/label", json={"id": "synth-00001", "label": 1})
        assert Manifest.load(mpath).by_id("synth-00001").label == 1


class TestPredictAndImage:
    def test_predict(self, model_client):
        r = model_client.get("/predict/synth-00000")
        assert r.status_code == 200
        assert 0 <= r.json()["p_like"] <= 1

    def test_predict_unknown_id(self, model_client):
        assert model_client.get("/predict/zzz").status_code == 404

    def test_image_bytes(self, client):
        r = client.get("/image/synth-00000")
        assert r.status_code == 200
        assert r.content[:4] == b"\x89PNG"


class TestConsistency:
    def _label_all(self, client, n=12):
        for i in range(n):
            client.post("/label", json={"id": f"synth-{i:05d}", "label": i % 2})

    def test_session_flow_with_disagreements(self, client):
        self._label_all(client)
        s = client.get("/consistency/start?n=10&seed=1").json()
        assert s["n"] == 10 and s["index"] == 0 and not s["done"]
        disagreed = 0
        while not s["done"]:
            eid = s["current"]["id"]
            original = int(eid.split("-")[1]) % 2
            answer = original
            if disagreed < 2:  # inject two disagreements
                answer = 1 - original
                disagreed += 1
            s = client.post("/consistency/answer", json={"label": answer}).json()
        assert s["agreement_rate"] == pytest.approx(0.8)
        assert s["noise_estimate"] == pytest.approx(0.4)
        assert len(s["disagreements"]) == 2

    def test_state_resume(self, client):
        self._label_all(client)
        client.get("/consistency/start?n=5&seed=2")
        client.post("/consistency/answer", json={"label": 0})
        st = client.get("/consistency/state").json()
        assert st["index"] == 1 and not st["done"]

    def test_start_too_large(self, client):
        assert client.get("/consistency/start?n=5").status_code == 400

    def test_no_session_404(self, client):
        assert client.get("/consistency/state").status_code == 404
