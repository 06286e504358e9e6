import numpy as np
import pytest

from fastapi.testclient import TestClient

import activepool as ap
from activepool.service import create_app


def base_config(rounds=2):
    return {
        "dataset": {"kind": "two_gaussians", "n_per_class": 40, "separation": 3.0, "noise_sd": 1.0},
        "n_init": 6,
        "n_query": 3,
        "rounds": rounds,
        "test_fraction": 0.25,
        "net": {"layer_widths": [2, 6, 2], "dropout_rate": 0.2},
        "train": {"epochs": 20, "batch_size": 16, "learning_rate": 0.1},
        "strategy": {"kind": "entropy"},
        "seed": 0,
    }


@pytest.fixture()
def client():
    return TestClient(create_app())


def create(client, mode="simulated", rounds=2):
    resp = client.post("/sessions", json={"config": base_config(rounds), "mode": mode})
    assert resp.status_code == 200, resp.text
    return resp.json()


class TestCreateSession:
    def test_same_config_same_round0_accuracy(self, client):
        a = create(client)
        b = create(client)
        assert a["accuracy"] == b["accuracy"]
        assert a["session_id"] != b["session_id"]

    def test_invalid_config_rejected(self, client):
        cfg = base_config()
        cfg["n_query"] = 0
        resp = client.post("/sessions", json={"config": cfg, "mode": "simulated"})
        assert resp.status_code == 422
        assert resp.json()["detail"]["code"] == "invalid_config"

    def test_unknown_mode_rejected(self, client):
        resp = client.post("/sessions", json={"config": base_config(), "mode": "psychic"})
        assert resp.status_code == 422

    def test_unknown_session_not_found(self, client):
        resp = client.get("/sessions/nope/curve")
        assert resp.status_code == 404
        assert resp.json()["detail"]["code"] == "session_not_found"


class TestSimulatedMode:
    def test_two_rounds_then_done(self, client):
        sid = create(client, rounds=2)["session_id"]
        for _ in range(2):
            resp = client.post(f"/sessions/{sid}/advance")
            assert resp.json()["done"] is False
        assert client.post(f"/sessions/{sid}/advance").json()["done"] is True

    def test_matches_harness_exactly(self, client):
        sid = create(client, rounds=3)["session_id"]
        while not client.post(f"/sessions/{sid}/advance").json().get("done"):
            pass
        api_records = client.get(f"/sessions/{sid}/curve").json()["records"]
        harness_records = ap.run_experiment(ap.config_from_dict(base_config(rounds=3)))
        assert len(api_records) == len(harness_records)
        for a, h in zip(api_records, harness_records):
            assert a["accuracy"] == h.accuracy
            assert a["selected_indices"] == h.selected
            assert a["n_labeled"] == h.n_labeled

    def test_labels_rejected_in_simulated_mode(self, client):
        sid = create(client)["session_id"]
        resp = client.post(f"/sessions/{sid}/labels", json={"labels": [{"index": 0, "label": 0}]})
        assert resp.status_code == 409


class TestHumanMode:
    def test_advance_returns_pending_items(self, client):
        sid = create(client, mode="human")["session_id"]
        body = client.post(f"/sessions/{sid}/advance").json()
        assert len(body["pending"]) == 3
        for item in body["pending"]:
            assert set(item) == {"index", "features", "render"}
            assert item["render"]["kind"] == "scatter2d"

    def test_pending_payload_hides_ground_truth(self, client):
        sid = create(client, mode="human")["session_id"]
        client.post(f"/sessions/{sid}/advance")
        body = client.get(f"/sessions/{sid}/pending").json()
        text = str(body)
        assert "label" not in text.lower() or all("label" not in item for item in body["pending"])

    def test_advance_with_pending_conflicts(self, client):
        sid = create(client, mode="human")["session_id"]
        client.post(f"/sessions/{sid}/advance")
        resp = client.post(f"/sessions/{sid}/advance")
        assert resp.status_code == 409
        assert resp.json()["detail"]["code"] == "labels_pending"

    def test_partial_submission_defers_retrain(self, client):
        sid = create(client, mode="human")["session_id"]
        pending = client.post(f"/sessions/{sid}/advance").json()["pending"]
        first = pending[0]["index"]
        resp = client.post(
            f"/sessions/{sid}/labels", json={"labels": [{"index": first, "label": 0}]}
        )
        assert resp.json()["remaining"] == 2
        curve = client.get(f"/sessions/{sid}/curve").json()["records"]
        assert len(curve) == 1  # no retrain yet

    def test_full_submission_appends_record(self, client):
        sid = create(client, mode="human")["session_id"]
        pending = client.post(f"/sessions/{sid}/advance").json()["pending"]
        labels = [{"index": p["index"], "label": 0} for p in pending]
        resp = client.post(f"/sessions/{sid}/labels", json={"labels": labels})
        assert resp.json()["remaining"] == 0
        assert "record" in resp.json()
        curve = client.get(f"/sessions/{sid}/curve").json()["records"]
        assert len(curve) == 2

    def test_label_out_of_range(self, client):
        sid = create(client, mode="human")["session_id"]
        pending = client.post(f"/sessions/{sid}/advance").json()["pending"]
        resp = client.post(
            f"/sessions/{sid}/labels",
            json={"labels": [{"index": pending[0]["index"], "label": 9}]},
        )
        assert resp.status_code == 422
        assert resp.json()["detail"]["code"] == "label_out_of_range"

    def test_non_pending_index_rejected(self, client):
        sid = create(client, mode="human")["session_id"]
        client.post(f"/sessions/{sid}/advance")
        resp = client.post(
            f"/sessions/{sid}/labels", json={"labels": [{"index": 999999, "label": 0}]}
        )
        assert resp.status_code == 422
        assert resp.json()["detail"]["code"] == "not_pending"

    def test_ground_truth_labels_reproduce_simulated_curve(self, client):
        sim = create(client, rounds=2)
        sim_id = sim["session_id"]
        while not client.post(f"/sessions/{sim_id}/advance").json().get("done"):
            pass
        sim_curve = client.get(f"/sessions/{sim_id}/curve").json()["records"]

        # replay with a human who happens to agree with the hidden oracle
        hum_id = create(client, mode="human", rounds=2)["session_id"]
        cfg = ap.config_from_dict(base_config(rounds=2))
        oracle_engine = ap.ExperimentEngine(cfg)
        truth = oracle_engine.pool.Y_train
        while True:
            body = client.post(f"/sessions/{hum_id}/advance").json()
            if body.get("done"):
                break
            labels = [
                {"index": p["index"], "label": int(truth[p["index"]])} for p in body["pending"]
            ]
            client.post(f"/sessions/{hum_id}/labels", json={"labels": labels})
        hum_curve = client.get(f"/sessions/{hum_id}/curve").json()["records"]
        assert [r["accuracy"] for r in hum_curve] == [r["accuracy"] for r in sim_curve]
        assert [r["selected_indices"] for r in hum_curve] == [
            r["selected_indices"] for r in sim_curve
        ]


class TestReadEndpoints:
    def test_fresh_session_curve_has_round0(self, client):
        sid = create(client)["session_id"]
        body = client.get(f"/sessions/{sid}/curve").json()
        assert len(body["records"]) == 1
        assert body["records"][0]["round"] == 0

    def test_config_echo(self, client):
        sid = create(client)["session_id"]
        body = client.get(f"/sessions/{sid}/config").json()
        assert body["mode"] == "simulated"
        assert body["config"]["n_query"] == 3

    def test_snapshot_written(self, tmp_path):
        client = TestClient(create_app(snapshot_dir=tmp_path))
        sid = create(client)["session_id"]
        client.post(f"/sessions/{sid}/advance")
        assert (tmp_path / f"{sid}.json").exists()
