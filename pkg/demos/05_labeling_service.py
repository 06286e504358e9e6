"""Drive the labeling HTTP service end to end, playing the human annotator.

Starts the server in a background thread, opens a human-mode session,
labels each queried point by its true blob side, and prints the curve.
"""

import json
import threading
import time
import urllib.request

import uvicorn

from activepool.service import create_app

HOST, PORT = "127.0.0.1", 8731
BASE = f"http://{HOST}:{PORT}"


def call(method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        BASE + path, data=data, method=method, headers={"Content-Type": "application/json"}
    )
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


server = uvicorn.Server(uvicorn.Config(create_app(), host=HOST, port=PORT, log_level="error"))
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.05)

config = {
    "dataset": {"kind": "two_gaussians", "n_per_class": 100, "separation": 4.0, "noise_sd": 0.0},
    "n_init": 8,
    "n_query": 4,
    "rounds": 3,
    "net": {"layer_widths": [2, 8, 2], "dropout_rate": 0.2},
    "train": {"epochs": 50, "batch_size": 10, "learning_rate": 0.1},
    "strategy": {"kind": "entropy"},
    "seed": 0,
}

session = call("POST", "/sessions", {"config": config, "mode": "human"})
sid = session["session_id"]
print(f"session {sid}: round-0 accuracy {session['accuracy']:.3f}")

while True:
    body = call("POST", f"/sessions/{sid}/advance")
    if body.get("done"):
        break
    # noise 0 puts class 1 strictly on the positive-x side, so the "human"
    # can label every pending card from its coordinates alone
    labels = [
        {"index": item["index"], "label": int(item["features"][0] > 0)}
        for item in body["pending"]
    ]
    result = call("POST", f"/sessions/{sid}/labels", {"labels": labels})
    rec = result["record"]
    print(f"labeled {len(labels)} -> round {rec['round']}: accuracy {rec['accuracy']:.3f}")

curve = call("GET", f"/sessions/{sid}/curve")
print("final curve:", [round(r["accuracy"], 3) for r in curve["records"]])
server.should_exit = True
