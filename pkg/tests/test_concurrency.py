"""Concurrent use: shared trained models and independent sessions."""

import json
import threading
import urllib.request

import numpy as np

from strokescreen.nn import Tensor, build_model, forward
from strokescreen.service.api import make_server
from strokescreen.service.core import ScreeningService
from strokescreen.service.store import SessionStore
from strokescreen.vision import retina_layers
from tests.test_service import normal_stream, risk_stream


def test_trained_model_shared_across_threads():
    model = build_model(retina_layers(), seed=0)
    rng = np.random.default_rng(0)
    inputs = [Tensor([1, 64, 64], rng.normal(size=4096)) for _ in range(8)]
    expected = [forward(model, t).array for t in inputs]
    results = [None] * 8
    errors = []

    def work(i):
        try:
            for _ in range(5):
                results[i] = forward(model, inputs[i]).array
        except Exception as exc:  # pragma: no cover - failure path
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    for got, want in zip(results, expected):
        assert np.array_equal(got, want)


def test_concurrent_sessions_do_not_interfere(tiny_bundle, tmp_path):
    service = ScreeningService(tiny_bundle, SessionStore(tmp_path / "store"))
    n = 6
    sids = [service.create_session()["session_id"] for _ in range(n)]
    streams = [risk_stream(seed=920 + i) if i % 2 else normal_stream(seed=920 + i) for i in range(n)]
    errors = []

    def work(i):
        try:
            for sample in streams[i]:
                service.ingest_vitals(sids[i], [sample])
        except Exception as exc:  # pragma: no cover
            errors.append((i, exc))

    threads = [threading.Thread(target=work, args=(i,)) for i in range(n)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    for i, sid in enumerate(sids):
        view = service.get_view(sid)
        assert view["last_seq"] >= len(streams[i]) or view["state"] != "MONITORING"
        if i % 2:
            assert view["state"] == "ALERT"
        else:
            assert view["state"] == "MONITORING"
        events = service.get_events(sid)["events"]
        assert [e["sequence"] for e in events] == list(range(1, view["last_seq"] + 1))


def test_parallel_http_clients(tiny_bundle, tmp_path):
    service = ScreeningService(tiny_bundle, SessionStore(tmp_path / "store"))
    srv = make_server(service, port=0)
    threading.Thread(target=srv.serve_forever, daemon=True).start()
    base = f"http://127.0.0.1:{srv.server_address[1]}"
    try:
        results = {}

        def run_one(i):
            body = urllib.request.urlopen(
                urllib.request.Request(f"{base}/v1/sessions", method="POST")
            ).read()
            sid = json.loads(body)["session_id"]
            rows = [s.__dict__ for s in normal_stream(n=10, seed=930 + i)]
            req = urllib.request.Request(
                f"{base}/v1/sessions/{sid}/vitals",
                data=json.dumps(rows).encode(),
                method="POST",
            )
            req.add_header("Content-Type", "application/json")
            results[i] = json.loads(urllib.request.urlopen(req).read())

        threads = [threading.Thread(target=run_one, args=(i,)) for i in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(results) == 8
        assert all(v["last_seq"] == 10 for v in results.values())
    finally:
        srv.shutdown()
