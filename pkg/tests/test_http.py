"""API surface tests against a real threaded server on an ephemeral port."""

import json
import threading
import urllib.error
import urllib.request

import pytest

from strokescreen.service.api import make_server
from strokescreen.service.core import ScreeningService
from strokescreen.service.store import SessionStore
from strokescreen.vitals import format_vitals_csv
from tests.test_service import normal_stream, positive_artifacts, risk_stream


@pytest.fixture()
def server(tiny_bundle, tmp_path):
    service = ScreeningService(tiny_bundle, SessionStore(tmp_path / "store"))
    srv = make_server(service, port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{srv.server_address[1]}"
    yield base
    srv.shutdown()


def call(method, url, payload=None, content_type="application/json"):
    data = None
    if payload is not None:
        data = payload if isinstance(payload, bytes) else json.dumps(payload).encode()
    req = urllib.request.Request(url, data=data, method=method)
    if data is not None:
        req.add_header("Content-Type", content_type)
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read().decode())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read().decode())


def make_session(base):
    status, view = call("POST", f"{base}/v1/sessions")
    assert status == 200
    return view["session_id"]


def alert_session(base):
    sid = make_session(base)
    rows = [s.__dict__ for s in risk_stream()]
    status, view = call("POST", f"{base}/v1/sessions/{sid}/vitals", rows)
    assert status == 200 and view["state"] == "ALERT"
    return sid


class TestRoutes:
    def test_create_and_view(self, server):
        sid = make_session(server)
        status, view = call("GET", f"{server}/v1/sessions/{sid}")
        assert status == 200
        assert view["state"] == "MONITORING"
        assert view["tier"] == 1

    def test_unknown_session_404(self, server):
        status, body = call("GET", f"{server}/v1/sessions/deadbeef0000")
        assert status == 404
        assert "error" in body

    def test_vitals_json_single_and_batch(self, server):
        sid = make_session(server)
        samples = [s.__dict__ for s in normal_stream()[:3]]
        status, view = call("POST", f"{server}/v1/sessions/{sid}/vitals", samples[0])
        assert status == 200 and view["last_seq"] == 1
        status, view = call("POST", f"{server}/v1/sessions/{sid}/vitals", samples[1:])
        assert status == 200 and view["last_seq"] == 3

    def test_vitals_csv_batch(self, server):
        sid = make_session(server)
        csv = format_vitals_csv(normal_stream()[:4]).encode()
        status, view = call(
            "POST", f"{server}/v1/sessions/{sid}/vitals", csv, content_type="text/csv"
        )
        assert status == 200
        assert view["last_seq"] == 4

    def test_malformed_vitals_400(self, server):
        sid = make_session(server)
        status, body = call("POST", f"{server}/v1/sessions/{sid}/vitals", {"nope": 1})
        assert status == 400

    def test_capture_out_of_order_409(self, server):
        sid = make_session(server)
        voice, _, _ = positive_artifacts()
        status, body = call(
            "POST", f"{server}/v1/sessions/{sid}/capture/voice", voice,
            content_type="application/octet-stream",
        )
        assert status == 409
        assert "alert" in body["error"]

    def test_full_flow_and_diagnosis_payload(self, server):
        voice, face, retina = positive_artifacts()
        sid = alert_session(server)
        for modality, blob in (("voice", voice), ("face", face), ("retina", retina)):
            status, view = call(
                "POST", f"{server}/v1/sessions/{sid}/capture/{modality}", blob,
                content_type="application/octet-stream",
            )
            assert status == 200
            assert 0.0 < view["confidence"] < 1.0
        status, diagnosis = call("GET", f"{server}/v1/sessions/{sid}/diagnosis")
        assert status == 200
        assert diagnosis["at_risk"] is True
        assert 50.0 <= diagnosis["risk_percent"] <= 100.0
        # reading twice returns identical bytes
        status2, again = call("GET", f"{server}/v1/sessions/{sid}/diagnosis")
        assert again == diagnosis

    def test_diagnosis_before_ready_409(self, server):
        sid = make_session(server)
        status, _ = call("GET", f"{server}/v1/sessions/{sid}/diagnosis")
        assert status == 409

    def test_bad_capture_payload_400(self, server):
        sid = alert_session(server)
        status, _ = call(
            "POST", f"{server}/v1/sessions/{sid}/capture/voice", b"garbage",
            content_type="application/octet-stream",
        )
        assert status == 400

    def test_events_since_and_long_poll(self, server):
        sid = make_session(server)
        rows = [s.__dict__ for s in normal_stream()[:3]]
        call("POST", f"{server}/v1/sessions/{sid}/vitals", rows)
        status, body = call("GET", f"{server}/v1/sessions/{sid}/events?since=1")
        assert status == 200
        assert [e["sequence"] for e in body["events"]] == [2, 3]

        # long-poll: a writer thread appends while the poll waits
        def later():
            call("POST", f"{server}/v1/sessions/{sid}/vitals", [rows[0] | {"timestamp_ms": rows[-1]["timestamp_ms"] + 1000}])

        t = threading.Timer(0.2, later)
        t.start()
        status, body = call("GET", f"{server}/v1/sessions/{sid}/events?since=3&wait=5")
        t.join()
        assert status == 200
        assert [e["sequence"] for e in body["events"]] == [4]

    def test_events_resume_covers_everything(self, server):
        """Resume-by-sequence: chunked reads reconstruct the full event list."""
        voice, face, retina = positive_artifacts()
        sid = alert_session(server)
        for modality, blob in (("voice", voice), ("face", face), ("retina", retina)):
            call(
                "POST", f"{server}/v1/sessions/{sid}/capture/{modality}", blob,
                content_type="application/octet-stream",
            )
        _, full = call("GET", f"{server}/v1/sessions/{sid}/events")
        seen = []
        since = 0
        while True:
            _, chunk = call("GET", f"{server}/v1/sessions/{sid}/events?since={since}")
            if not chunk["events"]:
                break
            seen += chunk["events"]
            since = seen[-1]["sequence"]
        assert seen == full["events"]
        assert [e["sequence"] for e in seen] == list(range(1, len(seen) + 1))

    def test_clear_route(self, server):
        sid = alert_session(server)
        status, view = call("POST", f"{server}/v1/sessions/{sid}/clear")
        assert status == 200 and view["state"] == "MONITORING"

    def test_unroutable_404(self, server):
        status, _ = call("GET", f"{server}/v1/nonsense")
        assert status == 404
