"""HTTP+JSON surface over the screening service.

    POST /v1/sessions                          -> new session view
    POST /v1/sessions/{id}/vitals              JSON sample or CSV batch
    POST /v1/sessions/{id}/capture/{modality}  binary body (WAV / PGM-PPM / pts)
    POST /v1/sessions/{id}/clear               manual alert clear
    GET  /v1/sessions/{id}                     state + counters
    GET  /v1/sessions/{id}/diagnosis
    GET  /v1/sessions/{id}/events?since=N&wait=S   long-poll for the console

Errors: 400 malformed input, 404 unknown session, 409 tier-order violation.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from strokescreen.errors import StrokeScreenError
from strokescreen.service.core import ScreeningService
from strokescreen.service.session import TierOrderError, UnknownSessionError
from strokescreen.vitals import VitalsSample, parse_vitals_csv

__all__ = ["make_server", "serve_forever"]

_SESSION = r"(?P<sid>[0-9a-f]+)"
_ROUTES = [
    ("POST", re.compile(r"^/v1/sessions$"), "create"),
    ("POST", re.compile(rf"^/v1/sessions/{_SESSION}/vitals$"), "vitals"),
    ("POST", re.compile(rf"^/v1/sessions/{_SESSION}/capture/(?P<modality>[a-z]+)$"), "capture"),
    ("POST", re.compile(rf"^/v1/sessions/{_SESSION}/clear$"), "clear"),
    ("POST", re.compile(rf"^/v1/sessions/{_SESSION}/diagnose$"), "diagnose"),
    ("GET", re.compile(rf"^/v1/sessions/{_SESSION}$"), "view"),
    ("GET", re.compile(rf"^/v1/sessions/{_SESSION}/diagnosis$"), "diagnosis"),
    ("GET", re.compile(rf"^/v1/sessions/{_SESSION}/events$"), "events"),
]

MAX_BODY = 64 * 1024 * 1024
MAX_WAIT_S = 25.0


class _Handler(BaseHTTPRequestHandler):
    service: ScreeningService
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- helpers ------------------------------------------------------------

    def _body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY:
            raise StrokeScreenError(f"body too large ({length} bytes)")
        return self.rfile.read(length) if length else b""

    def _send(self, code: int, obj: dict) -> None:
        data = json.dumps(obj).encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _query(self) -> dict:
        if "?" not in self.path:
            return {}
        out = {}
        for part in self.path.split("?", 1)[1].split("&"):
            if "=" in part:
                k, v = part.split("=", 1)
                out[k] = v
        return out

    def _dispatch(self, method: str) -> None:
        path = self.path.split("?", 1)[0]
        for m, pattern, name in _ROUTES:
            if m != method:
                continue
            match = pattern.match(path)
            if match:
                try:
                    getattr(self, f"_handle_{name}")(**match.groupdict())
                except UnknownSessionError as exc:
                    self._send(404, {"error": str(exc)})
                except TierOrderError as exc:
                    self._send(409, {"error": str(exc)})
                except (StrokeScreenError, ValueError, KeyError, json.JSONDecodeError) as exc:
                    self._send(400, {"error": str(exc)})
                return
        self._send(404, {"error": f"no route for {method} {path}"})

    def do_GET(self):  # noqa: N802 (stdlib handler naming)
        self._dispatch("GET")

    def do_POST(self):  # noqa: N802
        self._dispatch("POST")

    def do_OPTIONS(self):  # noqa: N802 (CORS preflight for the console)
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- handlers -----------------------------------------------------------

    def _handle_create(self):
        self._send(200, self.service.create_session())

    def _handle_vitals(self, sid: str):
        body = self._body()
        ctype = (self.headers.get("Content-Type") or "").split(";")[0].strip()
        if ctype == "text/csv":
            samples = parse_vitals_csv(body)
        else:
            obj = json.loads(body.decode("utf-8"))
            rows = obj if isinstance(obj, list) else [obj]
            samples = [
                VitalsSample(
                    timestamp_ms=int(r["timestamp_ms"]),
                    systolic=float(r["systolic"]),
                    diastolic=float(r["diastolic"]),
                    heart_rate=float(r["heart_rate"]),
                    spo2=float(r["spo2"]),
                )
                for r in rows
            ]
        self._send(200, self.service.ingest_vitals(sid, samples))

    def _handle_capture(self, sid: str, modality: str):
        view = self.service.submit_capture(sid, modality, self._body())
        self._send(200, view)

    def _handle_clear(self, sid: str):
        self._send(200, self.service.clear_alert(sid))

    def _handle_diagnose(self, sid: str):
        self._send(200, self.service.diagnose(sid))

    def _handle_view(self, sid: str):
        self._send(200, self.service.get_view(sid))

    def _handle_diagnosis(self, sid: str):
        self._send(200, self.service.get_diagnosis(sid))

    def _handle_events(self, sid: str):
        q = self._query()
        since = int(q.get("since", 0))
        wait = min(float(q.get("wait", 0.0)), MAX_WAIT_S)
        self._send(200, self.service.get_events(sid, since=since, wait_s=wait))


def make_server(service: ScreeningService, host: str = "127.0.0.1", port: int = 0):
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(service: ScreeningService, host: str, port: int):
    server = make_server(service, host, port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread
