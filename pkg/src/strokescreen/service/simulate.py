"""Scenario driver: streams synthetic vitals into a live session over HTTP.

"normal" stays around healthy means for the whole run; "stroke" starts
healthy and spikes after a third of the samples, which trips the tier-1
threshold alert. Sample timestamps step 1 s regardless of the send rate.
"""

from __future__ import annotations

import json
import time
import urllib.request

from strokescreen.synth.spec import CorpusSpec
from strokescreen.synth.vitalgen import gen_vitals

__all__ = ["scenario_stream", "run_simulation", "http_json"]


def scenario_stream(scenario: str, n_samples: int, seed: int):
    """The vitals list a scenario sends; difficulty 0 so thresholds genuinely trip."""
    label = 1 if scenario == "stroke" else 0
    spec = CorpusSpec("vascular", 1, difficulty=0.0, seed=seed)
    items = gen_vitals(spec, stream_len=n_samples)
    return [stream for stream, lab in items if lab == label][0]


def http_json(method: str, url: str, payload=None, content_type="application/json"):
    data = None
    if payload is not None:
        data = payload if isinstance(payload, bytes) else json.dumps(payload).encode()
    req = urllib.request.Request(url, data=data, method=method)
    if data is not None:
        req.add_header("Content-Type", content_type)
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read().decode("utf-8"))


def run_simulation(
    target: str,
    scenario: str,
    rate_hz: float = 2.0,
    n_samples: int = 60,
    seed: int = 0,
    session_id: str | None = None,
    stop_on_alert: bool = True,
) -> dict:
    base = target.rstrip("/")
    if session_id is None:
        session_id = http_json("POST", f"{base}/v1/sessions")["session_id"]
    stream = scenario_stream(scenario, n_samples, seed)
    delay = 1.0 / rate_hz if rate_hz > 0 else 0.0
    sent = 0
    alert = None
    for sample in stream:
        view = http_json(
            "POST", f"{base}/v1/sessions/{session_id}/vitals", sample.__dict__
        )
        sent += 1
        if view.get("alert_fired") or view.get("alert"):
            alert = view.get("alert")
            if stop_on_alert:
                break
        if delay:
            time.sleep(delay)
    return {
        "session_id": session_id,
        "scenario": scenario,
        "samples_sent": sent,
        "alert": alert,
        "state": http_json("GET", f"{base}/v1/sessions/{session_id}")["state"],
    }
