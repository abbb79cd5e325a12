"""Screening service: commands validate, detectors run, events append.

One lock + condition pair per session serializes writers and wakes
long-pollers; distinct sessions proceed independently. Every state change
goes through the event log first, so a crash at any point recovers to
exactly the state the log prescribes.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass
from pathlib import Path

from strokescreen.audio import decode_wav, vocal_confidence
from strokescreen.face import parse_landmarks, paralysis_confidence
from strokescreen.fusion import FusionInput, fuse
from strokescreen.nn.io import load_model
from strokescreen.nn.model import Model
from strokescreen.service.session import (
    CAPTURE_MODALITIES,
    EventRecord,
    ScreeningSession,
    SessionError,
    SessionState,
    TierOrderError,
    UnknownSessionError,
)
from strokescreen.service.store import SessionStore
from strokescreen.svm import SvmModel, load_svm
from strokescreen.vision import decode_image, retina_confidence
from strokescreen.vitals import VitalsSample, vascular_confidence

__all__ = ["ModelBundle", "ScreeningService", "MODEL_FILES"]

MODEL_FILES = {
    "vocal": "vocal.ssmd",
    "retina": "retina.ssmd",
    "face": "face.ssmd",
    "vascular": "vascular.ssmd",
    "fusion": "fusion.ssmd",
}


@dataclass(frozen=True)
class ModelBundle:
    vocal: Model
    retina: Model
    face: SvmModel
    vascular: SvmModel
    fusion: SvmModel

    @classmethod
    def load(cls, models_dir: str | Path) -> "ModelBundle":
        d = Path(models_dir)
        return cls(
            vocal=load_model(d / MODEL_FILES["vocal"]),
            retina=load_model(d / MODEL_FILES["retina"]),
            face=load_svm(d / MODEL_FILES["face"]),
            vascular=load_svm(d / MODEL_FILES["vascular"]),
            fusion=load_svm(d / MODEL_FILES["fusion"]),
        )


def _now_ms() -> int:
    return int(time.time() * 1000)


class _Slot:
    def __init__(self, session: ScreeningSession):
        self.session = session
        self.lock = threading.Lock()
        self.changed = threading.Condition(self.lock)


class ScreeningService:
    def __init__(self, models: ModelBundle, store: SessionStore):
        self.models = models
        self.store = store
        self._slots: dict[str, _Slot] = {}
        self._registry_lock = threading.Lock()
        for session_id in store.session_ids():
            self._slots[session_id] = _Slot(store.recover(session_id))

    # -- plumbing -----------------------------------------------------------

    def _slot(self, session_id: str) -> _Slot:
        with self._registry_lock:
            slot = self._slots.get(session_id)
        if slot is None:
            raise UnknownSessionError(f"unknown session {session_id}")
        return slot

    def _emit(self, slot: _Slot, kind: str, payload: dict) -> EventRecord:
        event = EventRecord(
            sequence=slot.session.next_seq(),
            timestamp_ms=_now_ms(),
            kind=kind,
            payload=payload,
        )
        self.store.log_for(slot.session.session_id).append(event)
        slot.session.apply(event)
        slot.changed.notify_all()
        return event

    # -- commands -----------------------------------------------------------

    def create_session(self) -> dict:
        session_id = uuid.uuid4().hex[:12]
        self.store.create(session_id)
        slot = _Slot(ScreeningSession(session_id))
        with self._registry_lock:
            self._slots[session_id] = slot
        return slot.session.to_view()

    def ingest_vitals(self, session_id: str, samples: list[VitalsSample]) -> dict:
        slot = self._slot(session_id)
        with slot.lock:
            session = slot.session
            fired = None
            for sample in samples:
                sample.validate()
                last = session.latest_sample()
                if last is not None and sample.timestamp_ms <= last.timestamp_ms:
                    raise SessionError(
                        f"timestamps must strictly increase: {sample.timestamp_ms} "
                        f"after {last.timestamp_ms}"
                    )
                was_monitoring = session.state is SessionState.MONITORING
                self._emit(slot, "vitals", {"sample": sample.__dict__})
                alert = session._monitor.fired
                if was_monitoring and alert is not None and alert.fired:
                    fired = {
                        "reason": alert.reason,
                        "sample_index": alert.index,
                        "sample": sample.__dict__,
                    }
                    self._emit(slot, "alert", fired)
            view = session.to_view()
            view["alert_fired"] = fired is not None
            return view

    def clear_alert(self, session_id: str) -> dict:
        slot = self._slot(session_id)
        with slot.lock:
            slot.session.check_clear_allowed()
            self._emit(slot, "clear", {})
            return slot.session.to_view()

    def _confidence_for(self, modality: str, blob: bytes) -> float:
        if modality == "voice":
            return vocal_confidence(self.models.vocal, decode_wav(blob))
        if modality == "face":
            return paralysis_confidence(self.models.face, parse_landmarks(blob))
        return retina_confidence(self.models.retina, decode_image(blob))

    def submit_capture(self, session_id: str, modality: str, blob: bytes) -> dict:
        if modality not in CAPTURE_MODALITIES:
            raise SessionError(f"unknown capture modality {modality!r}")
        slot = self._slot(session_id)
        with slot.lock:
            session = slot.session
            session.check_capture_allowed(modality)
            # decode + detect before any event: a bad blob must not change state
            value = self._confidence_for(modality, blob)
            digest = self.store.blobs.put(blob)
            self._emit(
                slot, "capture", {"modality": modality, "digest": digest, "bytes": len(blob)}
            )
            self._emit(slot, "confidence", {"modality": modality, "value": value})
            if modality == "retina" and session.state is SessionState.TIER3_PENDING:
                self._diagnose_locked(slot)
            view = session.to_view()
            view["confidence"] = value
            return view

    def _diagnose_locked(self, slot: _Slot) -> dict:
        session = slot.session
        if session.diagnosis is not None:
            return session.diagnosis
        session.check_diagnose_allowed()
        sample = session.latest_sample()
        vasc = vascular_confidence(self.models.vascular, sample)
        self._emit(slot, "confidence", {"modality": "vascular", "value": vasc})
        fusion_input = FusionInput(
            vocal=session.confidences.get("voice"),
            vascular=vasc,
            retina=session.confidences.get("retina"),
            face=session.confidences.get("face"),
        )
        diagnosis = fuse(self.models.fusion, fusion_input)
        payload = {
            "at_risk": diagnosis.at_risk,
            "risk_percent": diagnosis.risk_percent,
            "contributions": list(diagnosis.contributions),
            "model_version": diagnosis.model_version,
            "imputed": list(diagnosis.imputed),
        }
        self._emit(slot, "diagnosis", payload)
        return payload

    def diagnose(self, session_id: str) -> dict:
        slot = self._slot(session_id)
        with slot.lock:
            return self._diagnose_locked(slot)

    # -- queries ------------------------------------------------------------

    def get_view(self, session_id: str) -> dict:
        slot = self._slot(session_id)
        with slot.lock:
            return slot.session.to_view()

    def get_diagnosis(self, session_id: str) -> dict:
        slot = self._slot(session_id)
        with slot.lock:
            if slot.session.diagnosis is None:
                raise TierOrderError("session not diagnosed yet")
            return dict(slot.session.diagnosis)

    def get_events(self, session_id: str, since: int = 0, wait_s: float = 0.0) -> dict:
        slot = self._slot(session_id)
        deadline = time.monotonic() + wait_s
        with slot.lock:
            while True:
                fresh = [e.to_json() for e in slot.session.events if e.sequence > since]
                if fresh or wait_s <= 0:
                    return {"events": fresh, "last_seq": slot.session.last_seq}
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    return {"events": [], "last_seq": slot.session.last_seq}
                slot.changed.wait(remaining)
