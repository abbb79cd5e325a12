"""Screening-session state machine, reconstructed purely from its event log.

States walk MONITORING -> ALERT -> TIER2_PENDING -> TIER3_PENDING ->
DIAGNOSED, plus the manual ALERT -> MONITORING clear. Detector outputs are
recorded inside events, so replaying a log never re-runs models and always
reproduces the live state bit for bit.

Event kinds: vitals, alert, capture, confidence, diagnosis, clear. The
"clear" kind is an addition over the baseline five; without it the manual
ALERT -> MONITORING transition could not be replayed from the log.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from strokescreen.errors import StrokeScreenError
from strokescreen.vitals import ThresholdMonitor, ThresholdPolicy, VitalsSample

__all__ = [
    "SessionError",
    "TierOrderError",
    "UnknownSessionError",
    "SessionState",
    "EventRecord",
    "ScreeningSession",
    "replay",
    "CAPTURE_MODALITIES",
    "EVENT_KINDS",
]

CAPTURE_MODALITIES = ("voice", "face", "retina")

EVENT_KINDS = ("vitals", "alert", "capture", "confidence", "diagnosis", "clear")


class SessionError(StrokeScreenError):
    pass


class TierOrderError(SessionError):
    """Action violates the tier ordering for the current state."""


class UnknownSessionError(SessionError):
    pass


class SessionState(str, Enum):
    MONITORING = "MONITORING"
    ALERT = "ALERT"
    TIER2_PENDING = "TIER2_PENDING"
    TIER3_PENDING = "TIER3_PENDING"
    DIAGNOSED = "DIAGNOSED"


@dataclass(frozen=True)
class EventRecord:
    sequence: int
    timestamp_ms: int
    kind: str
    payload: dict

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise SessionError(f"unknown event kind {self.kind!r}")

    def to_json(self) -> dict:
        return {
            "sequence": self.sequence,
            "timestamp_ms": self.timestamp_ms,
            "kind": self.kind,
            "payload": self.payload,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EventRecord":
        return cls(
            sequence=int(obj["sequence"]),
            timestamp_ms=int(obj["timestamp_ms"]),
            kind=str(obj["kind"]),
            payload=dict(obj["payload"]),
        )


VITALS_WINDOW = 120


@dataclass
class ScreeningSession:
    """State derived by folding events; mutate only through apply()."""

    session_id: str
    policy: ThresholdPolicy = field(default_factory=ThresholdPolicy)
    state: SessionState = SessionState.MONITORING
    captures: dict = field(default_factory=dict)  # modality -> blob digest
    confidences: dict = field(default_factory=dict)  # modality -> float
    vitals_window: list = field(default_factory=list)  # recent VitalsSample
    alert: dict | None = None
    diagnosis: dict | None = None
    last_seq: int = 0
    events: list = field(default_factory=list)

    def __post_init__(self):
        self._monitor = ThresholdMonitor(self.policy)

    def latest_sample(self) -> VitalsSample | None:
        return self.vitals_window[-1] if self.vitals_window else None

    def next_seq(self) -> int:
        return self.last_seq + 1

    def tier(self) -> int:
        return {
            SessionState.MONITORING: 1,
            SessionState.ALERT: 2,
            SessionState.TIER2_PENDING: 2,
            SessionState.TIER3_PENDING: 3,
            SessionState.DIAGNOSED: 3,
        }[self.state]

    # -- event application -------------------------------------------------

    def apply(self, event: EventRecord) -> None:
        """Fold one event into the state; event logs are trusted, commands are not."""
        if event.sequence != self.last_seq + 1:
            raise SessionError(
                f"sequence gap: expected {self.last_seq + 1}, got {event.sequence}"
            )
        handler = getattr(self, f"_apply_{event.kind}")
        handler(event)
        self.events.append(event)
        self.last_seq = event.sequence

    def _apply_vitals(self, event: EventRecord) -> None:
        sample = VitalsSample(**event.payload["sample"])
        self.vitals_window.append(sample)
        del self.vitals_window[:-VITALS_WINDOW]
        if self.state is SessionState.MONITORING:
            self._monitor.push(sample)

    def _apply_alert(self, event: EventRecord) -> None:
        if self.state is not SessionState.MONITORING:
            raise SessionError(f"alert event in state {self.state}")
        self.alert = dict(event.payload)
        self.state = SessionState.ALERT

    def _apply_clear(self, event: EventRecord) -> None:
        if self.state is not SessionState.ALERT:
            raise SessionError(f"clear event in state {self.state}")
        self.alert = None
        self.state = SessionState.MONITORING
        self._monitor = ThresholdMonitor(self.policy)

    def _apply_capture(self, event: EventRecord) -> None:
        modality = event.payload["modality"]
        if modality not in CAPTURE_MODALITIES:
            raise SessionError(f"unknown capture modality {modality!r}")
        self.captures[modality] = event.payload["digest"]
        if modality in ("voice", "face") and self.state is SessionState.ALERT:
            self.state = SessionState.TIER2_PENDING

    def _apply_confidence(self, event: EventRecord) -> None:
        modality = event.payload["modality"]
        self.confidences[modality] = float(event.payload["value"])
        if (
            self.state in (SessionState.ALERT, SessionState.TIER2_PENDING)
            and "voice" in self.confidences
            and "face" in self.confidences
        ):
            self.state = SessionState.TIER3_PENDING

    def _apply_diagnosis(self, event: EventRecord) -> None:
        if self.state is not SessionState.TIER3_PENDING:
            raise SessionError(f"diagnosis event in state {self.state}")
        self.diagnosis = dict(event.payload)
        self.state = SessionState.DIAGNOSED

    # -- command-side validation helpers -----------------------------------

    def check_vitals_allowed(self) -> None:
        pass  # vitals may arrive in any state; they are always recorded

    def check_capture_allowed(self, modality: str) -> None:
        if modality not in CAPTURE_MODALITIES:
            raise SessionError(f"unknown capture modality {modality!r}")
        if self.state is SessionState.MONITORING:
            raise TierOrderError("no active alert; captures start at tier 2")
        if self.state is SessionState.DIAGNOSED:
            raise TierOrderError("session already diagnosed")
        if modality == "retina":
            if self.state is not SessionState.TIER3_PENDING:
                raise TierOrderError("complete voice and face first")
        else:
            if self.state is SessionState.TIER3_PENDING:
                raise TierOrderError("tier 2 already complete")

    def check_diagnose_allowed(self) -> None:
        if self.state is SessionState.DIAGNOSED:
            return
        if self.state is not SessionState.TIER3_PENDING:
            raise TierOrderError("voice and face confidences required before diagnosis")
        if not self.vitals_window:
            raise SessionError("no vitals recorded; vascular confidence unavailable")

    def check_clear_allowed(self) -> None:
        if self.state is not SessionState.ALERT:
            raise TierOrderError("only an un-acted-on alert can be cleared")

    def to_view(self) -> dict:
        return {
            "session_id": self.session_id,
            "state": self.state.value,
            "tier": self.tier(),
            "captures": dict(self.captures),
            "confidences": dict(self.confidences),
            "alert": self.alert,
            "diagnosis": self.diagnosis,
            "last_seq": self.last_seq,
        }


def replay(session_id: str, events, policy: ThresholdPolicy | None = None) -> ScreeningSession:
    session = ScreeningSession(session_id, policy=policy or ThresholdPolicy())
    for event in events:
        session.apply(event)
    return session
