"""Durable session storage: append-only event logs plus content-addressed blobs.

Log record framing, per event:

    u32 payload length | u32 CRC-32 of payload | payload (UTF-8 JSON)

A torn final record (short header, short payload, or CRC mismatch at the
tail) is truncated away on recovery; corruption anywhere earlier is an
integrity error since the events before it can no longer be trusted to be
the complete story.

Blobs live under blobs/<digest[:2]>/<digest> keyed by SHA-256; reads verify
the digest, so silent bit rot surfaces as BlobIntegrityError.
"""

from __future__ import annotations

import hashlib
import json
import struct
import zlib
from pathlib import Path

from strokescreen.errors import StrokeScreenError
from strokescreen.service.session import EventRecord, ScreeningSession, replay

__all__ = ["StoreError", "BlobIntegrityError", "EventLog", "BlobStore", "SessionStore"]


class StoreError(StrokeScreenError):
    pass


class BlobIntegrityError(StoreError):
    pass


_HEADER = struct.Struct("<II")


class EventLog:
    """One append-only log file per session."""

    def __init__(self, path: Path):
        self.path = Path(path)

    def append(self, event: EventRecord) -> None:
        payload = json.dumps(event.to_json(), sort_keys=True).encode("utf-8")
        frame = _HEADER.pack(len(payload), zlib.crc32(payload)) + payload
        with open(self.path, "ab") as fh:
            fh.write(frame)
            fh.flush()

    def read_all(self, repair: bool = False) -> list[EventRecord]:
        """Decode every intact record; drop (optionally truncate) a torn tail."""
        if not self.path.exists():
            return []
        data = self.path.read_bytes()
        events: list[EventRecord] = []
        pos = 0
        good_end = 0
        while pos < len(data):
            if pos + _HEADER.size > len(data):
                break  # torn header at tail
            length, crc = _HEADER.unpack_from(data, pos)
            start = pos + _HEADER.size
            payload = data[start : start + length]
            if len(payload) < length:
                break  # torn payload at tail
            if zlib.crc32(payload) != crc:
                if start + length >= len(data):
                    break  # corrupt final record: treat as torn
                raise StoreError(f"{self.path.name}: CRC mismatch mid-log at offset {pos}")
            events.append(EventRecord.from_json(json.loads(payload.decode("utf-8"))))
            pos = start + length
            good_end = pos
        if repair and good_end < len(data):
            with open(self.path, "r+b") as fh:
                fh.truncate(good_end)
        return events


class BlobStore:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, digest: str) -> Path:
        return self.root / digest[:2] / digest

    def put(self, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        path = self._path(digest)
        if not path.exists():
            path.parent.mkdir(exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(data)
            tmp.rename(path)
        return digest

    def get(self, digest: str) -> bytes:
        path = self._path(digest)
        if not path.exists():
            raise StoreError(f"unknown blob {digest}")
        data = path.read_bytes()
        if hashlib.sha256(data).hexdigest() != digest:
            raise BlobIntegrityError(f"blob {digest} content does not match its digest")
        return data


class SessionStore:
    """Event logs + blobs under one root directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "sessions").mkdir(parents=True, exist_ok=True)
        self.blobs = BlobStore(self.root / "blobs")

    def log_for(self, session_id: str) -> EventLog:
        return EventLog(self.root / "sessions" / f"{session_id}.log")

    def create(self, session_id: str) -> None:
        path = self.log_for(session_id).path
        if path.exists():
            raise StoreError(f"session {session_id} already exists")
        path.touch()

    def session_ids(self) -> list[str]:
        return sorted(p.stem for p in (self.root / "sessions").glob("*.log"))

    def exists(self, session_id: str) -> bool:
        return self.log_for(session_id).path.exists()

    def recover(self, session_id: str) -> ScreeningSession:
        events = self.log_for(session_id).read_all(repair=True)
        return replay(session_id, events)
