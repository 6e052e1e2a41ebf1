"""Append-only line-delimited JSON store of search results."""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .spanind import SubsetCertificate

log = logging.getLogger(__name__)


class CacheError(OSError):
    pass


@dataclass
class CacheRecord:
    group: str
    mode: str
    param: int
    value: int | None
    certificate: dict | None
    proved: bool
    version: str = __version__
    timestamp: float = field(default_factory=time.time)
    stale: bool = field(default=False, compare=False)

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.group, self.mode, self.param)

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "mode": self.mode,
            "param": self.param,
            "value": self.value,
            "certificate": self.certificate,
            "proved": self.proved,
            "version": self.version,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json(cls, d: dict) -> "CacheRecord":
        return cls(
            group=str(d["group"]),
            mode=str(d["mode"]),
            param=int(d["param"]),
            value=d["value"],
            certificate=d.get("certificate"),
            proved=bool(d["proved"]),
            version=str(d.get("version", "")),
            timestamp=float(d.get("timestamp", 0.0)),
        )

    @classmethod
    def from_result(cls, result) -> "CacheRecord":
        cert = result.certificate.to_json() if result.certificate else None
        return cls(str(result.group), result.mode, result.param, result.value, cert, result.proved_optimal)


def _certificate_ok(rec: CacheRecord) -> bool:
    if rec.certificate is None:
        return not rec.proved
    cert = SubsetCertificate.from_json(rec.certificate)
    return cert.holds and cert.verify() and cert.m == rec.value


class ResultCache:
    """Records keyed by (group, mode, param); the last valid line for a key wins."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.records: dict[tuple[str, str, int], CacheRecord] = {}
        self.skipped = 0
        self.load()

    def load(self) -> None:
        self.records.clear()
        self.skipped = 0
        if not self.path.exists():
            return
        with self.path.open() as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = CacheRecord.from_json(json.loads(line))
                    ok = _certificate_ok(rec)
                except (ValueError, KeyError, TypeError) as exc:
                    log.warning("%s:%d: skipping unreadable cache line (%s)", self.path, lineno, exc)
                    self.skipped += 1
                    continue
                if not ok:
                    log.warning("%s:%d: certificate failed re-verification, skipped", self.path, lineno)
                    self.skipped += 1
                    continue
                rec.stale = rec.version != __version__
                self.records[rec.key] = rec

    def get(self, group: str, mode: str, param: int, include_stale: bool = False) -> CacheRecord | None:
        rec = self.records.get((group, mode, param))
        if rec is None or (rec.stale and not include_stale):
            return None
        return rec

    def append(self, rec: CacheRecord) -> None:
        line = json.dumps(rec.to_json(), sort_keys=True)
        with self._lock:
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a") as fh:
                    fh.write(line + "\n")
                    fh.flush()
            except OSError as exc:
                raise CacheError(f"cannot write cache {self.path}: {exc}") from exc
            rec.stale = False
            self.records[rec.key] = rec


def cache_roundtrip(rec: CacheRecord, path: str | Path) -> CacheRecord:
    cache = ResultCache(path)
    cache.append(rec)
    reread = ResultCache(path).get(*rec.key, include_stale=True)
    if reread is None:
        raise CacheError("record did not survive the round trip")
    return reread
