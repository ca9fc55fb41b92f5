"""Verification report containers and their JSON serialisation."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field


@dataclass
class ClaimRecord:
    id: str
    status: str            # 'verified' | 'counterexample' | 'skipped' | 'measured'
    witness: str = None
    millis: int = 0

    def as_dict(self):
        d = {"id": self.id, "status": self.status, "millis": self.millis}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class SuiteReport:
    id: str
    claims: list = field(default_factory=list)

    def add(self, claim_id, ok, witness=None, started=None, measured=False):
        millis = int((time.time() - started) * 1000) if started else 0
        if measured:
            status = "measured"
        else:
            status = "verified" if ok else "counterexample"
        self.claims.append(ClaimRecord(claim_id, status, witness, millis))
        return ok

    def all_verified(self):
        return all(c.status in ("verified", "measured", "skipped")
                   for c in self.claims)

    def as_dict(self):
        return {"id": self.id, "claims": [c.as_dict() for c in self.claims]}


@dataclass
class ReportDocument:
    config: dict
    suites: list
    seed: int
    version: str

    def all_verified(self):
        return all(s.all_verified() for s in self.suites)

    def as_dict(self):
        return {"config": self.config,
                "suites": [s.as_dict() for s in self.suites],
                "seed": self.seed,
                "version": self.version}

    def to_json(self, **kw):
        return json.dumps(self.as_dict(), indent=2, **kw)
