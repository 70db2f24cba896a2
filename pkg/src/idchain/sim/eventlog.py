"""Hash-chained event log written as JSON Lines."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from ..ledger.tx import canonical

CHAIN_SEED = hashlib.sha256(b"idchain-events-v1").hexdigest()


def payload_digest(payload) -> str:
    return hashlib.sha256(canonical(payload)).hexdigest()


def chain_step(head: str, line: dict) -> str:
    return hashlib.sha256(bytes.fromhex(head) + canonical(line)).hexdigest()


def chain(lines) -> str:
    head = CHAIN_SEED
    for line in lines:
        head = chain_step(head, line)
    return head


class EventLog:
    def __init__(self):
        self.lines: list[dict] = []
        self.head = CHAIN_SEED

    def append(self, day: int, actor: str, kind: str, payload) -> dict:
        line = {"i": len(self.lines), "day": day, "actor": actor, "kind": kind, "digest": payload_digest(payload)}
        self.lines.append(line)
        self.head = chain_step(self.head, line)
        return line

    @property
    def terminal_hash(self) -> str:
        return self.head

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.lines:
                fh.write(canonical(line).decode() + "\n")
            fh.write(canonical({"terminal_hash": self.head}).decode() + "\n")


def read_events(path: str | Path) -> tuple[list[dict], str | None]:
    """Event lines and the recorded terminal hash (None when the trailer is missing)."""
    lines, terminal = [], None
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            raw = raw.strip()
            if not raw:
                continue
            obj = json.loads(raw)
            if "terminal_hash" in obj:
                terminal = obj["terminal_hash"]
            else:
                lines.append(obj)
    return lines, terminal
