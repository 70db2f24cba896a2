"""Re-derive an event log from the genesis snapshot and the transaction log alone."""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import ReplayMismatch
from ..ledger import BoardState, Transaction, advance_time, apply
from .eventlog import EventLog, read_events
from .runner import emit_board_events


def rebuild(genesis: BoardState, txlog: list[dict]) -> tuple[BoardState, EventLog]:
    state = genesis
    log = EventLog()
    for entry in txlog:
        kind = entry["type"]
        if kind == "tx":
            tx = Transaction.from_json(entry["tx"])
            state, events = apply(state, tx)
            emit_board_events(log, state.day, tx.sender, events)
        elif kind == "advance":
            state, events = advance_time(state, entry["days"])
            emit_board_events(log, state.day, "clock", events)
        elif kind == "note":
            if entry["kind"] == "genesis" and entry["payload"].get("snapshot") != state.snapshot_hash():
                raise ReplayMismatch(len(log.lines), "genesis snapshot does not match genesis.json")
            log.append(entry["day"], entry["actor"], entry["kind"], entry["payload"])
        else:
            raise ValueError(f"unknown txlog entry type {kind!r}")
    return state, log


def replay_dir(run_dir: str | Path) -> tuple[BoardState, EventLog]:
    """Replay a run directory and compare against its recorded events; raises ReplayMismatch."""
    d = Path(run_dir)
    genesis = BoardState.from_json(json.loads((d / "genesis.json").read_text(encoding="utf-8")))
    with open(d / "txlog.jsonl", encoding="utf-8") as fh:
        txlog = [json.loads(line) for line in fh if line.strip()]
    state, log = rebuild(genesis, txlog)
    recorded, terminal = read_events(d / "events.jsonl")
    for i, (want, got) in enumerate(zip(recorded, log.lines)):
        if want != got:
            raise ReplayMismatch(i, f"recorded {want} but replay produced {got}")
    if len(recorded) != len(log.lines):
        raise ReplayMismatch(min(len(recorded), len(log.lines)), f"{len(recorded)} recorded events, {len(log.lines)} replayed")
    if terminal != log.terminal_hash:
        raise ReplayMismatch(None, f"recorded {terminal}, replayed {log.terminal_hash}")
    state_file = d / "state.json"
    if state_file.exists():
        recorded_state = BoardState.from_json(json.loads(state_file.read_text(encoding="utf-8")))
        if recorded_state.snapshot_hash() != state.snapshot_hash():
            raise ReplayMismatch(None, "final board state differs from state.json")
    return state, log
