"""Deterministic scenario simulator with a hash-chained event log and replay."""

from .eventlog import EventLog, read_events
from .replay import rebuild, replay_dir
from .runner import GroundTruth, Simulation, run_scenario, simulate
from .scenario import BUNDLED, load

__all__ = ["BUNDLED", "EventLog", "GroundTruth", "Simulation", "load", "read_events", "rebuild", "replay_dir", "run_scenario", "simulate"]
