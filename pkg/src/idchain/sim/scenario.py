"""Scenario loading and validation against the published JSON-Schema."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from ..errors import ScenarioParseError

BUNDLED = ("happy_path", "revocation", "ca_exit_renewal", "sc_expulsion", "threshold_failure", "max_acc_exhaustion")


@lru_cache(maxsize=1)
def schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("scenario.schema.json").read_text(encoding="utf-8"))


def bundled_path(name: str) -> Path:
    return Path(str(resources.files(__package__).joinpath("scenarios", f"{name}.json")))


def resolve(path_or_name: str | Path) -> Path:
    p = Path(path_or_name)
    if p.exists():
        return p
    if str(path_or_name) in BUNDLED:
        return bundled_path(str(path_or_name))
    raise ScenarioParseError(f"no scenario file or bundled scenario named {path_or_name!r}")


def parse(text: str, source: str = "<scenario>") -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, f"{source}:line {exc.lineno} col {exc.colno}") from exc
    validate(obj, source)
    return obj


def validate(obj: dict, source: str = "<scenario>") -> None:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        field = "/".join(str(p) for p in err.absolute_path) or "(root)"
        raise ScenarioParseError(err.message, f"{source}:{field}")
    _check_references(obj, source)


def _check_references(obj: dict, source: str) -> None:
    actors = obj["actors"]
    ids: list[str] = []
    for group in ("sc", "cas", "users", "websites"):
        ids += [a["id"] for a in actors.get(group, [])]
    dupes = {i for i in ids if ids.count(i) > 1}
    if dupes:
        raise ScenarioParseError(f"duplicate actor ids {sorted(dupes)}", f"{source}:actors")
    for i in ids:
        if i.startswith("acc:") or i == "faucet":
            raise ScenarioParseError(f"actor id {i!r} is reserved", f"{source}:actors")
    known = set(ids)
    actor_fields = ("user", "ca", "member", "target", "website")
    list_fields = ("voters", "members", "corrupt")
    for n, step in enumerate(obj["steps"]):
        for f in actor_fields:
            if f in step and step[f] not in known:
                raise ScenarioParseError(f"unknown actor {step[f]!r}", f"{source}:steps/{n}/{f}")
        for f in list_fields:
            for who in step.get(f, []):
                if who not in known:
                    raise ScenarioParseError(f"unknown actor {who!r}", f"{source}:steps/{n}/{f}")
    if not obj["steps"] or obj["steps"][0]["op"] != "genesis":
        raise ScenarioParseError("the first step must be genesis", f"{source}:steps/0/op")


def load(path_or_name: str | Path) -> dict:
    path = resolve(path_or_name)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseError(str(exc), str(path)) from exc
    return parse(text, str(path))
