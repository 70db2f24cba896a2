"""Scenario loading, the simulator, deterministic replay and the CLI."""

import json
import shutil
from pathlib import Path

import pytest

from idchain.cli import main
from idchain.errors import ReplayMismatch, ScenarioParseError, StepFailed
from idchain.ledger import BoardState
from idchain.sim import scenario as scen
from idchain.sim.eventlog import chain, read_events
from idchain.sim.replay import replay_dir
from idchain.sim.runner import Simulation, simulate

ROOT = Path(__file__).resolve().parents[1]


def _tiny(steps=None, **extra):
    obj = {
        "name": "tiny",
        "seed": 3,
        "actors": {"sc": [{"id": f"sc{i}", "stake": 1000, "balance": 20} for i in range(1, 4)]},
        "steps": [{"op": "genesis"}] + (steps or []),
    }
    obj.update(extra)
    return obj


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run") / "happy"
    assert main(["run", "--scenario", "happy_path", "--out", str(out)]) == 0
    return out


@pytest.mark.parametrize("name", scen.BUNDLED)
def test_bundled_scenarios_run_clean(sims, name):
    sim = sims[name]
    assert sim.state.conserved()
    assert all(s.conserved() for s in sim.snapshots)


def test_published_schema_matches_packaged_copy():
    published = json.loads((ROOT / "docs" / "scenario.schema.json").read_text())
    assert published == scen.schema()


def test_runs_are_deterministic(sims):
    again = simulate("happy_path")
    first = sims["happy_path"]
    assert again.log.terminal_hash == first.log.terminal_hash
    assert again.state.snapshot_hash() == first.state.snapshot_hash()


def test_seed_changes_bytes_but_not_outcomes(sims):
    base = sims["happy_path"]
    other = simulate("happy_path", seed_override=999)
    assert other.log.terminal_hash != base.log.terminal_hash
    assert [(ln["day"], ln["kind"]) for ln in other.log.lines] == [(ln["day"], ln["kind"]) for ln in base.log.lines]
    assert other.state.burned_total == base.state.burned_total
    assert other.state.balances.get("ca1") == base.state.balances.get("ca1")


def test_event_chain_is_a_hash_chain(run_dir):
    lines, terminal = read_events(run_dir / "events.jsonl")
    assert [ln["i"] for ln in lines] == list(range(len(lines)))
    assert chain(lines) == terminal


def test_replay_reproduces_terminal_hash(run_dir):
    state, log = replay_dir(run_dir)
    _, terminal = read_events(run_dir / "events.jsonl")
    assert log.terminal_hash == terminal
    recorded = BoardState.from_json(json.loads((run_dir / "state.json").read_text()))
    assert state.snapshot_hash() == recorded.snapshot_hash()


def _copy(run_dir, tmp_path):
    dst = tmp_path / "copy"
    shutil.copytree(run_dir, dst)
    return dst


def test_truncated_events_are_a_mismatch(run_dir, tmp_path):
    d = _copy(run_dir, tmp_path)
    lines = (d / "events.jsonl").read_text().splitlines()
    (d / "events.jsonl").write_text("\n".join(lines[:-3] + lines[-1:]) + "\n")
    with pytest.raises(ReplayMismatch):
        replay_dir(d)


def test_tampered_txlog_is_a_mismatch(run_dir, tmp_path):
    d = _copy(run_dir, tmp_path)
    entries = [json.loads(x) for x in (d / "txlog.jsonl").read_text().splitlines()]
    adv = next(e for e in entries if e["type"] == "advance")
    adv["days"] += 1
    (d / "txlog.jsonl").write_text("".join(json.dumps(e) + "\n" for e in entries))
    with pytest.raises(ReplayMismatch):
        replay_dir(d)


def test_tampered_genesis_is_a_mismatch(run_dir, tmp_path):
    d = _copy(run_dir, tmp_path)
    g = json.loads((d / "genesis.json").read_text())
    g["balances"]["sc1"] += 1
    g["total_supply"] += 1
    (d / "genesis.json").write_text(json.dumps(g))
    with pytest.raises(ReplayMismatch):
        replay_dir(d)


def test_outputs_written(run_dir):
    for name in ("events.jsonl", "state.json", "genesis.json", "txlog.jsonl", "ground_truth.json"):
        assert (run_dir / name).is_file()
    truth = json.loads((run_dir / "ground_truth.json").read_text())
    assert set(truth) == {"alice", "bob", "carol"}
    asds = sorted(p.stem for p in (run_dir / "asds").iterdir())
    assert "a1" in asds


def test_public_outputs_do_not_carry_user_identities(sims, run_dir):
    sim = sims["happy_path"]
    needles = []
    for user, certs in sim.truth.users.items():
        needles.append(user.encode())
        needles += [c["idcred_pub"].encode() for c in certs]
    public = [(run_dir / n).read_bytes() for n in ("events.jsonl", "state.json", "txlog.jsonl")]
    public += [p.read_bytes() for p in (run_dir / "asds").iterdir()]
    # board-facing traffic: every signed tx body and every ASD encoding
    ca_bytes = {b for t in sim.ca_transcripts for _, b in t}
    public += [b for b in sim.traffic if b not in ca_bytes]
    leaks = [n for n in needles for blob in public if n in blob]
    assert not leaks


def test_parse_error_reports_line():
    with pytest.raises(ScenarioParseError) as exc:
        scen.parse('{"name": "x",\n  "seed": }', "bad.json")
    assert "line 2" in exc.value.where


@pytest.mark.parametrize(
    "mutate, field",
    [
        (lambda o: o.pop("actors"), "(root)"),
        (lambda o: o["steps"].append({"op": "teleport"}), "steps/1"),
        (lambda o: o["actors"]["sc"][0].update(stake="lots"), "actors/sc/0/stake"),
    ],
)
def test_schema_errors_carry_field(mutate, field):
    obj = _tiny()
    mutate(obj)
    with pytest.raises(ScenarioParseError) as exc:
        scen.validate(obj, "s.json")
    assert exc.value.where.startswith(f"s.json:{field}")


@pytest.mark.parametrize(
    "obj, where",
    [
        (_tiny([{"op": "sc_exit", "member": "sc9"}]), "steps/1/member"),
        (_tiny([{"op": "sc_vote", "subject": "sc1", "voters": ["sc1", "zed"], "vote": "yes"}]), "steps/1/voters"),
        (dict(_tiny(), steps=[{"op": "advance_time", "days": 1}]), "steps/0/op"),
    ],
)
def test_reference_errors(obj, where):
    with pytest.raises(ScenarioParseError) as exc:
        scen.validate(obj, "s.json")
    assert exc.value.where == f"s.json:{where}"


def test_duplicate_and_reserved_ids():
    dup = _tiny()
    dup["actors"]["cas"] = [{"id": "sc1", "collateral": 500, "balance": 600}]
    with pytest.raises(ScenarioParseError, match="duplicate"):
        scen.validate(dup)
    reserved = _tiny()
    reserved["actors"]["sc"][0]["id"] = "faucet"
    with pytest.raises(ScenarioParseError, match="reserved"):
        scen.validate(reserved)


def test_unknown_scenario_name():
    with pytest.raises(ScenarioParseError):
        scen.load("no_such_scenario")


def test_failed_expectation_names_the_step():
    sim = Simulation(_tiny([{"op": "transfer", "from": "sc1", "to": "sc2", "amount": 500, "expect": "ok"}]))
    with pytest.raises(StepFailed) as exc:
        sim.run()
    assert exc.value.step == 1
    assert "InsufficientBalance" in str(exc.value)


def test_expected_rejection_passes_and_wrong_rule_fails():
    ok = _tiny([{"op": "transfer", "from": "sc1", "to": "sc2", "amount": 500, "expect": {"reject": "InsufficientBalance"}}])
    Simulation(ok).run()
    wrong = _tiny([{"op": "transfer", "from": "sc1", "to": "sc2", "amount": 500, "expect": {"reject": "BadNonce"}}])
    with pytest.raises(StepFailed):
        Simulation(wrong).run()


# -- CLI ------------------------------------------------------------------

def test_cli_run_prints_terminal_hash(run_dir, capsys):
    _, terminal = read_events(run_dir / "events.jsonl")
    assert main(["replay", "--events", str(run_dir / "events.jsonl")]) == 0
    assert terminal in capsys.readouterr().out


def test_cli_usage_errors(capsys):
    assert main(["teleport"]) == 1
    assert main(["run", "--scenario", "happy_path"]) == 1
    assert main(["inspect", "--state", "x", "--board", "ledger", "--as", "sc1"]) == 1


def test_cli_bad_seed_env(tmp_path, monkeypatch):
    monkeypatch.setenv("IDCHAIN_SEED", "twelve")
    assert main(["run", "--scenario", "happy_path", "--out", str(tmp_path)]) == 1


def test_cli_seed_env_is_used(tmp_path, monkeypatch, capsys):
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(_tiny()))
    monkeypatch.setenv("IDCHAIN_SEED", "41")
    assert main(["run", "--scenario", str(path), "--out", str(tmp_path / "o")]) == 0
    assert "seed 41" in capsys.readouterr().out
    assert main(["run", "--scenario", str(path), "--seed", "7", "--out", str(tmp_path / "p")]) == 0
    assert "seed 7" in capsys.readouterr().out


def test_cli_parse_error_exit(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert main(["run", "--scenario", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o")]) == 2


def test_cli_step_failure_exit_writes_partial_output(tmp_path):
    path = tmp_path / "fail.json"
    path.write_text(json.dumps(_tiny([{"op": "transfer", "from": "sc1", "to": "sc2", "amount": 500}])))
    out = tmp_path / "o"
    assert main(["run", "--scenario", str(path), "--out", str(out)]) == 3
    assert (out / "events.jsonl").is_file()


def test_cli_replay_mismatch_exit(run_dir, tmp_path):
    d = _copy(run_dir, tmp_path)
    lines = (d / "events.jsonl").read_text().splitlines()
    (d / "events.jsonl").write_text("\n".join(lines[1:]) + "\n")
    assert main(["replay", "--events", str(d / "events.jsonl")]) == 4


def test_cli_verify_asd(run_dir, tmp_path, capsys):
    state = str(run_dir / "state.json")
    assert main(["verify-asd", "--state", state, "--asd", str(run_dir / "asds" / "c1.json")]) == 0
    assert capsys.readouterr().out.strip().startswith("true")
    # a1 is past its certificate's validity at the end of the run
    assert main(["verify-asd", "--state", state, "--asd", str(run_dir / "asds" / "a1.json")]) == 4
    assert "expired" in capsys.readouterr().out


def test_cli_verify_asd_tampered_proof(run_dir, tmp_path, capsys):
    asd = json.loads((run_dir / "asds" / "c1.json").read_text())
    target = tmp_path / "t.json"

    def flip(text):
        # change one hex digit in the middle of the encoding
        i = len(text) // 2
        return text[:i] + ("0" if text[i] != "0" else "1") + text[i + 1:]

    asd["proof"] = flip(asd["proof"])
    target.write_text(json.dumps(asd))
    assert main(["verify-asd", "--state", str(run_dir / "state.json"), "--asd", str(target)]) == 4
    assert capsys.readouterr().out.startswith("false")


def test_cli_inspect(run_dir, capsys):
    state = str(run_dir / "state.json")
    assert main(["inspect", "--state", state, "--board", "proposals", "--as", "alice"]) == 0
    assert json.loads(capsys.readouterr().out)["redacted"] is True
    assert main(["inspect", "--state", state, "--board", "cas", "--as", "alice"]) == 0
    assert "ca1" in json.loads(capsys.readouterr().out)["cas"]


@pytest.mark.parametrize("role", ["ca", "sc", "user"])
def test_cli_keygen(role, tmp_path, capsys):
    assert main(["keygen", "--role", role, "--seed", "5"]) == 0
    first = capsys.readouterr().out
    assert main(["keygen", "--role", role, "--seed", "5", "--out", str(tmp_path / "k.json")]) == 0
    assert json.loads(first) == json.loads((tmp_path / "k.json").read_text())
    assert json.loads(first)["role"] == role
    assert main(["keygen", "--role", role]) == 0
    assert json.loads(capsys.readouterr().out)["pk"] != json.loads(first)["pk"]
