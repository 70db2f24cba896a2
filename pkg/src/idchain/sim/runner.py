"""Scenario runner: actors, protocol steps, board transactions and the event log.

Every random draw comes from a SeededRng child keyed by actor id, so a run is
a pure function of (scenario, seed). The runner keeps the secrets (signing
keys, key shares, certificates) that real actors would hold privately and the
ground-truth ownership map used by tests as an oracle.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..crypto.groups import G1, Scalar
from ..crypto.rand import SeededRng
from ..crypto.sigma import schnorr_sign
from ..errors import (
    CaNotActive,
    CARecordMissing,
    IdChainError,
    StepFailed,
)
from ..ledger import BoardState, GenesisMember, Params, Transaction, account_id, advance_time, apply, genesis
from ..ledger.tx import canonical, transfer_ack_message
from ..protocol import (
    Asd,
    CaDirectory,
    CertificateAuthority,
    RevocationResult,
    UserCert,
    UserDocs,
    build_asd,
    create_account,
    revoke_anonymity,
    run_registration,
    verify_asd,
)
from ..relation import Policy
from ..threshold import DecryptionShare, KeyShare, committee_keygen, partial_decrypt
from . import scenario as scenario_mod
from .eventlog import EventLog


class ExpectationFailed(IdChainError):
    pass


@dataclass
class GroundTruth:
    """user id -> certificates, each with the accounts opened from it."""

    users: dict[str, list[dict]] = field(default_factory=dict)

    def add_cert(self, user: str, idcred_pub: str, ca: str) -> None:
        self.users.setdefault(user, []).append({"idcred_pub": idcred_pub, "ca": ca, "accounts": []})

    def add_account(self, user: str, idcred_pub: str, regid: str, pk_acc: str, x: int, alias: str) -> None:
        for cert in self.users[user]:
            if cert["idcred_pub"] == idcred_pub:
                cert["accounts"].append({"regid": regid, "pk_acc": pk_acc, "x": x, "alias": alias})
                return
        raise KeyError(idcred_pub)

    def cert_of(self, idcred_pub: str) -> tuple[str, dict] | None:
        for user, certs in self.users.items():
            for cert in certs:
                if cert["idcred_pub"] == idcred_pub:
                    return user, cert
        return None

    def owner_of(self, regid: str) -> str | None:
        for user, certs in self.users.items():
            if any(a["regid"] == regid for c in certs for a in c["accounts"]):
                return user
        return None

    def regids(self, user: str) -> list[str]:
        return [a["regid"] for c in self.users.get(user, []) for a in c["accounts"]]

    def pk_accs(self, user: str) -> list[str]:
        return [a["pk_acc"] for c in self.users.get(user, []) for a in c["accounts"]]

    def to_json(self) -> dict:
        return {u: {"certs": certs} for u, certs in sorted(self.users.items())}


def emit_board_events(log: EventLog, day: int, actor: str, events: list[dict]) -> None:
    for ev in events:
        log.append(day, actor, ev["kind"], ev)


class Simulation:
    def __init__(self, scenario: dict, seed: int | None = None):
        self.scenario = scenario
        self.seed = int(scenario["seed"] if seed is None else seed)
        self.root = SeededRng(self.seed)
        self.params = Params.from_json(scenario.get("params", {}))
        actors = scenario["actors"]
        self.sc_actors = {a["id"]: a for a in actors["sc"]}
        self.ca_actors = {a["id"]: a for a in actors.get("cas", [])}
        self.user_actors = {a["id"]: a for a in actors.get("users", [])}
        self.web_actors = {a["id"]: a for a in actors.get("websites", [])}
        self.docs = {
            u: UserDocs.make(a["docs"]["blob"], a["docs"]["country"], a["docs"]["birth_year"])
            for u, a in self.user_actors.items()
        }
        self._rngs: dict[str, SeededRng] = {}
        self._keys: dict[str, Scalar] = {}
        self.directory = CaDirectory()
        for cid, a in self.ca_actors.items():
            self.directory.add(CertificateAuthority.create(cid, self.rng(f"issuer:{cid}"), a.get("scope", "*")))
        self.shares: dict[str, dict[int, KeyShare]] = {}
        self.certs: dict[str, list[UserCert]] = {u: [] for u in self.user_actors}
        self.accounts: dict[str, dict] = {}
        self.proposals: dict[str, str] = {}
        self.revocations: dict[str, RevocationResult] = {}
        self.truth = GroundTruth()
        self.log = EventLog()
        self.txlog: list[dict] = []
        self.traffic: list[bytes] = []
        self.ca_transcripts: list[list[tuple[str, bytes]]] = []
        self.state: BoardState | None = None
        self.genesis_state: BoardState | None = None
        self.snapshots: list[BoardState] = []
        self._results: list[tuple[str, bool, str | None]] = []
        self._counter = 0

    # -- plumbing --
    def rng(self, actor: str) -> SeededRng:
        if actor not in self._rngs:
            self._rngs[actor] = self.root.child(actor)
        return self._rngs[actor]

    def _fresh_rng(self, actor: str, label: str) -> SeededRng:
        self._counter += 1
        return self.rng(actor).child(f"{label}-{self._counter}")

    def sk(self, ident: str) -> Scalar:
        if ident not in self._keys:
            self._keys[ident] = Scalar.random_nonzero(self.rng(f"key:{ident}"))
        return self._keys[ident]

    def pk_hex(self, ident: str) -> str:
        return (G1.generator() * self.sk(ident)).hex()

    def _note(self, kind: str, payload: dict, actor: str = "sim") -> None:
        day = self.state.day if self.state else 0
        self.txlog.append({"type": "note", "day": day, "actor": actor, "kind": kind, "payload": payload})
        self.log.append(day, actor, kind, payload)

    def _submit(self, sender: str, kind: str, payload: dict) -> tuple[bool, list[dict]]:
        nonce = self.state.nonces.get(sender, 0) + 1
        tx = Transaction(kind, sender, nonce, payload).signed(self.sk(sender), self.rng(sender))
        self.traffic.append(tx.signing_bytes())
        new, events = apply(self.state, tx)
        self.txlog.append({"type": "tx", "tx": tx.to_json()})
        emit_board_events(self.log, new.day, sender, events)
        self.state = new
        self.snapshots.append(new)
        ok = events[0]["kind"] != "rejected"
        self._results.append((kind, ok, None if ok else events[0]["rule"]))
        return ok, events

    def _advance(self, days: int) -> None:
        new, events = advance_time(self.state, days)
        self.txlog.append({"type": "advance", "days": days})
        emit_board_events(self.log, new.day, "clock", events)
        self.state = new
        self.snapshots.append(new)

    def _party(self, name: str) -> str:
        if name in self.accounts:
            return self.accounts[name]["acc_id"]
        return name

    def _account(self, alias: str) -> dict:
        if alias not in self.accounts:
            raise ExpectationFailed(f"unknown account alias {alias!r}")
        return self.accounts[alias]

    def _proposal_id(self, alias: str) -> str:
        return self.proposals.get(alias, alias)

    def _latest_motion(self, subject: str) -> str:
        matches = [m for m, rec in self.state.sc.motions.items() if rec["subject"] == subject]
        if not matches:
            raise ExpectationFailed(f"no motion concerning {subject}")
        return max(matches, key=lambda m: int(m.split("-")[1]))

    def _current_cert(self, user: str) -> UserCert:
        if not self.certs.get(user):
            raise ExpectationFailed(f"{user} holds no certificate")
        return self.certs[user][-1]

    # -- driving --
    def run(self) -> Simulation:
        for i, step in enumerate(self.scenario["steps"]):
            self.run_step(i, step)
        return self

    def run_step(self, i: int, step: dict) -> None:
        op = step["op"]
        expect = step.get("expect", "ok")
        self._results = []
        try:
            getattr(self, f"_op_{op}")(step)
        except IdChainError as exc:
            if isinstance(exc, ExpectationFailed):
                raise StepFailed(i, exc) from exc
            if isinstance(expect, dict) and expect.get("error") == type(exc).__name__:
                self._note("expected_error", {"step": i, "op": op, "error": type(exc).__name__})
                return
            raise StepFailed(i, exc) from exc
        except Exception as exc:  # a bug or malformed step should still name the step
            raise StepFailed(i, f"{type(exc).__name__}: {exc}") from exc
        if isinstance(expect, dict) and "error" in expect:
            raise StepFailed(i, f"expected {expect['error']}, but {op} succeeded")
        for kind, ok, rule in self._results:
            if isinstance(expect, dict) and "reject" in expect:
                if ok or rule != expect["reject"]:
                    raise StepFailed(i, f"{kind}: expected rejection {expect['reject']}, got {rule or 'applied'}")
            elif not ok and op != "rp_share":
                raise StepFailed(i, f"{kind} rejected: {rule}")
            elif not ok and not step.get("corrupt"):
                raise StepFailed(i, f"{kind} rejected: {rule}")
        if isinstance(expect, dict) and "reject" in expect and not self._results:
            raise StepFailed(i, f"expected rejection {expect['reject']}, but no transaction was sent")

    # -- ops: setup --
    def _op_genesis(self, step: dict) -> None:
        founding = [a for a in self.sc_actors.values() if a.get("founding", True)]
        members = [GenesisMember(a["id"], self.pk_hex(a["id"]), a["stake"], a.get("balance", 0)) for a in founding]
        accounts = {}
        for a in self.sc_actors.values():
            if not a.get("founding", True):
                accounts[a["id"]] = (self.pk_hex(a["id"]), a.get("balance", 0))
        for group in (self.ca_actors, self.web_actors):
            for ident, a in group.items():
                accounts[ident] = (self.pk_hex(ident), a.get("balance", 0))
        accounts["faucet"] = (self.pk_hex("faucet"), self.scenario.get("faucet", 0))
        state, shares = genesis(self.params, members, self.rng("genesis"), accounts)
        for mid, share in shares.items():
            self.shares.setdefault(mid, {})[share.epoch] = share
        self.state = state
        self.genesis_state = copy.deepcopy(state)
        self.snapshots.append(state)
        self._note("genesis", {"snapshot": state.snapshot_hash()}, actor="genesis")

    # -- ops: protocol --
    def _op_register_user(self, step: dict) -> None:
        user, ca_id = step["user"], step["ca"]
        entry = self.state.cas.cas.get(ca_id)
        if entry is None or entry["status"] != "active":
            raise CaNotActive(f"{ca_id} is not an active CA on the board")
        ca = self.directory.cas[ca_id]
        keyset = self.state.committees[self.state.current_epoch]
        cert, record, transcript = run_registration(
            self.docs[user], ca, keyset, self._fresh_rng(user, "register"), self.state.day,
        )
        self.certs[user].append(cert)
        self.ca_transcripts.append(transcript)
        self.traffic.extend(b for _, b in transcript)
        self.truth.add_cert(user, cert.idcred_pub.hex(), ca_id)
        self._note("register_user", {"ca": ca_id, "record": canonical(record.to_json()).hex()[:64]})

    def _store_account(self, user: str, cert: UserCert, alias: str, asd: Asd, sk: Scalar) -> None:
        acc_id = account_id(asd.statement.pk_acc)
        self.accounts[alias] = {"user": user, "asd": asd, "sk": sk, "acc_id": acc_id}
        self._keys[acc_id] = sk
        self.truth.add_account(user, cert.idcred_pub.hex(), asd.regid, asd.statement.pk_acc.hex(), asd.statement.x, alias)
        self.traffic.append(asd.encode())
        self._note("create_account", {"alias": alias, "asd": asd.digest()})

    def _fund_account(self, step: dict, alias: str) -> None:
        amount = step.get("fund", self.params.REG_FEE + self.params.REG_BURN)
        if amount > 0:
            self._submit("faucet", "TokenTransfer", {"to": self.accounts[alias]["acc_id"], "amount": amount})

    def _op_create_account(self, step: dict) -> None:
        user, alias = step["user"], step["as"]
        cert = self._current_cert(user)
        policy = Policy.from_json(step.get("policy", {}))
        keyset = self.state.committees[self.state.current_epoch]
        asd, sk = create_account(
            cert, policy, keyset, self.state.day, self._fresh_rng(user, "account"),
            self.params.MAX_ACC, self.params.CERT_VALIDITY,
        )
        self._store_account(user, cert, alias, asd, sk)
        self._fund_account(step, alias)

    def _op_forge_account(self, step: dict) -> None:
        user, alias = step["user"], step["as"]
        cert = self._current_cert(user)
        policy = Policy.from_json(step.get("policy", {}))
        keyset = self.state.committees[self.state.current_epoch]
        asd, sk = build_asd(
            cert, policy, keyset, self.state.day, self._fresh_rng(user, "forge"), step["x"],
            self.params.MAX_ACC, self.params.CERT_VALIDITY,
        )
        self._store_account(user, cert, alias, asd, sk)
        self._fund_account(step, alias)

    def _op_add_asd(self, step: dict) -> None:
        acc = self._account(step["account"])
        self._submit(acc["acc_id"], "UserAddAsd", {"asd": acc["asd"].to_json()})

    def _op_verify_asd(self, step: dict) -> None:
        acc = self._account(step["account"])
        asd: Asd = acc["asd"]
        on_board = asd.regid in self.state.users.asds
        verdict = verify_asd(asd, self.state.asd_context(), for_admission=not on_board)
        expect = step.get("expect", "ok")
        want = expect.get("valid", True) if isinstance(expect, dict) else True
        if verdict.ok != want:
            raise ExpectationFailed(f"verify_asd({step['account']}) = {verdict}, expected {want}")
        if isinstance(expect, dict) and "clause" in expect and str(verdict.clause) != str(expect["clause"]):
            raise ExpectationFailed(f"verify_asd({step['account']}) failed on clause {verdict.clause}, expected {expect['clause']}")
        self._note("verify_asd", {"account": step["account"], "verdict": str(verdict)})

    def _op_deactivate_asd(self, step: dict) -> None:
        acc = self._account(step["account"])
        self._submit(acc["acc_id"], "UserDeactivateAsd", {"regid": acc["asd"].regid})

    def _op_advance_time(self, step: dict) -> None:
        self._advance(step["days"])

    def _op_fund(self, step: dict) -> None:
        self._submit("faucet", "TokenTransfer", {"to": self._party(step["to"]), "amount": step["amount"]})

    def _op_transfer(self, step: dict) -> None:
        self._submit(self._party(step["from"]), "TokenTransfer", {"to": self._party(step["to"]), "amount": step["amount"]})

    def _op_delete_record(self, step: dict) -> None:
        cert = self._current_cert(step["user"])
        self.directory.cas[step["ca"]].delete_record(cert.idcred_pub)
        self._note("delete_record", {"ca": step["ca"]})

    def _op_revoke(self, step: dict) -> None:
        acc = self._account(step["account"])
        shares = [s for m in step["members"] for s in self.shares.get(m, {}).values()]
        result = revoke_anonymity(
            acc["asd"].regid, shares, self.state.committees, self.directory, self.state.users.asds,
            self._fresh_rng("revoke", step["account"]),
        )
        self.revocations[step.get("as", step["account"])] = result
        self._note("revoke", {"account": step["account"], "found": len(result.accounts)})

    # -- ops: SC governance --
    def _op_sc_join(self, step: dict) -> None:
        member = step["member"]
        self._submit(member, "ScJoinRequest", {"stake": step.get("stake", self.sc_actors[member]["stake"])})

    def _vote(self, step: dict, kind: str) -> None:
        mid = self._latest_motion(step["subject"])
        for voter in step["voters"]:
            self._submit(voter, kind, {"motion": mid, "vote": step["vote"]})

    def _op_sc_vote(self, step: dict) -> None:
        self._vote(step, "ScVote")

    def _op_sc_exit(self, step: dict) -> None:
        self._submit(step["member"], "ScExitNotice", {})

    def _op_sc_finalize_exit(self, step: dict) -> None:
        self._submit(step["member"], "ScFinalizeExit", {})

    def _op_sc_expel(self, step: dict) -> None:
        self._submit(step["member"], "ScExpel", {"target": step["target"], "reason": step.get("note", "")})

    def _op_sc_rekey(self, step: dict) -> None:
        seated = self.state.sc.seated()
        epoch = self.state.current_epoch + 1
        keyset, shares = committee_keygen(len(seated), self.params.d, self.rng("dealer").child(f"epoch-{epoch}"), epoch)
        members = {m: i for i, m in enumerate(seated, start=1)}
        ok, _ = self._submit(step["member"], "ScRekey", {"keyset": keyset.to_json(), "members": members})
        if ok:
            for m, i in members.items():
                self.shares.setdefault(m, {})[epoch] = shares[i - 1]

    # -- ops: CA governance --
    def _op_ca_join(self, step: dict) -> None:
        cid = step["ca"]
        actor = self.ca_actors[cid]
        self._submit(cid, "CaJoinRequest", {
            "pk_ca": self.directory.cas[cid].pk.hex(),
            "collateral": step.get("collateral", actor["collateral"]),
            "scope": actor.get("scope", "*"),
        })

    def _op_ca_vote(self, step: dict) -> None:
        self._vote(step, "CaVote")

    def _op_ca_exit(self, step: dict) -> None:
        self._submit(step["ca"], "CaExitNotice", {})

    def _op_ca_finalize_exit(self, step: dict) -> None:
        cid = step["ca"]
        payload: dict = {}
        succ = step.get("successor")
        if succ:
            self.directory.transfer(cid, succ)
            digest = self.directory.cas[cid].db_digest()
            ack = schnorr_sign(self.sk(succ), transfer_ack_message(cid, succ, digest), self.rng(succ))
            payload = {"successor": succ, "db_digest": digest, "ack": ack.encode().hex()}
        self._submit(cid, "CaFinalizeExit", payload)

    def _op_ca_penalize(self, step: dict) -> None:
        self._submit(step["member"], "CaPenalize", {"ca": step["ca"], "reason": step.get("note", "")})

    # -- ops: users board and revealing proposals --
    def _op_website_complaint(self, step: dict) -> None:
        acc = self._account(step["account"])
        self._submit(step["website"], "WebsiteComplaint", {"regid": acc["asd"].regid, "reason": step.get("note", "")})

    def _op_block_account(self, step: dict) -> None:
        acc = self._account(step["account"])
        self._submit(step["member"], "BlockAccount", {
            "pk_acc": acc["asd"].statement.pk_acc.hex(), "proposal": self._proposal_id(step["proposal"]),
        })

    def _op_rp_submit(self, step: dict) -> None:
        acc = self._account(step["account"])
        ok, events = self._submit(step["member"], "RpSubmit", {"regid": acc["asd"].regid, "reason": step.get("note", "")})
        if ok:
            self.proposals[step["as"]] = next(e["proposal"] for e in events if e["kind"] == "rp_submitted")

    def _op_rp_vote(self, step: dict) -> None:
        pid = self._proposal_id(step["proposal"])
        for voter in step["voters"]:
            self._submit(voter, "RpVote", {"proposal": pid, "vote": step["vote"]})

    def _member_share(self, member: str, epoch: int) -> KeyShare:
        share = self.shares.get(member, {}).get(epoch)
        # a member without a share for this epoch still gets to try; the board refuses it
        return share or KeyShare(0, Scalar(1), epoch)

    def _op_rp_share(self, step: dict) -> None:
        pid = self._proposal_id(step["proposal"])
        phase = step.get("phase", "both")
        corrupt = set(step.get("corrupt", []))
        prop = self.state.proposals.proposals[pid]
        asd = self.state.users.asds[prop["asd_ref"]]
        if phase in ("eid", "both"):
            for m in step["members"]:
                ds = partial_decrypt(self._member_share(m, prop["eid_epoch"]), asd.statement.eid, self.rng(m))
                if m in corrupt:
                    ds = DecryptionShare(ds.index, ds.value + G1.generator(), ds.proof)
                self._submit(m, "RpShare", {"proposal": pid, "phase": "eid", "shares": [ds.to_json()]})
        if phase in ("ereg", "both"):
            prop = self.state.proposals.proposals[pid]
            if prop["idcred_pub"] is None:
                for m in step["members"]:
                    self._submit(m, "RpShare", {"proposal": pid, "phase": "ereg", "shares": []})
                return
            if prop["record"] is not None:
                from ..protocol import CARecord

                record = CARecord.from_json(prop["record"])
            else:
                record = self.directory.find_record(asd.statement.pk_ca, G1.from_hex(prop["idcred_pub"]))
                if record is None:
                    raise CARecordMissing("the CA holds no record for the decrypted IDcredPUB")
            for m in step["members"]:
                share = self._member_share(m, record.committee_epoch)
                dss = [partial_decrypt(share, c, self.rng(m)) for c in record.ereg.chunks]
                if m in corrupt:
                    dss[0] = DecryptionShare(dss[0].index, dss[0].value + G1.generator(), dss[0].proof)
                payload = {"proposal": pid, "phase": "ereg", "shares": [d.to_json() for d in dss]}
                if self.state.proposals.proposals[pid]["record"] is None:
                    payload["record"] = record.to_json()
                self._submit(m, "RpShare", payload)

    def _op_rp_execute(self, step: dict) -> None:
        self._submit(step["member"], "RpExecute", {"proposal": self._proposal_id(step["proposal"])})

    # -- ops: assertions --
    def _op_expect(self, step: dict) -> None:
        check = step["check"]
        st = self.state
        got, want = None, None
        if check == "balance":
            got, want = st.balance(self._party(step["who"])), step["equals"]
        elif check == "burned_total":
            got, want = st.burned_total, step["equals"]
        elif check == "asd_count":
            got, want = len(st.users.asds), step["equals"]
        elif check == "conservation":
            got, want = st.conserved(), True
        elif check == "sc_status":
            rec = st.sc.members.get(step["member"])
            got, want = rec["status"] if rec else "absent", step["status"]
        elif check == "ca_status":
            rec = st.cas.cas.get(step["ca"])
            got, want = rec["status"] if rec else "absent", step["status"]
        elif check == "ca_score":
            got, want = st.ca_score(step["ca"]), step["equals"]
        elif check == "renewal_due":
            got, want = self._account(step["account"])["asd"].regid in st.users.renewal_due, step.get("value", True)
        elif check == "proposal_status":
            got, want = st.proposals.proposals[self._proposal_id(step["proposal"])]["status"], step["status"]
        elif check == "motion_status":
            got, want = st.sc.motions[self._latest_motion(step["subject"])]["status"], step["status"]
        elif check == "revocation_matches":
            got, want = self._revocation_view(step), self._truth_view(step)
        if got != want:
            raise ExpectationFailed(f"expect {check}: got {got!r}, want {want!r}")
        self._note("expect", {"check": check, "ok": True})

    def _revocation_view(self, step: dict) -> dict:
        if "revocation" in step:
            r = self.revocations[step["revocation"]]
            accounts, docs, idpub = r.accounts, r.user_docs.to_json(), r.idcred_pub.hex()
        else:
            prop = self.state.proposals.proposals[self._proposal_id(step["proposal"])]
            if prop["result"] is None:
                raise ExpectationFailed("proposal has not been executed")
            res = prop["result"]
            accounts, docs, idpub = [tuple(a) for a in res["accounts"]], res["docs"], res["idcred_pub"]
        return {"idcred_pub": idpub, "docs": docs, "accounts": sorted((rid, pk) for _, rid, pk in accounts)}

    def _truth_view(self, step: dict) -> dict:
        view = self._revocation_view(step)
        found = self.truth.cert_of(view["idcred_pub"])
        if found is None or found[0] != step["user"]:
            return {"owner": step["user"]}
        _, cert = found
        on_board = sorted((a["regid"], a["pk_acc"]) for a in cert["accounts"] if a["regid"] in self.state.users.asds)
        return {"idcred_pub": cert["idcred_pub"], "docs": self.docs[step["user"]].to_json(), "accounts": on_board}

    # -- output --
    def write_outputs(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        (out / "asds").mkdir(parents=True, exist_ok=True)
        self.log.write(out / "events.jsonl")
        (out / "state.json").write_text(json.dumps(self.state.to_json(), sort_keys=True, indent=1) + "\n", encoding="utf-8")
        if self.genesis_state is not None:
            (out / "genesis.json").write_text(canonical(self.genesis_state.to_json()).decode() + "\n", encoding="utf-8")
        with open(out / "txlog.jsonl", "w", encoding="utf-8") as fh:
            for entry in self.txlog:
                fh.write(canonical(entry).decode() + "\n")
        for alias, acc in self.accounts.items():
            (out / "asds" / f"{alias}.json").write_text(json.dumps(acc["asd"].to_json(), sort_keys=True, indent=1) + "\n", encoding="utf-8")
        (out / "ground_truth.json").write_text(json.dumps(self.truth.to_json(), sort_keys=True, indent=1) + "\n", encoding="utf-8")


def run_scenario(path_or_name, seed_override: int | None = None) -> tuple[BoardState, EventLog, GroundTruth]:
    sim = Simulation(scenario_mod.load(path_or_name), seed_override).run()
    return sim.state, sim.log, sim.truth


def simulate(path_or_name, seed_override: int | None = None) -> Simulation:
    """Like run_scenario but hands back the whole simulation (secrets included) for tests."""
    return Simulation(scenario_mod.load(path_or_name), seed_override).run()
