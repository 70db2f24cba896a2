"""The board state machine: genesis, transaction application, time, read views.

``apply`` is the only way to change a BoardState. It works on a copy and
hands back the untouched original plus a rejection event when a rule fails,
so a rejected transaction can never leave partial writes behind.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from ..blindsig import IssuerPublicKey
from ..crypto.groups import G1, Scalar
from ..crypto.sigma import SchnorrSignature, schnorr_verify
from ..errors import InsufficientStake, NotInRange, TooFewMembers, TxRejected
from ..protocol import Asd, CARecord, accounts_of, verify_asd
from ..threshold import (
    CommitteeKeySet,
    DecryptionShare,
    KeyShare,
    bsgs_decode,
    combine_shares,
    committee_keygen,
    recompose,
    verify_share,
)
from .params import Params
from .state import SEATED, BoardState
from .tx import TX_KINDS, Transaction, account_id, transfer_ack_message

RULES = (
    "Unauthorized", "InsufficientBalance", "InsufficientStake", "VoteNotPassed", "NoticePeriodNotElapsed",
    "PendingDutiesExist", "UnknownEntity", "DuplicateRegId", "CaInactive", "MalformedPayload", "BadNonce",
    "InvalidAsd", "AlreadyRegistered", "AlreadyVoted", "VoteClosed", "WrongState", "InvalidShare",
    "IssuanceCapReached", "RecordMismatch", "NotEnoughShares", "TooFewMembers", "DecryptionFailed",
)

# kind -> {field: type}
PAYLOAD_SCHEMA: dict[str, dict[str, type]] = {
    "ScJoinRequest": {"stake": int},
    "ScVote": {"motion": str, "vote": str},
    "ScExitNotice": {},
    "ScFinalizeExit": {},
    "ScExpel": {"target": str},
    "ScRekey": {"keyset": dict, "members": dict},
    "CaJoinRequest": {"pk_ca": str, "collateral": int, "scope": str},
    "CaVote": {"motion": str, "vote": str},
    "CaExitNotice": {},
    "CaFinalizeExit": {},
    "CaPenalize": {"ca": str},
    "UserAddAsd": {"asd": dict},
    "UserDeactivateAsd": {"regid": str},
    "BlockAccount": {"pk_acc": str, "proposal": str},
    "WebsiteComplaint": {"regid": str},
    "RpSubmit": {"regid": str},
    "RpVote": {"proposal": str, "vote": str},
    "RpShare": {"proposal": str, "phase": str, "shares": list},
    "RpExecute": {"proposal": str},
    "TokenTransfer": {"to": str, "amount": int},
}

SC_MOTIONS = ("sc_join", "sc_expel")
CA_MOTIONS = ("ca_join", "ca_penalize")


def _reject(rule: str, detail: str = "") -> TxRejected:
    return TxRejected(rule, detail)


# -- genesis --------------------------------------------------------------

@dataclass(frozen=True)
class GenesisMember:
    member_id: str
    pk: str  # Schnorr public key, G1 hex
    stake: int
    balance: int = 0


def genesis(
    params: Params,
    initial_sc: Sequence[GenesisMember],
    rng,
    accounts: Mapping[str, tuple[str, int]] | None = None,
) -> tuple[BoardState, dict[str, KeyShare]]:
    """Seat the founding SC, deal the epoch-1 committee key and seed balances.

    Returns the state and each founding member's private key share.
    """
    if len(initial_sc) < params.d + 1:
        raise TooFewMembers(f"{len(initial_sc)} founding members, need at least d+1 = {params.d + 1}")
    for m in initial_sc:
        if m.stake < params.SC_STAKE:
            raise InsufficientStake(f"{m.member_id} stakes {m.stake} < SC_STAKE {params.SC_STAKE}")
    state = BoardState(params)
    for m in initial_sc:
        state.keys[m.member_id] = m.pk
        state.balances[m.member_id] = m.balance
        state.sc.members[m.member_id] = {
            "pk": m.pk, "stake": m.stake, "status": "active", "joined": 0, "notice_day": None,
        }
    for ident, (pk, balance) in (accounts or {}).items():
        state.keys[ident] = pk
        state.balances[ident] = state.balances.get(ident, 0) + balance
    ids = sorted(m.member_id for m in initial_sc)
    keyset, shares = committee_keygen(len(ids), params.d, rng, epoch=1)
    state.committees[1] = keyset
    state.committee_members[1] = {mid: i for i, mid in enumerate(ids, start=1)}
    state.current_epoch = 1
    state.total_supply = state.circulating() + state.staked_total()
    return state, {mid: shares[i - 1] for mid, i in state.committee_members[1].items()}


# -- helpers --------------------------------------------------------------

def _sender_key(state: BoardState, sender: str) -> G1 | None:
    if sender in state.keys:
        return G1.from_hex(state.keys[sender])
    if sender.startswith("acc:"):
        try:
            return G1.from_hex(sender[4:])
        except ValueError:
            return None
    return None


def _known_recipient(state: BoardState, ident: str) -> bool:
    return ident in state.keys or (ident.startswith("acc:") and _sender_key(state, ident) is not None)


def _debit(state: BoardState, who: str, amount: int) -> None:
    if state.balance(who) < amount:
        raise _reject("InsufficientBalance", f"{who} holds {state.balance(who)}, needs {amount}")
    state.balances[who] = state.balance(who) - amount


def _credit(state: BoardState, who: str, amount: int) -> None:
    state.balances[who] = state.balance(who) + amount


def _require_seated(state: BoardState, sender: str) -> None:
    if not state.sc.is_seated(sender):
        raise _reject("Unauthorized", f"{sender} is not a seated SC member")


def _open_motion(state: BoardState, kind: str, subject: str, proposer: str) -> tuple[str, dict]:
    mid = state.next_id("m")
    state.sc.motions[mid] = {
        "kind": kind, "subject": subject, "proposer": proposer, "votes": {},
        "opened": state.day, "deadline": state.day + state.params.VOTE_WINDOW, "status": "voting",
    }
    return mid, {"kind": "motion_opened", "motion": mid, "motion_kind": kind, "subject": subject}


def _electorate(state: BoardState, motion: dict) -> list[str]:
    voters = state.sc.seated()
    if motion["kind"] == "sc_expel":
        voters = [v for v in voters if v != motion["subject"]]
    return voters


def _resolve_motion(state: BoardState, mid: str, at_deadline: bool) -> list[dict]:
    """Close a motion once the outcome is fixed (or the deadline has come)."""
    motion = state.sc.motions[mid]
    electorate = _electorate(state, motion)
    yes = sum(1 for v in electorate if motion["votes"].get(v) == "yes")
    no = sum(1 for v in electorate if motion["votes"].get(v) == "no")
    size = len(electorate)
    if 2 * yes > size:
        passed = True
    elif at_deadline or 2 * no >= size:
        passed = False  # ties reject
    else:
        return []
    motion["status"] = "passed" if passed else "rejected"
    motion["closed"] = state.day
    events = [{
        "kind": "motion_closed", "motion": mid, "outcome": motion["status"], "yes": yes, "no": no,
        "non_voters": [v for v in electorate if v not in motion["votes"]],
    }]
    subject, kind = motion["subject"], motion["kind"]
    p = state.params
    if kind == "sc_join":
        member = state.sc.members[subject]
        if passed:
            member.update(status="active", joined=state.day)
        else:
            _credit(state, subject, member["stake"])
            del state.sc.members[subject]
    elif kind == "sc_expel" and passed and state.sc.is_seated(subject):
        member = state.sc.members[subject]
        state.burned_total += member["stake"]
        member.update(stake=0, status="expelled")
        state.sc.expelled.append(subject)
        events.append({"kind": "sc_expelled", "member": subject})
    elif kind == "ca_join":
        ca = state.cas.cas[subject]
        if passed:
            ca["status"] = "active"
        else:
            _credit(state, subject, ca["collateral"])
            del state.cas.cas[subject]
    elif kind == "ca_penalize" and passed and subject in state.cas.cas:
        ca = state.cas.cas[subject]
        burn = ca["collateral"] * p.penalty_bps // 10_000
        ca["collateral"] -= burn
        ca["penalties"] += 1
        state.burned_total += burn
        events.append({"kind": "ca_penalized", "ca": subject, "burned": burn, "score": state.ca_score(subject)})
    return events


def _cast_vote(state: BoardState, tx: Transaction, families: tuple[str, ...]) -> list[dict]:
    _require_seated(state, tx.sender)
    mid, vote = tx.payload["motion"], tx.payload["vote"]
    motion = state.sc.motions.get(mid)
    if motion is None or motion["kind"] not in families:
        raise _reject("UnknownEntity", f"no {'/'.join(families)} motion {mid}")
    if vote not in ("yes", "no"):
        raise _reject("MalformedPayload", "vote must be yes or no")
    if motion["status"] != "voting":
        raise _reject("VoteClosed", f"motion {mid} is {motion['status']}")
    if tx.sender not in _electorate(state, motion):
        raise _reject("Unauthorized", f"{tx.sender} may not vote on {mid}")
    if tx.sender in motion["votes"]:
        raise _reject("AlreadyVoted", f"{tx.sender} already voted on {mid}")
    motion["votes"][tx.sender] = vote
    return [{"kind": "vote", "motion": mid}] + _resolve_motion(state, mid, at_deadline=False)


def _ca_entry(state: BoardState, ca_id: str) -> dict:
    ca = state.cas.cas.get(ca_id)
    if ca is None:
        raise _reject("Unauthorized", f"{ca_id} is not a registered CA")
    return ca


# -- handlers -------------------------------------------------------------

def _sc_join(state: BoardState, tx: Transaction) -> list[dict]:
    p = state.params
    if tx.sender.startswith("acc:") or tx.sender not in state.keys:
        raise _reject("Unauthorized", "SC applicants must be registered identities")
    existing = state.sc.members.get(tx.sender)
    if existing is not None:
        if existing["status"] == "expelled":
            raise _reject("Unauthorized", f"{tx.sender} was expelled")
        if existing["status"] != "gone":
            raise _reject("AlreadyRegistered", f"{tx.sender} is already {existing['status']}")
    stake = tx.payload["stake"]
    if stake < p.SC_STAKE:
        raise _reject("InsufficientStake", f"stake {stake} < SC_STAKE {p.SC_STAKE}")
    _debit(state, tx.sender, stake + p.JOIN_FEE_DEDUCTION)
    state.burned_total += p.JOIN_FEE_DEDUCTION
    state.sc.members[tx.sender] = {
        "pk": state.keys[tx.sender], "stake": stake, "status": "pending", "joined": None, "notice_day": None,
    }
    _, ev = _open_motion(state, "sc_join", tx.sender, tx.sender)
    return [ev]


def _sc_exit_notice(state: BoardState, tx: Transaction) -> list[dict]:
    member = state.sc.members.get(tx.sender)
    if member is None or member["status"] not in SEATED:
        raise _reject("Unauthorized", f"{tx.sender} is not a seated SC member")
    if member["status"] != "active":
        raise _reject("WrongState", "exit already noticed")
    member.update(status="exiting", notice_day=state.day)
    return [{"kind": "sc_exit_notice", "member": tx.sender, "finalizable_from": state.day + state.params.NOTICE_PERIOD}]


def _sc_finalize_exit(state: BoardState, tx: Transaction) -> list[dict]:
    p = state.params
    member = state.sc.members.get(tx.sender)
    if member is None or member["status"] not in SEATED:
        raise _reject("Unauthorized", f"{tx.sender} is not a seated SC member")
    if member["status"] != "exiting":
        raise _reject("WrongState", "no exit notice on file")
    if state.day < member["notice_day"] + p.NOTICE_PERIOD:
        raise _reject("NoticePeriodNotElapsed", f"finalizable from day {member['notice_day'] + p.NOTICE_PERIOD}")
    if len(state.sc.seated()) - 1 < p.d + 1:
        raise _reject("PendingDutiesExist", "leaving would drop the SC below d+1 members")
    _credit(state, tx.sender, member["stake"])
    member.update(stake=0, status="gone")
    return [{"kind": "sc_exited", "member": tx.sender}]


def _sc_expel(state: BoardState, tx: Transaction) -> list[dict]:
    _require_seated(state, tx.sender)
    target = tx.payload["target"]
    if target == tx.sender:
        raise _reject("Unauthorized", "members cannot move their own expulsion")
    if not state.sc.is_seated(target):
        raise _reject("UnknownEntity", f"{target} is not a seated SC member")
    _, ev = _open_motion(state, "sc_expel", target, tx.sender)
    return [ev]


def _sc_rekey(state: BoardState, tx: Transaction) -> list[dict]:
    _require_seated(state, tx.sender)
    try:
        keyset = CommitteeKeySet.from_json(tx.payload["keyset"])
        members = {str(k): int(v) for k, v in tx.payload["members"].items()}
    except Exception as exc:
        raise _reject("MalformedPayload", f"bad keyset: {exc}") from exc
    if keyset.epoch != state.current_epoch + 1:
        raise _reject("WrongState", f"next epoch is {state.current_epoch + 1}")
    if sorted(members) != state.sc.seated():
        raise _reject("MalformedPayload", "new committee must be exactly the seated members")
    if sorted(members.values()) != list(range(1, keyset.n + 1)) or keyset.d != state.params.d:
        raise _reject("MalformedPayload", "share indices or threshold do not match")
    if {i for i, _ in keyset.member_public_shares} != set(members.values()):
        raise _reject("MalformedPayload", "verification values do not cover the members")
    state.committees[keyset.epoch] = keyset
    state.committee_members[keyset.epoch] = members
    state.current_epoch = keyset.epoch
    return [{"kind": "sc_rekeyed", "epoch": keyset.epoch, "n": keyset.n}]


def _ca_join(state: BoardState, tx: Transaction) -> list[dict]:
    p = state.params
    if tx.sender.startswith("acc:") or tx.sender not in state.keys:
        raise _reject("Unauthorized", "CA applicants must be registered identities")
    existing = state.cas.cas.get(tx.sender)
    if existing is not None and existing["status"] != "gone":
        raise _reject("AlreadyRegistered", f"{tx.sender} is already {existing['status']}")
    pk_ca = tx.payload["pk_ca"]
    try:
        IssuerPublicKey.from_hex(pk_ca)
    except Exception as exc:
        raise _reject("MalformedPayload", f"bad pk_CA: {exc}") from exc
    if state.ca_by_pk(pk_ca) is not None:
        raise _reject("AlreadyRegistered", "pk_CA already registered")
    collateral = tx.payload["collateral"]
    if collateral < p.CA_COLLATERAL:
        raise _reject("InsufficientStake", f"collateral {collateral} < CA_COLLATERAL {p.CA_COLLATERAL}")
    _debit(state, tx.sender, collateral + p.JOIN_FEE_DEDUCTION)
    state.burned_total += p.JOIN_FEE_DEDUCTION
    state.cas.cas[tx.sender] = {
        "pk_ca": pk_ca, "collateral": collateral, "scope": tx.payload["scope"], "issued": 0, "penalties": 0,
        "status": "pending", "notice_day": None, "successor": None, "window_start": 0, "window_issued": 0,
    }
    _, ev = _open_motion(state, "ca_join", tx.sender, tx.sender)
    return [ev]


def _ca_exit_notice(state: BoardState, tx: Transaction) -> list[dict]:
    ca = _ca_entry(state, tx.sender)
    if ca["status"] != "active":
        raise _reject("WrongState", f"CA is {ca['status']}")
    ca.update(status="exiting", notice_day=state.day)
    return [{"kind": "ca_exit_notice", "ca": tx.sender, "finalizable_from": state.day + state.params.NOTICE_PERIOD}]


def _ca_finalize_exit(state: BoardState, tx: Transaction) -> list[dict]:
    p = state.params
    ca = _ca_entry(state, tx.sender)
    if ca["status"] != "exiting":
        raise _reject("WrongState", f"CA is {ca['status']}")
    if state.day < ca["notice_day"] + p.NOTICE_PERIOD:
        raise _reject("NoticePeriodNotElapsed", f"finalizable from day {ca['notice_day'] + p.NOTICE_PERIOD}")
    successor = tx.payload.get("successor")
    db_digest = tx.payload.get("db_digest")
    ack = tx.payload.get("ack")
    if not (isinstance(successor, str) and isinstance(db_digest, str) and isinstance(ack, str)):
        raise _reject("PendingDutiesExist", "no database transfer recorded")
    succ = state.cas.cas.get(successor)
    if succ is None or succ["status"] != "active" or successor == tx.sender:
        raise _reject("CaInactive", f"successor {successor} is not an active CA")
    try:
        sig = SchnorrSignature.decode(bytes.fromhex(ack))
        acked = schnorr_verify(G1.from_hex(state.keys[successor]), transfer_ack_message(tx.sender, successor, db_digest), sig)
    except Exception:
        acked = False
    if not acked:
        raise _reject("PendingDutiesExist", "successor has not acknowledged the database transfer")
    _credit(state, tx.sender, ca["collateral"])
    ca.update(collateral=0, status="gone", successor=successor, db_digest=db_digest)
    affected = sorted(rid for rid, a in state.users.asds.items() if a.statement.pk_ca.hex() == ca["pk_ca"])
    state.users.renewal_due.update(affected)
    return [{"kind": "ca_exited", "ca": tx.sender, "successor": successor, "renewal_due": affected}]


def _ca_penalize(state: BoardState, tx: Transaction) -> list[dict]:
    _require_seated(state, tx.sender)
    target = tx.payload["ca"]
    ca = state.cas.cas.get(target)
    if ca is None or ca["status"] not in SEATED:
        raise _reject("UnknownEntity", f"{target} is not an operating CA")
    _, ev = _open_motion(state, "ca_penalize", target, tx.sender)
    return [ev]


def _user_add_asd(state: BoardState, tx: Transaction) -> list[dict]:
    p = state.params
    try:
        asd = Asd.from_json(tx.payload["asd"])
    except Exception as exc:
        raise _reject("MalformedPayload", f"bad ASD: {exc}") from exc
    if tx.sender != account_id(asd.statement.pk_acc):
        raise _reject("Unauthorized", "ASDs are posted by the account they open")
    if state.balance(tx.sender) < p.REG_FEE + p.REG_BURN:
        raise _reject("InsufficientBalance", f"need {p.REG_FEE + p.REG_BURN} for fee and burn")
    if asd.regid in state.users.asds:
        raise _reject("DuplicateRegId", asd.regid[:16])
    ca_id = state.ca_by_pk(asd.statement.pk_ca.hex())
    if ca_id is None or state.cas.cas[ca_id]["status"] not in SEATED:
        raise _reject("CaInactive", "pk_CA is not an operating CA")
    verdict = verify_asd(asd, state.asd_context())
    if not verdict:
        raise _reject("InvalidAsd", str(verdict))
    ca = state.cas.cas[ca_id]
    window = state.day // p.cap_window * p.cap_window
    if ca["window_start"] != window:
        ca.update(window_start=window, window_issued=0)
    cap = p.cap_factor * state.ca_score(ca_id)
    if ca["window_issued"] >= cap:
        raise _reject("IssuanceCapReached", f"{ca_id} issued {ca['window_issued']} of {cap} this window")
    _debit(state, tx.sender, p.REG_FEE + p.REG_BURN)
    _credit(state, ca_id, p.REG_FEE)
    state.burned_total += p.REG_BURN
    ca["issued"] += 1
    ca["window_issued"] += 1
    state.users.asds[asd.regid] = asd
    return [{"kind": "asd_added", "regid": asd.regid, "ca": ca_id}]


def _asd_or_unknown(state: BoardState, regid: str) -> Asd:
    asd = state.users.asds.get(regid)
    if asd is None:
        raise _reject("UnknownEntity", f"RegID {regid[:16]} not on the Users board")
    return asd


def _user_deactivate(state: BoardState, tx: Transaction) -> list[dict]:
    regid = tx.payload["regid"]
    asd = _asd_or_unknown(state, regid)
    if tx.sender != account_id(asd.statement.pk_acc):
        raise _reject("Unauthorized", "only the account owner may deactivate it")
    if regid in state.users.deactivated:
        raise _reject("WrongState", "already deactivated")
    state.users.deactivated.add(regid)
    return [{"kind": "asd_deactivated", "regid": regid}]


def _block_account(state: BoardState, tx: Transaction) -> list[dict]:
    _require_seated(state, tx.sender)
    prop = state.proposals.proposals.get(tx.payload["proposal"])
    if prop is None:
        raise _reject("UnknownEntity", "unknown proposal")
    if prop["status"] != "executed":
        raise _reject("VoteNotPassed", "blocking needs an executed revealing proposal")
    pk_acc = tx.payload["pk_acc"]
    if pk_acc not in {a[2] for a in prop["result"]["accounts"]}:
        raise _reject("UnknownEntity", "pk_ACC was not revealed by this proposal")
    if pk_acc in state.users.blocked_pk_acc:
        raise _reject("WrongState", "already blocked")
    state.users.blocked_pk_acc.add(pk_acc)
    return [{"kind": "account_blocked", "pk_acc": pk_acc}]


def _website_complaint(state: BoardState, tx: Transaction) -> list[dict]:
    if not tx.sender.startswith("web:"):
        raise _reject("Unauthorized", "complaints come from website identities")
    if state.balance(tx.sender) < state.params.WEBSITE_MIN_BALANCE:
        raise _reject("InsufficientBalance", f"websites must hold {state.params.WEBSITE_MIN_BALANCE}")
    _asd_or_unknown(state, tx.payload["regid"])
    return [{"kind": "complaint", "website": tx.sender, "regid": tx.payload["regid"], "notify": state.sc.seated()}]


def _rp_submit(state: BoardState, tx: Transaction) -> list[dict]:
    _require_seated(state, tx.sender)
    regid = tx.payload["regid"]
    asd = _asd_or_unknown(state, regid)
    pid = state.next_id("rp")
    state.proposals.proposals[pid] = {
        "asd_ref": regid, "proposer": tx.sender, "reason": tx.payload.get("reason", ""), "votes": {},
        "opened": state.day, "deadline": state.day + state.params.VOTE_WINDOW, "status": "voting",
        "eid_epoch": asd.statement.committee_epoch, "eid_shares": {}, "idcred_pub": None,
        "record": None, "ereg_shares": {}, "result": None,
    }
    return [{"kind": "rp_submitted", "proposal": pid}]


def _proposal(state: BoardState, pid: str) -> dict:
    prop = state.proposals.proposals.get(pid)
    if prop is None:
        raise _reject("UnknownEntity", f"unknown proposal {pid}")
    return prop


def _rp_vote(state: BoardState, tx: Transaction) -> list[dict]:
    _require_seated(state, tx.sender)
    pid, vote = tx.payload["proposal"], tx.payload["vote"]
    prop = _proposal(state, pid)
    if vote not in ("yes", "no"):
        raise _reject("MalformedPayload", "vote must be yes or no")
    if prop["status"] != "voting":
        raise _reject("VoteClosed", f"proposal is {prop['status']}")
    if tx.sender in prop["votes"]:
        raise _reject("AlreadyVoted", f"{tx.sender} already voted")
    prop["votes"][tx.sender] = vote
    events = [{"kind": "rp_vote", "proposal": pid}]
    yes = sum(1 for v in prop["votes"].values() if v == "yes")
    if yes >= state.params.d + 1:
        prop["status"] = "approved"
        events.append({"kind": "rp_approved", "proposal": pid, "yes": yes})
    return events


def _member_index(state: BoardState, epoch: int, member: str) -> int:
    idx = state.committee_members.get(epoch, {}).get(member)
    if idx is None:
        raise _reject("Unauthorized", f"{member} holds no share for epoch {epoch}")
    return idx


def _parse_shares(raw: list) -> list[DecryptionShare]:
    try:
        return [DecryptionShare.from_json(s) for s in raw]
    except Exception as exc:
        raise _reject("MalformedPayload", f"bad decryption share: {exc}") from exc


def _record_ca_chain(state: BoardState, start_pk: str) -> set[str]:
    cid = state.ca_by_pk(start_pk)
    chain = set()
    while cid is not None and cid not in chain:
        chain.add(cid)
        cid = state.cas.cas[cid].get("successor")
    return chain


def _rp_share(state: BoardState, tx: Transaction) -> list[dict]:
    _require_seated(state, tx.sender)
    pid, phase = tx.payload["proposal"], tx.payload["phase"]
    prop = _proposal(state, pid)
    if prop["status"] != "approved":
        raise _reject("VoteNotPassed", f"proposal is {prop['status']}")
    shares = _parse_shares(tx.payload["shares"])
    asd = state.users.asds[prop["asd_ref"]]
    d = state.params.d
    if phase == "eid":
        epoch = prop["eid_epoch"]
        idx = _member_index(state, epoch, tx.sender)
        if len(shares) != 1 or shares[0].index != idx:
            raise _reject("Unauthorized", "a member posts exactly its own share")
        if tx.sender in prop["eid_shares"]:
            raise _reject("AlreadyVoted", "share already posted")
        if not verify_share(state.committees[epoch], asd.statement.eid, shares[0]):
            raise _reject("InvalidShare", f"share {idx} fails its proof")
        prop["eid_shares"][tx.sender] = shares[0].to_json()
        events = [{"kind": "rp_share", "proposal": pid, "phase": phase}]
        if prop["idcred_pub"] is None and len(prop["eid_shares"]) >= d + 1:
            posted = [DecryptionShare.from_json(s) for s in prop["eid_shares"].values()]
            prop["idcred_pub"] = combine_shares(asd.statement.eid, posted, state.committees[epoch]).hex()
            events.append({"kind": "rp_eid_decrypted", "proposal": pid})
        return events
    if phase != "ereg":
        raise _reject("MalformedPayload", "phase is eid or ereg")
    if prop["idcred_pub"] is None:
        raise _reject("WrongState", "EID not decrypted yet")
    if prop["record"] is None:
        if "record" not in tx.payload:
            raise _reject("RecordMismatch", "first ereg share must attach the CA record")
        try:
            record = CARecord.from_json(tx.payload["record"])
        except Exception as exc:
            raise _reject("MalformedPayload", f"bad CA record: {exc}") from exc
        if record.idcred_pub.hex() != prop["idcred_pub"]:
            raise _reject("RecordMismatch", "record IDcredPUB differs from the decrypted one")
        if record.ca_id not in _record_ca_chain(state, asd.statement.pk_ca.hex()):
            raise _reject("RecordMismatch", "record does not come from the ASD's CA or its successors")
        prop["record"] = record.to_json()
    record = CARecord.from_json(prop["record"])
    epoch = record.committee_epoch
    idx = _member_index(state, epoch, tx.sender)
    if tx.sender in prop["ereg_shares"]:
        raise _reject("AlreadyVoted", "shares already posted")
    if len(shares) != record.ereg.chunk_count or any(s.index != idx for s in shares):
        raise _reject("Unauthorized", "a member posts exactly its own share for every chunk")
    for chunk, s in zip(record.ereg.chunks, shares):
        if not verify_share(state.committees[epoch], chunk, s):
            raise _reject("InvalidShare", f"share {idx} fails its proof")
    prop["ereg_shares"][tx.sender] = [s.to_json() for s in shares]
    return [{"kind": "rp_share", "proposal": pid, "phase": phase}]


def _rp_execute(state: BoardState, tx: Transaction) -> list[dict]:
    _require_seated(state, tx.sender)
    pid = tx.payload["proposal"]
    prop = _proposal(state, pid)
    d = state.params.d
    yes = sum(1 for v in prop["votes"].values() if v == "yes")
    if prop["status"] != "approved" or yes < d + 1:
        raise _reject("VoteNotPassed", f"proposal is {prop['status']} with {yes} yes votes")
    if len(state.sc.seated()) < d + 1:
        raise _reject("TooFewMembers", "SC is below d+1 seated members")
    if prop["idcred_pub"] is None or len(prop["eid_shares"]) < d + 1:
        raise _reject("NotEnoughShares", f"{len(prop['eid_shares'])} EID shares, need {d + 1}")
    if prop["record"] is None or len(prop["ereg_shares"]) < d + 1:
        raise _reject("NotEnoughShares", f"{len(prop['ereg_shares'])} ERegID shares, need {d + 1}")
    record = CARecord.from_json(prop["record"])
    keyset = state.committees[record.committee_epoch]
    per_member = [[DecryptionShare.from_json(s) for s in row] for row in prop["ereg_shares"].values()]
    try:
        chunks = [
            bsgs_decode(combine_shares(ct, [row[j] for row in per_member], keyset), record.ereg.chunk_bits)
            for j, ct in enumerate(record.ereg.chunks)
        ]
    except NotInRange as exc:
        raise _reject("DecryptionFailed", str(exc)) from exc
    K = Scalar(recompose(chunks, record.ereg.chunk_bits))
    asd = state.users.asds[prop["asd_ref"]]
    accounts = accounts_of(K, asd.statement.max_acc, state.users.asds)
    if prop["asd_ref"] not in {rid for _, rid, _ in accounts}:
        raise _reject("RecordMismatch", "recovered K does not produce the proposal's RegID")
    prop["result"] = {
        "idcred_pub": prop["idcred_pub"], "docs": record.user_docs.to_json(), "ca_id": record.ca_id,
        "accounts": [list(a) for a in accounts],
    }
    prop["status"] = "executed"
    state.proposals.revealed.append({"proposal": pid, "day": state.day, "docs": record.user_docs.to_json()})
    return [{"kind": "rp_executed", "proposal": pid, "accounts": len(accounts)}]


def _token_transfer(state: BoardState, tx: Transaction) -> list[dict]:
    to, amount = tx.payload["to"], tx.payload["amount"]
    if amount <= 0:
        raise _reject("MalformedPayload", "amount must be positive")
    if not _known_recipient(state, to):
        raise _reject("UnknownEntity", f"unknown recipient {to[:24]}")
    _debit(state, tx.sender, amount)
    _credit(state, to, amount)
    return [{"kind": "transfer", "amount": amount}]


_HANDLERS: dict[str, Callable[[BoardState, Transaction], list[dict]]] = {
    "ScJoinRequest": _sc_join,
    "ScVote": lambda s, t: _cast_vote(s, t, SC_MOTIONS),
    "ScExitNotice": _sc_exit_notice,
    "ScFinalizeExit": _sc_finalize_exit,
    "ScExpel": _sc_expel,
    "ScRekey": _sc_rekey,
    "CaJoinRequest": _ca_join,
    "CaVote": lambda s, t: _cast_vote(s, t, CA_MOTIONS),
    "CaExitNotice": _ca_exit_notice,
    "CaFinalizeExit": _ca_finalize_exit,
    "CaPenalize": _ca_penalize,
    "UserAddAsd": _user_add_asd,
    "UserDeactivateAsd": _user_deactivate,
    "BlockAccount": _block_account,
    "WebsiteComplaint": _website_complaint,
    "RpSubmit": _rp_submit,
    "RpVote": _rp_vote,
    "RpShare": _rp_share,
    "RpExecute": _rp_execute,
    "TokenTransfer": _token_transfer,
}


def _log_for(state: BoardState, kind: str) -> list[str]:
    if kind.startswith("Sc"):
        return state.sc.tx_log
    if kind.startswith("Ca"):
        return state.cas.tx_log
    if kind.startswith("Rp"):
        return state.proposals.tx_log
    if kind == "TokenTransfer":
        return state.token_log
    return state.users.tx_log


def _apply_in_place(state: BoardState, tx: Transaction) -> list[dict]:
    if tx.kind not in TX_KINDS:
        raise _reject("MalformedPayload", f"unknown transaction kind {tx.kind!r}")
    pk = _sender_key(state, tx.sender)
    if pk is None or not tx.signature_valid(pk):
        raise _reject("Unauthorized", "signature does not verify under the sender's key")
    expected = state.nonces.get(tx.sender, 0) + 1
    if tx.nonce != expected:
        raise _reject("BadNonce", f"expected nonce {expected}")
    for name, typ in PAYLOAD_SCHEMA[tx.kind].items():
        value = tx.payload.get(name)
        if not isinstance(value, typ) or (typ is int and isinstance(value, bool)):
            raise _reject("MalformedPayload", f"{tx.kind}.{name} must be {typ.__name__}")
    events = _HANDLERS[tx.kind](state, tx)
    state.nonces[tx.sender] = tx.nonce
    digest = tx.digest()
    _log_for(state, tx.kind).append(digest)
    return [{"kind": "applied", "tx": tx.kind, "sender": tx.sender, "digest": digest}] + events


def apply(state: BoardState, tx: Transaction) -> tuple[BoardState, list[dict]]:
    work = copy.deepcopy(state)
    try:
        events = _apply_in_place(work, tx)
    except TxRejected as rej:
        return state, [{"kind": "rejected", "tx": tx.kind, "sender": tx.sender, "rule": rej.rule, "detail": rej.detail}]
    if not work.conserved():
        raise AssertionError(f"token conservation broken by {tx.kind}")
    return work, events


# -- time -----------------------------------------------------------------

def advance_time(state: BoardState, days: int) -> tuple[BoardState, list[dict]]:
    if days < 1:
        raise ValueError("advance_time needs days >= 1")
    work = copy.deepcopy(state)
    events: list[dict] = []
    p = work.params
    for _ in range(days):
        work.day += 1
        for mid, motion in sorted(work.sc.motions.items()):
            if motion["status"] == "voting" and motion["deadline"] <= work.day:
                events += _resolve_motion(work, mid, at_deadline=True)
        for pid, prop in sorted(work.proposals.proposals.items()):
            if prop["status"] == "voting" and prop["deadline"] <= work.day:
                prop["status"] = "rejected"
                seated = work.sc.seated()
                events.append({
                    "kind": "rp_rejected", "proposal": pid,
                    "yes": sum(1 for v in prop["votes"].values() if v == "yes"),
                    "non_voters": [m for m in seated if m not in prop["votes"]],
                })
        expired = sorted(
            rid for rid, a in work.users.asds.items()
            if a.statement.expires_at <= work.day and rid not in work.users.renewal_due
        )
        if expired:
            work.users.renewal_due.update(expired)
            events.append({"kind": "renewal_due", "regids": expired})
        for mid, member in sorted(work.sc.members.items()):
            if member["status"] == "exiting" and member["notice_day"] + p.NOTICE_PERIOD == work.day:
                events.append({"kind": "exit_finalizable", "member": mid})
        for cid, ca in sorted(work.cas.cas.items()):
            if ca["status"] == "exiting" and ca["notice_day"] + p.NOTICE_PERIOD == work.day:
                events.append({"kind": "exit_finalizable", "ca": cid})
    for ev in events:
        ev.setdefault("day", work.day)
    return work, events


# -- reads ----------------------------------------------------------------

BOARDS = ("sc", "cas", "users", "proposals")


def query(state: BoardState, board: str, reader: str) -> dict:
    """ACL-filtered view. Only seated SC members can see the proposals board."""
    snap = state.to_json()
    if board == "sc":
        return {"board": "sc", **snap["sc"], "burned_total": state.burned_total, "epoch": state.current_epoch}
    if board == "cas":
        cas = {cid: {**ca, "score": state.ca_score(cid)} for cid, ca in sorted(state.cas.cas.items())}
        return {"board": "cas", "cas": cas, "tx_log": snap["cas"]["tx_log"]}
    if board == "users":
        return {"board": "users", **snap["users"]}
    if board == "proposals":
        if state.sc.is_seated(reader):
            return {"board": "proposals", **snap["proposals"]}
        return {"board": "proposals", "redacted": True}
    raise ValueError(f"unknown board {board!r}; expected one of {BOARDS}")
