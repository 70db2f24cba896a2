"""Board state: the four boards, the token ledger, key registry and clock."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..blindsig import IssuerPublicKey
from ..protocol import Asd, AsdContext
from ..threshold import CommitteeKeySet
from .params import Params
from .tx import ACCOUNT_PREFIX, canonical

SEATED = ("active", "exiting")


@dataclass
class ScBoard:
    # member id -> {"pk", "stake", "status", "joined", "notice_day"}
    members: dict[str, dict] = field(default_factory=dict)
    expelled: list[str] = field(default_factory=list)
    # governance motions for SC and CA membership changes
    motions: dict[str, dict] = field(default_factory=dict)
    tx_log: list[str] = field(default_factory=list)

    def seated(self) -> list[str]:
        return sorted(m for m, rec in self.members.items() if rec["status"] in SEATED)

    def is_seated(self, member: str) -> bool:
        rec = self.members.get(member)
        return rec is not None and rec["status"] in SEATED


@dataclass
class CaBoard:
    # ca id -> {"pk_ca", "collateral", "scope", "issued", "penalties", "status",
    #           "notice_day", "successor", "window_start", "window_issued"}
    cas: dict[str, dict] = field(default_factory=dict)
    tx_log: list[str] = field(default_factory=list)


@dataclass
class UsersBoard:
    asds: dict[str, Asd] = field(default_factory=dict)
    blocked_pk_acc: set[str] = field(default_factory=set)
    deactivated: set[str] = field(default_factory=set)
    renewal_due: set[str] = field(default_factory=set)
    tx_log: list[str] = field(default_factory=list)


@dataclass
class ProposalBoard:
    proposals: dict[str, dict] = field(default_factory=dict)
    revealed: list[dict] = field(default_factory=list)
    tx_log: list[str] = field(default_factory=list)


@dataclass
class BoardState:
    params: Params
    day: int = 0
    total_supply: int = 0
    balances: dict[str, int] = field(default_factory=dict)
    burned_total: int = 0
    keys: dict[str, str] = field(default_factory=dict)
    nonces: dict[str, int] = field(default_factory=dict)
    committees: dict[int, CommitteeKeySet] = field(default_factory=dict)
    # epoch -> member id -> share index
    committee_members: dict[int, dict[str, int]] = field(default_factory=dict)
    current_epoch: int = 1
    sc: ScBoard = field(default_factory=ScBoard)
    cas: CaBoard = field(default_factory=CaBoard)
    users: UsersBoard = field(default_factory=UsersBoard)
    proposals: ProposalBoard = field(default_factory=ProposalBoard)
    token_log: list[str] = field(default_factory=list)
    counter: int = 0

    # -- token views --
    def staked_total(self) -> int:
        return sum(m["stake"] for m in self.sc.members.values())

    def collateral_total(self) -> int:
        return sum(c["collateral"] for c in self.cas.cas.values())

    def circulating(self) -> int:
        return sum(self.balances.values())

    def conserved(self) -> bool:
        return self.circulating() + self.staked_total() + self.collateral_total() + self.burned_total == self.total_supply

    def balance(self, who: str) -> int:
        return self.balances.get(who, 0)

    # -- CA views --
    def ca_score(self, ca_id: str) -> int:
        ca = self.cas.cas[ca_id]
        p = self.params
        raw = ca["collateral"] // p.collateral_unit + ca["issued"] - p.penalty_weight * ca["penalties"]
        return max(0, raw)

    def ca_by_pk(self, pk_hex: str) -> str | None:
        for cid, ca in self.cas.cas.items():
            if ca["pk_ca"] == pk_hex:
                return cid
        return None

    def active_ca_pks(self) -> set[str]:
        return {c["pk_ca"] for c in self.cas.cas.values() if c["status"] in SEATED}

    def asd_context(self) -> AsdContext:
        return AsdContext(
            day=self.day,
            active_cas=self.active_ca_pks(),
            committees={e: ks.pk.hex() for e, ks in self.committees.items()},
            asds=self.users.asds,
            max_acc=self.params.MAX_ACC,
            cert_validity=self.params.CERT_VALIDITY,
            blocked=set(self.users.blocked_pk_acc),
            deactivated=set(self.users.deactivated),
        )

    def next_id(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}-{self.counter}"

    # -- serialization --
    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "day": self.day,
            "total_supply": self.total_supply,
            "balances": dict(sorted(self.balances.items())),
            "burned_total": self.burned_total,
            "keys": dict(sorted(self.keys.items())),
            "nonces": dict(sorted(self.nonces.items())),
            "committees": {str(e): ks.to_json() for e, ks in sorted(self.committees.items())},
            "committee_members": {str(e): dict(sorted(m.items())) for e, m in sorted(self.committee_members.items())},
            "current_epoch": self.current_epoch,
            "counter": self.counter,
            "sc": {
                "members": self.sc.members,
                "expelled": self.sc.expelled,
                "motions": self.sc.motions,
                "tx_log": self.sc.tx_log,
            },
            "cas": {"cas": self.cas.cas, "tx_log": self.cas.tx_log},
            "users": {
                "asds": {rid: a.to_json() for rid, a in sorted(self.users.asds.items())},
                "blocked_pk_acc": sorted(self.users.blocked_pk_acc),
                "deactivated": sorted(self.users.deactivated),
                "renewal_due": sorted(self.users.renewal_due),
                "tx_log": self.users.tx_log,
            },
            "proposals": {
                "proposals": self.proposals.proposals,
                "revealed": self.proposals.revealed,
                "tx_log": self.proposals.tx_log,
            },
            "token_log": self.token_log,
        }

    @classmethod
    def from_json(cls, obj: dict) -> BoardState:
        sc, cas, users, props = obj["sc"], obj["cas"], obj["users"], obj["proposals"]
        return cls(
            params=Params.from_json(obj["params"]),
            day=obj["day"],
            total_supply=obj["total_supply"],
            balances=dict(obj["balances"]),
            burned_total=obj["burned_total"],
            keys=dict(obj["keys"]),
            nonces=dict(obj["nonces"]),
            committees={int(e): CommitteeKeySet.from_json(k) for e, k in obj["committees"].items()},
            committee_members={int(e): dict(m) for e, m in obj["committee_members"].items()},
            current_epoch=obj["current_epoch"],
            counter=obj["counter"],
            sc=ScBoard(sc["members"], list(sc["expelled"]), sc["motions"], list(sc["tx_log"])),
            cas=CaBoard(cas["cas"], list(cas["tx_log"])),
            users=UsersBoard(
                {rid: Asd.from_json(a) for rid, a in users["asds"].items()},
                set(users["blocked_pk_acc"]),
                set(users["deactivated"]),
                set(users["renewal_due"]),
                list(users["tx_log"]),
            ),
            proposals=ProposalBoard(props["proposals"], list(props["revealed"]), list(props["tx_log"])),
            token_log=list(obj["token_log"]),
        )

    def canonical_bytes(self) -> bytes:
        return canonical(self.to_json())

    def snapshot_hash(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


def issuer_key(state: BoardState, ca_id: str) -> IssuerPublicKey:
    return IssuerPublicKey.from_hex(state.cas.cas[ca_id]["pk_ca"])


def is_account_id(ident: str) -> bool:
    return ident.startswith(ACCOUNT_PREFIX)
