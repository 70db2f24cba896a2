"""Signed board transactions with a canonical byte form."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..crypto.groups import G1, Scalar
from ..crypto.sigma import SchnorrSignature, schnorr_sign, schnorr_verify

TX_KINDS = (
    "ScJoinRequest", "ScVote", "ScExitNotice", "ScFinalizeExit", "ScExpel", "ScRekey",
    "CaJoinRequest", "CaVote", "CaExitNotice", "CaFinalizeExit", "CaPenalize",
    "UserAddAsd", "UserDeactivateAsd", "BlockAccount", "WebsiteComplaint",
    "RpSubmit", "RpVote", "RpShare", "RpExecute", "TokenTransfer",
)

ACCOUNT_PREFIX = "acc:"


def canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode()


def account_id(pk_acc: G1) -> str:
    return ACCOUNT_PREFIX + pk_acc.hex()


@dataclass(frozen=True)
class Transaction:
    kind: str
    sender: str
    nonce: int
    payload: dict = field(default_factory=dict)
    signature: str = ""

    def body(self) -> dict:
        return {"kind": self.kind, "sender": self.sender, "nonce": self.nonce, "payload": self.payload}

    def signing_bytes(self) -> bytes:
        return b"idchain-tx|" + canonical(self.body())

    def to_json(self) -> dict:
        return {**self.body(), "signature": self.signature}

    @classmethod
    def from_json(cls, obj: dict) -> Transaction:
        return cls(obj["kind"], obj["sender"], int(obj["nonce"]), dict(obj.get("payload", {})), obj.get("signature", ""))

    def digest(self) -> str:
        return hashlib.sha256(canonical(self.to_json())).hexdigest()

    def signed(self, sk: Scalar, rng) -> Transaction:
        sig = schnorr_sign(sk, self.signing_bytes(), rng)
        return Transaction(self.kind, self.sender, self.nonce, self.payload, sig.encode().hex())

    def signature_valid(self, pk: G1) -> bool:
        try:
            sig = SchnorrSignature.decode(bytes.fromhex(self.signature))
        except Exception:
            return False
        return schnorr_verify(pk, self.signing_bytes(), sig)


def transfer_ack_message(from_ca: str, to_ca: str, db_digest: str) -> bytes:
    """What a successor CA signs to acknowledge receipt of an exiting CA's database."""
    return canonical({"ack": "ca-db-transfer", "from": from_ca, "to": to_ca, "db": db_digest})
