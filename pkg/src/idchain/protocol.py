"""User registration, account creation and anonymity revocation.

The three flows are written as plain functions over explicit inputs. The
user and CA sides of registration are separate calls so tests can tamper
with the message in between; ``run_registration`` wires them together.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import blindsig
from .blindsig import FIRST_ATTR, IDX_IDCRED, IDX_K, BlindSignRequest, IssuerKeyPair, IssuerPublicKey, Signature
from .crypto.groups import G1, Scalar
from .errors import (
    CARecordMissing,
    CertExpired,
    DocsRejected,
    DuplicateIDcredPUB,
    IssuanceFailed,
    MalformedDocs,
    MaxAccountsReached,
    NotEnoughShares,
    PolicyUnsatisfied,
    RegistrationProofInvalid,
    UnknownRegId,
)
from .prf import prf_eval, sample_key
from .relation import (
    AccountProof,
    AccountStatement,
    AccountWitness,
    Policy,
    RegistrationProof,
    Verdict,
    prove_account,
    prove_registration,
    verify_account,
    verify_registration,
)
from .threshold import (
    ChunkedCiphertext,
    CommitteeKeySet,
    KeyShare,
    combine_shares,
    encrypt_element,
    encrypt_scalar_chunked,
    partial_decrypt,
    split_chunks,
    threshold_decrypt_chunked,
)

GENESIS_YEAR = 2025
DAYS_PER_YEAR = 365
SCHEMA_VERSION = 1
CERT_VALIDITY = 180
DEFAULT_MAX_ACC = 3
ATTRIBUTE_SCHEMA = ("over18", "country", "issuance_epoch", "schema_version")

# ISO 3166-1 numeric codes for the countries the simulator knows about
COUNTRY_CODES = {
    "AT": 40, "AU": 36, "BE": 56, "BR": 76, "CA": 124, "CH": 756, "CN": 156,
    "DE": 276, "DK": 208, "ES": 724, "FI": 246, "FR": 250, "GB": 826, "IE": 372,
    "IN": 356, "IR": 364, "IT": 380, "JP": 392, "KR": 410, "MX": 484, "NL": 528,
    "NO": 578, "PL": 616, "PT": 620, "SE": 752, "SG": 702, "TR": 792, "UA": 804,
    "US": 840, "ZA": 710,
}


# -- data objects ---------------------------------------------------------

@dataclass(frozen=True)
class UserDocs:
    doc_blob: bytes
    doc_hash: bytes
    country: str
    birth_year: int

    @classmethod
    def make(cls, blob: bytes | str, country: str, birth_year: int) -> UserDocs:
        if isinstance(blob, str):
            blob = blob.encode()
        return cls(blob, hashlib.sha256(blob).digest(), country, int(birth_year))

    def well_formed(self) -> bool:
        return hashlib.sha256(self.doc_blob).digest() == self.doc_hash

    def encode(self) -> bytes:
        return self.doc_blob + self.doc_hash + self.country.encode() + self.birth_year.to_bytes(4, "big", signed=True)

    def to_json(self) -> dict:
        return {
            "blob": self.doc_blob.hex(),
            "hash": self.doc_hash.hex(),
            "country": self.country,
            "birth_year": self.birth_year,
        }

    @classmethod
    def from_json(cls, obj: dict) -> UserDocs:
        return cls(bytes.fromhex(obj["blob"]), bytes.fromhex(obj["hash"]), obj["country"], int(obj["birth_year"]))


@dataclass(frozen=True)
class AttributeList:
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(ATTRIBUTE_SCHEMA):
            raise ValueError(f"AL needs {len(ATTRIBUTE_SCHEMA)} values")
        over18, country, epoch, version = self.values
        if over18 not in (0, 1) or not 0 < country < 1000 or not 0 <= epoch < 1 << 16 or version != SCHEMA_VERSION:
            raise ValueError(f"AL value outside its schema domain: {self.values}")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def scalars(self) -> list[Scalar]:
        return [Scalar(v) for v in self.values]

    def named(self) -> dict[str, int]:
        return dict(zip(ATTRIBUTE_SCHEMA, self.values))


@dataclass
class UserCert:
    idcred_pub: G1
    idcred_sec: Scalar
    K: Scalar
    attributes: AttributeList
    sigma: Signature
    ca_id: str
    pk_ca: IssuerPublicKey
    committee_epoch: int
    issued_at: int
    next_account_index: int = 1

    def expires_at(self, validity: int = CERT_VALIDITY) -> int:
        return self.issued_at + validity

    def messages(self) -> list[Scalar]:
        return [self.idcred_sec, self.K, *self.attributes.scalars()]


@dataclass(frozen=True)
class CARecord:
    user_docs: UserDocs
    idcred_pub: G1
    attributes: AttributeList
    ereg: ChunkedCiphertext
    committee_epoch: int
    committee_pk: G1
    ca_id: str
    registered_at: int

    def to_json(self) -> dict:
        return {
            "docs": self.user_docs.to_json(),
            "idcred_pub": self.idcred_pub.hex(),
            "attributes": list(self.attributes.values),
            "ereg": self.ereg.to_json(),
            "committee_epoch": self.committee_epoch,
            "committee_pk": self.committee_pk.hex(),
            "ca_id": self.ca_id,
            "registered_at": self.registered_at,
        }

    @classmethod
    def from_json(cls, obj: dict) -> CARecord:
        return cls(
            UserDocs.from_json(obj["docs"]),
            G1.from_hex(obj["idcred_pub"]),
            AttributeList(tuple(obj["attributes"])),
            ChunkedCiphertext.from_json(obj["ereg"]),
            int(obj["committee_epoch"]),
            G1.from_hex(obj["committee_pk"]),
            obj["ca_id"],
            int(obj["registered_at"]),
        )


@dataclass(frozen=True)
class Asd:
    statement: AccountStatement
    proof: AccountProof
    created_at: int

    @property
    def expires_at(self) -> int:
        return self.statement.expires_at

    @property
    def regid(self) -> str:
        return self.statement.regid.hex()

    def to_json(self) -> dict:
        return {"statement": self.statement.to_json(), "proof": self.proof.hex(), "created_at": self.created_at}

    @classmethod
    def from_json(cls, obj: dict) -> Asd:
        return cls(AccountStatement.from_json(obj["statement"]), AccountProof.from_hex(obj["proof"]), int(obj["created_at"]))

    def encode(self) -> bytes:
        st = self.statement
        parts = [
            st.regid.encode(), st.eid.encode(), st.committee_pk.encode(), st.pk_ca.encode(), st.pk_acc.encode(),
            st.policy.encode(), st.x.to_bytes(4, "big"), st.max_acc.to_bytes(4, "big"),
            st.committee_epoch.to_bytes(4, "big"), st.expires_at.to_bytes(4, "big"),
            st.cert_validity.to_bytes(4, "big"), self.created_at.to_bytes(4, "big"), self.proof.encode(),
        ]
        return b"".join(parts)

    def digest(self) -> str:
        return hashlib.sha256(self.encode()).hexdigest()


@dataclass(frozen=True)
class RevocationResult:
    idcred_pub: G1
    user_docs: UserDocs
    K: Scalar
    accounts: tuple[tuple[int, str, str], ...]  # (x, RegID hex, pk_ACC hex)
    ca_id: str

    def to_json(self) -> dict:
        return {
            "idcred_pub": self.idcred_pub.hex(),
            "docs": self.user_docs.to_json(),
            "accounts": [list(a) for a in self.accounts],
            "ca_id": self.ca_id,
        }


# -- attribute extraction -------------------------------------------------

def clock_year(clock_day: int, genesis_year: int = GENESIS_YEAR) -> int:
    return genesis_year + clock_day // DAYS_PER_YEAR


def ca_extract_attributes(docs: UserDocs, clock_day: int, genesis_year: int = GENESIS_YEAR) -> AttributeList:
    if not docs.well_formed():
        raise MalformedDocs("doc_hash does not match doc_blob")
    code = COUNTRY_CODES.get(docs.country.upper())
    if code is None:
        raise MalformedDocs(f"unknown country {docs.country!r}")
    year = clock_year(clock_day, genesis_year)
    if not 1850 <= docs.birth_year <= year:
        raise MalformedDocs(f"implausible birth year {docs.birth_year}")
    over18 = 1 if year - docs.birth_year >= 18 else 0
    return AttributeList((over18, code, int(clock_day), SCHEMA_VERSION))


# -- certificate authority ------------------------------------------------

@dataclass(frozen=True)
class RegistrationMessage:
    """What the user sends the CA."""

    docs: UserDocs
    request: BlindSignRequest
    ereg: ChunkedCiphertext
    ereg_proof: RegistrationProof
    committee_epoch: int

    @property
    def idcred_pub(self) -> G1 | None:
        return self.request.public_images.get(IDX_IDCRED)

    def segments(self) -> list[tuple[str, bytes]]:
        out = [("docs", self.docs.encode()), ("epoch", self.committee_epoch.to_bytes(4, "big"))]
        out += [(f"request.{n}", b) for n, b in self.request.segments()]
        out.append(("ereg", self.ereg.encode()))
        out += [(f"ereg_proof.{n}", b) for n, b in self.ereg_proof.segments()]
        return out


@dataclass
class _PendingRegistration:
    idcred_sec: Scalar
    K: Scalar
    blinding: blindsig.BlindingState


class CertificateAuthority:
    """A CA's private side: its signing key and its store of records keyed by IDcredPUB."""

    def __init__(self, ca_id: str, keypair: IssuerKeyPair, scope: str = "*"):
        self.ca_id = ca_id
        self.keypair = keypair
        self.scope = scope
        self.records: dict[bytes, CARecord] = {}

    @classmethod
    def create(cls, ca_id: str, rng, scope: str = "*") -> CertificateAuthority:
        return cls(ca_id, blindsig.issuer_keygen(len(ATTRIBUTE_SCHEMA), rng), scope)

    @property
    def pk(self) -> IssuerPublicKey:
        return self.keypair.pk

    def covers(self, country: str) -> bool:
        if self.scope in ("*", ""):
            return True
        return country.upper() in {c.strip().upper() for c in self.scope.split(",")}

    def lookup(self, idcred_pub: G1) -> CARecord | None:
        return self.records.get(idcred_pub.encode())

    def delete_record(self, idcred_pub: G1) -> None:
        self.records.pop(idcred_pub.encode(), None)

    def db_digest(self) -> str:
        h = hashlib.sha256()
        for key in sorted(self.records):
            h.update(key)
            h.update(self.records[key].ereg.encode())
        return h.hexdigest()

    def handle_registration(
        self,
        msg: RegistrationMessage,
        committee: CommitteeKeySet,
        clock_day: int,
        rng,
        require_range: bool = True,
    ) -> tuple[Signature, AttributeList, CARecord]:
        if not msg.docs.well_formed():
            raise DocsRejected("doc_hash does not match doc_blob")
        try:
            attributes = ca_extract_attributes(msg.docs, clock_day)
        except MalformedDocs as exc:
            raise DocsRejected(str(exc)) from exc
        if not self.covers(msg.docs.country):
            raise DocsRejected(f"country {msg.docs.country} outside CA scope {self.scope!r}")
        idcred_pub = msg.idcred_pub
        if idcred_pub is None or set(msg.request.message_commitments) != {IDX_IDCRED, IDX_K}:
            raise RegistrationProofInvalid("request must hide exactly IDcredSEC and K and expose IDcredPUB")
        if idcred_pub.encode() in self.records:
            raise DuplicateIDcredPUB(idcred_pub.hex())
        if msg.committee_epoch != committee.epoch:
            raise RegistrationProofInvalid(f"ERegID targets epoch {msg.committee_epoch}, current is {committee.epoch}")
        if not blindsig.verify_request(self.pk, msg.request):
            raise RegistrationProofInvalid("blind-signature request proof fails")
        k_com = msg.request.message_commitments[IDX_K]
        if not verify_registration(msg.ereg, k_com, msg.ereg_proof, committee.pk, require_range):
            raise RegistrationProofInvalid("ERegID proof fails")
        known = {FIRST_ATTR + i: s for i, s in enumerate(attributes.scalars())}
        blinded = blindsig.blind_sign(self.keypair, msg.request, known, rng)
        record = CARecord(msg.docs, idcred_pub, attributes, msg.ereg, committee.epoch, committee.pk, self.ca_id, clock_day)
        self.records[idcred_pub.encode()] = record
        return blinded, attributes, record


class CaDirectory:
    """All CAs known to the simulation, with forwarding from exited CAs to successors."""

    def __init__(self):
        self.cas: dict[str, CertificateAuthority] = {}
        self.successor: dict[str, str] = {}

    def add(self, ca: CertificateAuthority) -> None:
        self.cas[ca.ca_id] = ca

    def by_pk(self, pk_ca: IssuerPublicKey) -> CertificateAuthority | None:
        enc = pk_ca.encode()
        for ca in self.cas.values():
            if ca.pk.encode() == enc:
                return ca
        return None

    def transfer(self, from_id: str, to_id: str) -> None:
        """Move every record of ``from_id`` to ``to_id`` and forward future lookups."""
        src, dst = self.cas[from_id], self.cas[to_id]
        for key, rec in src.records.items():
            dst.records.setdefault(key, rec)
        self.successor[from_id] = to_id

    def resolve(self, ca_id: str) -> list[CertificateAuthority]:
        chain, seen = [], set()
        while ca_id in self.cas and ca_id not in seen:
            seen.add(ca_id)
            chain.append(self.cas[ca_id])
            ca_id = self.successor.get(ca_id, "")
        return chain

    def find_record(self, pk_ca: IssuerPublicKey, idcred_pub: G1) -> CARecord | None:
        origin = self.by_pk(pk_ca)
        if origin is None:
            return None
        for ca in self.resolve(origin.ca_id):
            rec = ca.lookup(idcred_pub)
            if rec is not None:
                return rec
        return None


# -- registration ---------------------------------------------------------

def user_begin_registration(
    docs: UserDocs,
    pk_ca: IssuerPublicKey,
    committee: CommitteeKeySet,
    rng,
    range_proofs: bool = True,
) -> tuple[RegistrationMessage, _PendingRegistration]:
    idcred_sec = Scalar.random_nonzero(rng)
    K = sample_key(rng)
    request, blinding = blindsig.blind_request(pk_ca, {IDX_IDCRED: idcred_sec, IDX_K: K}, rng, public_images=(IDX_IDCRED,))
    ereg, rhos = encrypt_scalar_chunked(committee.pk, K, rng)
    proof = prove_registration(
        split_chunks(int(K)), rhos, blinding.openings[IDX_K], committee.pk, ereg,
        request.message_commitments[IDX_K], rng, range_proofs=range_proofs,
    )
    msg = RegistrationMessage(docs, request, ereg, proof, committee.epoch)
    return msg, _PendingRegistration(idcred_sec, K, blinding)


def user_finish_registration(
    pending: _PendingRegistration,
    blinded: Signature,
    attributes: AttributeList,
    ca: CertificateAuthority,
    committee_epoch: int,
    clock_day: int,
) -> UserCert:
    sigma = blindsig.unblind(blinded, pending.blinding)
    cert = UserCert(
        idcred_pub=G1.generator() * pending.idcred_sec,
        idcred_sec=pending.idcred_sec,
        K=pending.K,
        attributes=attributes,
        sigma=sigma,
        ca_id=ca.ca_id,
        pk_ca=ca.pk,
        committee_epoch=committee_epoch,
        issued_at=clock_day,
    )
    if not blindsig.verify(ca.pk, cert.messages(), sigma):
        raise IssuanceFailed("certificate signature does not verify")
    return cert


def run_registration(
    docs: UserDocs,
    ca: CertificateAuthority,
    committee: CommitteeKeySet,
    rng,
    clock_day: int = 0,
    range_proofs: bool = True,
) -> tuple[UserCert, CARecord, list[tuple[str, bytes]]]:
    """Both sides of registration. The third value lists every byte the CA saw or sent."""
    msg, pending = user_begin_registration(docs, ca.pk, committee, rng.child("user"), range_proofs)
    blinded, attributes, record = ca.handle_registration(msg, committee, clock_day, rng.child("ca"), range_proofs)
    transcript = msg.segments()
    transcript.append(("reply.sigma", blinded.encode()))
    transcript.append(("reply.attributes", b"".join(Scalar(v).encode() for v in attributes.values)))
    cert = user_finish_registration(pending, blinded, attributes, ca, committee.epoch, clock_day)
    return cert, record, transcript


# -- account creation -----------------------------------------------------

def build_asd(
    cert: UserCert,
    policy: Policy,
    committee: CommitteeKeySet,
    clock_day: int,
    rng,
    x: int,
    max_acc: int = DEFAULT_MAX_ACC,
    cert_validity: int = CERT_VALIDITY,
) -> tuple[Asd, Scalar]:
    """Prove an ASD for an explicit index x, without the client-side gates.

    ``create_account`` is the normal entry point; this exists so tests and the
    simulator can hand-forge statements the board must refuse.
    """
    g = G1.generator()
    rho = Scalar.random_nonzero(rng)
    sk_acc = Scalar.random_nonzero(rng)
    st = AccountStatement(
        pk_ca=cert.pk_ca,
        committee_epoch=committee.epoch,
        committee_pk=committee.pk,
        regid=prf_eval(cert.K, x),
        x=x,
        eid=encrypt_element(committee.pk, cert.idcred_pub, rho),
        pk_acc=g * sk_acc,
        policy=policy,
        max_acc=max_acc,
        expires_at=cert.expires_at(cert_validity),
        cert_validity=cert_validity,
    )
    witness = AccountWitness(cert.idcred_sec, cert.K, cert.attributes.scalars(), cert.sigma, rho, sk_acc)
    return Asd(st, prove_account(st, witness, rng), clock_day), sk_acc


def create_account(
    cert: UserCert,
    policy: Policy,
    committee: CommitteeKeySet,
    clock_day: int,
    rng,
    max_acc: int = DEFAULT_MAX_ACC,
    cert_validity: int = CERT_VALIDITY,
) -> tuple[Asd, Scalar]:
    """Build and prove a fresh ASD. Advances ``cert.next_account_index`` on success."""
    expires_at = cert.expires_at(cert_validity)
    if clock_day >= expires_at:
        raise CertExpired(f"certificate expired on day {expires_at}")
    x = cert.next_account_index
    if x > max_acc:
        raise MaxAccountsReached(f"all {max_acc} account indices used")
    if not policy.satisfied(cert.attributes.values):
        raise PolicyUnsatisfied(f"attributes {cert.attributes.named()} fail policy {policy.label!r}")
    asd, sk_acc = build_asd(cert, policy, committee, clock_day, rng, x, max_acc, cert_validity)
    cert.next_account_index = x + 1
    return asd, sk_acc


# -- public verification --------------------------------------------------

@dataclass
class AsdContext:
    """The slice of board state that ASD verification reads."""

    day: int
    active_cas: set[str]  # pk_CA hex
    committees: dict[int, str]  # epoch -> committee pk hex
    asds: Mapping[str, Asd]
    max_acc: int = DEFAULT_MAX_ACC
    cert_validity: int = CERT_VALIDITY
    blocked: set[str] = field(default_factory=set)  # pk_ACC hex
    deactivated: set[str] = field(default_factory=set)  # RegID hex


def verify_asd(asd: Asd, ctx: AsdContext, for_admission: bool = True) -> Verdict:
    """Admission mode requires a fresh RegID; status mode requires this exact ASD on the board."""
    st = asd.statement
    if st.max_acc != ctx.max_acc or st.cert_validity != ctx.cert_validity:
        return Verdict(False, "params", "statement does not use the board's Max_ACC/CERT_VALIDITY")
    if st.pk_ca.hex() not in ctx.active_cas:
        return Verdict(False, "ca", "pk_CA is not an active CA")
    if ctx.committees.get(st.committee_epoch) != st.committee_pk.hex():
        return Verdict(False, "committee", f"committee epoch {st.committee_epoch} unknown or key mismatch")
    if ctx.day >= st.expires_at:
        return Verdict(False, "expired", f"expired on day {st.expires_at}")
    if asd.created_at > ctx.day:
        return Verdict(False, "created_at", "ASD dated in the future")
    verdict = verify_account(st, asd.proof)
    if not verdict:
        return verdict
    on_board = ctx.asds.get(asd.regid)
    if for_admission:
        if on_board is not None:
            return Verdict(False, "duplicate", "RegID already on the Users board")
    else:
        if on_board is None or on_board.encode() != asd.encode():
            return Verdict(False, "unknown", "ASD not on the Users board")
        if asd.regid in ctx.deactivated:
            return Verdict(False, "deactivated", "account deactivated")
        if st.pk_acc.hex() in ctx.blocked:
            return Verdict(False, "blocked", "pk_ACC is blocked")
    return verdict


# -- revocation -----------------------------------------------------------

def _usable_shares(shares: Iterable[KeyShare], keyset: CommitteeKeySet) -> list[KeyShare]:
    by_index: dict[int, KeyShare] = {}
    for s in shares:
        if s.epoch == keyset.epoch:
            by_index.setdefault(s.index, s)
    if len(by_index) < keyset.d + 1:
        raise NotEnoughShares(f"epoch {keyset.epoch}: {len(by_index)} shares volunteered, need {keyset.d + 1}")
    return [by_index[i] for i in sorted(by_index)]


def accounts_of(K: Scalar, max_acc: int, asds: Mapping[str, Asd]) -> tuple[tuple[int, str, str], ...]:
    found = []
    for x in range(1, max_acc + 1):
        rid = prf_eval(K, x).hex()
        if rid in asds:
            found.append((x, rid, asds[rid].statement.pk_acc.hex()))
    return tuple(found)


def revoke_anonymity(
    regid: str | G1,
    sc_shares: Sequence[KeyShare],
    keysets: Mapping[int, CommitteeKeySet],
    ca_directory: CaDirectory,
    users_board: Mapping[str, Asd],
    rng,
) -> RevocationResult:
    """Run the whole reveal with locally held shares (the board path does the same steps via transactions)."""
    rid = regid.hex() if isinstance(regid, G1) else regid
    asd = users_board.get(rid)
    if asd is None:
        raise UnknownRegId(rid)
    st = asd.statement
    eid_keys = keysets[st.committee_epoch]
    holders = _usable_shares(sc_shares, eid_keys)
    dshares = [partial_decrypt(s, st.eid, rng) for s in holders]
    idcred_pub = combine_shares(st.eid, dshares, eid_keys)

    record = ca_directory.find_record(st.pk_ca, idcred_pub)
    if record is None:
        raise CARecordMissing(f"no CA record for IDcredPUB {idcred_pub.hex()[:16]}")
    reg_keys = keysets[record.committee_epoch]
    K = Scalar(threshold_decrypt_chunked(record.ereg, _usable_shares(sc_shares, reg_keys), reg_keys, rng))
    return RevocationResult(idcred_pub, record.user_docs, K, accounts_of(K, st.max_acc, users_board), record.ca_id)
