"""Zero-knowledge proofs for account creation and registration.

The account proof shows, under a single Fiat-Shamir challenge, that

  1. the prover holds a CA signature on (IDcredSEC, K, AL),
  2. AL meets the policy (policy attributes are checked as disclosed values),
  3. RegID = PRF_K(x) for the public ordinal x,
  4. EID encrypts IDcredPUB = IDcredSEC * g1 under the committee key,
  5. the prover knows sk_ACC for pk_ACC,

and the verifier additionally checks the public gate x <= Max_ACC. A
16-bit range proof over the signed issuance day also pins the ASD's
expiry to at most issued_day + CERT_VALIDITY. The
registration proof shows that ERegID chunk-encrypts the K committed in the
blind-signature request, optionally with per-chunk range proofs.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import blindsig
from .blindsig import FIRST_ATTR, IDX_IDCRED, IDX_K, IssuerPublicKey, Signature
from .crypto.commit import CommitmentKey, default_commitment_key
from .crypto.groups import G1, Gt, Scalar
from .crypto.sigma import (
    BitProof,
    LinearRelation,
    SigmaProof,
    absorb_commitments,
    bit_check,
    bit_commit,
    bit_respond,
    check,
    commit,
    respond,
)
from .crypto.transcript import Transcript
from .errors import WitnessInconsistent
from .prf import prf_eval
from .threshold import ChunkedCiphertext, ElGamalCiphertext, encrypt_element

X_BOUND_CLAUSE = 6
EXPIRY_CLAUSE = "expiry"
# position of the issuance day inside AL
ISSUED_ATTR = 2
EXPIRY_BITS = 16

_CLAUSE_OF = {
    "signature": 1,
    "link0": 1,
    "link1": 1,
    "prf": 3,
    "eid_c1": 4,
    "eid_c2": 4,
    "acc": 5,
    "expiry": EXPIRY_CLAUSE,
}


@dataclass(frozen=True)
class Policy:
    reveals: tuple[tuple[int, int], ...] = ()
    label: str = ""

    @classmethod
    def of(cls, reveals: Mapping[int, int], label: str = "") -> Policy:
        return cls(tuple(sorted((int(i), int(v)) for i, v in reveals.items())), label)

    def satisfied(self, attributes: Sequence) -> bool:
        return all(0 <= i < len(attributes) and int(attributes[i]) == v for i, v in self.reveals)

    def disclosed_messages(self) -> dict[int, Scalar]:
        return {FIRST_ATTR + i: Scalar(v) for i, v in self.reveals}

    def encode(self) -> bytes:
        body = b"".join(struct.pack(">I", i) + Scalar(v).encode() for i, v in self.reveals)
        label = self.label.encode()
        return struct.pack(">I", len(label)) + label + struct.pack(">I", len(self.reveals)) + body

    def to_json(self) -> dict:
        return {"label": self.label, "reveals": {str(i): v for i, v in self.reveals}}

    @classmethod
    def from_json(cls, obj: dict) -> Policy:
        return cls.of({int(i): int(v) for i, v in obj.get("reveals", {}).items()}, obj.get("label", ""))


@dataclass(frozen=True)
class AccountStatement:
    pk_ca: IssuerPublicKey
    committee_epoch: int
    committee_pk: G1
    regid: G1
    x: int
    eid: ElGamalCiphertext
    pk_acc: G1
    policy: Policy
    max_acc: int
    expires_at: int
    cert_validity: int

    def absorb(self, t: Transcript) -> None:
        t.append("pk_ca", self.pk_ca.encode())
        t.append_int("epoch", self.committee_epoch)
        t.append("committee_pk", self.committee_pk.encode())
        t.append("regid", self.regid.encode())
        t.append_int("x", self.x)
        t.append("eid", self.eid.encode())
        t.append("pk_acc", self.pk_acc.encode())
        t.append("policy", self.policy.encode())
        t.append_int("max_acc", self.max_acc)
        t.append_int("expires_at", self.expires_at)
        t.append_int("cert_validity", self.cert_validity)

    def issued_disclosed(self) -> bool:
        return any(i == ISSUED_ATTR for i, _ in self.policy.reveals)

    def to_json(self) -> dict:
        return {
            "pk_ca": self.pk_ca.hex(),
            "committee_epoch": self.committee_epoch,
            "committee_pk": self.committee_pk.hex(),
            "regid": self.regid.hex(),
            "x": self.x,
            "eid": self.eid.hex(),
            "pk_acc": self.pk_acc.hex(),
            "policy": self.policy.to_json(),
            "max_acc": self.max_acc,
            "expires_at": self.expires_at,
            "cert_validity": self.cert_validity,
        }

    @classmethod
    def from_json(cls, obj: dict) -> AccountStatement:
        return cls(
            pk_ca=IssuerPublicKey.from_hex(obj["pk_ca"]),
            committee_epoch=int(obj["committee_epoch"]),
            committee_pk=G1.from_hex(obj["committee_pk"]),
            regid=G1.from_hex(obj["regid"]),
            x=int(obj["x"]),
            eid=ElGamalCiphertext.from_hex(obj["eid"]),
            pk_acc=G1.from_hex(obj["pk_acc"]),
            policy=Policy.from_json(obj["policy"]),
            max_acc=int(obj["max_acc"]),
            expires_at=int(obj["expires_at"]),
            cert_validity=int(obj["cert_validity"]),
        )


@dataclass
class AccountWitness:
    idcred_sec: Scalar
    K: Scalar
    attributes: list[Scalar]
    sigma: Signature
    rho: Scalar
    sk_acc: Scalar

    def messages(self) -> list[Scalar]:
        return [self.idcred_sec, self.K, *self.attributes]


@dataclass(frozen=True)
class AccountProof:
    sigma1: G1
    sigma2: G1
    link_commitments: dict[int, G1]
    proof: SigmaProof
    expiry_bits: tuple[G1, ...] = ()
    expiry_proofs: tuple[BitProof, ...] = ()

    def segments(self) -> list[tuple[str, bytes]]:
        out = [("sigma1", self.sigma1.encode()), ("sigma2", self.sigma2.encode())]
        out += [(f"link{j}", c.encode()) for j, c in sorted(self.link_commitments.items())]
        out += [(f"E{b}", B.encode()) for b, B in enumerate(self.expiry_bits)]
        out += [(f"T{i}", t.encode()) for i, t in enumerate(self.proof.commitments)]
        out.append(("challenge", self.proof.challenge.encode()))
        out += [(f"s:{v}", s.encode()) for v, s in self.proof.responses.items()]
        out += [(f"ebit{b}", _encode_bitproof(p)) for b, p in enumerate(self.expiry_proofs)]
        return out

    def encode(self) -> bytes:
        buf = bytearray()
        for name, data in self.segments():
            raw = name.encode()
            buf += struct.pack(">H", len(raw)) + raw + struct.pack(">I", len(data)) + data
        return bytes(buf)

    @classmethod
    def decode(cls, data: bytes) -> AccountProof:
        fields: list[tuple[str, bytes]] = []
        pos = 0
        while pos < len(data):
            (nlen,) = struct.unpack_from(">H", data, pos)
            pos += 2
            name = data[pos : pos + nlen].decode()
            pos += nlen
            (dlen,) = struct.unpack_from(">I", data, pos)
            pos += 4
            if pos + dlen > len(data):
                raise ValueError("truncated proof segment")
            fields.append((name, data[pos : pos + dlen]))
            pos += dlen
        seg = dict(fields)
        if len(seg) != len(fields):
            raise ValueError("duplicate proof segment")
        sigma1 = G1.decode(seg.pop("sigma1"))
        sigma2 = G1.decode(seg.pop("sigma2"))
        links = {j: G1.decode(seg.pop(f"link{j}")) for j in (IDX_IDCRED, IDX_K)}
        ebits = []
        while f"E{len(ebits)}" in seg:
            ebits.append(G1.decode(seg.pop(f"E{len(ebits)}")))
        eproofs = []
        while f"ebit{len(eproofs)}" in seg:
            eproofs.append(_decode_bitproof(seg.pop(f"ebit{len(eproofs)}")))
        commitments = []
        i = 0
        while f"T{i}" in seg:
            raw = seg.pop(f"T{i}")
            commitments.append(Gt.decode(raw) if i == 0 else G1.decode(raw))
            i += 1
        challenge = Scalar.decode(seg.pop("challenge"))
        responses = {}
        for name, raw in fields:
            if name.startswith("s:"):
                responses[name[2:]] = Scalar.decode(seg.pop(name))
        if seg:
            raise ValueError(f"unexpected proof segments {sorted(seg)}")
        return cls(sigma1, sigma2, links, SigmaProof(commitments, challenge, responses),
                   tuple(ebits), tuple(eproofs))

    def hex(self) -> str:
        return self.encode().hex()

    @classmethod
    def from_hex(cls, text: str) -> AccountProof:
        return cls.decode(bytes.fromhex(text))


def _encode_bitproof(p: BitProof) -> bytes:
    return p.t0.encode() + p.t1.encode() + p.c0.encode() + p.s0.encode() + p.s1.encode()


def _decode_bitproof(raw: bytes) -> BitProof:
    if len(raw) != 192:
        raise ValueError("bit proof encoding must be 192 bytes")
    return BitProof(
        G1.decode(raw[:48]), G1.decode(raw[48:96]),
        Scalar.decode(raw[96:128]), Scalar.decode(raw[128:160]), Scalar.decode(raw[160:192]),
    )


@dataclass(frozen=True)
class Verdict:
    ok: bool
    clause: int | str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "true"
        return f"false (clause {self.clause}{': ' + self.detail if self.detail else ''})"


def _account_relation(st: AccountStatement, sigma1: G1, sigma2: G1, links: Mapping[int, G1],
                      expiry_bits: Sequence[G1], ck: CommitmentKey) -> LinearRelation:
    g = G1.generator()
    rel = blindsig.pok_relation(st.pk_ca, sigma1, sigma2, st.policy.disclosed_messages(), links, ck)
    m0, m1 = f"m{IDX_IDCRED}", f"m{IDX_K}"
    rel.g1("prf", g - st.regid * st.x, [(m1, st.regid)])
    rel.g1("eid_c1", st.eid.c1, [("rho", g)])
    rel.g1("eid_c2", st.eid.c2, [("rho", st.committee_pk), (m0, g)])
    rel.g1("acc", st.pk_acc, [("sk_acc", g)])
    if not st.issued_disclosed():
        # sum 2^b E_b = (issued + validity - expires) g + R h
        agg = G1.multiexp(list(expiry_bits), [1 << b for b in range(len(expiry_bits))])
        lhs = agg + ck.g * (st.expires_at - st.cert_validity)
        rel.g1("expiry", lhs, [(f"m{FIRST_ATTR + ISSUED_ATTR}", ck.g), ("r_exp", ck.h)])
    return rel


def _account_transcript(st: AccountStatement) -> Transcript:
    t = Transcript("idchain-account-v1")
    st.absorb(t)
    return t


def witness_violation(st: AccountStatement, w: AccountWitness) -> tuple[int, str] | None:
    g = G1.generator()
    if not blindsig.verify(st.pk_ca, w.messages(), w.sigma):
        return 1, "signature does not verify under pk_CA"
    if not st.policy.satisfied(w.attributes):
        return 2, f"attributes do not satisfy policy {st.policy.label!r}"
    try:
        if prf_eval(w.K, st.x) != st.regid:
            return 3, "RegID is not PRF_K(x) for the public x"
    except Exception as exc:
        return 3, str(exc)
    if encrypt_element(st.committee_pk, g * w.idcred_sec, w.rho) != st.eid:
        return 4, "EID does not encrypt IDcredPUB under the committee key"
    if g * w.sk_acc != st.pk_acc:
        return 5, "sk_ACC does not match pk_ACC"
    slack = int(w.attributes[ISSUED_ATTR]) + st.cert_validity - st.expires_at
    if not 0 <= slack < (1 << EXPIRY_BITS):
        return EXPIRY_CLAUSE, "expires_at is later than the certificate allows"
    return None


def prove_account(st: AccountStatement, w: AccountWitness, rng, ck: CommitmentKey | None = None) -> AccountProof:
    ck = ck or default_commitment_key()
    bad = witness_violation(st, w)
    if bad:
        raise WitnessInconsistent(*bad)
    disclosed = st.policy.disclosed_messages()
    hidden = [j for j in range(st.pk_ca.m) if j not in disclosed]
    parts = blindsig.pok_prepare(st.pk_ca, w.sigma, w.messages(), hidden, rng, ck)
    witness = dict(parts.witness)
    witness.update({"rho": w.rho, "sk_acc": w.sk_acc})

    ebits: tuple[G1, ...] = ()
    bit_states = []
    if not st.issued_disclosed():
        slack = int(w.attributes[ISSUED_ATTR]) + st.cert_validity - st.expires_at
        values = [(slack >> b) & 1 for b in range(EXPIRY_BITS)]
        openings = [Scalar.random(rng) for _ in values]
        ebits = tuple(ck.g * v + ck.h * r for v, r in zip(values, openings))
        witness["r_exp"] = sum((r * (1 << b) for b, r in enumerate(openings)), Scalar(0))
        bit_states = [bit_commit(v, r, B, ck.g, ck.h, rng) for v, r, B in zip(values, openings, ebits)]

    rel = _account_relation(st, parts.sigma1, parts.sigma2, parts.link_commitments, ebits, ck)
    t = _account_transcript(st)
    t.append("sigma1", parts.sigma1.encode())
    t.append("sigma2", parts.sigma2.encode())
    rel.absorb(t)
    nonces, commitments = commit(rel, rng)
    absorb_commitments(t, commitments)
    for bs in bit_states:
        t.append("or", bs.t0.encode() + bs.t1.encode())
    c = t.challenge("c")
    responses = respond(witness, nonces, c)
    ordered = {v: responses[v] for v in rel.variables}
    return AccountProof(
        parts.sigma1, parts.sigma2, parts.link_commitments, SigmaProof(commitments, c, ordered),
        ebits, tuple(bit_respond(bs, c) for bs in bit_states),
    )


def verify_account(st: AccountStatement, proof: AccountProof | bytes, ck: CommitmentKey | None = None) -> Verdict:
    ck = ck or default_commitment_key()
    if isinstance(proof, (bytes, bytearray)):
        try:
            proof = AccountProof.decode(bytes(proof))
        except Exception as exc:
            return Verdict(False, "encoding", str(exc))
    if not (1 <= st.x <= st.max_acc):
        return Verdict(False, X_BOUND_CLAUSE, f"x={st.x} outside 1..{st.max_acc}")
    if any(not (0 <= i < st.pk_ca.m - FIRST_ATTR) for i, _ in st.policy.reveals):
        return Verdict(False, 2, "policy references an attribute outside AL")
    if proof.sigma1.is_identity():
        return Verdict(False, 1, "randomized signature is degenerate")
    if set(proof.link_commitments) != {IDX_IDCRED, IDX_K}:
        return Verdict(False, 1, "missing link commitments")
    if st.issued_disclosed():
        issued = dict(st.policy.reveals)[ISSUED_ATTR]
        if st.expires_at > issued + st.cert_validity or proof.expiry_bits or proof.expiry_proofs:
            return Verdict(False, EXPIRY_CLAUSE, "expiry exceeds the disclosed issuance day")
    elif len(proof.expiry_bits) != EXPIRY_BITS or len(proof.expiry_proofs) != EXPIRY_BITS:
        return Verdict(False, EXPIRY_CLAUSE, "expiry range proof missing")
    rel = _account_relation(st, proof.sigma1, proof.sigma2, proof.link_commitments, proof.expiry_bits, ck)
    if list(proof.proof.responses) != rel.variables:
        return Verdict(False, "encoding", "response set does not match the statement")
    failed = check(rel, proof.proof.commitments, proof.proof.challenge, proof.proof.responses)
    if failed:
        return Verdict(False, _CLAUSE_OF.get(failed, failed), f"equation {failed!r} fails")
    t = _account_transcript(st)
    t.append("sigma1", proof.sigma1.encode())
    t.append("sigma2", proof.sigma2.encode())
    rel.absorb(t)
    absorb_commitments(t, proof.proof.commitments)
    for p in proof.expiry_proofs:
        t.append("or", p.t0.encode() + p.t1.encode())
    c = t.challenge("c")
    if c != proof.proof.challenge:
        return Verdict(False, "challenge", "Fiat-Shamir challenge does not match the transcript")
    for B, p in zip(proof.expiry_bits, proof.expiry_proofs):
        if not bit_check(B, p, c, ck.g, ck.h):
            return Verdict(False, EXPIRY_CLAUSE, "expiry range proof fails")
    return Verdict(True)


# -- registration: ERegID encrypts the committed K -------------------------

@dataclass(frozen=True)
class RegistrationProof:
    bit_commitments: tuple[tuple[G1, ...], ...] | None
    proof: SigmaProof
    bit_proofs: tuple[tuple[BitProof, ...], ...] | None = None

    @property
    def range_proofs(self) -> bool:
        return self.bit_commitments is not None

    def segments(self) -> list[tuple[str, bytes]]:
        out = []
        if self.bit_commitments is not None:
            for j, row in enumerate(self.bit_commitments):
                out += [(f"B{j}.{b}", B.encode()) for b, B in enumerate(row)]
        out += [(f"T{i}", t.encode()) for i, t in enumerate(self.proof.commitments)]
        out.append(("challenge", self.proof.challenge.encode()))
        out += [(f"s:{v}", s.encode()) for v, s in self.proof.responses.items()]
        if self.bit_proofs is not None:
            for j, row in enumerate(self.bit_proofs):
                for b, p in enumerate(row):
                    out.append((f"bit{j}.{b}", _encode_bitproof(p)))
        return out

    def encode(self) -> bytes:
        return b"".join(d for _, d in self.segments())

    def to_json(self) -> dict:
        return {"range": self.range_proofs, "segments": [[n, d.hex()] for n, d in self.segments()]}

    @classmethod
    def from_json(cls, obj: dict) -> RegistrationProof:
        seg = [(n, bytes.fromhex(d)) for n, d in obj["segments"]]
        bits: dict[int, dict[int, G1]] = {}
        bit_proofs: dict[int, dict[int, BitProof]] = {}
        commitments, responses, challenge = [], {}, None
        for name, raw in seg:
            if name.startswith("B"):
                j, b = map(int, name[1:].split("."))
                bits.setdefault(j, {})[b] = G1.decode(raw)
            elif name.startswith("T"):
                commitments.append(G1.decode(raw))
            elif name == "challenge":
                challenge = Scalar.decode(raw)
            elif name.startswith("s:"):
                responses[name[2:]] = Scalar.decode(raw)
            elif name.startswith("bit"):
                j, b = map(int, name[3:].split("."))
                bit_proofs.setdefault(j, {})[b] = _decode_bitproof(raw)
        rows = lambda d: tuple(tuple(d[j][b] for b in sorted(d[j])) for j in sorted(d))  # noqa: E731
        return cls(
            rows(bits) if obj["range"] else None,
            SigmaProof(commitments, challenge, responses),
            rows(bit_proofs) if obj["range"] else None,
        )


def _registration_relation(ereg: ChunkedCiphertext, k_commitment: G1, committee_pk: G1,
                           bit_commitments, ck: CommitmentKey) -> LinearRelation:
    g = G1.generator()
    rel = LinearRelation()
    for j, ct in enumerate(ereg.chunks):
        rel.g1(f"c1_{j}", ct.c1, [(f"rho{j}", g)])
        rel.g1(f"c2_{j}", ct.c2, [(f"rho{j}", committee_pk), (f"k{j}", g)])
    weights = [ck.g * (1 << (j * ereg.chunk_bits)) for j in range(ereg.chunk_count)]
    rel.g1("k", k_commitment, [(f"k{j}", w) for j, w in enumerate(weights)] + [("r", ck.h)])
    if bit_commitments is not None:
        for j, row in enumerate(bit_commitments):
            agg = G1.multiexp(list(row), [1 << b for b in range(len(row))])
            rel.g1(f"bits{j}", agg, [(f"k{j}", ck.g), (f"R{j}", ck.h)])
    return rel


def _registration_transcript(ereg: ChunkedCiphertext, k_commitment: G1, committee_pk: G1) -> Transcript:
    t = Transcript("idchain-registration-v1")
    t.append("ereg", ereg.encode())
    t.append("k_commitment", k_commitment.encode())
    t.append("committee_pk", committee_pk.encode())
    return t


def prove_registration(
    chunk_values: Sequence[int],
    rhos: Sequence[Scalar],
    k_opening: Scalar,
    committee_pk: G1,
    ereg: ChunkedCiphertext,
    k_commitment: G1,
    rng,
    range_proofs: bool = True,
    ck: CommitmentKey | None = None,
    _allow_oversize: bool = False,
) -> RegistrationProof:
    """Prove ERegID encrypts chunk values whose weighted sum is the committed K.

    ``_allow_oversize`` exists for adversarial tests: it lets a chunk outside
    [0, 2^chunk_bits) through by overloading its top bit, which the OR-proof
    then fails to cover.
    """
    ck = ck or default_commitment_key()
    bits = ereg.chunk_bits
    if len(chunk_values) != ereg.chunk_count:
        raise WitnessInconsistent("registration", "chunk count mismatch")
    if range_proofs and not _allow_oversize:
        for k in chunk_values:
            if not 0 <= k < (1 << bits):
                raise WitnessInconsistent("registration", f"chunk value {k} outside [0, 2^{bits})")
    witness = {f"k{j}": Scalar(k) for j, k in enumerate(chunk_values)}
    witness.update({f"rho{j}": r for j, r in enumerate(rhos)})
    witness["r"] = k_opening

    bit_commitments = None
    bit_states = None
    if range_proofs:
        decomps = []
        for k in chunk_values:
            row = [(k >> b) & 1 for b in range(bits - 1)]
            row.append(k >> (bits - 1))  # equals the top bit unless k is oversized
            decomps.append(row)
        openings = [[Scalar.random(rng) for _ in range(bits)] for _ in chunk_values]
        bit_commitments = tuple(
            tuple(ck.g * bv + ck.h * rv for bv, rv in zip(row, orow))
            for row, orow in zip(decomps, openings)
        )
        for j, orow in enumerate(openings):
            witness[f"R{j}"] = sum((rv * (1 << b) for b, rv in enumerate(orow)), Scalar(0))
        bit_states = [
            [bit_commit(bv, rv, B, ck.g, ck.h, rng) for bv, rv, B in zip(row, orow, brow)]
            for row, orow, brow in zip(decomps, openings, bit_commitments)
        ]

    rel = _registration_relation(ereg, k_commitment, committee_pk, bit_commitments, ck)
    bad = rel.holds(witness)
    if bad:
        raise WitnessInconsistent("registration", f"equation {bad!r} does not hold")
    t = _registration_transcript(ereg, k_commitment, committee_pk)
    rel.absorb(t)
    nonces, commitments = commit(rel, rng)
    absorb_commitments(t, commitments)
    if bit_states is not None:
        for row in bit_states:
            for st in row:
                t.append("or", st.t0.encode() + st.t1.encode())
    c = t.challenge("c")
    responses = respond(witness, nonces, c)
    ordered = {v: responses[v] for v in rel.variables}
    bit_proofs = None
    if bit_states is not None:
        bit_proofs = tuple(tuple(bit_respond(st, c) for st in row) for row in bit_states)
    return RegistrationProof(bit_commitments, SigmaProof(commitments, c, ordered), bit_proofs)


def verify_registration(
    ereg: ChunkedCiphertext,
    k_commitment: G1,
    proof: RegistrationProof,
    committee_pk: G1,
    require_range: bool = True,
    ck: CommitmentKey | None = None,
) -> bool:
    ck = ck or default_commitment_key()
    if require_range and not proof.range_proofs:
        return False
    if proof.range_proofs:
        if proof.bit_proofs is None or len(proof.bit_commitments) != ereg.chunk_count:
            return False
        if any(len(row) != ereg.chunk_bits for row in proof.bit_commitments):
            return False
        if [len(r) for r in proof.bit_proofs] != [len(r) for r in proof.bit_commitments]:
            return False
    rel = _registration_relation(ereg, k_commitment, committee_pk, proof.bit_commitments, ck)
    if check(rel, proof.proof.commitments, proof.proof.challenge, proof.proof.responses):
        return False
    t = _registration_transcript(ereg, k_commitment, committee_pk)
    rel.absorb(t)
    absorb_commitments(t, proof.proof.commitments)
    if proof.range_proofs:
        for row in proof.bit_proofs:
            for p in row:
                t.append("or", p.t0.encode() + p.t1.encode())
    c = t.challenge("c")
    if c != proof.proof.challenge:
        return False
    if proof.range_proofs:
        for brow, prow in zip(proof.bit_commitments, proof.bit_proofs):
            for B, p in zip(brow, prow):
                if not bit_check(B, p, c, ck.g, ck.h):
                    return False
    return True
