"""Randomizable Pointcheval-Sanders signatures with blind issuance.

Message layout is fixed: index 0 is IDcredSEC, 1 is K, 2.. are the
attribute list. The user hides 0 and 1 inside a commitment; the issuer adds
the attributes it extracted itself and signs without seeing the hidden part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .crypto.commit import CommitmentKey, default_commitment_key
from .crypto.groups import G1, G2, Scalar, pairing_product_is_one
from .crypto.sigma import LinearRelation, SigmaProof, prove, verify as sigma_verify
from .crypto.transcript import Transcript
from .errors import InvalidRequestProof, LengthMismatch

IDX_IDCRED = 0
IDX_K = 1
FIRST_ATTR = 2
# hidden messages whose per-message commitments are exported for linking
LINKED = (IDX_IDCRED, IDX_K)


@dataclass(frozen=True)
class IssuerPublicKey:
    X2: G2
    Y2: tuple[G2, ...]
    Y1: tuple[G1, ...]

    @property
    def m(self) -> int:
        return len(self.Y2)

    def encode(self) -> bytes:
        return self.X2.encode() + b"".join(y.encode() for y in self.Y2) + b"".join(y.encode() for y in self.Y1)

    def hex(self) -> str:
        return self.encode().hex()

    @classmethod
    def from_hex(cls, text: str) -> IssuerPublicKey:
        raw = bytes.fromhex(text)
        m, rem = divmod(len(raw) - 96, 96 + 48)
        if rem or m < 1:
            raise ValueError("malformed issuer key encoding")
        X2 = G2.decode(raw[:96])
        Y2 = tuple(G2.decode(raw[96 + 96 * j : 192 + 96 * j]) for j in range(m))
        off = 96 + 96 * m
        Y1 = tuple(G1.decode(raw[off + 48 * j : off + 48 * (j + 1)]) for j in range(m))
        return cls(X2, Y2, Y1)


@dataclass(frozen=True)
class IssuerKeyPair:
    x: Scalar
    y: tuple[Scalar, ...]
    pk: IssuerPublicKey

    @property
    def m(self) -> int:
        return len(self.y)


@dataclass(frozen=True)
class Signature:
    sigma1: G1
    sigma2: G1

    def encode(self) -> bytes:
        return self.sigma1.encode() + self.sigma2.encode()

    @classmethod
    def decode(cls, data: bytes) -> Signature:
        return cls(G1.decode(data[:48]), G1.decode(data[48:96]))


BlindedSignature = Signature


@dataclass(frozen=True)
class BlindSignRequest:
    commitment: G1
    message_commitments: dict[int, G1]
    public_images: dict[int, G1]
    proof: SigmaProof

    def segments(self) -> list[tuple[str, bytes]]:
        """Everything the issuer receives, as labelled byte strings."""
        out = [("commitment", self.commitment.encode())]
        out += [(f"com{j}", c.encode()) for j, c in sorted(self.message_commitments.items())]
        out += [(f"image{j}", c.encode()) for j, c in sorted(self.public_images.items())]
        out += [(f"T{i}", t.encode()) for i, t in enumerate(self.proof.commitments)]
        out.append(("challenge", self.proof.challenge.encode()))
        out += [(f"s_{v}", s.encode()) for v, s in sorted(self.proof.responses.items())]
        return out

    def encode(self) -> bytes:
        return b"".join(b for _, b in self.segments())


@dataclass
class BlindingState:
    hidden: dict[int, Scalar]
    t: Scalar
    openings: dict[int, Scalar]


@dataclass(frozen=True)
class SignaturePoK:
    sigma1: G1
    sigma2: G1
    link_commitments: dict[int, G1]
    proof: SigmaProof

    def segments(self) -> list[tuple[str, bytes]]:
        out = [("sigma1", self.sigma1.encode()), ("sigma2", self.sigma2.encode())]
        out += [(f"com{j}", c.encode()) for j, c in sorted(self.link_commitments.items())]
        out += [(f"T{i}", t.encode()) for i, t in enumerate(self.proof.commitments)]
        out.append(("challenge", self.proof.challenge.encode()))
        out += [(f"s_{v}", s.encode()) for v, s in sorted(self.proof.responses.items())]
        return out

    def encode(self) -> bytes:
        return b"".join(b for _, b in self.segments())


def issuer_keygen(attribute_count: int, rng) -> IssuerKeyPair:
    if attribute_count < 1:
        raise ValueError("attribute_count must be at least 1")
    m = attribute_count + FIRST_ATTR
    x = Scalar.random_nonzero(rng)
    y = tuple(Scalar.random_nonzero(rng) for _ in range(m))
    g1, g2 = G1.generator(), G2.generator()
    pk = IssuerPublicKey(g2 * x, tuple(g2 * yj for yj in y), tuple(g1 * yj for yj in y))
    return IssuerKeyPair(x, y, pk)


def sign(sk: IssuerKeyPair, messages: Sequence[Scalar], rng) -> Signature:
    """Direct (non-blind) signing, used for tests and key checks."""
    if len(messages) != sk.m:
        raise LengthMismatch(f"expected {sk.m} messages, got {len(messages)}")
    h = G1.generator() * Scalar.random_nonzero(rng)
    e = sk.x + sum((yj * mj for yj, mj in zip(sk.y, messages)), Scalar(0))
    return Signature(h, h * e)


def verify(pk: IssuerPublicKey, messages: Sequence[Scalar], sig: Signature) -> bool:
    if len(messages) != pk.m or sig.sigma1.is_identity():
        return False
    agg = pk.X2
    for yj, mj in zip(pk.Y2, messages):
        agg = agg + yj * mj
    return pairing_product_is_one([(sig.sigma1, agg), (-sig.sigma2, G2.generator())])


def randomize(sig: Signature, rng) -> Signature:
    r = Scalar.random_nonzero(rng)
    return Signature(sig.sigma1 * r, sig.sigma2 * r)


# -- blind issuance -------------------------------------------------------

def _request_relation(pk: IssuerPublicKey, req_commitment: G1, coms: Mapping[int, G1],
                      images: Mapping[int, G1], ck: CommitmentKey) -> LinearRelation:
    rel = LinearRelation()
    hidden = sorted(coms)
    rel.g1("commitment", req_commitment,
           [("t", G1.generator())] + [(f"m{j}", pk.Y1[j]) for j in hidden])
    for j in hidden:
        rel.g1(f"com{j}", coms[j], [(f"m{j}", ck.g), (f"r{j}", ck.h)])
    for j, image in sorted(images.items()):
        rel.g1(f"image{j}", image, [(f"m{j}", G1.generator())])
    return rel


def _request_transcript(pk: IssuerPublicKey) -> Transcript:
    t = Transcript("blind-request")
    t.append("pk", pk.encode())
    return t


def blind_request(pk: IssuerPublicKey, messages_hidden: Mapping[int, Scalar], rng,
                  public_images: Sequence[int] = (), ck: CommitmentKey | None = None,
                  ) -> tuple[BlindSignRequest, BlindingState]:
    """Commit to the hidden messages and prove knowledge of the opening.

    ``public_images`` lists hidden indices j for which m_j * g1 is also sent
    (IDcredPUB for j = 0); the proof ties that image to the committed m_j.
    """
    ck = ck or default_commitment_key()
    if not all(0 <= j < pk.m for j in messages_hidden):
        raise LengthMismatch("hidden message index outside the issuer key")
    if not set(LINKED) <= set(messages_hidden):
        raise LengthMismatch("IDcredSEC and K must both be hidden")
    t = Scalar.random_nonzero(rng)
    openings = {j: Scalar.random(rng) for j in messages_hidden}
    commitment = G1.generator() * t
    for j, mj in messages_hidden.items():
        commitment = commitment + pk.Y1[j] * mj
    coms = {j: ck.g * messages_hidden[j] + ck.h * openings[j] for j in sorted(messages_hidden)}
    images = {j: G1.generator() * messages_hidden[j] for j in public_images}
    rel = _request_relation(pk, commitment, coms, images, ck)
    witness = {"t": t}
    witness.update({f"m{j}": messages_hidden[j] for j in messages_hidden})
    witness.update({f"r{j}": openings[j] for j in messages_hidden})
    proof = prove(rel, witness, _request_transcript(pk), rng)
    request = BlindSignRequest(commitment, coms, images, proof)
    return request, BlindingState(dict(messages_hidden), t, openings)


def verify_request(pk: IssuerPublicKey, request: BlindSignRequest, ck: CommitmentKey | None = None) -> bool:
    ck = ck or default_commitment_key()
    if any(not (0 <= j < pk.m) for j in request.message_commitments):
        return False
    if not set(request.public_images) <= set(request.message_commitments):
        return False
    rel = _request_relation(pk, request.commitment, request.message_commitments, request.public_images, ck)
    return sigma_verify(rel, request.proof, _request_transcript(pk)) is None


def blind_sign(sk: IssuerKeyPair, request: BlindSignRequest, known: Mapping[int, Scalar], rng) -> BlindedSignature:
    hidden = set(request.message_commitments)
    if hidden & set(known) or hidden | set(known) != set(range(sk.m)):
        raise LengthMismatch("hidden and issuer-known indices must partition the message vector")
    if not verify_request(sk.pk, request):
        raise InvalidRequestProof("proof of opening does not verify")
    u = Scalar.random_nonzero(rng)
    s1 = G1.generator() * u
    base = G1.generator() * sk.x + request.commitment
    for j, mj in known.items():
        base = base + sk.pk.Y1[j] * mj
    return Signature(s1, base * u)


def unblind(blinded: BlindedSignature, state: BlindingState) -> Signature:
    return Signature(blinded.sigma1, blinded.sigma2 - blinded.sigma1 * state.t)


# -- proof of knowledge of a signature -------------------------------------

@dataclass
class PokParts:
    """A randomized signature plus the relation proving knowledge of it.

    Kept separate from proving so other clauses can be folded into the same
    challenge.
    """

    sigma1: G1
    sigma2: G1
    link_commitments: dict[int, G1]
    relation: LinearRelation
    witness: dict[str, Scalar] = field(default_factory=dict)


def pok_relation(pk: IssuerPublicKey, sigma1: G1, sigma2: G1, disclosed: Mapping[int, Scalar],
                 link_commitments: Mapping[int, G1], ck: CommitmentKey | None = None) -> LinearRelation:
    ck = ck or default_commitment_key()
    g2 = G2.generator()
    hidden = [j for j in range(pk.m) if j not in disclosed]
    lhs = [(sigma2, g2), (-sigma1, pk.X2)]
    lhs += [(sigma1 * -mj, pk.Y2[j]) for j, mj in sorted(disclosed.items())]
    terms = [(f"m{j}", sigma1, pk.Y2[j]) for j in hidden] + [("t", sigma1, g2)]
    rel = LinearRelation()
    rel.pairing("signature", lhs, terms)
    for j, com in sorted(link_commitments.items()):
        rel.g1(f"link{j}", com, [(f"m{j}", ck.g), (f"rl{j}", ck.h)])
    return rel


def pok_prepare(pk: IssuerPublicKey, sig: Signature, messages: Sequence[Scalar], hidden: Sequence[int],
                rng, ck: CommitmentKey | None = None) -> PokParts:
    ck = ck or default_commitment_key()
    if len(messages) != pk.m:
        raise LengthMismatch(f"expected {pk.m} messages, got {len(messages)}")
    r = Scalar.random_nonzero(rng)
    t = Scalar.random(rng)
    s1 = sig.sigma1 * r
    s2 = (sig.sigma2 + sig.sigma1 * t) * r
    disclosed = {j: messages[j] for j in range(pk.m) if j not in set(hidden)}
    link_open = {j: Scalar.random(rng) for j in LINKED if j in hidden}
    links = {j: ck.g * messages[j] + ck.h * link_open[j] for j in link_open}
    rel = pok_relation(pk, s1, s2, disclosed, links, ck)
    witness = {f"m{j}": messages[j] for j in hidden}
    witness["t"] = t
    witness.update({f"rl{j}": link_open[j] for j in link_open})
    return PokParts(s1, s2, links, rel, witness)


def pok_prove(pk: IssuerPublicKey, sig: Signature, messages: Sequence[Scalar], hidden: Sequence[int],
              transcript: Transcript, rng) -> SignaturePoK:
    parts = pok_prepare(pk, sig, messages, hidden, rng)
    transcript.append("pk", pk.encode())
    proof = prove(parts.relation, parts.witness, transcript, rng)
    return SignaturePoK(parts.sigma1, parts.sigma2, parts.link_commitments, proof)


def pok_verify(pk: IssuerPublicKey, pok: SignaturePoK, disclosed: Mapping[int, Scalar], transcript: Transcript) -> bool:
    if pok.sigma1.is_identity():
        return False
    if any(not (0 <= j < pk.m) for j in disclosed):
        return False
    rel = pok_relation(pk, pok.sigma1, pok.sigma2, disclosed, pok.link_commitments)
    transcript.append("pk", pk.encode())
    return sigma_verify(rel, pok.proof, transcript) is None
