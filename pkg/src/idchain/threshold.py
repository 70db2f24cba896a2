"""Threshold ElGamal over G1 for the revealing committee.

Key material is dealt once per committee epoch with Shamir sharing and
Feldman verification values. Scalars are encrypted "in the exponent" in
16-bit chunks so that decryption ends with a small discrete log solved by
baby-step giant-step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .crypto.groups import G1, ORDER, Scalar
from .crypto.sigma import LinearRelation, SigmaProof, prove, verify
from .crypto.transcript import Transcript
from .errors import (
    InvalidShareProof,
    InvalidThreshold,
    NotEnoughShares,
    NotInRange,
    ScalarTooLarge,
    ZeroRandomness,
)

CHUNK_BITS = 16
CHUNK_COUNT = 8


@dataclass(frozen=True)
class CommitteeKeySet:
    n: int
    d: int
    pk: G1
    member_public_shares: tuple[tuple[int, G1], ...]
    epoch: int = 1

    def verification_value(self, index: int) -> G1:
        for i, v in self.member_public_shares:
            if i == index:
                return v
        raise KeyError(index)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "pk": self.pk.hex(),
            "shares": [[i, v.hex()] for i, v in self.member_public_shares],
            "epoch": self.epoch,
        }

    @classmethod
    def from_json(cls, obj: dict) -> CommitteeKeySet:
        return cls(
            n=obj["n"],
            d=obj["d"],
            pk=G1.from_hex(obj["pk"]),
            member_public_shares=tuple((i, G1.from_hex(v)) for i, v in obj["shares"]),
            epoch=obj["epoch"],
        )


@dataclass(frozen=True)
class KeyShare:
    index: int
    s: Scalar
    epoch: int = 1


@dataclass(frozen=True)
class ElGamalCiphertext:
    c1: G1
    c2: G1

    def encode(self) -> bytes:
        return self.c1.encode() + self.c2.encode()

    @classmethod
    def decode(cls, data: bytes) -> ElGamalCiphertext:
        if len(data) != 96:
            raise ValueError("ciphertext encoding must be 96 bytes")
        return cls(G1.decode(data[:48]), G1.decode(data[48:]))

    def hex(self) -> str:
        return self.encode().hex()

    @classmethod
    def from_hex(cls, text: str) -> ElGamalCiphertext:
        return cls.decode(bytes.fromhex(text))


@dataclass(frozen=True)
class ChunkedCiphertext:
    chunks: tuple[ElGamalCiphertext, ...]
    chunk_bits: int = CHUNK_BITS

    @property
    def chunk_count(self) -> int:
        return len(self.chunks)

    def encode(self) -> bytes:
        return b"".join(c.encode() for c in self.chunks)

    def to_json(self) -> dict:
        return {"chunk_bits": self.chunk_bits, "chunks": [c.hex() for c in self.chunks]}

    @classmethod
    def from_json(cls, obj: dict) -> ChunkedCiphertext:
        return cls(tuple(ElGamalCiphertext.from_hex(c) for c in obj["chunks"]), obj["chunk_bits"])


@dataclass(frozen=True)
class DecryptionShare:
    index: int
    value: G1
    proof: SigmaProof

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "value": self.value.hex(),
            "proof": {
                "commitments": [t.hex() for t in self.proof.commitments],
                "challenge": self.proof.challenge.hex(),
                "response": self.proof.responses["s"].hex(),
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> DecryptionShare:
        p = obj["proof"]
        proof = SigmaProof(
            [G1.from_hex(t) for t in p["commitments"]],
            Scalar.from_hex(p["challenge"]),
            {"s": Scalar.from_hex(p["response"])},
        )
        return cls(obj["index"], G1.from_hex(obj["value"]), proof)


# -- key generation -------------------------------------------------------

def _eval_poly(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % ORDER
    return acc


def committee_keygen(n: int, d: int, rng, epoch: int = 1) -> tuple[CommitteeKeySet, list[KeyShare]]:
    if n < 1 or d < 0 or d + 1 > n:
        raise InvalidThreshold(f"need 1 <= d+1 <= n, got n={n}, d={d}")
    coeffs = [rng.randbelow(ORDER) for _ in range(d + 1)]
    g = G1.generator()
    shares = [KeyShare(i, Scalar(_eval_poly(coeffs, i)), epoch) for i in range(1, n + 1)]
    keyset = CommitteeKeySet(
        n=n,
        d=d,
        pk=g * coeffs[0],
        member_public_shares=tuple((s.index, g * s.s) for s in shares),
        epoch=epoch,
    )
    return keyset, shares


def share_is_valid(keyset: CommitteeKeySet, share: KeyShare) -> bool:
    return G1.generator() * share.s == keyset.verification_value(share.index)


def lagrange_at_zero(indices: Sequence[int]) -> dict[int, Scalar]:
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate share indices")
    lambdas = {}
    for i in indices:
        num, den = 1, 1
        for j in indices:
            if j != i:
                num = num * j % ORDER
                den = den * (j - i) % ORDER
        lambdas[i] = Scalar(num * pow(den, -1, ORDER))
    return lambdas


# -- encryption -----------------------------------------------------------

def encrypt_element(pk: G1, message: G1, rho: Scalar | int) -> ElGamalCiphertext:
    if int(rho) % ORDER == 0:
        raise ZeroRandomness("ElGamal randomness must be nonzero")
    g = G1.generator()
    return ElGamalCiphertext(g * rho, pk * rho + message)


def split_chunks(value: int, chunk_bits: int = CHUNK_BITS, chunk_count: int = CHUNK_COUNT) -> list[int]:
    if value < 0 or value.bit_length() > chunk_bits * chunk_count:
        raise ScalarTooLarge(f"value needs {value.bit_length()} bits, capacity is {chunk_bits * chunk_count}")
    mask = (1 << chunk_bits) - 1
    return [(value >> (j * chunk_bits)) & mask for j in range(chunk_count)]


def recompose(chunks: Sequence[int], chunk_bits: int = CHUNK_BITS) -> int:
    return sum(k << (j * chunk_bits) for j, k in enumerate(chunks))


def encrypt_chunks(pk: G1, chunk_values: Sequence[int], rhos: Sequence[Scalar], chunk_bits: int = CHUNK_BITS) -> ChunkedCiphertext:
    """Encrypt explicit chunk values; no range check, so callers can build adversarial inputs."""
    g = G1.generator()
    return ChunkedCiphertext(
        tuple(encrypt_element(pk, g * k, rho) for k, rho in zip(chunk_values, rhos, strict=True)),
        chunk_bits,
    )


def encrypt_scalar_chunked(
    pk: G1,
    value: Scalar | int,
    rng,
    chunk_bits: int = CHUNK_BITS,
    chunk_count: int = CHUNK_COUNT,
) -> tuple[ChunkedCiphertext, list[Scalar]]:
    """Returns the ciphertext and the per-chunk randomness (needed for proofs)."""
    chunks = split_chunks(int(value), chunk_bits, chunk_count)
    rhos = [Scalar.random_nonzero(rng) for _ in chunks]
    return encrypt_chunks(pk, chunks, rhos, chunk_bits), rhos


# -- decryption -----------------------------------------------------------

def _share_relation(verification_value: G1, c1: G1, value: G1) -> LinearRelation:
    rel = LinearRelation()
    rel.g1("key", verification_value, [("s", G1.generator())])
    rel.g1("share", value, [("s", c1)])
    return rel


def _share_transcript(index: int, ct: ElGamalCiphertext) -> Transcript:
    t = Transcript("cp-share")
    t.append_int("index", index)
    t.append("ct", ct.encode())
    return t


def partial_decrypt(share: KeyShare, ct: ElGamalCiphertext, rng) -> DecryptionShare:
    value = ct.c1 * share.s
    rel = _share_relation(G1.generator() * share.s, ct.c1, value)
    proof = prove(rel, {"s": share.s}, _share_transcript(share.index, ct), rng)
    return DecryptionShare(share.index, value, proof)


def verify_share(keyset: CommitteeKeySet, ct: ElGamalCiphertext, dshare: DecryptionShare) -> bool:
    try:
        vv = keyset.verification_value(dshare.index)
    except KeyError:
        return False
    rel = _share_relation(vv, ct.c1, dshare.value)
    return verify(rel, dshare.proof, _share_transcript(dshare.index, ct)) is None


def combine_shares(ct: ElGamalCiphertext, shares: Sequence[DecryptionShare], keyset: CommitteeKeySet) -> G1:
    by_index = {}
    for s in shares:
        by_index.setdefault(s.index, s)
    if len(by_index) < keyset.d + 1:
        raise NotEnoughShares(f"have {len(by_index)} distinct shares, need {keyset.d + 1}")
    for s in by_index.values():
        if not verify_share(keyset, ct, s):
            raise InvalidShareProof(s.index)
    lambdas = lagrange_at_zero(sorted(by_index))
    blind = G1.multiexp([by_index[i].value for i in lambdas], list(lambdas.values()))
    return ct.c2 - blind


def decrypt_with_secret(secret: Scalar | int, ct: ElGamalCiphertext) -> G1:
    return ct.c2 - ct.c1 * secret


# -- small discrete logs --------------------------------------------------

@lru_cache(maxsize=8)
def _baby_steps(bits: int) -> tuple[dict[bytes, int], int]:
    m = 1 << math.ceil(bits / 2)
    g = G1.generator()
    table = {}
    acc = G1.identity()
    for j in range(m):
        table[acc.encode()] = j
        acc = acc + g
    return table, m


def bsgs_decode(element: G1, bits: int = CHUNK_BITS) -> int:
    """Find k in [0, 2^bits) with k*g1 == element."""
    table, m = _baby_steps(bits)
    giant = -(G1.generator() * m)
    gamma = element
    for i in range(-(-(1 << bits) // m)):
        j = table.get(gamma.encode())
        if j is not None:
            k = i * m + j
            if k < (1 << bits):
                return k
            break
        gamma = gamma + giant
    raise NotInRange(f"discrete log not in [0, 2^{bits})")


def decrypt_chunked(ct: ChunkedCiphertext, shares_per_chunk: Sequence[Sequence[DecryptionShare]], keyset: CommitteeKeySet) -> int:
    values = [
        bsgs_decode(combine_shares(c, s, keyset), ct.chunk_bits)
        for c, s in zip(ct.chunks, shares_per_chunk, strict=True)
    ]
    return recompose(values, ct.chunk_bits)


def threshold_decrypt_chunked(ct: ChunkedCiphertext, key_shares: Sequence[KeyShare], keyset: CommitteeKeySet, rng) -> int:
    """Convenience path used when the share holders are all local."""
    per_chunk = [[partial_decrypt(k, c, rng) for k in key_shares] for c in ct.chunks]
    return decrypt_chunked(ct, per_chunk, keyset)
