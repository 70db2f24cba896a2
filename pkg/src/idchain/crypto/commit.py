from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .groups import G1, Scalar, hash_to_g1


@dataclass(frozen=True)
class CommitmentKey:
    g: G1
    h: G1

    def __post_init__(self):
        if self.g.is_identity() or self.h.is_identity() or self.g == self.h:
            raise ValueError("commitment bases must be distinct non-identity elements")


@lru_cache(maxsize=None)
def default_commitment_key() -> CommitmentKey:
    return CommitmentKey(G1.generator(), hash_to_g1("idchain-h"))


def pedersen_commit(key: CommitmentKey, m: Scalar | int, r: Scalar | int) -> G1:
    return key.g * m + key.h * r
