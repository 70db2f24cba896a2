from .commit import CommitmentKey, default_commitment_key, pedersen_commit
from .groups import (
    G1,
    G2,
    ORDER,
    Gt,
    Scalar,
    hash_to_g1,
    hash_to_scalar,
    multi_pairing,
    pairing,
)
from .rand import SeededRng, SystemRng, default_rng
from .transcript import Transcript, transcript_challenge

__all__ = [
    "CommitmentKey",
    "G1",
    "G2",
    "Gt",
    "ORDER",
    "Scalar",
    "SeededRng",
    "SystemRng",
    "Transcript",
    "default_commitment_key",
    "default_rng",
    "hash_to_g1",
    "hash_to_scalar",
    "multi_pairing",
    "pairing",
    "pedersen_commit",
    "transcript_challenge",
]
