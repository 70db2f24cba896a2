"""Randomness sources.

Every cryptographic routine takes an ``rng`` with ``randbelow``/``randbits``.
``SeededRng`` is deterministic and splittable so simulations reproduce
byte-for-byte; ``SystemRng`` is the default for library callers.
"""

from __future__ import annotations

import hashlib
import random
import secrets


class SystemRng:
    def randbelow(self, n: int) -> int:
        return secrets.randbelow(n)

    def randbits(self, k: int) -> int:
        return secrets.randbits(k)

    def child(self, label: str) -> SystemRng:
        return self


class SeededRng:
    """Deterministic stream keyed by (seed, path); ``child`` derives an independent stream."""

    def __init__(self, seed: int, path: str = ""):
        self.seed = int(seed)
        self.path = path
        material = hashlib.sha256(f"idchain-rng|{self.seed}|{path}".encode()).digest()
        self._r = random.Random(int.from_bytes(material, "big"))

    def randbelow(self, n: int) -> int:
        return self._r.randrange(n)

    def randbits(self, k: int) -> int:
        return self._r.getrandbits(k)

    def child(self, label: str) -> SeededRng:
        return SeededRng(self.seed, f"{self.path}/{label}")

    def __repr__(self) -> str:
        return f"SeededRng({self.seed}, {self.path!r})"


default_rng = SystemRng()
