"""Fiat-Shamir transcript with explicit domain separation."""

from __future__ import annotations

import hashlib

from .groups import Scalar


class Transcript:
    def __init__(self, label: bytes | str):
        if isinstance(label, str):
            label = label.encode()
        self._state = hashlib.sha256(b"idchain-transcript-v1" + _frame(label)).digest()

    def append(self, label: bytes | str, data: bytes) -> None:
        if isinstance(label, str):
            label = label.encode()
        self._state = hashlib.sha256(self._state + b"A" + _frame(label) + _frame(data)).digest()

    def append_int(self, label: bytes | str, value: int) -> None:
        self.append(label, value.to_bytes(8, "big", signed=True))

    def append_element(self, label: bytes | str, element) -> None:
        self.append(label, element.encode())

    def challenge(self, label: bytes | str) -> Scalar:
        """Squeeze a scalar; the state advances so the next challenge differs."""
        if isinstance(label, str):
            label = label.encode()
        out = hashlib.sha512(self._state + b"C" + _frame(label)).digest()
        self._state = hashlib.sha256(self._state + b"R" + out).digest()
        return Scalar(int.from_bytes(out, "big"))

    def copy(self) -> Transcript:
        t = Transcript.__new__(Transcript)
        t._state = self._state
        return t


def _frame(data: bytes) -> bytes:
    return len(data).to_bytes(4, "big") + data


def transcript_challenge(t: Transcript, label: bytes | str) -> Scalar:
    return t.challenge(label)
