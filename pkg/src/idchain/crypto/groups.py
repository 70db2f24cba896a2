"""BLS12-381 group elements and scalars.

Curve arithmetic comes from ``py_arkworks_bls12381``; this module gives it
value semantics (hashing, equality, fixed-length big-endian encodings) and
fills in what the backend lacks: hashing to G1 and a decodable Gt.

Groups are written additively (``a * P + b * Q``) for G1 and G2 and
multiplicatively for Gt.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Sequence

import py_arkworks_bls12381 as _bls

from . import fq12

# prime order of G1, G2, Gt
ORDER = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001
SCALAR_BYTES = 32
G1_BYTES = 48
G2_BYTES = 96
GT_BYTES = fq12.FQ12_BYTES

_G1_COFACTOR = 0x396C8C005555E1568C00AAAB0000AAAB


def _backend_scalar(k: int) -> _bls.Scalar:
    return _bls.Scalar.from_le_bytes((k % ORDER).to_bytes(SCALAR_BYTES, "little"))


class Scalar:
    """Integer modulo the group order."""

    __slots__ = ("value",)

    def __init__(self, value: int = 0):
        self.value = int(value) % ORDER

    @classmethod
    def random(cls, rng) -> Scalar:
        return cls(rng.randbelow(ORDER))

    @classmethod
    def random_nonzero(cls, rng) -> Scalar:
        return cls(1 + rng.randbelow(ORDER - 1))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __add__(self, other) -> Scalar:
        return Scalar(self.value + int(other))

    __radd__ = __add__

    def __sub__(self, other) -> Scalar:
        return Scalar(self.value - int(other))

    def __rsub__(self, other) -> Scalar:
        return Scalar(int(other) - self.value)

    def __mul__(self, other):
        if isinstance(other, (G1, G2)):
            return other * self
        return Scalar(self.value * int(other))

    __rmul__ = __mul__

    def __neg__(self) -> Scalar:
        return Scalar(-self.value)

    def inverse(self) -> Scalar:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse modulo the group order")
        return Scalar(pow(self.value, -1, ORDER))

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other % ORDER
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Scalar", self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"Scalar(0x{self.value:x})"

    def __deepcopy__(self, memo):
        return self

    def encode(self) -> bytes:
        return self.value.to_bytes(SCALAR_BYTES, "big")

    @classmethod
    def decode(cls, data: bytes) -> Scalar:
        if len(data) != SCALAR_BYTES:
            raise ValueError(f"scalar encoding must be {SCALAR_BYTES} bytes")
        v = int.from_bytes(data, "big")
        if v >= ORDER:
            raise ValueError("scalar encoding is not reduced")
        return cls(v)

    def hex(self) -> str:
        return self.encode().hex()

    @classmethod
    def from_hex(cls, text: str) -> Scalar:
        return cls.decode(bytes.fromhex(text))


class _Point:
    __slots__ = ("_p", "_enc")
    _backend: type
    _size: int

    def __init__(self, backend_point):
        self._p = backend_point
        self._enc = None

    @classmethod
    def generator(cls):
        return cls(cls._backend())

    @classmethod
    def identity(cls):
        return cls(cls._backend.identity())

    def is_identity(self) -> bool:
        return self._p == self._backend.identity()

    def __add__(self, other):
        return type(self)(self._p + other._p)

    def __sub__(self, other):
        return type(self)(self._p - other._p)

    def __neg__(self):
        return type(self)(-self._p)

    def __mul__(self, k):
        return type(self)(self._p * _backend_scalar(int(k)))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._p == other._p

    def __hash__(self) -> int:
        return hash(self.encode())

    def __deepcopy__(self, memo):
        return self

    def encode(self) -> bytes:
        if self._enc is None:
            self._enc = bytes(self._p.to_compressed_bytes())
        return self._enc

    @classmethod
    def decode(cls, data: bytes):
        if len(data) != cls._size:
            raise ValueError(f"{cls.__name__} encoding must be {cls._size} bytes")
        try:
            return cls(cls._backend.from_compressed_bytes(list(data)))
        except Exception as exc:  # backend raises a bare Exception on bad points
            raise ValueError(f"invalid {cls.__name__} encoding") from exc

    def hex(self) -> str:
        return self.encode().hex()

    @classmethod
    def from_hex(cls, text: str):
        return cls.decode(bytes.fromhex(text))

    @classmethod
    def multiexp(cls, points: Sequence, scalars: Sequence):
        acc = cls._backend.identity()
        for p, k in zip(points, scalars, strict=True):
            acc = acc + p._p * _backend_scalar(int(k))
        return cls(acc)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.hex()[:16]}…)"


class G1(_Point):
    __slots__ = ()
    _backend = _bls.G1Point
    _size = G1_BYTES


class G2(_Point):
    __slots__ = ()
    _backend = _bls.G2Point
    _size = G2_BYTES


class Gt:
    """Target group element, held as an Fp12 coefficient tuple."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: tuple):
        self.coeffs = coeffs

    @classmethod
    def one(cls) -> Gt:
        return cls(fq12.ONE)

    @classmethod
    def _from_backend(cls, value) -> Gt:
        return cls(fq12.from_backend_hex(str(value)))

    def __mul__(self, other: Gt) -> Gt:
        return Gt(fq12.mul(self.coeffs, other.coeffs))

    def __pow__(self, e) -> Gt:
        return Gt(fq12.pow(self.coeffs, int(e) % ORDER))

    def inverse(self) -> Gt:
        return Gt(fq12.conjugate(self.coeffs))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gt):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __deepcopy__(self, memo):
        return self

    def encode(self) -> bytes:
        return fq12.encode(self.coeffs)

    @classmethod
    def decode(cls, data: bytes) -> Gt:
        return cls(fq12.decode(data))

    def hex(self) -> str:
        return self.encode().hex()

    @classmethod
    def from_hex(cls, text: str) -> Gt:
        return cls.decode(bytes.fromhex(text))

    def __repr__(self) -> str:
        return f"Gt({self.hex()[:16]}…)"


def pairing(p: G1, q: G2) -> Gt:
    return Gt._from_backend(_bls.GT.pairing(p._p, q._p))


def multi_pairing(pairs: Iterable[tuple[G1, G2]]) -> Gt:
    pairs = list(pairs)
    if not pairs:
        return Gt.one()
    return Gt._from_backend(_bls.GT.multi_pairing([p._p for p, _ in pairs], [q._p for _, q in pairs]))


def pairing_product_is_one(pairs: Iterable[tuple[G1, G2]]) -> bool:
    """Check prod e(P_i, Q_i) == 1 without leaving the backend."""
    pairs = list(pairs)
    return _bls.GT.multi_pairing([p._p for p, _ in pairs], [q._p for _, q in pairs]) == _bls.GT.one()


def hash_to_scalar(*parts: bytes) -> Scalar:
    h = hashlib.sha512()
    for part in parts:
        h.update(len(part).to_bytes(8, "big"))
        h.update(part)
    return Scalar(int.from_bytes(h.digest(), "big"))


def hash_to_g1(tag: bytes | str) -> G1:
    """Try-and-increment onto E(Fp), then clear the cofactor.

    Nobody learns the discrete log of the output relative to the generator.
    """
    if isinstance(tag, str):
        tag = tag.encode()
    counter = 0
    while True:
        digest = hashlib.sha512(b"idchain/h2g1" + tag + counter.to_bytes(4, "big")).digest()
        counter += 1
        x = int.from_bytes(digest, "big") % fq12.P
        raw = bytearray(x.to_bytes(G1_BYTES, "big"))
        raw[0] |= 0x80 | (0x20 if digest[0] & 1 else 0)
        try:
            point = _bls.G1Point.from_compressed_bytes_unchecked(list(raw))
        except Exception:
            continue
        cleared = G1(point * _backend_scalar(_G1_COFACTOR))
        if not cleared.is_identity():
            # round-trip through the checked decoder as a subgroup assertion
            return G1.decode(cleared.encode())


def g1() -> G1:
    return G1.generator()


def g2() -> G2:
    return G2.generator()
