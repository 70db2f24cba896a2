"""Exponent-inverse PRF producing account registration IDs.

RegID = g1^(1/(K+x)); the inverse form keeps "RegID = PRF_K(x)" provable as
the linear statement (K+x)*RegID = g1.
"""

from __future__ import annotations

from .crypto.groups import G1, ORDER, Scalar
from .errors import DegenerateKey

DEFAULT_KEY_BITS = 128


def sample_key(rng, bits: int = DEFAULT_KEY_BITS) -> Scalar:
    while True:
        k = rng.randbits(bits)
        if k:
            return Scalar(k)


def prf_eval(key: Scalar | int, x: int) -> G1:
    total = (int(key) + int(x)) % ORDER
    if total == 0:
        raise DegenerateKey("K + x is zero modulo the group order")
    return G1.generator() * pow(total, -1, ORDER)


def check_index(x: int, max_acc: int) -> bool:
    return 1 <= x <= max_acc
