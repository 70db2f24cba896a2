"""Pure-Python arithmetic for the BLS12-381 target group.

The pairing backend hands out Gt values as opaque handles that can be
multiplied and printed but neither decoded nor exponentiated. This module
covers that gap with the same tower the backend serializes:

    Fp2  = Fp[u]  / (u^2 + 1)
    Fp6  = Fp2[v] / (v^3 - (u + 1))
    Fp12 = Fp6[w] / (w^2 - v)

Elements are flat 12-tuples of ints in serialization order
(c0.b0.a0, c0.b0.a1, c0.b1.a0, ..., c1.b2.a1).
"""

from __future__ import annotations

P = 0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB
FP_BYTES = 48
FQ12_BYTES = 12 * FP_BYTES

ONE = (1,) + (0,) * 11


# -- Fp2 -----------------------------------------------------------------

def _f2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def _f2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def _f2_mul(a, b):
    t0 = a[0] * b[0]
    t1 = a[1] * b[1]
    return ((t0 - t1) % P, ((a[0] + a[1]) * (b[0] + b[1]) - t0 - t1) % P)


def _f2_mul_xi(a):
    # (a0 + a1 u)(1 + u) = (a0 - a1) + (a0 + a1) u
    return ((a[0] - a[1]) % P, (a[0] + a[1]) % P)


# -- Fp6 -----------------------------------------------------------------

def _f6_add(a, b):
    return (_f2_add(a[0], b[0]), _f2_add(a[1], b[1]), _f2_add(a[2], b[2]))


def _f6_sub(a, b):
    return (_f2_sub(a[0], b[0]), _f2_sub(a[1], b[1]), _f2_sub(a[2], b[2]))


def _f6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = _f2_mul(a0, b0)
    t1 = _f2_mul(a1, b1)
    t2 = _f2_mul(a2, b2)
    c0 = _f2_add(t0, _f2_mul_xi(_f2_add(_f2_mul(a1, b2), _f2_mul(a2, b1))))
    c1 = _f2_add(_f2_add(_f2_mul(a0, b1), _f2_mul(a1, b0)), _f2_mul_xi(t2))
    c2 = _f2_add(_f2_add(_f2_mul(a0, b2), _f2_mul(a2, b0)), t1)
    return (c0, c1, c2)


def _f6_mul_v(a):
    return (_f2_mul_xi(a[2]), a[0], a[1])


# -- Fp12 ----------------------------------------------------------------

def _nest(flat):
    f2 = [(flat[i], flat[i + 1]) for i in range(0, 12, 2)]
    return ((f2[0], f2[1], f2[2]), (f2[3], f2[4], f2[5]))


def _flatten(x):
    return tuple(c for f6 in x for f2 in f6 for c in f2)


def mul(a: tuple, b: tuple) -> tuple:
    (a0, a1), (b0, b1) = _nest(a), _nest(b)
    t0 = _f6_mul(a0, b0)
    t1 = _f6_mul(a1, b1)
    c0 = _f6_add(t0, _f6_mul_v(t1))
    c1 = _f6_sub(_f6_sub(_f6_mul(_f6_add(a0, a1), _f6_add(b0, b1)), t0), t1)
    return _flatten((c0, c1))


def conjugate(a: tuple) -> tuple:
    """Frobenius^6; the inverse for elements of the cyclotomic subgroup (all of Gt)."""
    return a[:6] + tuple((-c) % P for c in a[6:])


def pow(a: tuple, e: int) -> tuple:  # noqa: A001 - mirrors builtin semantics
    if e < 0:
        a, e = conjugate(a), -e
    result = ONE
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        base = mul(base, base)
        e >>= 1
    return result


def encode(a: tuple) -> bytes:
    return b"".join(c.to_bytes(FP_BYTES, "big") for c in a)


def decode(data: bytes) -> tuple:
    if len(data) != FQ12_BYTES:
        raise ValueError(f"Gt encoding must be {FQ12_BYTES} bytes, got {len(data)}")
    coeffs = tuple(
        int.from_bytes(data[i : i + FP_BYTES], "big") for i in range(0, FQ12_BYTES, FP_BYTES)
    )
    if any(c >= P for c in coeffs):
        raise ValueError("Gt coefficient out of range")
    return coeffs


def from_backend_hex(text: str) -> tuple:
    """Parse the backend's printed form (little-endian coefficients, serialization order)."""
    raw = bytes.fromhex(text)
    return tuple(
        int.from_bytes(raw[i : i + FP_BYTES], "little") for i in range(0, FQ12_BYTES, FP_BYTES)
    )
