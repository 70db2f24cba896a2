"""Group arithmetic, commitments, transcripts and the sigma-protocol engine."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from idchain.crypto.commit import CommitmentKey, default_commitment_key, pedersen_commit
from idchain.crypto.groups import G1, G2, ORDER, Gt, Scalar, hash_to_g1, pairing
from idchain.crypto.rand import SeededRng
from idchain.crypto.sigma import (
    LinearRelation,
    bit_check,
    bit_commit,
    bit_respond,
    prove,
    schnorr_sign,
    schnorr_verify,
    verify,
)
from idchain.crypto.transcript import Transcript
from idchain.errors import NotInRange
from idchain.threshold import bsgs_decode

scalars = st.integers(min_value=0, max_value=ORDER - 1)
small = st.integers(min_value=1, max_value=2**64)

# BLS12-381 subgroup order, as published with the curve
BLS12_381_R = 52435875175126190479447740508185965837690552500527637822603658699938581184513


def test_order_matches_published_constant():
    assert ORDER == BLS12_381_R


def test_generators_have_prime_order():
    assert (G1.generator() * ORDER).is_identity()
    assert (G2.generator() * ORDER).is_identity()
    assert not (G1.generator() * (ORDER - 1)).is_identity()


@given(scalars, scalars)
def test_scalar_field_matches_integer_arithmetic(a, b):
    assert int(Scalar(a) + Scalar(b)) == (a + b) % ORDER
    assert int(Scalar(a) * Scalar(b)) == (a * b) % ORDER
    assert int(Scalar(a) - Scalar(b)) == (a - b) % ORDER
    if a:
        assert int(Scalar(a).inverse()) == pow(a, -1, ORDER)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        Scalar(0).inverse()


@given(scalars)
def test_scalar_encoding_round_trip(a):
    s = Scalar(a)
    assert Scalar.decode(s.encode()) == s
    assert Scalar.from_hex(s.hex()) == s


def test_unreduced_scalar_encoding_rejected():
    with pytest.raises(ValueError):
        Scalar.decode(ORDER.to_bytes(32, "big"))


@given(small, small)
def test_g1_is_a_module_over_scalars(a, b):
    g = G1.generator()
    assert g * a + g * b == g * (a + b)
    assert (g * a) * b == g * (a * b % ORDER)
    assert G1.decode((g * a).encode()) == g * a


@given(small)
def test_g2_encoding_round_trip(a):
    q = G2.generator() * a
    assert G2.from_hex(q.hex()) == q


def test_multiexp_matches_naive_sum():
    rng = SeededRng(1)
    pts = [G1.generator() * Scalar.random(rng) for _ in range(5)]
    ks = [Scalar.random(rng) for _ in range(5)]
    naive = G1.identity()
    for p, k in zip(pts, ks):
        naive = naive + p * k
    assert G1.multiexp(pts, ks) == naive


@given(st.integers(1, 2**32), st.integers(1, 2**32))
def test_pairing_is_bilinear(a, b):
    e = pairing(G1.generator(), G2.generator())
    assert pairing(G1.generator() * a, G2.generator() * b) == e ** (a * b)


def test_pairing_is_non_degenerate_and_gt_round_trips():
    e = pairing(G1.generator(), G2.generator())
    assert e != Gt.one()
    assert e ** ORDER == Gt.one()
    assert Gt.decode(e.encode()) == e
    assert e * e.inverse() == Gt.one()


def test_hash_to_g1_is_deterministic_and_in_subgroup():
    h1, h2 = hash_to_g1("tag-a"), hash_to_g1("tag-a")
    assert h1 == h2
    assert hash_to_g1("tag-b") != h1
    assert (h1 * ORDER).is_identity()
    assert not h1.is_identity()


def test_default_h_has_no_small_log():
    # a log below 2^16 would let anyone equivocate on commitments
    ck = default_commitment_key()
    with pytest.raises(NotInRange):
        bsgs_decode(ck.h, 16)


def test_commitment_key_rejects_degenerate_bases():
    g = G1.generator()
    with pytest.raises(ValueError):
        CommitmentKey(g, g)
    with pytest.raises(ValueError):
        CommitmentKey(g, G1.identity())


@given(scalars, scalars, scalars, scalars)
def test_pedersen_is_additively_homomorphic(m1, r1, m2, r2):
    ck = default_commitment_key()
    assert pedersen_commit(ck, m1, r1) + pedersen_commit(ck, m2, r2) == pedersen_commit(ck, m1 + m2, r1 + r2)


def test_pedersen_binding_reduces_to_discrete_log_in_toy_group():
    # Schnorr group: q | p-1, g generates the order-q subgroup of Z_p^*
    p, q = 2039, 1019
    g = 4
    assert pow(g, q, p) == 1 and g != 1
    for a in (3, 77, 500):
        h = pow(g, a, p)
        seen = {}
        collision = None
        for m in range(q):
            for r in range(3):
                c = pow(g, m, p) * pow(h, r, p) % p
                if c in seen and seen[c][0] != m:
                    collision = (seen[c], (m, r))
                    break
                seen.setdefault(c, (m, r))
            if collision:
                break
        assert collision is not None
        (m1, r1), (m2, r2) = collision
        # two openings of one commitment reveal log_g h
        recovered = (m1 - m2) * pow(r2 - r1, -1, q) % q
        assert recovered == a


def test_transcript_is_deterministic_and_domain_separated():
    def ch(label, *pairs):
        t = Transcript(label)
        for k, v in pairs:
            t.append(k, v)
        return t.challenge("c")

    assert ch("x", ("a", b"1")) == ch("x", ("a", b"1"))
    assert ch("x", ("a", b"1")) != ch("y", ("a", b"1"))
    # framing: moving a byte across the label/data boundary changes the challenge
    assert ch("x", ("ab", b"c")) != ch("x", ("a", b"bc"))
    t = Transcript("x")
    assert t.challenge("c") != t.challenge("c")


def test_seeded_rng_is_reproducible_and_children_independent():
    a, b = SeededRng(5), SeededRng(5)
    assert [a.randbits(64) for _ in range(4)] == [b.randbits(64) for _ in range(4)]
    c1, c2 = SeededRng(5).child("alice"), SeededRng(5).child("bob")
    assert c1.randbits(128) != c2.randbits(128)
    assert SeededRng(5).child("alice").randbits(128) == SeededRng(5).child("alice").randbits(128)


def _dleq_relation(x):
    g, h = G1.generator(), hash_to_g1("other-base")
    rel = LinearRelation()
    rel.g1("A", g * x, [("x", g)])
    rel.g1("B", h * x, [("x", h)])
    return rel


def test_sigma_proof_verifies_and_localizes_failures():
    rng = SeededRng(3)
    x = Scalar.random(rng)
    rel = _dleq_relation(x)
    proof = prove(rel, {"x": x}, Transcript("t"), rng)
    assert verify(_dleq_relation(x), proof, Transcript("t")) is None
    assert verify(_dleq_relation(x), proof, Transcript("other")) == "challenge"

    bad = LinearRelation()
    bad.g1("A", G1.generator() * x, [("x", G1.generator())])
    bad.g1("B", hash_to_g1("other-base") * (x + 1), [("x", hash_to_g1("other-base"))])
    assert verify(bad, proof, Transcript("t")) == "B"


def test_sigma_holds_reports_first_broken_equation():
    x = Scalar(9)
    rel = _dleq_relation(x)
    assert rel.holds({"x": x}) is None
    assert rel.holds({"x": Scalar(10)}) == "A"


@pytest.mark.parametrize("bit", [0, 1])
def test_bit_proof_accepts_bits(bit):
    ck = default_commitment_key()
    rng = SeededRng(bit)
    r = Scalar.random(rng)
    B = ck.g * bit + ck.h * r
    st_ = bit_commit(bit, r, B, ck.g, ck.h, rng)
    c = Scalar.random(rng)
    assert bit_check(B, bit_respond(st_, c), c, ck.g, ck.h)


@pytest.mark.parametrize("value", [2, 5, ORDER - 1])
def test_bit_proof_rejects_non_bits(value):
    ck = default_commitment_key()
    rng = SeededRng(value % 1000)
    r = Scalar.random(rng)
    B = ck.g * value + ck.h * r
    st_ = bit_commit(value, r, B, ck.g, ck.h, rng)
    c = Scalar.random(rng)
    assert not bit_check(B, bit_respond(st_, c), c, ck.g, ck.h)


def test_schnorr_signature():
    rng = SeededRng(4)
    sk = Scalar.random_nonzero(rng)
    pk = G1.generator() * sk
    sig = schnorr_sign(sk, b"hello", rng)
    assert schnorr_verify(pk, b"hello", sig)
    assert not schnorr_verify(pk, b"hellp", sig)
    assert not schnorr_verify(pk + G1.generator(), b"hello", sig)
    assert type(sig).decode(sig.encode()) == sig
