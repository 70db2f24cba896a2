"""Sigma protocols for linear relations, made non-interactive with a transcript.

A ``LinearRelation`` is a list of equations, each saying that a public
element equals a linear combination of public bases with secret exponents:

    G1 equation:      lhs  = sum_v  x_v * B_v
    pairing equation: prod_i e(L_i, M_i) = prod_v e(P_v, Q_v)^{x_v}

Variables are shared by name across equations; one challenge covers all of
them, which is what links clauses together. Proofs are kept in commitment
form (T per equation plus responses) so a failure can be traced to the
equation that broke.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groups import G1, G2, Gt, Scalar, multi_pairing
from .transcript import Transcript


@dataclass
class G1Equation:
    name: str
    lhs: G1
    terms: list[tuple[str, G1]]


@dataclass
class PairingEquation:
    name: str
    lhs: list[tuple[G1, G2]]
    terms: list[tuple[str, G1, G2]]


@dataclass
class LinearRelation:
    equations: list = field(default_factory=list)

    def g1(self, name: str, lhs: G1, terms: list[tuple[str, G1]]) -> None:
        self.equations.append(G1Equation(name, lhs, list(terms)))

    def pairing(self, name: str, lhs: list[tuple[G1, G2]], terms: list[tuple[str, G1, G2]]) -> None:
        self.equations.append(PairingEquation(name, list(lhs), list(terms)))

    @property
    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for eq in self.equations:
            for term in eq.terms:
                seen.setdefault(term[0], None)
        return list(seen)

    def absorb(self, t: Transcript) -> None:
        for eq in self.equations:
            t.append("eq", eq.name.encode())
            if isinstance(eq, G1Equation):
                t.append("lhs", eq.lhs.encode())
                for var, base in eq.terms:
                    t.append("term", var.encode() + base.encode())
            else:
                for a, b in eq.lhs:
                    t.append("lhs", a.encode() + b.encode())
                for var, a, b in eq.terms:
                    t.append("term", var.encode() + a.encode() + b.encode())

    def holds(self, witness: dict[str, Scalar]) -> str | None:
        """Name of the first equation the witness violates, or None."""
        for eq in self.equations:
            if isinstance(eq, G1Equation):
                rhs = G1.multiexp([b for _, b in eq.terms], [witness[v] for v, _ in eq.terms])
                if rhs != eq.lhs:
                    return eq.name
            else:
                left = multi_pairing(eq.lhs)
                right = multi_pairing((p * witness[v], q) for v, p, q in eq.terms)
                if left != right:
                    return eq.name
        return None


def commit(rel: LinearRelation, rng) -> tuple[dict[str, Scalar], list]:
    nonces = {v: Scalar.random(rng) for v in rel.variables}
    commitments = []
    for eq in rel.equations:
        if isinstance(eq, G1Equation):
            commitments.append(G1.multiexp([b for _, b in eq.terms], [nonces[v] for v, _ in eq.terms]))
        else:
            commitments.append(multi_pairing((p * nonces[v], q) for v, p, q in eq.terms))
    return nonces, commitments


def respond(witness: dict[str, Scalar], nonces: dict[str, Scalar], c: Scalar) -> dict[str, Scalar]:
    return {v: nonces[v] + c * witness[v] for v in nonces}


def check(rel: LinearRelation, commitments: list, c: Scalar, responses: dict[str, Scalar]) -> str | None:
    """Name of the first equation whose verification fails, or None."""
    if len(commitments) != len(rel.equations):
        return rel.equations[0].name if rel.equations else "arity"
    if set(responses) != set(rel.variables):
        return "responses"
    neg_c = -c
    for eq, t in zip(rel.equations, commitments):
        if isinstance(eq, G1Equation):
            bases = [b for _, b in eq.terms] + [eq.lhs]
            scalars = [responses[v] for v, _ in eq.terms] + [neg_c]
            if not isinstance(t, G1) or G1.multiexp(bases, scalars) != t:
                return eq.name
        else:
            pairs = [(p * responses[v], q) for v, p, q in eq.terms]
            pairs += [(a * neg_c, b) for a, b in eq.lhs]
            if not isinstance(t, Gt) or multi_pairing(pairs) != t:
                return eq.name
    return None


def absorb_commitments(t: Transcript, commitments: list) -> None:
    for c in commitments:
        t.append("T", c.encode())


@dataclass(frozen=True)
class SigmaProof:
    commitments: list
    challenge: Scalar
    responses: dict[str, Scalar]


def prove(rel: LinearRelation, witness: dict[str, Scalar], t: Transcript, rng) -> SigmaProof:
    rel.absorb(t)
    nonces, commitments = commit(rel, rng)
    absorb_commitments(t, commitments)
    c = t.challenge("c")
    return SigmaProof(commitments, c, respond(witness, nonces, c))


def verify(rel: LinearRelation, proof: SigmaProof, t: Transcript) -> str | None:
    """None when the proof verifies, otherwise the failing equation name or 'challenge'."""
    rel.absorb(t)
    try:
        absorb_commitments(t, proof.commitments)
    except AttributeError:
        return "commitments"
    failed = check(rel, proof.commitments, proof.challenge, proof.responses)
    if failed:
        return failed
    if t.challenge("c") != proof.challenge:
        return "challenge"
    return None


# -- OR-proof that a Pedersen commitment opens to 0 or 1 ------------------

@dataclass(frozen=True)
class BitProof:
    t0: G1
    t1: G1
    c0: Scalar
    s0: Scalar
    s1: Scalar


@dataclass
class _BitState:
    bit: int
    r: Scalar
    nonce: Scalar
    c_sim: Scalar
    s_sim: Scalar
    t0: G1
    t1: G1


def bit_commit(bit: int, r: Scalar, B: G1, g: G1, h: G1, rng) -> _BitState:
    """Prover's first move for B = bit*g + r*h with bit in {0, 1}.

    Any other ``bit`` still yields a transcript, it just will not verify.
    """
    nonce = Scalar.random(rng)
    c_sim = Scalar.random(rng)
    s_sim = Scalar.random(rng)
    real = bit if bit in (0, 1) else 0
    other = 1 - real
    t_real = h * nonce
    t_sim = h * s_sim - (B - g * other) * c_sim
    t0, t1 = (t_real, t_sim) if real == 0 else (t_sim, t_real)
    return _BitState(real, r, nonce, c_sim, s_sim, t0, t1)


def bit_respond(st: _BitState, c: Scalar) -> BitProof:
    c_real = c - st.c_sim
    s_real = st.nonce + c_real * st.r
    if st.bit == 0:
        return BitProof(st.t0, st.t1, c_real, s_real, st.s_sim)
    return BitProof(st.t0, st.t1, st.c_sim, st.s_sim, s_real)


def bit_check(B: G1, proof: BitProof, c: Scalar, g: G1, h: G1) -> bool:
    c1 = c - proof.c0
    ok0 = h * proof.s0 == proof.t0 + B * proof.c0
    ok1 = h * proof.s1 == proof.t1 + (B - g) * c1
    return ok0 and ok1


# -- Schnorr signatures for ledger transactions ---------------------------

@dataclass(frozen=True)
class SchnorrSignature:
    R: G1
    s: Scalar

    def encode(self) -> bytes:
        return self.R.encode() + self.s.encode()

    @classmethod
    def decode(cls, data: bytes) -> SchnorrSignature:
        return cls(G1.decode(data[:48]), Scalar.decode(data[48:]))


def _sig_challenge(R: G1, pk: G1, message: bytes) -> Scalar:
    t = Transcript("idchain-schnorr")
    t.append("R", R.encode())
    t.append("pk", pk.encode())
    t.append("m", message)
    return t.challenge("c")


def schnorr_sign(sk: Scalar, message: bytes, rng) -> SchnorrSignature:
    k = Scalar.random_nonzero(rng)
    R = G1.generator() * k
    pk = G1.generator() * sk
    return SchnorrSignature(R, k + _sig_challenge(R, pk, message) * sk)


def schnorr_verify(pk: G1, message: bytes, sig: SchnorrSignature) -> bool:
    c = _sig_challenge(sig.R, pk, message)
    return G1.generator() * sig.s == sig.R + pk * c
