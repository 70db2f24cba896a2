"""A board with one of everything, and the rejection matrix run against it.

Shared by the ledger tests and the acceptance suite.
"""

from idchain.crypto.groups import G1
from idchain.ledger import Transaction, apply
from idchain.sim.runner import Simulation

WORLD = {
    "name": "matrix",
    "seed": 77,
    "faucet": 500,
    "actors": {
        "sc": [{"id": f"sc{i}", "stake": 1000, "balance": 100} for i in range(1, 6)]
        + [
            {"id": "sc6", "stake": 1000, "balance": 2000, "founding": False},
            {"id": "mallory", "stake": 1000, "balance": 0, "founding": False},
        ],
        "cas": [
            {"id": "ca1", "collateral": 500, "balance": 600},
            {"id": "ca2", "collateral": 500, "balance": 600},
            {"id": "ca3", "collateral": 500, "balance": 600},
        ],
        "users": [{"id": "alice", "docs": {"blob": "p:alice", "country": "DE", "birth_year": 1990}}],
        "websites": [{"id": "web:shop", "balance": 60}, {"id": "web:poor", "balance": 10}],
    },
    "steps": [
        {"op": "genesis"},
        {"op": "ca_join", "ca": "ca1"},
        {"op": "ca_vote", "subject": "ca1", "voters": ["sc1", "sc2", "sc3"], "vote": "yes"},
        {"op": "ca_join", "ca": "ca2"},
        {"op": "ca_vote", "subject": "ca2", "voters": ["sc1"], "vote": "yes"},
        {"op": "register_user", "user": "alice", "ca": "ca1"},
        {"op": "create_account", "user": "alice", "as": "a1"},
        {"op": "add_asd", "account": "a1"},
        {"op": "fund", "to": "a1", "amount": 7},
        {"op": "create_account", "user": "alice", "as": "a2"},
        {"op": "transfer", "from": "a2", "to": "a1", "amount": 7},
        {"op": "rp_submit", "member": "sc1", "account": "a1", "as": "rp_open"},
        {"op": "rp_submit", "member": "sc2", "account": "a1", "as": "rp_ok"},
        {"op": "rp_vote", "proposal": "rp_ok", "voters": ["sc1", "sc2", "sc3"], "vote": "yes"},
        {"op": "sc_exit", "member": "sc5"},
    ],
}


def build_world():
    return Simulation(WORLD).run()


def _payloads(sim):
    st = sim.state
    a1, a2 = sim.accounts["a1"], sim.accounts["a2"]
    acc1, acc2 = a1["acc_id"], a2["acc_id"]
    rid1 = a1["asd"].regid
    ca2_motion = next(m for m, r in st.sc.motions.items() if r["subject"] == "ca2")
    rp_open, rp_ok = sim.proposals["rp_open"], sim.proposals["rp_ok"]
    ghost = G1.generator().hex()
    keyset = st.committees[1].to_json()
    next_keyset = dict(keyset, epoch=3)
    members = {m: i for i, m in enumerate(st.sc.seated(), start=1)}
    pk_ca3 = sim.directory.cas["ca3"].pk.hex()
    return {
        # kind: [(sender, payload, expected rule), ...] -- first entry is the authorization failure
        "ScJoinRequest": [
            (acc1, {"stake": 1000}, "Unauthorized"),
            ("sc6", {"stake": 10}, "InsufficientStake"),
            ("sc1", {"stake": 1000}, "AlreadyRegistered"),
        ],
        "ScVote": [
            ("mallory", {"motion": ca2_motion, "vote": "yes"}, "Unauthorized"),
            ("sc1", {"motion": "m-999", "vote": "yes"}, "UnknownEntity"),
            ("sc1", {"motion": ca2_motion, "vote": "yes"}, "UnknownEntity"),  # CA motions take CaVote
        ],
        "ScExitNotice": [
            ("mallory", {}, "Unauthorized"),
            ("sc5", {}, "WrongState"),
        ],
        "ScFinalizeExit": [
            ("mallory", {}, "Unauthorized"),
            ("sc5", {}, "NoticePeriodNotElapsed"),
            ("sc1", {}, "WrongState"),
        ],
        "ScExpel": [
            ("mallory", {"target": "sc2"}, "Unauthorized"),
            ("sc1", {"target": "sc1"}, "Unauthorized"),
            ("sc1", {"target": "mallory"}, "UnknownEntity"),
        ],
        "ScRekey": [
            ("mallory", {"keyset": keyset, "members": members}, "Unauthorized"),
            ("sc1", {"keyset": next_keyset, "members": members}, "WrongState"),
        ],
        "CaJoinRequest": [
            (acc1, {"pk_ca": pk_ca3, "collateral": 500, "scope": "*"}, "Unauthorized"),
            ("ca3", {"pk_ca": pk_ca3, "collateral": 100, "scope": "*"}, "InsufficientStake"),
            ("ca1", {"pk_ca": pk_ca3, "collateral": 500, "scope": "*"}, "AlreadyRegistered"),
        ],
        "CaVote": [
            ("mallory", {"motion": ca2_motion, "vote": "yes"}, "Unauthorized"),
            ("sc1", {"motion": ca2_motion, "vote": "yes"}, "AlreadyVoted"),
            ("sc2", {"motion": ca2_motion, "vote": "maybe"}, "MalformedPayload"),
        ],
        "CaExitNotice": [
            ("mallory", {}, "Unauthorized"),
            ("ca2", {}, "WrongState"),
        ],
        "CaFinalizeExit": [
            ("mallory", {}, "Unauthorized"),
            ("ca1", {}, "WrongState"),
        ],
        "CaPenalize": [
            ("mallory", {"ca": "ca1"}, "Unauthorized"),
            ("sc1", {"ca": "ca3"}, "UnknownEntity"),
        ],
        "UserAddAsd": [
            (acc1, {"asd": a2["asd"].to_json()}, "Unauthorized"),
            (acc2, {"asd": a2["asd"].to_json()}, "InsufficientBalance"),
            (acc1, {"asd": a1["asd"].to_json()}, "DuplicateRegId"),
        ],
        "UserDeactivateAsd": [
            (acc2, {"regid": rid1}, "Unauthorized"),
            (acc1, {"regid": ghost}, "UnknownEntity"),
        ],
        "BlockAccount": [
            ("mallory", {"pk_acc": a1["asd"].statement.pk_acc.hex(), "proposal": rp_ok}, "Unauthorized"),
            ("sc1", {"pk_acc": a1["asd"].statement.pk_acc.hex(), "proposal": rp_ok}, "VoteNotPassed"),
        ],
        "WebsiteComplaint": [
            ("mallory", {"regid": rid1}, "Unauthorized"),
            ("web:poor", {"regid": rid1}, "InsufficientBalance"),
            ("web:shop", {"regid": ghost}, "UnknownEntity"),
        ],
        "RpSubmit": [
            ("mallory", {"regid": rid1}, "Unauthorized"),
            ("sc1", {"regid": ghost}, "UnknownEntity"),
        ],
        "RpVote": [
            ("mallory", {"proposal": rp_open, "vote": "yes"}, "Unauthorized"),
            ("sc1", {"proposal": rp_ok, "vote": "yes"}, "VoteClosed"),
            ("sc1", {"proposal": "rp-999", "vote": "yes"}, "UnknownEntity"),
        ],
        "RpShare": [
            ("mallory", {"proposal": rp_ok, "phase": "eid", "shares": []}, "Unauthorized"),
            ("sc1", {"proposal": rp_open, "phase": "eid", "shares": []}, "VoteNotPassed"),
            ("sc1", {"proposal": rp_ok, "phase": "ereg", "shares": []}, "WrongState"),
        ],
        "RpExecute": [
            ("mallory", {"proposal": rp_ok}, "Unauthorized"),
            ("sc1", {"proposal": rp_open}, "VoteNotPassed"),
            ("sc1", {"proposal": rp_ok}, "NotEnoughShares"),
        ],
        "TokenTransfer": [
            ("mallory", {"to": "sc1", "amount": 5}, "InsufficientBalance"),
            ("sc1", {"to": "nobody", "amount": 5}, "UnknownEntity"),
            ("sc1", {"to": "sc2", "amount": 0}, "MalformedPayload"),
        ],
    }


def signed(sim, sender, kind, payload, signer=None):
    nonce = sim.state.nonces.get(sender, 0) + 1
    return Transaction(kind, sender, nonce, payload).signed(sim.sk(signer or sender), sim.rng("matrix"))


def matrix_cases(sim):
    """(kind, label, tx, expected rule); includes a forged-signature case for every kind."""
    cases = []
    for kind, rows in _payloads(sim).items():
        for i, (sender, payload, rule) in enumerate(rows):
            cases.append((kind, f"{kind}[{i}]:{rule}", signed(sim, sender, kind, payload), rule))
        sender, payload, _ = rows[-1]
        # right sender id, wrong key: the signature check is the authorization gate
        cases.append((kind, f"{kind}:forged", signed(sim, sender, kind, payload, signer="mallory"), "Unauthorized"))
    return cases


def run_case(state, tx):
    """Apply and report (rule, unchanged) where unchanged compares snapshot hashes."""
    before = state.snapshot_hash()
    new, events = apply(state, tx)
    rule = events[0].get("rule") if events[0]["kind"] == "rejected" else None
    return rule, new.snapshot_hash() == before and state.snapshot_hash() == before
