"""Board state machine: rejections leave no trace, tokens are conserved, votes resolve."""

import copy

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _matrix import WORLD, build_world, matrix_cases, run_case, signed
from idchain.crypto.groups import G1, Scalar
from idchain.crypto.rand import SeededRng
from idchain.errors import InsufficientStake, TooFewMembers
from idchain.ledger import (
    RULES,
    TX_KINDS,
    BoardState,
    GenesisMember,
    Params,
    Transaction,
    advance_time,
    apply,
    canonical,
    genesis,
    query,
)
from idchain.sim.runner import Simulation


@pytest.fixture(scope="module")
def world():
    return build_world()


@pytest.fixture(scope="module")
def cases(world):
    return matrix_cases(world)


def test_matrix_covers_every_kind(cases):
    assert {c[0] for c in cases} == set(TX_KINDS)
    assert {c[3] for c in cases} <= set(RULES)


def test_rejections_name_rule_and_leave_state_untouched(world, cases):
    # checked in one loop so every mismatch is reported, not just the first
    bad = []
    for kind, label, tx, rule in cases:
        got, unchanged = run_case(world.state, tx)
        if got != rule or not unchanged:
            bad.append((label, got, unchanged))
    assert not bad


def test_rejected_tx_does_not_consume_nonce(world):
    tx = signed(world, "sc1", "TokenTransfer", {"to": "sc2", "amount": 0})
    state, ev = apply(world.state, tx)
    assert ev[0]["rule"] == "MalformedPayload"
    assert state.nonces.get("sc1", 0) == world.state.nonces.get("sc1", 0)


def test_generic_rejections(world):
    st_ = world.state
    good = signed(world, "sc1", "TokenTransfer", {"to": "sc2", "amount": 1})
    stale = Transaction(good.kind, good.sender, good.nonce + 1, good.payload).signed(world.sk("sc1"), SeededRng(1))
    assert run_case(st_, stale) == ("BadNonce", True)
    unknown = Transaction("MintTokens", "sc1", good.nonce, {}).signed(world.sk("sc1"), SeededRng(1))
    assert run_case(st_, unknown) == ("MalformedPayload", True)
    typed = signed(world, "sc1", "TokenTransfer", {"to": "sc2", "amount": "1"})
    assert run_case(st_, typed) == ("MalformedPayload", True)
    boolean = signed(world, "sc1", "TokenTransfer", {"to": "sc2", "amount": True})
    assert run_case(st_, boolean) == ("MalformedPayload", True)
    unsigned = Transaction("TokenTransfer", "sc1", good.nonce, {"to": "sc2", "amount": 1})
    assert run_case(st_, unsigned) == ("Unauthorized", True)
    nobody = Transaction("TokenTransfer", "ghost", 1, {"to": "sc2", "amount": 1}).signed(world.sk("ghost"), SeededRng(1))
    assert run_case(st_, nobody) == ("Unauthorized", True)


def test_apply_does_not_mutate_input(world):
    before = world.state.snapshot_hash()
    tx = signed(world, "sc1", "TokenTransfer", {"to": "sc2", "amount": 3})
    new, ev = apply(world.state, tx)
    assert ev[0]["kind"] == "applied"
    assert world.state.snapshot_hash() == before
    assert new.balance("sc2") == world.state.balance("sc2") + 3
    assert new.nonces["sc1"] == tx.nonce
    assert new.token_log[-1] == tx.digest()


def _founders(n, stake=1000, balance=100):
    return [GenesisMember(f"m{i}", (G1.generator() * (i + 1)).hex(), stake, balance) for i in range(n)]


def test_genesis_guards():
    p = Params()
    with pytest.raises(TooFewMembers):
        genesis(p, _founders(p.d), SeededRng(1))
    low = _founders(3)
    low[1] = GenesisMember("m1", low[1].pk, p.SC_STAKE - 1, 0)
    with pytest.raises(InsufficientStake):
        genesis(p, low, SeededRng(1))


def test_genesis_deals_working_shares():
    from idchain.threshold import combine_shares, encrypt_element, partial_decrypt

    state, shares = genesis(Params(), _founders(3), SeededRng(2), {"acc:x": ("00", 5)})
    assert state.conserved() and state.total_supply == 3 * 1100 + 5
    assert state.committee_members[1] == {"m0": 1, "m1": 2, "m2": 3}
    ks = state.committees[1]
    msg = G1.generator() * 4242
    ct = encrypt_element(ks.pk, msg, 99)
    parts = [partial_decrypt(shares[m], ct, SeededRng(4)) for m in ("m0", "m1", "m2")]
    assert combine_shares(ct, parts, ks) == msg


def _transfer_world():
    sim = Simulation({
        "name": "tokens", "seed": 5,
        "actors": {"sc": [{"id": f"sc{i}", "stake": 1000, "balance": 50} for i in range(1, 4)]},
        "steps": [{"op": "genesis"}],
    }).run()
    return sim


_tokens = _transfer_world()
_ids = ["sc1", "sc2", "sc3"]


@settings(max_examples=20)
@given(st.lists(st.tuples(st.sampled_from(_ids), st.sampled_from(_ids), st.integers(-5, 80)), max_size=8))
def test_random_transfers_conserve_supply(moves):
    state = _tokens.state
    nonces = dict(state.nonces)
    rng = SeededRng(9)
    for src, dst, amt in moves:
        n = state.nonces.get(src, 0) + 1
        tx = Transaction("TokenTransfer", src, n, {"to": dst, "amount": amt}).signed(_tokens.sk(src), rng)
        new, ev = apply(state, tx)
        if ev[0]["kind"] == "applied":
            assert amt > 0 and state.balance(src) >= amt
        else:
            assert new is state
        state = new
        assert state.conserved()
        assert all(b >= 0 for b in state.balances.values())
    assert sum(state.balances.values()) == sum(_tokens.state.balances.values())
    assert _tokens.state.nonces == nonces


def _governance(extra_steps, sc=4, params=None):
    scen = {
        "name": "gov", "seed": 8,
        "actors": {
            "sc": [{"id": f"sc{i}", "stake": 1000, "balance": 10} for i in range(1, sc + 1)]
            + [{"id": "cand", "stake": 1000, "balance": 1500, "founding": False}],
            "cas": [{"id": "ca1", "collateral": 500, "balance": 600}],
        },
        "steps": [{"op": "genesis"}] + extra_steps,
    }
    if params:
        scen["params"] = params
    return Simulation(scen).run()


def test_tie_rejects_at_deadline_and_refunds_stake():
    sim = _governance([
        {"op": "sc_join", "member": "cand"},
        {"op": "sc_vote", "subject": "cand", "voters": ["sc1", "sc2"], "vote": "yes"},
        {"op": "sc_vote", "subject": "cand", "voters": ["sc3"], "vote": "no"},
    ])
    state = sim.state
    mid = next(iter(state.sc.motions))
    assert state.sc.motions[mid]["status"] == "voting"
    assert state.balance("cand") == 1500 - 1000 - 10
    # sc4 never votes: 2 yes of 4 is a tie at the deadline
    state, events = advance_time(state, state.params.VOTE_WINDOW)
    closed = [e for e in events if e["kind"] == "motion_closed"]
    assert closed[0]["outcome"] == "rejected" and closed[0]["non_voters"] == ["sc4"]
    assert "cand" not in state.sc.members
    assert state.balance("cand") == 1500 - 10
    assert state.burned_total == state.params.JOIN_FEE_DEDUCTION
    assert state.conserved()


def test_majority_closes_early():
    sim = _governance([
        {"op": "sc_join", "member": "cand"},
        {"op": "sc_vote", "subject": "cand", "voters": ["sc1", "sc2", "sc3"], "vote": "yes"},
    ])
    m = next(iter(sim.state.sc.motions.values()))
    assert m["status"] == "passed" and m["closed"] == sim.state.day
    assert sim.state.sc.members["cand"]["status"] == "active"


def test_ca_penalty_burns_configured_fraction():
    sim = _governance([
        {"op": "ca_join", "ca": "ca1"},
        {"op": "ca_vote", "subject": "ca1", "voters": ["sc1", "sc2", "sc3"], "vote": "yes"},
        {"op": "ca_penalize", "member": "sc1", "ca": "ca1"},
        {"op": "ca_vote", "subject": "ca1", "voters": ["sc1", "sc2", "sc3"], "vote": "yes"},
    ], params={"penalty_bps": 2000})
    ca = sim.state.cas.cas["ca1"]
    assert ca["collateral"] == 400 and ca["penalties"] == 1
    assert sim.state.burned_total == 10 + 100
    p = sim.state.params
    assert sim.state.ca_score("ca1") == max(0, 400 // p.collateral_unit - p.penalty_weight)


def test_issuance_cap_blocks_zero_score_ca():
    sim = Simulation({
        "name": "cap", "seed": 4, "params": {"cap_factor": 0},
        "actors": {
            "sc": [{"id": f"sc{i}", "stake": 1000, "balance": 10} for i in range(1, 4)],
            "cas": [{"id": "ca1", "collateral": 500, "balance": 600}],
            "users": [{"id": "u", "docs": {"blob": "p:u", "country": "FR", "birth_year": 1980}}],
        },
        "faucet": 100,
        "steps": [
            {"op": "genesis"},
            {"op": "ca_join", "ca": "ca1"},
            {"op": "ca_vote", "subject": "ca1", "voters": ["sc1", "sc2"], "vote": "yes"},
            {"op": "register_user", "user": "u", "ca": "ca1"},
            {"op": "create_account", "user": "u", "as": "u1"},
            {"op": "add_asd", "account": "u1", "expect": {"reject": "IssuanceCapReached"}},
        ],
    }).run()
    assert sim.state.users.asds == {}


def test_advance_time_rejects_non_positive():
    st_ = _tokens.state
    for bad in (0, -3):
        with pytest.raises(ValueError):
            advance_time(st_, bad)


def test_advance_time_is_pure_and_flags_renewals(world):
    before = world.state.snapshot_hash()
    later, events = advance_time(world.state, world.state.params.CERT_VALIDITY + 1)
    assert world.state.snapshot_hash() == before
    due = [e for e in events if e["kind"] == "renewal_due"]
    assert due and due[0]["regids"] == [world.accounts["a1"]["asd"].regid]
    assert later.users.renewal_due == {world.accounts["a1"]["asd"].regid}
    # sc5 gave notice in the world, so its exit becomes finalizable inside the window
    assert any(e.get("member") == "sc5" for e in events if e["kind"] == "exit_finalizable")


def test_board_state_json_round_trip(world):
    obj = world.state.to_json()
    back = BoardState.from_json(copy.deepcopy(obj))
    assert back.to_json() == obj
    assert back.snapshot_hash() == world.state.snapshot_hash()


def test_params_validation():
    assert Params.from_json(Params().to_json()) == Params()
    assert Params(cap_factor=0).cap_factor == 0
    with pytest.raises(ValueError):
        Params(REG_FEE=-1)
    with pytest.raises(ValueError):
        Params(collateral_unit=0)
    with pytest.raises(ValueError):
        Params(penalty_bps=10_001)
    with pytest.raises(ValueError, match="unknown"):
        Params.from_json({"REG_FEEE": 3})


def test_transaction_canonical_form():
    tx = Transaction("TokenTransfer", "sc1", 1, {"to": "sc2", "amount": 5})
    assert canonical({"b": 1, "a": [1, 2]}) == b'{"a":[1,2],"b":1}'
    assert tx.signing_bytes() == b'idchain-tx|{"kind":"TokenTransfer","nonce":1,"payload":{"amount":5,"to":"sc2"},"sender":"sc1"}'
    sk = Scalar(77)
    s = tx.signed(sk, SeededRng(1))
    assert Transaction.from_json(s.to_json()) == s
    assert s.signature_valid(G1.generator() * 77)
    assert not s.signature_valid(G1.generator() * 78)
    assert not Transaction("TokenTransfer", "sc1", 1, {}, "zz").signature_valid(G1.generator())
    assert s.digest() != tx.digest()


def test_query_acl(world):
    st_ = world.state
    assert query(st_, "proposals", "alice") == {"board": "proposals", "redacted": True}
    assert query(st_, "proposals", world.accounts["a1"]["acc_id"])["redacted"] is True
    seen = query(st_, "proposals", "sc1")
    assert world.proposals["rp_ok"] in seen["proposals"]
    assert query(st_, "cas", "anyone")["cas"]["ca1"]["score"] == st_.ca_score("ca1")
    assert query(st_, "sc", "anyone")["burned_total"] == st_.burned_total
    with pytest.raises(ValueError):
        query(st_, "ledger", "sc1")


def test_world_is_what_the_matrix_assumes(world):
    st_ = world.state
    assert st_.cas.cas["ca2"]["status"] == "pending" and "ca3" not in st_.cas.cas
    assert st_.sc.members["sc5"]["status"] == "exiting"
    assert "mallory" not in st_.sc.members and st_.balance("mallory") == 0
    assert st_.balance(world.accounts["a2"]["acc_id"]) == 0
    props = st_.proposals.proposals
    assert props[world.proposals["rp_open"]]["status"] == "voting"
    assert props[world.proposals["rp_ok"]]["status"] == "approved"
    assert WORLD["steps"][0]["op"] == "genesis"
