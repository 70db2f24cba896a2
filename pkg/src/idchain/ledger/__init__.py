"""Governance boards and token ledger as a deterministic state machine."""

from .machine import BOARDS, RULES, GenesisMember, advance_time, apply, genesis, query
from .params import Params
from .state import BoardState
from .tx import TX_KINDS, Transaction, account_id, canonical, transfer_ack_message

__all__ = [
    "BOARDS", "RULES", "TX_KINDS", "BoardState", "GenesisMember", "Params", "Transaction",
    "account_id", "advance_time", "apply", "canonical", "genesis", "query", "transfer_ack_message",
]
