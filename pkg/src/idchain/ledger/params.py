"""Board parameters. Token amounts are integers; the penalty fraction is in basis points."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from ..protocol import CERT_VALIDITY, DEFAULT_MAX_ACC


@dataclass(frozen=True)
class Params:
    d: int = 2
    SC_STAKE: int = 1000
    CA_COLLATERAL: int = 500
    REG_FEE: int = 5
    REG_BURN: int = 2
    WEBSITE_MIN_BALANCE: int = 50
    JOIN_FEE_DEDUCTION: int = 10
    NOTICE_PERIOD: int = 180
    CERT_VALIDITY: int = CERT_VALIDITY
    MAX_ACC: int = DEFAULT_MAX_ACC
    VOTE_WINDOW: int = 14
    collateral_unit: int = 100
    penalty_weight: int = 5
    cap_factor: int = 10
    cap_window: int = 30
    penalty_bps: int = 2500

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"parameter {f.name} must be >= 0")
        if self.collateral_unit == 0 or self.cap_window == 0:
            raise ValueError("collateral_unit and cap_window must be positive")
        if self.penalty_bps > 10_000:
            raise ValueError("penalty_bps is at most 10000")

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> Params:
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown parameters {sorted(unknown)}")
        return cls(**obj)
