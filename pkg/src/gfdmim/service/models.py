"""Pydantic request/response schemas for the sweep service."""
from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..simulate import BerRecord, SimConfig


class SweepRequest(BaseModel):
    """Mirror of SimConfig; deep validation happens when building the config."""
    scheme: Literal["gfdm-im", "gfdm", "ofdm-im"] = "gfdm-im"
    n_users: int = 2
    n_tx: int = 1
    n_rx: int = 2
    n_subsymbols: int = 5
    n_subcarriers: int = 32
    group_size: int = 4
    n_active: int = 2
    mod_order: int = 4
    alpha: float = 0.1
    n_taps: int = 10
    snr_db: list[float] = Field(default_factory=lambda: [0, 5, 10, 15, 20, 25, 30])
    min_errors: int = 200
    max_bits: int = 10_000_000
    seed: int = 0
    workers: int = 1

    def to_config(self) -> SimConfig:
        data = self.model_dump()
        data["snr_db"] = tuple(data["snr_db"])
        return SimConfig(**data)


class BerPoint(BaseModel):
    snr_db: float
    bits: int
    errors: int
    ber: float
    ci95: float
    trials: int

    @classmethod
    def from_record(cls, record: BerRecord) -> "BerPoint":
        return cls(snr_db=record.snr_db, bits=record.bits, errors=record.errors,
                   ber=record.ber, ci95=record.ci95, trials=record.trials)


class SweepResponse(BaseModel):
    request: SweepRequest
    records: list[BerPoint]


class JobInfo(BaseModel):
    job_id: str
    status: Literal["queued", "running", "done", "failed"]
    detail: Optional[str] = None
    records: Optional[list[BerPoint]] = None
