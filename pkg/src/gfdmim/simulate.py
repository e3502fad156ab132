"""Monte Carlo BER experiment engine: configs, trials, SNR sweeps, CSV output."""
import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from threadpoolctl import threadpool_limits

from .channel import ChannelRealization, apply_channel, draw_channel
from .imcodec import (Constellation, LookupTable, build_lookup_table, encode_frame,
                      int_to_bits, make_constellation, qam_modulate)
from .modem import build_ofdm_matrix, build_transmitter_matrix, interleave, rrc_prototype
from .numerics import substream
from .receiver import (build_effective_matrix, decode_frame, decode_frame_dense,
                       mmse_equalize, split_streams)

SCHEMES = ("gfdm-im", "gfdm", "ofdm-im")

# per-trial substream purposes
_BITS, _CHANNEL, _NOISE = 0, 1, 2


def snr_to_noise_power(snr_db: float) -> float:
    """Noise power for unit-energy active symbols: sigma^2 = 10^(-snr_db/10)."""
    return 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class SimConfig:
    """All simulation dimensions plus the sweep stopping rule and seeding."""
    scheme: str = "gfdm-im"
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
    snr_db: tuple = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    min_errors: int = 200
    max_bits: int = 10_000_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        for name in ("n_users", "n_tx", "n_rx", "n_subsymbols", "n_taps", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.n_subcarriers < 2:
            raise ValueError("n_subcarriers must be >= 2")
        if self.n_rx < self.n_users * self.n_tx:
            raise ValueError(f"need n_rx >= n_users * n_tx, got "
                             f"{self.n_rx} < {self.n_users * self.n_tx}")
        if self.n_subcarriers % self.group_size != 0:
            raise ValueError(f"group_size {self.group_size} must divide "
                             f"n_subcarriers {self.n_subcarriers}")
        if not 1 <= self.n_active <= self.group_size:
            raise ValueError(f"need 1 <= n_active <= group_size, got {self.n_active}")
        k = self.mod_order.bit_length() - 1
        if self.mod_order < 4 or self.mod_order != 2**k or k % 2 != 0:
            raise ValueError(f"mod_order must be a square power of 4, got {self.mod_order}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not all(math.isfinite(s) for s in self.snr_db):
            raise ValueError("snr_db values must be finite")
        if self.min_errors < 0 or self.max_bits < 1:
            raise ValueError("need min_errors >= 0 and max_bits >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")

    @property
    def q(self) -> int:
        return self.n_subsymbols * self.n_subcarriers

    @property
    def n_groups(self) -> int:
        return self.n_subcarriers // self.group_size

    @property
    def active_per_group(self) -> int:
        return self.group_size if self.scheme == "gfdm" else self.n_active

    @property
    def index_bits_per_group(self) -> int:
        if self.scheme == "gfdm":
            return 0
        return math.comb(self.group_size, self.n_active).bit_length() - 1

    @property
    def bits_per_group(self) -> int:
        k = self.mod_order.bit_length() - 1
        return self.index_bits_per_group + self.active_per_group * k

    @property
    def bits_per_antenna(self) -> int:
        return self.n_subsymbols * self.n_groups * self.bits_per_group

    @property
    def bits_per_trial(self) -> int:
        return self.bits_per_antenna * self.n_users * self.n_tx

    @property
    def ebn0_factor(self) -> float:
        """Multiply 10^(snr_db/10) by this to convert Es/N0 to Eb/N0."""
        return self.active_per_group / self.bits_per_group


@dataclass(frozen=True)
class BerRecord:
    """Accumulated counts for one SNR point."""
    snr_db: float
    bits: int
    errors: int
    ber: float
    ci95: float
    trials: int


@lru_cache(maxsize=32)
def _context(scheme, n_subcarriers, n_subsymbols, group_size, n_active, mod_order, alpha):
    table = build_lookup_table(group_size, n_active)
    cons = make_constellation(mod_order)
    if scheme == "ofdm-im":
        a = build_ofdm_matrix(n_subcarriers, n_subsymbols)
    else:
        a = build_transmitter_matrix(rrc_prototype(n_subcarriers, n_subsymbols, alpha))
    return table, cons, a


def _config_context(config: SimConfig):
    return _context(config.scheme, config.n_subcarriers, config.n_subsymbols,
                    config.group_size, config.n_active, config.mod_order, config.alpha)


def run_chain(config: SimConfig, snr_db: float, tx_bits: np.ndarray,
              chan: ChannelRealization, noise_rng: np.random.Generator | None = None
              ) -> np.ndarray:
    """Encode, modulate, pass through a given channel, and decode.

    tx_bits has shape (n_users, n_tx, bits_per_antenna). Noise is added only
    when noise_rng is given; the MMSE filter always uses the snr-derived
    sigma^2. Returns decoded bits of the same shape as tx_bits.
    """
    # desk-scale matrices: multithreaded BLAS thrashes, trials parallelize
    # across processes instead
    with threadpool_limits(limits=1):
        return _run_chain(config, snr_db, tx_bits, chan, noise_rng)


def _run_chain(config, snr_db, tx_bits, chan, noise_rng):
    table, cons, a = _config_context(config)
    noise_power = snr_to_noise_power(snr_db)
    xs = []
    for u in range(config.n_users):
        parts = []
        for t in range(config.n_tx):
            if config.scheme == "gfdm":
                d = qam_modulate(tx_bits[u, t], cons)
            else:
                d = encode_frame(tx_bits[u, t], table, cons,
                                 config.n_subsymbols, config.n_groups)
            parts.append(a @ interleave(d, config.group_size, config.n_groups))
        xs.append(np.concatenate(parts))
    y = apply_channel(chan, xs, noise_power if noise_rng is not None else 0.0, noise_rng)
    b = build_effective_matrix(chan, a)
    d_tilde = mmse_equalize(b, y, noise_power)
    groups = split_streams(d_tilde, config.n_users, config.n_tx, config.n_subsymbols,
                           config.group_size, config.n_groups)
    if config.scheme == "gfdm":
        return decode_frame_dense(groups, cons)
    return decode_frame(groups, table, cons)


def run_trial(config: SimConfig, snr_db: float, trial_index: int):
    """One independent Monte Carlo realization; returns aligned (tx, rx) bit arrays.

    Bits, channel and noise come from substreams keyed by (seed, trial_index,
    purpose), so a trial is reproducible regardless of execution order.
    """
    rng_bits = substream(config.seed, trial_index, _BITS)
    rng_chan = substream(config.seed, trial_index, _CHANNEL)
    rng_noise = substream(config.seed, trial_index, _NOISE)
    tx = rng_bits.integers(0, 2, size=(config.n_users, config.n_tx,
                                       config.bits_per_antenna), dtype=np.uint8)
    chan = draw_channel(rng_chan, config.n_users, config.n_tx, config.n_rx, config.n_taps)
    rx = run_chain(config, snr_db, tx, chan, rng_noise)
    assert tx.size == config.bits_per_trial and rx.shape == tx.shape
    return tx.reshape(-1), rx.reshape(-1)


def _count_errors(config: SimConfig, snr_db: float, trial_index: int) -> int:
    tx, rx = run_trial(config, snr_db, trial_index)
    return int(np.count_nonzero(tx != rx))


def _error_stream(config, snr_db, n_max, executor):
    """Per-trial error counts in trial-index order, optionally computed in parallel."""
    if executor is None:
        for i in range(n_max):
            yield _count_errors(config, snr_db, i)
        return
    wave = config.workers * 4
    for start in range(0, n_max, wave):
        futures = [executor.submit(_count_errors, config, snr_db, i)
                   for i in range(start, min(start + wave, n_max))]
        for f in futures:
            yield f.result()


def _run_point(config: SimConfig, snr_db: float, executor=None) -> BerRecord:
    per_trial = config.bits_per_trial
    n_max = max(1, math.ceil(config.max_bits / per_trial))
    errors = bits = trials = 0
    for err in _error_stream(config, snr_db, n_max, executor):
        errors += err
        bits += per_trial
        trials += 1
        if errors >= config.min_errors or bits >= config.max_bits:
            break
    ber = errors / bits
    ci95 = 1.96 * math.sqrt(ber * (1 - ber) / bits)
    return BerRecord(float(snr_db), bits, errors, ber, ci95, trials)


def run_sweep(config: SimConfig) -> list:
    """BerRecord per SNR grid point; a pure function of (config, seed)."""
    if not config.snr_db:
        raise ValueError("SNR grid is empty")
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as executor:
            return [_run_point(config, s, executor) for s in config.snr_db]
    return [_run_point(config, s) for s in config.snr_db]


_CSV_FIELDS = ("scheme", "snr_db", "bits", "errors", "ber", "ci95", "trials", "seed",
               "n_users", "n_tx", "n_rx", "n_subsymbols", "n_subcarriers", "group_size",
               "n_active", "mod_order", "alpha", "n_taps", "min_errors", "max_bits",
               "ebn0_factor")


def csv_text(records, config: SimConfig) -> str:
    """Plot-ready CSV: one row per SNR point, full-precision numbers."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_FIELDS)
    for r in records:
        writer.writerow([config.scheme, r.snr_db, r.bits, r.errors, r.ber, r.ci95,
                         r.trials, config.seed, config.n_users, config.n_tx, config.n_rx,
                         config.n_subsymbols, config.n_subcarriers, config.group_size,
                         config.n_active, config.mod_order, config.alpha, config.n_taps,
                         config.min_errors, config.max_bits, config.ebn0_factor])
    return buf.getvalue()


def emit_csv(records, config: SimConfig, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(records, config))


@lru_cache(maxsize=32)
def _hypotheses(rows, group_size, n_active, mod_order):
    cons = make_constellation(mod_order)
    index_bits = len(rows).bit_length() - 1
    n_hyp = len(rows) * mod_order**n_active
    if n_hyp > 1024:
        raise ValueError(f"hypothesis space too large: {n_hyp} > 1024")
    k = cons.bits_per_symbol
    cand = np.zeros((n_hyp, group_size), dtype=complex)
    bits = np.zeros((n_hyp, index_bits + n_active * k), dtype=np.uint8)
    h = 0
    for j, row in enumerate(rows):
        for labels in product(range(mod_order), repeat=n_active):
            cand[h, list(row)] = cons.points[list(labels)]
            bits[h] = np.concatenate([int_to_bits(j, index_bits)]
                                     + [int_to_bits(lab, k) for lab in labels])
            h += 1
    return cand, bits


def ml_oracle_decode(observed: np.ndarray, table: LookupTable, cons: Constellation,
                     gain: float = 1.0) -> np.ndarray:
    """Exhaustive joint minimum-distance decode of one group (test oracle).

    Enumerates every (active pattern, symbol tuple) hypothesis; gain scales
    the hypotheses to match the expected amplitude of the observation.
    """
    cand, bits = _hypotheses(table.rows, table.group_size, table.n_active, cons.order)
    cost = (np.abs(np.asarray(observed)[None, :] - gain * cand) ** 2).sum(axis=1)
    return bits[int(np.argmin(cost))].copy()
