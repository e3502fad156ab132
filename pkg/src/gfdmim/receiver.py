"""MMSE joint detection and demodulation back to per-antenna bits."""
import numpy as np

from .channel import ChannelRealization, build_user_channel_matrix
from .imcodec import Constellation, LookupTable, demap_group, detect_group, qam_demodulate
from .modem import deinterleave
from .numerics import hermitian_solve


def build_effective_matrix(chan: ChannelRealization, a: np.ndarray) -> np.ndarray:
    """Stacked channel-times-modulation matrix [B_1 ... B_U], block (r,t) = H_rtu A."""
    q = a.shape[0]
    if a.shape != (q, q):
        raise ValueError(f"modulation matrix must be square, got {a.shape}")
    return np.hstack([build_user_channel_matrix(chan, u, q) @ np.kron(np.eye(chan.n_tx), a)
                      for u in range(chan.n_users)])


def mmse_equalize(b: np.ndarray, y: np.ndarray, noise_power: float) -> np.ndarray:
    """d_tilde = (B^H B + sigma^2 I)^{-1} B^H y via Hermitian solve."""
    b = np.asarray(b)
    y = np.asarray(y)
    if b.shape[0] != len(y):
        raise ValueError(f"B has {b.shape[0]} rows, y has length {len(y)}")
    gram = b.conj().T @ b
    gram[np.diag_indices_from(gram)] += noise_power
    return hermitian_solve(gram, b.conj().T @ y)


def split_streams(d_tilde: np.ndarray, n_users: int, n_tx: int, n_subsymbols: int,
                  group_size: int, n_groups: int) -> np.ndarray:
    """Per-(user, antenna) slices, deinterleaved and split into groups.

    Returns observations of shape (n_users, n_tx, n_subsymbols, n_groups, group_size).
    """
    d_tilde = np.asarray(d_tilde)
    q = n_subsymbols * n_groups * group_size
    if len(d_tilde) != q * n_users * n_tx:
        raise ValueError(f"expected length {q * n_users * n_tx}, got {len(d_tilde)}")
    out = np.empty((n_users, n_tx, n_subsymbols, n_groups, group_size), dtype=complex)
    for u in range(n_users):
        for t in range(n_tx):
            s = d_tilde[(u * n_tx + t) * q:(u * n_tx + t + 1) * q]
            out[u, t] = deinterleave(s, group_size, n_groups).reshape(
                n_subsymbols, n_groups, group_size)
    return out


def decode_frame(groups: np.ndarray, table: LookupTable, cons: Constellation) -> np.ndarray:
    """Index-detect and demap every group; bits in transmit order per antenna.

    groups has shape (n_users, n_tx, n_subsymbols, n_groups, group_size);
    returns uint8 bits of shape (n_users, n_tx, bits_per_antenna).
    """
    n_users, n_tx, n_sub, n_groups, _ = groups.shape
    per_group = table.index_bits + table.n_active * cons.bits_per_symbol
    out = np.empty((n_users, n_tx, n_sub * n_groups * per_group), dtype=np.uint8)
    for u in range(n_users):
        for t in range(n_tx):
            pos = 0
            for l in range(n_sub):
                for g in range(n_groups):
                    obs = groups[u, t, l, g]
                    _, active = detect_group(obs, table)
                    out[u, t, pos:pos + per_group] = demap_group(obs, active, table, cons)
                    pos += per_group
    return out


def decode_frame_dense(groups: np.ndarray, cons: Constellation) -> np.ndarray:
    """Classical demapper: every subcarrier carries a QAM symbol, no index bits."""
    n_users, n_tx = groups.shape[:2]
    q = groups[0, 0].size
    out = np.empty((n_users, n_tx, q * cons.bits_per_symbol), dtype=np.uint8)
    for u in range(n_users):
        for t in range(n_tx):
            out[u, t] = qam_demodulate(groups[u, t].reshape(-1), cons)
    return out
