"""Prototype filter, GFDM/OFDM transmitter matrices, block interleaver."""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PrototypeFilter:
    """Unit-energy transmit pulse sampled over one GFDM block (Q = L * N_tot)."""
    taps: np.ndarray
    n_subcarriers: int
    n_subsymbols: int
    alpha: float


def _rrc_pulse(t: np.ndarray, alpha: float) -> np.ndarray:
    """Root-raised-cosine impulse response at symbol-period-normalized times t."""
    num = np.sin(np.pi * t * (1 - alpha)) + 4 * alpha * t * np.cos(np.pi * t * (1 + alpha))
    den = np.pi * t * (1 - (4 * alpha * t) ** 2)
    safe = np.where(den == 0, 1.0, den)
    g = num / safe
    # removable singularities: t = 0 and |4*alpha*t| = 1
    g = np.where(np.isclose(t, 0.0, rtol=0, atol=1e-12), 1 - alpha + 4 * alpha / np.pi, g)
    if alpha > 0:
        edge = (alpha / np.sqrt(2)) * ((1 + 2 / np.pi) * np.sin(np.pi / (4 * alpha))
                                       + (1 - 2 / np.pi) * np.cos(np.pi / (4 * alpha)))
        g = np.where(np.isclose(np.abs(4 * alpha * t), 1.0, rtol=0, atol=1e-9), edge, g)
    return g


def rrc_prototype(n_subcarriers: int, n_subsymbols: int, alpha: float) -> PrototypeFilter:
    """RRC pulse with symbol period N_tot samples, peak rotated to sample 0."""
    if not 0 <= alpha <= 1:
        raise ValueError(f"roll-off must be in [0, 1], got {alpha}")
    if n_subcarriers < 2 or n_subsymbols < 1:
        raise ValueError("need n_subcarriers >= 2 and n_subsymbols >= 1")
    q = n_subcarriers * n_subsymbols
    t = (np.arange(q) - q // 2) / n_subcarriers
    g = _rrc_pulse(t, alpha)
    g = np.roll(g, -(q // 2))
    g = g / np.linalg.norm(g)
    return PrototypeFilter(g, n_subcarriers, n_subsymbols, alpha)


def build_transmitter_matrix(filt: PrototypeFilter) -> np.ndarray:
    """Q x Q modulation matrix: column (n, l) carries subcarrier n of subsymbol l.

    Column l*N_tot + n equals the pulse circularly shifted by l*N_tot samples
    times the subcarrier tone exp(j 2 pi n q / N_tot); columns are ordered
    subcarrier-fast, subsymbol-slow.
    """
    n_tot, n_sub = filt.n_subcarriers, filt.n_subsymbols
    q = np.arange(n_tot * n_sub)
    tones = np.exp(2j * np.pi * np.outer(q, np.arange(n_tot)) / n_tot)
    return np.hstack([tones * np.roll(filt.taps, l * n_tot)[:, None] for l in range(n_sub)])


def build_ofdm_matrix(n_subcarriers: int, n_subsymbols: int) -> np.ndarray:
    """Block-diagonal stack of unitary inverse-DFT blocks, one per subsymbol."""
    if n_subcarriers < 2 or n_subsymbols < 1:
        raise ValueError("need n_subcarriers >= 2 and n_subsymbols >= 1")
    n = np.arange(n_subcarriers)
    idft = np.exp(2j * np.pi * np.outer(n, n) / n_subcarriers) / np.sqrt(n_subcarriers)
    return np.kron(np.eye(n_subsymbols), idft)


def interleave(frame: np.ndarray, group_size: int, n_groups: int) -> np.ndarray:
    """Spread each group's members n_groups subcarriers apart within its subsymbol.

    Group-major position g*N + n moves to n*G + g in every subsymbol block.
    """
    frame = np.asarray(frame)
    n_tot = group_size * n_groups
    if len(frame) % n_tot != 0:
        raise ValueError(f"frame length {len(frame)} not a multiple of {n_tot}")
    return frame.reshape(-1, n_groups, group_size).transpose(0, 2, 1).reshape(-1)


def deinterleave(frame: np.ndarray, group_size: int, n_groups: int) -> np.ndarray:
    """Inverse of interleave: back to group-major order per subsymbol."""
    frame = np.asarray(frame)
    n_tot = group_size * n_groups
    if len(frame) % n_tot != 0:
        raise ValueError(f"frame length {len(frame)} not a multiple of {n_tot}")
    return frame.reshape(-1, group_size, n_groups).transpose(0, 2, 1).reshape(-1)


def modulate(a: np.ndarray, d_bar: np.ndarray) -> np.ndarray:
    """Time-domain block x = A d_bar."""
    a = np.asarray(a)
    d_bar = np.asarray(d_bar)
    if a.shape[1] != len(d_bar):
        raise ValueError(f"matrix is {a.shape}, data length {len(d_bar)}")
    return a @ d_bar
