"""Multi-user multipath Rayleigh MIMO channel with circular convolution."""
from dataclasses import dataclass

import numpy as np

from .numerics import circulant, complex_gaussian


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Impulse responses for every (rx antenna, tx antenna, user) link."""
    taps: np.ndarray  # (n_rx, n_tx, n_users, n_taps) complex

    @property
    def n_rx(self):
        return self.taps.shape[0]

    @property
    def n_tx(self):
        return self.taps.shape[1]

    @property
    def n_users(self):
        return self.taps.shape[2]

    @property
    def n_taps(self):
        return self.taps.shape[3]


def draw_channel(rng: np.random.Generator, n_users: int, n_tx: int, n_rx: int,
                 n_taps: int) -> ChannelRealization:
    """i.i.d. links, each tap CN(0, 1/V) so expected link energy is 1."""
    if min(n_users, n_tx, n_rx, n_taps) < 1:
        raise ValueError("all channel dimensions must be >= 1")
    flat = complex_gaussian(rng, n_rx * n_tx * n_users * n_taps, 1.0 / n_taps)
    return ChannelRealization(flat.reshape(n_rx, n_tx, n_users, n_taps))


def build_user_channel_matrix(chan: ChannelRealization, user: int, q: int) -> np.ndarray:
    """(Q n_rx) x (Q n_tx) block matrix of per-link circulants for one user."""
    if not 0 <= user < chan.n_users:
        raise ValueError(f"user index {user} out of range 0..{chan.n_users - 1}")
    return np.block([[circulant(chan.taps[r, t, user], q) for t in range(chan.n_tx)]
                     for r in range(chan.n_rx)])


def apply_channel(chan: ChannelRealization, x_per_user, noise_power: float,
                  rng: np.random.Generator | None = None) -> np.ndarray:
    """Superimpose all users through their channels and add CN(0, sigma^2) noise.

    Each x_per_user[u] stacks that user's per-antenna blocks (length Q * n_tx).
    """
    if len(x_per_user) != chan.n_users:
        raise ValueError(f"expected {chan.n_users} user signals, got {len(x_per_user)}")
    if noise_power < 0:
        raise ValueError(f"noise power must be >= 0, got {noise_power}")
    x0 = np.asarray(x_per_user[0])
    if len(x0) % chan.n_tx != 0:
        raise ValueError(f"signal length {len(x0)} not a multiple of n_tx={chan.n_tx}")
    q = len(x0) // chan.n_tx
    y = np.zeros(q * chan.n_rx, dtype=complex)
    for u, x_u in enumerate(x_per_user):
        x_u = np.asarray(x_u)
        if len(x_u) != q * chan.n_tx:
            raise ValueError("user signal lengths differ")
        y += build_user_channel_matrix(chan, u, q) @ x_u
    if noise_power > 0:
        if rng is None:
            raise ValueError("rng required when noise_power > 0")
        y += complex_gaussian(rng, len(y), noise_power)
    return y
