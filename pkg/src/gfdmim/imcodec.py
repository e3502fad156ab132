"""Index-modulation bit mapping per subcarrier group, plus Gray-coded QAM."""
import math
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np


def int_to_bits(value: int, width: int) -> np.ndarray:
    """MSB-first binary expansion of value into width bits."""
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    """MSB-first bits to integer; empty input yields 0."""
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


@dataclass(frozen=True, eq=False)
class LookupTable:
    """Truncated table of allowed active-subcarrier patterns for one group."""
    group_size: int            # N subcarriers per group
    n_active: int              # K active subcarriers
    rows: tuple                # 2^index_bits strictly increasing index tuples
    index_bits: int            # b1 = floor(log2 C(N, K))
    rows_array: np.ndarray     # rows as (2^b1, K) int array for vectorized metrics

    def row_of(self, active) -> int:
        """Row number of an active tuple; raises if it is not in the table."""
        try:
            return self.rows.index(tuple(int(i) for i in active))
        except ValueError:
            raise ValueError(f"active tuple {tuple(active)} not present in table") from None


def build_lookup_table(group_size: int, n_active: int) -> LookupTable:
    """First 2^floor(log2 C(N,K)) K-combinations of 0..N-1 in lexicographic order."""
    if n_active < 1 or n_active > group_size:
        raise ValueError(f"need 1 <= K <= N, got K={n_active}, N={group_size}")
    n_comb = math.comb(group_size, n_active)
    index_bits = n_comb.bit_length() - 1
    rows = tuple(islice(combinations(range(group_size), n_active), 2**index_bits))
    return LookupTable(group_size, n_active, rows, index_bits, np.array(rows))


@dataclass(frozen=True, eq=False)
class Constellation:
    """Gray-labeled square QAM with unit average energy."""
    order: int
    bits_per_symbol: int
    points: np.ndarray  # indexed by MSB-first bit label


def _gray_decode(v: int) -> int:
    b = 0
    while v:
        b ^= v
        v >>= 1
    return b


def make_constellation(order: int) -> Constellation:
    """Square M-QAM (M = 4, 16, 64, ...), Gray per axis, label 0 on +I/+Q."""
    k = order.bit_length() - 1
    if order < 4 or order != 2**k or k % 2 != 0:
        raise ValueError(f"modulation order must be a square power of 4, got {order}")
    half = k // 2
    n_levels = 2**half
    # Gray-decoded label picks the level index; levels descend from +(n_levels-1).
    level = np.array([n_levels - 1 - 2 * _gray_decode(v) for v in range(n_levels)], dtype=float)
    labels = np.arange(order)
    points = level[labels >> half] + 1j * level[labels & (n_levels - 1)]
    points /= np.sqrt(np.mean(np.abs(points) ** 2))
    return Constellation(order, k, points)


def qam_modulate(bits: np.ndarray, cons: Constellation) -> np.ndarray:
    """Map bits (multiple of bits_per_symbol) to constellation points."""
    k = cons.bits_per_symbol
    b = np.asarray(bits).reshape(-1, k)
    labels = b.dot(1 << np.arange(k)[::-1])
    return cons.points[labels]


def qam_demodulate(symbols: np.ndarray, cons: Constellation) -> np.ndarray:
    """Hard minimum-distance demapper: symbols to flat MSB-first bit array."""
    s = np.asarray(symbols).reshape(-1, 1)
    labels = np.abs(s - cons.points[None, :]).argmin(axis=1)
    k = cons.bits_per_symbol
    bits = (labels[:, None] >> np.arange(k)[::-1]) & 1
    return bits.astype(np.uint8).reshape(-1)


def encode_group(bits: np.ndarray, table: LookupTable, cons: Constellation) -> np.ndarray:
    """One group's bits to its length-N data vector (idle subcarriers exactly zero).

    The first index_bits bits, MSB-first, select the table row; the rest map
    to QAM symbols placed on the active indices in increasing order.
    """
    bits = np.asarray(bits)
    expected = table.index_bits + table.n_active * cons.bits_per_symbol
    if len(bits) != expected:
        raise ValueError(f"expected {expected} bits per group, got {len(bits)}")
    row = bits_to_int(bits[: table.index_bits])
    out = np.zeros(table.group_size, dtype=complex)
    out[list(table.rows[row])] = qam_modulate(bits[table.index_bits:], cons)
    return out


def detect_group(observed: np.ndarray, table: LookupTable, squared: bool = False):
    """Most likely active pattern: argmax over rows of summed magnitudes.

    Ties resolve to the smallest row number. squared=True sums |.|^2 instead
    of |.| (experimental variant, not used by the simulation configs).
    """
    observed = np.asarray(observed)
    if len(observed) != table.group_size:
        raise ValueError(f"expected length {table.group_size}, got {len(observed)}")
    mag = np.abs(observed)
    if squared:
        mag = mag**2
    metrics = mag[table.rows_array].sum(axis=1)
    row = int(np.argmax(metrics))
    return row, table.rows[row]


def demap_group(observed: np.ndarray, active, table: LookupTable, cons: Constellation) -> np.ndarray:
    """Bits back out of one group given its detected active pattern."""
    row = table.row_of(active)
    index_bits = int_to_bits(row, table.index_bits)
    symbol_bits = qam_demodulate(np.asarray(observed)[list(table.rows[row])], cons)
    return np.concatenate([index_bits, symbol_bits])


def encode_frame(bits: np.ndarray, table: LookupTable, cons: Constellation,
                 n_subsymbols: int, n_groups: int) -> np.ndarray:
    """One antenna's bits to the group-major data block (groups within subsymbols)."""
    bits = np.asarray(bits)
    per_group = table.index_bits + table.n_active * cons.bits_per_symbol
    expected = n_subsymbols * n_groups * per_group
    if len(bits) != expected:
        raise ValueError(f"expected {expected} bits per antenna, got {len(bits)}")
    out = np.empty(n_subsymbols * n_groups * table.group_size, dtype=complex)
    pos = 0
    for block in range(n_subsymbols * n_groups):
        chunk = bits[block * per_group:(block + 1) * per_group]
        out[pos:pos + table.group_size] = encode_group(chunk, table, cons)
        pos += table.group_size
    return out
