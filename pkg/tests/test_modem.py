import numpy as np
import pytest

from gfdmim.imcodec import build_lookup_table, encode_frame, make_constellation
from gfdmim.modem import (PrototypeFilter, build_ofdm_matrix, build_transmitter_matrix,
                          deinterleave, interleave, modulate, rrc_prototype)


def unitary_idft(n):
    k = np.arange(n)
    return np.exp(2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


class TestRrcPrototype:
    def test_unit_energy(self):
        for alpha in (0.0, 0.1, 0.35, 0.9, 1.0):
            f = rrc_prototype(16, 3, alpha)
            assert abs(np.linalg.norm(f.taps) - 1.0) < 1e-12

    def test_operating_rolloffs_accepted(self):
        for alpha in (0.1, 0.9):
            f = rrc_prototype(32, 5, alpha)
            assert f.taps.shape == (160,)

    def test_zero_rolloff_is_sinc(self):
        n_tot, n_sub = 16, 5
        f = rrc_prototype(n_tot, n_sub, 0.0)
        # peak at sample 0, zeros at nonzero multiples of the symbol period
        assert np.argmax(np.abs(f.taps)) == 0
        for m in range(1, n_sub // 2 + 1):
            assert abs(f.taps[m * n_tot]) < 1e-12
            assert abs(f.taps[-m * n_tot]) < 1e-12

    def test_peak_at_sample_zero(self):
        for alpha in (0.1, 0.9):
            f = rrc_prototype(32, 5, alpha)
            assert np.argmax(np.abs(f.taps)) == 0

    def test_rolloff_range_checked(self):
        with pytest.raises(ValueError):
            rrc_prototype(16, 3, -0.1)
        with pytest.raises(ValueError):
            rrc_prototype(16, 3, 1.1)

    def test_singularity_samples_finite(self):
        # grid hits t = 1/(4 alpha) exactly for alpha = 0.1 and n_tot = 32
        f = rrc_prototype(32, 6, 0.1)
        assert np.all(np.isfinite(f.taps))
        assert np.all(np.abs(f.taps) < 1.0)


class TestTransmitterMatrix:
    def test_first_column_is_prototype(self):
        f = rrc_prototype(16, 4, 0.1)
        a = build_transmitter_matrix(f)
        assert np.allclose(a[:, 0], f.taps)

    def test_all_columns_unit_norm(self):
        f = rrc_prototype(16, 4, 0.9)
        a = build_transmitter_matrix(f)
        assert np.allclose(np.linalg.norm(a, axis=0), 1.0)

    def test_column_structure(self):
        f = rrc_prototype(8, 3, 0.5)
        a = build_transmitter_matrix(f)
        q = np.arange(24)
        for l in range(3):
            for n in range(8):
                expected = np.roll(f.taps, l * 8) * np.exp(2j * np.pi * n * q / 8)
                assert np.allclose(a[:, l * 8 + n], expected)

    def test_constant_filter_single_subsymbol_is_idft(self):
        n_tot = 8
        flat = PrototypeFilter(np.full(n_tot, 1 / np.sqrt(n_tot)), n_tot, 1, 0.0)
        a = build_transmitter_matrix(flat)
        assert np.allclose(a, unitary_idft(n_tot))

    def test_invertible_at_operating_points(self):
        for alpha in (0.1, 0.9):
            for n_tot, n_sub in ((16, 3), (32, 5)):
                a = build_transmitter_matrix(rrc_prototype(n_tot, n_sub, alpha))
                smin = np.linalg.svd(a, compute_uv=False).min()
                assert smin > 1e-6, f"alpha={alpha} n_tot={n_tot}: smin={smin}"


class TestOfdmMatrix:
    def test_unitary(self):
        a = build_ofdm_matrix(8, 3)
        assert np.linalg.norm(a.conj().T @ a - np.eye(24)) < 1e-12

    def test_single_block(self):
        assert np.allclose(build_ofdm_matrix(8, 1), unitary_idft(8))

    def test_single_subcarrier_confined_to_subsymbol(self):
        a = build_ofdm_matrix(8, 3)
        d = np.zeros(24, dtype=complex)
        d[8 + 2] = 1.0  # subcarrier 2 of subsymbol 1
        x = modulate(a, d)
        assert np.allclose(x[:8], 0) and np.allclose(x[16:], 0)
        expected = np.exp(2j * np.pi * 2 * np.arange(8) / 8) / np.sqrt(8)
        assert np.allclose(x[8:16], expected)


class TestInterleaver:
    def test_group_spread_positions(self):
        # N=4, G=2: group 0 lands on subcarriers 0,2,4,6 and group 1 on 1,3,5,7
        frame = np.arange(8, dtype=complex)  # one subsymbol, group-major
        out = interleave(frame, 4, 2)
        assert np.array_equal(out[[0, 2, 4, 6]], frame[:4])
        assert np.array_equal(out[[1, 3, 5, 7]], frame[4:])

    def test_single_group_is_identity(self):
        frame = np.arange(12, dtype=complex)
        assert np.array_equal(interleave(frame, 4, 1), frame)
        assert np.array_equal(deinterleave(frame, 4, 1), frame)

    def test_round_trip(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            g, n, l = rng.integers(1, 5), rng.integers(1, 6), rng.integers(1, 4)
            frame = rng.normal(size=g * n * l) + 1j * rng.normal(size=g * n * l)
            assert np.allclose(deinterleave(interleave(frame, n, g), n, g), frame)

    def test_is_permutation(self):
        rng = np.random.default_rng(5)
        frame = rng.normal(size=24)
        out = interleave(frame, 4, 3)
        assert sorted(out.tolist()) == sorted(frame.tolist())

    def test_applies_per_subsymbol(self):
        frame = np.arange(16, dtype=complex)  # two subsymbols of 8
        out = interleave(frame, 4, 2)
        assert set(out[:8]) == set(frame[:8])
        assert set(out[8:]) == set(frame[8:])

    def test_length_checked(self):
        with pytest.raises(ValueError):
            interleave(np.zeros(7), 4, 2)


class TestModulate:
    def test_zero_in_zero_out(self):
        a = build_ofdm_matrix(4, 2)
        assert np.array_equal(modulate(a, np.zeros(8)), np.zeros(8))

    def test_basis_vector_extracts_column(self):
        a = build_transmitter_matrix(rrc_prototype(8, 2, 0.5))
        e = np.zeros(16)
        e[5] = 1.0
        assert np.array_equal(modulate(a, e), a[:, 5])

    def test_against_accumulation_oracle(self):
        rng = np.random.default_rng(6)
        a = build_transmitter_matrix(rrc_prototype(8, 3, 0.3))
        d = rng.normal(size=24) + 1j * rng.normal(size=24)
        direct = np.zeros(24, dtype=complex)
        for p in range(24):
            direct += a[:, p] * d[p]
        assert np.allclose(modulate(a, d), direct, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            modulate(np.eye(4), np.zeros(5))


class TestFrameEnergy:
    def test_qpsk_frame_norm_counts_active_symbols(self):
        # unit-modulus points: ||d_bar||^2 equals active symbols per frame
        table = build_lookup_table(4, 2)
        cons = make_constellation(4)
        rng = np.random.default_rng(7)
        n_sub, n_groups = 5, 8
        for _ in range(20):
            bits = rng.integers(0, 2, n_sub * n_groups * 6).astype(np.uint8)
            d = encode_frame(bits, table, cons, n_sub, n_groups)
            d_bar = interleave(d, 4, n_groups)
            active_total = n_sub * n_groups * 2
            assert abs(np.linalg.norm(d_bar) ** 2 - active_total) < 1e-9 * active_total
