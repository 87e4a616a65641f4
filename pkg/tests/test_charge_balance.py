"""Constraint matrix, kernel basis, and block coordinate maps."""

import numpy as np
import pytest

from cbcontrol import (
    BlockInput,
    ChargeBalanceError,
    DimensionError,
    PreconditionError,
    build_scheme,
    pack,
    unpack,
    zero_sum_basis,
)

ROOT2 = np.sqrt(2.0)
ROOT6 = np.sqrt(6.0)


def test_scheme_h2_single_channel_closed_form():
    scheme = build_scheme(2, 1)
    assert np.allclose(scheme.Q, np.array([[1.0], [-1.0]]) / ROOT2, atol=1e-15)
    assert np.array_equal(scheme.R, np.ones((1, 2)))


def test_scheme_h2_three_channels_exact_identities():
    scheme = build_scheme(2, 3)
    assert np.abs(scheme.R @ scheme.Q).max() <= 1e-15
    assert np.abs(scheme.Q.T @ scheme.Q - np.eye(3)).max() <= 1e-15
    assert np.linalg.matrix_rank(scheme.Q) == 3


def test_scheme_h3_two_channels_matches_fixed_basis():
    # the deterministic construction lands on this particular basis
    expected_v = np.array(
        [
            [1 / ROOT2, 1 / ROOT6],
            [-1 / ROOT2, 1 / ROOT6],
            [0.0, -2 / ROOT6],
        ]
    )
    assert np.allclose(zero_sum_basis(3), expected_v, atol=1e-15)
    scheme = build_scheme(3, 2)
    assert np.allclose(scheme.Q, np.kron(expected_v, np.eye(2)), atol=1e-15)
    assert np.abs(scheme.Q.sum(axis=0)).max() <= 1e-13


@pytest.mark.parametrize("h", [2, 3, 4, 5, 7])
@pytest.mark.parametrize("m", [1, 2, 3])
def test_scheme_invariants(h, m):
    scheme = build_scheme(h, m)
    assert np.abs(scheme.Q.T @ scheme.Q - np.eye(m * (h - 1))).max() <= 1e-12
    assert np.abs(scheme.R @ scheme.Q).max() <= 1e-12
    assert np.linalg.matrix_rank(scheme.Q) == m * (h - 1)


def test_scheme_rejects_short_blocks():
    with pytest.raises(PreconditionError, match="at least two steps per block"):
        build_scheme(1, 2)
    with pytest.raises(PreconditionError):
        build_scheme(3, 0)


def test_pack_zero_block():
    scheme = build_scheme(3, 2)
    assert np.array_equal(pack(np.zeros(6), scheme), np.zeros(4))


def test_pack_h2_forced_value():
    scheme = build_scheme(2, 1)
    w = pack(np.array([3.0, -3.0]), scheme)
    assert np.allclose(w, [3.0 * ROOT2], atol=1e-14)


def test_pack_round_trip_oracle():
    rng = np.random.default_rng(20)
    for _ in range(100):
        h = int(rng.integers(2, 6))
        m = int(rng.integers(1, 4))
        scheme = build_scheme(h, m)
        w0 = rng.standard_normal(scheme.latent_dim)
        recovered = pack(unpack(w0, scheme), scheme)
        assert np.abs(recovered - w0).max() <= 1e-12
        restored = unpack(recovered, scheme)
        assert np.abs(restored - unpack(w0, scheme)).max() <= 1e-10


def test_pack_rejects_imbalanced_block():
    scheme = build_scheme(2, 2)
    with pytest.raises(ChargeBalanceError) as info:
        pack(np.array([1.0, 0.0, -1.0, 0.5]), scheme)
    assert info.value.imbalance is not None
    assert np.allclose(info.value.imbalance, [0.0, 0.5])


def test_unpack_zero():
    scheme = build_scheme(4, 1)
    assert np.array_equal(unpack(np.zeros(3), scheme), np.zeros(4))


def test_unpack_h2_two_channels_closed_form():
    scheme = build_scheme(2, 2)
    a, b = 0.7, -1.3
    expected = np.array([a, b, -a, -b]) / ROOT2
    assert np.allclose(unpack([a, b], scheme), expected, atol=1e-15)


def test_unpack_blocks_sum_to_zero():
    rng = np.random.default_rng(21)
    for _ in range(100):
        h = int(rng.integers(2, 6))
        m = int(rng.integers(1, 4))
        scheme = build_scheme(h, m)
        U = unpack(rng.standard_normal(scheme.latent_dim), scheme)
        per_channel = U.reshape(h, m).sum(axis=0)
        assert np.abs(per_channel).max() <= 1e-13


def test_energy_isometry():
    rng = np.random.default_rng(22)
    for _ in range(100):
        h = int(rng.integers(2, 6))
        m = int(rng.integers(1, 4))
        scheme = build_scheme(h, m)
        w = rng.standard_normal(scheme.latent_dim)
        U = unpack(w, scheme)
        assert abs(np.linalg.norm(U) - np.linalg.norm(w)) <= 1e-12 * max(
            1.0, np.linalg.norm(w)
        )


def test_identical_stacked_blocks_annihilate():
    # vectors made of h identical channel blocks span the orthogonal
    # complement of the kernel basis
    rng = np.random.default_rng(23)
    for _ in range(100):
        h = int(rng.integers(2, 6))
        m = int(rng.integers(1, 4))
        scheme = build_scheme(h, m)
        alpha = rng.standard_normal(m)
        v = np.tile(alpha, h)
        assert np.abs(v @ scheme.Q).max() <= 1e-12 * max(1.0, np.abs(alpha).max())


def test_dimension_errors():
    scheme = build_scheme(3, 2)
    with pytest.raises(DimensionError):
        pack(np.zeros(5), scheme)
    with pytest.raises(DimensionError):
        unpack(np.zeros(5), scheme)


def test_block_input_round_trip():
    scheme = build_scheme(3, 1)
    block = BlockInput.from_latent([1.0, -0.5], scheme)
    assert np.allclose(block.U, unpack(block.w, scheme))
    again = BlockInput.from_stacked(block.U, scheme)
    assert np.abs(again.w - block.w).max() <= 1e-12
