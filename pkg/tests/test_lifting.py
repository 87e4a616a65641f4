"""Lifted block dynamics, reachability matrices, and geometric sums."""

import numpy as np
import pytest

from cbcontrol import (
    DimensionError,
    LtiSystem,
    PreconditionError,
    build_scheme,
    h_sum,
    lift,
    reachability_matrix,
    simulate,
    unpack,
)

from helpers import expander_system, random_system, rotation_system


def test_lift_rotation_h2_closed_form():
    lifted = lift(rotation_system(), build_scheme(2, 1))
    expected = np.array([-3.0 * np.sqrt(2.0) / 4.0, np.sqrt(6.0) / 4.0])
    assert np.abs(lifted.Bbar.ravel() - expected).max() <= 1e-12


def test_lift_column_order_of_s():
    rng = np.random.default_rng(30)
    system = random_system(rng, 3, 2)
    lifted = lift(system, build_scheme(3, 2))
    A, B = system.A, system.B
    expected = np.hstack([A @ (A @ B), A @ B, B])
    assert np.array_equal(lifted.S, expected)
    assert np.array_equal(lifted.Bbar, lifted.S @ lifted.scheme.Q)


def test_lift_identity_a_gives_zero_bbar():
    # all the stacked powers collapse to B, which the kernel basis annihilates
    system = LtiSystem(A=np.eye(3), B=np.arange(6.0).reshape(3, 2))
    for h in (2, 3, 4):
        lifted = lift(system, build_scheme(h, 2))
        assert np.abs(lifted.Bbar).max() <= 1e-13


def test_lift_one_block_simulation_oracle():
    rng = np.random.default_rng(31)
    for _ in range(50):
        system = random_system(rng, 3, 2)
        scheme = build_scheme(3, 2)
        lifted = lift(system, scheme)
        x0 = rng.standard_normal(3)
        w = rng.standard_normal(scheme.latent_dim)
        flat = unpack(w, scheme).reshape(3, 2)
        traj = simulate(system, x0, flat)
        predicted = lifted.Abar @ x0 + lifted.Bbar @ w
        scale = max(1.0, np.abs(predicted).max())
        assert np.abs(traj.terminal - predicted).max() <= 1e-11 * scale


def test_lift_dimension_mismatch():
    with pytest.raises(DimensionError):
        lift(rotation_system(), build_scheme(2, 3))


def test_reachability_single_block():
    lifted = lift(expander_system(), build_scheme(2, 2))
    bundle = reachability_matrix(lifted, 1)
    assert np.array_equal(bundle.Rb, lifted.Bbar)
    assert np.allclose(bundle.G, lifted.Bbar @ lifted.Bbar.T, atol=1e-14)


def test_reachability_rotation_two_blocks_rank():
    lifted = lift(rotation_system(), build_scheme(2, 1))
    bundle = reachability_matrix(lifted, 2)
    assert np.linalg.matrix_rank(bundle.Rb) == 2


def test_gramian_term_sum_oracle():
    rng = np.random.default_rng(32)
    for _ in range(25):
        system = random_system(rng, 3, 2)
        lifted = lift(system, build_scheme(2, 2))
        bundle = reachability_matrix(lifted, 4)
        total = np.zeros((3, 3))
        for p in range(4):
            Ap = np.linalg.matrix_power(lifted.Abar, p)
            total += Ap @ lifted.Bbar @ lifted.Bbar.T @ Ap.T
        scale = max(1.0, np.abs(total).max())
        assert np.abs(bundle.G - total).max() <= 1e-11 * scale


def test_gramian_symmetric_and_psd():
    rng = np.random.default_rng(33)
    for _ in range(100):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 3))
        h = int(rng.integers(2, 5))
        b = int(rng.integers(1, 5))
        lifted = lift(random_system(rng, n, m), build_scheme(h, m))
        G = reachability_matrix(lifted, b).G
        assert np.abs(G - G.T).max() <= 1e-12 * max(1.0, np.abs(G).max())
        eigs = np.linalg.eigvalsh(G)
        assert eigs.min() >= -1e-10 * max(1.0, np.linalg.norm(G, 2))


def test_h_sum_trivial_cases():
    lifted = lift(expander_system(), build_scheme(2, 2))
    assert np.array_equal(h_sum(lifted, 1), np.eye(2))
    identity = lift(LtiSystem(A=np.eye(3), B=np.ones((3, 1))), build_scheme(2, 1))
    assert np.allclose(h_sum(identity, 5), 5.0 * np.eye(3), atol=1e-13)


def test_h_sum_expander_full_rank_map():
    lifted = lift(expander_system(), build_scheme(2, 2))
    gain = h_sum(lifted, 10) @ lifted.Bbar
    assert np.linalg.matrix_rank(gain) == 2


def test_h_sum_matches_power_series():
    rng = np.random.default_rng(34)
    for _ in range(25):
        system = random_system(rng, 3, 1, radius=1.2)
        lifted = lift(system, build_scheme(3, 1))
        b = int(rng.integers(1, 7))
        explicit = sum(np.linalg.matrix_power(lifted.Abar, i) for i in range(b))
        got = h_sum(lifted, b)
        assert np.abs(got - explicit).max() <= 1e-10 * max(1.0, np.abs(explicit).max())


def test_block_boundary_equivalence():
    # iterating the lifted recursion equals per-step simulation sampled at
    # block boundaries
    rng = np.random.default_rng(35)
    for _ in range(100):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 3))
        h = int(rng.integers(2, 5))
        b = int(rng.integers(1, 5))
        system = random_system(rng, n, m)
        scheme = build_scheme(h, m)
        lifted = lift(system, scheme)
        x0 = rng.standard_normal(n)
        latents = [rng.standard_normal(scheme.latent_dim) for _ in range(b)]

        flat = np.vstack([unpack(w, scheme).reshape(h, m) for w in latents])
        traj = simulate(system, x0, flat)

        x = x0.copy()
        for p in range(b):
            x = lifted.Abar @ x + lifted.Bbar @ latents[p]
            boundary = traj.states[(p + 1) * h]
            scale = max(1.0, np.abs(x).max())
            assert np.abs(boundary - x).max() <= 1e-10 * scale


def test_repetitive_closed_form():
    # b repeats of one latent vector land on Abar^b x0 + H_b Bbar w
    rng = np.random.default_rng(36)
    for _ in range(100):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(1, 3))
        h = int(rng.integers(2, 4))
        b = int(rng.integers(1, 6))
        system = random_system(rng, n, m, radius=1.1)
        scheme = build_scheme(h, m)
        lifted = lift(system, scheme)
        x0 = rng.standard_normal(n)
        w = rng.standard_normal(scheme.latent_dim)

        x = x0.copy()
        for _ in range(b):
            x = lifted.Abar @ x + lifted.Bbar @ w
        closed = np.linalg.matrix_power(lifted.Abar, b) @ x0 + h_sum(lifted, b) @ lifted.Bbar @ w
        scale = max(1.0, np.abs(closed).max())
        assert np.abs(x - closed).max() <= 1e-11 * scale


def test_horizon_validation():
    lifted = lift(expander_system(), build_scheme(2, 2))
    with pytest.raises(PreconditionError):
        reachability_matrix(lifted, 0)
    with pytest.raises(PreconditionError):
        h_sum(lifted, 0)
