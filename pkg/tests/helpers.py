"""Shared system generators and reference values for the test suite."""

import numpy as np

from cbcontrol import LtiSystem, SteeringTask, build_scheme, simulate, unpack

ROOT3 = np.sqrt(3.0)


def rotation_system() -> LtiSystem:
    """Single-input plane rotation by 120 degrees (complex cube-root spectrum)."""
    A = np.array([[-0.5, -ROOT3 / 2], [ROOT3 / 2, -0.5]])
    return LtiSystem(A=A, B=[[1.0], [0.0]])


def expander_system() -> LtiSystem:
    """Fully actuated triangular plant with eigenvalues 2 and 0.5."""
    return LtiSystem(A=[[2.0, 1.0], [0.0, 0.5]], B=np.eye(2))


def four_state_system() -> LtiSystem:
    """Four states, two inputs, rank(B) = 2, eigenvalues {2, 3, 4, 5}."""
    A = [
        [1.0, 2.0, -2.0, 1.0],
        [1.0, 2.0, 2.0, -1.0],
        [-1.0, 1.0, 3.0, 1.0],
        [-6.0, 6.0, -6.0, 8.0],
    ]
    B = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.0, 1.0]]
    return LtiSystem(A=A, B=B)


def random_orthogonal(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_system(rng, n: int, m: int, radius: float = 0.95) -> LtiSystem:
    """Random dense system scaled to the given spectral radius."""
    A = rng.standard_normal((n, n))
    rho = max(np.abs(np.linalg.eigvals(A)))
    if rho > 0:
        A = A * (radius / rho)
    B = rng.standard_normal((n, m))
    return LtiSystem(A=A, B=B)


def random_real_simple_system(rng, n: int, m: int) -> LtiSystem:
    """Distinct real eigenvalues with distinct magnitudes, none near +-1.

    Powers of such a spectrum stay simple for every exponent, so these
    systems satisfy the sufficient conditions once the PBH test passes.
    """
    while True:
        mags = np.sort(rng.uniform(0.3, 1.7, size=n))
        if np.min(np.diff(mags)) < 0.05:
            continue
        if np.any(np.abs(mags - 1.0) < 0.05):
            continue
        signs = rng.choice([-1.0, 1.0], size=n)
        eigs = signs * mags
        if np.any(np.abs(eigs - 1.0) < 0.05):
            continue
        break
    basis = random_orthogonal(rng, n)
    A = basis @ np.diag(eigs) @ basis.T
    B = rng.standard_normal((n, m))
    return LtiSystem(A=A, B=B)


def random_unit_eigenvalue_system(rng, n: int, m: int) -> LtiSystem:
    """A system whose spectrum contains 1 (orthogonal similarity of a diagonal)."""
    eigs = rng.uniform(-1.8, 1.8, size=n)
    eigs[0] = 1.0
    basis = random_orthogonal(rng, n)
    A = basis @ np.diag(eigs) @ basis.T
    B = rng.standard_normal((n, m))
    return LtiSystem(A=A, B=B)


def feasible_task(rng, system: LtiSystem, scheme, b: int, regime: str, scale: float = 0.5):
    """A steering task whose target is exactly the simulated terminal state."""
    x0 = rng.standard_normal(system.n)
    if regime == "repetitive":
        w = scale * rng.standard_normal(scheme.latent_dim)
        latents = [w] * b
    else:
        latents = [scale * rng.standard_normal(scheme.latent_dim) for _ in range(b)]
    flat = np.vstack([unpack(w, scheme).reshape(scheme.h, scheme.m) for w in latents])
    traj = simulate(system, x0, flat)
    return SteeringTask(x0=x0, xf=traj.terminal, b=b, regime=regime)
