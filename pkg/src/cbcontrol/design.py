"""Minimum-energy charge-balanced steering plans.

The closed-form laws act on the lifted block dynamics. With distinct
blocks, the displacement d = x_f - Abar^b x_0 is pulled back through the
pseudoinverse of the b-block Gramian:

    w[p] = Bbar^T (Abar^T)^(b-1-p) G^+ d

With identical blocks a single latent vector solves the geometric-sum
equation H_b Bbar w = d in the minimum-norm sense. The pseudoinverses
are SVD truncations with the shared rank rule, so both laws return the
minimum-norm minimizer when the reachable space is rank deficient.

A stacked least-squares solver over the raw per-step inputs
(oracle_stacked_ls) provides an independent optimality cross-check; it
never touches the lifted objects.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charge_balance import BlockScheme, pack, unpack
from .errors import DimensionError, InfeasibleTaskError, PreconditionError, ReachabilityError
from .lifting import LiftedSystem, h_sum, reachability_matrix
from .numeric import min_norm_solve
from .system import LtiSystem, Trajectory, simulate
from .tolerances import DEFAULT, Tolerances

REGIMES = ("non-repetitive", "repetitive")


@dataclass(frozen=True, eq=False)
class SteeringTask:
    """Steer from x0 to xf at the boundary of block b, in one regime."""

    x0: np.ndarray
    xf: np.ndarray
    b: int
    regime: str

    def __post_init__(self):
        x0 = np.array(self.x0, dtype=float).reshape(-1)
        xf = np.array(self.xf, dtype=float).reshape(-1)
        if x0.size != xf.size:
            raise DimensionError(
                f"x0 has length {x0.size} but xf has length {xf.size}"
            )
        if int(self.b) < 1:
            raise PreconditionError(f"block horizon must be at least 1, got {self.b}")
        if self.regime not in REGIMES:
            raise PreconditionError(
                f"regime must be one of {REGIMES}, got {self.regime!r}"
            )
        x0.setflags(write=False)
        xf.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "xf", xf)
        object.__setattr__(self, "b", int(self.b))


@dataclass(frozen=True, eq=False)
class ControlPlan:
    """A designed input sequence, in block, latent, and per-step form.

    energy is the total squared norm over all blocks; residual is the
    terminal-state error of the simulated rollout.
    """

    blocks: tuple
    latent: tuple
    flat_inputs: np.ndarray
    energy: float
    residual: float


@dataclass(frozen=True, eq=False)
class PlanVerification:
    """Simulation-based report on a plan; see verify_plan."""

    terminal_state: np.ndarray
    terminal_error: float
    imbalances: np.ndarray
    step_energies: np.ndarray
    passed: bool


def _require_regime(task: SteeringTask, expected: str):
    if task.regime != expected:
        raise PreconditionError(
            f"task regime is {task.regime!r}, expected {expected!r}"
        )


def _displacement(lifted: LiftedSystem, task: SteeringTask) -> np.ndarray:
    if task.x0.size != lifted.n:
        raise DimensionError(
            f"task states have length {task.x0.size}, system has {lifted.n}"
        )
    reach_b = np.linalg.matrix_power(lifted.Abar, task.b)
    return task.xf - reach_b @ task.x0


def _flatten(blocks, scheme: BlockScheme) -> np.ndarray:
    return np.vstack([U.reshape(scheme.h, scheme.m) for U in blocks])


def _build_plan(system: LtiSystem, scheme: BlockScheme, task: SteeringTask, latents) -> ControlPlan:
    blocks = tuple(unpack(w, scheme) for w in latents)
    flat = _flatten(blocks, scheme)
    traj = simulate(system, task.x0, flat)
    energy = float(sum(U @ U for U in blocks))
    residual = float(np.linalg.norm(traj.terminal - task.xf))
    return ControlPlan(
        blocks=blocks,
        latent=tuple(np.asarray(w, dtype=float) for w in latents),
        flat_inputs=flat,
        energy=energy,
        residual=residual,
    )


def design_nonrepetitive(
    lifted: LiftedSystem, task: SteeringTask, tol: Tolerances = DEFAULT
) -> ControlPlan:
    """Minimum-energy plan with distinct blocks.

    Raises ReachabilityError when the displacement lies outside the
    column space of the b-block Gramian (relative residual above the
    reach tolerance); the error carries the least-squares residual and
    the Gramian rank.
    """
    _require_regime(task, "non-repetitive")
    d = _displacement(lifted, task)
    bundle = reachability_matrix(lifted, task.b)
    core, rank, _, residual = min_norm_solve(bundle.G, d, tol)
    dnorm = float(np.linalg.norm(d))
    if dnorm > 0.0 and residual > tol.reach * dnorm:
        raise ReachabilityError(
            f"target displacement is not reachable in {task.b} blocks: "
            f"residual {residual:.3e} (relative {residual / dnorm:.3e}), "
            f"Gramian rank {rank} of {lifted.n}",
            residual=residual,
            rank=rank,
        )
    # back-propagated adjoint states (Abar^T)^q core for q = 0 .. b-1
    adjoint = [core]
    for _ in range(task.b - 1):
        adjoint.append(lifted.Abar.T @ adjoint[-1])
    latents = [lifted.Bbar.T @ adjoint[task.b - 1 - p] for p in range(task.b)]
    return _build_plan(lifted.system, lifted.scheme, task, latents)


def design_repetitive(
    lifted: LiftedSystem, task: SteeringTask, tol: Tolerances = DEFAULT
) -> ControlPlan:
    """Minimum-energy plan applying one identical block b times.

    Solves H_b Bbar w = d in the minimum-norm sense; by the isometry of
    the kernel basis the total energy is b * ||w||^2.
    """
    _require_regime(task, "repetitive")
    d = _displacement(lifted, task)
    gain = h_sum(lifted, task.b) @ lifted.Bbar
    w, rank, _, residual = min_norm_solve(gain, d, tol)
    dnorm = float(np.linalg.norm(d))
    if dnorm > 0.0 and residual > tol.reach * dnorm:
        raise ReachabilityError(
            f"target displacement is not reachable with identical blocks: "
            f"residual {residual:.3e} (relative {residual / dnorm:.3e}), "
            f"rank {rank} of {lifted.n}",
            residual=residual,
            rank=rank,
        )
    return _build_plan(lifted.system, lifted.scheme, task, [w] * task.b)


def oracle_stacked_ls(
    system: LtiSystem, scheme: BlockScheme, task: SteeringTask, tol: Tolerances = DEFAULT
) -> ControlPlan:
    """Independent optimality oracle over the raw per-step inputs.

    Minimizes the Euclidean norm of the full stacked input vector subject
    to the unrolled terminal equality, the per-block zero-sum rows, and,
    in the repetitive regime, equality of every block with the first.
    Solved as one minimum-norm least-squares system after row
    equilibration (which leaves the solution set of a consistent system
    unchanged). Shares no code path with the closed-form laws.
    """
    if scheme.m != system.m:
        raise DimensionError(
            f"scheme is for {scheme.m} input channels, system has {system.m}"
        )
    if task.x0.size != system.n:
        raise DimensionError(
            f"task states have length {task.x0.size}, system has {system.n}"
        )
    n, m, h, b = system.n, system.m, scheme.h, task.b
    steps = b * h
    block_dim = scheme.block_dim

    # terminal rows: [A^(steps-1) B, ..., A B, B] u = xf - A^steps x0
    powers = [system.B]
    for _ in range(steps - 1):
        powers.append(system.A @ powers[-1])
    terminal = np.hstack(powers[::-1])
    d_full = task.xf - np.linalg.matrix_power(system.A, steps) @ task.x0

    balance = np.kron(np.eye(b), scheme.R)
    rows = [terminal, balance]
    rhs = [d_full, np.zeros(b * m)]
    if task.regime == "repetitive":
        ties = np.zeros(((b - 1) * block_dim, steps * m))
        eye_block = np.eye(block_dim)
        for p in range(1, b):
            sl = slice((p - 1) * block_dim, p * block_dim)
            ties[sl, 0:block_dim] = -eye_block
            ties[sl, p * block_dim : (p + 1) * block_dim] = eye_block
        rows.append(ties)
        rhs.append(np.zeros((b - 1) * block_dim))
    lhs = np.vstack(rows)
    target = np.concatenate(rhs)

    row_norms = np.linalg.norm(lhs, axis=1)
    row_norms[row_norms == 0.0] = 1.0
    scaled_lhs = lhs / row_norms[:, None]
    scaled_target = target / row_norms
    u, _, _, residual = min_norm_solve(scaled_lhs, scaled_target, tol)
    if residual > tol.reach * max(1.0, float(np.linalg.norm(scaled_target))):
        raise InfeasibleTaskError(
            f"stacked equality system is infeasible: scaled residual {residual:.3e}",
            residual=residual,
        )

    flat = u.reshape(steps, m)
    blocks = tuple(u[p * block_dim : (p + 1) * block_dim] for p in range(b))
    latent = tuple(pack(U, scheme, tol) for U in blocks)
    traj = simulate(system, task.x0, flat)
    return ControlPlan(
        blocks=blocks,
        latent=latent,
        flat_inputs=flat,
        energy=float(u @ u),
        residual=float(np.linalg.norm(traj.terminal - task.xf)),
    )


def verify_plan(
    system: LtiSystem,
    scheme: BlockScheme,
    task: SteeringTask,
    plan: ControlPlan,
    tol: Tolerances = DEFAULT,
) -> PlanVerification:
    """Simulate a plan and report terminal error, imbalance, and energy.

    The report passes iff the terminal error is within the terminal
    tolerance and every per-block imbalance is within the charge-balance
    tolerance. Never raises; this is a report, not a gate.
    """
    traj = simulate(system, task.x0, plan.flat_inputs)
    terminal_error = float(np.linalg.norm(traj.terminal - task.xf))
    imbalances = np.array(
        [float(np.abs(scheme.R @ U).max()) for U in plan.blocks]
    )
    step_energies = np.sum(np.asarray(plan.flat_inputs) ** 2, axis=1)
    passed = terminal_error <= tol.terminal and bool(
        np.all(imbalances <= tol.charge_balance)
    )
    return PlanVerification(
        terminal_state=traj.terminal,
        terminal_error=terminal_error,
        imbalances=imbalances,
        step_energies=step_energies,
        passed=passed,
    )


def rollout(system: LtiSystem, task: SteeringTask, plan: ControlPlan) -> Trajectory:
    """Full per-step trajectory of a plan from the task's initial state."""
    return simulate(system, task.x0, plan.flat_inputs)
