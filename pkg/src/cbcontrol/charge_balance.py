"""Zero-net-charge block constraint: constraint matrix, kernel basis, coordinates.

Inputs are grouped into blocks of h consecutive steps, and within each
block every input channel must sum to zero. Stacking one block into a
vector U in R^(m*h), the constraint reads R @ U = 0 with
R = [I_m  I_m ... I_m]. An orthonormal basis Q of the null space of R
turns constrained blocks into free latent coordinates w through U = Q @ w,
and the orthonormality makes the map an isometry: ||U|| = ||w||.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChargeBalanceError, DimensionError, PreconditionError
from .tolerances import DEFAULT, Tolerances

_BASIS_ATOL = 1e-12


def zero_sum_basis(h: int) -> np.ndarray:
    """Orthonormal h x (h-1) basis of the zero-column-sum subspace of R^h.

    Columns are the modified Gram-Schmidt orthonormalization, processed
    left to right, of the difference vectors e1 - e2, e2 - e3, ...,
    e(h-1) - eh. The construction is deterministic, so schemes are
    reproducible across runs and platforms.
    """
    if h < 2:
        raise PreconditionError("charge balance needs at least two steps per block")
    basis = np.zeros((h, h - 1))
    for i in range(h - 1):
        v = np.zeros(h)
        v[i] = 1.0
        v[i + 1] = -1.0
        for j in range(i):
            v -= (basis[:, j] @ v) * basis[:, j]
        basis[:, i] = v / np.linalg.norm(v)
    return basis


@dataclass(frozen=True, eq=False)
class BlockScheme:
    """Charge-balance data for blocks of h steps on m input channels.

    R is the m x (m*h) per-channel block-sum matrix and Q is an
    (m*h) x (m*(h-1)) orthonormal basis of Ker(R). Any Q satisfying the
    invariants is accepted, so recombined bases Q @ Theta (Theta
    orthogonal) can be used interchangeably with the canonical one.
    """

    h: int
    m: int
    R: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        if self.h < 2:
            raise PreconditionError("charge balance needs at least two steps per block")
        if self.m < 1:
            raise PreconditionError(f"input dimension must be positive, got {self.m}")
        R = np.array(self.R, dtype=float)
        Q = np.array(self.Q, dtype=float)
        if R.shape != (self.m, self.m * self.h):
            raise DimensionError(f"R must be {self.m} x {self.m * self.h}, got {R.shape}")
        if Q.shape != (self.m * self.h, self.m * (self.h - 1)):
            raise DimensionError(
                f"Q must be {self.m * self.h} x {self.m * (self.h - 1)}, got {Q.shape}"
            )
        gram = Q.T @ Q
        if np.abs(gram - np.eye(Q.shape[1])).max() > _BASIS_ATOL:
            raise ValueError("Q columns are not orthonormal")
        if np.abs(R @ Q).max() > _BASIS_ATOL:
            raise ValueError("Q columns do not lie in the null space of R")
        R.setflags(write=False)
        Q.setflags(write=False)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "Q", Q)

    @property
    def block_dim(self) -> int:
        """Length of one stacked block vector U."""
        return self.m * self.h

    @property
    def latent_dim(self) -> int:
        """Length of one latent coordinate vector w."""
        return self.m * (self.h - 1)


def build_scheme(h: int, m: int) -> BlockScheme:
    """Canonical scheme for block length h and m input channels.

    For h = 2 the kernel basis is exactly [I_m; -I_m] / sqrt(2). For
    larger h it is V kron I_m with V = zero_sum_basis(h), which keeps the
    channels decoupled inside the basis.
    """
    if h < 2:
        raise PreconditionError("charge balance needs at least two steps per block")
    if m < 1:
        raise PreconditionError(f"input dimension must be positive, got {m}")
    R = np.kron(np.ones((1, h)), np.eye(m))
    Q = np.kron(zero_sum_basis(h), np.eye(m))
    return BlockScheme(h=h, m=m, R=R, Q=Q)


def pack(U, scheme: BlockScheme, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Latent coordinates w = Q^T @ U of a charge-balanced block.

    Raises ChargeBalanceError, reporting the per-channel imbalance, when
    R @ U exceeds the charge-balance tolerance on any channel.
    """
    U = np.asarray(U, dtype=float).reshape(-1)
    if U.size != scheme.block_dim:
        raise DimensionError(f"U has length {U.size}, expected {scheme.block_dim}")
    imbalance = scheme.R @ U
    worst = float(np.abs(imbalance).max())
    if worst > tol.charge_balance:
        raise ChargeBalanceError(
            "block is not charge balanced: per-channel imbalance "
            f"{imbalance.tolist()} exceeds {tol.charge_balance:g}",
            imbalance=imbalance,
        )
    return scheme.Q.T @ U


def unpack(w, scheme: BlockScheme) -> np.ndarray:
    """Stacked block U = Q @ w; satisfies R @ U = 0 and ||U|| = ||w||."""
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.size != scheme.latent_dim:
        raise DimensionError(f"w has length {w.size}, expected {scheme.latent_dim}")
    return scheme.Q @ w


@dataclass(frozen=True, eq=False)
class BlockInput:
    """One charge-balanced block stored in both coordinates: U = Q @ w."""

    U: np.ndarray
    w: np.ndarray

    @classmethod
    def from_latent(cls, w, scheme: BlockScheme) -> "BlockInput":
        w = np.asarray(w, dtype=float).reshape(-1)
        return cls(U=unpack(w, scheme), w=w)

    @classmethod
    def from_stacked(cls, U, scheme: BlockScheme, tol: Tolerances = DEFAULT) -> "BlockInput":
        U = np.asarray(U, dtype=float).reshape(-1)
        return cls(U=U, w=pack(U, scheme, tol))
