"""Block-to-block lifted dynamics, reachability matrices, and geometric sums.

Sampling the plant at block boundaries k = 0, h, 2h, ... turns the
constrained per-step problem into an unconstrained one in the latent
coordinates: x[(p+1)h] = Abar @ x[ph] + Bbar @ w[p], where Abar = A^h
and Bbar = S @ Q collects the effect of one stacked block through
S = [A^(h-1) B, ..., A B, B].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charge_balance import BlockScheme
from .errors import DimensionError, PreconditionError
from .system import LtiSystem, power


@dataclass(frozen=True, eq=False)
class LiftedSystem:
    """Block-boundary dynamics x[(p+1)h] = Abar @ x[ph] + Bbar @ w[p]."""

    system: LtiSystem
    scheme: BlockScheme
    S: np.ndarray
    Abar: np.ndarray
    Bbar: np.ndarray

    def __post_init__(self):
        for name in ("S", "Abar", "Bbar"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def h(self) -> int:
        return self.scheme.h

    @property
    def n(self) -> int:
        return self.system.n

    @property
    def latent_dim(self) -> int:
        return self.scheme.latent_dim


@dataclass(frozen=True, eq=False)
class GramianBundle:
    """Reachability matrix over b blocks and the Gramian G = Rb @ Rb.T."""

    Rb: np.ndarray
    G: np.ndarray
    b: int


def lift(system: LtiSystem, scheme: BlockScheme) -> LiftedSystem:
    """Assemble S, Abar = A^h, and Bbar = S @ Q for the given scheme."""
    if scheme.m != system.m:
        raise DimensionError(
            f"scheme is for {scheme.m} input channels, system has {system.m}"
        )
    blocks = [system.B]
    for _ in range(scheme.h - 1):
        blocks.append(system.A @ blocks[-1])
    S = np.hstack(blocks[::-1])
    Abar = power(system, scheme.h)
    return LiftedSystem(system=system, scheme=scheme, S=S, Abar=Abar, Bbar=S @ scheme.Q)


def reachability_matrix(lifted: LiftedSystem, b: int) -> GramianBundle:
    """Reachability matrix [Abar^(b-1) Bbar, ..., Bbar] and its Gramian."""
    b = int(b)
    if b < 1:
        raise PreconditionError(f"block horizon must be at least 1, got {b}")
    blocks = [lifted.Bbar]
    for _ in range(b - 1):
        blocks.append(lifted.Abar @ blocks[-1])
    Rb = np.hstack(blocks[::-1])
    G = Rb @ Rb.T
    G = 0.5 * (G + G.T)
    return GramianBundle(Rb=Rb, G=G, b=b)


def h_sum(lifted: LiftedSystem, b: int) -> np.ndarray:
    """Geometric matrix sum I + Abar + ... + Abar^(b-1).

    Accumulated Horner style (H <- H @ Abar + I), which stays in real
    arithmetic regardless of the spectrum.
    """
    b = int(b)
    if b < 1:
        raise PreconditionError(f"block horizon must be at least 1, got {b}")
    eye = np.eye(lifted.n)
    total = np.eye(lifted.n)
    for _ in range(b - 1):
        total = total @ lifted.Abar + eye
    return total
