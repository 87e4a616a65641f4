"""Numerical tolerances used by analysis and design, with desk-scale defaults."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class Tolerances:
    """Tolerance knobs shared across the package.

    charge_balance: absolute per-channel bound on the block sum of inputs.
    terminal: absolute bound on the terminal-state error of a designed plan.
    reach: relative bound on the residual of the target displacement after
        projection onto the reachable column space.
    rank_slack: headroom factor in the SVD numeric-rank rule (see rank_cutoff).
    eig_sep: relative eigenvalue separation below which a spectrum is not
        considered simple.
    unit_modulus: tolerance on abs(r) - 1 when screening eigenvalue ratios.
    root_of_unity: tolerance on abs(r**k - 1) when searching for the order of
        an eigenvalue ratio, and in the spectral tests built on it.
    unit_eigenvalue: tolerance on abs(lambda - 1) for the eigenvalue-at-one test.
    max_order: largest ratio order searched when selecting a block length.
    """

    charge_balance: float = 1e-9
    terminal: float = 1e-6
    reach: float = 1e-8
    rank_slack: float = 100.0
    eig_sep: float = 1e-8
    unit_modulus: float = 1e-9
    root_of_unity: float = 1e-8
    unit_eigenvalue: float = 1e-8
    max_order: int = 64

    def rank_cutoff(self, shape) -> float:
        """Relative singular-value cutoff: max(rows, cols) * eps * rank_slack."""
        return max(shape) * _EPS * self.rank_slack

    def with_overrides(self, **kwargs) -> "Tolerances":
        """Copy with the given fields replaced."""
        return replace(self, **kwargs)


DEFAULT = Tolerances()
