"""Controllability analysis under the zero-net-charge constraint.

Walks the decidable conditions on three systems: the plane rotation
(complex spectrum, single input), a diagonal plant with real distinct
eigenvalues, and a plant with an eigenvalue at 1 that no block length
can rescue.
"""

import numpy as np

from cbcontrol import (
    LtiSystem,
    check_nonrepetitive_sufficient,
    check_real_spectrum_shortcut,
    pbh_controllable,
    select_h,
    unit_ratio_orders,
)

ROT = LtiSystem(
    A=[[-0.5, -np.sqrt(3) / 2], [np.sqrt(3) / 2, -0.5]], B=[[1.0], [0.0]]
)


def show(verdict):
    for reason in verdict.reasons:
        print(f"    [{'x' if reason.holds else ' '}] {reason.name}")
    print(f"    -> {verdict.controllable} (numeric rank {verdict.numeric_rank})")


print("== plane rotation, single input ==")
print("PBH controllable:", pbh_controllable(ROT).controllable)
orders = unit_ratio_orders(ROT)
print("eigenvalue-ratio orders:", [(o.i, o.j, o.order) for o in orders])
print("selected block length:", select_h(ROT), "(smallest length no order divides)")
for h in (2, 3, 4):
    print(f"  conditions at h = {h}:")
    show(check_nonrepetitive_sufficient(ROT, h))
print("note: h = 3 fails the simple-spectrum condition (A^3 = I) yet the")
print("numeric Gramian rank still certifies controllability; the sufficient")
print("conditions are one-sided.")

print("\n== real distinct spectrum ==")
diag = LtiSystem(A=np.diag([2.0, 0.5]), B=np.eye(2))
print("all-real shortcut certifies h = 3:", check_real_spectrum_shortcut(diag))
print("selected block length:", select_h(diag), "(no ratio is a root of unity)")

print("\n== eigenvalue at 1: unfixable ==")
stuck = LtiSystem(A=np.diag([1.0, 0.5]), B=np.eye(2))
show(check_nonrepetitive_sufficient(stuck, 2))
print("a left eigenvector at 1 pairs every stacked block to zero, so no")
print("charge-balanced input sequence moves that mode.")
