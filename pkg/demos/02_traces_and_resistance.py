"""Schur-complement traces and the effective resistance metric.

Tracing a form onto a subset keeps exactly the energy visible from that
subset: the traced energy of boundary data equals the minimum energy over all
extensions, attained by the harmonic extension. For killing-free networks the
two-point trace gives the effective resistance, which is a metric.
"""

import numpy as np

from netforms import (
    Network,
    assemble,
    effective_resistance,
    evaluate,
    harmonic_extension,
    resistance_matrix,
    sup_formula_value,
    trace,
)

# --- series law: a path of two unit resistors looks like half a conductance --
path = assemble(Network(3, [(0, 1, 1.0), (1, 2, 1.0)]))
tr = trace(path, [0, 2])
print("path 0-1-2 traced onto {0, 2}:")
print(tr.traced_form.matrix)
print("effective resistance 0 <-> 2:", effective_resistance(path, 0, 2))

# --- the harmonic extension is the minimizer -------------------------------
g = harmonic_extension(tr, [1.0, 0.0])
print("\nharmonic extension of (1, 0):", g)
rng = np.random.default_rng(1)
random_energies = []
for _ in range(2000):
    h = g.copy()
    h[1] = rng.uniform(-1, 2)
    random_energies.append(evaluate(path, h))
print(f"E(harmonic) = {evaluate(path, g):.6f}   min over 2000 random interiors = {min(random_energies):.6f}")

# --- parallel law on the triangle ------------------------------------------
tri = assemble(Network(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]))
print("\nunit triangle resistance matrix (all pairs 2/3):")
print(resistance_matrix(tri))

# --- the variational formula: (u(x)-u(y))^2 / E(u) never exceeds R ----------
best = 0.0
for _ in range(5000):
    u = rng.standard_normal(3)
    best = max(best, sup_formula_value(tri, 0, 1, u))
print(f"\nsup over 5000 random u: {best:.6f} <= R = {effective_resistance(tri, 0, 1):.6f}")
u_star = harmonic_extension(trace(tri, [0, 1]), [1.0, 0.0])
print("attained exactly by the harmonic extension:", sup_formula_value(tri, 0, 1, u_star))
