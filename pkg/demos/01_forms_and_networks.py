"""Finite Dirichlet forms from weighted networks.

A network (edges with conductances, optional per-vertex killing) determines a
symmetric form matrix A with E(f, g) = f^T A g. This script builds a few
small networks, evaluates their energies, and shows the Markov property:
clamping a function to [0, 1] never increases its energy.
"""

import numpy as np

from netforms import Network, assemble, evaluate, is_markov, unit_contraction

# --- a single resistor ----------------------------------------------------
net = Network(2, [(0, 1, 1.0)])
A = assemble(net)
print("single unit edge, form matrix:")
print(A.matrix)
print("E(indicator) =", evaluate(A, [1.0, 0.0]))

# --- adding killing makes constants cost energy ----------------------------
net_k = Network(2, [(0, 1, 1.0)], killing=[1.0, 2.0])
A_k = assemble(net_k)
print("\nwith killing (1, 2):")
print(A_k.matrix)
print("E(constant 1) =", evaluate(A_k, [1.0, 1.0]), "(killing mass shows up)")

# --- the Markov property ----------------------------------------------------
rng = np.random.default_rng(0)
print("\nclamping to [0,1] never increases energy:")
for _ in range(5):
    u = rng.uniform(-2.0, 3.0, 2)
    print(f"  E(u) = {evaluate(A_k, u):8.4f}   E(clamped u) = {evaluate(A_k, unit_contraction(u)):8.4f}")

# --- is_markov flags sign violations ---------------------------------------
from netforms import FormMatrix

bad = FormMatrix(np.array([[1.0, 0.5], [0.5, 1.0]]))
report = is_markov(bad)
print("\npositive off-diagonal rejected:", report.violations[0])
