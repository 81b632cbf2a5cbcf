"""Embedding points by generator values and pushing structure to the quotient.

A finite algebra of bounded functions maps each point to its tuple of
generator values. Points the generators cannot tell apart collapse into one
class; measures, functions, and forms all descend to the quotient, with mass
and L2 norms preserved.
"""

import numpy as np

from netforms import (
    AlgebraSpec,
    AtomicMeasure,
    Network,
    assemble,
    embed,
    l2_isometry_check,
    pushforward,
    spectrum_closure_estimate,
    transfer_form,
    vanishes_nowhere,
)

# --- a generator that cannot separate two points -----------------------------
spec = AlgebraSpec(["p", "q", "r"], [[1.0, 1.0, 2.0]])
emb = embed(spec)
print("classes:", emb.classes, " separated:", emb.separated)
print("vanishes nowhere:", bool(vanishes_nowhere(spec)))

mu = AtomicMeasure([0.25, 0.75, 1.0])
push = pushforward(mu, emb)
print("pushforward atoms:", push.atoms, " total preserved exactly:", push.total == mu.total)

f = np.array([3.0, 3.0, -1.0])  # constant on the merged class
lhs, rhs, diff = l2_isometry_check(f, mu, emb)
print(f"L2 isometry: upstairs {lhs:.12f} == quotient {rhs:.12f} (diff {diff:.1e})")

# --- the form descends: merged endpoints add their conductances ---------------
A = assemble(Network(3, [(0, 2, 1.0), (1, 2, 1.0)]))
print("\nquotient form (two unit edges merge into conductance 2):")
print(transfer_form(A, emb).matrix)

# --- closure diagnostic: where does the image cloud accumulate? ---------------
values = np.array([1.0 / k for k in range(1, 1001)])
cloud = AlgebraSpec(range(1000), values[None, :])
est = spectrum_closure_estimate(cloud, epsilon=0.01)
flagged = est.net_points[est.flagged].ravel()
print("\nimage cloud of f(n) = 1/n, epsilon 0.01:")
print(f"  net size {len(est.net_points)}, flagged candidate limit points near {np.round(flagged, 4)}")
print("  (the accumulation at 0 is the truncation shadow of a compactification point)")
