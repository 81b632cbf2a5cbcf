"""Per-vertex energy measures of functions under a Markov form.

The energy measure of f assigns to each vertex the mass

    gamma_f(x) = 1/2 sum_y c_xy (f(x) - f(y))^2 + 1/2 kappa_x f(x)^2,

the unique per-point masses satisfying the defining identity
2 sum_x phi(x) gamma_f(x) = 2 E(phi f, f) - E(phi, f^2) for every phi. Both
the closed form and the defining identity are computed and cross-asserted;
the closed form is the numerically stable normative output because the
defining identity involves cancellation. The total mass satisfies
sum_x gamma_f(x) = E(f, f) - 1/2 sum_x kappa_x f(x)^2.

The decay demo exhibits the one phenomenon that makes these measures
interesting on countable approximation sequences: on the dyadic interval the
energy of the linear function is 1 at every level while the mass any fixed
finite point set carries halves per level, so in the limit no point set
supports the energy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError
from .gelfand import EmbeddingResult
from .network import FormMatrix, conductance_matrix, is_markov, killing_vector, _readonly
from .sequences import build_dyadic_interval

__all__ = [
    "EnergyMeasure",
    "energy_measure",
    "energy_measure_identity",
    "pushforward_gamma",
    "counterexample_demo",
]

#: Masses more negative than this (relative) are a hard error; within it they
#: are clamped to zero.
CLAMP_RELTOL = 1e-14

#: Cross-check tolerance between the closed form and the defining identity.
IDENTITY_RELTOL = 1e-12

#: Deepest level the decay demo will build (matches the dyadic size guard).
MAX_DEMO_LEVEL = 20


@dataclass(frozen=True, eq=False)
class EnergyMeasure:
    """Nonnegative per-vertex masses gamma_f({x}) with their total."""

    masses: np.ndarray
    total: float = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        object.__setattr__(self, "masses", _readonly(m))
        object.__setattr__(self, "total", float(np.sum(m)))

    @property
    def n(self) -> int:
        return self.masses.shape[0]


def _scale(A: FormMatrix, f: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(A.matrix)))) * max(1.0, float(np.max(np.abs(f)))) ** 2


def energy_measure(A: FormMatrix, f) -> EnergyMeasure:
    """Energy measure of f, cross-checked against the defining identity."""
    report = is_markov(A)
    if not report:
        raise ValidationError(f"matrix is not Markov: {report.violations[0]}")
    fv = np.asarray(f, dtype=float)
    if fv.shape != (A.n,):
        raise ValidationError(f"f must be a vector of length {A.n}")
    C = conductance_matrix(A)
    kappa = killing_vector(A)
    diffs = fv[:, None] - fv[None, :]
    closed = 0.5 * np.sum(C * diffs * diffs, axis=1) + 0.5 * kappa * fv * fv

    # defining identity with indicator test functions:
    # gamma(x) = E(1_x f, f) - 1/2 E(1_x, f^2) = f(x) (A f)(x) - 1/2 (A f^2)(x)
    Af = A.matrix @ fv
    Af2 = A.matrix @ (fv * fv)
    via_identity = fv * Af - 0.5 * Af2

    s = _scale(A, fv)
    if np.max(np.abs(closed - via_identity)) > IDENTITY_RELTOL * s * A.n:
        raise NumericalError(
            "energy measure cross-check failed: closed form and defining identity "
            f"disagree by {float(np.max(np.abs(closed - via_identity)))!r}"
        )
    neg = closed < 0.0
    if np.any(closed < -CLAMP_RELTOL * s):
        i = int(np.argmin(closed))
        raise NumericalError(
            f"energy mass at vertex {i} is {float(closed[i])!r} < 0 beyond tolerance; "
            "a non-Markov input slipped through"
        )
    closed = np.where(neg, 0.0, closed)
    return EnergyMeasure(masses=closed)


def energy_measure_identity(A: FormMatrix, f, phi) -> tuple[float, float]:
    """Both sides of 2 sum phi d(gamma_f) = 2 E(phi f, f) - E(phi, f^2)."""
    fv = np.asarray(f, dtype=float)
    pv = np.asarray(phi, dtype=float)
    if fv.shape != (A.n,) or pv.shape != (A.n,):
        raise ValidationError(f"f and phi must be vectors of length {A.n}")
    gamma = energy_measure(A, fv)
    lhs = 2.0 * float(np.sum(pv * gamma.masses))
    rhs = 2.0 * float((pv * fv) @ A.matrix @ fv) - float(pv @ A.matrix @ (fv * fv))
    return lhs, rhs


def pushforward_gamma(gamma: EnergyMeasure, emb: EmbeddingResult) -> EnergyMeasure:
    """Sum the per-vertex masses over equivalence classes.

    When the function generating ``gamma`` is class-constant this equals the
    energy measure of the quotient function under the transferred form.
    """
    if gamma.n != emb.n_points:
        raise ValidationError(
            f"energy measure has {gamma.n} masses but the embedding has {emb.n_points} points"
        )
    atoms = np.array([float(np.sum(gamma.masses[list(c)])) for c in emb.classes])
    return EnergyMeasure(masses=atoms)


def counterexample_demo(n_max: int, points=(0.0, 0.5, 1.0), n_min: int | None = None) -> np.ndarray:
    """Energy vs. point-set mass table for the linear function on dyadic levels.

    Returns rows (level, E_n(f), gamma_n(f)(S)) for f(x) = x on the dyadic
    interval sequence. The energy column is constantly 1 while the mass of the
    fixed set S halves per level: the discrete shadow of energy escaping every
    countable point set in the limit.
    """
    pts = [float(s) for s in points]
    if not pts:
        raise ValidationError("the point set S must be nonempty")
    for s in pts:
        if not (0.0 <= s <= 1.0):
            raise ValidationError(f"point {s} lies outside [0, 1]")
    if n_min is None:
        n_min = 0
        for s in pts:
            level = 0
            while s * 2**level != round(s * 2**level):
                level += 1
                if level > MAX_DEMO_LEVEL:
                    raise ValidationError(
                        f"point {s} is not a dyadic point of any level <= {MAX_DEMO_LEVEL}"
                    )
            n_min = max(n_min, level)
    n_min, n_max = int(n_min), int(n_max)
    if n_max < n_min:
        raise ValidationError(f"n_max = {n_max} is below the coarsest level {n_min}")
    for s in pts:
        if s * 2**n_min != round(s * 2**n_min):
            raise ValidationError(
                f"point {s} is not contained in the coarsest level {n_min}"
            )

    seq = build_dyadic_interval(n_max)
    rows = np.zeros((n_max - n_min + 1, 3))
    for r, n in enumerate(range(n_min, n_max + 1)):
        A = seq.form(n)
        f = np.array(seq.networks[n].vertices, dtype=float)
        gamma = energy_measure(A, f)
        idx = [int(round(s * 2**n)) for s in pts]
        rows[r] = (n, float(f @ A.matrix @ f), float(np.sum(gamma.masses[idx])))
    return rows
