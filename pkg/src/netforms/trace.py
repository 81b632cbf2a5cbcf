"""Traces of forms onto vertex subsets and the effective resistance metric.

The trace of a form onto a subset U is the form whose value at a boundary
function f is the minimum energy over all extensions of f to the whole vertex
set; it is computed as the Schur complement of the interior block. The unique
minimizer is the harmonic extension, and for killing-free connected networks
the two-point trace defines the effective resistance metric.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .errors import (
    InfiniteResistanceError,
    SingularBlockError,
    UnsupportedRegimeError,
    ValidationError,
)
from .network import FormMatrix, components, evaluate, killing_vector, _as_vector

__all__ = [
    "TraceResult",
    "trace",
    "harmonic_extension",
    "effective_resistance",
    "resistance_matrix",
    "sup_formula_value",
]

#: Reciprocal-condition estimate below which the interior block is treated as
#: singular (a floating component).
SINGULAR_RCOND = 1e-13

#: Relative tolerance on row sums below which a form counts as killing-free.
CONSERVATIVE_RELTOL = 1e-10


@dataclass(frozen=True, eq=False)
class TraceResult:
    """Trace of a form onto a subset.

    Attributes
    ----------
    subset : ndarray
        The ordered index list U.
    traced_form : FormMatrix
        The Schur complement A_UU - A_UW A_WW^{-1} A_WU, indexed by U order.
    extension_operator : ndarray, shape (|W|, |U|)
        Maps boundary values to the interior values of the energy minimizer;
        W is the complement of U in ascending order.
    """

    subset: np.ndarray
    traced_form: FormMatrix
    extension_operator: np.ndarray

    @property
    def n_total(self) -> int:
        return len(self.subset) + self.extension_operator.shape[0]

    def complement(self) -> np.ndarray:
        mask = np.ones(self.n_total, dtype=bool)
        mask[self.subset] = False
        return np.flatnonzero(mask)


def _check_subset(U, n: int) -> np.ndarray:
    U = np.asarray(U, dtype=int)
    if U.ndim != 1 or U.size == 0:
        raise ValidationError("subset must be a nonempty 1-d index list")
    if len(set(U.tolist())) != U.size:
        raise ValidationError("subset contains duplicate indices")
    if np.any(U < 0) or np.any(U >= n):
        raise ValidationError(f"subset index out of range for n={n}")
    return U


def _offending_components(A: FormMatrix, U: np.ndarray) -> list[list[int]]:
    """Components of the network that neither meet U nor carry killing."""
    in_U = np.zeros(A.n, dtype=bool)
    in_U[U] = True
    kappa = killing_vector(A)
    scale = max(1.0, float(np.max(np.abs(A.matrix))))
    bad = []
    for comp in components(A):
        if np.any(in_U[comp]):
            continue
        if np.sum(kappa[comp]) <= CONSERVATIVE_RELTOL * scale:
            bad.append([int(x) for x in comp])
    return bad


def trace(A: FormMatrix, subset) -> TraceResult:
    """Trace (harmonic restriction) of a form onto a subset of vertices.

    Raises
    ------
    SingularBlockError
        If the interior block is singular, which happens exactly when some
        component is disconnected from the subset and carries no killing.
    """
    U = _check_subset(subset, A.n)
    mask = np.ones(A.n, dtype=bool)
    mask[U] = False
    W = np.flatnonzero(mask)
    M = A.matrix
    A_UU = M[np.ix_(U, U)]
    if W.size == 0:
        return TraceResult(
            subset=U,
            traced_form=FormMatrix(A_UU),
            extension_operator=np.zeros((0, U.size)),
        )
    A_WW = M[np.ix_(W, W)]
    A_WU = M[np.ix_(W, U)]

    def _singular(rcond):
        bad = _offending_components(A, U)
        if bad:
            detail = f"components disconnected from the subset with no killing: {bad}"
        else:
            detail = "interior block is numerically singular"
        raise SingularBlockError(f"{detail} (rcond estimate {rcond:.3e})")

    try:
        cho = sla.cho_factor(A_WW, lower=True)
    except np.linalg.LinAlgError:
        _singular(0.0)
    anorm = np.linalg.norm(A_WW, 1)
    if anorm > 0:
        pocon = lapack.get_lapack_funcs(("pocon",), (A_WW,))[0]
        rcond, info = pocon(cho[0], anorm, uplo=b"L")
        if info != 0 or rcond < SINGULAR_RCOND:
            _singular(rcond)
    H = -sla.cho_solve(cho, A_WU)
    S = A_UU + M[np.ix_(U, W)] @ H
    S = (S + S.T) / 2.0
    return TraceResult(subset=U, traced_form=FormMatrix(S), extension_operator=H)


def harmonic_extension(tr: TraceResult, f) -> np.ndarray:
    """Extend boundary values to the unique energy minimizer on all vertices.

    The result agrees with ``f`` exactly on the subset and carries the
    interior values ``H @ f``.
    """
    fv = _as_vector(f, len(tr.subset), "boundary values")
    g = np.empty(tr.n_total)
    g[tr.subset] = fv
    g[tr.complement()] = tr.extension_operator @ fv
    return g


def _require_conservative(A: FormMatrix, op: str) -> None:
    kappa = killing_vector(A)
    scale = max(1.0, float(np.max(np.abs(A.matrix))))
    if np.any(np.abs(kappa) > CONSERVATIVE_RELTOL * scale):
        i = int(np.argmax(np.abs(kappa)))
        raise UnsupportedRegimeError(
            f"{op} is defined only for killing-free forms; row {i} has killing weight {float(kappa[i])!r}"
        )


def effective_resistance(A: FormMatrix, x: int, y: int) -> float:
    """Effective resistance between two vertices of a killing-free form.

    Normative definition: the two-point trace onto {x, y} is a single edge of
    conductance c, and R(x, y) = 1/c.
    """
    x, y = int(x), int(y)
    if x == y:
        raise ValidationError("effective resistance requires two distinct vertices")
    if not (0 <= x < A.n and 0 <= y < A.n):
        raise ValidationError(f"vertex index out of range for n={A.n}")
    _require_conservative(A, "effective resistance")
    for comp in components(A):
        if x in comp:
            if y not in comp:
                raise InfiniteResistanceError(
                    f"vertices {x} and {y} lie in different components; resistance is infinite"
                )
            break
    S = trace(A, [x, y]).traced_form.matrix
    c_eff = -S[0, 1]
    if c_eff <= 0.0:
        raise InfiniteResistanceError(
            f"two-point trace between {x} and {y} has no positive conductance"
        )
    return 1.0 / c_eff


def resistance_matrix(A: FormMatrix) -> np.ndarray:
    """All-pairs effective resistance matrix of a connected killing-free form.

    Computed through the pseudoinverse identity
    ``R(x, y) = M+_xx + M+_yy - 2 M+_xy``; agrees with the two-point trace
    definition to within rounding.
    """
    _require_conservative(A, "resistance matrix")
    comps = components(A)
    if len(comps) > 1:
        raise InfiniteResistanceError(
            f"network is disconnected; components: {[c.tolist() for c in comps]}"
        )
    Mp = np.linalg.pinv(A.matrix, hermitian=True)
    d = np.diag(Mp)
    R = d[:, None] + d[None, :] - 2.0 * Mp
    R = (R + R.T) / 2.0
    np.fill_diagonal(R, 0.0)
    return R


def sup_formula_value(A: FormMatrix, x: int, y: int, u) -> float:
    """Value (u(x) - u(y))^2 / E(u, u) of the variational resistance formula.

    Never exceeds the effective resistance; the harmonic extension of the
    indicator boundary data attains it.
    """
    uv = _as_vector(u, A.n, "u")
    energy = evaluate(A, uv, uv)
    if energy <= 0.0:
        raise ValidationError("E(u, u) = 0; the resistance ratio is undefined for this u")
    diff = uv[int(x)] - uv[int(y)]
    return float(diff * diff / energy)
