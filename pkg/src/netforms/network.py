"""Finite symmetric Dirichlet forms on weighted networks.

A network is a finite weighted graph with nonnegative per-vertex killing
weights. Its form matrix is the graph Laplacian plus the diagonal killing
matrix, so that

    E(f, g) = f^T A g
            = sum_{x<y} c_xy (f(x) - f(y)) (g(x) - g(y)) + sum_x kappa_x f(x) g(x).

Functions on the vertex set are plain 1-d numpy arrays indexed by the vertex
order of the owning network. All container types are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = [
    "Network",
    "FormMatrix",
    "AtomicMeasure",
    "MarkovReport",
    "assemble",
    "evaluate",
    "unit_contraction",
    "truncate_one",
    "is_markov",
    "conductance_matrix",
    "killing_vector",
    "components",
    "form_to_csv",
]

#: Default relative tolerance for sign/symmetry checks on dense matrices.
DEFAULT_RELTOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


def _as_vector(values, n: int, what: str) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    if v.shape != (n,):
        raise ValidationError(f"{what} must be a vector of length {n}, got shape {v.shape}")
    return v


class Network:
    """Finite weighted graph with killing weights.

    Parameters
    ----------
    vertices : int or sequence
        Vertex labels, or a count (labels then default to ``0..n-1``).
        Labels are metadata only; all indexing is positional.
    edges : iterable of (u, v, c)
        Undirected edges with strictly positive conductance ``c``.
        Self-loops and duplicate unordered pairs are rejected.
    killing : sequence, optional
        Nonnegative killing weight per vertex; defaults to zeros.
    """

    __slots__ = ("vertices", "edges", "killing")

    def __init__(self, vertices, edges=(), killing=None):
        if isinstance(vertices, (int, np.integer)):
            labels = tuple(range(int(vertices)))
        else:
            labels = tuple(vertices)
        n = len(labels)
        if n == 0:
            raise ValidationError("network must have at least one vertex")

        canon = []
        seen = {}
        for k, e in enumerate(edges):
            try:
                u, v, c = e
            except (TypeError, ValueError):
                raise ValidationError(f"edge #{k}: expected a (u, v, c) triple, got {e!r}") from None
            u, v = int(u), int(v)
            if u == v:
                raise ValidationError(f"edge #{k}: self-loop at vertex {u} is not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge #{k}: endpoint out of range (u={u}, v={v}, n={n})")
            c = float(c)
            if not np.isfinite(c) or c <= 0.0:
                raise ValidationError(f"edge #{k}: conductance {c!r} must be finite and > 0 (u={u}, v={v})")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValidationError(f"edge #{k}: duplicate edge ({u}, {v}), first seen as edge #{seen[(u, v)]}")
            seen[(u, v)] = k
            canon.append((u, v, c))
        canon.sort(key=lambda t: (t[0], t[1]))

        if killing is None:
            kap = np.zeros(n)
        else:
            kap = _as_vector(killing, n, "killing")
            if not np.all(np.isfinite(kap)):
                bad = int(np.flatnonzero(~np.isfinite(kap))[0])
                raise ValidationError(f"killing[{bad}] = {float(kap[bad])!r} is not finite")
            if np.any(kap < 0):
                bad = int(np.flatnonzero(kap < 0)[0])
                raise ValidationError(f"killing[{bad}] = {kap[bad]} must be >= 0")

        object.__setattr__(self, "vertices", labels)
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "killing", _readonly(kap))

    def __setattr__(self, name, value):
        raise AttributeError("Network is immutable")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def conductance_matrix(self) -> np.ndarray:
        """Dense symmetric conductance matrix with zero diagonal."""
        C = np.zeros((self.n, self.n))
        for u, v, c in self.edges:
            C[u, v] = c
            C[v, u] = c
        return C

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.edges == other.edges
            and np.array_equal(self.killing, other.killing)
        )

    def __hash__(self):
        return hash((self.vertices, self.edges, self.killing.tobytes()))

    def __repr__(self):
        return f"Network(n={self.n}, edges={len(self.edges)}, total_killing={float(np.sum(self.killing))})"

    def to_dict(self) -> dict:
        """JSON-ready dict: vertices, 0-based edges, killing."""
        return {
            "vertices": list(self.vertices),
            "edges": [{"u": u, "v": v, "c": c} for u, v, c in self.edges],
            "killing": [float(k) for k in self.killing],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Network":
        if not isinstance(d, dict) or "vertices" not in d or "edges" not in d:
            raise ValidationError("network JSON must be an object with 'vertices' and 'edges'")
        labels = tuple(tuple(x) if isinstance(x, list) else x for x in d["vertices"])
        edges = []
        for k, e in enumerate(d["edges"]):
            if not isinstance(e, dict) or not {"u", "v", "c"} <= set(e):
                raise ValidationError(f"edge #{k}: expected an object with keys u, v, c")
            edges.append((e["u"], e["v"], e["c"]))
        return cls(labels, edges, d.get("killing"))


@dataclass(frozen=True, eq=False)
class FormMatrix:
    """Dense symmetric matrix realizing a bilinear form f^T A g.

    Construction enforces exact symmetry and finiteness; whether the matrix
    additionally satisfies the Markov sign conditions is checked separately
    by :func:`is_markov`.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"form matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("form matrix contains non-finite entries")
        if not np.array_equal(m, m.T):
            i, j = np.argwhere(m != m.T)[0]
            raise ValidationError(
                f"form matrix is not symmetric: A[{i},{j}]={float(m[i, j])!r} != A[{j},{i}]={float(m[j, i])!r}"
            )
        object.__setattr__(self, "matrix", _readonly(m))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"FormMatrix(n={self.n})"


@dataclass(frozen=True, eq=False)
class MarkovReport:
    """Result of a Markov-property check; truthy iff the check passed."""

    ok: bool
    violations: tuple
    tol: float

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """Nonnegative weights on an enumerated finite point set."""

    weights: np.ndarray
    total: float = field(init=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1:
            raise ValidationError(f"measure weights must be a 1-d vector, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValidationError("measure weights contain non-finite entries")
        if np.any(w < 0):
            bad = int(np.flatnonzero(w < 0)[0])
            raise ValidationError(f"weight[{bad}] = {w[bad]} must be >= 0")
        object.__setattr__(self, "weights", _readonly(w))
        object.__setattr__(self, "total", float(np.sum(w)))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def everywhere_positive(self) -> bool:
        return bool(np.all(self.weights > 0))


def assemble(net: Network) -> FormMatrix:
    """Assemble the form matrix of a network.

    Off-diagonal entries are the negated conductances; the diagonal is the
    conductance row sum plus the killing weight.
    """
    C = net.conductance_matrix()
    A = -C + 0.0  # adding 0.0 normalizes -0.0 entries
    idx = np.arange(net.n)
    A[idx, idx] = np.sum(C, axis=1) + net.killing
    return FormMatrix(A)


def evaluate(A: FormMatrix, f, g=None) -> float:
    """Evaluate the bilinear form f^T A g (g defaults to f)."""
    fv = _as_vector(f, A.n, "f")
    gv = fv if g is None else _as_vector(g, A.n, "g")
    return float(fv @ A.matrix @ gv)


def unit_contraction(u) -> np.ndarray:
    """Clamp a function to [0, 1] componentwise."""
    return np.clip(np.asarray(u, dtype=float), 0.0, 1.0)


def truncate_one(u) -> np.ndarray:
    """Truncate a function at 1 componentwise (Stone operation u ∧ 1)."""
    return np.minimum(np.asarray(u, dtype=float), 1.0)


def is_markov(A: FormMatrix, tol: float | None = None) -> MarkovReport:
    """Check the Markov sign conditions: off-diagonals <= tol, row sums >= -tol.

    ``tol`` defaults to ``1e-10 * max|A|``. Returns a report listing every
    violation; the report is truthy iff there are none.
    """
    m = A.matrix
    if tol is None:
        tol = DEFAULT_RELTOL * max(1.0, float(np.max(np.abs(m)))) if m.size else 0.0
    tol = float(tol)
    violations = []
    off = m.copy()
    np.fill_diagonal(off, 0.0)
    for i, j in np.argwhere(off > tol):
        violations.append(f"off-diagonal ({i},{j}) = {float(m[i, j])!r} exceeds tolerance {tol!r}")
    rows = np.sum(m, axis=1)
    for i in np.flatnonzero(rows < -tol):
        violations.append(f"row {i} sum = {float(rows[i])!r} is below -{tol!r}")
    return MarkovReport(ok=not violations, violations=tuple(violations), tol=tol)


def conductance_matrix(A: FormMatrix) -> np.ndarray:
    """Recover the conductance matrix (negated off-diagonal part) of a form."""
    C = -A.matrix
    C = C.copy()
    np.fill_diagonal(C, 0.0)
    return C


def killing_vector(A: FormMatrix) -> np.ndarray:
    """Row sums of the form matrix; equals the killing weights up to rounding."""
    return np.sum(A.matrix, axis=1)


def components(A: FormMatrix) -> list[np.ndarray]:
    """Connected components of the support graph (nonzero off-diagonals)."""
    n = A.n
    m = A.matrix
    seen = np.zeros(n, dtype=bool)
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            nbrs = np.flatnonzero(m[x] != 0.0)
            for y in nbrs:
                if y != x and not seen[y]:
                    seen[y] = True
                    stack.append(int(y))
        comps.append(np.array(sorted(comp), dtype=int))
    return comps


def form_to_csv(A: FormMatrix) -> str:
    """Row-major CSV of the full symmetric matrix, 17 significant digits."""
    lines = [",".join(format(x, ".17g") for x in row) for row in A.matrix]
    return "\n".join(lines) + "\n"
