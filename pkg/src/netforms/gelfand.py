"""Point embeddings by finite function algebras, quotients, and pushforwards.

A finite list of bounded generator functions embeds each point as its tuple of
generator values. Points with identical tuples collapse to one equivalence
class; measures push forward by summing atom weights over classes, and the
embedding is an L2-isometry onto the quotient. When the generators separate
points the embedding is injective and everything is a relabeling.

Equality of generator tuples is exact by default. A tolerance can be supplied
explicitly, but silent tolerance merging would change the quotient, so it is
off unless asked for.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DescentError, NotInAlgebraError, ValidationError
from .network import AtomicMeasure, FormMatrix, _readonly

__all__ = [
    "AlgebraSpec",
    "EmbeddingResult",
    "PushforwardMeasure",
    "VanishingReport",
    "ClosureEstimate",
    "embed",
    "vanishes_nowhere",
    "pushforward",
    "l2_isometry_check",
    "transfer_form",
    "quotient_function",
    "lift_function",
    "spectrum_closure_estimate",
]

#: Flagging threshold for the closure diagnostic: a net point is a candidate
#: compactification point when at least this many images fall within epsilon
#: of it and no single image covers them all within epsilon/2.
LIMIT_POINT_MIN_IMAGES = 10


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """Finite point list plus generator functions given as value vectors."""

    points: tuple
    generators: np.ndarray

    def __init__(self, points, generators):
        pts = tuple(points)
        if len(pts) == 0:
            raise ValidationError("algebra spec needs at least one point")
        G = np.asarray(generators, dtype=float)
        if G.ndim != 2:
            raise ValidationError("generators must be a 2-d array (one row per generator)")
        if G.shape[0] == 0:
            raise ValidationError("algebra spec needs at least one generator")
        if G.shape[1] != len(pts):
            raise ValidationError(
                f"each generator must have one value per point ({len(pts)}), got {G.shape[1]}"
            )
        if not np.all(np.isfinite(G)):
            i, j = np.argwhere(~np.isfinite(G))[0]
            raise ValidationError(f"generator {i} has a non-finite value at point {j}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "generators", _readonly(G))

    @property
    def n_points(self) -> int:
        return len(self.points)

    @property
    def n_generators(self) -> int:
        return self.generators.shape[0]


@dataclass(frozen=True, eq=False)
class EmbeddingResult:
    """Images in R^k plus the partition into classes of equal image."""

    images: np.ndarray
    classes: tuple
    separated: bool
    class_of: np.ndarray

    @property
    def n_points(self) -> int:
        return self.images.shape[0]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def representatives(self) -> np.ndarray:
        return np.array([c[0] for c in self.classes], dtype=int)


@dataclass(frozen=True, eq=False)
class VanishingReport:
    ok: bool
    witnesses: tuple

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class PushforwardMeasure:
    """Atom per equivalence class; total mass is preserved exactly.

    ``total`` is computed as the same fixed-order sum over the original point
    weights that :class:`AtomicMeasure` caches, so it equals the source total
    bit-for-bit.
    """

    atoms: np.ndarray
    total: float

    def __post_init__(self):
        object.__setattr__(self, "atoms", _readonly(np.asarray(self.atoms, dtype=float)))

    @property
    def n_classes(self) -> int:
        return self.atoms.shape[0]


def embed(spec: AlgebraSpec, tol: float = 0.0) -> EmbeddingResult:
    """Map each point to its tuple of generator values and group equal images.

    With ``tol > 0`` points whose images differ by at most ``tol`` in sup norm
    are merged transitively; the default is exact equality.
    """
    images = spec.generators.T.copy()
    n = spec.n_points
    if tol < 0:
        raise ValidationError("tolerance must be >= 0")
    if tol == 0.0:
        groups: dict = {}
        order = []
        for i in range(n):
            key = tuple(images[i])
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append(i)
        classes = tuple(tuple(groups[k]) for k in order)
    else:
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if np.max(np.abs(images[i] - images[j])) <= tol:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
        roots: dict = {}
        order = []
        for i in range(n):
            r = find(i)
            if r not in roots:
                roots[r] = []
                order.append(r)
            roots[r].append(i)
        classes = tuple(tuple(roots[r]) for r in order)

    class_of = np.empty(n, dtype=int)
    for ci, members in enumerate(classes):
        for i in members:
            class_of[i] = ci
    return EmbeddingResult(
        images=_readonly(images),
        classes=classes,
        separated=len(classes) == n,
        class_of=_readonly(class_of).astype(int),
    )


def vanishes_nowhere(spec: AlgebraSpec) -> VanishingReport:
    """True iff every point has some generator with a nonzero value there."""
    nonzero = np.any(spec.generators != 0.0, axis=0)
    witnesses = tuple(int(i) for i in np.flatnonzero(~nonzero))
    return VanishingReport(ok=not witnesses, witnesses=witnesses)


def pushforward(mu: AtomicMeasure, emb: EmbeddingResult) -> PushforwardMeasure:
    """Sum atom weights over equivalence classes; total mass is preserved."""
    if mu.n != emb.n_points:
        raise ValidationError(
            f"measure has {mu.n} atoms but the embedding has {emb.n_points} points"
        )
    atoms = np.array([float(np.sum(mu.weights[list(c)])) for c in emb.classes])
    return PushforwardMeasure(atoms=atoms, total=float(np.sum(mu.weights)))


def quotient_function(f, emb: EmbeddingResult) -> np.ndarray:
    """Values of a class-constant function on the quotient (one per class)."""
    fv = np.asarray(f, dtype=float)
    if fv.shape != (emb.n_points,):
        raise ValidationError(f"f must have one value per point ({emb.n_points})")
    for ci, members in enumerate(emb.classes):
        vals = fv[list(members)]
        if np.any(vals != vals[0]):
            raise NotInAlgebraError(
                f"f is not constant on class {ci} (points {members}); "
                "it does not define a function on the quotient"
            )
    return fv[emb.representatives()]


def lift_function(fhat, emb: EmbeddingResult) -> np.ndarray:
    """Pull a function on classes back to a class-constant function on points."""
    fh = np.asarray(fhat, dtype=float)
    if fh.shape != (emb.n_classes,):
        raise ValidationError(f"fhat must have one value per class ({emb.n_classes})")
    return fh[emb.class_of]


def l2_isometry_check(f, mu: AtomicMeasure, emb: EmbeddingResult) -> tuple[float, float, float]:
    """L2 norms of a class-constant function upstairs and on the quotient.

    Returns (lhs, rhs, |lhs - rhs|); the two sides agree to rounding, and
    exactly when the embedding is separated.
    """
    if mu.n != emb.n_points:
        raise ValidationError("measure and embedding sizes differ")
    fv = np.asarray(f, dtype=float)
    fhat = quotient_function(fv, emb)
    push = pushforward(mu, emb)
    lhs = float(np.sqrt(np.sum(fv * fv * mu.weights)))
    rhs = float(np.sqrt(np.sum(fhat * fhat * push.atoms)))
    return lhs, rhs, abs(lhs - rhs)


def transfer_form(A: FormMatrix, emb: EmbeddingResult, n_probe: int = 8) -> FormMatrix:
    """Quotient form matrix: block sums of A over the class partition.

    The quotient matrix satisfies E(f, g) = E_hat(fhat, ghat) for all
    class-constant f, g. The identity is re-verified on random class-constant
    probe pairs; a failure (which cannot occur for exact block sums, short of
    numerical breakdown) raises a descent error naming a witness pair.
    """
    if A.n != emb.n_points:
        raise ValidationError(f"form has {A.n} vertices but the embedding has {emb.n_points} points")
    m = emb.n_classes
    Q = np.zeros((A.n, m))
    Q[np.arange(A.n), emb.class_of] = 1.0
    Ahat = Q.T @ A.matrix @ Q
    Ahat = (Ahat + Ahat.T) / 2.0
    out = FormMatrix(Ahat)

    rng = np.random.default_rng(0)
    scale = max(1.0, float(np.max(np.abs(A.matrix)))) * A.n
    for _ in range(n_probe):
        fh = rng.standard_normal(m)
        gh = rng.standard_normal(m)
        up = float(lift_function(fh, emb) @ A.matrix @ lift_function(gh, emb))
        down = float(fh @ Ahat @ gh)
        if abs(up - down) > 1e-10 * scale * max(1.0, abs(up)):
            raise DescentError(
                f"form does not descend to the quotient: witness pair gives {up!r} upstairs "
                f"vs {down!r} on classes"
            )
    return out


@dataclass(frozen=True, eq=False)
class ClosureEstimate:
    """Greedy epsilon-net of the image cloud with limit-point candidate flags.

    Diagnostic only: a flagged net point has many images nearby that are not
    explained by any single image, the finite-truncation shadow of a
    compactification point.
    """

    net_points: np.ndarray
    flagged: np.ndarray
    counts: np.ndarray


def spectrum_closure_estimate(spec: AlgebraSpec, epsilon: float, min_images: int = LIMIT_POINT_MIN_IMAGES) -> ClosureEstimate:
    """Greedy epsilon-net over the embedded images with accumulation flags.

    A net point is flagged when its epsilon-ball contains at least
    ``min_images`` images and no single image lies within epsilon/2 of all of
    them, i.e. the nearby mass does not collapse to one point of the image.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be > 0")
    images = embed(spec).images
    n = images.shape[0]
    net_idx: list[int] = []
    for i in range(n):
        if not net_idx:
            net_idx.append(i)
            continue
        d = np.linalg.norm(images[net_idx] - images[i], axis=1)
        if np.min(d) >= epsilon:
            net_idx.append(i)
    net = images[net_idx]

    flags = np.zeros(len(net_idx), dtype=bool)
    counts = np.zeros(len(net_idx), dtype=int)
    for k, p in enumerate(net):
        dist = np.linalg.norm(images - p, axis=1)
        ball = np.flatnonzero(dist <= epsilon)
        counts[k] = ball.size
        if ball.size < min_images:
            continue
        cluster = images[ball]
        # candidate covering images: anything near the ball can cover it
        near = np.flatnonzero(dist <= 1.5 * epsilon)
        cover = np.linalg.norm(cluster[None, :, :] - images[near][:, None, :], axis=2)
        covered = bool(np.any(np.max(cover, axis=1) <= epsilon / 2.0))
        flags[k] = not covered
    return ClosureEstimate(net_points=_readonly(net), flagged=flags, counts=counts)
