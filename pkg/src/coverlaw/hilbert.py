"""Finite-dimensional Hilbert-space backend.

Projectors, observables and density states are thin validated wrappers
around complex numpy matrices. All values are immutable; every random
constructor takes an explicit seed or ``numpy.random.Generator``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .tolerances import current as _tol


class DimensionError(ValueError):
    pass


def _frozen(m) -> np.ndarray:
    arr = np.array(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float | None = None) -> bool:
    tol = _tol().herm if tol is None else tol
    return np.linalg.norm(m - dagger(m)) <= tol


def _cutoff(s: np.ndarray, rel: float) -> int:
    # floor of 1 on the scale: projector-valued inputs that are numerically
    # zero must not count their roundoff as rank
    if s.size == 0:
        return 0
    return int(np.sum(s > rel * max(s[0], 1.0)))


def numerical_rank(m: np.ndarray, rel: float | None = None) -> int:
    """Number of singular values above ``rel`` times max(largest, 1)."""
    rel = _tol().rank if rel is None else rel
    return _cutoff(np.linalg.svd(m, compute_uv=False), rel)


@dataclass(frozen=True, eq=False)
class Projector:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        t = _tol()
        if not is_hermitian(m, t.herm):
            raise ValueError("projector is not Hermitian")
        if np.linalg.norm(m @ m - m) > t.idem:
            raise ValueError("projector is not idempotent")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))

    @classmethod
    def onto(cls, vectors) -> "Projector":
        """Projector onto the span of the given column vectors."""
        v = np.asarray(vectors, dtype=complex)
        if v.ndim == 1:
            v = v[:, None]
        return cls(_range_projector(v))

    @classmethod
    def zero(cls, d: int) -> "Projector":
        return cls(np.zeros((d, d), dtype=complex))

    @classmethod
    def identity(cls, d: int) -> "Projector":
        return cls(np.eye(d, dtype=complex))

    def __repr__(self):
        return f"Projector(dim={self.dim}, rank={self.rank})"


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        if not is_hermitian(m):
            raise ValueError("observable is not Hermitian")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class DensityState:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        object.__setattr__(self, "matrix", m)
        t = _tol()
        if not is_hermitian(m, t.herm):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > t.tr:
            raise ValueError(f"density matrix has trace {tr!r}")
        lo = np.linalg.eigvalsh((m + dagger(m)) / 2).min()
        if lo < -t.psd:
            raise ValueError(f"density matrix has eigenvalue {lo!r} < 0")

    @classmethod
    def from_vector(cls, psi) -> "DensityState":
        v = np.asarray(psi, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityState":
        return cls(np.eye(d, dtype=complex) / d)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    @property
    def is_pure(self) -> bool:
        return self.purity > 1 - _tol().purity

    def vector(self) -> np.ndarray:
        """A unit vector for a pure state (global phase fixed by the largest entry)."""
        if not self.is_pure:
            raise ValueError("state is not pure")
        w, v = np.linalg.eigh(self.matrix)
        psi = v[:, -1]
        k = np.argmax(np.abs(psi))
        return psi * (abs(psi[k]) / psi[k])

    def __repr__(self):
        tag = "pure" if self.is_pure else "mixed"
        return f"DensityState(dim={self.dim}, {tag})"


@dataclass(frozen=True)
class Mixture:
    """A finite convex decomposition singled out by a measurement."""
    components: tuple
    tag: str = ""
    aggregate: DensityState | None = field(default=None, compare=False)

    def __post_init__(self):
        comps = tuple((float(w), s) for w, s in self.components)
        object.__setattr__(self, "components", comps)
        t = _tol()
        total = sum(w for w, _ in comps)
        if any(not 0.0 < w <= 1.0 + t.tr for w, _ in comps):
            raise ValueError("mixture weights must lie in (0, 1]")
        if abs(total - 1.0) > t.tr:
            raise ValueError(f"mixture weights sum to {total!r}")
        agg = self.mean()
        if self.aggregate is None:
            object.__setattr__(self, "aggregate", DensityState(agg))
        elif np.linalg.norm(self.aggregate.matrix - agg) > t.num:
            raise ValueError("declared aggregate does not match the components")

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components])

    @property
    def states(self) -> list:
        return [s for _, s in self.components]

    def mean(self) -> np.ndarray:
        return sum(w * s.matrix for w, s in self.components)


# ---------------------------------------------------------------------------
# spectral decomposition and measurement

def spectral_instrument(A: Observable, group_tol: float | None = None
                        ) -> list[tuple[float, Projector]]:
    """Eigenvalue/projector pairs of A, ascending, with near-equal eigenvalues merged."""
    if not isinstance(A, Observable):
        A = Observable(A)
    group_tol = _tol().group if group_tol is None else group_tol
    w, v = np.linalg.eigh(A.matrix)
    groups: list[list[int]] = []
    for k in range(len(w)):
        if groups and w[k] - w[groups[-1][0]] <= group_tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    out = []
    for g in groups:
        vecs = v[:, g]
        out.append((float(np.mean(w[g])), Projector(vecs @ dagger(vecs))))
    return out


def luders_update(rho: DensityState, P: Projector):
    """Outcome probability and normalized post-measurement state.

    Returns ``(prob, post)`` with ``post`` None when ``prob`` is not above
    the zero tolerance.
    """
    if rho.dim != P.dim:
        raise DimensionError(f"state dim {rho.dim} != projector dim {P.dim}")
    prob = float(np.trace(rho.matrix @ P.matrix).real)
    prob = min(max(prob, 0.0), 1.0)
    if prob <= _tol().zero:
        return prob, None
    unnorm = P.matrix @ rho.matrix @ P.matrix
    post = (unnorm + dagger(unnorm)) / (2 * prob)
    return prob, DensityState(post)


def check_resolution(projs: Sequence[Projector], tol: float | None = None):
    """Raise ValueError unless ``projs`` are orthogonal and sum to identity."""
    tol = _tol().num if tol is None else tol
    if not projs:
        raise ValueError("empty projector list")
    d = projs[0].dim
    for k, P in enumerate(projs):
        if P.dim != d:
            raise DimensionError(f"projector {k} has dim {P.dim}, expected {d}")
    for i in range(len(projs)):
        for j in range(i + 1, len(projs)):
            if np.linalg.norm(projs[i].matrix @ projs[j].matrix) > tol:
                raise ValueError(f"projectors {i} and {j} are not orthogonal")
    total = sum(P.matrix for P in projs)
    if np.linalg.norm(total - np.eye(d)) > tol:
        raise ValueError("projectors do not sum to the identity")


def post_measurement_mixture(rho: DensityState, projs: Sequence[Projector],
                             tag: str = ""):
    """Non-selective Lüders update: ``(sum P rho P, branch Mixture)``."""
    check_resolution(projs)
    agg = np.zeros_like(rho.matrix)
    comps = []
    for P in projs:
        prob, post = luders_update(rho, P)
        agg = agg + P.matrix @ rho.matrix @ P.matrix
        if post is not None:
            comps.append((prob, post))
    # renormalize away the mass dropped with sub-threshold branches
    total = sum(w for w, _ in comps)
    comps = [(w / total, s) for w, s in comps]
    aggregate = DensityState((agg + dagger(agg)) / 2)
    return aggregate, Mixture(tuple(comps), tag=tag)


def partial_trace(rho, dims: tuple[int, int], keep: int) -> DensityState:
    """Reduced state on factor ``keep`` (1 or 2) of a ``d1 x d2`` split."""
    m = rho.matrix if isinstance(rho, DensityState) else np.asarray(rho)
    d1, d2 = dims
    if m.shape != (d1 * d2, d1 * d2):
        raise DimensionError(f"state of shape {m.shape} does not split as {dims}")
    t = m.reshape(d1, d2, d1, d2)
    if keep == 1:
        red = np.einsum("ajbj->ab", t)
    elif keep == 2:
        red = np.einsum("iaib->ab", t)
    else:
        raise ValueError("keep must be 1 or 2")
    return DensityState(red)


# ---------------------------------------------------------------------------
# projection lattice

def _range_projector(m: np.ndarray, rel: float | None = None) -> np.ndarray:
    rel = _tol().rank if rel is None else rel
    if m.size == 0:
        return np.zeros((m.shape[0], m.shape[0]), dtype=complex)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    basis = u[:, :_cutoff(s, rel)]
    return basis @ dagger(basis)


def range_basis(m: np.ndarray, rel: float | None = None) -> np.ndarray:
    """Orthonormal columns spanning the range of ``m``."""
    rel = _tol().rank if rel is None else rel
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, :_cutoff(s, rel)]


def subspace_join(P: Projector, Q: Projector) -> Projector:
    if P.dim != Q.dim:
        raise DimensionError("projectors act on different dimensions")
    return Projector(_range_projector(np.hstack([P.matrix, Q.matrix])))


def subspace_ortho(P: Projector) -> Projector:
    return Projector(np.eye(P.dim) - P.matrix)


def subspace_meet(P: Projector, Q: Projector) -> Projector:
    return subspace_ortho(subspace_join(subspace_ortho(P), subspace_ortho(Q)))


def projectors_close(P: Projector, Q: Projector, tol: float | None = None) -> bool:
    tol = _tol().num if tol is None else tol
    return np.linalg.norm(P.matrix - Q.matrix) <= tol


def lattice_commutes(P: Projector, Q: Projector) -> bool:
    """Lattice commutativity P = (P meet Q) join (P meet Q') on subspaces."""
    lhs = subspace_join(subspace_meet(P, Q), subspace_meet(P, subspace_ortho(Q)))
    return projectors_close(lhs, P)


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    a = getattr(a, "matrix", a)
    b = getattr(b, "matrix", b)
    return float(np.linalg.norm(a @ b - b @ a))


# ---------------------------------------------------------------------------
# random constructors

def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(d: int, seed=None) -> np.ndarray:
    """Haar-random unitary from the QR factorization of a complex Ginibre matrix."""
    rng = _rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_vector(d: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_state(d: int, pure: bool = True, seed=None) -> DensityState:
    rng = _rng(seed)
    if pure:
        return DensityState.from_vector(random_unitary(d, rng)[:, 0])
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    w = g @ dagger(g)
    w = (w + dagger(w)) / 2
    return DensityState(w / np.trace(w).real)


def random_subspace(d: int, rank: int, seed=None) -> Projector:
    u = random_unitary(d, seed)[:, :rank]
    return Projector(u @ dagger(u))


# ---------------------------------------------------------------------------
# covering law in the projection lattice

@dataclass
class CoveringRankReport:
    dim: int
    trials: int
    seed: int | None
    skipped: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"property": "covering_rank", "pass": self.passed,
                "dim": self.dim, "trials": self.trials, "seed": self.seed,
                "skipped": self.skipped, "failures": self.failures}


def covering_trial(p: Projector, a: Projector):
    """Rank increment for one atom/subspace pair.

    Returns None when the precondition ``p meet a = 0`` fails, otherwise
    ``(rank(a), rank(a join p))`` with ranks counted from singular values.
    """
    if numerical_rank(subspace_meet(p, a).matrix) != 0:
        return None
    j = subspace_join(a, p)
    return numerical_rank(a.matrix), numerical_rank(j.matrix)


def covering_rank_check(d: int, trials: int, seed=None,
                        inside_fraction: float = 0.2) -> CoveringRankReport:
    """Sample atoms p and subspaces a with p meet a = 0; require rank(a join p) = rank(a) + 1.

    A fraction ``inside_fraction`` of draws deliberately places p inside a
    (when a is nonzero); those draws violate the precondition and are
    skipped and resampled.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    rng = _rng(seed)
    report = CoveringRankReport(dim=d, trials=trials,
                                seed=seed if isinstance(seed, int) else None)
    done = 0
    while done < trials:
        r = int(rng.integers(0, d))
        u = random_unitary(d, rng)
        a = Projector(u[:, :r] @ dagger(u[:, :r]))
        if r > 0 and rng.random() < inside_fraction:
            coef = rng.standard_normal(r) + 1j * rng.standard_normal(r)
            v = u[:, :r] @ coef
        else:
            v = random_vector(d, rng)
        p = Projector.onto(v)
        res = covering_trial(p, a)
        if res is None:
            report.skipped += 1
            continue
        ra, rj = res
        if rj != ra + 1:
            report.failures.append({"trial": done, "rank_a": ra, "rank_join": rj})
        done += 1
    return report
