"""Projective instruments: frequencies, Lüders branches, confluence and
sequential composition, plus direct checks of the composition identities.

An instrument is an exhaustive tuple of mutually orthogonal projectors.
Frequencies and post-states depend only on the projector, never on the
instrument label.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hilbert import (DensityState, DimensionError, Projector, check_resolution,
                      commutator_norm, dagger, luders_update,
                      post_measurement_mixture, random_unitary)
from .tolerances import current as _tol


class NonCommutingError(ValueError):
    """Two instruments have a pair of outcomes that do not commute."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


@dataclass(frozen=True, eq=False)
class Instrument:
    outcomes: tuple
    label: str = ""

    def __post_init__(self):
        outs = tuple(P if isinstance(P, Projector) else Projector(P)
                     for P in self.outcomes)
        object.__setattr__(self, "outcomes", outs)
        check_resolution(outs)

    @property
    def dim(self) -> int:
        return self.outcomes[0].dim

    def __len__(self):
        return len(self.outcomes)

    def __getitem__(self, i) -> Projector:
        return self.outcomes[i]

    def conjugate(self, U: np.ndarray, label: str | None = None) -> "Instrument":
        """The instrument with outcomes U a_i U^dagger."""
        return Instrument(tuple(U @ P.matrix @ dagger(U) for P in self.outcomes),
                          self.label if label is None else label)

    @classmethod
    def trivial(cls, d: int) -> "Instrument":
        return cls((Projector.identity(d),), "trivial")

    @classmethod
    def from_basis(cls, basis: np.ndarray, groups=None, label="") -> "Instrument":
        """Instrument built from the columns of a unitary.

        ``groups`` partitions column indices into outcomes; default is one
        rank-1 outcome per column.
        """
        basis = np.asarray(basis, dtype=complex)
        d = basis.shape[0]
        if groups is None:
            groups = [[k] for k in range(d)]
        outs = []
        for g in groups:
            v = basis[:, list(g)]
            outs.append(v @ dagger(v) if len(g) else np.zeros((d, d)))
        return cls(tuple(outs), label)

    @classmethod
    def computational(cls, d: int, label="computational") -> "Instrument":
        return cls.from_basis(np.eye(d), label=label)

    def __repr__(self):
        ranks = [P.rank for P in self.outcomes]
        return f"Instrument({self.label!r}, dim={self.dim}, ranks={ranks})"


@dataclass(frozen=True)
class Branch:
    probability: float
    state: DensityState | None

    @property
    def defined(self) -> bool:
        return self.state is not None


@dataclass(frozen=True)
class BranchMap:
    branches: tuple

    def __len__(self):
        return len(self.branches)

    def __getitem__(self, i) -> Branch:
        return self.branches[i]

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([b.probability for b in self.branches])

    def aggregate(self) -> np.ndarray:
        return sum(b.probability * b.state.matrix for b in self.branches
                   if b.defined)


@dataclass(frozen=True)
class JointResult:
    """Joint outcome table of a two-stage experiment, indexed (i, j)."""
    probabilities: np.ndarray
    states: tuple  # states[i][j]: DensityState or None

    def aggregate(self) -> np.ndarray:
        out = None
        for i, row in enumerate(self.states):
            for j, s in enumerate(row):
                if s is not None:
                    term = self.probabilities[i, j] * s.matrix
                    out = term if out is None else out + term
        return out


@dataclass
class Report:
    property: str
    passed: bool
    max_deviation: float = 0.0
    tolerance: float | None = None
    counterexample_seed: int | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"property": self.property, "pass": bool(self.passed),
               "max_deviation": float(self.max_deviation)}
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        if self.counterexample_seed is not None:
            out["counterexample_seed"] = self.counterexample_seed
        if self.details:
            out["details"] = self.details
        return out


def _check_dim(I: Instrument, s: DensityState):
    if I.dim != s.dim:
        raise DimensionError(f"instrument dim {I.dim} != state dim {s.dim}")


def frequency(I: Instrument, i: int, s: DensityState) -> float:
    _check_dim(I, s)
    return float(np.trace(s.matrix @ I[i].matrix).real)


def distribution(I: Instrument, s: DensityState) -> np.ndarray:
    return np.array([frequency(I, i, s) for i in range(len(I))])


def apply(I: Instrument, s: DensityState) -> BranchMap:
    _check_dim(I, s)
    return BranchMap(tuple(Branch(*luders_update(s, P)) for P in I.outcomes))


def aggregate_state(I: Instrument, s: DensityState) -> DensityState:
    return post_measurement_mixture(s, I.outcomes, tag=I.label)[0]


def check_commuting(I: Instrument, J: Instrument, tol: float | None = None):
    tol = _tol().num if tol is None else tol
    if I.dim != J.dim:
        raise DimensionError(f"instrument dims differ: {I.dim} vs {J.dim}")
    for i, j in itertools.product(range(len(I)), range(len(J))):
        c = commutator_norm(I[i], J[j])
        if c > tol:
            raise NonCommutingError(
                f"outcome {i} of {I.label or 'I'} does not commute with outcome "
                f"{j} of {J.label or 'J'} (||[a,b]|| = {c:.3g})", (i, j))


def commuting(I: Instrument, J: Instrument, tol: float | None = None) -> bool:
    try:
        check_commuting(I, J, tol)
    except NonCommutingError:
        return False
    return True


def confluence(I: Instrument, J: Instrument) -> Instrument:
    """I meet J: outcomes a_i b_j in row-major (i, j) order, null outcomes kept."""
    check_commuting(I, J)
    outs = []
    for P in I.outcomes:
        for Q in J.outcomes:
            m = P.matrix @ Q.matrix
            outs.append((m + dagger(m)) / 2)
    return Instrument(tuple(outs), f"({I.label} ^ {J.label})")


def confluence_joint(I: Instrument, J: Instrument, p: DensityState) -> JointResult:
    K = confluence(I, J)
    bm = apply(K, p)
    n, m = len(I), len(J)
    probs = bm.probabilities.reshape(n, m)
    states = tuple(tuple(bm[i * m + j].state for j in range(m)) for i in range(n))
    return JointResult(probs, states)


def sequential(first: Instrument, then: Instrument, p: DensityState) -> JointResult:
    """Measure ``first`` then ``then``; joint (i, j) = freq of j on branch i times freq of i."""
    _check_dim(first, p)
    _check_dim(then, p)
    n, m = len(first), len(then)
    probs = np.zeros((n, m))
    states = []
    for i in range(n):
        wi, si = luders_update(p, first[i])
        row = []
        for j in range(m):
            if si is None:
                row.append(None)
                continue
            wj, sij = luders_update(si, then[j])
            probs[i, j] = wj * wi
            row.append(sij)
        states.append(tuple(row))
    return JointResult(probs, tuple(states))


def _transpose(res: JointResult) -> JointResult:
    return JointResult(res.probabilities.T.copy(),
                       tuple(zip(*res.states)) if res.states else ())


def _state_deviation(a: DensityState | None, b: DensityState | None,
                     wa: float, wb: float) -> float:
    if a is None and b is None:
        return 0.0
    if a is None or b is None:
        # only one side crossed the zero threshold; the gap is the weight
        return max(wa, wb)
    return float(np.linalg.norm(a.matrix - b.matrix))


def _compare_states(x: JointResult, y: JointResult) -> np.ndarray:
    n, m = x.probabilities.shape
    out = np.zeros((n, m))
    for i in range(n):
        for j in range(m):
            out[i, j] = _state_deviation(x.states[i][j], y.states[i][j],
                                         x.probabilities[i, j],
                                         y.probabilities[i, j])
    return out


def verify_eq1(I: Instrument, J: Instrument, p: DensityState,
               tol: float = 1e-10) -> Report:
    """Confluence frequencies equal the sequential product, in both orders."""
    conf = confluence_joint(I, J, p)
    ij = sequential(I, J, p)
    ji = _transpose(sequential(J, I, p))
    d1 = np.abs(conf.probabilities - ij.probabilities)
    d2 = np.abs(conf.probabilities - ji.probabilities)
    dev = float(max(d1.max(), d2.max()))
    return Report("eq1_frequency_factorization", dev <= tol, dev, tol,
                  details={"per_branch_I_then_J": d1.tolist(),
                           "per_branch_J_then_I": d2.tolist()})


def verify_eq2(I: Instrument, J: Instrument, states: Sequence[DensityState],
               tol: float = 1e-10) -> Report:
    """Confluence branch states equal sequentially composed branches, on each state."""
    check_commuting(I, J)
    dev = 0.0
    worst = None
    for k, p in enumerate(states):
        conf = confluence_joint(I, J, p)
        for seq in (sequential(I, J, p), _transpose(sequential(J, I, p))):
            d = _compare_states(conf, seq)
            if d.max() > dev:
                dev = float(d.max())
                worst = k
    details = {"states": len(states)}
    if worst is not None:
        details["worst_state"] = worst
    return Report("eq2_collapse_composition", dev <= tol, dev, tol,
                  details=details)


def verify_eq3_eq4(I: Instrument, J: Instrument, p: DensityState,
                   tol: float = 1e-10, require_commuting: bool = True) -> Report:
    """Compare the two sequential orders directly.

    With ``require_commuting=False`` the comparison runs on any pair, which
    is how the negative control exhibits the asymmetry.
    """
    if require_commuting:
        check_commuting(I, J)
    ij = sequential(I, J, p)
    ji = _transpose(sequential(J, I, p))
    dp = np.abs(ij.probabilities - ji.probabilities)
    ds = _compare_states(ij, ji)
    dev_p, dev_s = float(dp.max()), float(ds.max())
    dev = max(dev_p, dev_s)
    return Report("eq3_eq4_order_symmetry", dev <= tol, dev, tol,
                  details={"eq3_max": dev_p, "eq4_max": dev_s})


def marginal_first(res: JointResult) -> np.ndarray:
    return res.probabilities.sum(axis=1)


def no_signaling_check(I: Instrument, J: Instrument, p: DensityState,
                       tol: float = 1e-10,
                       alternatives: Sequence[Instrument] = ()) -> Report:
    """The local marginal of I does not depend on the remote instrument.

    For J and every alternative J2, the I-marginal is computed from the
    confluence table and from both sequential orders, and compared with
    the stand-alone distribution of I.
    """
    local = distribution(I, p)
    dev = 0.0
    per = []
    for K in (J, *alternatives):
        check_commuting(I, K)
        rows = [marginal_first(confluence_joint(I, K, p)),
                marginal_first(sequential(I, K, p)),
                marginal_first(_transpose(sequential(K, I, p)))]
        d = max(float(np.abs(r - local).max()) for r in rows)
        per.append(d)
        dev = max(dev, d)
    return Report("no_signaling", dev <= tol, dev, tol,
                  details={"local_marginal": local.tolist(),
                           "per_remote_instrument": per})


def covariance_check(U: np.ndarray, I: Instrument, s: DensityState,
                     tol: float = 1e-10) -> Report:
    """Frequencies invariant and branches equivariant under conjugation by U."""
    U = np.asarray(U, dtype=complex)
    if np.linalg.norm(dagger(U) @ U - np.eye(U.shape[0])) > _tol().num:
        raise ValueError("U is not unitary")
    gI = I.conjugate(U)
    gs = DensityState(U @ s.matrix @ dagger(U))
    before, after = apply(I, s), apply(gI, gs)
    dev_f = float(np.abs(before.probabilities - after.probabilities).max())
    dev_s = 0.0
    for b, a in zip(before.branches, after.branches):
        moved = (DensityState(U @ b.state.matrix @ dagger(U))
                 if b.defined else None)
        dev_s = max(dev_s, _state_deviation(moved, a.state, b.probability,
                                            a.probability))
    dev = max(dev_f, dev_s)
    return Report("covariance", dev <= tol, dev, tol,
                  details={"frequency_max": dev_f, "branch_max": dev_s})


# ---------------------------------------------------------------------------
# random instruments and commuting pairs

def random_partition(rng: np.random.Generator, size: int, parts: int) -> list:
    """Split ``range(size)`` into ``parts`` nonempty groups, uniformly labelled."""
    if not 1 <= parts <= size:
        raise ValueError("need 1 <= parts <= size")
    perm = rng.permutation(size)
    cuts = np.sort(rng.choice(np.arange(1, size), parts - 1, replace=False))
    return [sorted(int(x) for x in g) for g in np.split(perm, cuts)]


def random_instrument(d: int, rng: np.random.Generator, outcomes: int | None = None,
                      label: str = "") -> Instrument:
    outcomes = int(rng.integers(2, d + 1)) if outcomes is None else outcomes
    U = random_unitary(d, rng)
    return Instrument.from_basis(U, random_partition(rng, d, outcomes), label)


def tensor_pair(d1: int, d2: int, rng: np.random.Generator,
                mix: bool = True) -> tuple[Instrument, Instrument]:
    """I on factor 1, J on factor 2; optionally conjugated by one global unitary."""
    A = random_instrument(d1, rng, label="A")
    B = random_instrument(d2, rng, label="B")
    I = Instrument(tuple(np.kron(P.matrix, np.eye(d2)) for P in A.outcomes), "I")
    J = Instrument(tuple(np.kron(np.eye(d1), Q.matrix) for Q in B.outcomes), "J")
    if mix:
        W = random_unitary(d1 * d2, rng)
        I, J = I.conjugate(W), J.conjugate(W)
    return I, J


def block_pair(d: int, rng: np.random.Generator) -> tuple[Instrument, Instrument]:
    """Two coarse-grainings of one random orthonormal basis."""
    W = random_unitary(d, rng)
    n = int(rng.integers(2, d + 1))
    m = int(rng.integers(2, d + 1))
    I = Instrument.from_basis(W, random_partition(rng, d, n), "I")
    J = Instrument.from_basis(W, random_partition(rng, d, m), "J")
    return I, J


SPLITS = {4: (2, 2), 6: (2, 3), 8: (2, 4), 9: (3, 3)}


def random_commuting_pair(d: int, rng: np.random.Generator,
                          kind: str = "tensor") -> tuple[Instrument, Instrument]:
    if kind == "tensor":
        if d not in SPLITS:
            raise ValueError(f"no tensor split registered for d={d}")
        return tensor_pair(*SPLITS[d], rng)
    if kind == "block":
        return block_pair(d, rng)
    raise ValueError(f"unknown generator {kind!r}")
