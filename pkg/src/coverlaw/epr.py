"""EPR-type states and conditioning at a distance.

Includes the singlet and its polarizer instruments, the remote mixture
induced on one arm by measuring the other, and the explicit correlated
state that transfers the statistics of a pair of commuting instruments
(I, J) on one tensor factor to the pair (I, J') with J' on the other
factor.

Singlet convention: (|01> - |10>)/sqrt(2), perfectly anti-correlated in
every basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hilbert import (DensityState, DimensionError, Mixture, Projector, dagger,
                      luders_update, partial_trace, post_measurement_mixture,
                      range_basis)
from .instruments import (Instrument, Report,
                          check_commuting, confluence_joint, distribution,
                          sequential)
from .spacetime import SpacetimeRegion, spacelike
from .tolerances import current as _tol


class ConstructionError(ValueError):
    pass


class NoTensorSplitError(ValueError):
    pass


@dataclass(frozen=True)
class TensorSplit:
    d1: int
    d2: int

    @property
    def dim(self) -> int:
        return self.d1 * self.d2

    def embed1(self, X) -> np.ndarray:
        return np.kron(getattr(X, "matrix", X), np.eye(self.d2))

    def embed2(self, Y) -> np.ndarray:
        return np.kron(np.eye(self.d1), getattr(Y, "matrix", Y))

    def lift1(self, I: Instrument, label=None) -> Instrument:
        return Instrument(tuple(self.embed1(P) for P in I.outcomes),
                          I.label if label is None else label)

    def lift2(self, I: Instrument, label=None) -> Instrument:
        return Instrument(tuple(self.embed2(P) for P in I.outcomes),
                          I.label if label is None else label)

    def factor1_part(self, M) -> np.ndarray | None:
        """X with M = X (x) 1, or None if M is not of that form."""
        M = getattr(M, "matrix", M)
        X = np.einsum("ajbj->ab", M.reshape(self.d1, self.d2, self.d1, self.d2)) / self.d2
        return X if np.linalg.norm(self.embed1(X) - M) <= _tol().num else None

    def factor2_part(self, M) -> np.ndarray | None:
        M = getattr(M, "matrix", M)
        Y = np.einsum("iaib->ab", M.reshape(self.d1, self.d2, self.d1, self.d2)) / self.d1
        return Y if np.linalg.norm(self.embed2(Y) - M) <= _tol().num else None

    def on_factor1(self, I: Instrument) -> bool:
        return I.dim == self.dim and all(self.factor1_part(P) is not None
                                         for P in I.outcomes)

    def on_factor2(self, I: Instrument) -> bool:
        return I.dim == self.dim and all(self.factor2_part(P) is not None
                                         for P in I.outcomes)


QUBITS = TensorSplit(2, 2)


def singlet_vector() -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[1], v[2] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    return v


def singlet_state() -> DensityState:
    return DensityState.from_vector(singlet_vector())


def polarizer_basis(kind: str = "linear", theta: float = 0.0) -> np.ndarray:
    """Columns are the pass / block polarization vectors."""
    if kind == "linear":
        c, s = np.cos(theta), np.sin(theta)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if kind == "circular":
        return np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2)
    raise ValueError(f"unknown polarizer kind {kind!r}")


def polarizer_instrument(kind: str = "linear", theta: float = 0.0,
                         arm: int = 1) -> Instrument:
    """Two-outcome (pass, block) instrument on one arm of the two-photon space."""
    single = Instrument.from_basis(polarizer_basis(kind, theta),
                                   label=f"{kind}({theta:g})@arm{arm}")
    if arm == 1:
        return QUBITS.lift1(single)
    if arm == 2:
        return QUBITS.lift2(single)
    raise ValueError("arm must be 1 or 2")


def pass_probability(instr: Instrument, state: DensityState | None = None) -> float:
    state = singlet_state() if state is None else state
    return distribution(instr, state)[0]


def remote_mixture(basis) -> tuple[DensityState, Mixture]:
    """Measure arm 1 of the singlet in ``basis``; describe arm 2 afterwards.

    Returns the arm-2 aggregate and its decomposition into the conditional
    arm-2 states of each arm-1 outcome.
    """
    B = np.asarray(basis, dtype=complex)
    if B.shape != (2, 2):
        raise ValueError("basis must be two vectors in C^2")
    if not np.allclose(dagger(B) @ B, np.eye(2), atol=_tol().num):
        raise ValueError("basis is not orthonormal")
    instr = QUBITS.lift1(Instrument.from_basis(B, label="remote"))
    s = singlet_state()
    comps = []
    for P in instr.outcomes:
        prob, post = luders_update(s, P)
        if post is not None:
            comps.append((prob, partial_trace(post, (2, 2), keep=2)))
    agg = partial_trace(post_measurement_mixture(s, instr.outcomes)[0], (2, 2), keep=2)
    return agg, Mixture(tuple(comps), tag="arm-1 basis measurement",
                        aggregate=agg)


def composed_mixture(rho: DensityState, first, second) -> np.ndarray:
    """sum over (lambda, mu) of Q_mu P_lambda rho P_lambda Q_mu."""
    first = getattr(first, "outcomes", first)
    second = getattr(second, "outcomes", second)
    rho_a = sum(P.matrix @ rho.matrix @ P.matrix for P in first)
    return sum(Q.matrix @ rho_a @ Q.matrix for Q in second)


# ---------------------------------------------------------------------------
# the correlated state psi'

@dataclass
class PsiPrimeResult:
    psi_prime: np.ndarray
    bases: dict           # (i, j, k) -> d x |A(ijk)| orthonormal columns
    choices: dict         # (i, j) -> (p, beta)
    components: dict      # (i, j, k) -> coefficients of psi' in bases[i, j, k]
    original: dict        # (i, j, k) -> coefficients of psi in bases[i, j, k]
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        from .serialize import vector_to_json

        def key(t):
            return ",".join(str(x) for x in t)

        return {
            "psi_prime": vector_to_json(self.psi_prime),
            "lambda": [list(k) for k in sorted(self.bases)],
            "basis_sizes": {key(k): int(v.shape[1]) for k, v in sorted(self.bases.items())},
            "choices": {key(k): list(v) for k, v in sorted(self.choices.items())},
            "components": {key(k): vector_to_json(v)
                           for k, v in sorted(self.components.items())},
            "checks": self.checks,
        }


def _as_vector(Psi) -> np.ndarray:
    if isinstance(Psi, DensityState):
        return Psi.vector()
    v = np.asarray(Psi, dtype=complex).ravel()
    n = np.linalg.norm(v)
    if abs(n - 1.0) > _tol().tr:
        raise ValueError(f"state vector has norm {n!r}")
    return v


def construct_psi_prime(split: TensorSplit, I: Instrument, J: Instrument,
                        Jp: Instrument, Psi, seed=0,
                        choice_rng: np.random.Generator | None = None
                        ) -> PsiPrimeResult:
    """Build the state psi' on which (I, Jp) reproduces the statistics of (I, J) on Psi.

    I and J act on factor 1, Jp on factor 2, and Jp's outcome k is
    identified with J's outcome k. ``seed`` fixes the orthonormal bases of
    the joint ranges. The free choices default to the smallest admissible
    middle index p and the first basis vector; passing ``choice_rng``
    draws them at random instead.
    """
    if not (split.on_factor1(I) and split.on_factor1(J)):
        raise ConstructionError("I and J must act on factor 1 only")
    if not split.on_factor2(Jp):
        raise ConstructionError("Jp must act on factor 2 only")
    if len(Jp) != len(J):
        raise ConstructionError(f"Jp has {len(Jp)} outcomes, J has {len(J)}")
    check_commuting(I, J)
    psi = _as_vector(Psi)
    if psi.size != split.dim:
        raise DimensionError("state does not live on the split space")

    rng = np.random.default_rng(seed)
    d = split.dim
    n, m = len(I), len(J)
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    bases, original = {}, {}
    for i in range(n):
        for j in range(m):
            for k in range(m):
                M = I[i].matrix @ J[j].matrix @ Jp[k].matrix
                E = range_basis(M @ G)
                if E.shape[1]:
                    bases[i, j, k] = E
                    original[i, j, k] = dagger(E) @ psi

    zero = _tol().zero
    components = {key: np.zeros(E.shape[1], dtype=complex)
                  for key, E in bases.items()}
    choices = {}
    for i in range(n):
        for j in range(m):
            # weight of psi in P_i Q_j H, collected over every k and alpha
            w = sum(float(np.vdot(c, c).real) for (a, b, _), c in original.items()
                    if a == i and b == j)
            if w <= zero:
                continue
            ps = [p for p in range(m) if (i, p, j) in bases]
            if not ps:
                raise ConstructionError(
                    f"no middle index p with P_{i} Q_p Q'_{j} != 0 although "
                    f"||P_{i} Q_{j} Psi||^2 = {w:.3g}")
            if choice_rng is None:
                p, beta = ps[0], 0
            else:
                p = ps[int(choice_rng.integers(len(ps)))]
                beta = int(choice_rng.integers(bases[i, p, j].shape[1]))
            components[i, p, j][beta] = np.sqrt(w)
            choices[i, j] = (p, beta)

    psi_p = np.zeros(d, dtype=complex)
    for key, E in bases.items():
        psi_p = psi_p + E @ components[key]
    result = PsiPrimeResult(psi_p, bases, choices, components, original)
    result.checks = psi_prime_checks(I, J, Jp, psi, psi_p)
    return result


def psi_prime_checks(I: Instrument, J: Instrument, Jp: Instrument,
                     psi: np.ndarray, psi_p: np.ndarray) -> dict:
    """Norm and marginal-matching deviations computed from vectors directly."""
    norm_dev = abs(np.linalg.norm(psi_p) - 1.0)
    match = 0.0
    for i in range(len(I)):
        for k in range(len(J)):
            lhs = np.linalg.norm(I[i].matrix @ Jp[k].matrix @ psi_p) ** 2
            rhs = np.linalg.norm(I[i].matrix @ J[k].matrix @ psi) ** 2
            match = max(match, abs(lhs - rhs))
    return {"norm_deviation": float(norm_dev), "marginal_match_max": float(match)}


def ep_equalities(I: Instrument, J: Instrument, p: DensityState,
                  Jp: Instrument, pp: DensityState) -> dict:
    """Maximum deviation in each of the three equivalence-of-conditioning equalities.

    Computed with the instrument calculus (confluence tables and Lüders
    branches), independently of how pp was built.
    """
    joint = np.abs(confluence_joint(I, Jp, pp).probabilities
                   - confluence_joint(I, J, p).probabilities).max()
    cond = 0.0
    a, b = sequential(I, Jp, pp), sequential(I, J, p)
    wa, wb = distribution(I, pp), distribution(I, p)
    for i in range(len(I)):
        if wa[i] > _tol().zero and wb[i] > _tol().zero:
            cond = max(cond, float(np.abs(a.probabilities[i] / wa[i]
                                          - b.probabilities[i] / wb[i]).max()))
        elif max(wa[i], wb[i]) > _tol().zero:
            cond = max(cond, max(wa[i], wb[i]))
    marg = np.abs(wa - wb).max()
    return {"joint": float(joint), "conditional": float(cond),
            "marginal": float(marg)}


# ---------------------------------------------------------------------------
# finding a split and verifying EP

@dataclass
class SplitFrame:
    """A change of basis W that puts I and J on factor 1 of ``split``."""
    split: TensorSplit
    W: np.ndarray

    def to_split(self, M: np.ndarray) -> np.ndarray:
        return dagger(self.W) @ M @ self.W

    def from_split(self, M: np.ndarray) -> np.ndarray:
        return self.W @ M @ dagger(self.W)


def find_tensor_split(I: Instrument, J: Instrument, min_d2: int = 2,
                      split: TensorSplit | None = None) -> SplitFrame:
    """Simultaneously block-diagonalize I and J into (something) (x) 1_{d2}.

    Works when every joint block P_i Q_j has rank divisible by d2; the
    smallest admissible d2 >= ``min_d2`` is used. If ``split`` is given and
    I, J already act on its factor 1, the identity frame is returned.
    """
    check_commuting(I, J)
    d = I.dim
    if split is not None:
        if split.dim != d:
            raise NoTensorSplitError("given split does not match the dimension")
        if split.on_factor1(I) and split.on_factor1(J):
            return SplitFrame(split, np.eye(d, dtype=complex))
        raise NoTensorSplitError("instruments do not act on factor 1 of the given split")
    blocks = []
    for P in I.outcomes:
        for Q in J.outcomes:
            E = range_basis(P.matrix @ Q.matrix)
            if E.shape[1]:
                blocks.append(E)
    ranks = [E.shape[1] for E in blocks]
    for d2 in range(max(min_d2, 1), d + 1):
        if d % d2 or any(r % d2 for r in ranks):
            continue
        cols = []
        for E in blocks:
            for g in range(E.shape[1] // d2):
                cols.extend(E[:, g * d2 + b] for b in range(d2))
        W = np.column_stack(cols)
        return SplitFrame(TensorSplit(d // d2, d2), W)
    raise NoTensorSplitError(
        f"joint block ranks {ranks} admit no common factor d2 >= {min_d2} dividing {d}")


def canonical_remote_instrument(d2: int, m: int, split: TensorSplit) -> Instrument:
    """Computational basis of factor 2 coarse-grained to m outcomes."""
    if d2 < m:
        raise NoTensorSplitError(f"factor 2 has dimension {d2} < {m} outcomes")
    groups = [[k] for k in range(m - 1)] + [list(range(m - 1, d2))]
    return split.lift2(Instrument.from_basis(np.eye(d2), groups), label="J'")


def witness_regions(spatial_dim: int = 1, separation: float = 10.0):
    """Unit boxes for the factor-1 and factor-2 instruments, space-like apart."""
    lo1 = np.zeros(spatial_dim + 1)
    hi1 = np.ones(spatial_dim + 1)
    shift = np.zeros(spatial_dim + 1)
    shift[1] = separation
    return SpacetimeRegion(lo1, hi1), SpacetimeRegion(lo1 + shift, hi1 + shift)


def verify_ep(I: Instrument, J: Instrument, p, tol: float = 1e-10,
              split: TensorSplit | None = None, seed=0):
    """Produce (J', p') for commuting (I, J) on pure p and check the EP equalities.

    Returns ``(report, Jprime, pprime)`` in the original basis.
    """
    check_commuting(I, J)
    state = p if isinstance(p, DensityState) else DensityState.from_vector(p)
    if not state.is_pure:
        raise ValueError("equivalence of conditioning is stated for pure states")
    frame = find_tensor_split(I, J, min_d2=len(J), split=split)
    sp = frame.split
    In = Instrument(tuple(frame.to_split(P.matrix) for P in I.outcomes), I.label)
    Jn = Instrument(tuple(frame.to_split(Q.matrix) for Q in J.outcomes), J.label)
    Jp = canonical_remote_instrument(sp.d2, len(J), sp)
    psi = dagger(frame.W) @ state.vector()
    res = construct_psi_prime(sp, In, Jn, Jp, psi, seed=seed)

    Jprime = Instrument(tuple(frame.from_split(Q.matrix) for Q in Jp.outcomes), "J'")
    pprime = DensityState.from_vector(frame.W @ res.psi_prime)
    eq = ep_equalities(I, J, state, Jprime, pprime)
    check_commuting(I, Jprime)
    O1, O2 = witness_regions()
    sl = spacelike(O1, O2)
    dev = max(eq.values())
    details = dict(eq)
    details.update(res.checks)
    details["split"] = [sp.d1, sp.d2]
    details["witness_regions"] = [O1.to_dict(), O2.to_dict()]
    details["witness_spacelike"] = sl
    passed = dev <= tol and sl and res.checks["norm_deviation"] <= tol
    return Report("equivalence_of_conditioning", passed, dev, tol,
                  details=details), Jprime, pprime
