"""Minkowski causal bookkeeping with c = 1.

Regions are axis-aligned boxes in R^(1+d), coordinate 0 being time. Frame
changes are Poincaré elements x -> B(v) R x + a (rotation, then boost, then
translation). Boosted boxes are parallelepipeds: ``transform_region``
stores their corner bounding box and flags it approximate, while order and
separation decisions always use the exactly transformed corner events.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .instruments import (Instrument, JointResult, Report, check_commuting,
                          confluence_joint, sequential, _compare_states,
                          _transpose)
from .hilbert import DensityState, dagger
from .tolerances import current as _tol


class NotSpacelikeError(ValueError):
    pass


class S2Violation(ValueError):
    """Instruments in space-like separated regions fail to commute."""


@dataclass(frozen=True, eq=False)
class SpacetimeRegion:
    lo: np.ndarray
    hi: np.ndarray
    approximate: bool = False

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float).ravel()
        hi = np.array(self.hi, dtype=float).ravel()
        if lo.shape != hi.shape or lo.size < 2:
            raise ValueError("region needs matching lo/hi with 1 + d >= 2 entries")
        if np.any(lo > hi):
            raise ValueError("empty region: lo > hi on some axis")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("region must be bounded")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def box(cls, t: tuple[float, float], *space: tuple[float, float]):
        ivs = [t, *space]
        return cls([a for a, _ in ivs], [b for _, b in ivs])

    @property
    def dim(self) -> int:
        """Number of spatial dimensions."""
        return self.lo.size - 1

    @property
    def center(self) -> np.ndarray:
        return (self.lo + self.hi) / 2

    def corners(self) -> np.ndarray:
        return np.array(list(itertools.product(*zip(self.lo, self.hi))))

    def to_dict(self) -> dict:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}

    def __repr__(self):
        ivs = " x ".join(f"[{a:g},{b:g}]" for a, b in zip(self.lo, self.hi))
        return f"SpacetimeRegion({ivs}{', approx' if self.approximate else ''})"


def boost_matrix(v) -> np.ndarray:
    """Passive boost to a frame moving with velocity v: t' = gamma (t - v.x)."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    d = v.size
    speed2 = float(v @ v)
    if speed2 >= 1.0:
        raise ValueError(f"|v| = {np.sqrt(speed2)} is not below c = 1")
    g = 1.0 / np.sqrt(1.0 - speed2)
    L = np.eye(d + 1)
    L[0, 0] = g
    L[0, 1:] = -g * v
    L[1:, 0] = -g * v
    if speed2 > 0:
        L[1:, 1:] += (g - 1.0) * np.outer(v, v) / speed2
    return L


@dataclass(frozen=True, eq=False)
class FrameTransform:
    velocity: np.ndarray
    rotation: np.ndarray | None = None
    translation: np.ndarray | None = None
    unitary: np.ndarray | None = None

    def __post_init__(self):
        v = np.atleast_1d(np.array(self.velocity, dtype=float))
        d = v.size
        if float(v @ v) >= 1.0:
            raise ValueError("boost speed must be below 1")
        R = np.eye(d) if self.rotation is None else np.array(self.rotation, float)
        if R.shape != (d, d):
            raise ValueError(f"rotation must be {d}x{d}")
        if np.linalg.norm(R.T @ R - np.eye(d)) > _tol().num:
            raise ValueError("rotation is not orthogonal")
        a = (np.zeros(d + 1) if self.translation is None
             else np.array(self.translation, float).ravel())
        if a.shape != (d + 1,):
            raise ValueError(f"translation must have {d + 1} entries")
        U = None if self.unitary is None else np.array(self.unitary, complex)
        if U is not None and np.linalg.norm(dagger(U) @ U - np.eye(U.shape[0])) > _tol().num:
            raise ValueError("frame unitary is not unitary")
        for name, arr in (("velocity", v), ("rotation", R), ("translation", a)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "unitary", U)

    @classmethod
    def identity(cls, d: int = 1) -> "FrameTransform":
        return cls(np.zeros(d))

    @classmethod
    def boost(cls, v, unitary=None) -> "FrameTransform":
        return cls(np.atleast_1d(v), unitary=unitary)

    @property
    def dim(self) -> int:
        return self.velocity.size

    def lorentz(self) -> np.ndarray:
        Rx = np.eye(self.dim + 1)
        Rx[1:, 1:] = self.rotation
        return boost_matrix(self.velocity) @ Rx

    def apply(self, events) -> np.ndarray:
        x = np.atleast_2d(np.asarray(events, dtype=float))
        return x @ self.lorentz().T + self.translation

    def compose(self, other: "FrameTransform") -> "FrameTransform":
        """self after other."""
        L = self.lorentz() @ other.lorentz()
        a = self.lorentz() @ other.translation + self.translation
        v = -L[1:, 0] / L[0, 0]
        R = np.linalg.solve(boost_matrix(v), L)[1:, 1:]
        U = None
        if self.unitary is not None or other.unitary is not None:
            n = (self.unitary if self.unitary is not None else other.unitary).shape[0]
            U1 = self.unitary if self.unitary is not None else np.eye(n)
            U2 = other.unitary if other.unitary is not None else np.eye(n)
            U = U1 @ U2
        return FrameTransform(v, R, a, U)

    def state_unitary(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=complex) if self.unitary is None else self.unitary

    def is_exact_on_boxes(self) -> bool:
        """Boxes map to boxes: no boost and a signed-permutation rotation."""
        if np.any(self.velocity != 0):
            return False
        R = np.abs(self.rotation)
        return bool(np.all((np.isclose(R, 0) | np.isclose(R, 1)))
                    and np.allclose(R.sum(axis=0), 1))

    def to_dict(self) -> dict:
        out = {"v": self.velocity.tolist(), "rotation": self.rotation.tolist(),
               "translation": self.translation.tolist()}
        if self.unitary is not None:
            from .serialize import matrix_to_json
            out["unitary"] = matrix_to_json(self.unitary)
        return out


def _check_dims(*regions):
    dims = {r.dim for r in regions}
    if len(dims) != 1:
        raise ValueError(f"regions have different spatial dimensions: {sorted(dims)}")


def spacelike(O1: SpacetimeRegion, O2: SpacetimeRegion) -> bool:
    """Every point of O1 is space-like to every point of O2."""
    _check_dims(O1, O2)
    gaps = np.maximum(0.0, np.maximum(O2.lo[1:] - O1.hi[1:], O1.lo[1:] - O2.hi[1:]))
    dt = max(O1.hi[0] - O2.lo[0], O2.hi[0] - O1.lo[0])
    return float(gaps @ gaps) > dt * dt


def timelike_ordered(O1: SpacetimeRegion, O2: SpacetimeRegion) -> bool:
    """Every point of O2 is in the strict causal future of every point of O1."""
    _check_dims(O1, O2)
    far = np.maximum(np.abs(O2.hi[1:] - O1.lo[1:]), np.abs(O2.lo[1:] - O1.hi[1:]))
    dt = O2.lo[0] - O1.hi[0]
    return dt > 0 and float(far @ far) < dt * dt


def transform_region(g: FrameTransform, O: SpacetimeRegion) -> SpacetimeRegion:
    img = g.apply(O.corners())
    return SpacetimeRegion(img.min(axis=0), img.max(axis=0),
                           approximate=O.approximate or not g.is_exact_on_boxes())


def time_interval(g: FrameTransform, O: SpacetimeRegion) -> tuple[float, float]:
    """Exact extent of the image of O along the new time axis."""
    t = g.apply(O.corners())[:, 0]
    return float(t.min()), float(t.max())


class Order(enum.Enum):
    BEFORE = "before"
    AFTER = "after"
    OVERLAPPING = "overlapping"


def temporal_order(g: FrameTransform, O1: SpacetimeRegion,
                   O2: SpacetimeRegion) -> Order:
    """Order of O1 relative to O2 in the frame g."""
    a0, a1 = time_interval(g, O1)
    b0, b1 = time_interval(g, O2)
    if a1 < b0:
        return Order.BEFORE
    if b1 < a0:
        return Order.AFTER
    return Order.OVERLAPPING


def minkowski_interval(x, y) -> float:
    """(dt)^2 - |dx|^2 between two events; positive for time-like pairs."""
    d = np.asarray(y, float) - np.asarray(x, float)
    return float(d[0] ** 2 - d[1:] @ d[1:])


def reordering_boost(O1: SpacetimeRegion, O2: SpacetimeRegion):
    """A boost that reverses the rest-frame order of the two region centers.

    Returns None unless the regions are space-like separated. The boost is
    taken along the axis through the centers, with speed halfway between
    the critical speed dt/|dx| and 1 (for simultaneous centers: 0.5, in the
    direction that makes O2 happen first). A float is returned for 1+1
    dimensions and a velocity vector otherwise.
    """
    if not spacelike(O1, O2):
        return None
    c1, c2 = O1.center, O2.center
    dt = c2[0] - c1[0]
    dx = c2[1:] - c1[1:]
    dist = float(np.sqrt(dx @ dx))
    axis = dx / dist
    crit = dt / dist
    sign = np.sign(crit) if crit != 0 else 1.0
    speed = (crit + sign) / 2
    v = speed * axis
    return float(v[0]) if O1.dim == 1 else v


@dataclass(frozen=True)
class LocalizedInstrument:
    instrument: Instrument
    region: SpacetimeRegion
    # position of the realization instant inside the region's time extent
    instant: float = 0.5

    def realization_instant(self, g: FrameTransform) -> float:
        t0, t1 = time_interval(g, self.region)
        return t0 + self.instant * (t1 - t0)


@dataclass(frozen=True)
class Scenario:
    I: LocalizedInstrument
    J: LocalizedInstrument
    state: DensityState
    frames: tuple = field(default=())


def frame_description(g: FrameTransform, I: LocalizedInstrument,
                      J: LocalizedInstrument) -> str:
    """'simultaneous', 'I_first' or 'J_first' for the frame g."""
    order = temporal_order(g, I.region, J.region)
    if order is Order.OVERLAPPING:
        return "simultaneous"
    tI, tJ = I.realization_instant(g), J.realization_instant(g)
    return "I_first" if tI < tJ else "J_first"


def _frame_joint(g: FrameTransform, how: str, I: Instrument, J: Instrument,
                 p: DensityState) -> JointResult:
    U = g.state_unitary(p.dim)
    gI, gJ = I.conjugate(U), J.conjugate(U)
    gp = DensityState(U @ p.matrix @ dagger(U))
    if how == "simultaneous":
        res = confluence_joint(gI, gJ, gp)
    elif how == "I_first":
        res = sequential(gI, gJ, gp)
    else:
        res = _transpose(sequential(gJ, gI, gp))
    # back to the reference description
    back = tuple(tuple(None if s is None
                       else DensityState(dagger(U) @ s.matrix @ U)
                       for s in row) for row in res.states)
    return JointResult(res.probabilities, back)


def frame_consistency(I: LocalizedInstrument, J: LocalizedInstrument,
                      p: DensityState, frames, tol: float = 1e-10) -> Report:
    """Every frame's description of the joint experiment agrees.

    The reference is the confluence I ^ J on p in the original frame.
    """
    if not spacelike(I.region, J.region):
        raise NotSpacelikeError("instrument regions are not space-like separated")
    try:
        check_commuting(I.instrument, J.instrument)
    except ValueError as exc:
        raise S2Violation(f"space-like instruments must commute: {exc}") from exc
    ref = confluence_joint(I.instrument, J.instrument, p)
    dev = 0.0
    kinds = []
    for g in frames:
        how = frame_description(g, I, J)
        kinds.append(how)
        res = _frame_joint(g, how, I.instrument, J.instrument, p)
        dp = float(np.abs(res.probabilities - ref.probabilities).max())
        ds = float(_compare_states(res, ref).max())
        dev = max(dev, dp, ds)
    return Report("frame_consistency", dev <= tol, dev, tol,
                  details={"descriptions": kinds})


def ordering_speed(O1: SpacetimeRegion, O2: SpacetimeRegion, axis,
                   iters: int = 60) -> float | None:
    """Smallest boost speed along ``axis`` that strictly orders the two regions.

    Found by bisection on ``temporal_order``; None when even speeds close
    to 1 leave the time intervals overlapping.
    """
    axis = np.asarray(axis, float)
    axis = axis / np.linalg.norm(axis)

    def ordered(s):
        return temporal_order(FrameTransform.boost(s * axis), O1, O2) is not Order.OVERLAPPING

    hi = 1 - 1e-9
    if not ordered(hi):
        return None
    lo = 0.0
    if ordered(lo):
        return 0.0
    for _ in range(iters):
        mid = (lo + hi) / 2
        if ordered(mid):
            hi = mid
        else:
            lo = mid
    return hi


def random_scenario(rng: np.random.Generator, split=(2, 2), mix: bool = True,
                    random_unitaries: bool = True) -> Scenario:
    """Space-like two-instrument scenario in 1+1 seen from three frames.

    The regions share a time window in the rest frame, so the rest frame
    sees a single confluent experiment; two opposite boosts then order the
    experiments both ways.
    """
    from .hilbert import random_state, random_unitary
    from .instruments import tensor_pair

    d1, d2 = split
    I, J = tensor_pair(d1, d2, rng, mix=mix)
    p = random_state(d1 * d2, True, rng)
    t0 = float(rng.uniform(-5, 5))
    wt1, wt2 = rng.uniform(0.1, 1.0, size=2)
    wx1, wx2 = rng.uniform(0.1, 1.0, size=2)
    x0 = float(rng.uniform(-5, 5))
    gap = float(rng.uniform(2.5, 10.0))
    O1 = SpacetimeRegion.box((t0, t0 + wt1), (x0, x0 + wx1))
    start = x0 + wx1 + gap
    O2 = SpacetimeRegion.box((t0, t0 + wt2), (start, start + wx2))
    frames = [FrameTransform.identity(1)]
    for sign in (1.0, -1.0):
        vmin = ordering_speed(O1, O2, [sign])
        v = sign * (vmin + 1.0) / 2
        U = random_unitary(d1 * d2, rng) if random_unitaries else None
        frames.append(FrameTransform.boost(v, unitary=U))
    return Scenario(LocalizedInstrument(I, O1), LocalizedInstrument(J, O2), p,
                    tuple(frames))


def random_region_pair(rng: np.random.Generator, kind: str, dim: int = 1):
    """Random box pair that is either 'spacelike' or 'timelike' ordered."""
    while True:
        lo1 = rng.uniform(-5, 5, size=dim + 1)
        w1 = rng.uniform(0.05, 1.0, size=dim + 1)
        w2 = rng.uniform(0.05, 1.0, size=dim + 1)
        shift = np.zeros(dim + 1)
        if kind == "spacelike":
            shift[0] = rng.uniform(-1.0, 1.0)
            shift[1:] = rng.uniform(-8, 8, size=dim)
        else:
            shift[0] = rng.uniform(3.0, 12.0)
            shift[1:] = rng.uniform(-0.5, 0.5, size=dim)
        O1 = SpacetimeRegion(lo1, lo1 + w1)
        O2 = SpacetimeRegion(lo1 + shift, lo1 + shift + w2)
        ok = spacelike(O1, O2) if kind == "spacelike" else timelike_ordered(O1, O2)
        if ok:
            return O1, O2
