"""Finite orthomodular lattices.

A lattice is given by its covering pairs (Hasse diagram edges) and an
orthocomplementation map. The order is the reflexive-transitive closure of
the covering pairs; meet and join tables are computed once at construction
and every lattice axiom is validated rather than assumed.

Exhaustive checkers are O(N^3) and capped at ``MAX_ELEMENTS`` elements.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels

MAX_ELEMENTS = 64


class LatticeError(ValueError):
    """A lattice spec violates an axiom; ``counterexample`` names the elements."""

    def __init__(self, message, counterexample=()):
        super().__init__(message)
        self.counterexample = tuple(int(x) for x in counterexample)


@dataclass(frozen=True)
class LatticeReport:
    property: str
    passed: bool
    counterexample: tuple = ()
    detail: str = ""

    def to_dict(self) -> dict:
        return {"property": self.property, "pass": self.passed,
                "counterexample": list(self.counterexample),
                "detail": self.detail}


@dataclass(frozen=True, eq=False)
class OrthoLattice:
    leq: np.ndarray
    ortho: np.ndarray
    meet_table: np.ndarray
    join_table: np.ndarray
    bottom: int
    top: int
    names: tuple = field(default=())

    @property
    def n(self) -> int:
        return self.leq.shape[0]

    @property
    def elements(self) -> range:
        return range(self.n)

    def name(self, a: int) -> str:
        return self.names[a] if self.names else str(a)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def __repr__(self):
        return f"OrthoLattice(n={self.n}, bottom={self.bottom}, top={self.top})"


def build_lattice(n: int, covers: Sequence[Sequence[int]],
                  ortho: Sequence[int], names: Sequence[str] | None = None
                  ) -> OrthoLattice:
    """Build and validate an ortholattice from covering pairs.

    Parameters
    ----------
    n : int
        Number of elements, indexed ``0..n-1``.
    covers : sequence of (lo, hi)
        Pairs with ``lo < hi``; the order is their reflexive-transitive
        closure, so any generating set of strict relations works.
    ortho : sequence of int
        Image of each element under orthocomplementation.
    names : sequence of str, optional
        Display names.

    Raises
    ------
    LatticeError
        On a cyclic order, a missing meet or join, or an ortho map that is
        not an order-reversing involutive complementation.
    """
    if n < 1:
        raise LatticeError("lattice needs at least one element")
    if n > MAX_ELEMENTS:
        raise LatticeError(f"{n} elements exceeds the cap of {MAX_ELEMENTS}")
    if names is not None and len(names) != n:
        raise LatticeError(f"expected {n} names, got {len(names)}")
    adj = np.zeros((n, n), dtype=np.uint8)
    for pair in covers:
        if len(pair) != 2:
            raise LatticeError(f"covering pair {pair!r} is not a pair")
        lo, hi = (int(x) for x in pair)
        if not (0 <= lo < n and 0 <= hi < n):
            raise LatticeError(f"covering pair ({lo}, {hi}) out of range")
        if lo == hi:
            raise LatticeError(f"covering pair ({lo}, {hi}) is reflexive", (lo,))
        adj[lo, hi] = 1
    leq = kernels.closure(adj)
    both = leq.astype(bool) & leq.T.astype(bool)
    np.fill_diagonal(both, False)
    if both.any():
        a, b = np.argwhere(both)[0]
        raise LatticeError(f"covering pairs contain a cycle through {a} and {b}",
                           (a, b))

    ortho_arr = np.asarray(ortho, dtype=np.int64)
    if ortho_arr.shape != (n,):
        raise LatticeError(f"ortho map must have {n} entries")
    if ortho_arr.min() < 0 or ortho_arr.max() >= n:
        raise LatticeError("ortho map has out-of-range entries")
    for a in range(n):
        if ortho_arr[ortho_arr[a]] != a:
            raise LatticeError(f"ortho is not an involution at {a}",
                               (a, ortho_arr[a]))

    minimal = [a for a in range(n) if leq[:, a].sum() == 1]
    maximal = [a for a in range(n) if leq[a, :].sum() == 1]
    if len(minimal) != 1 or len(maximal) != 1:
        raise LatticeError("order must have a unique least and greatest element",
                           tuple(minimal) + tuple(maximal))
    bottom, top = minimal[0], maximal[0]

    meet, join = kernels.meet_join_tables(leq)
    missing = np.argwhere((meet < 0) | (join < 0))
    if len(missing):
        a, b = missing[0]
        which = "meet" if meet[a, b] < 0 else "join"
        raise LatticeError(f"elements {a} and {b} have no {which}; not a lattice",
                           (a, b))

    a, b = kernels.order_reversal_violation(leq, ortho_arr)
    if a >= 0:
        raise LatticeError(
            f"ortho is not order-reversing: {a} <= {b} but {ortho_arr[b]} "
            f"is not <= {ortho_arr[a]}", (a, b))
    for a in range(n):
        oa = ortho_arr[a]
        if join[a, oa] != top or meet[a, oa] != bottom:
            raise LatticeError(f"{a} and its orthocomplement {oa} are not "
                               "complements", (a,))

    leq.setflags(write=False)
    ortho_arr.setflags(write=False)
    meet.setflags(write=False)
    join.setflags(write=False)
    return OrthoLattice(leq=leq, ortho=ortho_arr, meet_table=meet,
                        join_table=join, bottom=int(bottom), top=int(top),
                        names=tuple(names) if names is not None else ())


def meet(L: OrthoLattice, a: int, b: int) -> int:
    return int(L.meet_table[a, b])


def join(L: OrthoLattice, a: int, b: int) -> int:
    return int(L.join_table[a, b])


def orthocomplement(L: OrthoLattice, a: int) -> int:
    return int(L.ortho[a])


def orthogonal(L: OrthoLattice, a: int, b: int) -> bool:
    """a is orthogonal to b iff a <= b'."""
    return L.le(a, orthocomplement(L, b))


def commutes(L: OrthoLattice, a: int, b: int) -> bool:
    """a commutes with b iff a = (a meet b) join (a meet b')."""
    return join(L, meet(L, a, b), meet(L, a, orthocomplement(L, b))) == a


def covers(L: OrthoLattice, a: int, b: int) -> bool:
    """True iff a < b with nothing strictly between."""
    if a == b or not L.le(a, b):
        return False
    between = L.leq[a, :].astype(bool) & L.leq[:, b].astype(bool)
    return int(between.sum()) == 2


def atoms(L: OrthoLattice) -> list[int]:
    return [a for a in L.elements if covers(L, L.bottom, a)]


def is_instrument(L: OrthoLattice, outcomes: Sequence[int]) -> bool:
    """Pairwise orthogonal propositions whose join is the top element."""
    for a, b in itertools.combinations(outcomes, 2):
        if not orthogonal(L, a, b):
            return False
    acc = L.bottom
    for a in outcomes:
        acc = join(L, acc, a)
    return acc == L.top


def orthomodular_pair_holds(L: OrthoLattice, a: int, b: int) -> bool:
    if not L.le(a, b):
        return True
    return join(L, a, meet(L, b, orthocomplement(L, a))) == b


def covering_pair_holds(L: OrthoLattice, p: int, a: int) -> bool:
    if not covers(L, L.bottom, p) or meet(L, p, a) != L.bottom:
        return True
    return covers(L, a, join(L, a, p))


def check_orthomodular(L: OrthoLattice) -> LatticeReport:
    a, b = kernels.orthomodular_violation(L.leq, L.meet_table, L.join_table,
                                          L.ortho)
    if a < 0:
        return LatticeReport("orthomodular", True)
    return LatticeReport(
        "orthomodular", False, (int(a), int(b)),
        f"{L.name(a)} <= {L.name(b)} but {L.name(a)} v ({L.name(b)} ^ "
        f"{L.name(a)}') != {L.name(b)}")


def check_covering_law(L: OrthoLattice) -> LatticeReport:
    """Check that a v p covers a for every atom p and element a with p ^ a = 0."""
    p, a = kernels.covering_violation(L.leq, L.meet_table, L.join_table,
                                      L.bottom)
    if p < 0:
        return LatticeReport("covering_law", True)
    j = join(L, a, p)
    return LatticeReport(
        "covering_law", False, (int(p), int(a)),
        f"atom {L.name(p)} is disjoint from {L.name(a)} but "
        f"{L.name(a)} v {L.name(p)} = {L.name(j)} does not cover {L.name(a)}")


def check_de_morgan(L: OrthoLattice) -> LatticeReport:
    o = L.ortho
    lhs = o[L.meet_table]
    rhs = L.join_table[o[:, None], o[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        return LatticeReport("de_morgan", False, tuple(int(x) for x in bad[0]))
    return LatticeReport("de_morgan", True)


def check_commutes_symmetric(L: OrthoLattice) -> LatticeReport:
    for a in L.elements:
        for b in range(a + 1, L.n):
            if commutes(L, a, b) != commutes(L, b, a):
                return LatticeReport("commutes_symmetric", False, (a, b))
    return LatticeReport("commutes_symmetric", True)


_PAIR_CHECKS = {
    "orthomodular": orthomodular_pair_holds,
    "covering_law": covering_pair_holds,
    "commutes_symmetric": lambda L, a, b: commutes(L, a, b) == commutes(L, b, a),
    "de_morgan": lambda L, a, b: (orthocomplement(L, meet(L, a, b))
                                  == join(L, orthocomplement(L, a),
                                          orthocomplement(L, b))),
}


def recheck(L: OrthoLattice, report: LatticeReport) -> bool:
    """Re-evaluate a report's property on its counterexample alone.

    Returns True when the property holds there, so a genuine failing report
    gives False.
    """
    return _PAIR_CHECKS[report.property](L, *report.counterexample)


# ---------------------------------------------------------------------------
# spec files

def lattice_from_dict(spec: dict) -> OrthoLattice:
    for key in ("n", "covers", "ortho"):
        if key not in spec:
            raise KeyError(key)
    return build_lattice(spec["n"], spec["covers"], spec["ortho"],
                         spec.get("names"))


def lattice_to_dict(L: OrthoLattice) -> dict:
    pairs = [[a, b] for a in L.elements for b in L.elements if covers(L, a, b)]
    out = {"n": L.n, "covers": pairs, "ortho": [int(x) for x in L.ortho]}
    if L.names:
        out["names"] = list(L.names)
    return out


def load_lattice(path) -> OrthoLattice:
    with open(path) as fh:
        return lattice_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# standard families

def boolean_spec(k: int) -> dict:
    """Spec of the Boolean algebra of subsets of a k-element set."""
    n = 1 << k
    pairs = [[s, s | (1 << i)] for s in range(n) for i in range(k)
             if not s & (1 << i)]
    names = ["{" + ",".join(str(i) for i in range(k) if s >> i & 1) + "}"
             for s in range(n)]
    return {"n": n, "covers": pairs, "ortho": [(n - 1) ^ s for s in range(n)],
            "names": names}


def boolean(k: int) -> OrthoLattice:
    return lattice_from_dict(boolean_spec(k))


def mo_spec(k: int) -> dict:
    """Spec of MO_k: 0, 1 and k incomparable pairs of atoms a_i, a_i'."""
    n = 2 * k + 2
    bottom, top = 0, n - 1
    names = ["0"]
    ortho = [top]
    pairs = []
    for i in range(k):
        a, ac = 1 + 2 * i, 2 + 2 * i
        names += [f"a{i}", f"a{i}'"]
        ortho += [ac, a]
        pairs += [[bottom, a], [bottom, ac], [a, top], [ac, top]]
    names.append("1")
    ortho.append(bottom)
    return {"n": n, "covers": pairs, "ortho": ortho, "names": names}


def mo(k: int) -> OrthoLattice:
    return lattice_from_dict(mo_spec(k))


def benzene_spec() -> dict:
    """The hexagon O6 with its standard (non-orthomodular) complementation.

    0 < a < b' < 1 and 0 < b < a' < 1.
    """
    names = ["0", "a", "b'", "b", "a'", "1"]
    return {"n": 6, "covers": [[0, 1], [1, 2], [2, 5], [0, 3], [3, 4], [4, 5]],
            "ortho": [5, 4, 3, 2, 1, 0], "names": names}


def pasting_spec(blocks: Sequence[Sequence[int]]) -> dict:
    """Spec of the pasting of Boolean blocks sharing atoms.

    ``blocks`` lists each block's atoms (sortable labels). Two block subsets
    are identified when they are equal as atom sets or have equal
    complements within their blocks. The order is generated by inclusion
    inside each block. The result may fail to be a lattice;
    ``build_lattice`` reports that.
    """
    blocks = [frozenset(b) for b in blocks]
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    nodes = []
    for bi, block in enumerate(blocks):
        ordered = sorted(block)
        for r in range(len(ordered) + 1):
            for subset in itertools.combinations(ordered, r):
                s = frozenset(subset)
                node = (bi, s)
                nodes.append(node)
                if not s:
                    union(node, ("zero",))
                elif s == block:
                    union(node, ("one",))
                else:
                    union(node, ("set", s))
                    union(node, ("co", block - s))

    index = {}
    elem_of = {}
    first = {}
    for node in nodes:
        root = find(node)
        if root not in index:
            index[root] = len(index)
            first[index[root]] = node
        elem_of[node] = index[root]
    n = len(index)

    pairs = set()
    for bi, s in nodes:
        for atom in blocks[bi] - s:
            pairs.add((elem_of[(bi, s)], elem_of[(bi, s | {atom})]))
    ortho = [elem_of[(first[i][0], blocks[first[i][0]] - first[i][1])]
             for i in range(n)]

    def label(i):
        bi, s = first[i]
        if not s:
            return "0"
        if s == blocks[bi]:
            return "1"
        return "{" + ",".join(str(x) for x in sorted(s)) + "}"

    return {"n": n, "covers": sorted(list(p) for p in pairs), "ortho": ortho,
            "names": [label(i) for i in range(n)]}


def random_pasting_search(rng: np.random.Generator, attempts: int = 200,
                          max_blocks: int = 4, block_size: int = 3,
                          max_elements: int = MAX_ELEMENTS):
    """Search random tree-like pastings for covering-law failures.

    Yields ``(blocks, spec, report)`` for every candidate that builds as a
    valid orthomodular lattice but fails ``check_covering_law``.
    """
    for _ in range(attempts):
        nblocks = int(rng.integers(2, max_blocks + 1))
        blocks = []
        next_atom = 0
        for b in range(nblocks):
            atoms_ = []
            if b > 0 and rng.random() < 0.7:
                # share one atom with an earlier block, at most one per pair
                src = blocks[int(rng.integers(len(blocks)))]
                atoms_.append(src[int(rng.integers(len(src)))])
            while len(atoms_) < block_size:
                atoms_.append(next_atom)
                next_atom += 1
            blocks.append(atoms_)
        shared_ok = all(len(set(x) & set(y)) <= 1
                        for x, y in itertools.combinations(blocks, 2))
        if not shared_ok:
            continue
        spec = pasting_spec(blocks)
        if spec["n"] > max_elements:
            continue
        try:
            L = lattice_from_dict(spec)
        except LatticeError:
            continue
        if not check_orthomodular(L).passed:
            continue
        rep = check_covering_law(L)
        if not rep.passed:
            yield blocks, spec, rep
