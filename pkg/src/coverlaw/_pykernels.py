"""Pure-Python versions of the lattice kernels.

Same signatures and return conventions as the compiled ``_ckernels``
module: arrays in, arrays or index pairs out, ``-1`` for "none".
"""
import numpy as np


def closure(adj):
    n = adj.shape[0]
    reach = [[bool(adj[i, j]) or i == j for j in range(n)] for i in range(n)]
    for k in range(n):
        row_k = reach[k]
        for i in range(n):
            row_i = reach[i]
            if row_i[k]:
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return np.array(reach, dtype=np.uint8).reshape(n, n)


def meet_join_tables(leq):
    n = leq.shape[0]
    le = leq.astype(bool).tolist()
    meet = [[-1] * n for _ in range(n)]
    join = [[-1] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            glb = -1
            for c in range(n):
                if le[c][a] and le[c][b] and (glb < 0 or le[glb][c]):
                    glb = c
            if glb >= 0:
                for c in range(n):
                    if le[c][a] and le[c][b] and not le[c][glb]:
                        glb = -1
                        break
            lub = -1
            for c in range(n):
                if le[a][c] and le[b][c] and (lub < 0 or le[c][lub]):
                    lub = c
            if lub >= 0:
                for c in range(n):
                    if le[a][c] and le[b][c] and not le[lub][c]:
                        lub = -1
                        break
            meet[a][b] = meet[b][a] = glb
            join[a][b] = join[b][a] = lub
    return (np.array(meet, dtype=np.int64).reshape(n, n),
            np.array(join, dtype=np.int64).reshape(n, n))


def order_reversal_violation(leq, ortho):
    n = leq.shape[0]
    le = leq.astype(bool).tolist()
    o = [int(x) for x in ortho]
    for a in range(n):
        for b in range(n):
            if le[a][b] and not le[o[b]][o[a]]:
                return a, b
    return -1, -1


def orthomodular_violation(leq, meet, join, ortho):
    n = leq.shape[0]
    le = leq.astype(bool).tolist()
    m = meet.tolist()
    j = join.tolist()
    o = [int(x) for x in ortho]
    for a in range(n):
        for b in range(n):
            if le[a][b] and j[a][m[b][o[a]]] != b:
                return a, b
    return -1, -1


def covering_violation(leq, meet, join, bottom):
    n = leq.shape[0]
    le = leq.astype(bool).tolist()
    m = meet.tolist()
    j = join.tolist()
    atoms = [p for p in range(n) if p != bottom and _covers(le, n, bottom, p)]
    for p in atoms:
        for a in range(n):
            if m[p][a] != bottom:
                continue
            if not _covers(le, n, a, j[a][p]):
                return p, a
    return -1, -1


def _covers(le, n, a, b):
    if a == b or not le[a][b]:
        return False
    for c in range(n):
        if c != a and c != b and le[a][c] and le[c][b]:
            return False
    return True
