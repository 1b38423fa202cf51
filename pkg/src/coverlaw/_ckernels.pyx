# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice kernels; see ``_pykernels`` for the reference versions."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def closure(const cnp.uint8_t[:, :] adj):
    cdef Py_ssize_t n = adj.shape[0]
    cdef Py_ssize_t i, j, k
    out = np.zeros((n, n), dtype=np.uint8)
    cdef cnp.uint8_t[:, :] r = out
    for i in range(n):
        for j in range(n):
            r[i, j] = 1 if (adj[i, j] or i == j) else 0
    for k in range(n):
        for i in range(n):
            if r[i, k]:
                for j in range(n):
                    if r[k, j]:
                        r[i, j] = 1
    return out


def meet_join_tables(const cnp.uint8_t[:, :] le):
    cdef Py_ssize_t n = le.shape[0]
    cdef Py_ssize_t a, b, c
    cdef cnp.int64_t glb, lub
    meet_arr = np.full((n, n), -1, dtype=np.int64)
    join_arr = np.full((n, n), -1, dtype=np.int64)
    cdef cnp.int64_t[:, :] meet = meet_arr
    cdef cnp.int64_t[:, :] join = join_arr
    for a in range(n):
        for b in range(a, n):
            glb = -1
            for c in range(n):
                if le[c, a] and le[c, b] and (glb < 0 or le[glb, c]):
                    glb = c
            if glb >= 0:
                for c in range(n):
                    if le[c, a] and le[c, b] and not le[c, glb]:
                        glb = -1
                        break
            lub = -1
            for c in range(n):
                if le[a, c] and le[b, c] and (lub < 0 or le[c, lub]):
                    lub = c
            if lub >= 0:
                for c in range(n):
                    if le[a, c] and le[b, c] and not le[lub, c]:
                        lub = -1
                        break
            meet[a, b] = glb
            meet[b, a] = glb
            join[a, b] = lub
            join[b, a] = lub
    return meet_arr, join_arr


def order_reversal_violation(const cnp.uint8_t[:, :] le,
                             const cnp.int64_t[:] ortho):
    cdef Py_ssize_t n = le.shape[0]
    cdef Py_ssize_t a, b
    for a in range(n):
        for b in range(n):
            if le[a, b] and not le[ortho[b], ortho[a]]:
                return a, b
    return -1, -1


def orthomodular_violation(const cnp.uint8_t[:, :] le,
                           const cnp.int64_t[:, :] meet,
                           const cnp.int64_t[:, :] join,
                           const cnp.int64_t[:] ortho):
    cdef Py_ssize_t n = le.shape[0]
    cdef Py_ssize_t a, b
    for a in range(n):
        for b in range(n):
            if le[a, b] and join[a, meet[b, ortho[a]]] != b:
                return a, b
    return -1, -1


cdef bint _covers(const cnp.uint8_t[:, :] le, Py_ssize_t n, Py_ssize_t a,
                  Py_ssize_t b):
    cdef Py_ssize_t c
    if a == b or not le[a, b]:
        return False
    for c in range(n):
        if c != a and c != b and le[a, c] and le[c, b]:
            return False
    return True


def covering_violation(const cnp.uint8_t[:, :] le,
                       const cnp.int64_t[:, :] meet,
                       const cnp.int64_t[:, :] join, Py_ssize_t bottom):
    cdef Py_ssize_t n = le.shape[0]
    cdef Py_ssize_t p, a
    for p in range(n):
        if p == bottom or not _covers(le, n, bottom, p):
            continue
        for a in range(n):
            if meet[p, a] != bottom:
                continue
            if not _covers(le, n, a, join[a, p]):
                return p, a
    return -1, -1
