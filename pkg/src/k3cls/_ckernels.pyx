# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same API and results as ``_pykernels``.

Arithmetic is int64.  Callers in ``kernels`` only route inputs here after
checking that every intermediate value fits; otherwise they use the Python
reference kernels.
"""

from libc.math cimport sqrt, floor, ceil
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

import numpy as np
cimport numpy as cnp

BACKEND = "cython"


def short_vectors(gram, bound):
    cdef int n = len(gram)
    if n == 0 or bound <= 0:
        return []
    cdef cnp.ndarray[cnp.float64_t, ndim=2] q = np.array(gram, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] g = np.array(gram, dtype=np.int64)
    cdef int i, j, k, l
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k, l] -= q[k, i] * q[i, l]

    cdef int64_t ibound = bound
    cdef double fbound = <double>bound * (1.0 + 1e-9) + 1e-9
    cdef int64_t *x = <int64_t *>malloc(n * sizeof(int64_t))
    cdef int64_t *upper = <int64_t *>malloc(n * sizeof(int64_t))
    cdef double *rem = <double *>malloc((n + 1) * sizeof(double))
    cdef double *cen = <double *>malloc(n * sizeof(double))
    out = []
    cdef double c, r, s
    cdef int64_t norm, first
    try:
        for i in range(n):
            x[i] = 0
        i = n - 1
        rem[n] = fbound
        # initialise level n-1
        c = 0.0
        cen[i] = c
        r = rem[i + 1] / q[i, i]
        s = sqrt(r) + 1e-9
        x[i] = <int64_t>ceil(-c - s)
        upper[i] = <int64_t>floor(-c + s)
        while True:
            if x[i] > upper[i]:
                i += 1
                if i >= n:
                    break
                x[i] += 1
                continue
            r = x[i] + cen[i]
            rem[i] = rem[i + 1] - q[i, i] * r * r
            if rem[i] < -1e-9 * fbound - 1e-9:
                x[i] += 1
                continue
            if i == 0:
                # exact check in integers
                norm = 0
                for k in range(n):
                    for l in range(n):
                        norm += x[k] * g[k, l] * x[l]
                if 0 < norm <= ibound:
                    first = 0
                    for k in range(n):
                        if x[k] != 0:
                            first = x[k]
                            break
                    if first > 0:
                        out.append(tuple([x[k] for k in range(n)]))
                x[i] += 1
                continue
            i -= 1
            c = 0.0
            for j in range(i + 1, n):
                c += q[i, j] * x[j]
            cen[i] = c
            r = rem[i + 1] / q[i, i]
            if r < 0:
                r = 0
            s = sqrt(r) + 1e-9
            x[i] = <int64_t>ceil(-c - s)
            upper[i] = <int64_t>floor(-c + s)
    finally:
        free(x)
        free(upper)
        free(rem)
        free(cen)
    return out


cdef class Searcher:
    cdef int n, N, dim
    cdef int64_t[:, ::1] vecs
    cdef int64_t[:, ::1] gvecs
    cdef int64_t[:, ::1] target
    cdef object cands

    def __init__(self, vecs, gvecs, target, cands):
        self.N = len(vecs)
        self.n = len(target)
        self.dim = len(vecs[0]) if vecs else 0
        self.vecs = np.ascontiguousarray(np.array(vecs, dtype=np.int64).reshape(self.N, self.dim))
        self.gvecs = np.ascontiguousarray(np.array(gvecs, dtype=np.int64).reshape(self.N, self.dim))
        self.target = np.ascontiguousarray(np.array(target, dtype=np.int64).reshape(self.n, self.n))
        self.cands = [np.array(c, dtype=np.int32) for c in cands]

    cdef inline int64_t _ip(self, int a, int b) nogil:
        cdef int64_t s = 0
        cdef int t
        for t in range(self.dim):
            s += self.gvecs[a, t] * self.vecs[b, t]
        return s

    def search(self, prefix=(), Py_ssize_t limit=0):
        cdef int n = self.n
        cdef int start = len(prefix)
        cdef int i, j, k, a, c, idx, cnt
        chosen_py = list(prefix)
        for i in range(start):
            a = chosen_py[i]
            if a not in set(self.cands[i].tolist()):
                return []
            for j in range(i):
                if self._ip(a, chosen_py[j]) != self.target[i, j]:
                    return []
        if start == n:
            return [tuple(chosen_py)]

        cdef int maxc = 1
        for k in range(n):
            if len(self.cands[k]) > maxc:
                maxc = len(self.cands[k])
        # lists[depth][level][...]: candidate lists after forward checking
        cdef int *lists = <int *>malloc((n + 1) * n * maxc * sizeof(int))
        cdef int *counts = <int *>malloc((n + 1) * n * sizeof(int))
        cdef int *pos = <int *>malloc(n * sizeof(int))
        cdef int *chosen = <int *>malloc(n * sizeof(int))
        cdef int[::1] cl
        cdef int64_t t
        cdef int base, nb, ok
        results = []
        try:
            for i in range(start):
                chosen[i] = chosen_py[i]
            # depth `start` holds filtered lists for levels >= start
            for k in range(start, n):
                cl = self.cands[k]
                cnt = 0
                for idx in range(cl.shape[0]):
                    c = cl[idx]
                    ok = 1
                    for j in range(start):
                        if self._ip(chosen[j], c) != self.target[k, j]:
                            ok = 0
                            break
                    if ok:
                        lists[(start * n + k) * maxc + cnt] = c
                        cnt += 1
                counts[start * n + k] = cnt
            i = start
            pos[i] = 0
            while i >= start:
                if pos[i] >= counts[i * n + i]:
                    i -= 1
                    if i >= start:
                        pos[i] += 1
                    continue
                a = lists[(i * n + i) * maxc + pos[i]]
                chosen[i] = a
                if i + 1 == n:
                    results.append(tuple([chosen[k] for k in range(n)]))
                    if limit and len(results) >= limit:
                        break
                    pos[i] += 1
                    continue
                # forward check into depth i+1
                ok = 1
                for k in range(i + 1, n):
                    t = self.target[k, i]
                    cnt = 0
                    base = (i * n + k) * maxc
                    nb = ((i + 1) * n + k) * maxc
                    for idx in range(counts[i * n + k]):
                        c = lists[base + idx]
                        if self._ip(a, c) == t:
                            lists[nb + cnt] = c
                            cnt += 1
                    counts[(i + 1) * n + k] = cnt
                    if cnt == 0:
                        ok = 0
                        break
                if not ok:
                    pos[i] += 1
                    continue
                i += 1
                pos[i] = 0
        finally:
            free(lists)
            free(counts)
            free(pos)
            free(chosen)
        return results
