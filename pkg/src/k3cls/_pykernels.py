"""Pure-Python hot kernels: short vector enumeration and isometry backtracking.

These are the reference implementations; ``_ckernels`` mirrors the same API
in Cython and must return identical results.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

BACKEND = "python"


def short_vectors(gram, bound):
    """Nonzero ``v`` with ``v^T G v <= bound``, one per +-pair (Fincke-Pohst).

    The representative is the one whose first nonzero coordinate is positive.
    Arithmetic is exact (rationals).
    """
    n = len(gram)
    if n == 0 or bound <= 0:
        return []
    q = [[Fraction(x) for x in r] for r in gram]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    out = []
    x = [0] * n
    bound = Fraction(bound)

    def rec(i, remaining):
        c = sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        r = remaining / q[i][i]
        s = isqrt(r.numerator // r.denominator)
        lo = int((-c).__floor__()) - s - 1
        hi = int((-c).__ceil__()) + s + 1
        for xi in range(lo, hi + 1):
            y = xi + c
            if y * y > r:
                continue
            x[i] = xi
            rem = remaining - q[i][i] * y * y
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, rem)
        x[i] = 0

    rec(n - 1, bound)
    reps = []
    for v in out:
        first = next((t for t in v if t), 0)
        if first > 0:
            reps.append(v)
    return reps


class Searcher:
    """Depth-first search for isometric images of a basis.

    ``vecs`` are candidate image vectors in target coordinates and ``gvecs``
    their products with the target Gram, so ``<vecs[a], vecs[b]>`` equals
    ``dot(gvecs[a], vecs[b])``.  Level ``i`` must be assigned a vector from
    ``cands[i]`` whose inner products with the earlier images match row ``i``
    of ``target``.
    """

    def __init__(self, vecs, gvecs, target, cands):
        self.vecs = [tuple(v) for v in vecs]
        self.gvecs = [tuple(v) for v in gvecs]
        self.target = [list(r) for r in target]
        self.cands = [list(c) for c in cands]
        self.n = len(target)

    def _ip(self, a, b):
        return sum(x * y for x, y in zip(self.gvecs[a], self.vecs[b]))

    def search(self, prefix=(), limit=0):
        n = self.n
        target = self.target
        chosen = list(prefix)
        for i, a in enumerate(chosen):
            if a not in self.cands[i]:
                return []
            for j in range(i):
                if self._ip(a, chosen[j]) != target[i][j]:
                    return []
        # forward-checked candidate lists for every level after the prefix
        levels = [None] * n
        for k in range(len(chosen), n):
            lst = self.cands[k]
            for j, a in enumerate(chosen):
                ga = self.gvecs[a]
                t = target[k][j]
                lst = [c for c in lst
                       if sum(x * y for x, y in zip(ga, self.vecs[c])) == t]
            levels[k] = lst
        results = []
        start = len(chosen)
        if start == n:
            return [tuple(chosen)]

        def rec(i, levels):
            for a in levels[i]:
                if i + 1 == n:
                    results.append(tuple(chosen) + (a,))
                    if limit and len(results) >= limit:
                        return True
                    continue
                ga = self.gvecs[a]
                nxt = levels[:]
                ok = True
                for k in range(i + 1, n):
                    t = target[k][i]
                    lst = [c for c in levels[k]
                           if sum(x * y for x, y in zip(ga, self.vecs[c])) == t]
                    if not lst:
                        ok = False
                        break
                    nxt[k] = lst
                if not ok:
                    continue
                chosen.append(a)
                stop = rec(i + 1, nxt)
                chosen.pop()
                if stop:
                    return True
            return False

        rec(start, levels)
        return results
