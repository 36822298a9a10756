"""Orthogonal groups and isometries of definite lattices.

The search follows Plesken and Souvignier: the images of the basis vectors
are chosen one at a time among short vectors of the right norm, pruned by
inner products with the images already fixed.  A stabilizer chain built
from the search yields generators and the exact group order without listing
every element.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

from . import kernels
from . import linalg as la
from .errors import (
    CapExceededError,
    NotDefiniteError,
    RankMismatchError,
    SignatureMismatchError,
)
from .lattice import Lattice

Matrix = tuple[tuple[int, ...], ...]

ENUMERATION_CAP = 10**6


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def is_isometry(g: Sequence[Sequence[int]], gram: Sequence[Sequence[int]],
                target: Sequence[Sequence[int]] | None = None) -> bool:
    """``g^T target g == gram`` (``target`` defaults to ``gram``)."""
    target = gram if target is None else target
    lhs = la.matmul(la.matmul(la.transpose(g), target), g)
    return lhs == [list(r) for r in gram]


def _positive(lat: Lattice) -> Lattice:
    if lat.rank == 0 or lat.is_positive_definite():
        return lat
    if lat.is_negative_definite():
        return lat.scaled(-1)
    raise NotDefiniteError(f"signature {lat.signature} is indefinite")


def short_vectors(lat: Lattice, bound: int, backend: str | None = None
                  ) -> list[tuple[tuple[int, ...], int]]:
    """All ``v != 0`` with ``<v, v> <= bound``, one per +-pair.

    Sorted by norm, then lexicographically by coordinates.
    """
    if lat.rank and not lat.is_positive_definite():
        raise NotDefiniteError("short vectors need a positive definite lattice")
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    vecs = kernels.short_vectors(lat.matrix(), bound, backend=backend)
    out = [(v, lat.inner(v, v)) for v in vecs]
    out.sort(key=lambda t: (t[1], t[0]))
    return out


class MatrixGroup:
    """A finite group of integer matrices given by generators.

    ``order`` is known up front when the group comes from the stabilizer
    chain; the element list is produced lazily by closure.
    """

    def __init__(self, generators: Iterable[Sequence[Sequence[int]]], dim: int,
                 order: int | None = None, elements: Iterable[Matrix] | None = None):
        self.dim = dim
        self.generators: list[Matrix] = [la.freeze(g) for g in generators]
        self._elements: list[Matrix] | None = None
        if elements is not None:
            self._elements = sorted(set(la.freeze(e) for e in elements))
        self._order = order

    @property
    def identity(self) -> Matrix:
        return mat_identity(self.dim)

    @property
    def order(self) -> int:
        if self._order is None:
            self._order = len(self.elements())
        return self._order

    def elements(self, cap: int = ENUMERATION_CAP) -> list[Matrix]:
        if self._elements is None:
            if self._order is not None and self._order > cap:
                raise CapExceededError(f"group order {self._order} exceeds cap {cap}")
            seen = {self.identity}
            queue = deque([self.identity])
            while queue:
                x = queue.popleft()
                for g in self.generators:
                    y = mat_mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > cap:
                            raise CapExceededError(f"more than {cap} elements")
                        queue.append(y)
            self._elements = sorted(seen)
        return self._elements

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g) -> bool:
        return la.freeze(g) in set(self.elements())

    def __repr__(self) -> str:
        return f"MatrixGroup(order={self.order}, ngens={len(self.generators)})"


def element_order(g: Matrix) -> int:
    one = mat_identity(len(g))
    k, x = 1, g
    while x != one:
        x = mat_mul(x, g)
        k += 1
        if k > 10**6:
            raise ValueError("element does not have finite order")
    return k


def inverse(g: Matrix) -> Matrix:
    inv = la.inverse_rational(g)
    return tuple(tuple(int(x) for x in r) for r in inv)


class _IsometrySearch:
    """Candidate images for the basis of ``source`` inside ``target``."""

    def __init__(self, source: Lattice, target: Lattice, backend: str | None = None):
        self.source = source
        self.target = target
        n = source.rank
        norms = [source.gram[i][i] for i in range(n)]
        bound = max(norms)
        wanted = set(norms)
        vecs = []
        for v, nv in short_vectors(target, bound, backend=backend):
            if nv in wanted:
                vecs.append(v)
                vecs.append(tuple(-x for x in v))
        self.vecs = vecs
        self.index = {v: i for i, v in enumerate(vecs)}
        tg = target.matrix()
        self.gvecs = [tuple(la.matvec(tg, v)) for v in vecs]
        by_norm: dict[int, list[int]] = {}
        for i, v in enumerate(vecs):
            by_norm.setdefault(target.inner(v, v), []).append(i)
        # fewest candidates first, then original basis order
        self.perm = sorted(range(n), key=lambda i: (len(by_norm.get(norms[i], [])), i))
        self.cands = [by_norm.get(norms[i], []) for i in self.perm]
        sg = source.gram
        self.pgram = [[sg[self.perm[a]][self.perm[b]] for b in range(n)] for a in range(n)]
        self.searcher = kernels.make_searcher(vecs, self.gvecs, self.pgram, self.cands,
                                              backend=backend)

    def ip(self, a: int, b: int) -> int:
        return sum(x * y for x, y in zip(self.gvecs[a], self.vecs[b]))

    def to_matrix(self, sol: Sequence[int]) -> Matrix:
        n = self.source.rank
        cols = [None] * n
        for k, idx in enumerate(sol):
            cols[self.perm[k]] = self.vecs[idx]
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def automorphism_group(lat: Lattice, backend: str | None = None) -> MatrixGroup:
    """``O(L)`` of a definite lattice with generators and exact order."""
    pos = _positive(lat)
    n = pos.rank
    if n == 0:
        return MatrixGroup([], 0, order=1)
    srch = _IsometrySearch(pos, pos, backend=backend)
    basis_idx = []
    for k in range(n):
        e = tuple(int(i == srch.perm[k]) for i in range(n))
        basis_idx.append(srch.index[e])
    gens: list[Matrix] = []
    sizes = [1] * n

    def orbit(v: tuple[int, ...]) -> set[tuple[int, ...]]:
        seen = {v}
        queue = deque([v])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mat_vec(g, x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    for lvl in reversed(range(n)):
        prefix = tuple(basis_idx[:lvl])
        cand = [c for c in srch.cands[lvl]
                if all(srch.ip(c, prefix[j]) == srch.pgram[lvl][j] for j in range(lvl))]
        base = srch.vecs[basis_idx[lvl]]
        orb = orbit(base)
        excluded: set[tuple[int, ...]] = set()
        for c in cand:
            v = srch.vecs[c]
            if v in orb or v in excluded:
                continue
            sol = srch.searcher.search(prefix + (c,), 1)
            if sol:
                gens.append(srch.to_matrix(sol[0]))
                orb = orbit(base)
            else:
                excluded |= orbit(v)
        sizes[lvl] = len(orb)
    return MatrixGroup(gens, n, order=prod(sizes))


def all_automorphisms(lat: Lattice, backend: str | None = None) -> list[Matrix]:
    """Every element of ``O(L)`` straight from the backtracking search."""
    pos = _positive(lat)
    if pos.rank == 0:
        return [()]
    srch = _IsometrySearch(pos, pos, backend=backend)
    return sorted(srch.to_matrix(s) for s in srch.searcher.search((), 0))


def special_subgroup(group: MatrixGroup) -> MatrixGroup:
    els = [g for g in group.elements() if la.det(g) == 1]
    return MatrixGroup(_small_generating_set(els, group.dim), group.dim,
                       order=len(els), elements=els)


def _small_generating_set(els: Sequence[Matrix], dim: int) -> list[Matrix]:
    """Greedy generating set, scanning elements in sorted order."""
    one = mat_identity(dim)
    gens: list[Matrix] = []
    span = {one}
    for g in sorted(els):
        if g in span:
            continue
        gens.append(g)
        span = set(MatrixGroup(gens, dim).elements())
    return gens


def is_isometric(l1: Lattice, l2: Lattice, backend: str | None = None) -> Matrix | None:
    """An isometry ``T`` with ``T^T G2 T == G1`` (columns are images), or None."""
    if l1.rank != l2.rank:
        raise RankMismatchError(f"ranks differ: {l1.rank} vs {l2.rank}")
    if l1.rank == 0:
        return ()
    if not (l1.is_definite() and l2.is_definite()):
        raise NotDefiniteError("isometry testing needs definite lattices")
    if l1.is_positive_definite() != l2.is_positive_definite():
        raise SignatureMismatchError("one lattice is positive, the other negative definite")
    p1, p2 = _positive(l1), _positive(l2)
    if p1.det != p2.det:
        return None
    srch = _IsometrySearch(p1, p2, backend=backend)
    sol = srch.searcher.search((), 1)
    if not sol:
        return None
    return srch.to_matrix(sol[0])


@dataclass(frozen=True)
class CyclicClass:
    generator: Matrix
    order: int
    class_size: int
    members: frozenset = field(default=frozenset(), compare=False, repr=False)


def _cyclic(g: Matrix) -> frozenset:
    one = mat_identity(len(g))
    out = {one}
    x = g
    while x != one:
        out.add(x)
        x = mat_mul(x, g)
    return frozenset(out)


def cyclic_subgroup_classes(group: MatrixGroup) -> list[CyclicClass]:
    """One representative per conjugacy class of nontrivial cyclic subgroups.

    Classes are formed from whole-subgroup images ``h C h^-1``.  Each class
    is represented by its lexicographically smallest generator.
    """
    els = group.elements()
    one = group.identity
    subgroups = {}
    for g in els:
        if g == one:
            continue
        c = _cyclic(g)
        subgroups.setdefault(c, []).append(g)
    invs = {h: inverse(h) for h in els}
    seen: set[frozenset] = set()
    out = []
    for c in sorted(subgroups, key=lambda s: (len(s), min(subgroups[s]))):
        if c in seen:
            continue
        klass = set()
        for h in els:
            hi = invs[h]
            klass.add(frozenset(mat_mul(mat_mul(h, x), hi) for x in c))
        seen |= klass
        rep = min(g for s in klass for g in subgroups[s])
        out.append(CyclicClass(rep, len(c), len(klass), frozenset(klass)))
    out.sort(key=lambda k: (k.order, k.generator))
    return out


def maximal_cyclic_classes(group: MatrixGroup) -> list[CyclicClass]:
    classes = cyclic_subgroup_classes(group)
    all_subs = [s for k in classes for s in k.members]
    out = []
    for k in classes:
        c = _cyclic(k.generator)
        if not any(len(s) > len(c) and c < s for s in all_subs):
            out.append(k)
    return out


def dihedral_recognition(group: MatrixGroup) -> int | None:
    """``k`` if the group is dihedral of order ``2k`` (``k >= 2``), else None.

    ``D_2`` is the Klein four-group.
    """
    n = group.order
    if n < 4 or n % 2:
        return None
    k = n // 2
    els = group.elements()
    for r in els:
        if element_order(r) != k:
            continue
        rot = _cyclic(r)
        r_inv = inverse(r)
        for s in els:
            if s in rot or mat_mul(s, s) != group.identity:
                continue
            if mat_mul(mat_mul(s, r), s) == r_inv:
                return k
        return None if k > 2 else _klein(els, group.identity)
    return None


def _klein(els, one) -> int | None:
    return 2 if all(mat_mul(g, g) == one for g in els) else None
