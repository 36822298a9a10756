"""Integral lattices given by Gram matrices, and sublattices inside them."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Sequence

from . import linalg as la
from .errors import (
    DegenerateLatticeError,
    NotContainedError,
    RankMismatchError,
)


def _congruence_diagonal(gram: Sequence[Sequence[int]]) -> list[Fraction]:
    """Diagonal of a rational congruence diagonalization (symmetric elimination)."""
    a = [[Fraction(x) for x in r] for r in gram]
    n = len(a)
    diag = []
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for r in a:
                    r[k], r[j] = r[j], r[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    diag.append(Fraction(0))
                    continue
                # e_k <- e_k + e_j makes the pivot 2*a_kj + a_jj = 2*a_kj != 0
                for c in range(n):
                    a[k][c] += a[j][c]
                for r in range(n):
                    a[r][k] += a[r][j]
        p = a[k][k]
        diag.append(p)
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
            a[i][k] = Fraction(0)
    return diag


@dataclass(frozen=True)
class Lattice:
    """A nondegenerate integral lattice, stored as its Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    label: str | None = field(default=None, compare=False)

    def __init__(self, gram: Sequence[Sequence[int]], label: str | None = None):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(g)
        if any(len(r) != n for r in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)
        object.__setattr__(self, "label", label)
        if la.det(g) == 0:
            raise DegenerateLatticeError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return la.det(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int]:
        return signature(self)

    def is_positive_definite(self) -> bool:
        return self.signature == (self.rank, 0)

    def is_negative_definite(self) -> bool:
        return self.signature == (0, self.rank)

    def is_definite(self) -> bool:
        return self.is_positive_definite() or self.is_negative_definite()

    @property
    def is_even(self) -> bool:
        return is_even(self)

    def scaled(self, factor: int) -> "Lattice":
        return Lattice([[factor * x for x in r] for r in self.gram], self.label)

    def inner(self, x: Sequence, y: Sequence):
        return sum(x[i] * self.gram[i][j] * y[j]
                   for i in range(self.rank) for j in range(self.rank))

    def matrix(self) -> la.IntMatrix:
        return [list(r) for r in self.gram]

    def to_json(self) -> dict:
        out = {"gram": self.matrix()}
        if self.label is not None:
            out = {"label": self.label, **out}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Lattice":
        if not isinstance(data, dict) or "gram" not in data:
            raise ValueError("lattice JSON needs a 'gram' field")
        gram = data["gram"]
        if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
            raise ValueError("'gram' must be a list of rows")
        if any(isinstance(x, bool) or not isinstance(x, int) for r in gram for x in r):
            raise ValueError("Gram entries must be integers")
        return cls(gram, data.get("label"))

    def __repr__(self) -> str:
        lbl = f", label={self.label!r}" if self.label else ""
        return f"Lattice({self.matrix()}{lbl})"


def load_lattice(path: str | Path) -> Lattice:
    with open(path) as fh:
        return Lattice.from_json(json.load(fh))


def signature(lat: Lattice) -> tuple[int, int]:
    """(s_plus, s_minus) via exact congruence diagonalization (Sylvester)."""
    d = _congruence_diagonal(lat.gram)
    if any(x == 0 for x in d):
        raise DegenerateLatticeError("degenerate form")
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0)


def is_even(lat: Lattice) -> bool:
    return all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank))


def direct_sum(l1: Lattice, l2: Lattice) -> Lattice:
    return Lattice(la.block_diag(l1.gram, l2.gram))


def discriminant_group(lat: Lattice) -> tuple[list[int], list[list[Fraction]]]:
    """Invariant factors (> 1) of L^/L and generators as dual vectors.

    With ``U G V = S`` the i-th generator is column i of ``V`` divided by
    ``d_i``, written in lattice coordinates.
    """
    s, _, v = la.snf(lat.gram)
    factors, gens = [], []
    for i in range(lat.rank):
        d = s[i][i]
        if d > 1:
            factors.append(d)
            gens.append([Fraction(v[r][i], d) for r in range(lat.rank)])
    return factors, gens


@dataclass(frozen=True)
class Sublattice:
    """A sublattice spanned by the rows of ``basis`` (ambient coordinates)."""

    ambient: Lattice
    basis: tuple[tuple[int, ...], ...]

    def __init__(self, ambient: Lattice, basis: Sequence[Sequence[int]]):
        b = tuple(tuple(int(x) for x in r) for r in basis)
        if any(len(r) != ambient.rank for r in b):
            raise ValueError("basis rows must have the ambient rank")
        if b and la.rank(b) != len(b):
            raise ValueError("basis rows must be linearly independent")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", b)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def gram(self) -> la.IntMatrix:
        if not self.basis:
            return []
        return la.matmul(la.matmul(self.basis, self.ambient.gram), la.transpose(self.basis))

    def lattice(self) -> Lattice:
        return Lattice(self.gram)

    def is_primitive(self) -> bool:
        if not self.basis:
            return True
        return all(d == 1 for d in la.invariant_factors(self.basis))


def whole(lat: Lattice) -> Sublattice:
    return Sublattice(lat, la.identity(lat.rank))


def orthogonal_complement(sub: Sublattice) -> Sublattice:
    amb = sub.ambient
    if not sub.basis:
        return whole(amb)
    bg = la.matmul(sub.basis, amb.gram)
    return Sublattice(amb, la.kernel_saturated(bg))


def coordinates_in(sub: Sublattice, vectors: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Rational coordinates of ambient vectors w.r.t. ``sub.basis`` (exact).

    Raises :class:`NotContainedError` if a vector is outside ``sub`` tensor Q.
    """
    b = [list(r) for r in sub.basis]
    bt = la.transpose(b)
    # least squares through the Gram of the basis is exact for vectors in the span
    btb = la.matmul(b, bt)
    out = []
    for v in vectors:
        rhs = la.matvec(b, v)
        c = la.solve_rational(btb, rhs)
        back = [sum(c[k] * b[k][j] for k in range(len(b))) for j in range(len(v))]
        if back != [Fraction(x) for x in v]:
            raise NotContainedError("vector not in the rational span")
        out.append(c)
    return out


def index_in(sub: Sublattice, sup: Sublattice) -> int:
    """The index ``[sup : sub]`` for two equal-rank sublattices with sub in sup."""
    if sub.ambient.gram != sup.ambient.gram:
        raise ValueError("sublattices live in different ambient lattices")
    if sub.rank != sup.rank:
        raise RankMismatchError(f"ranks differ: {sub.rank} vs {sup.rank}")
    if sub.rank == 0:
        return 1
    coords = coordinates_in(sup, sub.basis)
    if any(x.denominator != 1 for r in coords for x in r):
        raise NotContainedError("first sublattice is not contained in the second")
    return abs(la.det([[int(x) for x in r] for r in coords]))


def span(ambient: Lattice, *parts: Sublattice) -> Sublattice:
    rows = [r for p in parts for r in p.basis]
    return Sublattice(ambient, rows)
