"""Discriminant forms of even lattices and their isometries.

Elements of ``L^/L = Z/d_1 + ... + Z/d_k`` are coordinate tuples with
``0 <= c_i < d_i``.  The form is stored as a matrix ``qmat`` of rationals:
the diagonal holds ``q(x_i)`` mod 2, the off-diagonal ``b(x_i, x_j)`` mod 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, Sequence

from . import linalg as la
from .autgroup import is_isometry
from .errors import CapExceededError, NotEvenError
from .lattice import Lattice

FORM_ORDER_CAP = 1000
FORM_FACTOR_CAP = 6

Element = tuple[int, ...]


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * (x // m)


@dataclass(frozen=True)
class DiscForm:
    """A finite quadratic form on ``Z/d_1 + ... + Z/d_k``.

    ``gens`` and ``urows`` are present when the form comes from a lattice:
    ``gens[i]`` is a dual vector representing generator ``i`` and the
    coordinates of a dual vector ``x`` are ``urows . G x`` reduced mod ``d``.
    """

    factors: tuple[int, ...]
    qmat: tuple[tuple[Fraction, ...], ...]
    gram: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False, repr=False)
    gens: tuple[tuple[Fraction, ...], ...] | None = field(default=None, compare=False, repr=False)
    urows: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_values(cls, factors: Sequence[int], qmat: Sequence[Sequence]) -> "DiscForm":
        k = len(factors)
        q = tuple(tuple(_mod(Fraction(qmat[i][j]), 2 if i == j else 1) for j in range(k))
                  for i in range(k))
        for i in range(k):
            for j in range(k):
                if i != j and q[i][j] != q[j][i]:
                    raise ValueError("bilinear values must be symmetric")
        return cls(tuple(int(d) for d in factors), q)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def ngens(self) -> int:
        return len(self.factors)

    def elements(self) -> list[Element]:
        return list(product(*(range(d) for d in self.factors)))

    def reduce(self, c: Sequence[int]) -> Element:
        return tuple(int(x) % d for x, d in zip(c, self.factors))

    def add(self, a: Sequence[int], b: Sequence[int]) -> Element:
        return self.reduce([x + y for x, y in zip(a, b)])

    def scale(self, n: int, a: Sequence[int]) -> Element:
        return self.reduce([n * x for x in a])

    def zero(self) -> Element:
        return (0,) * self.ngens

    def q(self, c: Sequence[int]) -> Fraction:
        k = self.ngens
        s = Fraction(0)
        for i in range(k):
            if c[i]:
                s += c[i] * c[i] * self.qmat[i][i]
                for j in range(i + 1, k):
                    if c[j]:
                        s += 2 * c[i] * c[j] * self.qmat[i][j]
        return _mod(s, 2)

    def b(self, c: Sequence[int], e: Sequence[int]) -> Fraction:
        k = self.ngens
        s = Fraction(0)
        for i in range(k):
            if c[i]:
                for j in range(k):
                    if e[j]:
                        s += c[i] * e[j] * self.qmat[i][j]
        return _mod(s, 1)

    def element_order(self, c: Sequence[int]) -> int:
        o = 1
        for x, d in zip(c, self.factors):
            o = _lcm(o, d // _gcd(x, d))
        return o

    # lattice realization

    def coords(self, x: Sequence) -> Element:
        """Coordinates of the dual vector ``x`` (lattice coordinates)."""
        if self.urows is None:
            raise ValueError("form has no lattice realization")
        gx = la.matvec(self.gram, [Fraction(t) for t in x])
        out = []
        for row, d in zip(self.urows, self.factors):
            v = sum(Fraction(a) * y for a, y in zip(row, gx))
            if v.denominator != 1:
                raise ValueError("vector is not in the dual lattice")
            out.append(int(v) % d)
        return tuple(out)

    def lift(self, c: Sequence[int]) -> list[Fraction]:
        """Dual vector for ``c`` built from nonnegative generator multiples."""
        if self.gens is None:
            raise ValueError("form has no lattice realization")
        n = len(self.gram)
        v = [Fraction(0)] * n
        for ci, g in zip(self.reduce(c), self.gens):
            for t in range(n):
                v[t] += ci * g[t]
        return v


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def _lcm(a: int, b: int) -> int:
    return a * b // _gcd(a, b)


def disc_form(lat: Lattice) -> DiscForm:
    if not lat.is_even:
        raise NotEvenError("discriminant forms need an even lattice")
    g = lat.matrix()
    s, u, v = la.snf(g)
    factors, gens, urows = [], [], []
    for i in range(lat.rank):
        d = abs(s[i][i])
        if d > 1:
            factors.append(d)
            gens.append(tuple(Fraction(v[r][i], s[i][i]) for r in range(lat.rank)))
            urows.append(tuple(u[i]))
    k = len(factors)
    qmat = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            val = sum(gens[i][a] * g[a][b] * gens[j][b]
                      for a in range(lat.rank) for b in range(lat.rank))
            qmat[i][j] = _mod(val, 2 if i == j else 1)
    return DiscForm(tuple(factors), tuple(tuple(r) for r in qmat), lat.gram,
                    tuple(gens), tuple(urows))


def negate(form: DiscForm) -> DiscForm:
    k = form.ngens
    q = tuple(tuple(_mod(-form.qmat[i][j], 2 if i == j else 1) for j in range(k))
              for i in range(k))
    return DiscForm(form.factors, q, form.gram, form.gens, form.urows)


@dataclass(frozen=True)
class FormIsometry:
    """Group homomorphism given by the images of the source generators."""

    images: tuple[Element, ...]
    target_factors: tuple[int, ...]

    def __call__(self, c: Sequence[int]) -> Element:
        out = [0] * len(self.target_factors)
        for ci, img in zip(c, self.images):
            if ci:
                for t, y in enumerate(img):
                    out[t] += ci * y
        return tuple(x % d for x, d in zip(out, self.target_factors))

    def compose(self, other: "FormIsometry") -> "FormIsometry":
        """``self o other``."""
        return FormIsometry(tuple(self(img) for img in other.images), self.target_factors)

    @classmethod
    def identity(cls, form: DiscForm) -> "FormIsometry":
        k = form.ngens
        return cls(tuple(tuple(int(i == j) for j in range(k)) for i in range(k)), form.factors)


def _check_cap(form: DiscForm) -> None:
    if form.order > FORM_ORDER_CAP or form.ngens > FORM_FACTOR_CAP:
        raise CapExceededError(
            f"form of order {form.order} with {form.ngens} factors exceeds the search cap")


def _morphisms(src: DiscForm, dst: DiscForm, sign: int) -> list[FormIsometry]:
    """Homomorphisms ``src -> dst`` with ``q_dst(f x) = sign * q_src(x)``."""
    _check_cap(src)
    _check_cap(dst)
    if src.order != dst.order:
        return []
    k = src.ngens
    if k == 0:
        return [FormIsometry((), dst.factors)]
    els = dst.elements()
    cands = []
    for i in range(k):
        d = src.factors[i]
        want = _mod(sign * src.qmat[i][i], 2)
        cands.append([y for y in els
                      if all((d * t) % m == 0 for t, m in zip(y, dst.factors))
                      and dst.q(y) == want])
    out = []
    chosen: list[Element] = []

    def rec(i):
        if i == k:
            out.append(FormIsometry(tuple(chosen), dst.factors))
            return
        for y in cands[i]:
            if all(dst.b(y, chosen[j]) == _mod(sign * src.qmat[i][j], 1) for j in range(i)):
                chosen.append(y)
                rec(i + 1)
                chosen.pop()

    rec(0)
    # a b-preserving map out of a nondegenerate form is injective; equal
    # orders make it bijective
    return out


def orthogonal_group_of_form(form: DiscForm) -> tuple[int, list[FormIsometry]]:
    els = _morphisms(form, form, 1)
    return len(els), els


def anti_isometries(d1: DiscForm, d2: DiscForm) -> list[FormIsometry]:
    if d1.order != d2.order:
        raise ValueError("anti-isometries need forms of equal order")
    return _morphisms(d1, d2, -1)


def induced_form_isometry(lat: Lattice, g: Sequence[Sequence[int]],
                          form: DiscForm | None = None) -> FormIsometry:
    """Action of ``g`` (columns are images) on ``L^/L``."""
    if not is_isometry(g, lat.gram):
        raise ValueError("matrix is not an isometry of the lattice")
    form = disc_form(lat) if form is None else form
    imgs = []
    for x in form.gens:
        gx = la.matvec(g, x)
        imgs.append(form.coords(gx))
    return FormIsometry(tuple(imgs), form.factors)


def subgroup_generated(form: DiscForm, elements: Iterable[Sequence[int]]
                       ) -> tuple[DiscForm, list[Element]]:
    """The restricted form on the subgroup generated by ``elements``.

    Returns the subform (on an invariant-factor basis) and the images of
    its generators in ``form`` coordinates.
    """
    k = form.ngens
    rows = [list(form.reduce(e)) for e in elements]
    rows += [[form.factors[i] if j == i else 0 for j in range(k)] for i in range(k)]
    if k == 0:
        return DiscForm((), ()), []
    h, _ = la.hnf(rows)
    basis = [r for r in h if any(r)]
    # relation lattice sum d_i Z e_i in the basis of the subgroup lattice
    rel = [[form.factors[i] if j == i else 0 for j in range(k)] for i in range(k)]
    coeff = la.solve_rational(la.transpose(basis), la.transpose(rel))
    c = [[int(coeff[i][j]) for i in range(k)] for j in range(k)]
    s, _, v = la.snf(c)
    vinv = [[int(x) for x in r] for r in la.inverse_rational(v)]
    newb = la.matmul(vinv, basis)
    gens, facs = [], []
    for i in range(k):
        if abs(s[i][i]) > 1:
            gens.append(form.reduce(newb[i]))
            facs.append(abs(s[i][i]))
    m = len(gens)
    qm = [[form.q(gens[i]) if i == j else form.b(gens[i], gens[j]) for j in range(m)]
          for i in range(m)]
    return DiscForm(tuple(facs), tuple(tuple(r) for r in qm)), gens
