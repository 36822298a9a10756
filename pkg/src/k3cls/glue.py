"""Primitive extensions ``L1 + L2 <= M`` described by glue maps.

A glue map is given by generator pairs ``(x, phi(x))`` with ``x`` in the
discriminant group of ``L1`` and ``phi(x)`` in that of ``L2``, both in
invariant-factor coordinates.  Its graph is the subgroup ``M / (L1 + L2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .autgroup import (
    MatrixGroup,
    automorphism_group,
    is_isometry,
    mat_mul,
    short_vectors,
)
from .discform import (
    DiscForm,
    FormIsometry,
    disc_form,
    induced_form_isometry,
    orthogonal_group_of_form,
)
from .errors import GlueError, NotContainedError, UnsupportedLatticeError
from .lattice import Lattice, Sublattice, coordinates_in, orthogonal_complement, span

Element = tuple[int, ...]


@dataclass(frozen=True)
class GlueMap:
    d1: DiscForm
    d2: DiscForm
    pairs: tuple[tuple[Element, Element], ...]

    def graph(self) -> dict[Element, Element]:
        """Every element ``x -> phi(x)`` of the glue subgroup."""
        one = (self.d1.zero(), self.d2.zero())
        seen = {one}
        frontier = [one]
        while frontier:
            nxt = []
            for x, y in frontier:
                for a, b in self.pairs:
                    z = (self.d1.add(x, a), self.d2.add(y, b))
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            frontier = nxt
        out: dict[Element, Element] = {}
        for x, y in seen:
            if x in out:
                raise GlueError("glue relation is not a function")
            out[x] = y
        if len(set(out.values())) != len(out):
            raise GlueError("glue map is not injective")
        return out

    @property
    def order(self) -> int:
        return len(self.graph())

    def check_anti_isometry(self) -> None:
        for x, y in self.graph().items():
            if (self.d1.q(x) + self.d2.q(y)) % 2 != 0:
                raise GlueError(f"q is not negated on {x} -> {y}")


def trivial_glue(l1: Lattice, l2: Lattice) -> GlueMap:
    return GlueMap(disc_form(l1), disc_form(l2), ())


def glue_from_isometry(d1: DiscForm, d2: DiscForm, phi: FormIsometry) -> GlueMap:
    k = d1.ngens
    pairs = []
    for i in range(k):
        x = tuple(int(i == j) for j in range(k))
        pairs.append((x, phi(x)))
    return GlueMap(d1, d2, tuple(pairs))


@dataclass(frozen=True)
class PrimitiveExtension:
    """``M`` with basis rows written in ``L1 + L2`` coordinates."""

    l1: Lattice
    l2: Lattice
    glue: GlueMap
    m: Lattice
    basis: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def index(self) -> int:
        """``[M : L1 + L2]`` from the basis determinant."""
        den = la.common_denominator(self.basis)
        scaled = [[int(x * den) for x in r] for r in self.basis]
        n = len(scaled)
        return den ** n // abs(la.det(scaled))

    def embedding(self, which: int) -> list[list[Fraction]]:
        """Rows: basis of ``L1`` (``which=1``) or ``L2`` in ``M`` coordinates."""
        r1 = self.l1.rank
        n = r1 + self.l2.rank
        rows = range(r1) if which == 1 else range(r1, n)
        bt = la.transpose(self.basis)
        return [la.solve_rational(bt, [int(i == j) for j in range(n)]) for i in rows]


def _direct_sum_gram(l1: Lattice, l2: Lattice) -> la.IntMatrix:
    return la.block_diag(l1.gram, l2.gram)


def build_extension(l1: Lattice, l2: Lattice, glue: GlueMap | None = None) -> PrimitiveExtension:
    glue = trivial_glue(l1, l2) if glue is None else glue
    glue.check_anti_isometry()
    n1, n2 = l1.rank, l2.rank
    n = n1 + n2
    rows: list[list[Fraction]] = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for x, y in glue.pairs:
        rows.append(glue.d1.lift(x) + glue.d2.lift(y))
    basis = la.lattice_basis(rows)
    g = _direct_sum_gram(l1, l2)
    gm = la.matmul(la.matmul(basis, g), la.transpose(basis))
    if any(Fraction(x).denominator != 1 for r in gm for x in r):
        raise GlueError("glued lattice is not integral")
    m = Lattice([[int(x) for x in r] for r in gm])
    if l1.is_even and l2.is_even and not m.is_even:
        raise GlueError("glued lattice is not even")
    return PrimitiveExtension(l1, l2, glue, m, tuple(tuple(r) for r in basis))


def glue_map_of(m: Lattice, s: Sublattice) -> tuple[Sublattice, GlueMap]:
    """Complement ``K`` of the primitive ``S`` in ``M`` and the glue ``S -> K``."""
    if s.ambient != m:
        raise ValueError("sublattice must live in the given lattice")
    if not s.is_primitive():
        raise NotContainedError("sublattice is not primitive")
    k = orthogonal_complement(s)
    l1, l2 = s.lattice(), k.lattice()
    d1, d2 = disc_form(l1), disc_form(l2)
    both = span(m, s, k)
    r1 = s.rank
    seen = set()
    pairs = []
    for j in range(m.rank):
        e = [int(i == j) for i in range(m.rank)]
        c = coordinates_in(both, [e])[0]
        x, y = d1.coords(c[:r1]), d2.coords(c[r1:])
        if (x, y) == (d1.zero(), d2.zero()) or (x, y) in seen:
            continue
        seen.add((x, y))
        pairs.append((x, y))
    return k, GlueMap(d1, d2, tuple(pairs))


def _supported(lat: Lattice) -> None:
    if lat.rank and not lat.is_definite():
        raise UnsupportedLatticeError("isometry extension needs a definite partner lattice")


def extend_isometry(ext: PrimitiveExtension, f: Sequence[Sequence[int]],
                    group2: MatrixGroup | None = None) -> tuple[tuple[int, ...], ...] | None:
    """An isometry of ``M`` restricting to ``f`` on ``L1``, or None.

    The partner ``g`` on ``L2`` is the first element of ``O(L2)`` (sorted)
    compatible with the glue map.
    """
    if not is_isometry(f, ext.l1.gram):
        raise ValueError("f is not an isometry of L1")
    _supported(ext.l2)
    graph = ext.glue.graph()
    d1, d2 = ext.glue.d1, ext.glue.d2
    fbar = induced_form_isometry(ext.l1, f, d1) if d1.ngens else None
    want = {}
    for x, y in graph.items():
        fx = fbar(x) if fbar else x
        if fx not in graph:
            return None
        want[y] = graph[fx]
    group2 = automorphism_group(ext.l2) if group2 is None else group2
    for g in group2.elements():
        if d2.ngens:
            gbar = induced_form_isometry(ext.l2, g, d2)
            if any(gbar(y) != z for y, z in want.items()):
                continue
        return _assemble(ext, f, g)
    return None


def _assemble(ext: PrimitiveExtension, f, g) -> tuple[tuple[int, ...], ...]:
    big = la.block_diag([list(r) for r in f], [list(r) for r in g]) if ext.l2.rank else [list(r) for r in f]
    bt = [list(r) for r in la.transpose(ext.basis)]
    # columns of bt are M basis vectors in L1 + L2 coordinates
    img = la.matmul(big, bt)
    sol = la.solve_rational(bt, img)
    if any(Fraction(x).denominator != 1 for r in sol for x in r):
        raise GlueError("extension is not integral")
    out = tuple(tuple(int(x) for x in r) for r in sol)
    assert is_isometry(out, ext.m.gram)
    return out


@dataclass
class ExtensionReport:
    status: str
    surjective: bool | None = None
    image_order: int | None = None
    form_group_order: int | None = None
    coinvariant_order: int | None = None
    kernel_order: int | None = None
    no_roots: bool | None = None
    extension: tuple | None = None
    messages: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "surjective": self.surjective,
            "image_order": None if self.image_order is None else str(self.image_order),
            "form_group_order": None if self.form_group_order is None else str(self.form_group_order),
            "coinvariant_order": None if self.coinvariant_order is None else str(self.coinvariant_order),
            "kernel_order": None if self.kernel_order is None else str(self.kernel_order),
            "no_roots": self.no_roots,
            "extension": None if self.extension is None else [[str(x) for x in r] for r in self.extension],
            "messages": self.messages,
        }


def parse_glue_generators(raw) -> list[list[Fraction]]:
    """``[[[num, den], ...], ...]`` into rational vectors."""
    out = []
    for vec in raw:
        row = []
        for entry in vec:
            if isinstance(entry, (list, tuple)) and len(entry) == 2:
                row.append(Fraction(int(entry[0]), int(entry[1])))
            elif isinstance(entry, int):
                row.append(Fraction(entry))
            else:
                raise ValueError(f"bad glue entry {entry!r}")
        out.append(row)
    return out


def _image_with_preimages(group: MatrixGroup, lat: Lattice, form: DiscForm):
    """Image of ``group`` in ``O(q)`` mapped to one preimage each."""
    one = mat_identity_like(lat.rank)
    gens = [(induced_form_isometry(lat, g, form), g) for g in group.generators]
    start = FormIsometry.identity(form)
    table = {start: one}
    frontier = [start]
    while frontier:
        nxt = []
        for a in frontier:
            for fb, g in gens:
                c = fb.compose(a)
                if c not in table:
                    table[c] = mat_mul(g, table[a])
                    nxt.append(c)
        frontier = nxt
    return table


def mat_identity_like(n: int):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def unique_extension_check(h: Lattice, data: dict | None,
                           g: Sequence[Sequence[int]] | None = None) -> ExtensionReport:
    """Glue ``g`` on ``H`` to an isometry of ``H + K`` via ``O(K) -> O(q_K)``.

    ``data`` carries the coinvariant Gram ``K`` under ``"gram"`` and the
    overlattice generators under ``"glue_generators"`` (rational vectors in
    ``H + K`` coordinates).  Without data the check is skipped.
    """
    if data is None:
        return ExtensionReport("skipped: external data required")
    k = Lattice(data["gram"])
    if not k.is_negative_definite():
        raise UnsupportedLatticeError("coinvariant lattice must be negative definite")
    if abs(k.det) != abs(h.det):
        raise UnsupportedLatticeError(f"|det K| = {abs(k.det)} differs from |det H| = {abs(h.det)}")
    gens = parse_glue_generators(data.get("glue_generators", []))
    dh, dk = disc_form(h), disc_form(k)
    n = h.rank + k.rank
    pairs = []
    for v in gens:
        if len(v) != n:
            raise ValueError("glue generator has the wrong length")
        pairs.append((dh.coords(v[:h.rank]), dk.coords(v[h.rank:])))
    glue = GlueMap(dh, dk, tuple(pairs))
    try:
        ext = build_extension(h, k, glue)
    except GlueError as exc:
        raise UnsupportedLatticeError(f"wrong discriminant form: {exc}") from exc
    if abs(ext.m.det) != 1 or glue.order != dh.order:
        raise UnsupportedLatticeError("glue does not identify the full discriminant groups")
    report = ExtensionReport("checked")
    report.no_roots = not short_vectors(k.scaled(-1), 2)
    ok = automorphism_group(k)
    image = _image_with_preimages(ok, k, dk)
    order_q, _ = orthogonal_group_of_form(dk)
    report.coinvariant_order = ok.order
    report.image_order = len(image)
    report.form_group_order = order_q
    report.surjective = len(image) == order_q
    report.kernel_order = ok.order // len(image)
    if g is not None:
        if not is_isometry(g, h.gram):
            raise ValueError("g is not an isometry of H")
        graph = glue.graph()
        gbar = induced_form_isometry(h, g, dh)
        inv = {y: x for x, y in graph.items()}
        # required action on q_K: y -> phi(gbar(phi^-1(y)))
        needed = FormIsometry(
            tuple(graph[gbar(inv[_basis(dk, i)])] for i in range(dk.ngens)), dk.factors)
        pre = image.get(needed)
        if pre is None:
            report.messages.append("g does not extend")
        else:
            report.extension = _assemble(ext, g, pre)
            report.messages.append(f"extension unique up to a kernel of order {report.kernel_order}")
    return report


def _basis(form: DiscForm, i: int) -> Element:
    return tuple(int(i == j) for j in range(form.ngens))
