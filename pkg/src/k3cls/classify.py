"""Maximal cyclic extensions of the symplectic actions on rank-3 invariant lattices.

For each maximal cyclic subgroup ``<g>`` of ``SO(H)`` (up to conjugacy) the
fixed lattice ``Zl = ker(1 - g)`` is the polarization and its orthogonal
complement plays the role of the transcendental lattice ``T_X``.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import linalg as la
from .autgroup import (
    Matrix,
    automorphism_group,
    dihedral_recognition,
    is_isometric,
    maximal_cyclic_classes,
    special_subgroup,
)
from .discform import disc_form, orthogonal_group_of_form
from .errors import ClassificationError, K3ClsError
from .genus import genus_symbol, normalize_symbol, same_genus
from .lattice import Lattice, Sublattice, index_in, orthogonal_complement, span, whole

DATA_ENV = "K3CLS_DATA"


def load_reference(path: str | Path | None = None) -> dict:
    """The embedded dataset, or the file named by ``path`` / ``$K3CLS_DATA``."""
    path = path or os.environ.get(DATA_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    text = resources.files("k3cls").joinpath("data/reference.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class InvariantLatticeEntry:
    group_no: int
    index: int
    group: str
    group_order: int
    gram: tuple[tuple[int, ...], ...]
    det: int
    genus: str
    so_k: int
    so_k_printed: int
    oq: int
    aut_coinvariant: int
    cases: tuple[dict, ...] = field(default=(), repr=False)

    @property
    def lattice(self) -> Lattice:
        return Lattice(self.gram, label=f"{self.group_no}#{self.index}")


def entries(reference: dict | None = None) -> list[InvariantLatticeEntry]:
    ref = load_reference() if reference is None else reference
    rows = {r["group_no"]: r for r in ref["table"]}
    out = []
    for lat in ref["lattices"]:
        row = rows[lat["group_no"]]
        out.append(InvariantLatticeEntry(
            group_no=lat["group_no"], index=lat["index"], group=row["group"],
            group_order=row["group_order"],
            gram=tuple(tuple(r) for r in lat["gram"]), det=row["det"], genus=row["genus"],
            so_k=lat["so_k"], so_k_printed=row["so_k"][min(lat["index"], len(row["so_k"]) - 1)], oq=row["oq"],
            aut_coinvariant=row["aut_coinvariant"], cases=tuple(lat["cases"])))
    return out


@dataclass(frozen=True)
class CaseRecord:
    group_no: int
    label: str
    n: int
    tx: tuple[tuple[int, int], tuple[int, int]]
    l_square: int
    glue_index: int
    l: tuple[int, ...] = field(compare=False)
    generator: Matrix = field(compare=False, repr=False)
    lattice_index: int = field(default=0, compare=False)

    def to_json(self) -> dict:
        return {
            "group_no": str(self.group_no),
            "label": self.label,
            "n": str(self.n),
            "tx": [[str(x) for x in r] for r in self.tx],
            "l2": str(self.l_square),
            "glue": str(self.glue_index),
            "l": [str(x) for x in self.l],
        }


def reduce_binary(gram: Sequence[Sequence[int]], basis: Sequence[Sequence[int]]
                  ) -> tuple[list[list[int]], list[list[int]]]:
    """Gauss reduction of a positive binary form: ``|2b| <= a <= c``, ``b >= 0``."""
    u, v = list(basis[0]), list(basis[1])
    a, b, c = gram[0][0], gram[0][1], gram[1][1]
    while True:
        if a > c:
            u, v, a, c = v, u, c, a
        if 2 * abs(b) <= a:
            break
        k = (2 * b + a) // (2 * a)
        v = [y - k * x for x, y in zip(u, v)]
        c, b = c - 2 * k * b + k * k * a, b - k * a
    if a > c:
        u, v, a, c = v, u, c, a
    if b < 0:
        v = [-x for x in v]
        b = -b
    return [[a, b], [b, c]], [u, v]


def char_poly_check(g: Sequence[Sequence[int]]) -> bool:
    """``(x-1)(x+1)^2`` or ``(x-1)`` times a cyclotomic ``Phi_3, Phi_4, Phi_6``."""
    return tuple(la.charpoly(g)) in {
        (1, 1, -1, -1),
        (1, 0, 0, -1),
        (1, -1, 1, -1),
        (1, -2, 2, -1),
    }


def classify_lattice(h: Lattice, group_no: int = 0, lattice_index: int = 0,
                     reference_cases: Sequence[dict] | None = None,
                     label_offset: int = 0) -> list[CaseRecord]:
    if h.rank != 3 or not h.is_positive_definite() or not h.is_even:
        raise ClassificationError("expected an even positive definite rank-3 lattice")
    so = special_subgroup(automorphism_group(h))
    if dihedral_recognition(so) is None:
        raise ClassificationError(f"SO has order {so.order} and is not dihedral")
    raw = []
    for klass in maximal_cyclic_classes(so):
        g = klass.generator
        one_minus = [[int(i == j) - g[i][j] for j in range(3)] for i in range(3)]
        ker = la.kernel_saturated(one_minus)
        if len(ker) != 1:
            raise ClassificationError(f"fixed lattice of an order-{klass.order} element has rank {len(ker)}")
        l = tuple(ker[0])
        if next(x for x in l if x) < 0:
            l = tuple(-x for x in l)
        zl = Sublattice(h, [l])
        tx = orthogonal_complement(zl)
        tg, tb = reduce_binary(tx.gram, tx.basis)
        glue = index_in(span(h, tx, zl), whole(h))
        raw.append((klass.order, h.inner(l, l), glue, tuple(map(tuple, tg)), l, g))
    raw.sort(key=lambda r: (-r[0], r[1]))
    records = []
    used = set()
    for pos, (n, l2, glue, tg, l, g) in enumerate(raw):
        label = f"{group_no}{chr(ord('a') + label_offset + pos)}"
        for ref in reference_cases or ():
            if ref["label"] in used:
                continue
            if (ref["n"], ref["l2"], ref["glue"]) == (n, l2, glue) and \
                    is_isometric(Lattice(ref["tx"]), Lattice(tg)) is not None:
                label = ref["label"]
                used.add(label)
                break
        records.append(CaseRecord(group_no, label, n, tg, l2, glue, l, g, lattice_index))
    return records


def _classify_entry(args) -> list[CaseRecord]:
    gram, group_no, index, cases, offset = args
    return classify_lattice(Lattice(gram), group_no, index, cases, offset)


def _jobs(ents: Sequence[InvariantLatticeEntry]):
    return [(e.gram, e.group_no, e.index, e.cases, 3 * e.index) for e in ents]


def run_all(reference: dict | None = None, threads: int = 1,
            group_no: int | None = None) -> list[CaseRecord]:
    """Classify every embedded lattice; output order is the dataset order."""
    ents = entries(reference)
    if group_no is not None:
        ents = [e for e in ents if e.group_no == group_no]
    jobs = _jobs(ents)
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_classify_entry, jobs))
    else:
        parts = [_classify_entry(j) for j in jobs]
    return [r for part in parts for r in part]


@dataclass
class VerifyReport:
    cases_total: int = 0
    cases_ok: int = 0
    rows_total: int = 0
    rows_ok: int = 0
    mismatches: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        return f"{self.cases_ok}/{self.cases_total} cases, {self.rows_ok}/{self.rows_total} table rows"

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "cases": f"{self.cases_ok}/{self.cases_total}",
            "table_rows": f"{self.rows_ok}/{self.rows_total}",
            "mismatches": self.mismatches,
            "notes": self.notes,
        }

    def render(self) -> str:
        lines = [self.summary()]
        lines += [f"MISMATCH {m}" for m in self.mismatches]
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def _check_entry(e: InvariantLatticeEntry, rep: VerifyReport) -> bool:
    """Lattice-level checks; returns True when all pass."""
    tag = f"{e.group_no}#{e.index}"
    try:
        h = e.lattice
    except K3ClsError as exc:
        rep.mismatches.append(f"{tag}: invalid Gram ({exc})")
        return False
    ok = True
    if h.det != e.det:
        rep.mismatches.append(f"{tag}: det {h.det} != {e.det}")
        ok = False
    if not (h.is_even and h.is_positive_definite()):
        rep.mismatches.append(f"{tag}: not even positive definite")
        return False
    sym = genus_symbol(h).render()
    if sym != normalize_symbol(e.genus):
        rep.mismatches.append(f"{tag}: genus {sym} != {e.genus}")
        ok = False
    so = special_subgroup(automorphism_group(h))
    k = dihedral_recognition(so)
    if k != e.so_k:
        rep.mismatches.append(f"{tag}: SO is D{k}, expected D{e.so_k}")
        ok = False
    if k != e.so_k_printed:
        rep.notes.append(f"{tag}: summary table prints SO as D{e.so_k_printed}, "
                         f"computed D{k} (order {so.order})")
    oq, _ = orthogonal_group_of_form(disc_form(h))
    if oq != e.oq:
        rep.mismatches.append(f"{tag}: #O(q) {oq} != {e.oq}")
        ok = False
    if e.group_order * oq != e.aut_coinvariant:
        rep.mismatches.append(f"{tag}: {e.group_order}*{oq} != {e.aut_coinvariant}")
        ok = False
    return ok


def _check_cases(e: InvariantLatticeEntry, rep: VerifyReport) -> None:
    rep.cases_total += len(e.cases)
    try:
        recs = classify_lattice(e.lattice, e.group_no, e.index, e.cases, 3 * e.index)
    except K3ClsError as exc:
        rep.mismatches.append(f"{e.group_no}#{e.index}: classification failed ({exc})")
        return
    by_label = {r.label: r for r in recs}
    for ref in e.cases:
        r = by_label.get(ref["label"])
        if r is None:
            rep.mismatches.append(f"{ref['label']}: no computed case matches")
            continue
        ok = (r.n, r.l_square, r.glue_index) == (ref["n"], ref["l2"], ref["glue"]) and \
            is_isometric(Lattice(ref["tx"]), Lattice(r.tx)) is not None
        if ok:
            rep.cases_ok += 1
        else:
            rep.mismatches.append(f"{ref['label']}: computed n={r.n} l2={r.l_square} glue={r.glue_index} T_X={r.tx}")
    extra = len(recs) - len(e.cases)
    if extra:
        rep.mismatches.append(f"{e.group_no}#{e.index}: {len(recs)} computed cases, {len(e.cases)} expected")


def verify_against_reference(reference: dict | None = None) -> VerifyReport:
    ref = load_reference() if reference is None else reference
    ents = entries(ref)
    rep = VerifyReport()
    row_ok: dict[int, bool] = {}
    for e in ents:
        good = _check_entry(e, rep)
        row_ok[e.group_no] = row_ok.get(e.group_no, True) and good
        _check_cases(e, rep)
    groups: dict[int, list[InvariantLatticeEntry]] = {}
    for e in ents:
        groups.setdefault(e.group_no, []).append(e)
    for no, es in groups.items():
        if len(es) < 2:
            continue
        try:
            a, b = es[0].lattice, es[1].lattice
            sg = same_genus(a, b)
            iso = is_isometric(a, b) is not None
        except K3ClsError as exc:
            rep.mismatches.append(f"{no}: pair check failed ({exc})")
            row_ok[no] = False
            continue
        if not sg or iso:
            rep.mismatches.append(f"{no}: same_genus={sg} isometric={iso}")
            row_ok[no] = False
    rep.rows_total = len(ref["table"])
    rep.rows_ok = sum(1 for r in ref["table"] if row_ok.get(r["group_no"], False))
    rep.notes.append("GAP Ids, split structure and #O(coinvariant) are reference metadata, "
                     "checked only through the #G_s * #O(q) identity")
    return rep
