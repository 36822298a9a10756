"""Acceptance criteria, one test per criterion.

Every test records a ``[PASS]``/``[FAIL]`` line that is printed in the
terminal summary.  Expected values are written out literally here rather
than read from the embedded dataset.  All comparisons are exact integer
or string equality; the only tolerances are the wall-clock bounds.
"""

import random
import time
from collections import Counter

import sympy

import conftest
from k3cls import linalg as la
from k3cls.autgroup import automorphism_group, dihedral_recognition, is_isometric, special_subgroup
from k3cls.classify import char_poly_check, run_all
from k3cls.discform import anti_isometries, disc_form, orthogonal_group_of_form
from k3cls.genus import genus_symbol, normalize_symbol, same_genus
from k3cls.glue import build_extension, glue_from_isometry, glue_map_of
from k3cls.lattice import Lattice, Sublattice, discriminant_group

from oracles import count_automorphisms
from test_autgroup import RANDOM_LATTICES

ROWS = [54, 62, 63, 70, 74, 76, 77, 78, 79, 80, 81]
DETS = [384, 324, 216, 300, 196, 384, 192, 288, 180, 256, 160]
# per row, "a/b" meaning first and second lattice of the row
DIHEDRAL = ["6", "4", "6", "2", "2/4", "4", "6", "4", "2/4", "4", "4"]
GENUS = {
    54: "2^{+1}_1,8^{-2}_II,3^{+1}",
    62: "4^{+1}_7,3^{+2},9^{+1}",
    63: "2^{-3}_1,3^{+1},9^{+1}",
    70: "4^{-1}_5,3^{-1},5^{-2}",
    74: "4^{+1}_7,7^{+2}",
    76: "4^{-2}_4,8^{+1}_1,3^{+1}",
    77: "4^{-3}_1,3^{-1}",
    78: "2^{+2}_II,8^{+1}_7,3^{+2}",
    79: "4^{-1}_3,3^{+2},5^{+1}",
    80: "4^{+1}_1,8^{+2}_2",
    81: "2^{-2}_II,8^{+1}_7,5^{-1}",
}
OQ = [192, 288, 72, 48, 32, 128, 192, 128, 32, 128, 96]
GROUP_ORDER = [48, 72, 72, 120, 168, 192, 192, 288, 360, 384, 960]
AUT_COINVARIANT = [9216, 20736, 5184, 5760, 5376, 24576, 36864, 36864, 11520, 49152, 92160]
# (n, l^2, glue, T_X) per case label
CASES = {
    "54a": (6, 2, 1, [[16, 8], [8, 16]]), "54b": (2, 16, 2, [[2, 0], [0, 48]]),
    "54c": (2, 48, 2, [[2, 0], [0, 16]]),
}


def _record(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _row_lattices(grams, no):
    return [grams[k] for k in sorted(grams) if k[0] == no]


def test_criterion_1_classification(reference, grams):
    start = time.perf_counter()
    records = run_all()
    elapsed = time.perf_counter() - start
    expected = {c["label"]: (c["n"], c["l2"], c["glue"], c["tx"])
                for lat in reference["lattices"] for c in lat["cases"]}
    # the three cases of No. 54 are pinned literally as well
    assert all(expected[k] == v for k, v in CASES.items())
    got = {r.label: r for r in records}
    bad = []
    for label, (n, l2, glue, tx) in expected.items():
        r = got.get(label)
        if r is None or (r.n, r.l_square, r.glue_index) != (n, l2, glue) or \
                is_isometric(Lattice(r.tx), Lattice(tx)) is None:
            bad.append(label)
    # label-free comparison: each computed record matches a distinct expected one
    pool = Counter((n, l2, glue) for n, l2, glue, _ in expected.values())
    pool.subtract(Counter((r.n, r.l_square, r.glue_index) for r in records))
    ok = len(records) == 42 and len(expected) == 42 and not bad and not +pool and elapsed < 10
    assert _record(1, ok, f"{len(records)} records, {42 - len(bad)}/42 matched, {elapsed:.2f}s (< 10s)")


def test_criterion_2_determinants(grams):
    got = [[lat.det for lat in _row_lattices(grams, no)] for no in ROWS]
    ok = all(all(d == want for d in ds) for ds, want in zip(got, DETS))
    assert _record(2, ok, "dets " + ",".join("/".join(map(str, ds)) for ds in got))


def test_criterion_3_dihedral(grams):
    got, bad = [], []
    for no, want in zip(ROWS, DIHEDRAL):
        ks = []
        for lat in _row_lattices(grams, no):
            k = dihedral_recognition(special_subgroup(automorphism_group(lat)))
            ks.append(str(k))
        got.append("/".join(ks))
        if "/".join(ks) != want and not (len(ks) == 2 and want.count("/") == 0 and ks == [want, want]):
            bad.append(f"No. {no}: D{'/D'.join(ks)} vs D{want.replace('/', '/D')}")
    ok = not bad
    detail = "k = " + ",".join(got) + ("" if ok else "; mismatch " + "; ".join(bad))
    assert _record(3, ok, detail)


def test_criterion_4_genus(grams):
    bad = []
    for no in ROWS:
        for lat in _row_lattices(grams, no):
            s = genus_symbol(lat).render()
            if s != normalize_symbol(GENUS[no]):
                bad.append(f"{no}: {s}")
    assert _record(4, not bad, "11/11 genus strings" if not bad else "; ".join(bad))


def test_criterion_5_form_groups(grams):
    start = time.perf_counter()
    got = []
    for no in ROWS:
        orders = {orthogonal_group_of_form(disc_form(lat))[0] for lat in _row_lattices(grams, no)}
        got.append(orders.pop() if len(orders) == 1 else None)
    elapsed = time.perf_counter() - start
    ok = got == OQ and elapsed < 60
    assert _record(5, ok, f"#O(q) = {got}, {elapsed:.2f}s (< 60s)")


def test_criterion_6_product_identity(grams):
    bad = []
    for no, gs, printed in zip(ROWS, GROUP_ORDER, AUT_COINVARIANT):
        oq = orthogonal_group_of_form(disc_form(_row_lattices(grams, no)[0]))[0]
        if gs * oq != printed:
            bad.append(f"{no}: {gs}*{oq} != {printed}")
    assert _record(6, not bad, "11/11 rows, e.g. 48*192 = 9216, 960*96 = 92160" if not bad else "; ".join(bad))


def test_criterion_7_genus_vs_isometry(grams):
    out = []
    for no in (70, 74, 79):
        a, b = _row_lattices(grams, no)
        out.append((no, same_genus(a, b), is_isometric(a, b) is not None))
    ok = all(sg and not iso for _, sg, iso in out)
    assert _record(7, ok, ", ".join(f"{no}: same_genus={sg} isometric={iso}" for no, sg, iso in out))


def _part_a():
    fails = [g for g in RANDOM_LATTICES if automorphism_group(Lattice(g)).order != count_automorphisms(g)]
    return len(RANDOM_LATTICES) >= 200 and not fails, f"(a) {len(RANDOM_LATTICES) - len(fails)}/{len(RANDOM_LATTICES)}"


def _extensions_of_cases(grams):
    for r in run_all():
        h = grams[(r.group_no, r.lattice_index)]
        zl = Sublattice(h, [r.l])
        tx, glue = glue_map_of(h, zl)
        yield h, build_extension(zl.lattice(), tx.lattice(), glue)


def _part_b(extensions):
    exts = list(extensions)
    for a, b in (([[2]], [[-2]]), ([[2, 1], [1, 2]], [[-2, -1], [-1, -2]]), ([[6]], [[-6]]),
                 ([[4, 2], [2, 4]], [[-12]])):
        la_, lb = Lattice(a), Lattice(b)
        da, db = disc_form(la_), disc_form(lb)
        if da.order != db.order:
            continue
        for phi in anti_isometries(da, db):
            exts.append((None, build_extension(la_, lb, glue_from_isometry(da, db, phi))))
    bad = [e for _, e in exts if abs(e.l1.det * e.l2.det) != e.index ** 2 * abs(e.m.det)]
    return not bad and len(exts) > 42, f"(b) {len(exts) - len(bad)}/{len(exts)}"


def _random_grams(rng, count):
    out = []
    while len(out) < count:
        n = rng.randint(1, 4)
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1):
                g[i][j] = g[j][i] = rng.randint(-12, 12)
        if la.det(g) != 0:
            out.append(g)
    return out


def _part_c(rng):
    grams = _random_grams(rng, 150)
    bad = []
    for g in grams:
        factors, _ = discriminant_group(Lattice(g))
        order = 1
        for d in factors:
            order *= d
        if order != abs(int(sympy.Matrix(g).det())):
            bad.append(g)
    return not bad, f"(c) {len(grams) - len(bad)}/{len(grams)}"


def _part_d(rng):
    bad = 0
    total = 0
    for _ in range(120):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        s, u, v = la.snf(m)
        h, w = la.hnf(m)
        total += 1
        checks = [
            la.matmul(la.matmul(u, m), v) == s,
            abs(la.det(u)) == 1 and abs(la.det(v)) == 1,
            all(s[i][j] == 0 for i in range(r) for j in range(c) if i != j),
            all(s[i + 1][i + 1] % s[i][i] == 0 if s[i][i] else s[i + 1][i + 1] == 0
                for i in range(min(r, c) - 1)),
            la.matmul(w, m) == h and abs(la.det(w)) == 1,
            sympy.Matrix(h).rank() == sympy.Matrix(m).rank(),
        ]
        bad += not all(checks)
    return bad == 0, f"(d) {total - bad}/{total}"


def _part_e(records):
    bad = [r.label for r in records if not char_poly_check(r.generator)]
    return not bad, f"(e) {len(records) - len(bad)}/{len(records)}"


def _part_f(pairs):
    u = Lattice([[0, 1], [1, 0]])
    s = Sublattice(u, [[1, 1]])
    k, glue = glue_map_of(u, s)
    ext = build_extension(s.lattice(), k.lattice(), glue)
    ok_u = ext.m.det == -1 and ext.m.signature == (1, 1) and ext.m.is_even
    good = sum(is_isometric(e.m, h) is not None for h, e in pairs)
    return ok_u and good == 42, f"(f) U {'ok' if ok_u else 'bad'}, {good}/42"


def test_criterion_8_substitutes(grams):
    rng = random.Random(8)
    pairs = list(_extensions_of_cases(grams))
    parts = [_part_a(), _part_b(pairs), _part_c(rng), _part_d(rng), _part_e(run_all()), _part_f(pairs)]
    ok = all(p[0] for p in parts)
    assert _record(8, ok, "; ".join(p[1] for p in parts))
