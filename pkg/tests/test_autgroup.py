import random

import pytest

from k3cls import kernels
from k3cls.autgroup import (
    MatrixGroup,
    all_automorphisms,
    automorphism_group,
    cyclic_subgroup_classes,
    dihedral_recognition,
    element_order,
    is_isometric,
    is_isometry,
    mat_mul,
    maximal_cyclic_classes,
    special_subgroup,
)
from k3cls.errors import CapExceededError, NotDefiniteError, RankMismatchError, SignatureMismatchError
from k3cls.lattice import Lattice

from oracles import box_bound, count_automorphisms

A2 = [[2, 1], [1, 2]]
NO54 = [[2, 0, 0], [0, 16, 8], [0, 8, 16]]
NO81 = [[4, 0, 2], [0, 4, 2], [2, 2, 12]]


def random_definite_lattices(count, seed=20240611):
    """Seeded positive definite Grams of rank <= 3 with entries in [-20, 20]."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice((1, 2, 2, 3, 3, 3))
        if rng.random() < 0.5:
            # B^T B with small B gives more symmetric examples
            b = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            g = [[sum(b[k][i] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            if rng.random() < 0.5:
                g = [[2 * x for x in r] for r in g]
        else:
            g = [[0] * n for _ in range(n)]
            for i in range(n):
                g[i][i] = rng.randint(1, 20)
                for j in range(i):
                    g[i][j] = g[j][i] = rng.randint(-6, 6)
        if any(abs(x) > 20 for r in g for x in r):
            continue
        try:
            lat = Lattice(g)
        except ValueError:
            continue
        if not lat.is_positive_definite() or box_bound(g, max(g[i][i] for i in range(n))) > 8:
            continue
        out.append(g)
    return out


RANDOM_LATTICES = random_definite_lattices(220)


def test_examples():
    assert automorphism_group(Lattice([[2]])).order == 2
    assert automorphism_group(Lattice(A2)).order == 12
    o54 = automorphism_group(Lattice(NO54))
    assert o54.order == 24
    assert special_subgroup(o54).order == 12
    assert special_subgroup(automorphism_group(Lattice([[2]]))).order == 1
    assert special_subgroup(automorphism_group(Lattice([[4, 1, 0], [1, 4, 0], [0, 0, 20]]))).order == 4


@pytest.mark.parametrize("backend", ["python"] + (["cython"] if kernels.compiled_available() else []))
def test_oracle_equivalence(backend):
    assert len(RANDOM_LATTICES) >= 200
    for g in RANDOM_LATTICES:
        lat = Lattice(g)
        grp = automorphism_group(lat, backend=backend)
        assert grp.order == count_automorphisms(g), g
        assert len(grp.elements()) == grp.order
        for h in grp.generators:
            assert is_isometry(h, g)


def test_all_automorphisms_agrees_with_chain():
    for g in RANDOM_LATTICES[:60]:
        lat = Lattice(g)
        assert sorted(all_automorphisms(lat)) == automorphism_group(lat).elements()


def test_negation_invariance(grams):
    for lat in list(grams.values()) + [Lattice(g) for g in RANDOM_LATTICES[:40]]:
        a = automorphism_group(lat).elements()
        b = automorphism_group(lat.scaled(-1)).elements()
        assert a == b


def test_odd_rank_order_doubles(grams):
    for lat in grams.values():
        o = automorphism_group(lat)
        assert o.order == 2 * special_subgroup(o).order
        minus = tuple(tuple(-int(i == j) for j in range(3)) for i in range(3))
        assert minus in o


def test_deterministic_generators():
    a = automorphism_group(Lattice(NO81)).generators
    b = automorphism_group(Lattice(NO81)).generators
    assert a == b
    if kernels.compiled_available():
        assert automorphism_group(Lattice(NO81), backend="python").generators == a


def test_indefinite_rejected():
    with pytest.raises(NotDefiniteError):
        automorphism_group(Lattice([[0, 1], [1, 0]]))


def test_is_isometric_examples():
    t = is_isometric(Lattice([[2, 0], [0, 48]]), Lattice([[48, 0], [0, 2]]))
    assert t is not None and is_isometry(t, [[2, 0], [0, 48]], [[48, 0], [0, 2]])
    m = [[16, 8], [8, 16]]
    assert is_isometry(is_isometric(Lattice(m), Lattice(m)), m)
    assert is_isometric(Lattice([[4, 1, 0], [1, 4, 0], [0, 0, 20]]),
                        Lattice([[4, 2, 2], [2, 6, 1], [2, 1, 16]])) is None
    with pytest.raises(RankMismatchError):
        is_isometric(Lattice([[2]]), Lattice(A2))
    with pytest.raises(SignatureMismatchError):
        is_isometric(Lattice([[2]]), Lattice([[-2]]))


def test_is_isometric_random_transforms():
    rng = random.Random(7)
    for g in RANDOM_LATTICES[:80]:
        n = len(g)
        # a random unimodular change of basis
        u = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(4):
            i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
            if i != j:
                c = rng.randint(-2, 2)
                for r in range(n):
                    u[r][j] += c * u[r][i]
        h = [[sum(u[a][i] * g[a][b] * u[b][j] for a in range(n) for b in range(n))
              for j in range(n)] for i in range(n)]
        t = is_isometric(Lattice(h), Lattice(g))
        assert t is not None and is_isometry(t, h, g)


def test_cyclic_classes_dihedral():
    so54 = special_subgroup(automorphism_group(Lattice(NO54)))
    assert dihedral_recognition(so54) == 6
    assert sorted(k.order for k in maximal_cyclic_classes(so54)) == [2, 2, 6]
    so81 = special_subgroup(automorphism_group(Lattice(NO81)))
    assert dihedral_recognition(so81) == 4
    assert sorted(k.order for k in maximal_cyclic_classes(so81)) == [2, 2, 4]
    so70 = special_subgroup(automorphism_group(Lattice([[4, 1, 0], [1, 4, 0], [0, 0, 20]])))
    assert dihedral_recognition(so70) == 2
    classes = cyclic_subgroup_classes(so70)
    assert [k.order for k in classes] == [2, 2, 2]
    assert maximal_cyclic_classes(so70) == classes


def test_trivial_and_cyclic_groups():
    assert cyclic_subgroup_classes(MatrixGroup([], 2, order=1)) == []
    rot6 = ((1, -1), (1, 0))
    assert element_order(rot6) == 6
    c6 = MatrixGroup([rot6], 2)
    assert c6.order == 6
    assert dihedral_recognition(c6) is None
    assert len(maximal_cyclic_classes(c6)) == 1
    c4 = MatrixGroup([((0, -1), (1, 0))], 2)
    assert len(maximal_cyclic_classes(c4)) == 1


def test_class_sizes_partition_cyclic_subgroups(grams):
    for lat in grams.values():
        so = special_subgroup(automorphism_group(lat))
        subs = set()
        one = so.identity
        for g in so.elements():
            if g == one:
                continue
            c, x = {one}, g
            while x != one:
                c.add(x)
                x = mat_mul(x, g)
            subs.add(frozenset(c))
        classes = cyclic_subgroup_classes(so)
        assert sum(k.class_size for k in classes) == len(subs)
        assert set().union(*(k.members for k in classes)) == subs


def test_dihedral_has_commuting_involution(grams):
    # every maximal cyclic generator g commutes with an involution f != g
    for lat in grams.values():
        so = special_subgroup(automorphism_group(lat))
        for k in maximal_cyclic_classes(so):
            g = k.generator
            assert any(f != g and element_order(f) == 2 and mat_mul(f, g) == mat_mul(g, f)
                       for f in so.elements())


def test_enumeration_cap():
    e8 = [[2, -1, 0, 0, 0, 0, 0, 0], [-1, 2, -1, 0, 0, 0, 0, 0], [0, -1, 2, -1, 0, 0, 0, -1],
          [0, 0, -1, 2, -1, 0, 0, 0], [0, 0, 0, -1, 2, -1, 0, 0], [0, 0, 0, 0, -1, 2, -1, 0],
          [0, 0, 0, 0, 0, -1, 2, 0], [0, 0, -1, 0, 0, 0, 0, 2]]
    grp = automorphism_group(Lattice(e8))
    assert grp.order == 696729600
    with pytest.raises(CapExceededError):
        grp.elements()
