import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3cls import linalg as la
from k3cls.errors import DegenerateLatticeError, NotContainedError, RankMismatchError
from k3cls.lattice import (
    Lattice,
    Sublattice,
    coordinates_in,
    direct_sum,
    discriminant_group,
    index_in,
    load_lattice,
    orthogonal_complement,
    span,
    whole,
)

NO54 = Lattice([[2, 0, 0], [0, 16, 8], [0, 8, 16]])


@st.composite
def nondegenerate_symmetric(draw, max_n=4, bound=12):
    n = draw(st.integers(1, max_n))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = draw(st.integers(-bound, bound))
    if la.det(g) == 0:
        g = [[g[i][j] + (2 * bound + 1 if i == j else 0) for j in range(n)] for i in range(n)]
    return g


def test_basic_invariants():
    assert NO54.det == 384
    assert NO54.signature == (3, 0)
    assert NO54.is_even and NO54.is_positive_definite()
    u = Lattice([[0, 1], [1, 0]])
    assert u.signature == (1, 1) and u.det == -1 and not u.is_definite()
    assert not Lattice([[1]]).is_even


def test_invalid_grams():
    with pytest.raises(DegenerateLatticeError):
        Lattice([[2, 2], [2, 2]])
    with pytest.raises(ValueError):
        Lattice([[2, 1], [0, 2]])
    with pytest.raises(ValueError):
        Lattice([[2, 1]])


@given(nondegenerate_symmetric())
def test_signature_matches_eigenvalues(g):
    lat = Lattice(g)
    ev = np.linalg.eigvalsh(np.array(g, dtype=float))
    assert lat.signature == (int((ev > 0).sum()), int((ev < 0).sum()))


@given(nondegenerate_symmetric())
def test_discriminant_group_order_is_abs_det(g):
    factors, gens = discriminant_group(Lattice(g))
    order = 1
    for d in factors:
        order *= d
    assert order == abs(la.det(g))
    for x in gens:
        # generators are dual vectors
        assert all(v.denominator == 1 for v in la.matvec(g, x))


def test_orthogonal_complement_of_axis():
    k = orthogonal_complement(Sublattice(NO54, [[1, 0, 0]]))
    assert k.gram == [[16, 8], [8, 16]]
    assert k.is_primitive()


def test_index_and_coordinates():
    zl = Sublattice(NO54, [[0, 0, 1]])
    tx = orthogonal_complement(zl)
    assert index_in(span(NO54, tx, zl), whole(NO54)) == 2
    with pytest.raises(NotContainedError):
        coordinates_in(zl, [[1, 0, 0]])
    with pytest.raises(RankMismatchError):
        index_in(zl, whole(NO54))


def test_direct_sum_and_json(tmp_path):
    s = direct_sum(Lattice([[2]]), Lattice([[2, 1], [1, 2]]))
    assert s.gram == ((2, 0, 0), (0, 2, 1), (0, 1, 2))
    p = tmp_path / "l.json"
    p.write_text(json.dumps(s.to_json()))
    assert load_lattice(p) == s
    with pytest.raises(ValueError):
        Lattice.from_json({"gram": [[1.5]]})
