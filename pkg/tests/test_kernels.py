import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3cls import _pykernels, kernels
from k3cls.autgroup import short_vectors
from k3cls.errors import NotDefiniteError
from k3cls.lattice import Lattice

from oracles import box_vectors

BACKENDS = ["python"] + (["cython"] if kernels.compiled_available() else [])


@st.composite
def positive_definite(draw, max_n=3, bound=20):
    n = draw(st.integers(1, max_n))
    while True:
        g = [[0] * n for _ in range(n)]
        for i in range(n):
            g[i][i] = draw(st.integers(1, bound))
            for j in range(i):
                g[i][j] = g[j][i] = draw(st.integers(-bound // 2, bound // 2))
        lat = None
        try:
            lat = Lattice(g)
        except ValueError:
            pass
        if lat is not None and lat.is_positive_definite():
            return g
        # shrink off-diagonals until definite
        for i in range(n):
            for j in range(i):
                g[i][j] = g[j][i] = g[i][j] // 2
        try:
            if Lattice(g).is_positive_definite():
                return g
        except ValueError:
            pass


def test_examples():
    assert len(short_vectors(Lattice([[2]]), 2)) == 1
    a2 = short_vectors(Lattice([[2, 1], [1, 2]]), 2)
    assert len(a2) == 3 and all(n == 2 for _, n in a2)
    no54 = short_vectors(Lattice([[2, 0, 0], [0, 16, 8], [0, 8, 16]]), 2)
    assert no54 == [((1, 0, 0), 2)]


def test_indefinite_rejected():
    with pytest.raises(NotDefiniteError):
        short_vectors(Lattice([[0, 1], [1, 0]]), 2)


@pytest.mark.parametrize("backend", BACKENDS)
@given(g=positive_definite(), bound=st.integers(0, 30))
def test_short_vectors_match_box_search(backend, g, bound):
    got = kernels.short_vectors(g, bound, backend=backend)
    want = [v for v in box_vectors(g, bound) if next(x for x in v if x) > 0]
    assert sorted(got) == sorted(want)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
@given(g=positive_definite(max_n=4))
def test_searcher_parity(g):
    n = len(g)
    lat = Lattice(g)
    vecs = []
    for v, _ in short_vectors(lat, max(g[i][i] for i in range(n))):
        vecs += [v, tuple(-x for x in v)]
    gvecs = [tuple(sum(g[i][j] * v[j] for j in range(n)) for i in range(n)) for v in vecs]
    norms = [sum(a * b for a, b in zip(gv, v)) for gv, v in zip(gvecs, vecs)]
    cands = [[k for k, nv in enumerate(norms) if nv == g[i][i]] for i in range(n)]
    py = kernels.make_searcher(vecs, gvecs, g, cands, backend="python").search()
    cy = kernels.make_searcher(vecs, gvecs, g, cands, backend="cython").search()
    assert py == cy
    if cands[0]:
        pre = (cands[0][0],)
        assert kernels.make_searcher(vecs, gvecs, g, cands, backend="python").search(pre, 1) == \
            kernels.make_searcher(vecs, gvecs, g, cands, backend="cython").search(pre, 1)


def test_large_entries_fall_back_to_python():
    g = [[2**40, 0], [0, 2**40]]
    assert kernels.short_vectors(g, 2**40) == _pykernels.short_vectors(g, 2**40)


def test_unknown_backend_request():
    if kernels.compiled_available():
        assert kernels.BACKEND == "cython"
    else:
        with pytest.raises(RuntimeError):
            kernels.short_vectors([[2]], 2, backend="cython")
