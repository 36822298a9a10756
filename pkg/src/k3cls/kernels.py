"""Backend selection for the hot kernels.

The compiled module is used when it imports and the input magnitudes fit in
int64; set ``K3CLS_PURE_PYTHON=1`` to force the reference implementation.
"""

from __future__ import annotations

import os
from fractions import Fraction

from . import _pykernels

_INT64_SAFE = 2**62

try:
    if os.environ.get("K3CLS_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernels as _compiled
except ImportError:  # pragma: no cover - depends on the build
    _compiled = None

BACKEND = _compiled.BACKEND if _compiled is not None else _pykernels.BACKEND


def compiled_available() -> bool:
    return _compiled is not None


def _coordinate_bound(gram, bound) -> int:
    # |x_i|^2 <= bound * (G^-1)_ii for a positive definite G
    from .linalg import inverse_rational

    inv = inverse_rational(gram)
    worst = max(Fraction(bound) * inv[i][i] for i in range(len(gram)))
    return int(worst) + 1


def short_vectors(gram, bound, backend: str | None = None):
    impl = _pick(backend)
    if impl is not _pykernels and gram:
        cb = _coordinate_bound(gram, bound)
        n = len(gram)
        biggest = max(abs(x) for r in gram for x in r)
        if n * n * biggest * cb * cb >= _INT64_SAFE or bound >= _INT64_SAFE:
            impl = _pykernels
    return impl.short_vectors(gram, bound)


def make_searcher(vecs, gvecs, target, cands, backend: str | None = None):
    impl = _pick(backend)
    if impl is not _pykernels and vecs:
        dim = len(vecs[0])
        bv = max(abs(x) for v in vecs for x in v)
        bg = max(abs(x) for v in gvecs for x in v)
        bt = max((abs(x) for r in target for x in r), default=0)
        if dim * bv * bg >= _INT64_SAFE or bt >= _INT64_SAFE:
            impl = _pykernels
    return impl.Searcher(vecs, gvecs, target, cands)


def _pick(backend):
    if backend == "python" or _compiled is None:
        if backend == "cython" and _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _pykernels
    return _compiled
