"""Conway-Sloane genus symbols of even lattices.

The p-adic Jordan decomposition is computed by exact rational elimination
with pivots of minimal p-adic valuation.  At p = 2 the symbol is brought to
a canonical form by searching the sign walks and oddity fusions that lead
to valid symbols.  Scale-1 constituents are omitted from the rendered
string.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .lattice import Lattice


def _val(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _unit(x: Fraction, p: int) -> Fraction:
    return x / Fraction(p) ** _val(x, p)


def _unit_mod(x: Fraction, m: int) -> int:
    return x.numerator * pow(x.denominator, -1, m) % m


def _legendre(u: Fraction, p: int) -> int:
    a = _unit_mod(u, p)
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _sign2(u: Fraction) -> int:
    return 1 if _unit_mod(u, 8) in (1, 7) else -1


def prime_factors(n: int) -> list[int]:
    n = abs(n)
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class Constituent:
    """One Jordan constituent ``f_q`` with ``q = p**exp``.

    ``even`` and ``oddity`` are only meaningful at p = 2.
    """

    p: int
    exp: int
    rank: int
    sign: int
    even: bool = False
    oddity: int = 0

    @property
    def scale(self) -> int:
        return self.p ** self.exp

    def render(self) -> str:
        s = f"{self.scale}^{{{'+' if self.sign > 0 else '-'}{self.rank}}}"
        if self.p == 2:
            s += "_II" if self.even else f"_{self.oddity}"
        return s


def _blocks(gram: Sequence[Sequence[int]], p: int) -> list[tuple[int, list[list[Fraction]]]]:
    """Diagonal blocks (valuation, block) of a p-adic Jordan splitting."""
    a = [[Fraction(x) for x in r] for r in gram]
    out = []
    while a:
        n = len(a)
        best = None
        for i in range(n):
            for j in range(i, n):
                if a[i][j] != 0:
                    v = _val(a[i][j], p)
                    key = (v, i != j)
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            raise ValueError("degenerate form")
        (v, off), i, j = best
        if off and p != 2:
            # e_i += e_j makes a diagonal entry of valuation v
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            off = False
        if not off:
            _swap(a, 0, i)
            piv = [[a[0][0]]]
            size = 1
        else:
            _swap(a, 0, i)
            _swap(a, 1, j if j != 0 else i)
            piv = [[a[0][0], a[0][1]], [a[1][0], a[1][1]]]
            size = 2
        inv = _inv(piv)
        rest = list(range(size, n))
        new = []
        for r in rest:
            row = []
            for c in rest:
                corr = sum(a[r][s] * inv[s][t] * a[t][c] for s in range(size) for t in range(size))
                row.append(a[r][c] - corr)
            new.append(row)
        out.append((v, piv))
        a = new
    return out


def _swap(a, i, j):
    if i == j:
        return
    a[i], a[j] = a[j], a[i]
    for r in a:
        r[i], r[j] = r[j], r[i]


def _inv(m):
    if len(m) == 1:
        return [[1 / m[0][0]]]
    (x, y), (z, w) = m
    d = x * w - y * z
    return [[w / d, -y / d], [-z / d, x / d]]


def padic_jordan(lat: Lattice, p: int) -> list[Constituent]:
    """Jordan constituents of ``L (x) Z_p`` in increasing scale.

    At p = 2 the signs and oddities are those of the decomposition found,
    before canonicalization.
    """
    if lat.rank == 0:
        return []
    groups: dict[int, list[list[list[Fraction]]]] = {}
    for v, blk in _blocks(lat.gram, p):
        groups.setdefault(v, []).append(blk)
    out = []
    for v in sorted(groups):
        blks = groups[v]
        rank = sum(len(b) for b in blks)
        udet = Fraction(1)
        odd_units = []
        for b in blks:
            if len(b) == 1:
                u = _unit(b[0][0], p)
                odd_units.append(u)
            else:
                u = _unit(b[0][0] * b[1][1] - b[0][1] * b[1][0], p)
            udet *= u
        if p == 2:
            even = not odd_units
            t = sum(_unit_mod(u, 8) for u in odd_units) % 8
            out.append(Constituent(2, v, rank, _sign2(udet), even, t))
        else:
            out.append(Constituent(p, v, rank, _legendre(udet, p)))
    return out


def _valid_oddities(sign: int, rank: int) -> list[int]:
    if rank == 1:
        return [1, 7] if sign > 0 else [3, 5]
    if rank == 2:
        return [0, 2, 6] if sign > 0 else [2, 4, 6]
    return [t for t in range(8) if t % 2 == rank % 2]


def _trains_and_compartments(cons: list[Constituent]):
    by_exp = {c.exp: c for c in cons}
    lo, hi = min(by_exp), max(by_exp)

    def odd(e):
        return e in by_exp and not by_exp[e].even

    trains, cur = [], [lo]
    for e in range(lo + 1, hi + 1):
        if odd(e - 1) or odd(e):
            cur.append(e)
        else:
            trains.append(cur)
            cur = [e]
    trains.append(cur)
    comp = {}
    cid = 0
    for e in range(lo, hi + 1):
        if odd(e):
            if not odd(e - 1):
                cid += 1
            comp[e] = cid
    trains = [[e for e in t if e in by_exp] for t in trains]
    return [t for t in trains if t], comp


def canonical_2adic(cons: Sequence[Constituent]) -> list[Constituent]:
    """Canonical representative of a 2-adic symbol.

    All symbols reachable by sign walks within trains (keeping only valid
    symbols) are explored; the chosen one has the fewest minus signs on
    scale 1, then on the largest scales, then the lexicographically
    smallest oddities.
    """
    cons = sorted((replace(c) for c in cons if c.rank > 0), key=lambda c: c.exp)
    if not cons:
        return []
    trains, comp = _trains_and_compartments(cons)
    exps = [c.exp for c in cons]
    pos = {e: i for i, e in enumerate(exps)}
    ncomp = max(comp.values(), default=0)
    members = [[e for e in exps if comp.get(e) == k] for k in range(1, ncomp + 1)]

    def walk(signs, totals, train, i, j):
        # composite of neighbour steps from train[i] to train[j]
        signs, totals = list(signs), list(totals)
        signs[pos[train[i]]] *= -1
        signs[pos[train[j]]] *= -1
        for s in range(i, j):
            for k in {comp[e] for e in (train[s], train[s + 1]) if e in comp}:
                totals[k - 1] = (totals[k - 1] + 4) % 8
        return tuple(signs), tuple(totals)

    def split(signs, totals):
        out = {}
        for k, es in enumerate(members):
            choice = _split_oddity([(signs[pos[e]], cons[pos[e]].rank) for e in es], totals[k])
            if choice is None:
                return None
            out.update(zip(es, choice))
        return out

    start = (tuple(c.sign for c in cons),
             tuple(sum(cons[pos[e]].oddity for e in es) % 8 for es in members))
    if split(*start) is None:
        raise ArithmeticError("2-adic data does not form a valid symbol")
    seen = {start}
    queue = [start]
    while queue:
        state = queue.pop()
        for train in trains:
            for i in range(len(train)):
                for j in range(i + 1, len(train)):
                    nxt = walk(*state, train, i, j)
                    if nxt not in seen and split(*nxt) is not None:
                        seen.add(nxt)
                        queue.append(nxt)

    order = [i for i, e in enumerate(exps) if e == 0] + \
        [i for i, e in reversed(list(enumerate(exps))) if e > 0]

    def key(state):
        signs, _ = state
        odd = split(*state)
        return (tuple(signs[i] < 0 for i in order),
                tuple(0 if c.even else odd[c.exp] for c in cons))

    best = min(seen, key=key)
    odd = split(*best)
    return [replace(c, sign=best[0][i], oddity=0 if c.even else odd[c.exp])
            for i, c in enumerate(cons)]


def _split_oddity(shape: list[tuple[int, int]], total: int) -> tuple[int, ...] | None:
    def rec(i, acc):
        if i == len(shape):
            return () if acc % 8 == total else None
        for t in _valid_oddities(*shape[i]):
            rest = rec(i + 1, acc + t)
            if rest is not None:
                return (t,) + rest
        return None

    return rec(0, 0)


@dataclass(frozen=True)
class GenusSymbol:
    signature: tuple[int, int]
    local: tuple[tuple[int, tuple[Constituent, ...]], ...]

    def constituents(self, p: int) -> tuple[Constituent, ...]:
        for q, cons in self.local:
            if q == p:
                return cons
        return ()

    def render(self) -> str:
        parts = []
        for _, cons in self.local:
            parts.extend(c.render() for c in cons if c.exp > 0)
        return " ".join(parts)

    __str__ = render

    def det_abs(self) -> int:
        out = 1
        for _, cons in self.local:
            for c in cons:
                out *= c.scale ** c.rank
        return out


def genus_symbol(lat: Lattice) -> GenusSymbol:
    local = []
    for p in sorted(set([2] + prime_factors(lat.det))):
        cons = padic_jordan(lat, p)
        if p == 2:
            cons = canonical_2adic(cons)
        local.append((p, tuple(cons)))
    return GenusSymbol(lat.signature, tuple(local))


def normalize_symbol(text: str) -> str:
    """Collapse commas and whitespace in a printed symbol."""
    return " ".join(text.replace(",", " ").split())


def same_genus(l1: Lattice, l2: Lattice) -> bool:
    if l1.rank != l2.rank or l1.signature != l2.signature:
        return False
    if abs(l1.det) != abs(l2.det):
        return False
    for p in sorted(set([2] + prime_factors(l1.det) + prime_factors(l2.det))):
        a, b = padic_jordan(l1, p), padic_jordan(l2, p)
        if p == 2:
            a, b = canonical_2adic(a), canonical_2adic(b)
        if a != b:
            return False
    return True
