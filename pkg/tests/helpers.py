"""Brute-force oracles shared by the test modules. Nothing here calls the
decision procedures under test."""

import itertools
from math import comb, prod

import numpy as np

from hypervar.algebra import FiniteAlgebra, isomorphic
from hypervar.terms import BANDS


def free_band_size(n):
    """Closed formula for |FB(n)|: sum over contents of size k of
    prod_{i=1..k} (k-i+1)^(2^i)."""
    return sum(comb(n, k) * prod((k - i + 1) ** (2 ** i) for i in range(1, k + 1)) for k in range(1, n + 1))


def band_tables(n):
    """Every idempotent associative table on 0..n-1, by backtracking."""
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    t = [[-1] * n for _ in range(n)]
    for i in range(n):
        t[i][i] = i
    triples = list(itertools.product(range(n), repeat=3))

    def ok():
        for a, b, c in triples:
            ab, bc = t[a][b], t[b][c]
            if ab < 0 or bc < 0:
                continue
            l, r = t[ab][c], t[a][bc]
            if l >= 0 and r >= 0 and l != r:
                return False
        return True

    def go(k):
        if k == len(cells):
            yield np.array(t)
            return
        i, j = cells[k]
        for v in range(n):
            t[i][j] = v
            if ok():
                yield from go(k + 1)
        t[i][j] = -1

    yield from go(0)


def bands_up_to_iso(max_size):
    out = []
    for n in range(1, max_size + 1):
        reps = []
        for table in band_tables(n):
            alg = FiniteAlgebra(n, BANDS, {"mul": table})
            if not any(isomorphic(alg, r) is not None for r in reps):
                reps.append(alg)
        out.extend(reps)
    return out


def words(letters, max_len, min_len=1):
    for k in range(min_len, max_len + 1):
        yield from itertools.product(range(letters), repeat=k)


def congruence_closure(alg, pairs):
    """Least congruence by naive fixed point on a set of pairs."""
    n = alg.size
    rel = {(a, a) for a in range(n)} | {tuple(p) for p in pairs} | {(b, a) for a, b in pairs}
    ops = [(s.name, s.arity) for s in alg.signature]
    while True:
        new = set(rel)
        for a, b in rel:
            for c, d in rel:
                if b == c:
                    new.add((a, d))
            for name, arity in ops:
                table = alg[name]
                for slot in range(arity):
                    for rest in itertools.product(range(n), repeat=arity - 1):
                        u = rest[:slot] + (a,) + rest[slot:]
                        v = rest[:slot] + (b,) + rest[slot:]
                        new.add((int(table[u]), int(table[v])))
        if new == rel:
            return rel
        rel = new


def lattices_up_to_iso(max_size):
    """Every lattice with at most ``max_size`` elements, from all order
    relations with 0 as bottom and n-1 as top."""
    from hypervar.lattices import LatticeError, lattice_from_order

    out = []
    for n in range(1, max_size + 1):
        mids = [(a, b) for a in range(1, n - 1) for b in range(1, n - 1) if a != b]
        reps = []
        for bits in itertools.product((False, True), repeat=len(mids)):
            le = np.eye(n, dtype=bool)
            le[0, :] = True
            le[:, n - 1] = True
            for (a, b), on in zip(mids, bits):
                le[a, b] = on
            try:
                alg = lattice_from_order(le)
            except LatticeError:
                continue
            if not any(isomorphic(alg, r) is not None for r in reps):
                reps.append(alg)
        out.extend(reps)
    return out
