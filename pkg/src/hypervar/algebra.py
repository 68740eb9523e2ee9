"""Finite algebras given by operation tables.

Tables are numpy integer arrays of shape ``(size,) * arity``. Term evaluation
is vectorised over whole environment grids, which is what makes exhaustive
identity checking on the 159-element free band practical.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .terms import (
    BANDS,
    LATTICES,
    App,
    Identity,
    OperationSymbol,
    Signature,
    Term,
    Var,
    var_name,
    variables,
)

__all__ = [
    "FiniteAlgebra",
    "Partition",
    "Verdict",
    "AlgebraError",
    "evaluate",
    "evaluate_all",
    "satisfies",
    "derived_algebra",
    "congruence_generated",
    "quotient",
    "isomorphic",
    "trivial_algebra",
    "algebra_from_json",
    "algebra_to_json",
    "term_classes",
]

ISOMORPHISM_CAP = 64
# environments evaluated per chunk in satisfies(); bounds peak memory
_CHUNK = 1 << 20


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """Carrier ``0..size-1`` with one table per operation symbol.

    ``labels`` optionally names the elements (free algebras carry words);
    ``generators`` lists free generators when the algebra is relatively free.
    """

    size: int
    signature: Signature
    tables: Mapping[str, np.ndarray]
    labels: Optional[tuple] = None
    generators: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise AlgebraError("carrier must be nonempty")
        frozen = {}
        for sym in self.signature:
            if sym.name not in self.tables:
                raise AlgebraError(f"missing table for {sym.name!r}")
            t = np.array(self.tables[sym.name], dtype=np.intp)
            if t.shape != (self.size,) * sym.arity:
                raise AlgebraError(
                    f"table {sym.name!r} has shape {t.shape}, expected {(self.size,) * sym.arity}"
                )
            if t.size and (t.min() < 0 or t.max() >= self.size):
                raise AlgebraError(f"table {sym.name!r} has entries outside 0..{self.size - 1}")
            t.setflags(write=False)
            frozen[sym.name] = t
        extra = set(self.tables) - set(frozen)
        if extra:
            raise AlgebraError(f"tables for unknown symbols {sorted(extra)}")
        object.__setattr__(self, "tables", frozen)
        if self.labels is not None and len(self.labels) != self.size:
            raise AlgebraError("one label per element required")

    def __len__(self):
        return self.size

    def __getitem__(self, op: str) -> np.ndarray:
        return self.tables[op]

    def label(self, i: int) -> Any:
        return self.labels[i] if self.labels is not None else i

    def index(self, label: Any) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    def same_tables(self, other: "FiniteAlgebra") -> bool:
        return (
            self.size == other.size
            and self.signature == other.signature
            and all(np.array_equal(self[s.name], other[s.name]) for s in self.signature)
        )

    def __repr__(self):
        return f"FiniteAlgebra(size={self.size}, ops={[s.name for s in self.signature]})"


@dataclass(frozen=True)
class Verdict:
    """Outcome of an identity check; falsy when the identity fails.

    ``witness`` maps variable indices to elements (or labels) of a
    falsifying environment; ``values`` holds the two differing sides there.
    """

    holds: bool
    witness: Optional[dict] = None
    values: Optional[tuple] = None

    def __bool__(self):
        return self.holds

    def describe(self, fmt=str) -> str:
        if self.holds:
            return "holds"
        env = ", ".join(f"{var_name(k)}={fmt(v)}" for k, v in sorted(self.witness.items()))
        lhs, rhs = self.values
        return f"fails at {env}: {fmt(lhs)} != {fmt(rhs)}"


def _term_values(alg: FiniteAlgebra, t: Term, env: Mapping[int, Any]) -> np.ndarray:
    if isinstance(t, Var):
        try:
            return env[t.index]
        except KeyError:
            raise AlgebraError(f"unbound variable {var_name(t.index)}") from None
    table = alg.tables[t.op]
    if not t.args:
        return table[()]
    return table[tuple(_term_values(alg, a, env) for a in t.args)]


def evaluate(alg: FiniteAlgebra, t: Term, env: Mapping[int, int]) -> int:
    return int(_term_values(alg, t, {k: np.intp(v) for k, v in env.items()}))


def _grid(n: int, k: int) -> dict[int, np.ndarray]:
    grid = {}
    for i in range(k):
        shape = [1] * k
        shape[i] = n
        grid[i] = np.arange(n, dtype=np.intp).reshape(shape)
    return grid


def evaluate_all(alg: FiniteAlgebra, t: Term, k: int) -> np.ndarray:
    """Term operation of ``t`` as a ``(size,) * k`` array over variables ``0..k-1``."""
    values = _term_values(alg, t, _grid(alg.size, k))
    return np.broadcast_to(values, (alg.size,) * k)


def satisfies(alg: FiniteAlgebra, e: Identity) -> Verdict:
    """Exhaustive check of ``e`` over all environments, chunked on the first variable."""
    vs = sorted(variables(e.lhs, e.rhs))
    n, k = alg.size, len(vs)
    if k == 0:
        lhs, rhs = int(_term_values(alg, e.lhs, {})), int(_term_values(alg, e.rhs, {}))
        return Verdict(True) if lhs == rhs else Verdict(False, {}, (lhs, rhs))
    grid = _grid(n, k)
    # split off leading variables until a chunk fits in memory
    split = 0
    while split < k - 1 and n ** (k - split) > _CHUNK:
        split += 1
    rest = {vs[i]: grid[i][(0,) * split] for i in range(split, k)}
    for head in itertools.product(range(n), repeat=split):
        env = dict(rest)
        env.update({vs[i]: np.intp(head[i]) for i in range(split)})
        lhs = np.broadcast_to(_term_values(alg, e.lhs, env), (n,) * (k - split))
        rhs = np.broadcast_to(_term_values(alg, e.rhs, env), (n,) * (k - split))
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            pos = tuple(bad[0])
            witness = dict(zip(vs, head + tuple(int(p) for p in pos)))
            return Verdict(False, witness, (int(lhs[pos]), int(rhs[pos])))
    return Verdict(True)


def derived_algebra(alg: FiniteAlgebra, s) -> FiniteAlgebra:
    """Replace each fundamental operation ``f`` by the term operation ``s[f]``."""
    tables = {
        sym.name: np.array(evaluate_all(alg, s[sym.name], sym.arity))
        for sym in alg.signature
    }
    return FiniteAlgebra(alg.size, alg.signature, tables, alg.labels)


@dataclass(frozen=True, eq=False)
class Partition:
    """Block assignment, blocks numbered in order of their least element."""

    blocks: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=np.intp)
        _, first, inverse = np.unique(b, return_index=True, return_inverse=True)
        order = np.argsort(np.argsort(first))
        canon = order[inverse].astype(np.intp)
        canon.setflags(write=False)
        object.__setattr__(self, "blocks", canon)

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def num_blocks(self) -> int:
        return int(self.blocks.max()) + 1 if self.size else 0

    def block_lists(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for i, b in enumerate(self.blocks):
            out[b].append(i)
        return out

    def representatives(self) -> np.ndarray:
        return np.unique(self.blocks, return_index=True)[1]

    def same(self, a: int, b: int) -> bool:
        return self.blocks[a] == self.blocks[b]

    def refines(self, other: "Partition") -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        reps = self.representatives()
        return bool(np.all(other.blocks == other.blocks[reps][self.blocks]))

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.blocks, other.blocks)

    def __hash__(self):
        return hash(self.blocks.tobytes())

    def __repr__(self):
        return f"Partition({self.block_lists()})"


def _components(n: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    graph = coo_matrix((np.ones(len(a), dtype=np.int8), (a, b)), shape=(n, n))
    return connected_components(graph, directed=False)[1]


def congruence_generated(alg: FiniteAlgebra, pairs: Iterable[Sequence[int]]) -> Partition:
    """Least congruence containing ``pairs``.

    Each round links every element ``a`` with its block representative ``r``
    and then ``f(.., a, ..)`` with ``f(.., r, ..)`` in every argument slot of
    every operation; rounds repeat until the block count stops dropping.
    """
    n = alg.size
    pairs = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.intp)
    pairs = pairs.reshape(-1, 2)
    if len(pairs) and (pairs.min() < 0 or pairs.max() >= n):
        raise AlgebraError("pair outside the carrier")
    ident = np.arange(n, dtype=np.intp)
    part = Partition(_components(n, pairs[:, 0], pairs[:, 1]))
    while True:
        rep = part.representatives()[part.blocks]
        src, dst = [ident], [rep]
        for sym in alg.signature:
            table = alg[sym.name]
            for slot in range(sym.arity):
                src.append(table.ravel())
                dst.append(np.take(table, rep, axis=slot).ravel())
        merged = Partition(_components(n, np.concatenate(src), np.concatenate(dst)))
        if merged.num_blocks == part.num_blocks:
            break
        part = merged
    _check_compatible(alg, part)
    return part


def _check_compatible(alg: FiniteAlgebra, p: Partition) -> dict[str, np.ndarray]:
    """Block tables of ``alg / p``; raises if ``p`` is not a congruence."""
    if p.size != alg.size:
        raise AlgebraError(f"partition of {p.size} elements for algebra of size {alg.size}")
    reps = p.representatives()
    out = {}
    for sym in alg.signature:
        table = alg[sym.name]
        if sym.arity == 0:
            out[sym.name] = p.blocks[table]
            continue
        block_table = p.blocks[table[np.ix_(*[reps] * sym.arity)]]
        expected = block_table[np.ix_(*[p.blocks] * sym.arity)]
        bad = np.argwhere(p.blocks[table] != expected)
        if len(bad):
            args = tuple(int(i) for i in bad[0])
            rargs = tuple(int(reps[p.blocks[i]]) for i in args)
            raise AlgebraError(
                f"partition is not compatible with {sym.name!r}: "
                f"{sym.name}{args} and {sym.name}{rargs} have related arguments "
                "but land in different blocks"
            )
        out[sym.name] = block_table
    return out


def quotient(alg: FiniteAlgebra, p: Partition) -> FiniteAlgebra:
    tables = _check_compatible(alg, p)
    reps = p.representatives()
    labels = tuple(alg.labels[r] for r in reps) if alg.labels is not None else None
    gens = tuple(int(p.blocks[g]) for g in alg.generators) if alg.generators is not None else None
    return FiniteAlgebra(p.num_blocks, alg.signature, tables, labels, gens)


def trivial_algebra(sig: Signature) -> FiniteAlgebra:
    return FiniteAlgebra(1, sig, {s.name: np.zeros((1,) * s.arity, dtype=np.intp) for s in sig})


def _invariants(alg: FiniteAlgebra) -> list[tuple]:
    inv = [[] for _ in range(alg.size)]
    for sym in alg.signature:
        table = alg[sym.name]
        if sym.arity == 0:
            continue
        diag = table[(np.arange(alg.size),) * sym.arity]
        counts = np.bincount(table.ravel(), minlength=alg.size)
        for a in range(alg.size):
            inv[a].append((int(diag[a] == a), int(counts[a])))
    return [tuple(v) for v in inv]


def isomorphic(a: FiniteAlgebra, b: FiniteAlgebra, cap: int = ISOMORPHISM_CAP) -> Optional[list[int]]:
    """A bijection ``phi`` with ``phi(f_a(u..)) = f_b(phi(u)..)``, or ``None``."""
    if max(a.size, b.size) > cap:
        raise AlgebraError(f"isomorphism search capped at {cap} elements")
    if a.size != b.size or a.signature != b.signature:
        return None
    n = a.size
    inv_a, inv_b = _invariants(a), _invariants(b)
    if sorted(inv_a) != sorted(inv_b):
        return None
    ops = [(s.name, s.arity) for s in a.signature]
    phi = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        # every table entry whose arguments are assigned and that involves i
        for name, arity in ops:
            ta, tb = a[name], b[name]
            if arity == 0:
                r = int(ta[()])
                if phi[r] >= 0 and phi[r] != int(tb[()]):
                    return False
                continue
            for args in itertools.product(range(i + 1), repeat=arity):
                r = int(ta[args])
                img = int(tb[tuple(phi[u] for u in args)])
                if i in args:
                    if r <= i and phi[r] != img:
                        return False
                elif r == i and phi[r] != img:
                    return False
        return True

    def extend(i: int) -> bool:
        if i == n:
            return True
        for c in range(n):
            if used[c] or inv_b[c] != inv_a[i]:
                continue
            phi[i], used[c] = c, True
            if consistent(i) and extend(i + 1):
                return True
            phi[i], used[c] = -1, False
        return False

    if not extend(0):
        return None
    # entries with results assigned after their arguments were checked lazily
    for name, arity in ops:
        ta, tb = a[name], b[name]
        for args in itertools.product(range(n), repeat=arity):
            if phi[int(ta[args])] != int(tb[tuple(phi[u] for u in args)]):
                return None
    return phi


def _default_signature(ops: Mapping[str, Any]) -> Signature:
    names = set(ops)
    if names == {"mul"}:
        return BANDS
    if names == {"join", "meet"}:
        return LATTICES
    return Signature(tuple(OperationSymbol(k, np.ndim(v)) for k, v in ops.items()))


def algebra_from_json(data, sig: Optional[Signature] = None) -> FiniteAlgebra:
    """Load ``{"size": n, "ops": {"mul": [[...]]}}`` (text or parsed dict)."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        size, ops = int(data["size"]), data["ops"]
    except (KeyError, TypeError, ValueError) as exc:
        raise AlgebraError(f"malformed algebra JSON: {exc}") from None
    sig = sig or _default_signature(ops)
    labels = tuple(data["labels"]) if "labels" in data else None
    return FiniteAlgebra(size, sig, {k: np.asarray(v) for k, v in ops.items()}, labels)


def algebra_to_json(alg: FiniteAlgebra, labels: bool = False) -> str:
    data: dict[str, Any] = {
        "size": alg.size,
        "ops": {s.name: alg[s.name].tolist() for s in alg.signature},
    }
    if labels and alg.labels is not None:
        data["labels"] = [str(x) for x in alg.labels]
    return json.dumps(data)


def term_classes(models: Sequence[FiniteAlgebra], n: int, cap: int = 4096) -> list[Term]:
    """Representatives of the n-ary term operations of ``models``.

    These are the elements of the free algebra on ``n`` generators of the
    variety generated by ``models``. Terms are grown breadth-first, so the
    representative of each class is one of the smallest terms for it.
    """
    if not models:
        raise AlgebraError("need at least one model")
    sig = models[0].signature
    grids = [_grid(m.size, n) for m in models]

    def key(t: Term) -> bytes:
        return b"|".join(
            np.ascontiguousarray(np.broadcast_to(_term_values(m, t, g), (m.size,) * n)).tobytes()
            for m, g in zip(models, grids)
        )

    reps: list[Term] = []
    seen: set[bytes] = set()

    def offer(t: Term) -> bool:
        k = key(t)
        if k in seen:
            return False
        if len(reps) >= cap:
            raise AlgebraError(f"more than {cap} term classes on {n} generators")
        seen.add(k)
        reps.append(t)
        return True

    for i in range(n):
        offer(Var(i))
    for sym in sig:
        if sym.arity == 0:
            offer(App(sym.name, ()))
    frontier = 0
    while frontier < len(reps):
        current = len(reps)
        for sym in sig:
            if sym.arity == 0:
                continue
            for idx in itertools.product(range(current), repeat=sym.arity):
                # combinations of old classes were all tried last round
                if max(idx) < frontier:
                    continue
                offer(App(sym.name, tuple(reps[i] for i in idx)))
        frontier = current
    return reps
