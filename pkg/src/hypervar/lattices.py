"""Lattices in type (2,2): Whitman's free-lattice order, duality, finite
lattice models and fluidity certificates for finitely generated varieties."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    Verdict,
    derived_algebra,
    isomorphic,
    satisfies,
)
from .hypersub import Hypersubstitution, apply, lattice_swap
from .terms import LATTICES, App, Identity, Term, Var, parse_identity, print_term, term_size

__all__ = [
    "LatticeError",
    "join",
    "meet",
    "free_lattice_leq",
    "free_lattice_equal",
    "binary_lattice_terms",
    "enumerate_binary_lattice_terms",
    "free_lattice_classes",
    "dualize",
    "LATTICE_AXIOMS",
    "DISTRIBUTIVE",
    "MODULAR",
    "lattice_from_order",
    "chain",
    "M3",
    "N5",
    "MODELS",
    "model",
    "dual",
    "order_of",
    "axiom_report",
    "AxiomCheck",
    "is_lattice",
    "SigmaVerdict",
    "FluidityReport",
    "fluidity_certificate",
]

MAX_ENUMERATION_DEPTH = 4


class LatticeError(ValueError):
    pass


def join(a: Term, b: Term) -> Term:
    return App("join", (a, b))


def meet(a: Term, b: Term) -> Term:
    return App("meet", (a, b))


def _is(t: Term, op: str) -> bool:
    return isinstance(t, App) and t.op == op


@lru_cache(maxsize=1 << 18)
def free_lattice_leq(p: Term, q: Term) -> bool:
    """``p <= q`` in the free lattice (Whitman)."""
    if _is(p, "join"):
        return free_lattice_leq(p.args[0], q) and free_lattice_leq(p.args[1], q)
    if _is(q, "meet"):
        return free_lattice_leq(p, q.args[0]) and free_lattice_leq(p, q.args[1])
    if isinstance(p, Var) and isinstance(q, Var):
        return p == q
    if isinstance(p, Var):
        return free_lattice_leq(p, q.args[0]) or free_lattice_leq(p, q.args[1])
    if isinstance(q, Var):
        return free_lattice_leq(p.args[0], q) or free_lattice_leq(p.args[1], q)
    # meet below join: Whitman's condition
    return (
        free_lattice_leq(p.args[0], q)
        or free_lattice_leq(p.args[1], q)
        or free_lattice_leq(p, q.args[0])
        or free_lattice_leq(p, q.args[1])
    )


def free_lattice_equal(p: Term, q: Term) -> bool:
    return free_lattice_leq(p, q) and free_lattice_leq(q, p)


def binary_lattice_terms(depth: int) -> list[Term]:
    """All terms in ``x, y`` of depth at most ``depth``."""
    terms: list[Term] = [Var(0), Var(1)]
    for _ in range(depth):
        old = terms
        terms = old + [App(op, (a, b)) for op in ("join", "meet") for a in old for b in old]
        # a term of depth d has at least one argument of depth d-1
        terms = list(dict.fromkeys(terms))
    return terms


def _shortlex(t: Term):
    return (term_size(t), print_term(t, LATTICES))


def enumerate_binary_lattice_terms(max_depth: int) -> list[list[Term]]:
    """Classes of binary terms up to ``max_depth`` under free-lattice equality.

    Each class lists its members with the smallest term first.
    """
    if not 0 <= max_depth <= MAX_ENUMERATION_DEPTH:
        raise LatticeError(f"depth must be in 0..{MAX_ENUMERATION_DEPTH}")
    classes: list[list[Term]] = []
    for t in binary_lattice_terms(max_depth):
        for cls in classes:
            if free_lattice_equal(cls[0], t):
                cls.append(t)
                break
        else:
            classes.append([t])
    for cls in classes:
        cls.sort(key=_shortlex)
    classes.sort(key=lambda c: _shortlex(c[0]))
    return classes


def free_lattice_classes(n: int, cap: int = 64) -> list[Term]:
    """Elements of the free lattice on ``n`` generators, when finite (``n <= 2``)."""
    reps: list[Term] = [Var(i) for i in range(n)]
    frontier = 0
    while frontier < len(reps):
        current = len(reps)
        for i, j in itertools.product(range(current), repeat=2):
            if max(i, j) < frontier:
                continue
            for op in ("join", "meet"):
                t = App(op, (reps[i], reps[j]))
                if not any(free_lattice_equal(t, r) for r in reps):
                    if len(reps) >= cap:
                        raise LatticeError(f"free lattice on {n} generators has more than {cap} elements")
                    reps.append(t)
        frontier = current
    return sorted(reps, key=_shortlex)


_SWAP = {"join": "meet", "meet": "join"}


def dualize(obj: Union[Term, Identity, Sequence]):
    """Swap join and meet throughout a term, identity or sequence of them."""
    if isinstance(obj, Var):
        return obj
    if isinstance(obj, App):
        return App(_SWAP.get(obj.op, obj.op), tuple(dualize(a) for a in obj.args))
    if isinstance(obj, Identity):
        return Identity(dualize(obj.lhs), dualize(obj.rhs))
    return type(obj)(dualize(x) for x in obj)


def _axiom(text: str) -> Identity:
    return parse_identity(text, LATTICES)


LATTICE_AXIOMS: tuple[tuple[str, Identity], ...] = (
    ("join commutativity", _axiom("x v y = y v x")),
    ("meet commutativity", _axiom("x ^ y = y ^ x")),
    ("join associativity", _axiom("x v (y v z) = (x v y) v z")),
    ("meet associativity", _axiom("x ^ (y ^ z) = (x ^ y) ^ z")),
    ("join absorption", _axiom("x v (x ^ y) = x")),
    ("meet absorption", _axiom("x ^ (x v y) = x")),
)
DISTRIBUTIVE = _axiom("x ^ (y v z) = (x ^ y) v (x ^ z)")
MODULAR = _axiom("(x ^ y) v (x ^ z) = x ^ (y v (x ^ z))")


def lattice_from_order(leq: Sequence[Sequence[bool]], labels: Optional[Sequence] = None) -> FiniteAlgebra:
    """Build join/meet tables from a partial order matrix ``leq[a][b] = a <= b``."""
    le = np.asarray(leq, dtype=bool)
    n = len(le)
    if not (le.diagonal().all() and not (le & le.T & ~np.eye(n, dtype=bool)).any()):
        raise LatticeError("not a partial order (reflexivity or antisymmetry fails)")
    if not np.array_equal(le, (le.astype(int) @ le.astype(int)) > 0):
        raise LatticeError("not a partial order (transitivity fails)")
    j = np.empty((n, n), dtype=np.intp)
    m = np.empty((n, n), dtype=np.intp)
    for a, b in itertools.product(range(n), repeat=2):
        upper = [c for c in range(n) if le[a, c] and le[b, c]]
        lower = [c for c in range(n) if le[c, a] and le[c, b]]
        lub = [c for c in upper if all(le[c, d] for d in upper)]
        glb = [c for c in lower if all(le[d, c] for d in lower)]
        if not lub or not glb:
            raise LatticeError(f"elements {a} and {b} have no join or no meet")
        j[a, b], m[a, b] = lub[0], glb[0]
    return FiniteAlgebra(n, LATTICES, {"join": j, "meet": m}, tuple(labels) if labels else None)


def _from_covers(n: int, covers: Iterable[tuple[int, int]]) -> FiniteAlgebra:
    le = np.eye(n, dtype=bool)
    for a, b in covers:
        le[a, b] = True
    for k in range(n):
        le |= le[:, [k]] & le[[k], :]
    return lattice_from_order(le)


def chain(n: int) -> FiniteAlgebra:
    return _from_covers(n, [(i, i + 1) for i in range(n - 1)])


def M3() -> FiniteAlgebra:
    return _from_covers(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


def N5() -> FiniteAlgebra:
    # 0 < 1 < 2 < 4 and 0 < 3 < 4
    return _from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])


MODELS = {
    "chain1": lambda: chain(1),
    "chain2": lambda: chain(2),
    "chain3": lambda: chain(3),
    "chain4": lambda: chain(4),
    "M3": M3,
    "N5": N5,
}


def model(name: str) -> FiniteAlgebra:
    try:
        return MODELS[name]()
    except KeyError:
        raise LatticeError(f"unknown lattice model {name!r}; builtin: {', '.join(MODELS)}") from None


def dual(alg: FiniteAlgebra) -> FiniteAlgebra:
    return derived_algebra(alg, lattice_swap())


def order_of(alg: FiniteAlgebra) -> np.ndarray:
    """``a <= b`` iff ``a v b = b``."""
    j = alg["join"]
    return j == np.arange(alg.size)[None, :]


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    identity: Identity
    verdict: Verdict

    @property
    def passed(self) -> bool:
        return self.verdict.holds


def axiom_report(alg: FiniteAlgebra, axioms=LATTICE_AXIOMS) -> list[AxiomCheck]:
    return [AxiomCheck(name, e, satisfies(alg, e)) for name, e in axioms]


def is_lattice(alg: FiniteAlgebra) -> bool:
    return all(c.passed for c in axiom_report(alg))


def _named(axioms) -> list[tuple[str, Identity]]:
    out = []
    for a in axioms:
        if isinstance(a, Identity):
            out.append((print_term(a.lhs, LATTICES) + " = " + print_term(a.rhs, LATTICES), a))
        else:
            out.append(tuple(a))
    return out


@dataclass
class SigmaVerdict:
    sigma: Hypersubstitution
    kind: str  # "identity", "self-dual", "dual", "excluded", "undetermined"
    proper: Optional[bool]
    included: Optional[bool]
    witness: Optional[str] = None

    def row(self) -> str:
        extra = f"  [{self.witness}]" if self.witness else ""
        return f"{self.sigma.literal():28s} {self.kind}{extra}"


@dataclass
class FluidityReport:
    generators: list[FiniteAlgebra]
    verdicts: list[SigmaVerdict] = field(default_factory=list)
    trivial: bool = False

    @property
    def dimension(self) -> int:
        """Proper derived varieties established to lie inside the variety."""
        return sum(1 for v in self.verdicts if v.proper and v.included)

    @property
    def undetermined(self) -> list[SigmaVerdict]:
        return [v for v in self.verdicts if v.kind in ("dual", "undetermined")]

    @property
    def fluid(self) -> bool:
        return self.dimension == 0 and not self.undetermined


def fluidity_certificate(
    generators: Sequence[FiniteAlgebra],
    axioms=LATTICE_AXIOMS,
    cap: int = 64,
) -> FluidityReport:
    """Classify every derived variety ``V_s`` of ``V = HSP(generators)``.

    The caller asserts that ``axioms`` (named or bare identities) axiomatize
    ``V``. Hypersubstitutions are taken up to ``~_V`` over the four binary
    lattice terms ``x, y, x v y, x ^ y``. Each ``s`` is identified as trivial
    modulo ``V``, dual (``V_s = V^d``, inside ``V`` when the generators are
    closed under taking duals up to isomorphism), or excluded by an axiom of
    ``V`` failing in a derived generator.
    """
    generators = list(generators)
    if not generators:
        raise LatticeError("need at least one generating lattice")
    axioms = _named(axioms)
    for g in generators:
        if g.size > cap:
            raise LatticeError(f"model of size {g.size} exceeds cap {cap}")
        for name, e in axioms:
            if not satisfies(g, e):
                raise LatticeError(f"inconsistent certificate: a generator fails {name}")

    def in_v(e: Identity) -> bool:
        return all(satisfies(g, e) for g in generators)

    x, y = Var(0), Var(1)
    basis = [x, y, join(x, y), meet(x, y)]
    report = FluidityReport(generators, trivial=in_v(Identity(x, y)))
    duals = [dual(g) for g in generators]
    self_dual = all(any(isomorphic(d, g) is not None for g in generators) for d in duals)
    for tj, tm in itertools.product(basis, repeat=2):
        s = Hypersubstitution.of(LATTICES, {"join": tj, "meet": tm})
        if in_v(Identity(tj, join(x, y))) and in_v(Identity(tm, meet(x, y))):
            report.verdicts.append(SigmaVerdict(s, "identity", False, True))
            continue
        if in_v(Identity(tj, meet(x, y))) and in_v(Identity(tm, join(x, y))):
            if self_dual:
                report.verdicts.append(SigmaVerdict(s, "self-dual", False, True, "V^d = V"))
            else:
                report.verdicts.append(
                    SigmaVerdict(s, "dual", None, None, "dual variety; inclusion not established")
                )
            continue
        witness = None
        for g in generators:
            derived = derived_algebra(g, s)
            for name, e in axioms:
                v = satisfies(derived, e)
                if not v:
                    witness = f"{name} {v.describe()}"
                    break
            if witness:
                break
        if witness:
            report.verdicts.append(SigmaVerdict(s, "excluded", True, False, witness))
        else:
            report.verdicts.append(SigmaVerdict(s, "undetermined", None, True, "derived generators satisfy every axiom"))
    return report
