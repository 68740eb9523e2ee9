"""The subvarieties of regular bands, derived varieties and dimension.

Every variety here is given by axioms on top of the band axioms (or, in
lattice mode, by generating lattices). Identities are decided in relatively
free algebras, containment is "every axiom of the bigger variety holds in
the smaller one", and ``V_s`` is found as the least registry variety ``W``
with ``V |= s(a)`` for every axiom ``a`` of ``W``.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from . import bands
from .algebra import FiniteAlgebra, Verdict, derived_algebra, satisfies, term_classes
from .hypersub import (
    BAND_SIGMA_WORDS,
    Hypersubstitution,
    band_sigma,
    derive_identity,
    enumerate_hypersubstitutions,
    equivalent,
)
from .lattices import (
    DISTRIBUTIVE,
    LATTICE_AXIOMS,
    free_lattice_classes,
    free_lattice_equal,
    model,
)
from .terms import (
    BANDS,
    LATTICES,
    Identity,
    Signature,
    Term,
    Var,
    parse_identity,
    print_term,
)

__all__ = [
    "VarietySpec",
    "RegistryError",
    "OutsideRegistry",
    "ASSOCIATIVITY",
    "IDEMPOTENCY",
    "REGISTRY",
    "B",
    "LATTICE_VARIETIES",
    "variety",
    "contains",
    "equal",
    "Hasse",
    "variety_lattice",
    "derived_variety",
    "derived_set",
    "SigmaClass",
    "DerivationReport",
    "dimension",
    "Classification",
    "classify",
    "solid_by_derived_identities",
    "HyperCheck",
    "hyperassociativity_check",
    "verify_registry",
    "dimension_table",
    "dimension_table_json",
    "to_dot",
    "show_identity",
]


class RegistryError(RuntimeError):
    pass


class OutsideRegistry(RegistryError):
    """``V_s`` is not a band variety: ``s`` breaks a band axiom in ``V``."""

    def __init__(self, source: "VarietySpec", sigma: Hypersubstitution, axiom: str, verdict: Verdict, identity: Identity):
        self.source, self.sigma, self.axiom, self.verdict, self.identity = source, sigma, axiom, verdict, identity
        super().__init__(
            f"{source.name} under {sigma} leaves the registry: derived {axiom} "
            f"{show_identity(identity)} {verdict.describe(bands.word_str)}"
        )


def show_identity(e: Identity, sig: Signature = BANDS) -> str:
    """Band identities print as flattened words (associativity holds)."""
    if sig == BANDS:
        return f"{bands.word_str(bands.flatten(e.lhs))} = {bands.word_str(bands.flatten(e.rhs))}"
    return f"{print_term(e.lhs, sig)} = {print_term(e.rhs, sig)}"


@dataclass(frozen=True, eq=False)
class VarietySpec:
    """A named variety with a decision backend.

    ``backend="band"``: ``Mod(band axioms + axioms)``, decided in relatively
    free bands. ``backend="lattice"``: ``HSP(generators)`` when generators
    are given (``axioms`` then documents the asserted axiomatization), or all
    lattices decided by Whitman's algorithm.
    """

    name: str
    axioms: tuple[Identity, ...]
    signature: Signature = BANDS
    backend: str = "band"
    generators: tuple[FiniteAlgebra, ...] = ()
    cap: int = bands.DEFAULT_GENERATOR_CAP

    def holds(self, e: Identity) -> Verdict:
        if self.backend == "band":
            return bands.holds(self.axioms, e, self.cap)
        if self.generators:
            for g in self.generators:
                v = satisfies(g, e)
                if not v:
                    return v
            return Verdict(True)
        return Verdict(free_lattice_equal(e.lhs, e.rhs))

    def free_algebra(self, n: int) -> FiniteAlgebra:
        if self.backend != "band":
            raise RegistryError("free algebras are built for band varieties only")
        return bands.free_algebra(self.axioms, n, self.cap)

    def free_terms(self, n: int) -> list[Term]:
        if self.backend == "band":
            return [bands.unflatten(w) for w in self.free_algebra(n).labels]
        if self.generators:
            return term_classes(self.generators, n)
        return free_lattice_classes(n)

    def definition(self) -> str:
        if not self.axioms:
            return "bands" if self.backend == "band" else "lattices"
        return ", ".join(show_identity(a, self.signature).replace(" = ", "≈") for a in self.axioms)

    def __repr__(self):
        return f"VarietySpec({self.name}: {self.definition()})"


def _band(name: str, *axioms: str) -> VarietySpec:
    return VarietySpec(name, tuple(parse_identity(a, BANDS) for a in axioms))


ASSOCIATIVITY = parse_identity("x(yz) = (xy)z", BANDS)
IDEMPOTENCY = parse_identity("xx = x", BANDS)

_REGISTRY_DEFS = [
    ("T", "x = y"),
    ("LZ", "yx = y"),
    ("RZ", "xy = y"),
    ("SL", "xy = yx"),
    ("RB", "y = yxy"),
    ("V1", "zxy = zyx"),
    ("V2", "yxz = xyz"),
    ("V3", "yx = yxy"),
    ("V4", "xy = yxy"),
    ("NB", "zxyz = zyxz"),
    ("V5", "zxy = zxzy"),
    ("V6", "yxz = yzxz"),
    ("RegB", "zxyz = zxzyz"),
]

REGISTRY: dict[str, VarietySpec] = {name: _band(name, ax) for name, ax in _REGISTRY_DEFS}
B = VarietySpec("B", ())

LATTICE_VARIETIES: dict[str, VarietySpec] = {
    "L": VarietySpec("L", (), LATTICES, "lattice"),
    "T_L": VarietySpec("T_L", (parse_identity("x = y", LATTICES),), LATTICES, "lattice", (model("chain1"),)),
    "D": VarietySpec("D", (DISTRIBUTIVE,), LATTICES, "lattice", (model("chain2"),)),
    "HSP(N5)": VarietySpec("HSP(N5)", (), LATTICES, "lattice", (model("N5"),)),
    "HSP(M3)": VarietySpec("HSP(M3)", (), LATTICES, "lattice", (model("M3"),)),
}


def variety(name: str) -> VarietySpec:
    if name in REGISTRY:
        return REGISTRY[name]
    if name == "B":
        return B
    if name in LATTICE_VARIETIES:
        return LATTICE_VARIETIES[name]
    known = list(REGISTRY) + ["B"] + list(LATTICE_VARIETIES)
    raise RegistryError(f"unknown variety {name!r}; known: {', '.join(known)}")


def _candidates() -> list[VarietySpec]:
    return list(REGISTRY.values()) + [B]


@lru_cache(maxsize=None)
def contains(v: VarietySpec, w: VarietySpec) -> bool:
    """``w ⊆ v``: every axiom of ``v`` holds in ``w``."""
    if v is w:
        return True
    return all(w.holds(a) for a in v.axioms)


def equal(v: VarietySpec, w: VarietySpec) -> bool:
    return contains(v, w) and contains(w, v)


@dataclass
class Hasse:
    """Containment order of a family of varieties."""

    nodes: list[str]
    below: dict[str, set[str]]  # below[a] = {b : b ⊆ a}
    covers: list[tuple[str, str]]  # (lower, upper)
    top: str
    bottom: str

    def leq(self, a: str, b: str) -> bool:
        return a in self.below[b]

    def lower_covers(self, a: str) -> list[str]:
        return [lo for lo, up in self.covers if up == a]

    def upper_covers(self, a: str) -> list[str]:
        return [up for lo, up in self.covers if lo == a]

    def atoms(self) -> list[str]:
        return self.upper_covers(self.bottom)

    def meet(self, a: str, b: str) -> Optional[str]:
        common = self.below[a] & self.below[b]
        top = [c for c in common if common <= self.below[c]]
        return top[0] if len(top) == 1 else None

    def join(self, a: str, b: str) -> Optional[str]:
        common = {c for c in self.nodes if self.leq(a, c) and self.leq(b, c)}
        low = [c for c in common if all(self.leq(c, d) for d in common)]
        return low[0] if len(low) == 1 else None

    def height(self, a: str) -> int:
        lower = self.lower_covers(a)
        return 0 if not lower else 1 + max(self.height(c) for c in lower)


def variety_lattice(specs: Optional[Sequence[VarietySpec]] = None) -> Hasse:
    """Hasse diagram of the registry, with a meet-closure check."""
    specs = list(specs or REGISTRY.values())
    names = [s.name for s in specs]
    below = {a.name: {b.name for b in specs if contains(a, b)} for a in specs}
    covers = []
    for a in names:
        for b in names:
            if a != b and a in below[b] and not any(
                c not in (a, b) and a in below[c] and c in below[b] for c in names
            ):
                covers.append((a, b))
    tops = [a for a in names if below[a] == set(names)]
    bottoms = [a for a in names if all(a in below[b] for b in names)]
    if len(tops) != 1 or len(bottoms) != 1:
        raise RegistryError(f"registry has no unique top/bottom: tops={tops}, bottoms={bottoms}")
    h = Hasse(names, below, covers, tops[0], bottoms[0])
    for a in names:
        for b in names:
            if h.meet(a, b) is None:
                raise RegistryError(f"registry is not meet-closed: {a} and {b} have no meet")
    return h


@lru_cache(maxsize=1)
def verify_registry() -> None:
    """Build-time guard on the registry: RegB is the top, and all six
    ``s(associativity)`` hold in it."""
    top = REGISTRY["RegB"]
    for w in REGISTRY.values():
        if not contains(top, w):
            raise RegistryError(f"{w.name} is not contained in RegB")
    for name in BAND_SIGMA_WORDS:
        e = derive_identity(band_sigma(name), ASSOCIATIVITY)
        v = top.holds(e)
        if not v:
            raise RegistryError(f"RegB is not hyperassociative at {name}: {v.describe(bands.word_str)}")


def _band_axiom_failure(v: VarietySpec, s: Hypersubstitution):
    for axiom_name, ax in (("associativity", ASSOCIATIVITY), ("idempotency", IDEMPOTENCY)):
        derived = derive_identity(s, ax)
        verdict = v.holds(derived)
        if not verdict:
            return axiom_name, verdict, derived
    return None


@lru_cache(maxsize=None)
def _derived_variety(v: VarietySpec, s: Hypersubstitution, validate: bool) -> VarietySpec:
    verify_registry()
    failure = _band_axiom_failure(v, s)
    if failure:
        raise OutsideRegistry(v, s, *failure)
    cands = [w for w in _candidates() if all(v.holds(derive_identity(s, a)) for a in w.axioms)]
    least = [c for c in cands if all(contains(d, c) for d in cands)]
    if len(least) != 1:
        raise RegistryError(
            f"{v.name} under {s}: no unique least candidate among {[c.name for c in cands]}"
        )
    result = least[0]
    if validate:
        # independent route: which axioms hold in the derived free algebra
        derived = derived_algebra(v.free_algebra(3), s)
        sat = {w.name for w in _candidates() if all(satisfies(derived, a) for a in w.axioms)}
        expected = {w.name for w in _candidates() if contains(w, result)}
        if sat != expected:
            raise RegistryError(
                f"cross-validation mismatch for {v.name} under {s}: "
                f"free algebra satisfies {sorted(sat)}, least candidate {result.name} implies {sorted(expected)}"
            )
    return result


def derived_variety(v: VarietySpec, s: Hypersubstitution, validate: bool = True) -> VarietySpec:
    """``V_s`` as a registry variety.

    Raises :class:`OutsideRegistry` when ``V_s`` is not a band variety.
    """
    if v.backend != "band":
        raise RegistryError("derived varieties are identified for band varieties only")
    return _derived_variety(v, s, validate)


def derived_set(v: VarietySpec) -> list[VarietySpec]:
    """``{V_s}`` over one ``s`` per ``~_V`` class, in registry order."""
    targets = {derived_variety(v, s).name for s in enumerate_hypersubstitutions(v, v.signature)}
    return [w for w in _candidates() if w.name in targets]


@dataclass
class SigmaClass:
    sigma: Hypersubstitution
    members: tuple[str, ...]
    target: Optional[VarietySpec]
    proper: Optional[bool]
    included: Optional[bool]
    witness: Optional[str] = None

    @property
    def label(self) -> str:
        return bands.word_str(bands.flatten(self.sigma["mul"]))

    def to_dict(self, variety: str) -> dict:
        return {
            "variety": variety,
            "sigma_class": self.label,
            "members": list(self.members),
            "target": self.target.name if self.target else None,
            "proper": self.proper,
            "included": self.included,
        }


@dataclass
class DerivationReport:
    variety: VarietySpec
    classes: list[SigmaClass] = field(default_factory=list)

    @property
    def derived(self) -> list[VarietySpec]:
        names = {c.target.name for c in self.classes if c.target}
        return [w for w in _candidates() if w.name in names]

    @property
    def proper_included(self) -> list[VarietySpec]:
        names = {c.target.name for c in self.classes if c.proper and c.included}
        return [w for w in _candidates() if w.name in names]

    @property
    def dimension(self) -> int:
        """Number of distinct proper derived varieties inside the variety;
        several classes may share a target, which counts once."""
        return len(self.proper_included)

    def rows(self) -> list[str]:
        out = [f"{len(self.classes)} hypersubstitution classes checked for {self.variety.name}"]
        for c in self.classes:
            members = ",".join(c.members) or "-"
            target = c.target.name if c.target else "outside registry"
            flags = []
            if c.proper is not None:
                flags.append("proper" if c.proper else "not proper")
            if c.included is not None:
                flags.append("included" if c.included else "not included")
            line = f"  mul:={c.label:<6} [{members}] -> {target:<5} {', '.join(flags)}"
            if c.witness:
                line += f"  ({c.witness})"
            out.append(line)
        return out

    def to_json(self) -> list[dict]:
        return [c.to_dict(self.variety.name) for c in self.classes]


def _members(v: VarietySpec, s: Hypersubstitution) -> tuple[str, ...]:
    return tuple(n for n in BAND_SIGMA_WORDS if equivalent(band_sigma(n), s, v))


def dimension(v: VarietySpec) -> DerivationReport:
    report = DerivationReport(v)
    for s in enumerate_hypersubstitutions(v, v.signature):
        members = _members(v, s)
        try:
            target = derived_variety(v, s)
        except OutsideRegistry as exc:
            report.classes.append(SigmaClass(s, members, None, True, False, str(exc)))
            continue
        proper = not equal(target, v)
        report.classes.append(SigmaClass(s, members, target, proper, contains(v, target)))
    return report


def solid_by_derived_identities(v: VarietySpec) -> tuple[bool, Optional[str]]:
    """Solidity without the registry: ``V_s ⊆ V`` iff ``V |= s(a)`` for all
    band axioms and defining axioms ``a`` of ``V``."""
    for s in enumerate_hypersubstitutions(v, v.signature):
        for ax in (ASSOCIATIVITY, IDEMPOTENCY) + v.axioms:
            e = derive_identity(s, ax)
            verdict = v.holds(e)
            if not verdict:
                return False, f"{s}: {show_identity(e)} {verdict.describe(bands.word_str)}"
    return True, None


@dataclass
class Classification:
    variety: str
    solid: bool
    fluid: Optional[bool]
    prefluid: Optional[bool]
    minimal: Optional[bool]
    trivial: bool
    dimension: Optional[int]
    witness: Optional[str] = None

    def flags(self) -> list[str]:
        out = []
        for name in ("solid", "fluid", "prefluid", "minimal"):
            value = getattr(self, name)
            if value is None:
                out.append(f"{name}=unknown")
            elif value:
                out.append(name)
            else:
                out.append(f"not {name}")
        return out


def classify(v: VarietySpec) -> Classification:
    """Solid / fluid / prefluid / minimal flags.

    ``minimal`` is relative to the registry. For a variety outside RegB only
    solidity is decided, from derived identities.
    """
    solid, witness = solid_by_derived_identities(v)
    trivial = bool(v.holds(Identity(Var(0), Var(1))))
    if v.name not in REGISTRY:
        return Classification(v.name, solid, None, None, None, trivial, None, witness)
    report = dimension(v)
    if solid != all(contains(v, w) for w in report.derived):
        raise RegistryError(f"solidity routes disagree for {v.name}")
    proper_subs = [w.name for w in REGISTRY.values() if contains(v, w) and not equal(v, w)]
    k = report.dimension
    return Classification(
        v.name,
        solid,
        fluid=k == 0,
        prefluid=k == 1,
        minimal=not trivial and proper_subs == ["T"],
        trivial=trivial,
        dimension=k,
        witness=witness,
    )


@dataclass
class HyperCheck:
    variety: str
    failures: list[tuple[str, Identity, Verdict]]

    @property
    def holds(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.holds


def hyperassociativity_check(v: VarietySpec) -> HyperCheck:
    """Associativity as a hyperidentity, over ``s1..s6`` (complete for bands)."""
    failures = []
    for name in BAND_SIGMA_WORDS:
        e = derive_identity(band_sigma(name), ASSOCIATIVITY)
        verdict = v.holds(e)
        if not verdict:
            failures.append((name, e, verdict))
    return HyperCheck(v.name, failures)


def _table_order() -> list[VarietySpec]:
    h = variety_lattice()
    return sorted(REGISTRY.values(), key=lambda w: (h.height(w.name), w.name))


def dimension_table(threads: int = 1) -> list[dict]:
    """One row per registry variety, ordered by lattice height then name."""
    specs = _table_order()

    def row(w: VarietySpec) -> dict:
        c = classify(w)
        rep = dimension(w)
        return {
            "variety": w.name,
            "definition": w.definition(),
            "dimension": rep.dimension,
            "derived": [d.name for d in rep.derived],
            "proper_included": [d.name for d in rep.proper_included],
            "solid": c.solid,
            "fluid": c.fluid,
            "prefluid": c.prefluid,
            "minimal": c.minimal,
        }

    verify_registry()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(row, specs))
    return [row(w) for w in specs]


def dimension_table_json(threads: int = 1) -> str:
    return json.dumps(dimension_table(threads), indent=2, ensure_ascii=False)


def to_dot(specs: Optional[Iterable[VarietySpec]] = None) -> str:
    """Graphviz digraph: solid Hasse edges, dashed arrows ``V -> V_s``."""
    specs = list(specs or REGISTRY.values())
    h = variety_lattice(specs)
    lines = ["digraph varieties {", "  rankdir=BT;", '  node [shape=box, fontname="Helvetica"];']
    for w in specs:
        lines.append(f'  "{w.name}" [label="{w.name}: {w.definition()}"];')
    for lo, up in sorted(h.covers):
        lines.append(f'  "{lo}" -> "{up}" [dir=none];')
    for w in specs:
        by_target: dict[str, list[str]] = {}
        for c in dimension(w).classes:
            if c.target is not None and c.proper:
                by_target.setdefault(c.target.name, []).extend(c.members)
        for target, members in by_target.items():
            label = ",".join(sorted(set(members)))
            lines.append(
                f'  "{w.name}" -> "{target}" [style=dashed, label="{label}", constraint=false];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
