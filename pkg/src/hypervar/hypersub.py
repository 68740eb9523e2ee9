"""Hypersubstitutions and derived identities."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .terms import (
    BANDS,
    LATTICES,
    App,
    Identity,
    Signature,
    Term,
    TermSyntaxError,
    Var,
    parse_term,
    print_term,
    substitute,
    variables,
)

__all__ = [
    "Hypersubstitution",
    "HypersubstitutionError",
    "apply",
    "derive_identity",
    "equivalent",
    "enumerate_hypersubstitutions",
    "band_sigma",
    "BAND_SIGMA_WORDS",
    "parse_hypersubstitution",
    "lattice_swap",
]


class HypersubstitutionError(ValueError):
    pass


@dataclass(frozen=True)
class Hypersubstitution:
    """Assignment of a same-arity term to every operation symbol.

    Stored as ``(name, term)`` pairs in signature order so instances hash;
    ``name`` is a display label and does not take part in equality.
    """

    signature: Signature
    terms: tuple[tuple[str, Term], ...]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        defined = dict(self.terms)
        for sym in self.signature:
            if sym.name not in defined:
                raise HypersubstitutionError(f"no term given for {sym.name!r}")
            bad = [v for v in variables(defined[sym.name]) if v >= sym.arity]
            if bad:
                raise HypersubstitutionError(
                    f"term for {sym.name!r} uses variable index {bad[0]} but the arity is {sym.arity}"
                )
        extra = set(defined) - {s.name for s in self.signature}
        if extra:
            raise HypersubstitutionError(f"unknown symbols {sorted(extra)}")
        ordered = tuple((s.name, defined[s.name]) for s in self.signature)
        object.__setattr__(self, "terms", ordered)

    @classmethod
    def of(cls, sig: Signature, mapping: Mapping[str, Term], name: Optional[str] = None):
        return cls(sig, tuple(mapping.items()), name)

    @classmethod
    def identity(cls, sig: Signature) -> "Hypersubstitution":
        return cls.of(
            sig, {s.name: App(s.name, tuple(Var(i) for i in range(s.arity))) for s in sig}, "id"
        )

    def __getitem__(self, op: str) -> Term:
        for name, t in self.terms:
            if name == op:
                return t
        raise KeyError(op)

    def __call__(self, t: Term) -> Term:
        return apply(self, t)

    def compose(self, inner: "Hypersubstitution") -> "Hypersubstitution":
        """``self ∘ inner`` as maps on terms."""
        return Hypersubstitution.of(
            self.signature, {op: apply(self, t) for op, t in inner.terms}
        )

    def literal(self) -> str:
        return ",".join(f"{op}:={print_term(t, self.signature)}" for op, t in self.terms)

    def __str__(self):
        return self.name or self.literal()


def apply(s: Hypersubstitution, t: Term) -> Term:
    """Extend ``s`` to all terms: variables are fixed, and
    ``f(p0, .., pn)`` becomes ``s[f]`` with ``p_i`` transformed and put in for
    variable ``i``."""
    if isinstance(t, Var):
        return t
    args = {i: apply(s, a) for i, a in enumerate(t.args)}
    return substitute(s[t.op], args)


def derive_identity(s: Hypersubstitution, e: Identity) -> Identity:
    return Identity(apply(s, e.lhs), apply(s, e.rhs))


def equivalent(s1: Hypersubstitution, s2: Hypersubstitution, variety) -> bool:
    """``s1 ~_V s2``: each pair of assigned terms is an identity of ``variety``.

    ``variety`` is anything with a ``holds(identity)`` method, normally a
    :class:`~hypervar.registry.VarietySpec`.
    """
    return all(variety.holds(Identity(s1[op], s2[op])) for op, _ in s1.terms)


def enumerate_hypersubstitutions(variety, sig: Signature) -> list[Hypersubstitution]:
    """One representative per ``~_V`` class.

    For each symbol the candidate terms are the elements of the relatively
    free algebra of ``variety`` on ``arity`` generators, as returned by
    ``variety.free_terms(arity)`` in shortest-then-lexicographic order.
    """
    choices = [variety.free_terms(s.arity) for s in sig]
    out = []
    for combo in itertools.product(*choices):
        out.append(Hypersubstitution.of(sig, {s.name: t for s, t in zip(sig, combo)}))
    return out


def _word_term(word: str) -> Term:
    return parse_term(word, BANDS)


BAND_SIGMA_WORDS = {
    "s1": "x",
    "s2": "y",
    "s3": "xy",
    "s4": "yx",
    "s5": "xyx",
    "s6": "yxy",
}


def band_sigma(name: str) -> Hypersubstitution:
    """The six band hypersubstitutions ``s1..s6`` (x, y, xy, yx, xyx, yxy)."""
    try:
        word = BAND_SIGMA_WORDS[name]
    except KeyError:
        raise HypersubstitutionError(f"unknown builtin hypersubstitution {name!r}") from None
    return Hypersubstitution.of(BANDS, {"mul": _word_term(word)}, name)


def lattice_swap() -> Hypersubstitution:
    x, y = Var(0), Var(1)
    return Hypersubstitution.of(
        LATTICES, {"join": App("meet", (x, y)), "meet": App("join", (x, y))}, "swap"
    )


_ASSIGN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:=")


def parse_hypersubstitution(text: str, sig: Optional[Signature] = None) -> Hypersubstitution:
    """Parse ``s5``, ``swap``, ``id`` or ``op:=term,op:=term``.

    Without ``sig`` the signature is inferred from the symbol names.
    """
    text = text.strip()
    if text in BAND_SIGMA_WORDS and sig in (None, BANDS):
        return band_sigma(text)
    if text == "swap" and sig in (None, LATTICES):
        return lattice_swap()
    if text == "id" and sig is not None:
        return Hypersubstitution.identity(sig)
    starts = [m for m in _ASSIGN.finditer(text) if m.start() == 0 or text[m.start() - 1] == ","]
    if not starts or starts[0].start() != 0:
        raise HypersubstitutionError(f"cannot parse hypersubstitution {text!r}")
    names = [m.group(1) for m in starts]
    if sig is None:
        if set(names) <= {"mul"}:
            sig = BANDS
        elif set(names) <= {"join", "meet"}:
            sig = LATTICES
        else:
            raise HypersubstitutionError(f"no known signature has symbols {names}")
    mapping = {}
    for m, nxt in zip(starts, starts[1:] + [None]):
        body = text[m.end(): nxt.start() - 1 if nxt else len(text)]
        try:
            mapping[m.group(1)] = parse_term(body, sig)
        except TermSyntaxError as exc:
            raise HypersubstitutionError(f"in {m.group(1)}: {exc}") from None
    if len(mapping) != len(names):
        raise HypersubstitutionError("symbol assigned twice")
    # symbols left out keep their fundamental operation
    for s in sig:
        mapping.setdefault(s.name, App(s.name, tuple(Var(i) for i in range(s.arity))))
    return Hypersubstitution.of(sig, mapping)
