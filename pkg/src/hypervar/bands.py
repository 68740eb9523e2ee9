"""Equational theory of bands (idempotent semigroups).

Words are tuples of variable indices. Equality in the free band is decided by
the Green–Rees recursion: two words are equal iff they have the same content,
the same letter completing the content from the left and from the right, and
recursively equal prefix before / suffix after those letters. The canonical
form below is the word ``canon(prefix) a b canon(suffix)`` built from those
invariants.

Relatively free bands ``F_V(n)`` are quotients of the free band ``FB(n)`` by
the congruence generated by every substitution instance of ``V``'s axioms.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    Verdict,
    congruence_generated,
    evaluate,
    evaluate_all,
    quotient,
    satisfies,
)
from .terms import (
    BANDS,
    App,
    Identity,
    Term,
    Var,
    var_name,
    variables,
)

__all__ = [
    "Word",
    "BandError",
    "DEFAULT_GENERATOR_CAP",
    "word",
    "word_str",
    "flatten",
    "unflatten",
    "band_canonical",
    "band_equal",
    "free_band",
    "free_algebra",
    "holds",
    "FAST_PATHS",
    "fast_normalize",
    "format_key",
    "content",
    "first_occurrences",
    "last_occurrences",
]

Word = tuple[int, ...]

DEFAULT_GENERATOR_CAP = 3


class BandError(ValueError):
    pass


def word(text: str) -> Word:
    """``"zxy"`` -> ``(2, 0, 1)``; accepts only single-letter variables."""
    try:
        return tuple("xyzw".index(c) for c in text)
    except ValueError:
        raise BandError(f"not a word over x,y,z,w: {text!r}") from None


def word_str(w: Sequence[int]) -> str:
    return "".join(var_name(i) for i in w)


def flatten(t: Term) -> Word:
    """In-order leaf sequence of a term over the band signature."""
    out = []
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.append(u.index)
        elif u.op == "mul" and len(u.args) == 2:
            stack.extend(reversed(u.args))
        else:
            raise BandError(f"not a band term: symbol {u.op!r}")
    return tuple(out)


def unflatten(w: Sequence[int]) -> Term:
    """Right-associated product ``w0·(w1·(...))``."""
    if not w:
        raise BandError("empty word")
    t: Term = Var(w[-1])
    for i in reversed(w[:-1]):
        t = App("mul", (Var(i), t))
    return t


def content(w: Sequence[int]) -> frozenset:
    return frozenset(w)


def first_occurrences(w: Sequence[int]) -> Word:
    return tuple(dict.fromkeys(w))


def last_occurrences(w: Sequence[int]) -> Word:
    return tuple(reversed(dict.fromkeys(reversed(w))))


@lru_cache(maxsize=None)
def _canonical(w: Word) -> Word:
    k = len(set(w))
    if k == 1:
        return w[:1]
    seen = set()
    for i, a in enumerate(w):
        seen.add(a)
        if len(seen) == k:
            break
    seen.clear()
    for j in range(len(w) - 1, -1, -1):
        seen.add(w[j])
        if len(seen) == k:
            break
    return _canonical(w[:i]) + (w[i], w[j]) + _canonical(w[j + 1:])


def band_canonical(w: Sequence[int]) -> Word:
    if not w:
        raise BandError("empty word")
    return _canonical(tuple(w))


def band_equal(u: Sequence[int], v: Sequence[int]) -> bool:
    return band_canonical(u) == band_canonical(v)


def _shortlex(words: Iterable[Word]) -> list[Word]:
    return sorted(words, key=lambda w: (len(w), w))


@lru_cache(maxsize=8)
def _free_band(n: int) -> FiniteAlgebra:
    # breadth-first in shortlex order, so each element is first met through
    # its shortlex-least word (prefixes of shortlex-least words are themselves
    # shortlex-least)
    index: dict[Word, int] = {}
    words: list[Word] = []
    queue = deque()
    for a in range(n):
        index[(a,)] = len(words)
        words.append((a,))
        queue.append((a,))
    while queue:
        w = queue.popleft()
        for a in range(n):
            key = _canonical(w + (a,))
            if key not in index:
                index[key] = len(words)
                words.append(w + (a,))
                queue.append(w + (a,))
    keys = [_canonical(w) for w in words]
    size = len(words)
    table = np.empty((size, size), dtype=np.intp)
    for i, u in enumerate(keys):
        for j, v in enumerate(keys):
            table[i, j] = index[_canonical(u + v)]
    return FiniteAlgebra(size, BANDS, {"mul": table}, tuple(words), tuple(range(n)))


def free_band(n: int, cap: int = DEFAULT_GENERATOR_CAP) -> FiniteAlgebra:
    """``FB(n)``; elements are labelled by their shortlex-least words."""
    if n < 1:
        raise BandError("need at least one generator")
    if n > cap:
        raise BandError(f"free band on {n} generators exceeds the generator cap {cap}")
    return _free_band(n)


def _axiom_arity(e: Identity) -> int:
    vs = variables(e.lhs, e.rhs)
    return max(vs) + 1 if vs else 0


def _instance_pairs(fb: FiniteAlgebra, e: Identity) -> np.ndarray:
    k = _axiom_arity(e)
    lhs = evaluate_all(fb, e.lhs, k).ravel()
    rhs = evaluate_all(fb, e.rhs, k).ravel()
    diff = lhs != rhs
    pairs = np.stack([lhs[diff], rhs[diff]], axis=1)
    return np.unique(pairs, axis=0) if len(pairs) else pairs.reshape(0, 2)


@lru_cache(maxsize=None)
def _free_algebra(axioms: tuple[Identity, ...], n: int) -> FiniteAlgebra:
    fb = _free_band(n)
    if not axioms:
        return fb
    pairs = np.concatenate([_instance_pairs(fb, e) for e in axioms])
    return quotient(fb, congruence_generated(fb, pairs))


def free_algebra(axioms: Iterable[Identity], n: int, cap: int = DEFAULT_GENERATOR_CAP) -> FiniteAlgebra:
    """Relatively free band ``F_V(n)`` for ``V = Mod(band axioms + axioms)``.

    Elements are labelled by the shortlex-least word of their class and
    sorted by that label; ``generators`` holds the images of ``x, y, ...``.
    Axioms may use more variables than ``n``: their instances over ``FB(n)``
    still generate the fully invariant congruence.
    """
    axioms = tuple(axioms)
    for e in axioms:
        for side in e:
            flatten(side)
    free_band(n, cap)
    return _free_algebra(axioms, n)


def holds(
    axioms: Iterable[Identity],
    e: Identity,
    cap: int = DEFAULT_GENERATOR_CAP,
    exhaustive: bool = False,
) -> Verdict:
    """Decide whether ``e`` holds in ``Mod(band axioms + axioms)``.

    With ``k`` distinct variables in ``e`` the identity is evaluated in
    ``F_V(k)`` at the free generators, which decides it by freeness; on
    failure that generator assignment is the witness (as words).
    ``exhaustive=True`` sweeps every environment of ``F_V(k)`` instead.
    """
    vs = sorted(variables(e.lhs, e.rhs))
    k = max(len(vs), 1)
    if k > cap:
        raise BandError(f"identity has {k} variables, above the variable cap {cap}")
    for side in e:
        flatten(side)
    fa = free_algebra(axioms, k, cap)
    rename = {v: i for i, v in enumerate(vs)}
    if exhaustive:
        result = satisfies(fa, e)
        if result:
            return result
        return Verdict(
            False,
            {v: fa.label(x) for v, x in result.witness.items()},
            tuple(fa.label(x) for x in result.values),
        )
    env = {v: fa.generators[rename[v]] for v in vs}
    lhs, rhs = evaluate(fa, e.lhs, env), evaluate(fa, e.rhs, env)
    if lhs == rhs:
        return Verdict(True)
    return Verdict(False, {v: (v,) for v in vs}, (fa.label(lhs), fa.label(rhs)))


def _seq(w) -> str:
    return word_str(w)


def _set(s) -> str:
    return "{" + ",".join(var_name(i) for i in sorted(s)) + "}"


FAST_PATHS = {
    "LZ": lambda w: (w[0],),
    "RZ": lambda w: (w[-1],),
    "RB": lambda w: (w[0], w[-1]),
    "SL": lambda w: (content(w),),
    "V1": lambda w: (w[0], content(w)),
    "V2": lambda w: (content(w), w[-1]),
    "V3": lambda w: (first_occurrences(w),),
    "V4": lambda w: (last_occurrences(w),),
    "NB": lambda w: (w[0], content(w), w[-1]),
    "RegB": lambda w: (first_occurrences(w), last_occurrences(w)),
}


def fast_normalize(variety: str, w: Sequence[int]) -> tuple:
    """Canonical key of ``w`` in a band variety with a closed-form word problem.

    Two words have equal keys iff they are equal in the variety.
    """
    try:
        key = FAST_PATHS[variety]
    except KeyError:
        raise BandError(
            f"no fast normal form for {variety!r}; known: {', '.join(FAST_PATHS)}"
        ) from None
    if not w:
        raise BandError("empty word")
    return key(tuple(w))


def format_key(variety: str, key: tuple) -> str:
    """Stable text, e.g. ``NB:(z,{x,y,z},z)``."""
    parts = []
    for part in key:
        if isinstance(part, frozenset):
            parts.append(_set(part))
        elif isinstance(part, tuple):
            parts.append(_seq(part))
        else:
            parts.append(var_name(part))
    body = parts[0] if len(parts) == 1 else "(" + ",".join(parts) + ")"
    return f"{variety}:{body}"
