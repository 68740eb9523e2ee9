"""Signatures, terms, identities and the concrete term syntax.

Terms are immutable trees of :class:`Var` and :class:`App` nodes. Variables
are 0-based indices printed as ``x, y, z, w, x4, x5, ...``.

Concrete grammar::

    identity := term ('=' | '≈') term
    term     := infix chain (per-signature operators, lowest precedence first)
    juxt     := atom {atom}        # only for a signature with one binary symbol
    atom     := var | symbol '(' term {',' term} ')' | '(' term ')'

Juxtaposed atoms and same-operator infix chains associate to the right, so
``zxy`` is ``z·(x·y)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

__all__ = [
    "OperationSymbol",
    "Signature",
    "Var",
    "App",
    "Term",
    "Identity",
    "TermSyntaxError",
    "BANDS",
    "LATTICES",
    "var_name",
    "parse_term",
    "parse_identity",
    "print_term",
    "print_identity",
    "substitute",
    "variables",
    "variable_analysis",
    "classify_identity",
    "IdentityKind",
    "rename",
    "term_size",
    "term_depth",
]


@dataclass(frozen=True)
class OperationSymbol:
    name: str
    arity: int

    def __post_init__(self):
        if not self.name:
            raise ValueError("operation symbol needs a name")
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name!r}")


@dataclass(frozen=True)
class Signature:
    """An ordered tuple of operation symbols (the type).

    ``infix`` lists ``(symbol name, tokens)`` pairs from lowest to highest
    precedence; the first token of each pair is used for printing.
    """

    symbols: tuple[OperationSymbol, ...]
    infix: tuple[tuple[str, tuple[str, ...]], ...] = ()
    _by_name: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = [s.name for s in self.symbols]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        object.__setattr__(self, "_by_name", {s.name: s for s in self.symbols})
        for name, _ in self.infix:
            if self._by_name.get(name) is None or self._by_name[name].arity != 2:
                raise ValueError(f"infix operator {name!r} must be a binary symbol")

    def __getitem__(self, name: str) -> OperationSymbol:
        return self._by_name[name]

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self) -> Iterator[OperationSymbol]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    @property
    def juxtaposition(self) -> Optional[str]:
        """Name of the unique binary symbol, if there is exactly one."""
        binary = [s.name for s in self.symbols if s.arity == 2]
        return binary[0] if len(binary) == 1 else None

    @property
    def max_arity(self) -> int:
        return max((s.arity for s in self.symbols), default=0)


BANDS = Signature((OperationSymbol("mul", 2),), infix=(("mul", ("*", "·")),))
LATTICES = Signature(
    (OperationSymbol("join", 2), OperationSymbol("meet", 2)),
    infix=(("join", ("v", "∨")), ("meet", ("^", "∧"))),
)


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return var_name(self.index)


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        inner = ",".join(str(a) for a in self.args)
        return f"{self.op}({inner})"


Term = Union[Var, App]


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def __iter__(self):
        return iter((self.lhs, self.rhs))


_LETTERS = "xyzw"


def var_name(i: int) -> str:
    return _LETTERS[i] if i < len(_LETTERS) else f"x{i}"


class TermSyntaxError(ValueError):
    """Raised for malformed term text; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_VAR = re.compile(r"x[0-9]+|[xyzw]")


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.pos = 0
        self.levels = [
            (name, tuple(sorted(tokens, key=len, reverse=True)))
            for name, tokens in sig.infix
        ]

    def error(self, message, pos=None):
        raise TermSyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        self.skip_ws()
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def infix_token(self, level: int) -> Optional[str]:
        self.skip_ws()
        for tok in self.levels[level][1]:
            if self.text.startswith(tok, self.pos):
                return tok
        return None

    def parse_level(self, level: int) -> Term:
        if level == len(self.levels):
            return self.parse_juxt()
        left = self.parse_level(level + 1)
        tok = self.infix_token(level)
        if tok is None:
            return left
        self.pos += len(tok)
        right = self.parse_level(level)
        return App(self.levels[level][0], (left, right))

    def parse_juxt(self) -> Term:
        self.skip_ws()
        atoms = [self.parse_atom()]
        op = self.sig.juxtaposition
        if op is not None:
            # juxtaposition needs adjacency; whitespace ends the word
            while self.pos < len(self.text) and self.starts_atom():
                atoms.append(self.parse_atom())
        term = atoms[-1]
        for a in reversed(atoms[:-1]):
            term = App(op, (a, term))
        return term

    def starts_atom(self) -> bool:
        ch = self.peek()
        if ch == "(":
            return True
        if not (ch.isalpha() or ch == "_"):
            return False
        # a letter that is an infix token is not an atom
        return not any(self.text.startswith(t, self.pos) for _, ts in self.levels for t in ts)

    def parse_atom(self) -> Term:
        self.skip_ws()
        start = self.pos
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            t = self.parse_level(0)
            self.expect(")")
            return t
        m = _IDENT.match(self.text, self.pos)
        if m is None:
            self.error("expected a variable, symbol or '('" if ch else "unexpected end of input")
        ident = m.group()
        if ident in self.sig:
            self.pos = m.end()
            return self.parse_application(self.sig[ident], start)
        v = _VAR.match(self.text, self.pos)
        if v is None:
            after = self.text[m.end():].lstrip()[:1]
            kind = "symbol" if after == "(" else "symbol or variable"
            self.error(f"unknown {kind} {ident!r}")
        self.pos = v.end()
        tok = v.group()
        return Var(_LETTERS.index(tok) if len(tok) == 1 else int(tok[1:]))

    def parse_application(self, sym: OperationSymbol, start: int) -> Term:
        self.skip_ws()
        if self.peek() != "(":
            if sym.arity == 0:
                return App(sym.name, ())
            self.error(f"symbol {sym.name!r} needs {sym.arity} arguments", start)
        self.pos += 1
        args = []
        self.skip_ws()
        if self.peek() == ")":
            self.pos += 1
        else:
            while True:
                args.append(self.parse_level(0))
                self.skip_ws()
                if self.peek() == ",":
                    self.pos += 1
                    continue
                self.expect(")")
                break
        if len(args) != sym.arity:
            self.error(f"arity mismatch: {sym.name!r} takes {sym.arity} arguments, got {len(args)}", start)
        return App(sym.name, tuple(args))


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(text, sig)
    t = p.parse_level(0)
    if not p.at_end():
        p.error(f"unexpected {p.peek()!r}")
    return t


def parse_identity(text: str, sig: Signature) -> Identity:
    p = _Parser(text, sig)
    lhs = p.parse_level(0)
    p.skip_ws()
    if p.peek() not in ("=", "≈"):
        p.error("expected '='" if p.peek() else "identity needs '='")
    p.pos += 1
    rhs = p.parse_level(0)
    if not p.at_end():
        p.error(f"unexpected {p.peek()!r}")
    return Identity(lhs, rhs)


def print_term(t: Term, sig: Signature) -> str:
    """Inverse of :func:`parse_term` up to whitespace."""
    infix = {name: tokens[0] for name, tokens in sig.infix}
    juxt = sig.juxtaposition

    def atom(u: Term) -> str:
        return go(u) if isinstance(u, Var) or not u.args else f"({go(u)})"

    def go(u: Term) -> str:
        if isinstance(u, Var):
            return var_name(u.index)
        if not u.args:
            return f"{u.op}()"
        if u.op == juxt:
            left, right = u.args
            tail = go(right) if isinstance(right, Var) or right.op == juxt else atom(right)
            return atom(left) + tail
        if u.op in infix:
            left, right = u.args
            return f"{atom(left)} {infix[u.op]} {atom(right)}"
        return f"{u.op}({','.join(go(a) for a in u.args)})"

    return go(t)


def print_identity(e: Identity, sig: Signature) -> str:
    return f"{print_term(e.lhs, sig)} = {print_term(e.rhs, sig)}"


def substitute(t: Term, assignment: Mapping[int, Term]) -> Term:
    """Simultaneous substitution; unassigned variables stay put."""
    if isinstance(t, Var):
        return assignment.get(t.index, t)
    return App(t.op, tuple(substitute(a, assignment) for a in t.args))


def rename(t: Term, mapping: Mapping[int, int]) -> Term:
    return substitute(t, {i: Var(j) for i, j in mapping.items()})


def _leaves(t: Term) -> Iterator[int]:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            yield u.index
        else:
            stack.extend(reversed(u.args))


def variables(*terms: Term) -> list[int]:
    """Variable indices in order of first occurrence."""
    seen: dict[int, None] = {}
    for t in terms:
        for i in _leaves(t):
            seen.setdefault(i)
    return list(seen)


def variable_analysis(t: Term) -> tuple[list[int], Optional[int], Optional[int]]:
    """``(variables in first-occurrence order, first leaf, last leaf)``.

    First and last are ``None`` for a variable-free term.
    """
    order = variables(t)
    if not order:
        return order, None, None
    last = t
    while not isinstance(last, Var):
        last = next((a for a in reversed(last.args) if variables(a)), None)
    return order, order[0], last.index


@dataclass(frozen=True)
class IdentityKind:
    leftmost: bool
    rightmost: bool

    @property
    def outermost(self) -> bool:
        return self.leftmost and self.rightmost


def classify_identity(e: Identity) -> IdentityKind:
    _, lf, ll = variable_analysis(e.lhs)
    _, rf, rl = variable_analysis(e.rhs)
    return IdentityKind(lf is not None and lf == rf, ll is not None and ll == rl)


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def term_depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(term_depth(a) for a in t.args)
