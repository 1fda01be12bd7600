"""Propositional vocabulary, formula syntax and truth-table semantics.

Worlds are valuations of the vocabulary, indexed so that atom ``j`` is true in
world ``i`` iff bit ``j`` of ``i`` is set.  A set of worlds is a bitmask in
which bit ``i`` stands for world ``i``; with at most 6 atoms every set fits
in 64 bits.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

MAX_ATOMS = 6

RESERVED = frozenset({"T", "F", "true", "false"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FormulaSyntaxError(ValueError):
    """Malformed formula text.  Carries the offending position and what was expected there."""

    def __init__(self, text: str, position: int, expected: Sequence[str], found: str):
        self.text = text
        self.position = position
        self.expected = tuple(expected)
        self.found = found
        super().__init__(
            f"at position {position}: expected {' or '.join(self.expected)}, found {found!r}"
        )


class UnknownAtom(ValueError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        super().__init__(f"unknown atom {name!r}" + ("" if position is None else f" at position {position}"))


class VocabularyMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    atoms: tuple[str, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not 1 <= len(atoms) <= MAX_ATOMS:
            raise ValueError(f"vocabulary needs between 1 and {MAX_ATOMS} atoms, got {len(atoms)}")
        if len(set(atoms)) != len(atoms):
            raise ValueError(f"duplicate atoms in vocabulary {atoms}")
        for a in atoms:
            if not _IDENT.match(a):
                raise ValueError(f"bad atom name {a!r}")
            if a in RESERVED:
                raise ValueError(f"atom name {a!r} is reserved for a constant")

    @classmethod
    def parse(cls, text: str) -> "Vocabulary":
        """Build a vocabulary from a comma-separated list such as ``"p,q"``."""
        return cls(tuple(a.strip() for a in text.split(",")))

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def num_worlds(self) -> int:
        return 1 << self.n

    def index(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise UnknownAtom(name) from None


# -- formula AST -----------------------------------------------------------


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Atom:
    index: int


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Top, Bottom, Atom, Not, And, Or, Implies, Iff]


# -- world sets ------------------------------------------------------------


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@dataclass(frozen=True)
class WorldSet:
    """A set of worlds over an ``n``-atom vocabulary, stored as a bitmask."""

    mask: int
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ATOMS:
            raise ValueError(f"n must be in 1..{MAX_ATOMS}, got {self.n}")
        if self.mask < 0 or self.mask > full_mask(self.n):
            raise ValueError(f"mask {self.mask:#x} has bits outside the {1 << self.n}-world universe")

    @classmethod
    def full(cls, n: int) -> "WorldSet":
        return cls(full_mask(n), n)

    @classmethod
    def empty(cls, n: int) -> "WorldSet":
        return cls(0, n)

    def _same(self, other: "WorldSet") -> None:
        if self.n != other.n:
            raise VocabularyMismatch(f"world sets over {self.n} and {other.n} atoms")

    def __and__(self, other: "WorldSet") -> "WorldSet":
        self._same(other)
        return WorldSet(self.mask & other.mask, self.n)

    def __or__(self, other: "WorldSet") -> "WorldSet":
        self._same(other)
        return WorldSet(self.mask | other.mask, self.n)

    def __invert__(self) -> "WorldSet":
        return WorldSet(full_mask(self.n) ^ self.mask, self.n)

    def __contains__(self, world: int) -> bool:
        return bool(self.mask >> world & 1)

    def __iter__(self) -> Iterator[int]:
        return (w for w in range(1 << self.n) if self.mask >> w & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def entails(self, other: "WorldSet") -> bool:
        return entails(self, other)

    def equivalent(self, other: "WorldSet") -> bool:
        return equivalent(self, other)


def entails(a: WorldSet, b: WorldSet) -> bool:
    """``a |= b``: every world of ``a`` is a world of ``b``.  The empty set entails everything."""
    a._same(b)
    return a.mask & ~b.mask == 0


def equivalent(a: WorldSet, b: WorldSet) -> bool:
    a._same(b)
    return a.mask == b.mask


def atom_mask(j: int, n: int) -> int:
    """Mask of the worlds in which atom ``j`` is true."""
    return sum(1 << w for w in range(1 << n) if w >> j & 1)


def _denote(f: Formula, n: int, full: int) -> int:
    if isinstance(f, Atom):
        if not 0 <= f.index < n:
            raise UnknownAtom(f"#{f.index}")
        return atom_mask(f.index, n)
    if isinstance(f, Top):
        return full
    if isinstance(f, Bottom):
        return 0
    if isinstance(f, Not):
        return full ^ _denote(f.arg, n, full)
    a = _denote(f.left, n, full)
    b = _denote(f.right, n, full)
    if isinstance(f, And):
        return a & b
    if isinstance(f, Or):
        return a | b
    if isinstance(f, Implies):
        return (full ^ a) | b
    if isinstance(f, Iff):
        return full ^ (a ^ b)
    raise TypeError(f"not a formula: {f!r}")


def models(f: Formula, vocab: Vocabulary | int) -> WorldSet:
    n = vocab if isinstance(vocab, int) else vocab.n
    return WorldSet(_denote(f, n, full_mask(n)), n)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<iff><->|↔)
  | (?P<imp>->|→)
  | (?P<not>[~!¬])
  | (?P<and>[&∧])
  | (?P<or>[|∨])
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<top>⊤)
  | (?P<bot>⊥)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"T": "top", "true": "top", "F": "bot", "false": "bot"}
_DESCR = {
    "iff": "'<->'", "imp": "'->'", "not": "'~'", "and": "'&'", "or": "'|'",
    "lpar": "'('", "rpar": "')'", "atom": "atom", "top": "'T'", "bot": "'F'",
    "eof": "end of input",
}
_OPERAND_START = ("not", "lpar", "top", "bot", "atom")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(text, pos, [_DESCR[k] for k in _OPERAND_START], text[pos])
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "ident":
                kind = _KEYWORDS.get(value, "atom")
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    # iff < imp < or < and < not; iff and imp associate to the right
    def __init__(self, text: str, vocab: Vocabulary):
        self.text = text
        self.vocab = vocab
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected: Sequence[str]):
        kind, value, pos = self.tokens[self.i]
        raise FormulaSyntaxError(self.text, pos, [_DESCR[k] for k in expected], value or "end of input")

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() != "eof":
            self.fail(["iff", "imp", "or", "and", "eof"])
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek() == "iff":
            self.advance()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "imp":
            self.advance()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "or":
            self.advance()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "and":
            self.advance()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "not":
            self.advance()
            return Not(self.unary())
        if kind == "lpar":
            self.advance()
            f = self.iff()
            if self.peek() != "rpar":
                self.fail(["rpar", "iff", "imp", "or", "and"])
            self.advance()
            return f
        if kind == "top":
            self.advance()
            return Top()
        if kind == "bot":
            self.advance()
            return Bottom()
        if kind == "atom":
            _, name, pos = self.advance()
            if name not in self.vocab.atoms:
                raise UnknownAtom(name, pos)
            return Atom(self.vocab.atoms.index(name))
        self.fail(_OPERAND_START)


def parse_formula(text: str, vocab: Vocabulary) -> Formula:
    """Parse ``text`` against ``vocab``.

    Precedence from tightest: ``~``, ``&``, ``|``, ``->``, ``<->``.  Both
    arrows group to the right, so ``p -> q -> r`` is ``p -> (q -> r)``.
    Unicode connectives and the constants ``T``/``true``/``⊤`` and
    ``F``/``false``/``⊥`` are accepted.
    """
    if not text.strip():
        raise FormulaSyntaxError(text, 0, [_DESCR[k] for k in _OPERAND_START], "end of input")
    return _Parser(text, vocab).parse()


# -- printing --------------------------------------------------------------

_BINARY = {And: ("&", 3), Or: ("|", 2), Implies: ("->", 1), Iff: ("<->", 0)}
_RIGHT_ASSOC = (Implies, Iff)


def _prec(f: Formula) -> int:
    for cls, (_, p) in _BINARY.items():
        if isinstance(f, cls):
            return p
    return 4


def pretty_print(f: Formula, vocab: Vocabulary) -> str:
    """ASCII rendering with the fewest parentheses that re-parse to the same tree."""
    if isinstance(f, Atom):
        return vocab.atoms[f.index]
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bottom):
        return "F"
    if isinstance(f, Not):
        inner = pretty_print(f.arg, vocab)
        return "~" + (inner if _prec(f.arg) == 4 else f"({inner})")
    sym, p = _BINARY[type(f)]
    left, right = pretty_print(f.left, vocab), pretty_print(f.right, vocab)
    right_assoc = isinstance(f, _RIGHT_ASSOC)
    lp, rp = _prec(f.left), _prec(f.right)
    if lp < p or (right_assoc and lp == p):
        left = f"({left})"
    if rp < p or (not right_assoc and rp == p):
        right = f"({right})"
    return f"{left} {sym} {right}"


def formula_mask(text: str, vocab: Vocabulary) -> WorldSet:
    """Shorthand for ``models(parse_formula(text, vocab), vocab)``."""
    return models(parse_formula(text, vocab), vocab)
