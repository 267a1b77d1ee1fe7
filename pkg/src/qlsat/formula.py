"""Propositional formulas over atoms p0, p1, ... with ~, & and |.

Concrete grammar (whitespace between tokens is ignored)::

    formula := or
    or      := and { "|" and }
    and     := unary { "&" unary }
    unary   := "~" unary | "(" formula ")" | atom
    atom    := "p" digits

``&`` binds tighter than ``|``; both are left-associative.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

MAX_ATOM_INDEX = 2**31 - 1


@dataclass(frozen=True, slots=True)
class Atom:
    index: int

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Neg:
    child: Formula

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class And:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Or:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return to_text(self)


Formula = Union[Atom, Neg, And, Or]
Binary = (And, Or)


class Step(enum.Enum):
    LEFT = "L"
    RIGHT = "R"
    CHILD = "C"


NodePath = tuple[Step, ...]


def path_to_text(path: Sequence[Step]) -> str:
    """Render a path as ``/L/R/C``; the root is ``/``."""
    return "/" + "/".join(s.value for s in path)


def path_from_text(text: str) -> NodePath:
    parts = [p for p in text.strip().split("/") if p]
    try:
        return tuple(Step(p) for p in parts)
    except ValueError:
        raise ValueError(f"bad node path {text!r}; steps must be L, R or C") from None


class ParseError(ValueError):
    """Syntax error at a byte offset of the input."""

    def __init__(self, offset: int, expected: Sequence[str], found: str, message: str | None = None):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        self.found = found
        if message is None:
            message = f"at offset {offset}: expected one of {', '.join(self.expected)}; found {found}"
        super().__init__(message)


class InvalidPathError(LookupError):
    def __init__(self, path: Sequence[Step], position: int):
        self.path = tuple(path)
        self.position = position
        step = self.path[position]
        super().__init__(
            f"invalid path {path_to_text(self.path)}: step {position} ({step.value}) has no target"
        )


# --- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(p)(\d+)|([~&|()]))")


def _tokenize(text: str) -> list[tuple[str, int, int]]:
    """Return (kind, value, byte offset) triples, ending with an ``EOF`` token."""
    tokens: list[tuple[str, int, int]] = []
    raw = text.encode("utf-8")
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if not rest.strip():
                tokens.append(("EOF", 0, len(raw)))
                return tokens
            skip = len(rest) - len(rest.lstrip())
            at = len(text[: pos + skip].encode("utf-8"))
            bad = text[pos + skip]
            raise ParseError(at, ["atom", "~", "(", "&", "|", ")", "end of input"], repr(bad),
                             f"at offset {at}: unexpected character {bad!r}")
        start = m.start(1) if m.group(1) else m.start(3)
        offset = len(text[:start].encode("utf-8"))
        if m.group(1):
            index = int(m.group(2))
            if index > MAX_ATOM_INDEX:
                raise ParseError(offset, ["atom index <= 2147483647"], f"p{m.group(2)}",
                                 f"at offset {offset}: atom index {index} exceeds {MAX_ATOM_INDEX}")
            tokens.append(("ATOM", index, offset))
        else:
            tokens.append((m.group(3), 0, offset))
        pos = m.end()


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, int, int]:
        return self.tokens[self.pos]

    def fail(self, expected: Sequence[str]) -> ParseError:
        kind, value, offset = self.peek()
        found = "end of input" if kind == "EOF" else (f"p{value}" if kind == "ATOM" else repr(kind))
        return ParseError(offset, expected, found)

    def parse(self) -> Formula:
        phi = self.parse_or()
        if self.peek()[0] != "EOF":
            raise self.fail(["&", "|", "end of input"])
        return phi

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.peek()[0] == "|":
            self.pos += 1
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_unary()
        while self.peek()[0] == "&":
            self.pos += 1
            left = And(left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        kind, value, _ = self.peek()
        if kind == "~":
            self.pos += 1
            return Neg(self.parse_unary())
        if kind == "(":
            self.pos += 1
            inner = self.parse_or()
            if self.peek()[0] != ")":
                raise self.fail([")", "&", "|"])
            self.pos += 1
            return inner
        if kind == "ATOM":
            self.pos += 1
            return Atom(value)
        raise self.fail(["atom", "~", "("])


def parse(text: str) -> Formula:
    """Parse formula text. Raises ParseError with the byte offset of the problem."""
    return _Parser(text).parse()


# --- printing --------------------------------------------------------------


def to_text(phi: Formula) -> str:
    """Canonical text. Binary operands that are themselves binary get parentheses.

    >>> to_text(parse("p0 & (p1 | p2) & ~(p0 & p1 | p0 & p2)"))
    '(p0 & (p1 | p2)) & ~((p0 & p1) | (p0 & p2))'
    """
    if isinstance(phi, Atom):
        return f"p{phi.index}"
    if isinstance(phi, Neg):
        inner = to_text(phi.child)
        return f"~({inner})" if isinstance(phi.child, Binary) else f"~{inner}"
    op = " & " if isinstance(phi, And) else " | "
    return _operand(phi.left) + op + _operand(phi.right)


def _operand(phi: Formula) -> str:
    text = to_text(phi)
    return f"({text})" if isinstance(phi, Binary) else text


# --- structure -------------------------------------------------------------


def atoms(phi: Formula) -> tuple[int, ...]:
    """Sorted distinct atom indices occurring in ``phi``."""
    found: set[int] = set()
    stack = [phi]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node.index)
        elif isinstance(node, Neg):
            stack.append(node.child)
        else:
            stack.append(node.left)
            stack.append(node.right)
    return tuple(sorted(found))


def connectives(phi: Formula) -> int:
    if isinstance(phi, Atom):
        return 0
    if isinstance(phi, Neg):
        return 1 + connectives(phi.child)
    return 1 + connectives(phi.left) + connectives(phi.right)


def children(phi: Formula) -> list[tuple[Step, Formula]]:
    if isinstance(phi, Atom):
        return []
    if isinstance(phi, Neg):
        return [(Step.CHILD, phi.child)]
    return [(Step.LEFT, phi.left), (Step.RIGHT, phi.right)]


def subformula_at(phi: Formula, path: Sequence[Step]) -> Formula:
    node = phi
    for i, step in enumerate(path):
        for s, child in children(node):
            if s is step:
                node = child
                break
        else:
            raise InvalidPathError(path, i)
    return node


def postorder(phi: Formula, prefix: NodePath = ()) -> Iterator[tuple[NodePath, Formula]]:
    """Yield ``(path, subformula)`` pairs, children before parents, left before right."""
    for step, child in children(phi):
        yield from postorder(child, prefix + (step,))
    yield prefix, phi


# --- enumeration -----------------------------------------------------------


def enumerate_formulas(max_atoms: int, max_connectives: int, *, commutative: bool = False) -> Iterator[Formula]:
    """Every formula over p0..p(max_atoms-1) with at most ``max_connectives`` connectives.

    Formulas come out by connective count, then negations before conjunctions
    before disjunctions, then by operand sizes and operand order. With
    ``commutative=True`` only trees whose binary nodes have
    ``to_text(left) <= to_text(right)`` are produced, one per class modulo
    swapping operands of & and |.
    """
    if max_atoms < 1 or max_connectives < 0:
        raise ValueError("need max_atoms >= 1 and max_connectives >= 0")
    by_size: list[list[Formula]] = []
    texts: list[list[str]] = []
    for n in range(max_connectives + 1):
        level: list[Formula] = []
        if n == 0:
            level = [Atom(i) for i in range(max_atoms)]
        else:
            level.extend(Neg(c) for c in by_size[n - 1])
            for ctor in (And, Or):
                for i in range(n):
                    j = n - 1 - i
                    for a, left in enumerate(by_size[i]):
                        for b, right in enumerate(by_size[j]):
                            if commutative and texts[i][a] > texts[j][b]:
                                continue
                            level.append(ctor(left, right))
        yield from level
        if n < max_connectives:
            by_size.append(level)
            if commutative:
                texts.append([to_text(f) for f in level])


def count_formulas(max_atoms: int, max_connectives: int, *, commutative: bool = False) -> int:
    """Size of ``enumerate_formulas(max_atoms, max_connectives, commutative=...)`` without building it."""
    if max_atoms < 1 or max_connectives < 0:
        raise ValueError("need max_atoms >= 1 and max_connectives >= 0")
    sizes = [max_atoms]
    for n in range(1, max_connectives + 1):
        pairs = 0
        for i in range(n):
            j = n - 1 - i
            if not commutative:
                pairs += sizes[i] * sizes[j]
            elif i < j:
                pairs += sizes[i] * sizes[j]
            elif i == j:
                pairs += sizes[i] * (sizes[i] + 1) // 2
        sizes.append(sizes[n - 1] + 2 * pairs)
    return sum(sizes)
