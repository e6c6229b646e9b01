"""Syntactic group words w(x̄, ȳ): parsing, evaluation, and the
change-of-variables rewrite with its block decomposition.

A word is a flat sequence of syllables (variable, ±1). Variables live in two
tuples 'x' and 'y' with 1-based positions and may carry a factor annotation
('x2@1' is the second x-variable attached to factor 1). Annotations are
all-or-none per word: the annotated form is the separated shape produced by
the change of variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    AnnotationMismatch,
    ArityMismatch,
    ContextMismatch,
    LengthExceedsRadius,
    UnannotatedSyllable,
    WordParseError,
)
from .freeproduct import FreeProduct, ReducedWord
from .groups import FactorElement, FactorGroup


@dataclass(frozen=True)
class VariableSymbol:
    """A variable in the x- or y-tuple, optionally annotated with a factor."""

    tuple_name: str  # "x" | "y"
    position: int  # 1-based
    annotation: int | None = None

    def render(self) -> str:
        base = f"{self.tuple_name}{self.position}"
        if self.annotation is not None:
            base += f"@{self.annotation}"
        return base


@dataclass(frozen=True)
class Syllable:
    symbol: VariableSymbol
    exponent: int  # +1 | -1

    def render(self) -> str:
        return self.symbol.render() + ("^-1" if self.exponent < 0 else "")

    def inverse(self) -> "Syllable":
        return Syllable(self.symbol, -self.exponent)


@dataclass(frozen=True)
class GroupWord:
    """A formal product of variables and their inverses."""

    syllables: tuple[Syllable, ...]
    arity_x: int
    arity_y: int

    @classmethod
    def from_syllables(cls, syllables: Sequence[Syllable]) -> "GroupWord":
        syllables = tuple(syllables)
        ax = ay = 0
        annotated = None
        for s in syllables:
            sym = s.symbol
            if sym.tuple_name not in ("x", "y") or sym.position < 1:
                raise WordParseError(f"bad variable {sym.render()!r}")
            if s.exponent not in (1, -1):
                raise WordParseError(f"bad exponent {s.exponent} on {sym.render()!r}")
            has = sym.annotation is not None
            if annotated is None:
                annotated = has
            elif annotated != has:
                raise AnnotationMismatch(
                    "word mixes annotated and unannotated syllables"
                )
            if sym.tuple_name == "x":
                ax = max(ax, sym.position)
            else:
                ay = max(ay, sym.position)
        return cls(syllables, ax, ay)

    @property
    def annotated(self) -> bool:
        return bool(self.syllables) and self.syllables[0].symbol.annotation is not None

    def __len__(self) -> int:
        return len(self.syllables)

    def render(self) -> str:
        return " ".join(s.render() for s in self.syllables)

    def formal_inverse(self) -> "GroupWord":
        return GroupWord.from_syllables(
            tuple(s.inverse() for s in reversed(self.syllables))
        )

    def slice(self, start: int, stop: int) -> "GroupWord":
        return GroupWord.from_syllables(self.syllables[start:stop])


def concat_words(u: GroupWord, v: GroupWord) -> GroupWord:
    """Formal concatenation; no group-level simplification."""
    return GroupWord.from_syllables(u.syllables + v.syllables)


# -- DSL parsing -------------------------------------------------------------
#
# word := item { item } | "" ;  item := atom [ "^-1" ] ;
# atom := var | "(" word ")" ;  var := ("x"|"y") digits [ "@" digits ]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> WordParseError:
        return WordParseError(message, position=self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def read_digits(self, what: str) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error(f"expected digits for {what}")
        return int(self.text[start : self.pos])

    def parse_var(self) -> VariableSymbol:
        tuple_name = self.peek()
        self.pos += 1
        var_pos = self.pos
        position = self.read_digits("variable position")
        if position < 1:
            raise WordParseError("variable positions are 1-based", position=var_pos)
        annotation = None
        if self.peek() == "@":
            self.pos += 1
            annotation = self.read_digits("factor annotation")
        return VariableSymbol(tuple_name, position, annotation)

    def parse_inverse_marker(self) -> bool:
        if self.peek() == "^":
            mark = self.pos
            if self.text[self.pos : self.pos + 3] == "^-1":
                self.pos += 3
                return True
            self.pos = mark
            raise self.error("expected '^-1'")
        return False

    def parse_item(self) -> list[Syllable]:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_word(stop_at_paren=True)
            if self.peek() != ")":
                raise self.error("unbalanced parenthesis")
            self.pos += 1
            syllables = list(inner)
        elif ch in ("x", "y"):
            syllables = [Syllable(self.parse_var(), 1)]
        else:
            raise self.error(f"unexpected character {ch!r}")
        if self.parse_inverse_marker():
            syllables = [s.inverse() for s in reversed(syllables)]
        return syllables

    def parse_word(self, stop_at_paren: bool = False) -> list[Syllable]:
        out: list[Syllable] = []
        while True:
            self.skip_ws()
            ch = self.peek()
            if not ch or (stop_at_paren and ch == ")"):
                return out
            out.extend(self.parse_item())


def parse_word(text: str) -> GroupWord:
    """Parse the word DSL into a GroupWord; raises WordParseError with position."""
    parser = _Parser(text)
    syllables = parser.parse_word()
    try:
        return GroupWord.from_syllables(syllables)
    except AnnotationMismatch as exc:
        raise WordParseError(str(exc)) from exc


def render_word(w: GroupWord) -> str:
    return w.render()


# -- evaluation ---------------------------------------------------------------


def _lookup(sym: VariableSymbol, a_values: Sequence, b_values: Sequence):
    values = a_values if sym.tuple_name == "x" else b_values
    return values[sym.position - 1]


def evaluate(
    context: FreeProduct,
    w: GroupWord,
    a_values: Sequence[ReducedWord],
    b_values: Sequence[ReducedWord],
) -> ReducedWord:
    """Value of w under the assignment, in normal form. Annotations are ignored."""
    if len(a_values) != w.arity_x or len(b_values) != w.arity_y:
        raise ArityMismatch(
            f"assignment arities ({len(a_values)},{len(b_values)}) do not match "
            f"word arities ({w.arity_x},{w.arity_y})"
        )
    # fold all letters through one reduction stack instead of building an
    # intermediate word per syllable
    stack: list = []
    push = context._push
    factors = context.factors
    for s in w.syllables:
        sym = s.symbol
        value = (a_values if sym.tuple_name == "x" else b_values)[sym.position - 1]
        if value.context is not context:
            raise ContextMismatch("assignment value from a different context")
        if s.exponent < 0:
            for letter in reversed(value.letters):
                push(stack, letter.factor, factors[letter.factor].inv(letter.elem))
        else:
            for letter in value.letters:
                push(stack, letter.factor, letter.elem)
    return ReducedWord(tuple(stack), context)


def evaluate_in_group(
    group: FactorGroup,
    w: GroupWord,
    a_elems: Sequence[int],
    b_elems: Sequence[int],
) -> int:
    """Value of w inside one finite group, as an element index."""
    if len(a_elems) != w.arity_x or len(b_elems) != w.arity_y:
        raise ArityMismatch(
            f"assignment arities ({len(a_elems)},{len(b_elems)}) do not match "
            f"word arities ({w.arity_x},{w.arity_y})"
        )
    result = group.identity
    for s in w.syllables:
        e = _lookup(s.symbol, a_elems, b_elems)
        if s.exponent < 0:
            e = group.inv(e)
        result = group.mul(result, e)
    return result


def evaluate_in_factor(
    group: FactorGroup,
    block: GroupWord,
    a_elems: Sequence[int],
    b_elems: Sequence[int],
) -> FactorElement:
    """Value of an annotated single-factor block inside its factor group."""
    if not block.syllables:
        raise AnnotationMismatch("empty block has no factor")
    for s in block.syllables:
        if s.symbol.annotation != group.id:
            raise AnnotationMismatch(
                f"syllable {s.render()!r} is not annotated with factor {group.id}"
            )
    return FactorElement(group.id, evaluate_in_group(group, block, a_elems, b_elems))


# -- change of variables -------------------------------------------------------


def template_length(r: int, k: int) -> int:
    """Number of fresh variables one original variable expands into."""
    return r + 1 if k == 2 else k * r


def template_factor(slot: int, k: int) -> int:
    """Factor annotation of the slot-th (0-based) fresh variable."""
    return slot % k


def change_of_variables(w: GroupWord, r: int, k: int) -> GroupWord:
    """Formally replace each variable by its fresh-variable template.

    For two factors the template is r+1 variables alternating between the
    factors starting with factor 0; for k > 2 it is the cyclic factor pattern
    repeated r times. Inverses take the visual inverse of the template;
    concatenation only, never group simplification.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if k < 2:
        raise ValueError("need at least 2 factors")
    if w.annotated:
        raise AnnotationMismatch("change of variables expects an unannotated word")
    t = template_length(r, k)
    out: list[Syllable] = []
    for s in w.syllables:
        base = (s.symbol.position - 1) * t
        expansion = [
            Syllable(
                VariableSymbol(s.symbol.tuple_name, base + slot + 1, template_factor(slot, k)),
                1,
            )
            for slot in range(t)
        ]
        if s.exponent < 0:
            expansion = [e.inverse() for e in reversed(expansion)]
        out.extend(expansion)
    return GroupWord.from_syllables(out)


# -- block decomposition ---------------------------------------------------


@dataclass(frozen=True)
class Block:
    """A maximal run of equally annotated syllables: [start, stop)."""

    factor: int
    start: int
    stop: int


@dataclass(frozen=True)
class BlockDecomposition:
    word: GroupWord
    blocks: tuple[Block, ...]
    ell: int

    def block_word(self, i: int) -> GroupWord:
        b = self.blocks[i]
        return self.word.slice(b.start, b.stop)


def block_decompose(w: GroupWord) -> BlockDecomposition:
    """Split an annotated word into maximal same-factor runs."""
    for s in w.syllables:
        if s.symbol.annotation is None:
            raise UnannotatedSyllable(f"syllable {s.render()!r} has no annotation")
    blocks: list[Block] = []
    start = 0
    for i in range(1, len(w.syllables) + 1):
        if (
            i == len(w.syllables)
            or w.syllables[i].symbol.annotation != w.syllables[start].symbol.annotation
        ):
            blocks.append(Block(w.syllables[start].symbol.annotation, start, i))
            start = i
    return BlockDecomposition(w, tuple(blocks), len(blocks))


# -- interpretation of ball elements in the template -------------------------


def interpret_in_template(z: ReducedWord, r: int, k: int) -> tuple[FactorElement, ...]:
    """Greedy left-to-right placement of z's letters into the template slots.

    Unused slots are identity-padded. Deterministic; always succeeds for
    length(z) <= r because each letter consumes at most one factor cycle.
    """
    context = z.context
    if k != context.k:
        raise ValueError(f"template is for {k} factors, context has {context.k}")
    if len(z) > r:
        raise LengthExceedsRadius(f"word of length {len(z)} exceeds radius {r}")
    t = template_length(r, k)
    slots = [
        FactorElement(template_factor(s, k), context.factors[template_factor(s, k)].identity)
        for s in range(t)
    ]
    cursor = 0
    for letter in z.letters:
        while cursor < t and template_factor(cursor, k) != letter.factor:
            cursor += 1
        if cursor == t:
            raise LengthExceedsRadius(
                f"could not place {letter.render()} into the template"
            )
        slots[cursor] = FactorElement(letter.factor, letter.elem)
        cursor += 1
    return tuple(slots)


def expand_assignment(
    values: Sequence[ReducedWord], r: int, k: int
) -> tuple[ReducedWord, ...]:
    """Flatten ball elements into fresh-variable values for the rewritten word."""
    out: list[ReducedWord] = []
    for z in values:
        out.extend(z.context.embed(fe) for fe in interpret_in_template(z, r, k))
    return tuple(out)


# -- canonical shapes ---------------------------------------------------------


def word_shape(w: GroupWord) -> str:
    """Canonical rendering: annotations stripped, positions renumbered by
    first occurrence within each tuple. Used for stub keys and memo keys."""
    return canonicalize_word(w).render()


def canonicalize_word(w: GroupWord) -> GroupWord:
    maps: dict[str, dict[int, int]] = {"x": {}, "y": {}}
    out = []
    for s in w.syllables:
        m = maps[s.symbol.tuple_name]
        if s.symbol.position not in m:
            m[s.symbol.position] = len(m) + 1
        out.append(
            Syllable(
                VariableSymbol(s.symbol.tuple_name, m[s.symbol.position]), s.exponent
            )
        )
    return GroupWord.from_syllables(out)


def shape_key(w: GroupWord, negated: bool) -> str:
    """Key into an infinite stub's supplied_indices map."""
    return f"{word_shape(w)} {'!=' if negated else '='} 1"
