"""Normal-form elements of a free product of factor groups.

A reduced word is an alternating sequence of non-identity letters from the
factors; the empty word is the canonical identity. Reduction fold-merges
adjacent same-factor letters with a stack, so multiplication is amortized
linear in the input length.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    BallTooLarge,
    ContextMismatch,
    InfiniteFactor,
    InvalidElement,
    WordParseError,
)
from .groups import FactorElement, FactorGroup

DEFAULT_BALL_CAP = 10**6

IDENTITY_RENDERING = "ε"  # ε
LETTER_SEPARATOR = "·"  # ·

_LETTER_RE = re.compile(r"^f(\d+):(\d+)$")


@dataclass(frozen=True)
class Letter:
    """A single non-identity factor element inside a normal form."""

    factor: int
    elem: int

    def render(self) -> str:
        return f"f{self.factor}:{self.elem}"


@dataclass(frozen=True)
class ReducedWord:
    """An element of the free product in normal form."""

    letters: tuple[Letter, ...]
    context: "FreeProduct" = field(compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return self.context.concat(self, other)

    def inverse(self) -> "ReducedWord":
        return self.context.invert(self)

    def __invert__(self) -> "ReducedWord":
        return self.inverse()

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple((l.factor, l.elem) for l in self.letters))

    def render(self) -> str:
        if not self.letters:
            return IDENTITY_RENDERING
        return LETTER_SEPARATOR.join(l.render() for l in self.letters)


@dataclass(frozen=True)
class Ball:
    """All reduced words of length at most ``radius``, in canonical order."""

    radius: int
    members: tuple[ReducedWord, ...]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[ReducedWord]:
        return iter(self.members)

    def __contains__(self, w: object) -> bool:
        return w in self.members


class FreeProduct:
    """Context object holding the factors of ``G_0 * G_1 * ... * G_{k-1}``."""

    def __init__(self, factors: Sequence[FactorGroup]):
        if not factors:
            raise ValueError("a free product needs at least one factor")
        self.factors = tuple(
            f.with_id(i) for i, f in enumerate(factors)
        )
        self.identity = ReducedWord((), self)

    @property
    def k(self) -> int:
        return len(self.factors)

    @classmethod
    def from_documents(cls, docs: Sequence) -> "FreeProduct":
        from .groups import load_group

        return cls([load_group(doc, index=i) for i, doc in enumerate(docs)])

    def factor(self, fid: int) -> FactorGroup:
        if not 0 <= fid < self.k:
            raise InvalidElement(f"no factor with id {fid} (have {self.k} factors)")
        return self.factors[fid]

    def require_finite(self) -> None:
        for f in self.factors:
            if f.declared_infinite:
                raise InfiniteFactor(
                    f"factor {f.id} ({f.name}) is an infinite stub"
                )

    # -- construction ---------------------------------------------------

    def letter(self, fid: int, elem: int) -> ReducedWord:
        """A length-<=1 word from one factor element (identity gives ε)."""
        f = self.factor(fid)
        f.check_elem(elem)
        if elem == f.identity:
            return self.identity
        return ReducedWord((Letter(fid, elem),), self)

    def embed(self, fe: FactorElement) -> ReducedWord:
        return self.letter(fe.factor, fe.elem)

    def _push(self, stack: list[Letter], fid: int, elem: int) -> None:
        f = self.factors[fid]
        if elem == f.identity:
            return
        if stack and stack[-1].factor == fid:
            merged = f.mul(stack[-1].elem, elem)
            stack.pop()
            if merged != f.identity:
                stack.append(Letter(fid, merged))
        else:
            stack.append(Letter(fid, elem))

    def reduce(self, raw: Iterable) -> ReducedWord:
        """Normal form of a raw letter sequence of (factor, elem) pairs."""
        stack: list[Letter] = []
        for item in raw:
            if isinstance(item, Letter):
                fid, elem = item.factor, item.elem
            else:
                fid, elem = item
            f = self.factor(fid)
            f.check_elem(elem)
            self._push(stack, fid, elem)
        return ReducedWord(tuple(stack), self)

    # -- arithmetic ------------------------------------------------------

    def _check_context(self, w: ReducedWord) -> None:
        if w.context is not self:
            raise ContextMismatch("word belongs to a different free-product context")

    def concat(self, u: ReducedWord, v: ReducedWord) -> ReducedWord:
        self._check_context(u)
        self._check_context(v)
        stack = list(u.letters)
        for letter in v.letters:
            self._push(stack, letter.factor, letter.elem)
        return ReducedWord(tuple(stack), self)

    def invert(self, u: ReducedWord) -> ReducedWord:
        self._check_context(u)
        letters = tuple(
            Letter(l.factor, self.factors[l.factor].inv(l.elem))
            for l in reversed(u.letters)
        )
        return ReducedWord(letters, self)

    def length(self, u: ReducedWord) -> int:
        self._check_context(u)
        return len(u.letters)

    # -- ball enumeration --------------------------------------------------

    def predicted_ball_size(self, radius: int) -> int:
        """Count of words of length <= radius via the alternating recurrence."""
        self.require_finite()
        counts = {f.id: f.order - 1 for f in self.factors}  # length-1 words per last factor
        total = 1 + sum(counts.values()) if radius >= 1 else 1
        for _ in range(2, radius + 1):
            nxt = {}
            for f in self.factors:
                nxt[f.id] = (f.order - 1) * sum(
                    c for g, c in counts.items() if g != f.id
                )
            counts = nxt
            total += sum(counts.values())
        return total

    def ball(self, radius: int, cap: int = DEFAULT_BALL_CAP) -> Ball:
        """All reduced words of length <= radius, deterministically ordered."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        self.require_finite()
        predicted = self.predicted_ball_size(radius)
        if predicted > cap:
            raise BallTooLarge(cap, predicted)
        members: list[ReducedWord] = [self.identity]
        level: list[tuple[Letter, ...]] = [()]
        for _ in range(radius):
            nxt: list[tuple[Letter, ...]] = []
            for prefix in level:
                last = prefix[-1].factor if prefix else None
                for f in self.factors:
                    if f.id == last:
                        continue
                    for e in range(f.order):
                        if e == f.identity:
                            continue
                        nxt.append(prefix + (Letter(f.id, e),))
            members.extend(ReducedWord(w, self) for w in nxt)
            level = nxt
        return Ball(radius, tuple(members))

    # -- textual rendering -------------------------------------------------

    def render(self, u: ReducedWord) -> str:
        self._check_context(u)
        return u.render()

    def parse_letters(self, text: str) -> list[tuple[int, int]]:
        """Raw (factor, elem) pairs from 'f0:1 f1:2' / 'f0:1·f1:2' / 'ε'."""
        text = text.strip()
        if text in ("", IDENTITY_RENDERING):
            return []
        pairs = []
        for token in text.replace(LETTER_SEPARATOR, " ").split():
            m = _LETTER_RE.match(token)
            if not m:
                raise WordParseError(f"bad letter token {token!r}")
            pairs.append((int(m.group(1)), int(m.group(2))))
        return pairs

    def parse_word_text(self, text: str) -> ReducedWord:
        """Parse a rendered or raw letter sequence and reduce it."""
        return self.reduce(self.parse_letters(text))
