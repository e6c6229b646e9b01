"""Brute-force stability-index search.

A ladder of length m for a formula φ(x̄, ȳ) over a finite domain B is a pair
of row sequences ā_1..ā_m, b̄_1..b̄_m with φ(ā_i, b̄_j) holding exactly when
i <= j. Ladders are prefix-closed, so the search is a depth-first walk over
extensions; the module is deliberately a transparent brute-force oracle.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import product
from typing import Callable, Sequence

from .errors import ArityMismatch, DomainTooLarge, InfiniteFactor, MissingSuppliedIndex
from .freeproduct import Ball, FreeProduct
from .groups import FactorElement, FactorGroup
from .words import (
    GroupWord,
    Syllable,
    VariableSymbol,
    canonicalize_word,
    evaluate,
    evaluate_in_group,
    shape_key,
)

DEFAULT_CUTOFF = 8
DEFAULT_BRANCH_CAP = 10**7


class Formula:
    """A boolean predicate over (a-row, b-row) pairs with fixed arities."""

    def __init__(
        self,
        arity_x: int,
        arity_y: int,
        predicate: Callable[[tuple, tuple], bool],
        description: str = "",
    ):
        self.arity_x = arity_x
        self.arity_y = arity_y
        self.description = description
        self._predicate = predicate
        self._cache: dict[tuple, bool] = {}

    def holds(self, a_row: tuple, b_row: tuple) -> bool:
        key = (a_row, b_row)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self._predicate(a_row, b_row)
        return hit


def word_formula(
    context: FreeProduct, w: GroupWord, negated: bool = False
) -> Formula:
    """The formula 'w = 1' (or 'w != 1') over free-product values."""

    def predicate(a_row: tuple, b_row: tuple) -> bool:
        value = evaluate(context, w, a_row, b_row)
        return value.is_identity != negated

    op = "!=" if negated else "="
    return Formula(w.arity_x, w.arity_y, predicate, f"{w.render()} {op} 1")


def group_word_formula(
    group: FactorGroup, w: GroupWord, negated: bool = False
) -> Formula:
    """The formula 'w = 1' (or 'w != 1') over elements of a single factor."""

    def predicate(a_row: tuple, b_row: tuple) -> bool:
        value = evaluate_in_group(
            group,
            w,
            [v.elem if isinstance(v, FactorElement) else v for v in a_row],
            [v.elem if isinstance(v, FactorElement) else v for v in b_row],
        )
        return (value == group.identity) != negated

    op = "!=" if negated else "="
    return Formula(w.arity_x, w.arity_y, predicate, f"{w.render()} {op} 1 in {group.name}")


def formula_not(f: Formula) -> Formula:
    return Formula(
        f.arity_x, f.arity_y, lambda a, b: not f.holds(a, b), f"not({f.description})"
    )


def _pad(row: tuple, arity: int) -> tuple:
    return row[:arity]


def _combine(f: Formula, g: Formula, op: Callable[[bool, bool], bool], name: str) -> Formula:
    ax = max(f.arity_x, g.arity_x)
    ay = max(f.arity_y, g.arity_y)

    def predicate(a_row: tuple, b_row: tuple) -> bool:
        return op(
            f.holds(_pad(a_row, f.arity_x), _pad(b_row, f.arity_y)),
            g.holds(_pad(a_row, g.arity_x), _pad(b_row, g.arity_y)),
        )

    return Formula(ax, ay, predicate, f"{name}({f.description}, {g.description})")


def formula_or(f: Formula, g: Formula) -> Formula:
    return _combine(f, g, lambda p, q: p or q, "or")


def formula_and(f: Formula, g: Formula) -> Formula:
    return _combine(f, g, lambda p, q: p and q, "and")


@dataclass(frozen=True)
class SearchDomain:
    """An ordered, duplicate-free list of candidate row values."""

    kind: str
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("search domain must be non-empty")
        if len(set(self.values)) != len(self.values):
            raise ValueError("search domain contains duplicates")

    @classmethod
    def from_ball(cls, ball: Ball) -> "SearchDomain":
        return cls(f"ball:{ball.radius}", tuple(ball.members))

    @classmethod
    def from_factor(cls, group: FactorGroup) -> "SearchDomain":
        if group.declared_infinite:
            raise InfiniteFactor(f"factor {group.id} ({group.name}) is an infinite stub")
        return cls(f"factor:{group.id}", tuple(group.elements()))

    @classmethod
    def from_values(cls, values: Sequence, kind: str = "explicit") -> "SearchDomain":
        return cls(kind, tuple(values))


@dataclass(frozen=True)
class Ladder:
    m: int
    a_rows: tuple[tuple, ...]
    b_rows: tuple[tuple, ...]


@dataclass(frozen=True)
class IndexResult:
    index: int
    witness: Ladder | None
    cutoff_hit: bool
    nodes_explored: int


def is_ladder(formula: Formula, a_rows: Sequence[tuple], b_rows: Sequence[tuple]) -> bool:
    """True iff φ(ā_i, b̄_j) holds exactly when i <= j, over all pairs."""
    if len(a_rows) != len(b_rows):
        raise ArityMismatch("a_rows and b_rows must have equal length")
    for row in a_rows:
        if len(row) != formula.arity_x:
            raise ArityMismatch(f"a-row {row!r} has wrong arity")
    for row in b_rows:
        if len(row) != formula.arity_y:
            raise ArityMismatch(f"b-row {row!r} has wrong arity")
    m = len(a_rows)
    for i in range(m):
        for j in range(m):
            if formula.holds(a_rows[i], b_rows[j]) != (i <= j):
                return False
    return True


class _Search:
    def __init__(self, formula, a_cands, b_cands, cutoff):
        self.formula = formula
        self.a_cands = a_cands
        self.b_cands = b_cands
        self.cutoff = cutoff
        self.nodes = 0
        self.best_m = 0
        self.best: Ladder = Ladder(0, (), ())
        self.cutoff_hit = False

    def run(self, first_a_cands) -> None:
        self._extend([], [], first_a_cands)

    def _extend(self, a_rows: list, b_rows: list, a_cands) -> bool:
        """Try all one-row extensions; returns True to stop the whole search."""
        holds = self.formula.holds
        m = len(a_rows)
        for a_new in a_cands:
            # the new a-row must fail against every existing b-row (i > j)
            if any(holds(a_new, b) for b in b_rows):
                continue
            for b_new in self.b_cands:
                if not holds(a_new, b_new):
                    continue
                # every existing a-row must succeed against the new b-row (i <= j)
                if any(not holds(a, b_new) for a in a_rows):
                    continue
                self.nodes += 1
                a_rows.append(a_new)
                b_rows.append(b_new)
                if m + 1 > self.best_m:
                    self.best_m = m + 1
                    self.best = Ladder(m + 1, tuple(a_rows), tuple(b_rows))
                if m + 1 >= self.cutoff:
                    self.cutoff_hit = True
                    a_rows.pop()
                    b_rows.pop()
                    return True
                stop = self._extend(a_rows, b_rows, self.a_cands)
                a_rows.pop()
                b_rows.pop()
                if stop:
                    return True
        return False


def _witness_key(ladder: Ladder, value_index: dict) -> tuple:
    rows = []
    for a, b in zip(ladder.a_rows, ladder.b_rows):
        rows.append(tuple(value_index[v] for v in a))
        rows.append(tuple(value_index[v] for v in b))
    return tuple(rows)


def max_ladder(
    formula: Formula,
    domain: SearchDomain,
    cutoff: int = DEFAULT_CUTOFF,
    branch_cap: int = DEFAULT_BRANCH_CAP,
    threads: int = 1,
    a_domains: Sequence[SearchDomain] | None = None,
    b_domains: Sequence[SearchDomain] | None = None,
) -> IndexResult:
    """Maximal ladder length over the domain, up to ``cutoff``.

    Rows range over the domain coordinatewise; per-coordinate domains may be
    supplied for factor-constrained searches. The reported witness is the
    lexicographically least (by domain order) among maximal ladders, and the
    result is independent of the thread count.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    a_doms = list(a_domains) if a_domains is not None else [domain] * formula.arity_x
    b_doms = list(b_domains) if b_domains is not None else [domain] * formula.arity_y
    if len(a_doms) != formula.arity_x or len(b_doms) != formula.arity_y:
        raise ArityMismatch("per-coordinate domain count does not match formula arity")

    branching = 1
    for d in a_doms + b_doms:
        branching *= len(d.values)
    if branching > branch_cap:
        raise DomainTooLarge(branch_cap, branching)

    a_cands = tuple(product(*[d.values for d in a_doms]))
    b_cands = tuple(product(*[d.values for d in b_doms]))

    value_index: dict = {}
    for d in [domain] + a_doms + b_doms:
        for i, v in enumerate(d.values):
            value_index.setdefault(v, i)

    if threads <= 1 or len(a_cands) <= 1:
        search = _Search(formula, a_cands, b_cands, cutoff)
        search.run(a_cands)
        return IndexResult(search.best_m, search.best, search.cutoff_hit, search.nodes)

    # Split the depth-1 a-row choices across workers; each branch is searched
    # independently and the merge is order-deterministic.
    def branch(a_first) -> _Search:
        s = _Search(formula, a_cands, b_cands, cutoff)
        s.run((a_first,))
        return s

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(branch, a_cands))

    best = Ladder(0, (), ())
    best_m = 0
    nodes = 0
    cutoff_hit = False
    for s in results:
        nodes += s.nodes
        cutoff_hit = cutoff_hit or s.cutoff_hit
        if s.best_m > best_m or (
            s.best_m == best_m
            and best_m > 0
            and _witness_key(s.best, value_index) < _witness_key(best, value_index)
        ):
            best_m = s.best_m
            best = s.best
    return IndexResult(best_m, best, cutoff_hit, nodes)


def _used_positions(w: GroupWord) -> tuple[list[int], list[int]]:
    xs = sorted({s.symbol.position for s in w.syllables if s.symbol.tuple_name == "x"})
    ys = sorted({s.symbol.position for s in w.syllables if s.symbol.tuple_name == "y"})
    return xs, ys


def _renumber_by_position(w: GroupWord) -> tuple[GroupWord, list[int], list[int]]:
    """Renumber variables to 1..n in ascending position order, dropping unused
    positions. Position order (unlike first-occurrence order) keeps the
    lexicographic witness order aligned with the original coordinates."""
    xs, ys = _used_positions(w)
    xmap = {p: i + 1 for i, p in enumerate(xs)}
    ymap = {p: i + 1 for i, p in enumerate(ys)}
    syllables = tuple(
        Syllable(
            VariableSymbol(
                s.symbol.tuple_name,
                (xmap if s.symbol.tuple_name == "x" else ymap)[s.symbol.position],
                s.symbol.annotation,
            ),
            s.exponent,
        )
        for s in w.syllables
    )
    return GroupWord.from_syllables(syllables), xs, ys


def _pad_rows(rows, used, arity, identity):
    padded = []
    for row in rows:
        full = [identity] * arity
        for value, pos in zip(row, used):
            full[pos - 1] = value
        padded.append(tuple(full))
    return tuple(padded)


def word_index(
    context: FreeProduct,
    w: GroupWord,
    domain: SearchDomain,
    cutoff: int = DEFAULT_CUTOFF,
    branch_cap: int = DEFAULT_BRANCH_CAP,
    threads: int = 1,
    negated: bool = False,
) -> IndexResult:
    """Stability index of 'w = 1' over the domain.

    Unused variable positions never change the index (a ladder projects onto
    the used coordinates and pads back), so the search runs on the
    position-renumbered word and the witness is padded back to the original
    arity with the least domain value, keeping it the lexicographically
    least maximal ladder.
    """
    reduced, xs, ys = _renumber_by_position(w)
    formula = word_formula(context, reduced, negated=negated)
    result = max_ladder(
        formula, domain, cutoff=cutoff, branch_cap=branch_cap, threads=threads
    )
    if result.witness is None or (len(xs) == w.arity_x and len(ys) == w.arity_y):
        return result
    pad = domain.values[0]
    witness = Ladder(
        result.witness.m,
        _pad_rows(result.witness.a_rows, xs, w.arity_x, pad),
        _pad_rows(result.witness.b_rows, ys, w.arity_y, pad),
    )
    return replace(result, witness=witness)


def qf_stability_index(
    factor: FactorGroup,
    block: GroupWord,
    negated: bool = False,
    cutoff: int | None = None,
) -> IndexResult:
    """Stability index of 'block = 1' (or '!= 1') over the whole factor.

    For infinite stubs the supplied index for the block's canonical shape is
    passed through (witness absent). For finite factors the variables are
    renumbered to their first-occurrence shape (unused coordinates never
    change the index) and searched exhaustively; with the default cutoff the
    result is exact because ladder rows are pairwise distinct, so no ladder
    can be longer than the number of distinct row tuples.
    """
    canonical = canonicalize_word(block)
    if factor.declared_infinite:
        key = shape_key(canonical, negated)
        value = factor.supplied_indices.get(key)
        if value is None:
            raise MissingSuppliedIndex(
                f"stub factor {factor.id} ({factor.name}) has no supplied index "
                f"for {key!r}"
            )
        return IndexResult(value, None, False, 0)

    formula = group_word_formula(factor, canonical, negated=negated)
    domain = SearchDomain.from_factor(factor)
    hard_limit = min(
        factor.order ** canonical.arity_x, factor.order ** canonical.arity_y
    )
    effective = hard_limit if cutoff is None else min(cutoff, hard_limit)
    effective = max(effective, 1)
    result = max_ladder(formula, domain, cutoff=effective)
    if result.cutoff_hit and result.index >= hard_limit:
        # rows are pairwise distinct, so hard_limit-length ladders are maximal
        result = replace(result, cutoff_hit=False)
    return result
