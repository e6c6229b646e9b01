"""Explicit stability-index bounds: boolean-combination rules, the
alternating-block recursion, and the full change-of-variables pipeline.

Every computed bound comes with a certificate: a range-keyed trace of the
recursion (base indices per single block, subproduct bounds in both
polarities, the mu values, and the Ramsey applications) that can be replayed
independently of the code that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .errors import AnnotationMismatch
from .groups import FactorGroup
from .ladder import qf_stability_index
from .ramsey import (
    BoundPool,
    BoundValue,
    bv_exact,
    bv_max,
    bv_ramsey,
    bv_succ,
    le_bound,
    pool_to_values,
    ramsey_upper,
)
from .words import (
    BlockDecomposition,
    GroupWord,
    block_decompose,
    change_of_variables,
    render_word,
    word_shape,
)

CASES_PER_BLOCK = 4  # pair-orientation outcome cases per block coordinate


def negation_bound(n: int) -> int:
    """Index bound for the negated formula: reversing both row orders and
    shifting the b-rows turns an m-ladder for the negation into an
    (m-1)-ladder for the original, so the index grows by at most one."""
    if n < 0:
        raise ValueError("index bounds are naturals")
    return n + 1


def disjunction_bound(n_phi: int, n_psi: int) -> int:
    """R(2,2,mu) with mu = max index + 2.

    The monochromatic subset in the Ramsey argument pins only off-diagonal
    pairs, i.e. a strict-order configuration; shifting the b-rows turns a
    mu-subset into a (mu-1)-ladder, so the contradiction needs mu - 1 past
    both indices. mu = max + 1 is refuted by brute force: over Z3 there are
    word formulas of index 1 whose disjunction has index 3 > R(2,2,2)."""
    mu = max(n_phi, n_psi) + 2
    return ramsey_upper(2, mu)


def conjunction_bound(n_phi: int, n_psi: int) -> int:
    """De Morgan composition of the negation and disjunction rules."""
    return negation_bound(
        disjunction_bound(negation_bound(n_phi), negation_bound(n_psi))
    )


# A base-index oracle answers: index of 'block = 1' (negated: '!= 1') over the
# whole factor the block is annotated with.
BaseOracle = Callable[[FactorGroup, GroupWord, bool], int]


class SearchBaseOracle:
    """Default base oracle: brute-force search for finite factors, supplied
    indices for stubs; not-equals indices derived via negation_bound rather
    than a second search."""

    def __init__(self, factors: Sequence[FactorGroup]):
        self.factors = {f.id: f for f in factors}
        self._memo: dict[tuple, int] = {}

    def __call__(self, factor: FactorGroup, block: GroupWord, negated: bool) -> int:
        key = (factor.id, word_shape(block), negated)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if negated:
            value = negation_bound(self(factor, block, False))
        else:
            value = qf_stability_index(factor, block).index
        self._memo[key] = value
        return value


@dataclass(frozen=True)
class SubproductRef:
    """One proper contiguous subproduct, in one polarity, inside a mu step."""

    start: int  # block range, 0-based inclusive
    stop: int
    polarity: str  # "eq" | "neq"
    value: BoundValue


@dataclass(frozen=True)
class RangeCert:
    """Certificate node for one contiguous block range."""

    start: int
    stop: int
    kind: str  # "base" | "ramsey"
    value: BoundValue
    factor: int | None = None
    shape: str | None = None
    eq_index: int | None = None
    neq_index: int | None = None
    colors: int | None = None
    mu: BoundValue | None = None
    subproducts: tuple[SubproductRef, ...] = ()

    def to_json(self, pool: BoundPool) -> dict:
        doc: dict = {
            "range": [self.start, self.stop],
            "kind": self.kind,
            "value": pool.intern(self.value),
        }
        if self.kind == "base":
            doc.update(
                factor=self.factor,
                shape=self.shape,
                eq_index=self.eq_index,
                neq_index=self.neq_index,
            )
        else:
            doc.update(
                colors=self.colors,
                mu=pool.intern(self.mu),
                subproducts=[
                    {
                        "range": [s.start, s.stop],
                        "polarity": s.polarity,
                        "value": pool.intern(s.value),
                    }
                    for s in self.subproducts
                ],
            )
        return doc

    @classmethod
    def from_json(cls, doc: dict, values: list[BoundValue]) -> "RangeCert":
        start, stop = doc["range"]
        if doc["kind"] == "base":
            return cls(
                start=start,
                stop=stop,
                kind="base",
                value=values[doc["value"]],
                factor=doc["factor"],
                shape=doc["shape"],
                eq_index=doc["eq_index"],
                neq_index=doc["neq_index"],
            )
        return cls(
            start=start,
            stop=stop,
            kind="ramsey",
            value=values[doc["value"]],
            colors=doc["colors"],
            mu=values[doc["mu"]],
            subproducts=tuple(
                SubproductRef(
                    s["range"][0],
                    s["range"][1],
                    s["polarity"],
                    values[s["value"]],
                )
                for s in doc["subproducts"]
            ),
        )


@dataclass(frozen=True)
class BoundCertificate:
    """A computed bound plus the recursion trace justifying it.

    The trace is a DAG keyed by block ranges (a tree rendering would repeat
    shared subranges exponentially often)."""

    bound: BoundValue
    word: str
    rewritten: str
    ell: int
    radius: int | None
    num_factors: int | None
    ranges: Mapping[tuple[int, int], RangeCert]
    root: tuple[int, int] | None

    def bound_text(self) -> str:
        return self.bound.render()

    def to_json(self) -> dict:
        pool = BoundPool()
        range_docs = [rc.to_json(pool) for rc in self.ranges.values()]
        return {
            "format": "ladderlab-certificate@1",
            "bound": pool.intern(self.bound),
            "bound_text": self.bound_text(),
            "word": self.word,
            "rewritten": self.rewritten,
            "ell": self.ell,
            "radius": self.radius,
            "num_factors": self.num_factors,
            "coloring": {
                "cases_per_block": CASES_PER_BLOCK,
                "rule": "product over block coordinates",
            },
            "root": list(self.root) if self.root is not None else None,
            "ranges": range_docs,
            "values": pool.nodes,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "BoundCertificate":
        values = pool_to_values(doc["values"])
        ranges = {}
        for rdoc in doc["ranges"]:
            rc = RangeCert.from_json(rdoc, values)
            ranges[(rc.start, rc.stop)] = rc
        return cls(
            bound=values[doc["bound"]],
            word=doc["word"],
            rewritten=doc["rewritten"],
            ell=doc["ell"],
            radius=doc.get("radius"),
            num_factors=doc.get("num_factors"),
            ranges=ranges,
            root=tuple(doc["root"]) if doc.get("root") is not None else None,
        )


def lemma_bound(
    decomp: BlockDecomposition,
    base: BaseOracle,
    factors: Sequence[FactorGroup] | None = None,
    word_text: str | None = None,
    radius: int | None = None,
) -> BoundCertificate:
    """Bound for an alternating block decomposition.

    One block: the larger of the two base polarities. More blocks: every
    proper contiguous subproduct is bounded recursively in both polarities
    (not-equals via negation_bound), mu is one past their maximum, and the
    result is the Ramsey upper bound with 4^ell colors (the per-block cases
    compose into a product coloring).
    """
    if decomp.ell < 1:
        raise ValueError("lemma recursion needs at least one block")
    for a, b in zip(decomp.blocks, decomp.blocks[1:]):
        if a.factor == b.factor:
            raise AnnotationMismatch("adjacent blocks must alternate factors")
    factor_map = {f.id: f for f in factors} if factors is not None else None

    ranges: dict[tuple[int, int], RangeCert] = {}

    def factor_for(fid: int) -> FactorGroup:
        if factor_map is not None:
            return factor_map[fid]
        raise ValueError(f"no factor group supplied for annotation {fid}")

    def bound_for(i: int, j: int) -> RangeCert:
        key = (i, j)
        cached = ranges.get(key)
        if cached is not None:
            return cached
        ell = j - i + 1
        if ell == 1:
            block = decomp.block_word(i)
            factor = factor_for(decomp.blocks[i].factor)
            eq = base(factor, block, False)
            neq = base(factor, block, True)
            rc = RangeCert(
                start=i,
                stop=j,
                kind="base",
                value=bv_exact(max(eq, neq)),
                factor=factor.id,
                shape=word_shape(block),
                eq_index=eq,
                neq_index=neq,
            )
        else:
            subs: list[SubproductRef] = []
            for a in range(i, j + 1):
                for b in range(a, j + 1):
                    if (a, b) == (i, j):
                        continue
                    sub = bound_for(a, b)
                    if sub.kind == "base":
                        # single blocks carry both polarities from the oracle
                        eq_v = bv_exact(sub.eq_index)
                        neq_v = bv_exact(sub.neq_index)
                    else:
                        eq_v = sub.value
                        neq_v = bv_succ(sub.value)
                    subs.append(SubproductRef(a, b, "eq", eq_v))
                    subs.append(SubproductRef(a, b, "neq", neq_v))
            mu = bv_succ(bv_max([s.value for s in subs]))
            colors = CASES_PER_BLOCK**ell
            rc = RangeCert(
                start=i,
                stop=j,
                kind="ramsey",
                value=bv_ramsey(colors, mu),
                colors=colors,
                mu=mu,
                subproducts=tuple(subs),
            )
        ranges[key] = rc
        return rc

    root = bound_for(0, decomp.ell - 1)
    return BoundCertificate(
        bound=root.value,
        word=word_text if word_text is not None else "",
        rewritten=render_word(decomp.word),
        ell=decomp.ell,
        radius=radius,
        num_factors=len(factor_map) if factor_map is not None else None,
        ranges=ranges,
        root=(0, decomp.ell - 1),
    )


def theorem_bound(
    w: GroupWord, r: int, factors: Sequence[FactorGroup]
) -> BoundCertificate:
    """Full pipeline: change of variables, block decomposition, then the
    alternating-block recursion with searched (or supplied) base indices."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if len(factors) < 2:
        raise ValueError("need at least 2 factors")
    if not w.syllables:
        # the constantly-true formula has index 1: a second ladder row would
        # need a failing pair
        return BoundCertificate(
            bound=bv_exact(1),
            word=render_word(w),
            rewritten="",
            ell=0,
            radius=r,
            num_factors=len(factors),
            ranges={},
            root=None,
        )
    rewritten = change_of_variables(w, r, len(factors))
    decomp = block_decompose(rewritten)
    base = SearchBaseOracle(factors)
    return lemma_bound(
        decomp, base, factors=factors, word_text=render_word(w), radius=r
    )


def _polar_value(cert: BoundCertificate, start: int, stop: int, polarity: str, value_for) -> BoundValue:
    rc = cert.ranges[(start, stop)]
    if rc.kind == "base":
        return bv_exact(rc.eq_index if polarity == "eq" else rc.neq_index)
    sub = value_for((start, stop))
    return sub if polarity == "eq" else bv_succ(sub)


def replay_certificate(cert: BoundCertificate) -> BoundValue:
    """Recompute the bound from the trace alone (base indices are inputs)."""
    if cert.root is None:
        return bv_exact(1)
    memo: dict[tuple[int, int], BoundValue] = {}

    def value_for(key: tuple[int, int]) -> BoundValue:
        cached = memo.get(key)
        if cached is not None:
            return cached
        rc = cert.ranges[key]
        if rc.kind == "base":
            value = bv_exact(max(rc.eq_index, rc.neq_index))
        else:
            parts = [
                _polar_value(cert, s.start, s.stop, s.polarity, value_for)
                for s in rc.subproducts
            ]
            mu = bv_succ(bv_max(parts))
            value = bv_ramsey(rc.colors, mu)
        memo[key] = value
        return value

    return value_for(cert.root)


def verify_certificate(cert: BoundCertificate) -> bool:
    """Replay every recorded intermediate and the root bound."""
    if cert.root is None:
        return cert.bound == bv_exact(1)
    memo: dict[tuple[int, int], BoundValue] = {}

    def check(key: tuple[int, int]) -> BoundValue:
        cached = memo.get(key)
        if cached is not None:
            return cached
        rc = cert.ranges[key]
        if rc.kind == "base":
            value = bv_exact(max(rc.eq_index, rc.neq_index))
        else:
            parts = []
            for s in rc.subproducts:
                check((s.start, s.stop))
                expect = _polar_value(cert, s.start, s.stop, s.polarity, check)
                if expect != s.value:
                    raise ValueError(
                        f"subproduct {s.start}-{s.stop} ({s.polarity}) mismatch"
                    )
                parts.append(expect)
            mu = bv_succ(bv_max(parts))
            if mu != rc.mu:
                raise ValueError(f"mu mismatch at range {key}")
            value = bv_ramsey(rc.colors, mu)
        if value != rc.value:
            raise ValueError(f"value mismatch at range {key}")
        memo[key] = value
        return value

    try:
        return check(cert.root) == cert.bound
    except ValueError:
        return False


def certificate_le(c1: BoundCertificate, c2: BoundCertificate) -> bool | None:
    """Tristate comparison of two certificates' bounds."""
    return le_bound(c1.bound, c2.bound)
