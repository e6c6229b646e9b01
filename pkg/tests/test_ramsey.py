from __future__ import annotations

import itertools
import json
import math
import random
from functools import lru_cache

import pytest

from ladderlab import BoundTooLarge, bound_from_json, bound_to_json, ramsey_upper
from ladderlab.ramsey import (
    BExact,
    BMax,
    BRamsey,
    BSucc,
    bv_exact,
    bv_max,
    bv_ramsey,
    bv_succ,
    is_ge_int,
    le_bound,
    ramsey_exact,
    ramsey_sat,
    render_bound,
    sat_min,
)


@lru_cache(maxsize=None)
def naive_recurrence(targets: tuple) -> int:
    """Direct tuple-form recurrence, independent of the pattern collapse."""
    if any(n == 1 for n in targets):
        return 1
    k = len(targets)
    total = 2 - k
    for i in range(k):
        child = targets[:i] + (targets[i] - 1,) + targets[i + 1 :]
        total += naive_recurrence(tuple(sorted(child)))
    return total


def test_ramsey_known_values():
    assert ramsey_upper(2, 2) == 2
    assert ramsey_upper(2, 3) == 6
    assert ramsey_upper(3, 2) == 2
    assert ramsey_upper(1, 7) == 7
    assert ramsey_upper(2, 4) == 20


def test_pattern_collapse_matches_naive():
    for colors in (1, 2, 3, 4):
        for target in (1, 2, 3, 4, 5):
            expected = naive_recurrence(tuple([target] * colors))
            assert ramsey_exact(colors, target) == expected, (colors, target)


def test_two_color_equals_binomial():
    for m in range(1, 9):
        assert ramsey_upper(2, m) <= math.comb(2 * m - 2, m - 1)
        if m >= 2:
            assert ramsey_upper(2, m) == math.comb(2 * m - 2, m - 1)


def test_monotone_grid():
    values = {
        (c, m): ramsey_exact(c, m) for c in range(1, 5) for m in range(1, 6)
    }
    for (c, m), v in values.items():
        if (c + 1, m) in values:
            assert values[(c + 1, m)] >= v
        if (c, m + 1) in values:
            assert values[(c, m + 1)] >= v


def test_r33_exactness_by_k5_search():
    # some 2-coloring of K5's edges has no monochromatic triangle, so the
    # recurrence value 6 is the exact Ramsey number for (2, 3)
    edges = list(itertools.combinations(range(5), 2))
    triangles = list(itertools.combinations(range(5), 3))
    found = False
    for bits in range(1 << len(edges)):
        coloring = {e: (bits >> i) & 1 for i, e in enumerate(edges)}

        def color(a, b):
            return coloring[(a, b) if a < b else (b, a)]

        if not any(
            color(a, b) == color(b, c) == color(a, c) for a, b, c in triangles
        ):
            found = True
            break
    assert found


def test_unmaterializable_raises():
    with pytest.raises(BoundTooLarge):
        ramsey_upper(16, 50)


def test_ramsey_sat_matches_exact():
    for colors in (1, 2, 3, 4, 16):
        for target in (1, 2, 3, 4):
            exact = ramsey_exact(colors, target)
            for cap in (1, 2, 3, 5, 17, 100, 10_000):
                assert ramsey_sat(colors, target, cap) == min(exact, cap)


def test_ramsey_sat_saturates_huge():
    assert ramsey_sat(4**9, 6, 9) == 9
    assert ramsey_sat(4**15, 12, 9) == 9
    assert ramsey_sat(64, 10_000, 9) == 9


def test_bv_constructors_normalize():
    assert bv_succ(bv_exact(3)) == bv_exact(4)
    assert bv_max([bv_exact(1), bv_exact(5), bv_exact(2)]) == bv_exact(5)
    assert bv_ramsey(2, bv_exact(3)) == bv_exact(6)
    assert bv_ramsey(16, bv_exact(2)) == bv_exact(2)
    big = bv_ramsey(64, bv_exact(10**30))
    assert isinstance(big, BRamsey)
    nested = bv_max([bv_max([bv_exact(1), big]), bv_exact(2)])
    assert isinstance(nested, BMax)
    assert len(nested.items) == 2  # exacts merged, nesting flattened


def test_bv_max_deduplicates():
    big = bv_ramsey(64, bv_exact(10**30))
    same = bv_ramsey(64, bv_exact(10**30))
    v = bv_max([big, same, bv_exact(1)])
    assert isinstance(v, BMax)
    assert len(v.items) == 2


def test_sat_min_random_small_values():
    rng = random.Random(8)

    def build(depth):
        roll = rng.random()
        if depth == 0 or roll < 0.3:
            return bv_exact(rng.randrange(20))
        if roll < 0.5:
            return bv_succ(build(depth - 1))
        if roll < 0.8:
            return bv_max([build(depth - 1) for _ in range(rng.randrange(1, 4))])
        # keep Ramsey targets shallow so the naive oracle stays computable
        return bv_ramsey(rng.choice([1, 2, 3]), bv_exact(rng.randrange(1, 8)))

    def eval_exact(v):
        if isinstance(v, BExact):
            return v.value
        if isinstance(v, BSucc):
            return eval_exact(v.base) + 1
        if isinstance(v, BMax):
            return max(eval_exact(i) for i in v.items)
        return naive_recurrence(tuple([eval_exact(v.target)] * v.colors))

    for _ in range(150):
        v = build(3)
        exact = eval_exact(v)
        for cap in (1, 3, 10, 100, 5000):
            assert sat_min(v, cap) == min(exact, cap), render_bound(v)


def test_is_ge_int():
    big = bv_ramsey(256, bv_succ(bv_ramsey(64, bv_exact(10**40))))
    assert is_ge_int(big, 9) is True
    assert is_ge_int(big, 10**30) is True  # bridges through R(2, K)
    assert is_ge_int(bv_exact(5), 9) is False
    assert is_ge_int(bv_exact(5), 5) is True


def test_le_bound_rules():
    small = bv_ramsey(16, bv_exact(6))  # materialized exact
    assert isinstance(small, BExact)
    big64 = bv_ramsey(64, bv_exact(10**40))
    big256 = bv_ramsey(256, bv_exact(10**40 + 5))
    assert le_bound(bv_exact(3), bv_exact(7)) is True
    assert le_bound(bv_exact(7), bv_exact(3)) is False
    assert le_bound(big64, big256) is True  # colors and target monotone
    assert le_bound(small, big64) is True  # exact below a tower
    assert le_bound(big64, bv_exact(10)) is False
    # x <= R(c, t) via x <= t
    t = bv_max([small, bv_exact(12)])
    r = bv_ramsey(1024, bv_succ(t))
    assert le_bound(small, r) is True
    # max on the left needs all elements below
    assert le_bound(bv_max([small, big64]), big256) is True
    # succ on both sides
    assert le_bound(bv_succ(big64), bv_succ(big256)) is True


def test_le_bound_total_orderish_on_exacts():
    rng = random.Random(3)
    for _ in range(100):
        a, b = rng.randrange(10**6), rng.randrange(10**6)
        assert le_bound(bv_exact(a), bv_exact(b)) is (a <= b)


def test_bound_json_round_trip():
    big = bv_ramsey(256, bv_succ(bv_max([bv_exact(11), bv_ramsey(64, bv_exact(10**33))])))
    doc = bound_to_json(big)
    text = json.dumps(doc)
    assert bound_from_json(json.loads(text)) == big


def test_render_bound():
    assert render_bound(bv_exact(42)) == "42"
    v = bv_ramsey(64, bv_exact(10**40))
    assert render_bound(v) == f"R(64,2,{10**40})"
    assert render_bound(bv_succ(v)) == f"(R(64,2,{10**40}) + 1)"
    deep = v
    for _ in range(40):
        deep = bv_max([bv_ramsey(64, bv_succ(deep)), deep])
    s = render_bound(deep, limit=500)
    assert len(s) < 700
    assert s.endswith("…")
