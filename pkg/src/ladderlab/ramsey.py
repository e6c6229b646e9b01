"""Diagonal Ramsey upper bounds and lazily evaluated bound numbers.

The upper bound on the k-color diagonal Ramsey number for pairs is the
memoized recurrence

    R(n_1..n_k) <= 2 - k + sum_i R(n_1, .., n_i - 1, .., n_k),  R(..) = 1
                                                                if any n_i = 1,

which for two colors is exactly the Pascal binomial bound. The recurrence is
computed over a collapsed state space: coordinates equal to 2 contribute a
constant (decrementing one yields a tuple containing a 1, value 1), so a
state is just the multiset of coordinates >= 3.

Bound pipelines iterate this recurrence inside nested maxima; past two
nesting levels the values stop being materializable as explicit integers
(they gain more digits than fit in memory). Bound arithmetic therefore works
over a small algebra of nodes - exact integers, diagonal Ramsey applications,
successors, maxima - with exact materialization whenever cheap and sound
order comparisons otherwise. Comparisons lean on three monotonicity facts of
the recurrence, each property-tested against the naive recursion:

  * monotone in every coordinate and in the number of colors,
  * R(colors, target) >= target,
  * R(2, m) = C(2m-2, m-1) >= 2^(m-1).
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable

from .errors import BoundTooLarge

# Materialization thresholds: an exact integer is computed only when both the
# digit count and the collapsed state space stay desk-sized.
DIGITS_LIMIT = 6000
STATES_LIMIT = 150_000

# sat_min() runs the saturating recurrence; caps beyond this would make the
# collapsed state space blow up again.
SAT_CAP_LIMIT = 20_000

_LOG10_E = math.log10(math.e)


def _log10_factorial(n: int) -> float:
    return math.lgamma(n + 1) * _LOG10_E


def digits_estimate(colors: int, target: int) -> float:
    """log10 of the multinomial upper bound for R(colors, target)."""
    if target <= 2 or colors == 1:
        return 1.0
    total = (target - 1) * colors
    return _log10_factorial(total) - colors * _log10_factorial(target - 1)


def _states_estimate(colors: int, target: int) -> int:
    # multisets of size <= colors over the values {3..target}
    d = max(target - 2, 0)
    return math.comb(colors + d, d)


def is_materializable(colors: int, target: int) -> bool:
    if colors == 1 or target <= 2:
        return True
    if digits_estimate(colors, target) > DIGITS_LIMIT:
        return False
    if colors == 2:
        return True
    return _states_estimate(colors, target) <= STATES_LIMIT


_PATTERN_EXACT: dict[tuple, int] = {}


def _pattern_children(pattern: tuple) -> Iterable[tuple[tuple, int]]:
    counts = Counter(pattern)
    for v, cnt in counts.items():
        child = list(pattern)
        child.remove(v)
        if v >= 4:
            child.append(v - 1)
        yield tuple(sorted(child)), cnt


def _pattern_exact(pattern: tuple) -> int:
    """Exact recurrence value for the multiset of coordinates >= 3.

    Explicit-stack evaluation: chains of decrements can be as long as the
    color count, far past the interpreter recursion limit."""
    memo = _PATTERN_EXACT
    stack = [pattern]
    while stack:
        pat = stack[-1]
        if not pat or pat in memo:
            stack.pop()
            continue
        children = list(_pattern_children(pat))
        missing = [c for c, _ in children if c and c not in memo]
        if missing:
            stack.extend(missing)
            continue
        total = 2 - len(pat)
        for child, cnt in children:
            total += cnt * (memo[child] if child else 2)
        memo[pat] = total
        stack.pop()
    return memo[pattern] if pattern else 2


def ramsey_exact(colors: int, target: int) -> int:
    if colors < 1:
        raise ValueError("colors must be >= 1")
    if target < 1:
        raise ValueError("target must be >= 1")
    if target == 1:
        return 1
    if colors == 1:
        return target
    if target == 2:
        return 2
    if colors == 2:
        return math.comb(2 * target - 2, target - 1)
    return _pattern_exact(tuple([target] * colors))


def ramsey_upper(colors: int, target: int) -> int:
    """Exact value of the memoized recurrence; raises if unmaterializable."""
    if colors >= 1 and target >= 1 and not is_materializable(colors, target):
        raise BoundTooLarge(
            f"R({colors},2,{target}) has ~10^{digits_estimate(colors, target):.0f} "
            "digits; compare against it lazily instead"
        )
    return ramsey_exact(colors, target)


# -- saturating evaluation ---------------------------------------------------

_PATTERN_SAT: dict[tuple, int] = {}


def _g_cutoff(cap: int) -> int:
    """Smallest p with R(3,..,3) [p threes] >= cap; recurrence g(p)=2-p+p*g(p-1)."""
    g = 2
    p = 0
    while g < cap:
        p += 1
        g = 2 - p + p * g
    return p


def _pattern_sat(pattern: tuple, cap: int, p0: int) -> int:
    """Exactly min(recurrence value, cap). Sound because a saturated child
    forces the parent past the cap (all siblings are >= 1), and any pattern
    with at least p0 coordinates dominates the all-threes pattern of that
    size, which already reaches the cap."""
    if not pattern:
        return min(2, cap)
    if len(pattern) >= p0:
        return cap
    key = (pattern, cap)
    cached = _PATTERN_SAT.get(key)
    if cached is not None:
        return cached
    total = 2 - len(pattern)
    for child, cnt in _pattern_children(pattern):
        total += cnt * _pattern_sat(child, cap, p0)
    value = min(total, cap)
    _PATTERN_SAT[key] = value
    return value


def ramsey_sat(colors: int, target: int, cap: int) -> int:
    """min(R(colors, target), cap) for small caps."""
    if cap > SAT_CAP_LIMIT:
        raise ValueError(f"saturating evaluation is limited to caps <= {SAT_CAP_LIMIT}")
    if target == 1:
        return min(1, cap)
    if colors == 1:
        return min(target, cap)
    if target == 2:
        return min(2, cap)
    if target >= cap:
        return cap  # R >= target
    if colors == 2:
        return min(math.comb(2 * target - 2, target - 1), cap)
    if target - 1 >= cap.bit_length():
        return cap  # R >= R(2, target) >= 2^(target-1) >= cap
    p0 = _g_cutoff(cap)
    if colors >= p0:
        return cap  # avoids building huge diagonal patterns
    return _pattern_sat(tuple([target] * colors), cap, p0)


# -- lazy bound values -------------------------------------------------------


class BoundValue:
    """A natural number that may be too large to materialize."""

    __slots__ = ("_hash", "_key")
    kind = "abstract"

    def __hash__(self) -> int:
        return self._hash

    def sort_key(self) -> tuple:
        """Deterministic ordering key: kind rank, a local size parameter, and
        the structural hash (ints only, so stable across processes)."""
        return self._key

    def render(self, limit: int = 4000) -> str:
        return render_bound(self, limit)

    def __repr__(self) -> str:
        return f"<bound {self.render(200)}>"


class BExact(BoundValue):
    __slots__ = ("value",)
    kind = "exact"

    def __init__(self, value: int):
        if value < 0:
            raise ValueError("bound values are naturals")
        self.value = value
        self._hash = hash((0, value))
        self._key = (0, value, 0)

    def __eq__(self, other):
        return isinstance(other, BExact) and other.value == self.value

    __hash__ = BoundValue.__hash__


class BSucc(BoundValue):
    __slots__ = ("base",)
    kind = "succ"

    def __init__(self, base: BoundValue):
        self.base = base
        self._hash = hash((1, base._hash))
        self._key = (1, 0, self._hash)

    def __eq__(self, other):
        return isinstance(other, BSucc) and other.base == self.base

    __hash__ = BoundValue.__hash__


class BMax(BoundValue):
    __slots__ = ("items",)
    kind = "max"

    def __init__(self, items: tuple[BoundValue, ...]):
        self.items = items
        self._hash = hash((2,) + tuple(i._hash for i in items))
        self._key = (2, len(items), self._hash)

    def __eq__(self, other):
        return isinstance(other, BMax) and other.items == self.items

    __hash__ = BoundValue.__hash__


class BRamsey(BoundValue):
    __slots__ = ("colors", "target")
    kind = "ramsey"

    def __init__(self, colors: int, target: BoundValue):
        self.colors = colors
        self.target = target
        self._hash = hash((3, colors, target._hash))
        self._key = (3, colors, self._hash)

    def __eq__(self, other):
        return (
            isinstance(other, BRamsey)
            and other.colors == self.colors
            and other.target == self.target
        )

    __hash__ = BoundValue.__hash__


def bv_exact(n: int) -> BExact:
    return BExact(n)


def bv_succ(x: BoundValue) -> BoundValue:
    if isinstance(x, BExact):
        return BExact(x.value + 1)
    return BSucc(x)


def bv_max(items: Iterable[BoundValue]) -> BoundValue:
    flat: list[BoundValue] = []
    best_exact = None
    seen = set()
    stack = list(items)
    while stack:
        item = stack.pop(0)
        if isinstance(item, BMax):
            stack = list(item.items) + stack
            continue
        if isinstance(item, BExact):
            if best_exact is None or item.value > best_exact:
                best_exact = item.value
            continue
        if item not in seen:
            seen.add(item)
            flat.append(item)
    if best_exact is not None:
        flat.append(BExact(best_exact))
    if not flat:
        raise ValueError("max over no values")
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=lambda v: v.sort_key())
    return BMax(tuple(flat))


def bv_ramsey(colors: int, target: BoundValue) -> BoundValue:
    if colors < 1:
        raise ValueError("colors must be >= 1")
    if isinstance(target, BExact):
        t = target.value
        if t <= 1:
            return BExact(1)
        if t == 2:
            return BExact(2)
        if colors == 1:
            return BExact(t)
        if is_materializable(colors, t):
            return BExact(ramsey_exact(colors, t))
    return BRamsey(colors, target)


def render_bound(v: BoundValue, limit: int = 4000) -> str:
    """Expression rendering with a character budget; exact values print as
    decimal digits, deep expressions truncate with an ellipsis. Bound values
    share subtrees heavily, so a full tree rendering can explode."""
    parts: list[str] = []
    budget = limit

    class _Exhausted(Exception):
        pass

    def emit(s: str) -> None:
        nonlocal budget
        parts.append(s)
        budget -= len(s)
        if budget <= 0:
            raise _Exhausted

    def walk(v: BoundValue) -> None:
        if isinstance(v, BExact):
            emit(str(v.value))
        elif isinstance(v, BSucc):
            emit("(")
            walk(v.base)
            emit(" + 1)")
        elif isinstance(v, BMax):
            emit("max(")
            for i, item in enumerate(v.items):
                if i:
                    emit(", ")
                walk(item)
            emit(")")
        else:
            assert isinstance(v, BRamsey)
            emit(f"R({v.colors},2,")
            walk(v.target)
            emit(")")

    try:
        walk(v)
    except _Exhausted:
        parts.append("\u2026")
    return "".join(parts)


class BoundPool:
    """Hash-consed serialization of bound values: every distinct node is
    written once and referenced by id, children before parents."""

    def __init__(self):
        self.ids: dict[BoundValue, int] = {}
        self.nodes: list[dict] = []

    def intern(self, v: BoundValue) -> int:
        vid = self.ids.get(v)
        if vid is not None:
            return vid
        if isinstance(v, BExact):
            node = {"kind": "exact", "value": str(v.value)}
        elif isinstance(v, BSucc):
            node = {"kind": "succ", "of": self.intern(v.base)}
        elif isinstance(v, BMax):
            node = {"kind": "max", "of": [self.intern(i) for i in v.items]}
        elif isinstance(v, BRamsey):
            node = {"kind": "ramsey", "colors": v.colors, "target": self.intern(v.target)}
        else:
            raise TypeError(f"not a bound value: {v!r}")
        vid = len(self.nodes)
        self.nodes.append(node)
        self.ids[v] = vid
        return vid


def pool_to_values(nodes: list[dict]) -> list[BoundValue]:
    values: list[BoundValue] = []
    for node in nodes:
        kind = node.get("kind")
        if kind == "exact":
            values.append(BExact(int(node["value"])))
        elif kind == "succ":
            values.append(BSucc(values[node["of"]]))
        elif kind == "max":
            values.append(BMax(tuple(values[i] for i in node["of"])))
        elif kind == "ramsey":
            values.append(BRamsey(int(node["colors"]), values[node["target"]]))
        else:
            raise ValueError(f"unknown bound value kind {kind!r}")
    return values


def bound_to_json(v: BoundValue) -> dict:
    """Standalone pooled document for one bound value."""
    pool = BoundPool()
    root = pool.intern(v)
    return {"values": pool.nodes, "root": root}


def bound_from_json(doc: dict) -> BoundValue:
    return pool_to_values(doc["values"])[doc["root"]]


# -- comparisons --------------------------------------------------------------

_SAT_MEMO: dict[tuple, int] = {}


def sat_min(v: BoundValue, cap: int) -> int:
    """Exactly min(v, cap); total for caps up to SAT_CAP_LIMIT."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    if cap > SAT_CAP_LIMIT:
        raise ValueError(f"sat_min is limited to caps <= {SAT_CAP_LIMIT}")
    key = (v, cap)
    cached = _SAT_MEMO.get(key)
    if cached is not None:
        return cached
    if isinstance(v, BExact):
        result = min(v.value, cap)
    elif isinstance(v, BSucc):
        result = min(sat_min(v.base, cap) + 1, cap)
    elif isinstance(v, BMax):
        result = max(sat_min(i, cap) for i in v.items)
    elif isinstance(v, BRamsey):
        ts = sat_min(v.target, cap)
        if ts >= cap:
            result = cap  # R >= target
        else:
            result = ramsey_sat(v.colors, ts, cap)
    else:
        raise TypeError(f"not a bound value: {v!r}")
    _SAT_MEMO[key] = result
    return result


def _bridge_target(n: int) -> int:
    """Some K with C(2K-2, K-1) >= n (so R(2, K) >= n)."""
    k = max(2, (len(str(n)) * 5) // 3)
    while math.comb(2 * k - 2, k - 1) < n:
        k *= 2
    return k


_GE_MEMO: dict[tuple, bool | None] = {}


def is_ge_int(v: BoundValue, n: int) -> bool | None:
    """Tristate 'v >= n'; always decided when n is small."""
    if n <= 0:
        return True
    if n <= SAT_CAP_LIMIT:
        return sat_min(v, n) == n
    key = (v, n)
    if key in _GE_MEMO:
        return _GE_MEMO[key]
    result: bool | None
    if isinstance(v, BExact):
        result = v.value >= n
    elif isinstance(v, BSucc):
        result = is_ge_int(v.base, n - 1)
    elif isinstance(v, BMax):
        votes = [is_ge_int(i, n) for i in v.items]
        if any(r is True for r in votes):
            result = True
        elif all(r is False for r in votes):
            result = False
        else:
            result = None
    elif isinstance(v, BRamsey):
        if v.colors == 1:
            result = is_ge_int(v.target, n)
        else:
            k = _bridge_target(n)
            result = True if is_ge_int(v.target, k) is True else None
    else:
        raise TypeError(f"not a bound value: {v!r}")
    _GE_MEMO[key] = result
    return result


_UPPER_NODE_LIMIT = 200_000


def upper_int(v: BoundValue) -> int | None:
    """A sound explicit upper bound, or None when one is too big to build."""
    if isinstance(v, BExact):
        return v.value
    if isinstance(v, BSucc):
        u = upper_int(v.base)
        return None if u is None else u + 1
    if isinstance(v, BMax):
        uppers = [upper_int(i) for i in v.items]
        if any(u is None for u in uppers):
            return None
        return max(uppers)  # type: ignore[type-var]
    if isinstance(v, BRamsey):
        tu = upper_int(v.target)
        if tu is None or tu < 1:
            return None
        if tu <= 2 or v.colors == 1:
            return max(tu, 2)
        total = (tu - 1) * v.colors
        if total > _UPPER_NODE_LIMIT:
            return None
        return math.factorial(total) // math.factorial(tu - 1) ** v.colors
    raise TypeError(f"not a bound value: {v!r}")


_LE_MEMO: dict[tuple, bool | None] = {}


def le_bound(x: BoundValue, y: BoundValue) -> bool | None:
    """Tristate 'x <= y' via sound structural rules."""
    if x is y or x == y:
        return True
    key = (x, y)
    if key in _LE_MEMO:
        return _LE_MEMO[key]
    _LE_MEMO[key] = None  # cut cycles defensively
    result = _le_bound(x, y)
    _LE_MEMO[key] = result
    return result


def _le_bound(x: BoundValue, y: BoundValue) -> bool | None:
    if isinstance(y, BExact):
        ge = is_ge_int(x, y.value + 1)
        if ge is True:
            return False
        if ge is False:
            return True
        return None
    if isinstance(x, BExact):
        return is_ge_int(y, x.value)
    if isinstance(x, BMax):
        votes = [le_bound(i, y) for i in x.items]
        if all(r is True for r in votes):
            return True
        if any(r is False for r in votes):
            return False
        return None
    if isinstance(y, BMax):
        votes = [le_bound(x, i) for i in y.items]
        if any(r is True for r in votes):
            return True
        if all(r is False for r in votes):
            return False
        return None
    if isinstance(x, BSucc) and isinstance(y, BSucc):
        return le_bound(x.base, y.base)
    if isinstance(y, BRamsey):
        if isinstance(x, BRamsey):
            if x.colors <= y.colors and le_bound(x.target, y.target) is True:
                return True
        if le_bound(x, y.target) is True:
            return True  # R(c, t) >= t
        u = upper_int(x)
        if u is not None and is_ge_int(y, u) is True:
            return True
        return None
    if isinstance(y, BSucc):
        if le_bound(x, y.base) is True:
            return True
        return None
    return None
