from __future__ import annotations

import itertools

import pytest

from ladderlab import FreeProduct, load_group

Z2_DOC = {"name": "Z2", "kind": "cyclic", "order": 2}
Z3_DOC = {"name": "Z3", "kind": "cyclic", "order": 3}
S3_DOC = {"name": "S3", "kind": "perm-gens", "generators": [[1, 0, 2], [1, 2, 0]]}


@pytest.fixture(scope="session")
def z2():
    return load_group(Z2_DOC, 0)


@pytest.fixture(scope="session")
def z3():
    return load_group(Z3_DOC, 0)


@pytest.fixture(scope="session")
def s3():
    return load_group(S3_DOC, 0)


@pytest.fixture(scope="session")
def z2z2():
    return FreeProduct.from_documents([Z2_DOC, Z2_DOC])


@pytest.fixture(scope="session")
def z2z3():
    return FreeProduct.from_documents([Z2_DOC, Z3_DOC])


@pytest.fixture(scope="session")
def z3z3():
    return FreeProduct.from_documents([Z3_DOC, Z3_DOC])


@pytest.fixture(scope="session")
def z3s3():
    return FreeProduct.from_documents([Z3_DOC, S3_DOC])


@pytest.fixture(scope="session")
def z2z2z2():
    return FreeProduct.from_documents([Z2_DOC, Z2_DOC, Z2_DOC])


# -- independent oracles -------------------------------------------------------


def alternating_ball_count(orders: list[int], radius: int) -> int:
    """Ball size by direct enumeration of alternating factor-id sequences."""
    k = len(orders)
    total = 1  # identity
    for length in range(1, radius + 1):
        for seq in itertools.product(range(k), repeat=length):
            if any(a == b for a, b in zip(seq, seq[1:])):
                continue
            words = 1
            for fid in seq:
                words *= orders[fid] - 1
            total += words
    return total


def naive_max_ladder(holds, a_rows_pool, b_rows_pool, max_m: int) -> int:
    """Exhaustive stability index over explicit row pools, up to max_m.

    Checks every assignment of m rows per side against the biconditional;
    independent of the production search's extension strategy.
    """
    best = 0
    for m in range(1, max_m + 1):
        found = False
        for a_rows in itertools.product(a_rows_pool, repeat=m):
            for b_rows in itertools.product(b_rows_pool, repeat=m):
                if all(
                    holds(a_rows[i], b_rows[j]) == (i <= j)
                    for i in range(m)
                    for j in range(m)
                ):
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = m
    return best


def compose_perm_oracle(p, q):
    """Apply q first, then p."""
    return tuple(p[q[i]] for i in range(len(q)))
