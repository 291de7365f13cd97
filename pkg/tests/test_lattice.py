import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from markedgroups import lattice
from markedgroups._budget import BudgetExceeded

# frozen from closed_subsets_count below and from covering_number_Zm
ZM2_COVERS = {1: 4, 2: 12, 3: 33, 4: 73, 5: 148}

vectors = st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6)), max_size=5)


def closed_subsets_count(m, n):
    """Count subsets S of the half ball with S = half-ball ∩ <S> (brute force)."""
    half = [p for p in lattice.l1_ball(m, n) if any(p) and next(x for x in p if x) > 0]
    count = 0
    for mask in range(2 ** len(half)):
        S = [p for i, p in enumerate(half) if mask >> i & 1]
        H = lattice.hnf(S, m)
        if all(H.contains(p) == (p in S) for p in half):
            count += 1
    return count


def test_l1_sizes():
    for m in (1, 2, 3):
        for n in range(5):
            pts = lattice.l1_ball(m, n)
            assert len(pts) == len(set(pts)) == lattice.l1_ball_size(m, n)
            assert all(sum(map(abs, p)) <= n for p in pts)
    assert lattice.l1_ball_size(1, 5) == 11
    assert lattice.l1_ball_size(2, 1) == 5


def test_hnf_example():
    H = lattice.hnf([(1, 1), (1, -1)])
    assert H.rows == ((1, 1), (0, 2))
    assert H.contains((2, 0)) and not H.contains((1, 0))


def test_hnf_zero_and_text():
    H = lattice.hnf([], 2)
    assert H.rank == 0 and H.contains((0, 0)) and not H.contains((0, 1))
    G = lattice.hnf([(4, 6), (2, 2)])
    assert lattice.HNFMatrix.from_text(G.to_text()) == G
    assert G.to_text().splitlines()[0] == "2"
    assert lattice.HNFMatrix.from_text("1\n2 5\n").rows == ((2, 5),)
    with pytest.raises(ValueError):
        lattice.HNFMatrix.from_text("2\n2 5\n0 3\n")  # 5 is not reduced mod 3


@given(vectors)
def test_hnf_is_canonical(gens):
    H = lattice.hnf(gens, 3)
    for g in gens:
        assert H.contains(g)
    for row in H.rows:
        assert lattice.hnf(gens + [row], 3) == H
    assert lattice.hnf(list(reversed(gens)), 3) == H
    if len(gens) >= 2:
        a, b = gens[0], gens[1]
        mixed = [tuple(x + 3 * y for x, y in zip(a, b)), b] + gens[2:]
        assert lattice.hnf(mixed, 3) == H
    piv = H.pivots()
    assert piv == sorted(set(piv))
    for i, (row, p) in enumerate(zip(H.rows, piv)):
        assert row[p] > 0
        for above in H.rows[:i]:
            assert 0 <= above[p] < row[p]


def test_covering_Z_is_n_plus_one():
    for n in range(1, 21):
        r = lattice.covering_number_Zm(1, n)
        assert r.count == n + 1 and r.exact


def test_covering_Z2_goldens():
    for n, N in ZM2_COVERS.items():
        r = lattice.covering_number_Zm(2, n)
        assert r.count == N
        assert N <= r.bound
    assert closed_subsets_count(2, 1) == 4
    assert closed_subsets_count(2, 2) == 12


@pytest.mark.parametrize("m,n", [(2, 3), (2, 4), (1, 6)])
def test_bfs_agrees_with_small_subsets(m, n):
    assert lattice.ball_generated_subgroups(m, n) == lattice.subset_generated_subgroups(m, n, m + 1)


def test_large_rank_reports_bound_only():
    r = lattice.covering_number_Zm(3, 2)
    assert r.count is None and not r.exact
    b = lattice.l1_ball_size(3, 2)
    assert r.bound == sum(math.comb(b, l) for l in range(4))


def test_budget():
    with pytest.raises(BudgetExceeded):
        lattice.l1_ball(2, 50, budget=100)


def test_fingerprint_of_index_two():
    fp = lattice.subgroup_fingerprint(lattice.hnf([(1, 1), (0, 2)]), 1)
    assert fp.members() == [0]
    fp2 = lattice.subgroup_fingerprint(lattice.hnf([(1, 1), (0, 2)]), 2)
    ball = lattice.l1_ball(2, 2)
    even = {p for p in ball if sum(p) % 2 == 0}
    assert [ball[i] for i in fp2.members()] == [p for p in ball if p in even]
    assert len(even) == 9


def test_zm_dimension_table():
    table, est = lattice.zm_dimension_experiment(1, range(1, 21))
    s = table.column("s_n")
    assert all(x > y for x, y in zip(s[1:], s[2:]))
    assert s[-1] < 0.25
    assert est.rows[-1][1] == 21
    t3, e3 = lattice.zm_dimension_experiment(3, range(1, 3))
    assert t3.column("N") == [None, None] and e3 is None
