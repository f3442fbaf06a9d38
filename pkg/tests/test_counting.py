import itertools
import math

import pytest

from indtrees.counting import (
    cayley,
    count_forests,
    count_forests_enumerated,
    count_overlap_pairs,
    count_trees_extending_forest,
    enumerate_forests,
    enumerate_labeled_trees,
    f_piecewise,
    rooted_forest_count_closed_form,
    rooted_forest_count_enumerated,
    validate_overlap_bounds,
)
from indtrees.graphs import Graph, is_tree


# --- labeled tree enumeration ------------------------------------------------


def test_cayley_values():
    assert [cayley(k) for k in range(1, 7)] == [1, 1, 3, 16, 125, 1296]


def test_enumeration_yields_distinct_trees():
    for k in range(1, 7):
        seen = set()
        for edges in enumerate_labeled_trees(k):
            assert edges not in seen
            seen.add(edges)
            assert is_tree(Graph(k, edges))
            assert all(u < v for (u, v) in edges)
        assert len(seen) == cayley(k)


def test_enumeration_matches_direct_scan():
    # independent oracle: scan all graphs with k-1 edges for trees
    k = 5
    pairs = list(itertools.combinations(range(k), 2))
    direct = {
        edges
        for edges in itertools.combinations(pairs, k - 1)
        if is_tree(Graph(k, edges))
    }
    assert direct == set(enumerate_labeled_trees(k))


# --- forest counting ---------------------------------------------------------


def test_forest_recurrence_matches_enumeration():
    for l in range(1, 7):
        for r in range(l):
            assert count_forests(l, r).value == count_forests_enumerated(l, r)


def test_forest_known_row():
    assert [count_forests(4, r).value for r in range(4)] == [1, 6, 15, 16]


def test_forest_top_count_is_cayley():
    for l in range(1, 8):
        assert count_forests(l, l - 1).value == cayley(l)


def test_enumerate_forests_consistent():
    for l in range(1, 6):
        for r in range(l):
            forests = list(enumerate_forests(l, r))
            assert len(forests) == count_forests(l, r).value
            assert len(set(forests)) == len(forests)


def test_rooted_forest_closed_form_exponent():
    # C(n,m) * m * n^(n-m-1) matches enumeration weighted by root choices;
    # the alternative exponent n-m+1 does not
    for n in range(2, 7):
        for m in range(1, n + 1):
            enum = rooted_forest_count_enumerated(n, m)
            assert rooted_forest_count_closed_form(n, m) == enum
            wrong = math.comb(n, m) * m * n ** (n - m + 1)
            if n > 1:
                assert wrong != enum


# --- extension bound f -------------------------------------------------------


def test_f_piecewise_domain():
    with pytest.raises(ValueError):
        f_piecewise(4, 4, 4)  # r > l-1
    with pytest.raises(ValueError):
        f_piecewise(4, 5, 0)  # l >= k
    with pytest.raises(ZeroDivisionError):
        f_piecewise(4, 4, 3)  # (k-l)^(k-r-2) = 0^(-1): undefined
    assert f_piecewise(4, 4, 1).is_zero()  # 0^1 = 0 is fine


def test_f_piecewise_branches():
    # r < l/2: 2^r tail
    v = f_piecewise(10, 6, 2)
    expect = 2**2 * 7**3 * 4**6
    assert v.to_float() == pytest.approx(expect, rel=1e-12)
    # l/2 <= r < l(1-1/e): 3^(2r-l) 2^(2l-3r) tail
    v = f_piecewise(10, 6, 3)
    expect = 3**0 * 2**3 * 7**3 * 4**5
    assert v.to_float() == pytest.approx(expect, rel=1e-12)
    # r >= l(1-1/e): (l/(l-r))^(l-r) tail
    v = f_piecewise(10, 6, 5)
    expect = 6**1 * 7**3 * 4**3
    assert v.to_float() == pytest.approx(expect, rel=1e-12)


def test_f_dominates_exact_extension_count():
    # f bounds the number of trees inducing a fixed forest on a fixed l-set
    for k in range(3, 7):
        for l in range(2, k):
            for r in range(l):
                f = f_piecewise(k, l, r).to_float()
                worst = max(
                    count_trees_extending_forest(k, forest, l)
                    for forest in enumerate_forests(l, r)
                )
                assert worst <= f * (1 + 1e-12)


# --- overlapping tree pairs --------------------------------------------------


def _overlap_oracle(k: int, l: int):
    """Literal double loop over pairs of trees in the two families."""
    shift = k - l
    total = [0] * l
    matching = [0] * l
    trees = list(enumerate_labeled_trees(k))
    restr_a = [
        frozenset((u - shift, v - shift) for (u, v) in t if u >= shift) for t in trees
    ]
    restr_b = [frozenset((u, v) for (u, v) in t if v < l) for t in trees]
    for ra in restr_a:
        for rb in restr_b:
            r = len(ra & rb)
            total[r] += 1
            if ra == rb:
                matching[r] += 1
    return total, matching


def test_overlap_spec_examples():
    t = count_overlap_pairs(3, 2)
    assert t.pairs_total[0] == 5
    assert t.pairs_total[1] == 4
    assert count_overlap_pairs(2, 2).pairs_total[1] == 1


def test_overlap_matches_double_loop_oracle():
    for k in range(2, 5):
        for l in range(2, k + 1):
            table = count_overlap_pairs(k, l)
            total, matching = _overlap_oracle(k, l)
            assert list(table.pairs_total) == total
            assert list(table.pairs_matching) == matching


def test_overlap_partition_small():
    for k in range(2, 6):
        for l in range(2, k + 1):
            assert count_overlap_pairs(k, l).total() == cayley(k) ** 2


def test_matching_pairs_from_extension_counts():
    # sum over r-edge forests F of (#extensions of F)^2 = matching pair count
    for k in range(3, 6):
        for l in range(2, k):
            table = count_overlap_pairs(k, l)
            for r in range(l):
                s = sum(
                    count_trees_extending_forest(k, forest, l) ** 2
                    for forest in enumerate_forests(l, r)
                )
                assert s == table.pairs_matching[r]


def test_bounds_hold_small_grid():
    for k in range(2, 6):
        for l in range(2, k + 1):
            report = validate_overlap_bounds(k, l)
            assert report.all_ok, f"violation at k={k}, l={l}"


def test_bound_row_shapes():
    report = validate_overlap_bounds(4, 3)
    assert len(report.rows) == 3
    for row in report.rows:
        assert row.n_matching <= row.n_total <= row.bound_square
        assert len(row.product_bound_checks) == 3
