"""Exact counting of labeled trees, forests, and overlapping tree pairs.

Everything here is integer-exact and small-scale by design; these counts are
the ground truth against which the analytic bounds in `moments` are checked.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from .logreal import LogReal

MAX_TREE_K = 9  # k^(k-2) trees; 9^7 ~ 4.8M is the practical ceiling
MAX_OVERLAP_K = 6  # (k^(k-2))^2 pairs; 1296^2 ~ 1.7M at k=6
MAX_FOREST_L = 9

ONE_MINUS_INV_E = 1.0 - 1.0 / math.e


def cayley(k: int) -> int:
    """Number of labeled trees on k vertices, with the k^(k-2)=1 convention at k<=2."""
    if k < 1:
        raise ValueError("k must be positive")
    return 1 if k <= 2 else k ** (k - 2)


def _decode_prufer(seq: tuple[int, ...], k: int) -> tuple[tuple[int, int], ...]:
    deg = [1] * k
    for x in seq:
        deg[x] += 1
    edges = []
    ptr = 0
    leaf = -1
    for v in seq:
        if leaf == -1:
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
        edges.append((leaf, v) if leaf < v else (v, leaf))
        deg[leaf] -= 1
        deg[v] -= 1
        if deg[v] == 1 and v < ptr:
            leaf = v
        else:
            leaf = -1
    # two vertices of degree 1 remain
    u = leaf
    if u == -1:
        while deg[ptr] != 1:
            ptr += 1
        u = ptr
    w = -1
    for x in range(u + 1, k):
        if deg[x] == 1:
            w = x
    edges.append((u, w))
    edges.sort()
    return tuple(edges)


def enumerate_labeled_trees(k: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Yield each labeled tree on {0..k-1} exactly once, as a sorted edge tuple."""
    if not (1 <= k <= MAX_TREE_K):
        raise ValueError(f"k must be in [1, {MAX_TREE_K}], got {k}")
    if k == 1:
        yield ()
        return
    if k == 2:
        yield ((0, 1),)
        return
    for seq in itertools.product(range(k), repeat=k - 2):
        yield _decode_prufer(seq, k)


@dataclass(frozen=True)
class ForestCount:
    l: int
    r: int
    value: int


def _acyclic(edges: Iterable[tuple[int, int]], l: int) -> bool:
    parent = list(range(l))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b) in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def count_forests_enumerated(l: int, r: int) -> int:
    """phi(l, r) by filtering all r-subsets of the edges of K_l; oracle path, l <= 8."""
    if l > 8:
        raise ValueError("enumeration path limited to l <= 8")
    if not (0 <= r <= max(l - 1, 0)):
        raise ValueError(f"need 0 <= r <= l-1, got l={l}, r={r}")
    all_edges = list(itertools.combinations(range(l), 2))
    return sum(1 for sub in itertools.combinations(all_edges, r) if _acyclic(sub, l))


@lru_cache(maxsize=None)
def _phi(l: int, r: int) -> int:
    # forests on [l] with r edges, by recursing on the component of vertex 0:
    # choose its size j, a tree on it, and a forest on the rest
    if r < 0 or r > l - 1 and l > 0:
        return 0
    if l == 0:
        return 1 if r == 0 else 0
    total = 0
    for j in range(1, l + 1):
        if r - (j - 1) < 0:
            continue
        total += math.comb(l - 1, j - 1) * cayley(j) * _phi(l - j, r - j + 1)
    return total


def count_forests(l: int, r: int) -> ForestCount:
    """Exact phi(l, r) for l <= 9 (component recurrence, validated against enumeration)."""
    if not (1 <= l <= MAX_FOREST_L):
        raise ValueError(f"l must be in [1, {MAX_FOREST_L}]")
    if not (0 <= r <= l - 1):
        raise ValueError(f"need 0 <= r <= l-1, got l={l}, r={r}")
    return ForestCount(l, r, _phi(l, r))


def enumerate_forests(l: int, r: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All forests on [l] with r edges (l <= 8)."""
    if l > 8:
        raise ValueError("enumeration limited to l <= 8")
    all_edges = list(itertools.combinations(range(l), 2))
    for sub in itertools.combinations(all_edges, r):
        if _acyclic(sub, l):
            yield sub


def rooted_forest_count_closed_form(n: int, m: int) -> int:
    """C(n,m) * m * n^(n-m-1): rooted forests on [n] with m trees.

    The exponent here is n-m-1; the n-m+1 variant is checked (and refuted)
    against enumeration in the validation report.
    """
    if not (1 <= m <= n):
        raise ValueError("need 1 <= m <= n")
    return math.comb(n, m) * m * n ** (n - m - 1)


def rooted_forest_count_enumerated(l: int, m: int) -> int:
    """Rooted forests on [l] with m trees: each forest weighted by the product
    of its component sizes (one root choice per tree)."""
    r = l - m
    total = 0
    for forest in enumerate_forests(l, r):
        parent = list(range(l))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (a, b) in forest:
            parent[find(a)] = find(b)
        sizes: dict[int, int] = {}
        for v in range(l):
            root = find(v)
            sizes[root] = sizes.get(root, 0) + 1
        w = 1
        for s in sizes.values():
            w *= s
        total += w
    return total


def f_piecewise(k: int, l: int, r: int) -> LogReal:
    """Piecewise upper bound on the number of k-trees inducing a fixed r-edge
    forest on a fixed l-set; branches split at l/2 and l(1-1/e)."""
    if not (0 <= r <= l - 1 < k):
        raise ValueError(f"need 0 <= r <= l-1 < k, got k={k}, l={l}, r={r}")

    def term(base: float, exponent: float) -> LogReal:
        return LogReal.from_float(base).powi(exponent)

    tail = term(l + 1, k - l - 1) * term(k - l, k - r - 2)
    if r < l / 2:
        return term(2, r) * tail
    if r < l * ONE_MINUS_INV_E:
        return term(3, 2 * r - l) * term(2, 2 * l - 3 * r) * tail
    return term(l / (l - r), l - r) * tail


@dataclass(frozen=True)
class OverlapTable:
    """Exact pair counts for trees on [k] and on {k-l .. 2k-l-1} sharing l vertices.

    pairs_total[r]: all pairs whose edge intersection on the shared l-set has
    exactly r edges (partitions all (k^(k-2))^2 pairs). pairs_matching[r]:
    pairs whose restrictions to the shared set are identical with r edges --
    the only pairs that can both appear as induced trees in one graph, and
    the count the analytic bounds apply to.
    """

    k: int
    l: int
    pairs_total: tuple[int, ...]
    pairs_matching: tuple[int, ...]

    def total(self) -> int:
        return sum(self.pairs_total)


def _restriction_masks(k: int, l: int) -> tuple[dict[int, int], dict[int, int]]:
    # Tree family A lives on {0..k-1} with shared vertices {k-l..k-1};
    # family B on {k-l..2k-l-1} with shared vertices {k-l..k-1}, enumerated as
    # trees on {0..k-1} whose first l labels are the shared ones.
    pair_bit = {p: i for i, p in enumerate(itertools.combinations(range(l), 2))}
    hist_a: dict[int, int] = {}
    hist_b: dict[int, int] = {}
    shift = k - l
    for tree in enumerate_labeled_trees(k):
        mask_a = 0
        mask_b = 0
        for (u, v) in tree:
            if u >= shift:
                mask_a |= 1 << pair_bit[(u - shift, v - shift)]
            if v < l:
                mask_b |= 1 << pair_bit[(u, v)]
        hist_a[mask_a] = hist_a.get(mask_a, 0) + 1
        hist_b[mask_b] = hist_b.get(mask_b, 0) + 1
    return hist_a, hist_b


def count_overlap_pairs(k: int, l: int) -> OverlapTable:
    """Exact N(k, l, r) for all r, from one pass over each Prüfer stream.

    Each family's restriction-to-shared-vertices forest is histogrammed, then
    pair counts follow by combining histogram cells; identical to the naive
    double loop over all pairs but without materializing it.
    """
    if not (2 <= l <= k <= MAX_OVERLAP_K):
        raise ValueError(f"need 2 <= l <= k <= {MAX_OVERLAP_K}, got k={k}, l={l}")
    hist_a, hist_b = _restriction_masks(k, l)
    total = [0] * l
    matching = [0] * l
    for m1, c1 in hist_a.items():
        for m2, c2 in hist_b.items():
            r = (m1 & m2).bit_count()
            total[r] += c1 * c2
            if m1 == m2:
                matching[r] += c1 * c2
    return OverlapTable(k, l, tuple(total), tuple(matching))


def count_trees_extending_forest(
    k: int, forest: Iterable[tuple[int, int]], l: int
) -> int:
    """Number of trees on {0..k-1} that induce exactly the given forest on {0..l-1}."""
    if k > 8:
        raise ValueError("limited to k <= 8")
    forest = tuple(tuple(sorted(e)) for e in forest)
    if not _acyclic(forest, l):
        raise ValueError("input is not a forest")
    for (a, b) in forest:
        if not (0 <= a < b < l):
            raise ValueError(f"forest edge ({a},{b}) outside [0, {l})")
    target = frozenset(forest)
    count = 0
    for tree in enumerate_labeled_trees(k):
        restriction = frozenset(e for e in tree if e[1] < l)
        if restriction == target:
            count += 1
    return count


@dataclass(frozen=True)
class BoundRow:
    r: int
    n_total: int
    n_matching: int
    bound_square: int  # (k^(k-2))^2, against n_total
    bound_product: float | None  # k^(k-2) * f, against n_matching; None if f undefined
    bound_forest: float | None  # phi * f^2, against n_matching; None if f undefined
    ok: bool
    product_bound_checks: tuple[tuple[float, bool, bool], ...] = field(default=())
    # (p, applicable, ok) for N*( (1-p)/p )^r <= k^(k-2)(k-l)^(k-2)(l+1)^(k-l-1)


@dataclass(frozen=True)
class BoundReport:
    k: int
    l: int
    rows: tuple[BoundRow, ...]

    @property
    def all_ok(self) -> bool:
        return all(row.ok for row in self.rows)


def validate_overlap_bounds(
    k: int, l: int, ps: tuple[float, ...] = (0.1, 0.3, 0.5)
) -> BoundReport:
    """Check every counting bound the variance proof invokes against exact counts.

    The trivial square bound applies to all pairs; the f-based bounds apply to
    pairs with identical overlap restriction (the ones that can co-occur as
    induced trees). A bound that does not apply (f undefined at l=k for small
    r, or the product bound outside its l <= k - 2(1-p)/p hypothesis) is
    reported as not applicable rather than failed.
    """
    table = count_overlap_pairs(k, l)
    tk = cayley(k)
    rows = []
    for r in range(l):
        n_tot = table.pairs_total[r]
        n_match = table.pairs_matching[r]
        try:
            f = f_piecewise(k, l, r).to_float()
        except ZeroDivisionError:
            f = None
        ok = n_tot <= tk * tk
        b_prod = b_forest = None
        if f is not None:
            phi = count_forests(l, r).value
            b_prod = tk * f
            b_forest = phi * f * f
            ok = ok and n_match <= b_prod * (1 + 1e-12) and n_match <= b_forest * (1 + 1e-12)
        p_checks = []
        for p in ps:
            applicable = l <= k - 2 * (1 - p) / p
            p_ok = True
            if applicable:
                lhs = n_match * ((1 - p) / p) ** r
                rhs = tk * float(k - l) ** (k - 2) * (l + 1) ** (k - l - 1)
                p_ok = lhs <= rhs * (1 + 1e-12)
                ok = ok and p_ok
            p_checks.append((p, applicable, p_ok))
        rows.append(
            BoundRow(r, n_tot, n_match, tk * tk, b_prod, b_forest, ok, tuple(p_checks))
        )
    return BoundReport(k, l, tuple(rows))
