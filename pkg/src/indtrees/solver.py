"""Maximum induced subtree solvers.

Three tiers: an exhaustive subset scan (oracle, n <= 20), a branch-and-bound
search over connected induced trees, and a randomized greedy lower bound for
sizes past the exact range.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph, VertexSet, induced_subgraph, is_tree
from .rng import Seed

DEFAULT_BUDGET = 10**8


@dataclass(frozen=True)
class SolveResult:
    size: int
    witness: VertexSet
    nodes_explored: int
    optimal: bool


def _connected_in(g: Graph, mask: int) -> bool:
    # connectivity of the sub-bitset without building the induced Graph
    if mask == 0:
        return False
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= g.adj[low.bit_length() - 1]
            m ^= low
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def max_induced_tree_bruteforce(g: Graph) -> SolveResult:
    """Scan all 2^n subsets; exact, refuses n > 20."""
    n = g.n
    if n > 20:
        raise ValueError(f"brute force limited to n <= 20, got {n}")
    if n == 0:
        return SolveResult(0, VertexSet(0), 0, True)
    adj = g.adj
    # edges[S] built incrementally from S minus its lowest bit
    edges = bytearray(1 << n) if n <= 14 else [0] * (1 << n)
    best_size = 1
    best_mask = 1
    for s in range(1, 1 << n):
        low = s & -s
        rest = s ^ low
        e = edges[rest] + (adj[low.bit_length() - 1] & rest).bit_count()
        edges[s] = e
        size = s.bit_count()
        if e == size - 1 and size > best_size and _connected_in(g, s):
            best_size = size
            best_mask = s
    return SolveResult(best_size, VertexSet(best_mask), (1 << n) - 1, True)


def max_induced_tree(g: Graph, budget: int = DEFAULT_BUDGET) -> SolveResult:
    """Branch and bound over connected induced trees grown one vertex at a time.

    A vertex is addable iff it has exactly one neighbor inside the current
    tree; two or more would close an induced cycle, and that count only grows
    as the tree does, so such vertices are dead permanently. Each tree is
    counted once, rooted at its minimum-index vertex. Budget counts branch
    expansions; exhaustion returns the incumbent with optimal=False.
    """
    n = g.n
    if n == 0:
        return SolveResult(0, VertexSet(0), 0, True)
    adj = g.adj

    best_size = 1
    best_mask = 1
    nodes = 0
    exhausted = False

    def search(tree: int, excluded: int, universe: int, size: int) -> None:
        # universe: vertices still allowed at all (above root, not dead)
        nonlocal best_size, best_mask, nodes, exhausted
        if exhausted:
            return
        stack = [(tree, excluded, universe, size)]
        while stack:
            tree, excluded, universe, size = stack.pop()
            if size > best_size:
                best_size = size
                best_mask = tree
            alive = universe & ~excluded & ~tree
            # drop vertices with >= 2 neighbors in the tree: never addable again
            frontier = 0
            pool = 0
            m = alive
            while m:
                low = m & -m
                v = low.bit_length() - 1
                c = (adj[v] & tree).bit_count()
                if c <= 1:
                    pool |= low
                    if c == 1:
                        frontier |= low
                m ^= low
            if size + pool.bit_count() <= best_size or not frontier:
                continue
            nodes += 1
            if nodes >= budget:
                exhausted = True
                return
            v = frontier & -frontier
            # branch: exclude v, then include v (include explored first via LIFO)
            stack.append((tree, excluded | v, universe & ~v, size))
            stack.append((tree | v, excluded, universe, size + 1))

    for root in range(n):
        if exhausted:
            break
        universe = ((1 << n) - 1) >> root << root  # root and above
        if n - root <= best_size:
            break
        search(1 << root, 0, universe, 1)

    return SolveResult(best_size, VertexSet(best_mask), nodes, not exhausted)


def greedy_tree_lower_bound(g: Graph, restarts: int, seed: Seed) -> SolveResult:
    """Randomized greedy extension with restarts; a valid lower bound, never optimal."""
    n = g.n
    if n == 0:
        return SolveResult(0, VertexSet(0), 0, False)
    adj = g.adj
    rng = seed.generator()
    best_size = 1
    best_mask = 1
    for _ in range(max(1, restarts)):
        root = int(rng.integers(n))
        tree = 1 << root
        size = 1
        alive = ((1 << n) - 1) & ~tree
        while True:
            frontier = []
            m = alive
            while m:
                low = m & -m
                v = low.bit_length() - 1
                c = (adj[v] & tree).bit_count()
                if c > 1:
                    alive ^= low  # dead for the rest of this run
                elif c == 1:
                    frontier.append(v)
                m ^= low
            if not frontier:
                break
            v = frontier[int(rng.integers(len(frontier)))]
            tree |= 1 << v
            alive &= ~(1 << v)
            size += 1
        if size > best_size:
            best_size = size
            best_mask = tree
    return SolveResult(best_size, VertexSet(best_mask), 0, False)


def check_witness(g: Graph, result: SolveResult) -> bool:
    sub = induced_subgraph(g, result.witness)
    return sub.n == result.size and is_tree(sub)
