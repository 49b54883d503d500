"""Independent ground truth: matching and flow oracles, down-set
enumeration, and exact maxima of pairwise-constrained subfamilies.

Nothing here reuses the construction in :mod:`downmatch.matching`; these
are the routines the constructions are checked against.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable, Hashable, Iterator, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .family import Family, WeightFn, full_bits, is_down_set, popcount, same_n

Relation = Callable[[int, int], bool]

MAX_ENUM_N = 6
MAX_SUBFAMILY = 32
MAX_FLOW_N = 10
MAX_TABLE_N = 5


class CapExceeded(ValueError):
    """An exhaustive routine was asked for more than it supports."""


# -- bipartite matching ------------------------------------------------------


def max_bipartite_matching(adj: Mapping[Hashable, Sequence[Hashable]]) -> tuple[int, dict]:
    """Maximum-cardinality matching by repeated augmenting paths (Kuhn).

    ``adj`` maps each left vertex to its right neighbours.  Returns the
    size and a dict left -> right.
    """
    match_right: dict = {}

    def augment(u, seen: set) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in adj:
        augment(u, set())
    matching = {u: v for v, u in match_right.items()}
    return len(matching), matching


def kneser_bipartite(F: Family, G: Family) -> dict[int, list[int]]:
    """Adjacency of the bipartite disjointness graph KG(F, G), F side."""
    same_n(F, G)
    return {a: [b for b in G.members if not a & b] for a in F.members}


def hall_violator(adj: Mapping[Hashable, Sequence[Hashable]], exhaustive: bool = False) -> list | None:
    """A left subset S with |N(S)| < |S|, or None if the left side can be
    matched completely.

    By default S is the set of left vertices reachable by alternating paths
    from an unmatched one (|N(S)| = |S| - 1).  With ``exhaustive`` the
    smallest violator is found by brute force over subsets (left side of at
    most 25 vertices).
    """
    size, matching = max_bipartite_matching(adj)
    lefts = list(adj)
    if size == len(lefts):
        return None
    if exhaustive:
        if len(lefts) > 25:
            raise CapExceeded(f"exhaustive Hall search needs <= 25 left vertices, got {len(lefts)}")
        for k in range(1, len(lefts) + 1):
            for combo in combinations(lefts, k):
                nbrs = set()
                for u in combo:
                    nbrs.update(adj[u])
                if len(nbrs) < k:
                    return list(combo)
        raise AssertionError("unreachable: a deficient matching implies a Hall violator")
    match_right = {v: u for u, v in matching.items()}
    root = next(u for u in lefts if u not in matching)
    reached = [root]
    seen_left = {root}
    seen_right: set = set()
    k = 0
    while k < len(reached):
        u = reached[k]
        k += 1
        for v in adj[u]:
            if v in seen_right:
                continue
            seen_right.add(v)
            w = match_right[v]  # v is matched, else the matching was not maximum
            if w not in seen_left:
                seen_left.add(w)
                reached.append(w)
    return reached


# -- transportation / flow ---------------------------------------------------


def flow_feasibility(f: WeightFn, g: WeightFn) -> bool:
    """Whether some p >= 0 on disjoint pairs has row sums f and column sums
    at most g, decided by integral max-flow source -> X -> Y -> sink."""
    if f.n != g.n:
        raise ValueError("ambient size mismatch")
    n = f.n
    if n > MAX_FLOW_N:
        raise CapExceeded(f"flow oracle supports n <= {MAX_FLOW_N}")
    total = f.total()
    if total == 0:
        return True
    size = 1 << n
    source, sink = 0, 2 * size + 1
    big = total + 1
    if big >= 2**31:
        raise CapExceeded("weights too large for the int32 flow oracle")
    rows, cols, caps = [], [], []
    for x in range(size):
        if f[x]:
            rows.append(source)
            cols.append(1 + x)
            caps.append(f[x])
            for y in range(size):
                if not x & y and g[y]:
                    rows.append(1 + x)
                    cols.append(1 + size + y)
                    caps.append(big)
    for y in range(size):
        if g[y]:
            rows.append(1 + size + y)
            cols.append(sink)
            caps.append(g[y])
    graph = csr_matrix(
        (np.array(caps, dtype=np.int32), (np.array(rows), np.array(cols))),
        shape=(sink + 1, sink + 1),
    )
    return int(maximum_flow(graph, source, sink).flow_value) == total


# -- down-set enumeration ----------------------------------------------------


@lru_cache(maxsize=None)
def _down_set_table(n: int) -> tuple[int, ...]:
    return tuple(_down_set_stream(n))


def _down_set_stream(n: int) -> Iterator[int]:
    # a down-set over [n] is (deletion R, link L) over [n-1] with L inside R
    if n == 0:
        yield 0
        yield 1
        return
    prev = _down_set_table(n - 1)
    shift = 1 << (n - 1)
    for rest in prev:
        for link in prev:
            if link & ~rest == 0:
                yield rest | link << shift


def down_set_bits(n: int) -> Iterator[int]:
    """Dense bitsets of all down-sets of 2^[n], deterministic order."""
    if not 0 <= n <= MAX_ENUM_N:
        raise CapExceeded(f"down-set enumeration supports n <= {MAX_ENUM_N}, got {n}")
    if n < MAX_ENUM_N:
        return iter(_down_set_table(n))
    return _down_set_stream(n)


def enumerate_down_sets(n: int) -> Iterator[Family]:
    """Every down-set of 2^[n] exactly once, the empty family included."""
    for bits in down_set_bits(n):
        yield Family.from_bits(n, bits)


def down_sets_by_filter(n: int) -> list[int]:
    """Brute-force reference: filter all 2^(2^n) families (n <= 4)."""
    if n > 4:
        raise CapExceeded("the filter reference is limited to n <= 4")
    return [b for b in range(full_bits(n) + 1) if is_down_set(Family.from_bits(n, b))]


# -- pairwise relations and maximum subfamilies ------------------------------


def pair_relation(kind: str, n: int, t: int = 1, s: int = 1) -> Relation:
    """Pairwise relation by name: intersecting, union, iu, t-intersecting,
    s-union, ts."""
    full = (1 << n) - 1
    if kind == "intersecting":
        return lambda a, b: a & b != 0
    if kind == "union":
        return lambda a, b: a | b != full
    if kind == "iu":
        return lambda a, b: a & b != 0 and a | b != full
    if kind == "t-intersecting":
        return lambda a, b: popcount(a & b) >= t
    if kind == "s-union":
        return lambda a, b: popcount(a | b) <= n - s
    if kind == "ts":
        return lambda a, b: popcount(a & b) >= t and popcount(a | b) <= n - s
    raise ValueError(f"unknown relation {kind!r}")


@dataclass
class SearchReport:
    optimum: int
    witness: Family
    nodes_explored: int = 0


def _compat_graph(members: Sequence[int], rel: Relation) -> list[int]:
    k = len(members)
    adj = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            if rel(members[i], members[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def max_subfamily(D: Family, rel: Relation) -> SearchReport:
    """Largest subfamily of D whose members pairwise (and each with itself)
    satisfy ``rel``.

    Branch and bound: a maximum clique search in the compatibility graph with
    greedy-colouring bounds, sets taken in order of decreasing size.
    """
    if len(D) > MAX_SUBFAMILY:
        raise CapExceeded(f"max_subfamily supports |D| <= {MAX_SUBFAMILY}, got {len(D)}")
    members = sorted((x for x in D.members if rel(x, x)), key=lambda x: (-popcount(x), x))
    adj = _compat_graph(members, rel)
    best: list[int] = []
    clique: list[int] = []
    nodes = 0

    def color_order(cand: int) -> tuple[list[int], list[int]]:
        order, bounds = [], []
        uncolored = cand
        color = 0
        while uncolored:
            color += 1
            avail = uncolored
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~adj[v] & ~low
                uncolored &= ~low
                order.append(v)
                bounds.append(color)
        return order, bounds

    def expand(cand: int) -> None:
        nonlocal best, nodes
        nodes += 1
        order, bounds = color_order(cand)
        for k in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[k] <= len(best):
                return
            v = order[k]
            clique.append(v)
            sub = cand & adj[v]
            if sub:
                expand(sub)
            elif len(clique) > len(best):
                best = clique.copy()
            clique.pop()
            cand &= ~(1 << v)

    if members:
        expand((1 << len(members)) - 1)
    witness = Family(D.n, (members[i] for i in best))
    return SearchReport(len(best), witness, nodes)


def max_subfamily_exhaustive(D: Family, rel: Relation) -> SearchReport:
    """Plain scan over all 2^|D| subfamilies (|D| <= 16)."""
    if len(D) > 16:
        raise CapExceeded("exhaustive scan limited to |D| <= 16")
    ms = D.members
    best = 0
    best_sub: tuple[int, ...] = ()
    for sel in range(1 << len(ms)):
        sub = [ms[i] for i in range(len(ms)) if sel >> i & 1]
        if len(sub) <= best:
            continue
        if all(rel(a, b) for k, a in enumerate(sub) for b in sub[k:]):
            best, best_sub = len(sub), tuple(sub)
    return SearchReport(best, Family(D.n, best_sub), 1 << len(ms))


def compatible_subfamilies(D: Family, rel: Relation) -> Iterator[tuple[int, ...]]:
    """Every subfamily of D (the empty one included) whose members pairwise
    satisfy ``rel``, by include/exclude backtracking."""
    members = [x for x in D.members if rel(x, x)]
    adj = _compat_graph(members, rel)
    chosen: list[int] = []

    def walk(i: int, allowed: int) -> Iterator[tuple[int, ...]]:
        if i == len(members):
            yield tuple(chosen)
            return
        if allowed >> i & 1:
            chosen.append(members[i])
            yield from walk(i + 1, allowed & adj[i])
            chosen.pop()
        yield from walk(i + 1, allowed)

    yield from walk(0, (1 << len(members)) - 1)


# -- m(n, t) and m(n, t, s) --------------------------------------------------


@lru_cache(maxsize=None)
def m_value(n: int, t: int, s: int | None = None) -> int:
    """m(n, t) (s is None) or m(n, t, s), by exact search over 2^[n]."""
    if n > MAX_TABLE_N:
        raise CapExceeded(f"m-values are computed for n <= {MAX_TABLE_N}")
    if t < 1 or (s is not None and s < 1):
        raise ValueError("t and s must be >= 1")
    rel = pair_relation("t-intersecting", n, t) if s is None else pair_relation("ts", n, t, s)
    return max_subfamily(Family.power_set(n), rel).optimum


@dataclass
class MTable:
    n_max: int
    t_max: int
    s_max: int
    m_nt: dict[tuple[int, int], int] = field(default_factory=dict)
    m_nts: dict[tuple[int, int, int], int] = field(default_factory=dict)

    def to_tsv(self) -> str:
        lines = ["n\tt\ts\tvalue"]
        for (n, t), v in sorted(self.m_nt.items()):
            lines.append(f"{n}\t{t}\t-\t{v}")
        for (n, t, s), v in sorted(self.m_nts.items()):
            lines.append(f"{n}\t{t}\t{s}\t{v}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": "downmatch.m-table/1",
                "m_nt": [{"n": n, "t": t, "value": v} for (n, t), v in sorted(self.m_nt.items())],
                "m_nts": [
                    {"n": n, "t": t, "s": s, "value": v} for (n, t, s), v in sorted(self.m_nts.items())
                ],
            }
        )


def m_table(n_max: int, t_max: int, s_max: int) -> MTable:
    if n_max > MAX_TABLE_N:
        raise CapExceeded(f"m-table supports n <= {MAX_TABLE_N}, got {n_max}")
    if n_max < 0 or t_max < 1 or s_max < 1:
        raise ValueError("need n >= 0 and t, s >= 1")
    table = MTable(n_max, t_max, s_max)
    for n in range(n_max + 1):
        for t in range(1, t_max + 1):
            table.m_nt[(n, t)] = m_value(n, t)
            for s in range(1, s_max + 1):
                table.m_nts[(n, t, s)] = m_value(n, t, s)
    return table
