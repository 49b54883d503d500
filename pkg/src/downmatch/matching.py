"""Disjoint-set matchings between and within down-sets.

The central routine, :func:`weighted_disjoint_matching`, takes two monotone
(decreasing) weight functions f, g on 2^[n] with |f| <= |g| and produces
p(X, Y) >= 0 supported on disjoint pairs with row sums f(X) and column sums
at most g(Y).  It works by induction on n: fold element 1 away, solve the
smaller problem, view that solution as a bipartite multigraph, and re-insert
element 1 by orienting edges under per-vertex out-degree quotas
(:func:`orient_quotas`).

Matchings between down-sets (:func:`matched_into`) are read off the
characteristic-function case.  :func:`self_matching` pairs up a single
down-set by induction on its largest element.
"""

from __future__ import annotations

import heapq
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable, Mapping

from .family import (
    AmbientSizeError,
    Family,
    NotDownSetError,
    WeightFn,
    elements,
    fmt_set,
    is_down_set,
    iter_bits,
    popcount,
    same_n,
)

Vertex = tuple[str, int]
Edge = tuple[Vertex, Vertex]


class QuotaError(ValueError):
    """A quota assignment violates 2*u_v <= d_v."""


class MatchingInputError(ValueError):
    pass


def left(x: int) -> Vertex:
    return ("a", x)


def right(y: int) -> Vertex:
    return ("b", y)


class BipartiteMultigraph:
    """Bipartite multigraph between copies ``("a", x)`` and ``("b", y)``.

    ``edges`` maps (left label, right label) to a positive multiplicity.
    """

    def __init__(self, edges: Mapping[tuple[int, int], int]):
        self.edges: dict[tuple[int, int], int] = {}
        for (x, y), mult in edges.items():
            if mult < 0:
                raise ValueError(f"negative multiplicity on edge {(x, y)}")
            if mult:
                self.edges[(x, y)] = mult

    def degrees(self) -> Counter:
        deg: Counter = Counter()
        for (x, y), mult in self.edges.items():
            deg[left(x)] += mult
            deg[right(y)] += mult
        return deg

    def num_edges(self) -> int:
        return sum(self.edges.values())


@dataclass
class Orientation:
    """Result of :func:`orient_quotas`.

    ``oriented`` counts directed edges (tail, head); ``discarded`` counts
    undirected ones, always written (left vertex, right vertex).
    """

    oriented: Counter = field(default_factory=Counter)
    discarded: Counter = field(default_factory=Counter)

    def out_degrees(self) -> Counter:
        out: Counter = Counter()
        for (tail, _), mult in self.oriented.items():
            out[tail] += mult
        return out


def _undirected(v: Vertex, w: Vertex) -> Edge:
    return (v, w) if v[0] == "a" else (w, v)


def _check_quotas(deg: Mapping[Vertex, int], u: Mapping[Vertex, int], where: str) -> None:
    for v, q in u.items():
        if q < 0 or 2 * q > deg.get(v, 0):
            raise QuotaError(f"{where}: quota {q} at {v} exceeds half its degree {deg.get(v, 0)}")


def orient_quotas(
    graph: BipartiteMultigraph,
    quota: Mapping[Vertex, int],
    check_steps: bool = False,
) -> Orientation:
    """Pick and orient edges so that every vertex v has out-degree quota[v].

    Requires 2*quota[v] <= deg(v).  Degree-1 vertices are peeled first (a
    pendant edge v-w becomes the out-edge w->v when w still owes quota, else
    it is dropped); when none are left every vertex has degree 0 or >= 2, so
    walking from the smallest such vertex closes an (even) cycle, on which
    each vertex with positive quota takes its forward edge.  With
    ``check_steps`` the quota condition is re-checked after every step.
    """
    adj: dict[Vertex, dict[Vertex, int]] = defaultdict(dict)
    for (x, y), mult in sorted(graph.edges.items()):
        adj[left(x)][right(y)] = mult
        adj[right(y)][left(x)] = mult
    deg = {v: sum(nbrs.values()) for v, nbrs in adj.items()}
    _check_quotas(deg, quota, "input")
    u = {v: quota.get(v, 0) for v in adj}
    result = Orientation()

    def drop(v: Vertex, w: Vertex) -> None:
        for a, b in ((v, w), (w, v)):
            if adj[a][b] == 1:
                del adj[a][b]
            else:
                adj[a][b] -= 1
            deg[a] -= 1

    leaves = [v for v, d in deg.items() if d == 1]
    heapq.heapify(leaves)
    remaining = sum(deg.values()) // 2

    while True:
        while leaves:
            v = heapq.heappop(leaves)
            if deg[v] != 1:
                continue
            (w,) = adj[v]
            if u[w] > 0:
                result.oriented[(w, v)] += 1
                u[w] -= 1
            else:
                result.discarded[_undirected(v, w)] += 1
            drop(v, w)
            remaining -= 1
            if deg[w] == 1:
                heapq.heappush(leaves, w)
            if check_steps:
                _check_quotas(deg, u, "after pendant step")
        if remaining == 0:
            break

        cycle = _find_cycle(adj, min(v for v, d in deg.items() if d >= 2))
        k = len(cycle)
        for i, v in enumerate(cycle):
            w = cycle[(i + 1) % k]
            if u[v] > 0:
                result.oriented[(v, w)] += 1
                u[v] -= 1
            else:
                result.discarded[_undirected(v, w)] += 1
            drop(v, w)
        remaining -= k
        for v in cycle:
            if deg[v] == 1:
                heapq.heappush(leaves, v)
        if check_steps:
            _check_quotas(deg, u, "after cycle step")

    leftover = {v: q for v, q in u.items() if q}
    assert not leftover, f"unfilled quotas {leftover}"
    return result


def _find_cycle(adj: Mapping[Vertex, Mapping[Vertex, int]], start: Vertex) -> list[Vertex]:
    """Walk from ``start`` until a vertex repeats; every vertex on the walk
    has degree >= 2, so the walk never stalls.  Stepping straight back is
    allowed only over a parallel edge (a 2-cycle)."""
    path = [start]
    pos = {start: 0}
    prev: Vertex | None = None
    v = start
    while True:
        nbrs = adj[v]
        onward = [w for w in nbrs if w != prev]
        if onward:
            w = min(onward)
        else:
            assert prev is not None and nbrs[prev] >= 2
            w = prev
        if w in pos:
            return path[pos[w]:]
        pos[w] = len(path)
        path.append(w)
        prev, v = v, w


def _require_monotone(w: WeightFn, name: str) -> None:
    bad = w.monotonicity_violation()
    if bad is not None:
        x, i = bad
        raise MatchingInputError(
            f"{name} is not monotone: {name}({fmt_set(x)}) > {name}({fmt_set(x ^ (1 << i))})"
        )


def normalize_g(f: WeightFn, g: WeightFn) -> WeightFn:
    """Lower g, keeping it monotone, until |g| = |f|.

    Sets are visited from largest to smallest; each is lowered towards the
    largest value among its immediate supersets (0 for [n]) until the
    excess is used up.  A set's supersets are final by the time it is
    visited, so monotonicity is preserved, and a full pass could lower g to
    zero, so the excess always runs out.
    """
    same_n_w(f, g)
    excess = g.total() - f.total()
    if excess < 0:
        raise MatchingInputError(f"|f| = {f.total()} exceeds |g| = {g.total()}")
    if excess == 0:
        return g
    n = g.n
    vals = list(g.values)
    for x in sorted(range(1 << n), key=lambda m: (-popcount(m), -m)):
        cap = max((vals[x | (1 << i)] for i in range(n) if not x >> i & 1), default=0)
        dec = min(excess, vals[x] - cap)
        if dec > 0:
            vals[x] -= dec
            excess -= dec
            if excess == 0:
                break
    return WeightFn(n, vals)


def same_n_w(f: WeightFn, g: WeightFn) -> int:
    if f.n != g.n:
        raise AmbientSizeError(f"ambient size mismatch: n={f.n} vs n={g.n}")
    return f.n


@dataclass(frozen=True)
class WeightedMatching:
    """Sparse p: (X, Y) -> positive weight."""

    n: int
    weights: dict[tuple[int, int], int]

    def total(self) -> int:
        return sum(self.weights.values())

    def row_sums(self) -> Counter:
        rows: Counter = Counter()
        for (x, _), w in self.weights.items():
            rows[x] += w
        return rows

    def col_sums(self) -> Counter:
        cols: Counter = Counter()
        for (_, y), w in self.weights.items():
            cols[y] += w
        return cols

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.weights.get(key, 0)


def weighted_disjoint_matching(f: WeightFn, g: WeightFn) -> WeightedMatching:
    """Weighted matching of f into g between disjoint sets.

    >>> from downmatch.family import Family
    >>> one = WeightFn.characteristic(Family.power_set(1))
    >>> sorted(weighted_disjoint_matching(one, one).weights.items())
    [((0, 1), 1), ((1, 0), 1)]
    """
    n = same_n_w(f, g)
    _require_monotone(f, "f")
    _require_monotone(g, "g")
    g = normalize_g(f, g)
    p = _wdm(n, f.values, g.values)
    return WeightedMatching(n, dict(sorted(p.items())))


def _wdm(n: int, fv: tuple[int, ...], gv: tuple[int, ...]) -> Counter:
    if n == 0:
        return Counter({(0, 0): fv[0]} if fv[0] else {})
    half = 1 << (n - 1)
    # fold element 1 (bit 0): reduced index x stands for sets x<<1 and x<<1|1
    f_fold = tuple(fv[2 * x] + fv[2 * x + 1] for x in range(half))
    g_fold = tuple(gv[2 * x] + gv[2 * x + 1] for x in range(half))
    p_fold = _wdm(n - 1, f_fold, g_fold)

    quota: dict[Vertex, int] = {}
    for x in range(half):
        if fv[2 * x + 1]:
            quota[left(x)] = fv[2 * x + 1]
        if gv[2 * x + 1]:
            quota[right(x)] = gv[2 * x + 1]
    orient = orient_quotas(BipartiteMultigraph(p_fold), quota)

    p: Counter = Counter()
    for (tail, head), c in orient.oriented.items():
        if tail[0] == "a":
            p[(tail[1] << 1 | 1, head[1] << 1)] += c
        else:
            p[(head[1] << 1, tail[1] << 1 | 1)] += c
    for (a, b), c in orient.discarded.items():
        p[(a[1] << 1, b[1] << 1)] += c
    return p


def _require_down_set(fam: Family, name: str) -> None:
    if not is_down_set(fam):
        raise NotDownSetError(f"{name} is not a down-set")


def matched_into(F: Family, G: Family) -> dict[int, int]:
    """Injective map phi: F -> G with A and phi(A) disjoint, for down-sets
    with |F| <= |G|."""
    same_n(F, G)
    _require_down_set(F, "F")
    _require_down_set(G, "G")
    if len(F) > len(G):
        raise MatchingInputError(f"|F| = {len(F)} exceeds |G| = {len(G)}")
    p = weighted_disjoint_matching(WeightFn.characteristic(F), WeightFn.characteristic(G))
    phi: dict[int, int] = {}
    for (x, y), w in p.weights.items():
        assert w == 1 and x not in phi
        phi[x] = y
    return phi


@dataclass(frozen=True)
class PairMatching:
    """Unordered pairs of disjoint sets, no set used twice.

    Pairs are stored canonically as (smaller mask, larger mask), sorted.
    """

    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        canon = tuple(sorted((min(a, b), max(a, b)) for a, b in self.pairs))
        object.__setattr__(self, "pairs", canon)
        seen: set[int] = set()
        for a, b in canon:
            if a & b:
                raise ValueError(f"pair ({fmt_set(a)}, {fmt_set(b)}) is not disjoint")
            for x in (a, b):
                if x in seen:
                    raise ValueError(f"set {fmt_set(x)} appears in two pairs")
                seen.add(x)

    def covered(self) -> Family:
        return Family(self.n, (x for pair in self.pairs for x in pair))

    def __len__(self) -> int:
        return len(self.pairs)


def two_coloring(m1: Iterable[tuple[Hashable, Hashable]], m2: Iterable[tuple[Hashable, Hashable]]) -> dict:
    """Proper 2-coloring of the union of two matchings.

    Each component is a path or an even cycle.  Components are colored by
    BFS from their smallest vertex, which gets color 0.
    """
    adj: dict = defaultdict(list)
    for name, m in (("M1", m1), ("M2", m2)):
        used: set = set()
        for a, b in m:
            if a == b or a in used or b in used:
                raise MatchingInputError(f"{name} is not a matching at {(a, b)}")
            used.update((a, b))
            adj[a].append(b)
            adj[b].append(a)
    color: dict = {}
    for root in sorted(adj):
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    raise AssertionError("union of two matchings is not bipartite")
    return color


def _lex_key(mask: int) -> list[int]:
    return elements(mask)


def _smallest_maximal(candidates: int, downset: int, n: int) -> int:
    """Lexicographically smallest member of ``candidates`` with no immediate
    superset in the down-set ``downset`` (i.e. maximal in it)."""
    maximal = [
        x
        for x in iter_bits(candidates)
        if not any(downset >> (x | 1 << i) & 1 for i in range(n) if not x >> i & 1)
    ]
    return min(maximal, key=_lex_key)


@lru_cache(maxsize=None)
def _self_match(n: int, bits: int) -> tuple[tuple[int, int], ...]:
    if n == 0 or bits == 0:
        return ()
    half = 1 << (n - 1)
    top = 1 << (n - 1)  # mask of the singleton {n}
    link = bits >> half
    rest = bits & ((1 << half) - 1)
    link_odd = popcount(link) % 2 == 1
    rest_odd = popcount(rest) % 2 == 1

    spare = None
    if link_odd and not rest_odd:
        # drop a maximal set of rest outside link; it is matched with {n} at the end
        spare = _smallest_maximal(rest & ~link, rest, n - 1)
        rest ^= 1 << spare

    m1 = _self_match(n - 1, link)
    m2 = _self_match(n - 1, rest)
    color = two_coloring(m1, m2)
    # I takes the color-1 endpoint of every m1 pair.  The empty set is the
    # smallest vertex, hence color 0, and so never lands in I.
    indep = set()
    out = []
    for a, b in m1:
        if color[a] == 0:
            a, b = b, a
        indep.add(a)
        out.append((a, b | top))
    for c, d in m2:
        out.append((c | top if c in indep else c, d | top if d in indep else d))
    if link_odd:
        out.append((top, 0 if spare is None else spare))
    return tuple(sorted((min(a, b), max(a, b)) for a, b in out))


def self_matching(A: Family) -> PairMatching:
    """Pair up a down-set into disjoint pairs.

    Covers all of A when |A| is even and all of A except the empty set when
    |A| is odd.
    """
    _require_down_set(A, "A")
    return PairMatching(A.n, _self_match(A.n, A.bits))


@dataclass(frozen=True)
class Violation:
    condition: str
    message: str
    witness: tuple

    def __str__(self) -> str:
        return self.message


def _as_weights(p) -> dict[tuple[int, int], int]:
    return p.weights if isinstance(p, WeightedMatching) else dict(p)


def verify_weighted_matching(p, f: WeightFn, g: WeightFn) -> Violation | None:
    """Re-check disjoint support, row sums equal to f, column sums at most
    g, and |p| = |f|.  Returns the first violation found, or None."""
    same_n_w(f, g)
    weights = _as_weights(p)
    top = 1 << f.n
    for (x, y), w in sorted(weights.items()):
        if not (0 <= x < top and 0 <= y < top):
            return Violation("domain", f"set mask out of range at ({x}, {y})", (x, y))
        if w < 0:
            return Violation("domain", f"negative weight at ({fmt_set(x)},{fmt_set(y)})", (x, y))
        if w and x & y:
            return Violation("disjoint", f"support not disjoint at ({fmt_set(x)},{fmt_set(y)})", (x, y))
    rows: Counter = Counter()
    cols: Counter = Counter()
    for (x, y), w in weights.items():
        rows[x] += w
        cols[y] += w
    for x in range(top):
        if rows[x] != f[x]:
            return Violation("rows", f"row sum at {fmt_set(x)} is {rows[x]}, expected f = {f[x]}", (x,))
    for y in range(top):
        if cols[y] > g[y]:
            return Violation("columns", f"column sum at {fmt_set(y)} is {cols[y]} > g = {g[y]}", (y,))
    total = sum(weights.values())
    if total != f.total():
        return Violation("total", f"|p| = {total} but |f| = {f.total()}", ())
    return None


def verify_pair_matching(pairs: Iterable[tuple[int, int]], A: Family) -> Violation | None:
    """Check that pairs split A (or A minus the empty set, when |A| is odd)
    into disjoint pairs."""
    seen: set[int] = set()
    for a, b in pairs:
        for x in (a, b):
            if x not in A:
                return Violation("membership", f"{fmt_set(x)} is not in the family", (x,))
            if x in seen:
                return Violation("repeat", f"{fmt_set(x)} appears in two pairs", (x,))
            seen.add(x)
        if a & b:
            return Violation("disjoint", f"pair ({fmt_set(a)},{fmt_set(b)}) is not disjoint", (a, b))
    missing = [x for x in A.members if x not in seen]
    if len(A) % 2 == 0:
        if missing:
            return Violation("cover", f"{fmt_set(missing[0])} is unmatched (|A| even)", (missing[0],))
    elif missing != [0]:
        bad = next((x for x in missing if x != 0), None)
        if bad is None:
            return Violation("cover", "odd family but the empty set is matched", (0,))
        return Violation("cover", f"{fmt_set(bad)} is unmatched (|A| odd)", (bad,))
    return None


def verify_injection(phi: Mapping[int, int], F: Family, G: Family) -> Violation | None:
    """Check that phi maps F injectively into G with disjoint pairs."""
    same_n(F, G)
    for x in F.members:
        if x not in phi:
            return Violation("cover", f"{fmt_set(x)} is not matched", (x,))
    used: dict[int, int] = {}
    for x, y in sorted(phi.items()):
        if x not in F:
            return Violation("membership", f"{fmt_set(x)} is not in F", (x,))
        if y not in G:
            return Violation("membership", f"{fmt_set(y)} is not in G", (y,))
        if x & y:
            return Violation("disjoint", f"pair ({fmt_set(x)},{fmt_set(y)}) is not disjoint", (x, y))
        if y in used:
            return Violation("injective", f"{fmt_set(y)} is the image of two sets", (used[y], x))
        used[y] = x
    return None
