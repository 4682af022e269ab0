"""Breadth-first invariants: neighbourhood profiles, distances, girth,
diameter, the 3-neighbourhood census, and a few named vertex sets of R.

Functions take an :class:`AdGraph` or a bare neighbour table (an integer
array whose row v lists the neighbours of vertex v).  Translation-class
shortcuts are used only for AdGraphs, where the last-coordinate
translations are known automorphisms.
"""

from __future__ import annotations

import csv
import functools
import io
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from adgraphs.adgraph import AdGraph, Side, VertexRef, line, point
from adgraphs.ff import Field
from adgraphs.poly import MultiPoly, parse_poly

GraphLike = Union[AdGraph, np.ndarray]


class GraphDisconnected(Exception):
    def __init__(self, components: int):
        super().__init__(f"graph is disconnected ({components} components)")
        self.components = components


def as_table(graph: GraphLike) -> np.ndarray:
    return graph.table if isinstance(graph, AdGraph) else np.asarray(graph)


def _vid(graph: GraphLike, v) -> int:
    if isinstance(v, VertexRef):
        if not isinstance(graph, AdGraph):
            raise TypeError("VertexRef needs an AdGraph")
        return graph.vertex_id(v)
    return int(v)


def _roots(graph: GraphLike) -> np.ndarray:
    if isinstance(graph, AdGraph):
        return graph.representatives
    return np.arange(as_table(graph).shape[0])


def bfs_levels(table: np.ndarray, origin: int, radius: int | None = None) -> list[np.ndarray]:
    """Sorted id arrays of the vertices at distance 0, 1, 2, ... from origin."""
    seen = np.zeros(table.shape[0], dtype=bool)
    seen[origin] = True
    frontier = np.array([origin], dtype=np.int64)
    levels = [frontier]
    while radius is None or len(levels) <= radius:
        cand = np.unique(table[frontier].ravel())
        cand = cand[~seen[cand]]
        if not cand.size:
            break
        seen[cand] = True
        levels.append(cand.astype(np.int64))
        frontier = cand
    return levels


@dataclass(frozen=True)
class NeighborhoodProfile:
    origin: int
    radius: int
    level_sizes: list[int]
    level_sets: list[np.ndarray] | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {"origin": self.origin, "radius": self.radius, "levels": list(self.level_sizes)}


def bfs_profile(graph: GraphLike, v, radius: int, keep_sets: bool = False) -> NeighborhoodProfile:
    """Sizes r_1..r_radius of the distance levels around v (levels past the
    eccentricity have size 0)."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    origin = _vid(graph, v)
    levels = bfs_levels(as_table(graph), origin, radius)
    sizes = [len(lv) for lv in levels[1:]] + [0] * (radius + 1 - len(levels))
    sets = None
    if keep_sets:
        sets = levels[1:] + [np.empty(0, dtype=np.int64)] * (radius + 1 - len(levels))
    return NeighborhoodProfile(origin, radius, sizes, sets)


def level_set(graph: AdGraph, v, k: int) -> frozenset[VertexRef]:
    """The vertices at distance exactly k from v, as VertexRefs."""
    levels = bfs_levels(graph.table, _vid(graph, v), k)
    if len(levels) <= k:
        return frozenset()
    return frozenset(graph.vertex_ref(int(u)) for u in levels[k])


def distance(graph: GraphLike, u, v) -> int | None:
    """Shortest-path length by bidirectional BFS; None if unreachable."""
    table = as_table(graph)
    a, b = _vid(graph, u), _vid(graph, v)
    if a == b:
        return 0
    n = table.shape[0]
    dist = [np.full(n, -1, dtype=np.int64), np.full(n, -1, dtype=np.int64)]
    dist[0][a] = 0
    dist[1][b] = 0
    fronts = [np.array([a]), np.array([b])]
    depth = [0, 0]
    while fronts[0].size and fronts[1].size:
        s = 0 if fronts[0].size <= fronts[1].size else 1
        cand = np.unique(table[fronts[s]].ravel())
        cand = cand[dist[s][cand] < 0]
        depth[s] += 1
        dist[s][cand] = depth[s]
        other = dist[1 - s][cand]
        met = other[other >= 0]
        if met.size:
            return int(depth[s] + met.min())
        fronts[s] = cand
    return None


def eccentricity(graph: GraphLike, v) -> int:
    table = as_table(graph)
    levels = bfs_levels(table, _vid(graph, v))
    reached = sum(len(lv) for lv in levels)
    if reached != table.shape[0]:
        raise GraphDisconnected(count_components(table))
    return len(levels) - 1


def count_components(table: np.ndarray) -> int:
    n = table.shape[0]
    seen = np.zeros(n, dtype=bool)
    comps = 0
    for v in range(n):
        if not seen[v]:
            comps += 1
            for lv in bfs_levels(table, v):
                seen[lv] = True
    return comps


def diameter(graph: GraphLike) -> int:
    """Maximum eccentricity.  For AdGraphs one BFS per translation class."""
    return max(eccentricity(graph, int(r)) for r in _roots(graph))


def _shortest_cycle_from(table: np.ndarray, root: int, bound: int) -> int | None:
    """Length of a short closed walk found by BFS from root, below bound."""
    n = table.shape[0]
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    dist[root] = 0
    frontier = np.array([root])
    k = 0
    while frontier.size and 2 * k + 1 < bound:
        nb = table[frontier]
        src = np.repeat(frontier, nb.shape[1])
        nb = nb.ravel()
        keep = nb != parent[src]
        nb, src = nb[keep], src[keep]
        if np.any(dist[nb] == k):
            return 2 * k + 1
        new = nb[dist[nb] < 0]
        uniq, counts = np.unique(new, return_counts=True)
        if np.any(counts > 1):
            return 2 * k + 2 if 2 * k + 2 < bound else None
        order = np.flatnonzero(dist[nb] < 0)
        dist[uniq] = k + 1
        parent[nb[order]] = src[order]
        frontier = uniq
        k += 1
    return None


def girth(graph: GraphLike) -> int | None:
    """Exact girth, or None for an acyclic graph.

    Runs a BFS from every root truncated at half the best cycle found so far;
    the minimum over roots of the first cycle detected is the girth.
    """
    table = as_table(graph)
    best = table.shape[0] + 1
    for r in _roots(graph):
        c = _shortest_cycle_from(table, int(r), best)
        if c is not None and c < best:
            best = c
    return None if best > table.shape[0] else best


def has_4cycle(graph: GraphLike) -> bool:
    """True iff two distinct vertices have at least two common neighbours."""
    table = as_table(graph)
    roots = _roots(graph)
    for start in range(0, len(roots), 256):
        us = roots[start:start + 256]
        walks = table[table[us]].reshape(len(us), -1)
        walks = np.where(walks == us[:, None], -1, walks)
        walks.sort(axis=1)
        dup = (walks[:, 1:] == walks[:, :-1]) & (walks[:, 1:] >= 0)
        if dup.any():
            return True
    return False


# -- 3-neighbourhood census ---------------------------------------------------------

ClassKey = tuple[int, int, int]


def r3_of(table: np.ndarray, v: int) -> int:
    levels = bfs_levels(table, v, 3)
    return len(levels[3]) if len(levels) > 3 else 0


def r3_all(graph: GraphLike) -> np.ndarray:
    """r_3 of every vertex (computed once per translation class for AdGraphs)."""
    table = as_table(graph)
    if isinstance(graph, AdGraph):
        reps = graph.representatives
        vals = np.array([r3_of(table, int(r)) for r in reps], dtype=np.int64)
        return np.repeat(vals, graph.q)
    return np.array([r3_of(table, v) for v in range(table.shape[0])], dtype=np.int64)


@dataclass(frozen=True)
class R3Census:
    """r_3 per class (side, A, B), represented by the vertex with third coordinate 0."""

    q: int
    values: dict[ClassKey, int]

    def ranked(self) -> list[tuple[ClassKey, int]]:
        return sorted(self.values.items(), key=lambda kv: (-kv[1], kv[0]))

    @property
    def argmax(self) -> tuple[ClassKey, int]:
        return self.ranked()[0]

    @property
    def second(self) -> tuple[ClassKey, int]:
        """Best class whose value is strictly below the maximum."""
        top = self.ranked()[0][1]
        return next(kv for kv in self.ranked() if kv[1] < top)

    def max_is_unique(self) -> bool:
        r = self.ranked()
        return len(r) < 2 or r[0][1] > r[1][1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["side", "A", "B", "r3"])
        for (side, a, b), v in sorted(self.values.items()):
            w.writerow([Side(side).name.lower(), a, b, v])
        return buf.getvalue()


def r3_census(graph: AdGraph, spot_checks: int = 8, rng: np.random.Generator | None = None) -> R3Census:
    """r_3 of every class [A,B,0] and (A,B,0).

    ``spot_checks`` sampled classes are re-measured at a random nonzero third
    coordinate; a mismatch means the translation reduction is invalid and
    raises AssertionError.
    """
    if graph.dim != 3:
        raise ValueError("the r_3 census is defined for three-dimensional graphs")
    table, q = graph.table, graph.q
    values: dict[ClassKey, int] = {}
    for r in graph.representatives:
        ref = graph.vertex_ref(int(r))
        values[(int(ref.side), ref.coords[0], ref.coords[1])] = r3_of(table, int(r))
    if spot_checks and q > 1:
        rng = rng or np.random.default_rng(0)
        reps = graph.representatives
        for idx in rng.choice(len(reps), size=min(spot_checks, len(reps)), replace=False):
            c = int(rng.integers(1, q))
            rep = int(reps[idx])
            ref = graph.vertex_ref(rep)
            if r3_of(table, rep + c) != values[(int(ref.side), ref.coords[0], ref.coords[1])]:
                raise AssertionError(f"r_3 differs along the translation class of {ref}")
    return R3Census(q, values)


def census_from_csv(text: str) -> dict[ClassKey, int]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return {(Side[r["side"].upper()].value, int(r["A"]), int(r["B"])): int(r["r3"]) for r in rows}


# -- closed-form descriptions for R -------------------------------------------------

P_AB_TEXT = ("A^2*(A*b-B-c)*a^4 + A*(A-2*B+1)*(A*b-B-c)*a^3 - B*(2*A-B+1)*(A*b-B-c)*a^2"
             " + (-A*c^2*b^2 + A*B^2*b - A*c^2*b - A*C*b^2 - B^3 - B^2*c)*a"
             " + c*b*(c*b+c+b)*(c+B)")
_P_VARS = ("A", "B", "b", "c", "a", "C")


@functools.lru_cache(maxsize=None)
def _p_ab_poly(field: Field) -> MultiPoly:
    return parse_poly(P_AB_TEXT, field, _P_VARS)


def _require_rigid(graph: AdGraph) -> None:
    from adgraphs.adgraph import rigid_graph

    ref = rigid_graph(graph.field)
    if graph.dim != 3 or graph.f != ref.f or graph.g_kind != ref.g_kind:
        raise ValueError("operation is defined for R only")


def p_ab_eval(field: Field, A, B, b, c, a, c_symbol: str = "lower"):
    """The numerator polynomial of the third coordinate of 3-paths from
    [A, B, 0], evaluated (vectorised) at the given arguments.

    ``c_symbol`` selects how the capital C in the linear coefficient is read:
    ``"lower"`` (as c, the default and the reading that matches actual
    paths) or ``"zero"`` (as the start line's third coordinate, 0).
    """
    P = _p_ab_poly(field)
    if c_symbol == "lower":
        C = c
    elif c_symbol == "zero":
        C = np.zeros_like(np.asarray(c))
    else:
        raise ValueError(f"unknown c_symbol {c_symbol!r}")
    return P.eval(A, B, b, c, a, C)


def three_path_endpoint(graph: AdGraph, A: int, B: int, a: int, b: int, c: int) -> VertexRef:
    """Endpoint of [A,B,0] ~ (a,*,*) ~ [x,*,*] ~ (b,c,*) built with neighbor()."""
    F = graph.field
    x = F.div(F.add(F.sub(c, F.mul(A, a)), B), F.sub(b, a))
    p1 = graph.neighbor(line(A, B, 0), a)
    l2 = graph.neighbor(p1, x)
    return graph.neighbor(l2, b)


def r3_param_set(graph: AdGraph, variant: str, A: int = 0, B: int = 0,
                 c_symbol: str = "lower") -> frozenset[VertexRef]:
    """The point set {(b, c, value(a, b, c))} parameterising R^3([A,B,0]).

    ``variant``: ``"general"`` (uses A, B), ``"zero_zero"`` or ``"zero_one"``.
    """
    _require_rigid(graph)
    F, q = graph.field, graph.q
    a, b, c = (x.ravel() for x in np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij"))
    k = F.from_int
    if variant == "general":
        excluded = F.sub(F.mul(A, b), B)
        keep = (a != b) & (c != excluded)
        a, b, c = a[keep], b[keep], c[keep]
        num = p_ab_eval(F, A, B, b, c, a, c_symbol)
        third = F.div(num, F.sub(b, a))
    elif variant == "zero_zero":
        keep = (a != b) & (c != 0)
        a, b, c = a[keep], b[keep], c[keep]
        bc = F.mul(b, c)
        num = F.mul(F.mul(b, F.mul(c, c)), F.add(F.add(bc, b), c))
        third = F.div(num, F.sub(b, a))
    elif variant == "zero_one":
        keep = (a != b) & (c != F.neg(k(1)))
        a, b, c = a[keep], b[keep], c[keep]
        bc = F.mul(b, c)
        c1 = F.add(c, k(1))
        num = F.mul(F.sub(F.mul(bc, F.add(F.add(bc, c), b)), b), c1)
        third = F.add(F.div(num, F.sub(b, a)), c1)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    ids = np.unique(graph.ids_of(0, [b, c, third]))
    return frozenset(graph.vertex_ref(int(v)) for v in ids)


# -- named vertex sets ------------------------------------------------------------------

def special_set(graph: AdGraph, kind: str, param: int) -> frozenset[VertexRef]:
    """L_a, P_a (direct), F_r, N_r, I_b (by BFS and set operations).

    F_r: neighbours of [0,0,-r] except (0,0,r).  N_r: common 2-neighbourhood of
    F_r.  I_b: common 2-neighbourhood of [0,1,0] and [0,0,b].
    """
    if graph.dim != 3:
        raise ValueError("named sets live in three-dimensional graphs")
    F, q = graph.field, graph.q
    if kind == "L":
        return frozenset(line(0, param, r) for r in range(q))
    if kind == "P":
        return frozenset(point(0, param, r) for r in range(q))
    if kind == "F":
        return frozenset(graph.neighbors(line(0, 0, F.neg(param)))) - {point(0, 0, param)}
    if kind == "N":
        sets = [level_set(graph, v, 2) for v in special_set(graph, "F", param)]
        return frozenset.intersection(*sets)
    if kind == "I":
        one = F.from_int(1)
        return level_set(graph, line(0, one, 0), 2) & level_set(graph, line(0, 0, param), 2)
    raise ValueError(f"unknown set kind {kind!r}")


def special_set_closed_form(field: Field, kind: str, param: int) -> frozenset[VertexRef]:
    """Closed forms for N_r = {(0,a,r)} and I_b = {[x, b+1, b] : x != 0}."""
    F, q = field, field.q
    if kind == "N":
        return frozenset(point(0, a, param) for a in range(q))
    if kind == "I":
        return frozenset(line(x, F.add(param, F.from_int(1)), param) for x in range(1, q))
    if kind == "F":
        return frozenset(point(x, 0, param) for x in range(1, q))
    raise ValueError(f"no closed form for {kind!r}")


def ids_to_refs(graph: AdGraph, ids: Iterable[int]) -> frozenset[VertexRef]:
    return frozenset(graph.vertex_ref(int(v)) for v in ids)
