"""Automorphisms and isomorphisms of graphs given by neighbour tables.

The group order comes from an individualisation-refinement search.  Along
the first path of the search tree the vertices ``v_1, ..., v_k`` that get
individualised form a base; for each level the orbit of ``v_i`` under the
pointwise stabiliser of ``v_1..v_{i-1}`` is found by searching for an
automorphism that sends ``v_i`` to each candidate in its cell, and
``|Aut| = prod |orbit_i|``.

The initial colouring is the isomorphism invariant r_3 (size of the
distance-3 level).  It deliberately does not split by side: some graphs here
have automorphisms that exchange points and lines.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from adgraphs.adgraph import AdGraph, Side, ThreeVar, TwoVar
from adgraphs.metrics import as_table, bfs_levels, r3_all

GraphLike = Union[AdGraph, np.ndarray]

DEFAULT_NODE_LIMIT = 200_000


class SearchLimitExceeded(RuntimeError):
    """The search tree grew past the node limit; carries what was learned."""

    def __init__(self, nodes: int, generators: list, orbit_sizes: list[int]):
        super().__init__(f"automorphism search exceeded {nodes} nodes")
        self.nodes = nodes
        self.generators = generators
        self.orbit_sizes = orbit_sizes


class VertexMap:
    """A permutation of vertex ids, stored as the array of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = np.asarray(images, dtype=np.int64)
        images.setflags(write=False)
        self.images = images

    def __call__(self, v):
        return self.images[v]

    def __len__(self):
        return len(self.images)

    def __eq__(self, other):
        return isinstance(other, VertexMap) and np.array_equal(self.images, other.images)

    def __hash__(self):
        return hash(self.images.tobytes())

    def __repr__(self):
        moved = int(np.count_nonzero(self.images != np.arange(len(self.images))))
        return f"VertexMap(n={len(self.images)}, moved={moved})"

    def compose(self, other: VertexMap) -> VertexMap:
        """``self ∘ other``: apply other first."""
        return VertexMap(self.images[other.images])

    def inverse(self) -> VertexMap:
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(len(self.images))
        return VertexMap(inv)

    def is_identity(self) -> bool:
        return bool(np.all(self.images == np.arange(len(self.images))))

    def is_bijection(self) -> bool:
        n = len(self.images)
        return bool(np.all((self.images >= 0) & (self.images < n))
                    and len(np.unique(self.images)) == n)

    @classmethod
    def identity(cls, n: int) -> VertexMap:
        return cls(np.arange(n))


# -- known automorphisms -------------------------------------------------------------

def translation(graph: AdGraph, kind: str, *args: int) -> VertexMap:
    """``t3(b)``: add b to p3, subtract it from l3.  ``t2(a, b)``: also shift
    p2 by a and l2 by -a (two-variable graphs only)."""
    F = graph.field
    if graph.dim != 3:
        raise ValueError("translations are defined on three-dimensional graphs")
    if kind == "t3":
        (b,) = args
        a = 0
    elif kind == "t2":
        if not isinstance(graph.g_kind, TwoVar):
            raise ValueError("t2 translations need a two-variable third equation")
        a, b = args
    else:
        raise ValueError(f"unknown translation kind {kind!r}")
    c = graph.coords
    sign = np.where(graph.sides == Side.POINT, 1, -1)
    shift2 = np.where(sign > 0, a, F.neg(a))
    shift3 = np.where(sign > 0, b, F.neg(b))
    new = [c[:, 0], F.add(c[:, 1], shift2), F.add(c[:, 2], shift3)]
    return VertexMap(graph.ids_of(graph.sides, new))


def frobenius_map(graph: AdGraph) -> VertexMap:
    """Coordinate-wise p-th power on both sides."""
    polys = [graph.f, getattr(graph.g_kind, "g", None), getattr(graph.g_kind, "h", None)]
    if not all(p is None or p.coefficients_in_prime_field() for p in polys):
        raise ValueError("graph coefficients are not fixed by the Frobenius map")
    fr = graph.field.frob_table[graph.coords]
    return VertexMap(graph.ids_of(graph.sides, [fr[:, i] for i in range(graph.dim)]))


def _maps_edges(t1: np.ndarray, t2: np.ndarray, images: np.ndarray) -> bool:
    return bool(np.array_equal(np.sort(images[t1], axis=1), np.sort(t2[images], axis=1)))


def is_automorphism(graph: GraphLike, m: VertexMap) -> bool:
    table = as_table(graph)
    if len(m) != table.shape[0] or not m.is_bijection():
        raise ValueError("map is not a bijection of the vertex set")
    return _maps_edges(table, table, m.images)


def is_isomorphism(g1: GraphLike, g2: GraphLike, m: VertexMap) -> bool:
    t1, t2 = as_table(g1), as_table(g2)
    if t1.shape != t2.shape or not m.is_bijection():
        return False
    return _maps_edges(t1, t2, m.images)


def bipartition_preserved(graph: AdGraph, m: VertexMap) -> bool:
    return bool(np.all(graph.sides[m.images] == graph.sides))


def map_order(m: VertexMap) -> int:
    order = 1
    seen = np.zeros(len(m), dtype=bool)
    img = m.images
    for start in range(len(m)):
        if seen[start]:
            continue
        length, v = 0, start
        while not seen[v]:
            seen[v] = True
            v = img[v]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


# -- refinement ------------------------------------------------------------------------

class _Refiner:
    """Colour refinement by multisets of neighbour colours.

    The multiset is summarised by a sum of fixed pseudo-random 64-bit weights;
    the result depends only on the colouring, never on vertex labels, so it
    stays an isomorphism invariant.
    """

    def __init__(self, n: int, seed: int = 0x5EED):
        rng = np.random.default_rng(seed)
        self.weights = rng.integers(0, 2**63, size=n + 1, dtype=np.uint64)

    def refine(self, table: np.ndarray, colors: np.ndarray) -> tuple[np.ndarray, bytes]:
        n = len(colors)
        digest = hashlib.blake2b(digest_size=16)
        k = int(colors.max()) + 1
        while True:
            s = self.weights[colors][table].sum(axis=1, dtype=np.uint64)
            order = np.lexsort((s, colors))
            sc, ss = colors[order], s[order]
            brk = np.empty(n, dtype=bool)
            brk[0] = True
            brk[1:] = (sc[1:] != sc[:-1]) | (ss[1:] != ss[:-1])
            ranks = np.cumsum(brk) - 1
            new = np.empty(n, dtype=np.int64)
            new[order] = ranks
            digest.update(ss[brk].tobytes())
            digest.update(np.diff(np.flatnonzero(np.append(brk, True))).tobytes())
            k_new = int(ranks[-1]) + 1
            colors = new
            if k_new == k:
                return colors, digest.digest()
            k = k_new


def _individualize(colors: np.ndarray, v: int) -> np.ndarray:
    c = 2 * colors + 1
    c[v] -= 1
    return np.unique(c, return_inverse=True)[1].astype(np.int64)


def _target_cell(colors: np.ndarray) -> int | None:
    sizes = np.bincount(colors)
    multi = np.flatnonzero(sizes > 1)
    if not multi.size:
        return None
    # largest cell, lowest colour on ties: keeps first paths short on field-like graphs
    return int(multi[np.argmax(sizes[multi])])


@dataclass
class _Node:
    colors: np.ndarray
    digest: bytes
    cell: int | None = None
    members: np.ndarray | None = None


class _FirstPath:
    """Leftmost root-to-leaf path: always individualise the smallest id."""

    def __init__(self, table: np.ndarray, init: np.ndarray, refiner: _Refiner):
        self.table = table
        self.refiner = refiner
        colors, dig = refiner.refine(table, init)
        self.nodes = [_Node(colors, dig)]
        while True:
            node = self.nodes[-1]
            cell = _target_cell(node.colors)
            if cell is None:
                break
            node.cell = cell
            node.members = np.flatnonzero(node.colors == cell)
            colors, dig = refiner.refine(table, _individualize(node.colors, int(node.members[0])))
            self.nodes.append(_Node(colors, dig))
        self.leaf_inv = np.argsort(self.nodes[-1].colors)

    @property
    def depth(self) -> int:
        return len(self.nodes) - 1

    @property
    def base(self) -> list[int]:
        return [int(n.members[0]) for n in self.nodes[:-1]]


class _Matcher:
    """Depth-first search in a second tree for a leaf equivalent to the first
    path's leaf; ``accept`` verifies the induced vertex map."""

    def __init__(self, path: _FirstPath, table2: np.ndarray,
                 accept: Callable[[np.ndarray], bool], node_limit: int):
        self.path = path
        self.table2 = table2
        self.accept = accept
        self.node_limit = node_limit
        self.nodes = 0

    def child(self, colors: np.ndarray, u: int, level: int) -> np.ndarray | None:
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise SearchLimitExceeded(self.nodes, [], [])
        c, dig = self.path.refiner.refine(self.table2, _individualize(colors, u))
        return c if dig == self.path.nodes[level + 1].digest else None

    def search(self, colors: np.ndarray, level: int,
               orbit_root: Callable[[int], int] | None = None) -> np.ndarray | None:
        """With ``orbit_root`` (automorphism orbits of the second graph), only
        one candidate per orbit is tried at this level."""
        path = self.path
        if level == path.depth:
            # vertex at position k of the first leaf maps to position k here
            images = np.argsort(colors)[path.nodes[-1].colors]
            return images if self.accept(images) else None
        node = path.nodes[level]
        members = np.flatnonzero(colors == node.cell)
        if len(members) != len(node.members):
            return None
        tried: set[int] = set()
        for u in members:
            if orbit_root is not None:
                root = orbit_root(int(u))
                if root in tried:
                    continue
                tried.add(root)
            c = self.child(colors, int(u), level)
            if c is not None:
                found = self.search(c, level + 1)
                if found is not None:
                    return found
        return None


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb

    def absorb(self, images: np.ndarray) -> None:
        for i, j in enumerate(images.tolist()):
            if i != j:
                self.union(i, j)


def initial_colors(graph: GraphLike) -> np.ndarray:
    return np.unique(r3_all(graph), return_inverse=True)[1].astype(np.int64)


# -- group order -------------------------------------------------------------------------

@dataclass
class AutReport:
    order: int
    generators: list[VertexMap]
    orbit_count_points: int
    orbit_count_lines: int
    is_translation_only: bool
    base: list[int] = field(default_factory=list)
    orbit_sizes: list[int] = field(default_factory=list)
    nodes: int = 0

    def to_json(self) -> dict:
        return {
            "order": str(self.order),
            "num_generators": len(self.generators),
            "orbit_counts": {"points": self.orbit_count_points, "lines": self.orbit_count_lines},
            "translation_only": self.is_translation_only,
        }


def _translation_amount(graph: AdGraph, m: VertexMap) -> int | None:
    """b if m equals t3(b), else None."""
    img = graph.vertex_ref(int(m.images[0]))
    if img.side != Side.POINT or img.coords[:2] != (0, 0):
        return None
    b = img.coords[2]
    return b if m == translation(graph, "t3", b) else None


def aut_group(graph: GraphLike, node_limit: int = DEFAULT_NODE_LIMIT) -> AutReport:
    """Exact order of the automorphism group, with generators and orbit data."""
    table = as_table(graph)
    n = table.shape[0]
    refiner = _Refiner(n)
    path = _FirstPath(table, initial_colors(graph), refiner)
    matcher = _Matcher(path, table, lambda im: _maps_edges(table, table, im), node_limit)
    uf = _UnionFind(n)
    gens: list[VertexMap] = []
    orbit_sizes: list[int] = []
    try:
        for level in reversed(range(path.depth)):
            node = path.nodes[level]
            v = int(node.members[0])
            failed: list[int] = []
            for w in node.members[1:].tolist():
                rw = uf.find(w)
                if rw == uf.find(v) or any(uf.find(f) == rw for f in failed):
                    continue
                found = None
                c = matcher.child(node.colors, w, level)
                if c is not None:
                    found = matcher.search(c, level + 1)
                if found is None:
                    failed.append(w)
                else:
                    gens.append(VertexMap(found))
                    uf.absorb(found)
            rv = uf.find(v)
            orbit_sizes.append(sum(1 for w in node.members.tolist() if uf.find(w) == rv))
    except SearchLimitExceeded as exc:
        raise SearchLimitExceeded(matcher.nodes, gens, orbit_sizes[::-1]) from exc

    orbit_sizes.reverse()
    order = math.prod(orbit_sizes)
    roots = [uf.find(v) for v in range(n)]
    if isinstance(graph, AdGraph):
        half = graph.side_size
        pts, lns = len(set(roots[:half])), len(set(roots[half:]))
    else:
        pts, lns = len(set(roots)), 0
    translation_only = (isinstance(graph, AdGraph) and graph.dim == 3
                        and all(_translation_amount(graph, g) is not None for g in gens))
    return AutReport(order, gens, pts, lns, translation_only, path.base, orbit_sizes, matcher.nodes)


def group_elements(generators: Sequence[VertexMap], n: int, limit: int = 10_000) -> list[VertexMap]:
    """All elements of the group generated (closure by BFS); for small groups."""
    ident = VertexMap.identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in generators:
                h = s.compose(g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > limit:
                        raise ValueError(f"group has more than {limit} elements")
        frontier = nxt
    return sorted(seen, key=lambda m: m.images.tobytes())


def permutation_group_order(generators: Sequence[VertexMap], n: int) -> int:
    """Order of the group generated, by the deterministic Schreier-Sims algorithm."""
    ident = np.arange(n, dtype=np.int64)
    base: list[int] = []
    strong: list[list[np.ndarray]] = []  # strong[i]: generators fixing base[:i]
    trans: list[dict[int, np.ndarray]] = []

    def inverse(g: np.ndarray) -> np.ndarray:
        inv = np.empty(n, dtype=np.int64)
        inv[g] = ident
        return inv

    def orbit(level: int) -> dict[int, np.ndarray]:
        b = base[level]
        t = {b: ident}
        queue = [b]
        while queue:
            x = queue.pop()
            for s in strong[level]:
                y = int(s[x])
                if y not in t:
                    t[y] = s[t[x]]
                    queue.append(y)
        return t

    def sift(g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        for level in range(start, len(base)):
            y = int(g[base[level]])
            if y not in trans[level]:
                return g, level
            g = inverse(trans[level][y])[g]
        return g, len(base)

    def extend(level: int, g: np.ndarray) -> None:
        """Add g as a strong generator at ``level`` and restore closure below it."""
        if level == len(base):
            base.append(int(np.flatnonzero(g != ident)[0]))
            strong.append([])
            trans.append({})
        strong[level].append(g)
        trans[level] = orbit(level)
        # Schreier generators of this level must sift through deeper levels
        for x, u in list(trans[level].items()):
            for s in list(strong[level]):
                su = s[u]
                schreier = inverse(trans[level][int(su[base[level]])])[su]
                h, stop = sift(schreier, level + 1)
                if not np.array_equal(h, ident):
                    extend(stop, h)

    for g in generators:
        h, stop = sift(g.images.astype(np.int64))
        if not np.array_equal(h, ident):
            for level in range(stop):
                strong[level].append(h)
            extend(stop, h)
            for level in range(stop):
                trans[level] = orbit(level)
    # generators added at deep levels may enlarge shallower orbits; repeat to a fixpoint
    changed = True
    while changed:
        changed = False
        for level in range(len(base)):
            for x, u in list(trans[level].items()):
                for s in list(strong[level]):
                    su = s[u]
                    h, stop = sift(inverse(trans[level][int(su[base[level]])])[su], level + 1)
                    if not np.array_equal(h, ident):
                        for lv in range(level + 1, stop):
                            strong[lv].append(h)
                        extend(stop, h)
                        changed = True
    return math.prod(len(t) for t in trans)


# -- isomorphism -----------------------------------------------------------------------

def are_isomorphic(g1: GraphLike, g2: GraphLike,
                   node_limit: int = DEFAULT_NODE_LIMIT) -> tuple[bool, VertexMap | None]:
    """Decide isomorphism; on success also return a verified witness g1 -> g2."""
    t1, t2 = as_table(g1), as_table(g2)
    if t1.shape != t2.shape:
        return False, None
    refiner = _Refiner(t1.shape[0])
    c1, c2 = initial_colors(g1), initial_colors(g2)
    if not np.array_equal(np.sort(r3_all(g1)), np.sort(r3_all(g2))):
        return False, None
    path = _FirstPath(t1, c1, refiner)
    colors2, dig2 = refiner.refine(t2, c2)
    if dig2 != path.nodes[0].digest:
        return False, None
    # an isomorphism composed with an automorphism of g2 is again one, so the
    # first individualized vertex only needs one image per orbit
    orbits = _UnionFind(len(t2))
    try:
        for gen in aut_group(g2, node_limit=node_limit).generators:
            orbits.absorb(gen.images)
    except SearchLimitExceeded:
        pass
    matcher = _Matcher(path, t2, lambda im: _maps_edges(t1, t2, im), node_limit)
    found = matcher.search(colors2, 0, orbits.find)
    if found is None:
        return False, None
    return True, VertexMap(found)


# -- brute-force oracle ------------------------------------------------------------------

def aut_group_oracle(graph: GraphLike, max_vertices: int = 1500) -> int:
    """Count automorphisms by backtracking over partial vertex maps.

    Every automorphism preserves graph distance, so after each assignment a
    candidate image must agree in distance with every already-mapped vertex.
    Independent of the refinement machinery above and meant for small graphs.
    """
    table = as_table(graph)
    n = table.shape[0]
    if n > max_vertices:
        raise ValueError(f"oracle limited to {max_vertices} vertices, graph has {n}")
    dist = np.full((n, n), -1, dtype=np.int16)
    for v in range(n):
        for d, level in enumerate(bfs_levels(table, v)):
            dist[v, level] = d
    # one-hot distance encoding: agreement counts become matrix products
    onehot = [(dist == d).astype(np.float32) for d in range(-1, int(dist.max()) + 1)]

    def supported(dom: np.ndarray) -> np.ndarray:
        # an image of x must be adjacent to some image of each neighbour of x
        # bit-packed rows so that every step is a row gather
        dom_t = np.packbits(np.ascontiguousarray(dom.T), axis=1)
        reach_t = dom_t[table[:, 0]]
        for j in range(1, table.shape[1]):
            reach_t |= dom_t[table[:, j]]
        reach = np.packbits(np.ascontiguousarray(np.unpackbits(reach_t, axis=1, count=n).T), axis=1)
        out = np.packbits(dom, axis=1)
        for j in range(table.shape[1]):
            out &= reach[table[:, j]]
        return np.unpackbits(out, axis=1, count=n).view(bool)

    def propagate(dom: np.ndarray, done: np.ndarray) -> bool:
        while True:
            sizes = np.count_nonzero(dom, axis=1)
            if np.any(sizes == 0):
                return False
            new = np.flatnonzero((sizes == 1) & ~done)
            if not new.size:
                pruned = supported(dom)
                if np.array_equal(pruned, dom):
                    return True
                dom[:] = pruned
                continue
            imgs = dom[new].argmax(axis=1)
            if len(np.unique(imgs)) < len(imgs):
                return False
            done[new] = True
            dom[:, imgs] = False
            dom[new, imgs] = True
            if len(new) <= 32:
                for s, t in zip(new, imgs):
                    dom &= dist[:, s][:, None] == dist[:, t][None, :]
            else:
                agree = sum(m[:, new] @ m[:, imgs].T for m in onehot)
                dom &= agree == len(new)

    deg = table.shape[1]

    def count(dom: np.ndarray, done: np.ndarray) -> int:
        if done.all():
            return 1
        # smallest domain first; ties go to the vertex with most mapped neighbours
        mapped_nbrs = done[table].sum(axis=1)
        key = np.where(done, np.iinfo(np.int64).max, np.count_nonzero(dom, axis=1) * (deg + 1) - mapped_nbrs)
        v = int(np.argmin(key))
        total = 0
        for w in np.flatnonzero(dom[v]):
            d2, done2 = dom.copy(), done.copy()
            d2[v] = False
            d2[v, w] = True
            if propagate(d2, done2):
                total += count(d2, done2)
        return total

    dom = np.ones((n, n), dtype=bool)
    done = np.zeros(n, dtype=bool)
    if not propagate(dom, done):
        return 0
    return count(dom, done)
