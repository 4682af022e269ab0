"""Bipartite graphs whose adjacency is given by polynomial equations.

For points (p1, p2, p3) and lines [l1, l2, l3] over F_q::

    p2 + l2 = f(p1, l1)
    p3 + l3 = g(p1, p2, l1)      (three-variable third equation)
    p3 + l3 = h(p1, l1)          (two-variable third equation)

With ``dim == 2`` only the first equation is used and vertices have two
coordinates.  Every vertex has exactly one neighbour for each value of the
neighbour's first coordinate, so the graphs are q-regular.

Vertex ids are dense: ``id = side * q**dim + sum(coord_i * q**(dim-1-i))``
with points on side 0 and lines on side 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from functools import cached_property
from typing import NamedTuple, Union

import numpy as np

from adgraphs.ff import Field, field_of_order, make_field, prime_power
from adgraphs.poly import MultiPoly, parse_poly, poly_variables


class Side(IntEnum):
    POINT = 0
    LINE = 1


class VertexRef(NamedTuple):
    side: Side
    coords: tuple[int, ...]

    def __str__(self):
        body = ", ".join(map(str, self.coords))
        return f"({body})" if self.side == Side.POINT else f"[{body}]"


def point(*coords: int) -> VertexRef:
    return VertexRef(Side.POINT, tuple(int(c) for c in coords))


def line(*coords: int) -> VertexRef:
    return VertexRef(Side.LINE, tuple(int(c) for c in coords))


@dataclass(frozen=True)
class ThreeVar:
    g: MultiPoly


@dataclass(frozen=True)
class TwoVar:
    h: MultiPoly


GKind = Union[ThreeVar, TwoVar, None]


class AdGraph:
    """An algebraically defined bipartite graph over a finite field.

    Adjacency is formula driven through :meth:`neighbor`.  The dense
    neighbour table (``2 q**dim`` rows, q columns, column t holding the
    neighbour whose first coordinate is t) is built on first use of
    :attr:`table` and shared afterwards.
    """

    def __init__(self, field: Field, f: MultiPoly, g_kind: GKind = None, name: str | None = None):
        if f.arity != 2:
            raise ValueError(f"f must have arity 2, got {f.arity}")
        if isinstance(g_kind, ThreeVar) and g_kind.g.arity != 3:
            raise ValueError(f"g must have arity 3, got {g_kind.g.arity}")
        if isinstance(g_kind, TwoVar) and g_kind.h.arity != 2:
            raise ValueError(f"h must have arity 2, got {g_kind.h.arity}")
        for poly in (f, getattr(g_kind, "g", None), getattr(g_kind, "h", None)):
            if poly is not None and poly.field != field:
                raise ValueError("polynomial defined over a different field")
        self.field = field
        self.f = f
        self.g_kind = g_kind
        self.dim = 2 if g_kind is None else 3
        self.q = field.q
        self.side_size = self.q ** self.dim
        self.vertex_count = 2 * self.side_size
        self.name = name or "graph"

    def __repr__(self):
        return f"AdGraph({self.name}, q={self.q}, dim={self.dim})"

    # -- ids ------------------------------------------------------------------

    def vertex_id(self, v: VertexRef) -> int:
        if len(v.coords) != self.dim:
            raise ValueError(f"vertex {v} does not have {self.dim} coordinates")
        acc = 0
        for c in v.coords:
            if not 0 <= c < self.q:
                raise ValueError(f"coordinate {c} out of range for F_{self.q}")
            acc = acc * self.q + c
        return int(v.side) * self.side_size + acc

    def vertex_ref(self, vid: int) -> VertexRef:
        if not 0 <= vid < self.vertex_count:
            raise ValueError(f"vertex id {vid} out of range [0, {self.vertex_count})")
        side, rest = divmod(int(vid), self.side_size)
        coords = []
        for _ in range(self.dim):
            rest, c = divmod(rest, self.q)
            coords.append(c)
        return VertexRef(Side(side), tuple(reversed(coords)))

    @cached_property
    def coords(self) -> np.ndarray:
        """``(vertex_count, dim)`` array of coordinates, indexed by id."""
        ids = np.arange(self.vertex_count, dtype=np.int64) % self.side_size
        cols = [(ids // self.q ** (self.dim - 1 - i)) % self.q for i in range(self.dim)]
        out = np.stack(cols, axis=1)
        out.setflags(write=False)
        return out

    @cached_property
    def sides(self) -> np.ndarray:
        out = np.arange(self.vertex_count, dtype=np.int64) // self.side_size
        out.setflags(write=False)
        return out

    def ids_of(self, side, coords) -> np.ndarray:
        """Vectorised id encoding; ``coords`` is a sequence of dim arrays."""
        acc = np.zeros(np.broadcast_shapes(*(np.shape(c) for c in coords)), dtype=np.int64)
        for c in coords:
            acc = acc * self.q + np.asarray(c, dtype=np.int64)
        return acc + np.asarray(side, dtype=np.int64) * self.side_size

    # -- adjacency ------------------------------------------------------------

    def _third_from_point(self, p1, p2, t):
        if isinstance(self.g_kind, ThreeVar):
            return self.g_kind.g.eval(p1, p2, t)
        return self.g_kind.h.eval(p1, t)

    def neighbor(self, v: VertexRef, first: int) -> VertexRef:
        """The unique neighbour of v whose first coordinate is ``first``."""
        F = self.field
        if v.side == Side.POINT:
            p1, p2 = v.coords[0], v.coords[1]
            l2 = F.sub(self.f.eval(p1, first), p2)
            if self.dim == 2:
                return line(first, l2)
            l3 = F.sub(self._third_from_point(p1, p2, first), v.coords[2])
            return line(first, l2, l3)
        l1, l2 = v.coords[0], v.coords[1]
        p2 = F.sub(self.f.eval(first, l1), l2)
        if self.dim == 2:
            return point(first, p2)
        p3 = F.sub(self._third_from_point(first, p2, l1), v.coords[2])
        return point(first, p2, p3)

    def neighbors(self, v: VertexRef) -> list[VertexRef]:
        return [self.neighbor(v, t) for t in range(self.q)]

    def is_edge(self, u: VertexRef, v: VertexRef) -> bool:
        if u.side == v.side:
            return False
        return self.neighbor(u, v.coords[0]) == v

    @cached_property
    def table(self) -> np.ndarray:
        """Dense neighbour table of vertex ids, shape ``(vertex_count, q)``."""
        F, q, n = self.field, self.q, self.side_size
        t = np.arange(q, dtype=np.int64)[None, :]
        c = self.coords[:n]
        a1, a2 = c[:, :1], c[:, 1:2]
        out = np.empty((self.vertex_count, q), dtype=np.int32 if self.vertex_count < 2**31 else np.int64)

        # points -> lines [t, f(p1,t) - p2, third(p1,p2,t) - p3]
        l2 = F.sub(self.f.eval(a1, t), a2)
        cols = [np.broadcast_to(t, l2.shape), l2]
        if self.dim == 3:
            cols.append(F.sub(self._third_from_point(a1, a2, t), c[:, 2:3]))
        out[:n] = self.ids_of(1, cols)

        # lines -> points (t, f(t,l1) - l2, third(t,p2,l1) - l3)
        p2 = F.sub(self.f.eval(t, a1), a2)
        cols = [np.broadcast_to(t, p2.shape), p2]
        if self.dim == 3:
            cols.append(F.sub(self._third_from_point(t, p2, a1), c[:, 2:3]))
        out[n:] = self.ids_of(0, cols)
        out.setflags(write=False)
        return out

    # -- translation classes --------------------------------------------------

    def class_representative(self, vid):
        """Representative of the orbit of vid under the last-coordinate
        translations: the same vertex with its last coordinate set to 0."""
        vid = np.asarray(vid, dtype=np.int64)
        r = vid - vid % self.q
        return int(r) if r.ndim == 0 else r

    @cached_property
    def representatives(self) -> np.ndarray:
        out = np.arange(0, self.vertex_count, self.q, dtype=np.int64)
        out.setflags(write=False)
        return out


# -- construction ---------------------------------------------------------------

POINT_LINE_VARS = ("p1", "l1")
G_VARS = ("p1", "p2", "l1")


def build_graph(field: Field, f: MultiPoly, g_kind: GKind = None, name: str | None = None) -> AdGraph:
    return AdGraph(field, f, g_kind, name)


def graph_from_strings(field: Field, f: str, g: str | None = None, name: str | None = None) -> AdGraph:
    """Build from polynomial text.  A third polynomial mentioning p2 gives a
    three-variable graph, otherwise a two-variable one; ``g=None`` gives the
    two-dimensional graph."""
    fp = parse_poly(f, field, POINT_LINE_VARS)
    if g is None:
        return AdGraph(field, fp, None, name)
    if "p2" in poly_variables(g):
        return AdGraph(field, fp, ThreeVar(parse_poly(g, field, G_VARS)), name)
    return AdGraph(field, fp, TwoVar(parse_poly(g, field, POINT_LINE_VARS)), name)


R_G = "p1*p2*l1*(p1+p2+p1*p2)"
ALIASES = {
    "R": ("p1*l1", R_G),
    "GQ": ("p1*l1", "p1*l1^2"),
    "PL": ("p1*l1", None),
}


def rigid_graph(field: Field) -> AdGraph:
    """Gamma(p1 l1, p1 p2 l1 (p1 + p2 + p1 p2))."""
    return graph_from_strings(field, *ALIASES["R"], name="R")


def gq_graph(field: Field) -> AdGraph:
    """Gamma(p1 l1, p1 l1^2)."""
    return graph_from_strings(field, *ALIASES["GQ"], name="GQ")


def plane_graph(field: Field) -> AdGraph:
    """The two-dimensional Gamma(p1 l1)."""
    return graph_from_strings(field, *ALIASES["PL"], name="PL")


def _field_from_spec(q: int, e: int | None) -> Field:
    if e is None:
        return field_of_order(q)
    p, k = prime_power(q)
    if k == 1:
        return make_field(p, e)
    if k == e:
        return make_field(p, e)
    raise ValueError(f"q={q} is inconsistent with e={e}")


def parse_graph_spec(spec: str, q: int | None = None, e: int | None = None) -> AdGraph:
    """Parse ``"q=<int>[,e=<int>];f=<poly>;g=<poly>"`` or an alias (R, GQ, PL).

    ``q`` may be a prime power or, together with ``e``, a prime.  Values in
    the string override the keyword arguments.  ``h=<poly>`` forces a
    two-variable third equation; omitting g gives a two-dimensional graph.
    """
    spec = spec.strip()
    if spec.upper() in ALIASES:
        if q is None:
            raise ValueError(f"alias {spec!r} needs a field order")
        f, g = ALIASES[spec.upper()]
        return graph_from_strings(_field_from_spec(q, e), f, g, name=spec.upper())

    fields: dict[str, str] = {}
    for part in filter(None, (s.strip() for s in spec.split(";"))):
        if part.startswith("q="):
            for kv in part.split(","):
                key, _, val = kv.partition("=")
                if key.strip() not in ("q", "e") or not re.fullmatch(r"\s*\d+\s*", val):
                    raise ValueError(f"malformed field clause {part!r}")
                fields[key.strip()] = val.strip()
            continue
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in ("f", "g", "h") or key in fields:
            raise ValueError(f"malformed graph spec clause {part!r}")
        fields[key] = val.strip()
    if "q" in fields:
        q = int(fields["q"])
    if "e" in fields:
        e = int(fields["e"])
    if q is None:
        raise ValueError("graph spec has no field order")
    if "f" not in fields:
        raise ValueError("graph spec needs f=<poly>")
    if "g" in fields and "h" in fields:
        raise ValueError("give either g or h, not both")
    field = _field_from_spec(q, e)
    fp = parse_poly(fields["f"], field, POINT_LINE_VARS)
    if "h" in fields:
        return AdGraph(field, fp, TwoVar(parse_poly(fields["h"], field, POINT_LINE_VARS)), spec)
    return graph_from_strings(field, fields["f"], fields.get("g"), name=spec)


# -- covering map -----------------------------------------------------------------

def covering_map(v: VertexRef) -> VertexRef:
    """Drop the third coordinate."""
    if len(v.coords) != 3:
        raise ValueError("covering map is defined on three-dimensional vertices")
    return VertexRef(v.side, v.coords[:2])


@dataclass(frozen=True)
class CoveringReport:
    q_to_one: bool
    edge_preserving: bool
    neighborhoods_onto: bool

    @property
    def ok(self) -> bool:
        return self.q_to_one and self.edge_preserving and self.neighborhoods_onto


def covering_report(cover: AdGraph, base: AdGraph) -> CoveringReport:
    """Exhaustively check that dropping the third coordinate maps ``cover``
    onto ``base`` as a covering homomorphism."""
    if cover.dim != 3 or base.dim != 2 or cover.field != base.field:
        raise ValueError("expected a 3-dimensional cover and 2-dimensional base over one field")
    q = cover.q
    image = np.arange(cover.vertex_count) // q  # id of the vertex with c3 dropped
    counts = np.bincount(image, minlength=base.vertex_count)
    q_to_one = bool(np.all(counts == q))
    mapped = image[cover.table]
    base_nbrs = np.sort(base.table[image], axis=1)
    # each image of an edge must be an edge of the base
    pos = np.clip(np.array([np.searchsorted(row, m) for row, m in zip(base_nbrs, mapped)]), 0, q - 1)
    edge_preserving = bool(np.all(np.take_along_axis(base_nbrs, pos, axis=1) == mapped))
    onto = bool(np.all(np.sort(mapped, axis=1) == base_nbrs))
    return CoveringReport(q_to_one, edge_preserving, onto)
