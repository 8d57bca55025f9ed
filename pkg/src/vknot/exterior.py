"""Canonical surface and canonical exterior of a virtual knot diagram.

Each real crossing becomes a square cut into eight triangles around its
centre; the over strand runs south to north through the centre and the
under strand runs west-east or east-west according to the side symbol of the
over pass.  Squares are glued side to side along the Gauss code, which
collapses every boundary circle of the ribbon surface to a corner vertex.

The thickened surface is triangulated layer by layer (each triangle times an
interval is cut into three tetrahedra by a global vertex order).  The knot
runs along level 1 through the mid-side vertices and dips to the centre at
level 1 (under) or rises to the centre at level 2 (over).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .gauss import OrientedGaussCode, Side
from .tricomplex import (
    EDGE_INDEX,
    FACE_VERTS,
    BoundaryLabel,
    MixedBoundaryLabels,
    SingularBoundary,
    Triangulation,
    _UF,
    barycentric_subdivide,
    boundary_census,
    census_signature,
    components,
    is_valid_triangulation,
    remove_tetrahedra,
)

LAYERS = 3

# square-local vertex slots
_NAMES = ["C", "mE", "mN", "mW", "mS", "NE", "NW", "SW", "SE"]
_SLOT = {name: k for k, name in enumerate(_NAMES)}
_RANK = {"C": 2, "mE": 1, "mN": 1, "mW": 1, "mS": 1, "NE": 0, "NW": 0, "SW": 0, "SE": 0}
# counterclockwise triangles around the centre
_TRIS = [
    ("C", "mE", "NE"), ("C", "NE", "mN"), ("C", "mN", "NW"), ("C", "NW", "mW"),
    ("C", "mW", "SW"), ("C", "SW", "mS"), ("C", "mS", "SE"), ("C", "SE", "mE"),
]
_MID = {"N": "mN", "E": "mE", "S": "mS", "W": "mW"}
_EXIT_LR = {"N": ("NW", "NE"), "E": ("NE", "SE"), "S": ("SE", "SW"), "W": ("SW", "NW")}
_ENTRY_LR = {"S": ("SW", "SE"), "W": ("NW", "SW"), "N": ("NE", "NW"), "E": ("SE", "NE")}


class BuildError(ValueError):
    pass


@dataclass
class CanonicalSurface:
    """Triangulated closed surface carrying the diagram in its 1-skeleton."""

    triangles: list[tuple[int, int, int]]  # vertex classes, counterclockwise
    triangle_edges: list[tuple[int, int, int]]  # edge id opposite each corner
    vertex_rank: list[int]
    num_vertices: int
    num_edges: int
    knot_edges: list[tuple[int, int, int]] = field(default_factory=list)  # (edge id, mid level, centre level)
    centres: list[int] = field(default_factory=list)

    @property
    def euler(self) -> int:
        return len(self.triangles) - self.num_edges + self.num_vertices

    @property
    def genus(self) -> int:
        return self.num_components - self.euler // 2

    num_components: int = 1


def _pass_sides(code: OrientedGaussCode):
    over_side = {p.crossing_id: p.side for _, _, p in code.passes() if p.over}
    sides = []
    for comp in code.components:
        row = []
        for p in comp:
            if p.over:
                row.append(("S", "N"))
            elif over_side[p.crossing_id] is Side.LEFT_TO_RIGHT:
                row.append(("W", "E"))
            else:
                row.append(("E", "W"))
        sides.append(row)
    return sides


def build_canonical_surface(code: OrientedGaussCode) -> tuple[CanonicalSurface, int]:
    """Return the triangulated canonical surface and its genus."""
    c = code.c
    if c < 1:
        raise BuildError("the canonical surface needs at least one real crossing")
    if any(len(comp) == 0 for comp in code.components):
        raise BuildError("empty components are not supported")

    def slot(x: int, name: str) -> int:
        return 9 * (x - 1) + _SLOT[name]

    # edge slots: 8 internal (centre to each non-centre slot) + 8 half sides
    half_sides = [(s, h) for s in "NESW" for h in (0, 1)]

    def internal_edge(x: int, name: str) -> int:
        return 16 * (x - 1) + _NAMES.index(name) - 1

    def half_edge(x: int, side: str, h: int) -> int:
        return 16 * (x - 1) + 8 + half_sides.index((side, h))

    def half_at(x: int, side: str, corner: str) -> int:
        # half sides are indexed by the corner they contain
        return half_edge(x, side, _EXIT_LR[side].index(corner))

    vuf = _UF(9 * c)
    euf = _UF(16 * c)
    sides = _pass_sides(code)
    for comp, comp_sides in zip(code.components, sides):
        m = len(comp)
        for i, p in enumerate(comp):
            q = comp[(i + 1) % m]
            exit_side = comp_sides[i][1]
            entry_side = comp_sides[(i + 1) % m][0]
            x, y = p.crossing_id, q.crossing_id
            lo, ro = _EXIT_LR[exit_side]
            li, ri = _ENTRY_LR[entry_side]
            vuf.union(slot(x, lo), slot(y, li))
            vuf.union(slot(x, ro), slot(y, ri))
            vuf.union(slot(x, _MID[exit_side]), slot(y, _MID[entry_side]))
            euf.union(half_at(x, exit_side, lo), half_at(y, entry_side, li))
            euf.union(half_at(x, exit_side, ro), half_at(y, entry_side, ri))

    vclass: dict[int, int] = {}
    for s in range(9 * c):
        r = vuf.find(s)
        if r not in vclass:
            vclass[r] = len(vclass)
    eclass: dict[int, int] = {}
    for s in range(16 * c):
        r = euf.find(s)
        if r not in eclass:
            eclass[r] = len(eclass)

    def V(x, name):
        return vclass[vuf.find(slot(x, name))]

    def E(s):
        return eclass[euf.find(s)]

    def side_edge(x: int, a: str, b: str) -> int:
        # the half side of square x joining a mid slot and a corner slot
        for side, (lc, rc) in _EXIT_LR.items():
            mid = _MID[side]
            if {a, b} == {mid, lc}:
                return E(half_edge(x, side, 0))
            if {a, b} == {mid, rc}:
                return E(half_edge(x, side, 1))
        raise AssertionError((a, b))

    rank = [0] * len(vclass)
    triangles, tri_edges = [], []
    for x in range(1, c + 1):
        for name in _NAMES:
            rank[V(x, name)] = _RANK[name]
        for a, b, d in _TRIS:
            triangles.append((V(x, a), V(x, b), V(x, d)))
            # edge opposite each corner: opposite C is the half side (b, d)
            tri_edges.append((
                side_edge(x, b, d),
                E(internal_edge(x, d)),
                E(internal_edge(x, b)),
            ))

    knot_edges = []
    centres = []
    for comp, comp_sides in zip(code.components, sides):
        for p, (entry, exit_) in zip(comp, comp_sides):
            x = p.crossing_id
            level_c = 2 if p.over else 1
            knot_edges.append((E(internal_edge(x, _MID[entry])), 1, level_c))
            knot_edges.append((E(internal_edge(x, _MID[exit_])), 1, level_c))
    centres = [V(x, "C") for x in range(1, c + 1)]

    # connected components of the surface follow those of the diagram
    tuf = _UF(len(vclass))
    for a, b, d in triangles:
        tuf.union(a, b)
        tuf.union(a, d)
    ncomp = len({tuf.find(v) for v in range(len(vclass))})

    surf = CanonicalSurface(
        triangles=triangles, triangle_edges=tri_edges, vertex_rank=rank,
        num_vertices=len(vclass), num_edges=len(eclass), knot_edges=knot_edges,
        centres=centres, num_components=ncomp,
    )
    return surf, surf.genus


def _prism_tets(order: tuple[int, int, int], layer: int):
    """Three tetrahedra of (triangle x [layer, layer+1]); vertices are
    (triangle corner index, level) with corners listed in global order."""
    v0, v1, v2 = order
    lo, hi = layer, layer + 1
    return [
        [(v0, lo), (v1, lo), (v2, lo), (v2, hi)],
        [(v0, lo), (v1, lo), (v1, hi), (v2, hi)],
        [(v0, lo), (v0, hi), (v1, hi), (v2, hi)],
    ]


def build_thickened_surface(surf: CanonicalSurface, layers: int = LAYERS):
    """Triangulate S x [0, layers] and mark the knot.

    Returns the triangulation and the knot marks (vertex and edge corners),
    suitable for :func:`barycentric_subdivide`.
    """
    tets: list[list[tuple[int, int]]] = []  # vertices as (surface class, level)
    owner: list[tuple[int, int]] = []  # (triangle index, layer)
    for ti, tri in enumerate(surf.triangles):
        order = sorted(range(3), key=lambda k: (surf.vertex_rank[tri[k]], tri[k]))
        for layer in range(layers):
            for verts in _prism_tets(tuple(order), layer):
                tets.append([(tri[k], lev) for k, lev in verts])
                owner.append((ti, layer))

    faces: dict = {}
    for t, verts in enumerate(tets):
        ti, layer = owner[t]
        tri = surf.triangles[ti]
        for f in range(4):
            fv = [verts[v] for v in range(4) if v != f]
            classes = {cl for cl, _ in fv}
            levels = {lev for _, lev in fv}
            if len(classes) == 3 and len(levels) == 1:
                key = ("H", ti, levels.pop())
            elif len(classes) == 2:
                k = next(k for k in range(3) if tri[k] not in classes)
                key = ("V", surf.triangle_edges[ti][k], frozenset(fv))
            else:
                key = ("I", ti, layer, frozenset(fv))
            faces.setdefault(key, []).append((t, f))

    adj = [[None] * 4 for _ in tets]
    labels = {}
    for key, occ in faces.items():
        if len(occ) == 1:
            t, f = occ[0]
            level = key[2] if key[0] == "H" else None
            if level == 0:
                labels[(t, f)] = BoundaryLabel.SurfaceCopy0
            elif level == layers:
                labels[(t, f)] = BoundaryLabel.SurfaceCopy1
            else:
                raise BuildError(f"unexpected unmatched face {key}")
            continue
        if len(occ) != 2:
            raise BuildError(f"face {key} shared by {len(occ)} tetrahedra")
        (t1, f1), (t2, f2) = occ
        pos2 = {lab: i for i, lab in enumerate(tets[t2])}
        p = [0, 0, 0, 0]
        for v in range(4):
            p[v] = f2 if v == f1 else pos2[tets[t1][v]]
        p = tuple(p)
        adj[t1][f1] = (t2, p)
        inv = [0, 0, 0, 0]
        for i, x in enumerate(p):
            inv[x] = i
        adj[t2][f2] = (t1, tuple(inv))
    tri3 = Triangulation(adj, labels)

    knot_edge_set = set(surf.knot_edges)
    # knot vertices: every mid vertex at level 1, centres at level 1 or 2
    mids = {v for v, r in enumerate(surf.vertex_rank) if r == 1}
    marks_v, marks_e = set(), set()
    knot_centre_labels = set()
    centre_of_edge = {}
    for ti, tri in enumerate(surf.triangles):
        ca = tri[0]  # the centre is always the first corner of a square triangle
        centre_of_edge[surf.triangle_edges[ti][1]] = ca
        centre_of_edge[surf.triangle_edges[ti][2]] = ca
    for eid, lm, lc in surf.knot_edges:
        knot_centre_labels.add((centre_of_edge[eid], lc))
    for t, verts in enumerate(tets):
        ti, _ = owner[t]
        tri = surf.triangles[ti]
        for v, (cl, lev) in enumerate(verts):
            if (cl in mids and lev == 1) or (cl, lev) in knot_centre_labels:
                marks_v.add((t, v))
        for e, (a, b) in enumerate([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]):
            (ca, la), (cb, lb) = verts[a], verts[b]
            if ca == cb:
                continue
            k = next(k for k in range(3) if tri[k] not in (ca, cb))
            eid = surf.triangle_edges[ti][k]
            if surf.vertex_rank[ca] == 1 and surf.vertex_rank[cb] == 2:
                lm, lc = la, lb
            elif surf.vertex_rank[cb] == 1 and surf.vertex_rank[ca] == 2:
                lm, lc = lb, la
            else:
                continue
            if (eid, lm, lc) in knot_edge_set:
                marks_e.add((t, e))
    return tri3, {"vertices": marks_v, "edges": marks_e}


def build_canonical_exterior(code: OrientedGaussCode, *, subdivisions: int = 2) -> Triangulation:
    """Triangulation of the thickened canonical surface minus an open
    regular neighbourhood of the knot.  Boundary labels: SurfaceCopy0 and
    SurfaceCopy1 on the two copies of the surface, KnotTorus on the torus
    around the knot."""
    surf, _ = build_canonical_surface(code)
    tri, marks = build_thickened_surface(surf)
    for _ in range(subdivisions):
        tri, marks = barycentric_subdivide(tri, marks)
    on_knot = {t for t, _ in marks["vertices"]}
    return remove_tetrahedra(tri, lambda t: t in on_knot, lambda t, f: BoundaryLabel.KnotTorus)


def expected_census(code: OrientedGaussCode) -> list[tuple[str, int]]:
    _, g = build_canonical_surface(code)
    return sorted([("SurfaceCopy0", g), ("SurfaceCopy1", g), ("KnotTorus", 1)])


class NoReducibleEdge(ValueError):
    """No boundary edge of the target surface joins two distinct vertices."""


def _reduction_candidates(tri: Triangulation, which: BoundaryLabel) -> list[int]:
    sk = tri.skeleton
    edges = set()
    for (t, f), lab in tri.labels.items():
        if lab != which:
            continue
        for x, y in itertools.combinations(FACE_VERTS[f], 2):
            e = sk.edge_of[t][EDGE_INDEX[(x, y)]]
            a, b = sk.edge_ends[e]
            if a != b:
                edges.add(e)
    if not edges:
        raise NoReducibleEdge(f"{which.name} already has one vertex")
    return sorted(edges)


def one_vertex_reduction(tri: Triangulation, which: BoundaryLabel) -> Triangulation:
    """Crush away inessential disks until the ``which`` boundary surface has
    a single vertex.

    Each step takes a boundary edge with distinct ends, grows the closed
    subcomplex around it, keeps the bounded pieces of the frontier of its
    neighbourhood and crushes along them.  A step is accepted only if the
    result is a valid triangulation with the same boundary census and
    fewer vertices on the target surface.  Returns the input unchanged when
    the surface already has one vertex.
    """
    from .normal import label_vertices, surface_components
    from .surgery import crush_by_quads, frontier_surface, quad_types

    signature = census_signature(tri)
    wanted = set(tri.labels.values())
    while True:
        try:
            candidates = _reduction_candidates(tri, which)
        except NoReducibleEdge:
            return tri
        before = len(label_vertices(tri, which))
        for e in candidates:
            x = frontier_surface(tri, e)
            if x is None:
                continue
            pieces = [p for p, bounded in surface_components(tri, x) if bounded]
            if not pieces:
                continue
            disk = [sum(col) for col in zip(*pieces)]
            out, removed = crush_by_quads(tri, quad_types(tri, disk))
            if not removed:
                continue
            out = _component_with(out, wanted)
            if out is None or out.n > tri.n or not is_valid_triangulation(out):
                continue
            try:
                if census_signature(out) != signature:
                    continue
            except (SingularBoundary, MixedBoundaryLabels):
                continue
            if len(label_vertices(out, which)) < before:
                tri = out
                break
        else:
            raise NoReducibleEdge(f"no frontier crush reduces {which.name}")


def _component_with(tri: Triangulation, wanted: set) -> Optional[Triangulation]:
    for comp in components(tri):
        labs = {tri.labels[(t, f)] for t in comp for f in range(4) if (t, f) in tri.labels}
        if wanted <= labs:
            keep = set(comp)
            return remove_tetrahedra(tri, lambda t: t not in keep)
    return None
