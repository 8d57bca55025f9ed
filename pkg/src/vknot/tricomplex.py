"""Generalized 3-dimensional triangulations.

A triangulation is a list of tetrahedra with vertices 0..3; face ``f`` of a
tetrahedron is the face opposite vertex ``f``.  ``adj[t][f]`` is either
``None`` (boundary face, carrying a label) or ``(t2, perm)`` where ``perm``
maps the vertices of ``t`` to those of ``t2`` with ``perm[f]`` the face of
``t2`` that receives face ``f``.  Faces, edges and vertices are not stored;
they are orbits of (tetrahedron, sub-simplex) pairs under the gluings and
are recomputed by :func:`compute_skeleton`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence

Perm = tuple[int, int, int, int]

PERMS: list[Perm] = list(itertools.permutations(range(4)))
PERM_INDEX = {p: i for i, p in enumerate(PERMS)}
IDENTITY: Perm = (0, 1, 2, 3)
EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
EDGE_INDEX = {}
for _k, (_a, _b) in enumerate(EDGES):
    EDGE_INDEX[(_a, _b)] = EDGE_INDEX[(_b, _a)] = _k
FACE_VERTS = [tuple(v for v in range(4) if v != f) for f in range(4)]


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)[i] = p[q[i]]."""
    return (p[q[0]], p[q[1]], p[q[2]], p[q[3]])


def inverse(p: Perm) -> Perm:
    out = [0, 0, 0, 0]
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def perm_sign(p: Perm) -> int:
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


def transposition(a: int, b: int) -> Perm:
    p = [0, 1, 2, 3]
    p[a], p[b] = b, a
    return tuple(p)


class BoundaryLabel(Enum):
    SurfaceCopy0 = "S0"
    SurfaceCopy1 = "S1"
    KnotTorus = "K"
    Other = "O"

    @classmethod
    def parse(cls, text: str) -> "BoundaryLabel":
        for lab in cls:
            if text in (lab.value, lab.name):
                return lab
        raise ValueError(f"unknown boundary label {text!r}")


class InvalidGluing(ValueError):
    pass


class SingularBoundary(ValueError):
    pass


class MixedBoundaryLabels(ValueError):
    pass


Gluing = Optional[tuple[int, Perm]]


class Triangulation:
    """Immutable by convention: operations return new triangulations."""

    __slots__ = ("adj", "labels", "__dict__")

    def __init__(self, adj: list[list[Gluing]], labels: Optional[dict] = None):
        self.adj = adj
        self.labels: dict[tuple[int, int], BoundaryLabel] = dict(labels or {})
        for t, row in enumerate(adj):
            for f, g in enumerate(row):
                if g is None and (t, f) not in self.labels:
                    self.labels[(t, f)] = BoundaryLabel.Other

    @property
    def n(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    @classmethod
    def empty(cls) -> "Triangulation":
        return cls([], {})

    @classmethod
    def free(cls, n: int, label: BoundaryLabel = BoundaryLabel.Other) -> "Triangulation":
        return cls([[None] * 4 for _ in range(n)], {(t, f): label for t in range(n) for f in range(4)})

    def copy_data(self) -> tuple[list[list[Gluing]], dict]:
        return [list(row) for row in self.adj], dict(self.labels)

    def boundary_faces(self) -> list[tuple[int, int]]:
        return [(t, f) for t in range(self.n) for f in range(4) if self.adj[t][f] is None]

    def is_closed(self) -> bool:
        return all(g is not None for row in self.adj for g in row)

    @cached_property
    def skeleton(self) -> "SkeletonSummary":
        return compute_skeleton(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Triangulation):
            return NotImplemented
        return self.adj == other.adj and self.labels == other.labels

    def __hash__(self):
        return hash(serialize_triangulation(self))

    def __repr__(self) -> str:
        return f"Triangulation(n={self.n}, boundary={len(self.labels)})"


def glue(adj: list[list[Gluing]], t: int, f: int, t2: int, p: Perm) -> None:
    """Record a gluing in both directions (mutates ``adj``)."""
    adj[t][f] = (t2, p)
    adj[t2][p[f]] = (t, inverse(p))


def check_structure(tri: Triangulation) -> None:
    """Raise InvalidGluing unless gluings are involutive bijections."""
    n = tri.n
    for t, row in enumerate(tri.adj):
        if len(row) != 4:
            raise InvalidGluing(f"tetrahedron {t} has {len(row)} faces")
        for f, g in enumerate(row):
            if g is None:
                if (t, f) not in tri.labels:
                    raise InvalidGluing(f"boundary face {(t, f)} unlabeled")
                continue
            if (t, f) in tri.labels:
                raise InvalidGluing(f"face {(t, f)} both glued and labeled")
            t2, p = g
            if not 0 <= t2 < n or sorted(p) != [0, 1, 2, 3]:
                raise InvalidGluing(f"bad gluing at {(t, f)}")
            if t2 == t and p[f] == f:
                raise InvalidGluing(f"face {(t, f)} glued to itself")
            back = tri.adj[t2][p[f]]
            if back is None or back[0] != t or back[1] != inverse(p):
                raise InvalidGluing(f"gluing at {(t, f)} is not involutive")


class _UF:
    __slots__ = ("parent",)

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


class _ParityUF:
    """Union-find tracking a Z/2 orientation relative to the root."""

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.parity = [0] * size
        self.conflict: set[int] = set()

    def find(self, x: int) -> tuple[int, int]:
        par = 0
        path = []
        while self.parent[x] != x:
            path.append(x)
            par ^= self.parity[x]
            x = self.parent[x]
        root = x
        # path compression
        acc = par
        for y in path:
            old = self.parity[y]
            self.parent[y] = root
            self.parity[y] = acc
            acc ^= old
        return root, par

    def union(self, a: int, b: int, rel: int) -> None:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            if pa ^ pb != rel:
                self.conflict.add(ra)
            return
        if rb < ra:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ rel
        if rb in self.conflict:
            self.conflict.add(ra)


@dataclass
class SkeletonSummary:
    vertex_of: list[list[int]]  # [t][v] -> vertex class
    edge_of: list[list[int]]  # [t][e] -> edge class
    edge_flip: list[list[int]]  # [t][e] -> 0 if local (a<b) agrees with the class orientation
    face_of: list[list[int]]
    num_vertices: int
    num_edges: int
    num_faces: int
    edge_degree: list[int]
    edge_boundary: list[bool]
    edge_valid: list[bool]
    edge_ends: list[tuple[int, int]]  # vertex classes at the two ends of each edge class
    vertex_boundary: list[bool]
    vertex_link: list[str]  # "Sphere" | "Disk" | "Singular"
    vertex_link_chi: list[int]
    n: int

    @property
    def euler(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces - self.n

    def singular_vertices(self) -> list[int]:
        return [v for v, k in enumerate(self.vertex_link) if k == "Singular"]


def compute_skeleton(tri: Triangulation) -> SkeletonSummary:
    n = tri.n
    adj = tri.adj
    vuf = _UF(4 * n)
    euf = _ParityUF(6 * n)
    face_id = [[-1] * 4 for _ in range(n)]
    nf = 0
    for t in range(n):
        row = adj[t]
        for f in range(4):
            g = row[f]
            if g is None:
                face_id[t][f] = nf
                nf += 1
                continue
            t2, p = g
            if face_id[t][f] < 0:
                face_id[t][f] = nf
                face_id[t2][p[f]] = nf
                nf += 1
            if (t2, p[f]) < (t, f):
                continue
            fv = FACE_VERTS[f]
            for v in fv:
                vuf.union(4 * t + v, 4 * t2 + p[v])
            for i in range(3):
                a, b = fv[i], fv[(i + 1) % 3]
                if a > b:
                    a, b = b, a
                pa, pb = p[a], p[b]
                rel = 0 if pa < pb else 1
                euf.union(6 * t + EDGE_INDEX[(a, b)], 6 * t2 + EDGE_INDEX[(pa, pb)], rel)

    vmap: dict[int, int] = {}
    vertex_of = [[0] * 4 for _ in range(n)]
    for t in range(n):
        for v in range(4):
            r = vuf.find(4 * t + v)
            if r not in vmap:
                vmap[r] = len(vmap)
            vertex_of[t][v] = vmap[r]
    nv = len(vmap)

    emap: dict[int, int] = {}
    edge_of = [[0] * 6 for _ in range(n)]
    edge_flip = [[0] * 6 for _ in range(n)]
    edge_degree: list[int] = []
    edge_valid: list[bool] = []
    edge_ends: list[tuple[int, int]] = []
    for t in range(n):
        for e in range(6):
            r, par = euf.find(6 * t + e)
            if r not in emap:
                emap[r] = len(emap)
                edge_degree.append(0)
                edge_valid.append(r not in euf.conflict)
                a, b = EDGES[e]
                ends = (vertex_of[t][a], vertex_of[t][b])
                edge_ends.append(ends if par == 0 else (ends[1], ends[0]))
            k = emap[r]
            edge_of[t][e] = k
            edge_flip[t][e] = par
            edge_degree[k] += 1
    ne = len(emap)

    edge_boundary = [False] * ne
    vertex_boundary = [False] * nv
    for t in range(n):
        for f in range(4):
            if adj[t][f] is None:
                fv = FACE_VERTS[f]
                for v in fv:
                    vertex_boundary[vertex_of[t][v]] = True
                for i in range(3):
                    edge_boundary[edge_of[t][EDGE_INDEX[(fv[i], fv[(i + 1) % 3])]]] = True

    # vertex links: chi = V - E + F of the link, and boundary circle count
    link_f = [0] * nv
    link_e2 = [0] * nv  # twice the link edge count
    for t in range(n):
        for v in range(4):
            k = vertex_of[t][v]
            link_f[k] += 1
            for f in range(4):
                if f != v:
                    link_e2[k] += 2 if adj[t][f] is None else 1
    link_v = [0] * nv
    bad_vertex = [False] * nv
    for k in range(ne):
        a, b = edge_ends[k]
        link_v[a] += 1
        link_v[b] += 1
        if not edge_valid[k]:
            bad_vertex[a] = bad_vertex[b] = True
    # link boundary circles: union link-vertices (edge ends) joined by boundary face corners
    end_uf = _UF(2 * ne)
    touched = set()
    for t in range(n):
        for f in range(4):
            if adj[t][f] is not None:
                continue
            fv = FACE_VERTS[f]
            for v in fv:
                others = [w for w in fv if w != v]
                ids = []
                for w in others:
                    e = EDGE_INDEX[(v, w)]
                    k = edge_of[t][e]
                    # which end of edge class k sits at local vertex v
                    lo = min(v, w)
                    local_end = 0 if v == lo else 1
                    ids.append(2 * k + (local_end ^ edge_flip[t][e]))
                end_uf.union(ids[0], ids[1])
                touched.update(ids)
    circles = [0] * nv
    for r in {end_uf.find(x) for x in touched}:
        k = r // 2
        a, b = edge_ends[k]
        circles[a if r % 2 == 0 else b] += 1
    vertex_link = []
    vertex_chi = []
    for k in range(nv):
        chi2 = 2 * link_v[k] - link_e2[k] + 2 * link_f[k]
        chi = chi2 // 2
        vertex_chi.append(chi)
        if bad_vertex[k] or chi2 % 2:
            vertex_link.append("Singular")
        elif not vertex_boundary[k] and chi == 2:
            vertex_link.append("Sphere")
        elif vertex_boundary[k] and chi == 1 and circles[k] == 1:
            vertex_link.append("Disk")
        else:
            vertex_link.append("Singular")

    return SkeletonSummary(
        vertex_of=vertex_of, edge_of=edge_of, edge_flip=edge_flip, face_of=face_id,
        num_vertices=nv, num_edges=ne, num_faces=nf, edge_degree=edge_degree,
        edge_boundary=edge_boundary, edge_valid=edge_valid, edge_ends=edge_ends,
        vertex_boundary=vertex_boundary, vertex_link=vertex_link, vertex_link_chi=vertex_chi, n=n,
    )


def is_valid_triangulation(tri: Triangulation) -> bool:
    """Involutive gluings, no edge identified with itself in reverse, every
    vertex link a sphere or a disk."""
    try:
        check_structure(tri)
    except InvalidGluing:
        return False
    sk = tri.skeleton
    return all(sk.edge_valid) and all(k != "Singular" for k in sk.vertex_link)


def is_orientable(tri: Triangulation) -> bool:
    n = tri.n
    orient = [0] * n
    for start in range(n):
        if orient[start]:
            continue
        orient[start] = 1
        stack = [start]
        while stack:
            t = stack.pop()
            for f in range(4):
                g = tri.adj[t][f]
                if g is None:
                    continue
                t2, p = g
                want = -orient[t] * perm_sign(p)
                if orient[t2] == 0:
                    orient[t2] = want
                    stack.append(t2)
                elif orient[t2] != want:
                    return False
    return True


def components(tri: Triangulation) -> list[list[int]]:
    """Connected components as sorted lists of tetrahedron indices."""
    uf = _UF(tri.n)
    for t, row in enumerate(tri.adj):
        for g in row:
            if g is not None:
                uf.union(t, g[0])
    groups: dict[int, list[int]] = {}
    for t in range(tri.n):
        groups.setdefault(uf.find(t), []).append(t)
    return sorted(groups.values())


# -- boundary ---------------------------------------------------------------


def walk_to_boundary(tri: Triangulation, t: int, f: int, i: int, j: int) -> tuple[int, int, int, int]:
    """Starting at boundary face (t, f) and its edge (i, j), walk around the
    edge through the interior and return the other boundary face
    (t', f', i', j') containing it, with i -> i', j -> j'."""
    g = 6 - f - i - j
    steps = 0
    limit = 4 * tri.n + 8
    while True:
        nxt = tri.adj[t][g]
        if nxt is None:
            return t, g, i, j
        t, p = nxt
        i, j, came = p[i], p[j], p[g]
        g = 6 - came - i - j
        steps += 1
        if steps > limit:
            raise InvalidGluing("edge walk did not terminate")


@dataclass(frozen=True)
class BoundaryComponent:
    label: BoundaryLabel
    genus: Optional[int]
    triangles: int
    vertices: int
    faces: tuple[tuple[int, int], ...]
    euler: int


def boundary_surfaces(tri: Triangulation) -> list[tuple[list[tuple[int, int]], int, dict]]:
    """Connected components of the boundary as abstract triangulated surfaces.

    Returns, per component, the boundary faces, the intrinsic vertex count and
    a map from (t, f, local vertex) to the intrinsic vertex id.
    """
    bfaces = tri.boundary_faces()
    index = {bf: k for k, bf in enumerate(bfaces)}
    fuf = _UF(len(bfaces))
    cuf = _UF(4 * len(bfaces))  # corner slots: 4*k + local vertex
    for k, (t, f) in enumerate(bfaces):
        fv = FACE_VERTS[f]
        for a in range(3):
            i, j = fv[a], fv[(a + 1) % 3]
            t2, f2, i2, j2 = walk_to_boundary(tri, t, f, i, j)
            k2 = index[(t2, f2)]
            fuf.union(k, k2)
            cuf.union(4 * k + i, 4 * k2 + i2)
            cuf.union(4 * k + j, 4 * k2 + j2)
    groups: dict[int, list[int]] = {}
    for k in range(len(bfaces)):
        groups.setdefault(fuf.find(k), []).append(k)
    out = []
    for ks in sorted(groups.values()):
        corner_ids = {}
        vmap = {}
        for k in ks:
            t, f = bfaces[k]
            for v in FACE_VERTS[f]:
                r = cuf.find(4 * k + v)
                if r not in vmap:
                    vmap[r] = len(vmap)
                corner_ids[(t, f, v)] = vmap[r]
        out.append(([bfaces[k] for k in ks], len(vmap), corner_ids))
    return out


def boundary_census(tri: Triangulation, *, allow_singular: bool = False) -> list[BoundaryComponent]:
    """(label, genus, triangle count, vertex count) per boundary component.

    Raises SingularBoundary if a component touches a vertex whose link is
    neither a disk nor a sphere, and MixedBoundaryLabels if a component
    carries more than one label.
    """
    sk = tri.skeleton
    out = []
    for faces, nverts, corners in boundary_surfaces(tri):
        labels = {tri.labels[bf] for bf in faces}
        if len(labels) != 1:
            raise MixedBoundaryLabels(f"boundary component carries labels {sorted(l.name for l in labels)}")
        if not allow_singular:
            for (t, f, v) in corners:
                if sk.vertex_link[sk.vertex_of[t][v]] != "Disk":
                    raise SingularBoundary(f"boundary component touches singular vertex at {(t, v)}")
        tri_count = len(faces)
        edges = 3 * tri_count // 2
        chi = tri_count - edges + nverts
        genus = None if chi % 2 else 1 - chi // 2
        out.append(BoundaryComponent(labels.pop(), genus, tri_count, nverts, tuple(faces), chi))
    return out


def census_signature(tri: Triangulation) -> list[tuple[str, Optional[int]]]:
    return sorted((c.label.name, c.genus) for c in boundary_census(tri))


def label_genus(tri: Triangulation, label: BoundaryLabel) -> int:
    """Total genus of the boundary components carrying ``label``."""
    return sum(c.genus for c in boundary_census(tri) if c.label == label)


# -- constructions ------------------------------------------------------------


def barycentric_subdivide(tri: Triangulation, marks: Optional[dict] = None):
    """One barycentric subdivision: tetrahedron t becomes 24 tetrahedra
    indexed 24*t + index(sigma), local vertex k of the new tetrahedron being
    the barycentre of the face spanned by sigma[0..k].

    ``marks`` optionally carries a subcomplex to push forward: a dict with
    keys "vertices" (set of (t, v)) and "edges" (set of (t, e)), closed
    under the gluings.  When given, the pushed-forward marks are returned as
    the second element of a tuple.
    """
    n = tri.n
    adj: list[list[Gluing]] = [[None] * 4 for _ in range(24 * n)]
    labels = {}
    swaps = [transposition(k, k + 1) for k in range(3)]
    for t in range(n):
        for si, s in enumerate(PERMS):
            me = 24 * t + si
            row = adj[me]
            for k in range(3):
                row[k] = (24 * t + PERM_INDEX[compose(s, swaps[k])], IDENTITY)
            g = tri.adj[t][s[3]]
            if g is None:
                labels[(me, 3)] = tri.labels[(t, s[3])]
            else:
                t2, p = g
                row[3] = (24 * t2 + PERM_INDEX[compose(p, s)], IDENTITY)
    out = Triangulation(adj, labels)
    if marks is None:
        return out
    mv, me_ = marks.get("vertices", set()), marks.get("edges", set())
    nv, ne = set(), set()
    for t in range(n):
        for si, s in enumerate(PERMS):
            me = 24 * t + si
            v_on = (t, s[0]) in mv
            e_on = (t, EDGE_INDEX[(s[0], s[1])]) in me_
            if v_on:
                nv.add((me, 0))
            if e_on:
                nv.add((me, 1))
            if v_on and e_on:
                ne.add((me, EDGE_INDEX[(0, 1)]))
    return out, {"vertices": nv, "edges": ne}


def remove_tetrahedra(
    tri: Triangulation,
    predicate: Callable[[int], bool],
    relabel: Optional[Callable[[int, int], BoundaryLabel]] = None,
) -> Triangulation:
    """Delete every tetrahedron for which ``predicate`` holds.

    Faces that were glued to a deleted tetrahedron become boundary, labeled
    ``relabel(t, f)`` (old indices) or Other.
    """
    keep = [t for t in range(tri.n) if not predicate(t)]
    new_index = {t: k for k, t in enumerate(keep)}
    adj: list[list[Gluing]] = []
    labels = {}
    for k, t in enumerate(keep):
        row: list[Gluing] = []
        for f in range(4):
            g = tri.adj[t][f]
            if g is None:
                row.append(None)
                labels[(k, f)] = tri.labels[(t, f)]
            elif g[0] in new_index:
                row.append((new_index[g[0]], g[1]))
            else:
                row.append(None)
                labels[(k, f)] = relabel(t, f) if relabel else BoundaryLabel.Other
        adj.append(row)
    return Triangulation(adj, labels)


def subtriangulation(tri: Triangulation, tets: Iterable[int]) -> Triangulation:
    keep = set(tets)
    return remove_tetrahedra(tri, lambda t: t not in keep)


def disjoint_union(*tris: Triangulation) -> Triangulation:
    adj: list[list[Gluing]] = []
    labels = {}
    for tri in tris:
        off = len(adj)
        for t, row in enumerate(tri.adj):
            adj.append([None if g is None else (g[0] + off, g[1]) for g in row])
        for (t, f), lab in tri.labels.items():
            labels[(t + off, f)] = lab
    return Triangulation(adj, labels)


# -- text format ----------------------------------------------------------------


def face_perm_digits(f: int, p: Perm) -> str:
    return "".join(str(p[v]) for v in FACE_VERTS[f])


def serialize_triangulation(tri: Triangulation) -> str:
    lines = [str(tri.n)]
    for t, row in enumerate(tri.adj):
        fields = []
        for f, g in enumerate(row):
            if g is None:
                fields.append("b:" + tri.labels[(t, f)].value)
            else:
                t2, p = g
                fields.append(f"g:{t2}:{p[f]}:{face_perm_digits(f, p)}")
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def parse_triangulation(text: str) -> Triangulation:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise InvalidGluing("empty triangulation file")
    n = int(lines[0])
    if len(lines) - 1 != n:
        raise InvalidGluing(f"expected {n} tetrahedron lines, got {len(lines) - 1}")
    adj: list[list[Gluing]] = []
    labels = {}
    for t, ln in enumerate(lines[1:]):
        fields = ln.split()
        if len(fields) != 4:
            raise InvalidGluing(f"tetrahedron {t}: expected 4 fields")
        row: list[Gluing] = []
        for f, fld in enumerate(fields):
            parts = fld.split(":")
            if parts[0] == "b" and len(parts) == 2:
                row.append(None)
                labels[(t, f)] = BoundaryLabel.parse(parts[1])
            elif parts[0] == "g" and len(parts) == 4 and len(parts[3]) == 3:
                t2, f2 = int(parts[1]), int(parts[2])
                img = [int(ch) for ch in parts[3]]
                p = [0, 0, 0, 0]
                for v, w in zip(FACE_VERTS[f], img):
                    p[v] = w
                p[f] = f2
                if sorted(p) != [0, 1, 2, 3]:
                    raise InvalidGluing(f"tetrahedron {t} face {f}: not a permutation")
                row.append((t2, tuple(p)))
            else:
                raise InvalidGluing(f"tetrahedron {t}: bad field {fld!r}")
        adj.append(row)
    tri = Triangulation(adj, labels)
    check_structure(tri)
    return tri


def from_simplices(tets: Sequence[Sequence], label_of: Optional[Callable[[frozenset], BoundaryLabel]] = None) -> Triangulation:
    """Build a triangulation from tetrahedra given as 4 distinct vertex names;
    faces with the same vertex set are glued.  Unmatched faces get
    ``label_of(face vertex set)`` or Other."""
    where: dict[frozenset, list[tuple[int, int]]] = {}
    for t, verts in enumerate(tets):
        if len(set(verts)) != 4:
            raise InvalidGluing(f"tetrahedron {t} has repeated vertices")
        for f in range(4):
            where.setdefault(frozenset(verts[v] for v in range(4) if v != f), []).append((t, f))
    adj: list[list[Gluing]] = [[None] * 4 for _ in tets]
    labels = {}
    for key, occ in where.items():
        if len(occ) == 1:
            labels[occ[0]] = label_of(key) if label_of else BoundaryLabel.Other
            continue
        if len(occ) != 2:
            raise InvalidGluing(f"face {sorted(map(str, key))} lies in {len(occ)} tetrahedra")
        (t1, f1), (t2, f2) = occ
        pos2 = {x: v for v, x in enumerate(tets[t2])}
        adj[t1][f1] = (t2, tuple(f2 if v == f1 else pos2[tets[t1][v]] for v in range(4)))
        adj[t2][f2] = (t1, inverse(adj[t1][f1][1]))
    return Triangulation(adj, labels)
