"""Surgery on triangulations along normal surfaces.

Crushing keeps exactly the tetrahedra without quadrilaterals.  A kept face
that was glued into a deleted tetrahedron is re-glued by walking: inside a
tetrahedron carrying quadrilateral type q, the face opposite vertex a is
flattened onto the face opposite the partner of a under q, so the walk leaves
through that face and continues until it reaches a kept tetrahedron or the
boundary.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .normal import InadmissibleVector, check_admissible, classify_surface, matching_system
from .tricomplex import (
    EDGE_INDEX,
    EDGES,
    FACE_VERTS,
    IDENTITY,
    BoundaryLabel,
    Triangulation,
    _UF,
    boundary_census,
    components,
    compose,
    glue,
    inverse,
    is_orientable,
    perm_sign,
    remove_tetrahedra,
    transposition,
    walk_to_boundary,
)

S0, S1, K = BoundaryLabel.SurfaceCopy0, BoundaryLabel.SurfaceCopy1, BoundaryLabel.KnotTorus

# QUAD_PARTNER[q][v]: the vertex paired with v by quadrilateral type q
QUAD_PARTNER = [(1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]


class NotASphere(ValueError):
    pass


class NotSingular(ValueError):
    pass


class NotALoop(ValueError):
    pass


class NotAVerticalAnnulus(ValueError):
    pass


class NonSurfaceVector(ValueError):
    pass


# -- singularities ---------------------------------------------------------------

SEVEN_SHAPES = frozenset({
    (2, ()),
    (1, ()),
    (1, (1, 1)),
    (0, (1, 1)),
    (0, (1, 1, 1, 1)),
    (0, (2,)),
    (0, ()),
})


@dataclass
class SingularityReport:
    """Where the two surface copies meet after a crush.

    ``vertices`` are the vertex classes lying on both copies that are not
    endpoints of a shared edge; ``circles`` lists the connected components of
    the shared edges as (edge classes, is_cycle)."""

    vertices: list[int]
    circles: list[tuple[tuple[int, ...], bool]]
    singular_vertices: list[int] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, tuple[int, ...]]:
        return len(self.vertices), tuple(sorted(len(e) for e, _ in self.circles))

    def matches_known_shape(self) -> bool:
        return all(cyc for _, cyc in self.circles) and self.shape in SEVEN_SHAPES


def singularity_report(tri: Triangulation) -> SingularityReport:
    sk = tri.skeleton
    on = {S0: (set(), set()), S1: (set(), set())}
    for (t, f), lab in tri.labels.items():
        if lab not in on:
            continue
        vs, es = on[lab]
        fv = FACE_VERTS[f]
        for u in fv:
            vs.add(sk.vertex_of[t][u])
        for i in range(3):
            es.add(sk.edge_of[t][EDGE_INDEX[(fv[i], fv[(i + 1) % 3])]])
    shared_e = sorted(on[S0][1] & on[S1][1])
    shared_v = on[S0][0] & on[S1][0]
    ends = set()
    for e in shared_e:
        ends.update(sk.edge_ends[e])
    uf = _UF(sk.num_vertices)
    for e in shared_e:
        a, b = sk.edge_ends[e]
        uf.union(a, b)
    groups: dict[int, list[int]] = defaultdict(list)
    for e in shared_e:
        groups[uf.find(sk.edge_ends[e][0])].append(e)
    circles = []
    for es in groups.values():
        deg: dict[int, int] = defaultdict(int)
        for e in es:
            a, b = sk.edge_ends[e]
            deg[a] += 1
            deg[b] += 1
        circles.append((tuple(es), all(d == 2 for d in deg.values())))
    circles.sort()
    return SingularityReport(sorted(shared_v - ends), circles, sk.singular_vertices())


# -- crushing ----------------------------------------------------------------------


@dataclass
class CrushOutcome:
    triangulation: Triangulation
    singularities: SingularityReport
    removed_tet_count: int


def quad_types(tri: Triangulation, v: Sequence[int]) -> list[int]:
    """Quad type present in each tetrahedron, or -1."""
    out = []
    for t in range(tri.n):
        q = [k for k in range(3) if v[7 * t + 4 + k]]
        if len(q) > 1:
            raise InadmissibleVector(f"tetrahedron {t} carries two quad types")
        out.append(q[0] if q else -1)
    return out


def crush_by_quads(tri: Triangulation, quads: Sequence[int]) -> tuple[Triangulation, int]:
    """Crush given only the quad type per tetrahedron (-1 for none)."""
    n = tri.n
    keep = [t for t in range(n) if quads[t] < 0]
    new_index = {t: k for k, t in enumerate(keep)}
    adj: list[list] = [[None] * 4 for _ in keep]
    labels: dict[tuple[int, int], BoundaryLabel] = {}
    limit = 4 * n + 4
    for k, t in enumerate(keep):
        for f in range(4):
            g = tri.adj[t][f]
            if g is None:
                labels[(k, f)] = tri.labels[(t, f)]
                continue
            cur, perm = g
            steps = 0
            label = None
            while quads[cur] >= 0:
                a = perm[f]
                b = QUAD_PARTNER[quads[cur]][a]
                swap = transposition(a, b)
                nxt = tri.adj[cur][b]
                if nxt is None:
                    label = tri.labels[(cur, b)]
                    break
                perm = compose(nxt[1], compose(swap, perm))
                cur = nxt[0]
                steps += 1
                if steps > limit:
                    label = BoundaryLabel.Other
                    break
            if label is not None:
                labels[(k, f)] = label
                continue
            k2 = new_index[cur]
            if k2 == k and perm[f] == f:
                # the walk closed up on the same face: treat it as boundary
                labels[(k, f)] = BoundaryLabel.Other
                continue
            adj[k][f] = (k2, perm)
    out = Triangulation(adj, labels)
    # walks are reversible, so the gluings are involutive; check cheaply
    for k in range(len(keep)):
        for f in range(4):
            g = adj[k][f]
            if g is not None:
                k2, p = g
                back = adj[k2][p[f]]
                if back is None or back[0] != k or back[1] != inverse(p):
                    raise RuntimeError("crush produced a non-involutive gluing")
    return out, n - len(keep)


def crush(tri: Triangulation, v: Sequence[int], *, check: bool = True) -> CrushOutcome:
    """Crush ``tri`` along the normal surface ``v``."""
    if check:
        try:
            check_admissible(tri, v)
        except InadmissibleVector as exc:
            if "matching" in str(exc):
                raise NonSurfaceVector(str(exc)) from exc
            raise
    out, removed = crush_by_quads(tri, quad_types(tri, v))
    return CrushOutcome(out, singularity_report(out), removed)


# -- components ----------------------------------------------------------------------


def _component_labels(tri: Triangulation) -> list[tuple[list[int], set[BoundaryLabel]]]:
    comps = components(tri)
    out = []
    for comp in comps:
        labs = {tri.labels[(t, f)] for t in comp for f in range(4) if (t, f) in tri.labels}
        out.append((comp, labs))
    return out


def prune(tri: Triangulation) -> Triangulation:
    """Keep exactly the connected components that carry knot-torus boundary."""
    keep = set()
    for comp, labs in _component_labels(tri):
        if K in labs:
            keep.update(comp)
    return remove_tetrahedra(tri, lambda t: t not in keep)


def split_along_sphere(tri: Triangulation, v: Sequence[int], *, trace: Optional[list] = None) -> Triangulation:
    """Crush along a vertex 2-sphere and discard components without a knot
    torus.  The empty triangulation means the sphere cut the knot off into a
    ball."""
    rep = classify_surface(tri, v)
    if rep.tag != "Sphere2":
        raise NotASphere(f"vector classifies as {rep.tag}")
    outcome = crush(tri, v, check=False)
    result = prune(outcome.triangulation)
    if trace is not None:
        trace.append({"op": "split", "before": tri.n, "after": result.n, "shape": outcome.singularities.shape})
    return result




# -- desingularization ---------------------------------------------------------------


def _edge_partners(tri: Triangulation, faces) -> dict:
    """(t, f, i, j) -> (t2, f2, i2, j2): the boundary face across edge ij."""
    out = {}
    for (t, f) in faces:
        fv = FACE_VERTS[f]
        for a in range(3):
            i, j = fv[a], fv[(a + 1) % 3]
            t2, f2, i2, j2 = walk_to_boundary(tri, t, f, i, j)
            out[(t, f, i, j)] = (t2, f2, i2, j2)
            out[(t, f, j, i)] = (t2, f2, j2, i2)
    return out


def _coherent_orientation(faces, partner) -> Optional[dict]:
    fset = set(faces)
    orient: dict = {}
    for start in faces:
        if start in orient:
            continue
        orient[start] = FACE_VERTS[start[1]]
        stack = [start]
        while stack:
            t, f = stack.pop()
            cyc = orient[(t, f)]
            for a in range(3):
                i, j = cyc[a], cyc[(a + 1) % 3]
                t2, f2, i2, j2 = partner[(t, f, i, j)]
                if (t2, f2) not in fset or (t2, f2) == (t, f):
                    continue
                want = (j2, i2, 6 - f2 - i2 - j2)
                rots = lambda c: {c, (c[1], c[2], c[0]), (c[2], c[0], c[1])}
                if (t2, f2) not in orient:
                    orient[(t2, f2)] = want
                    stack.append((t2, f2))
                elif want not in rots(orient[(t2, f2)]):
                    return None
    return orient


def _edge_directions(faces, stretched, partner) -> set:
    """Directed edges (t, f, i, j), meaning corner i precedes corner j, for
    every boundary edge between two stretched corners.  Both sides of an edge
    agree.  When the faces are coherently orientable the directions come from
    a balanced orientation of the dual graph, so that no face with three
    stretched corners is directed cyclically."""
    fset = set(faces)
    pairs = []
    seen = set()
    for (t, f) in faces:
        fv = FACE_VERTS[f]
        for a in range(3):
            i, j = fv[a], fv[(a + 1) % 3]
            if (t, f, i) not in stretched or (t, f, j) not in stretched:
                continue
            if partner[(t, f, i, j)][:2] not in fset:
                continue
            here = (t, f, min(i, j), max(i, j))
            if here in seen:
                continue
            x = (t, f, i, j)
            y = partner[x]
            seen.add(here)
            seen.add((y[0], y[1], min(y[2], y[3]), max(y[2], y[3])))
            pairs.append((x, y))
    directed = set()

    def put(x):
        directed.add(x)
        directed.add(partner[x])

    orient = _coherent_orientation(faces, partner)
    if orient is None:
        for x, y in pairs:
            put(min(x, y))
        return directed
    # Euler-balanced orientation of the dual multigraph
    ends = [(x[:2], y[:2]) for x, y in pairs]
    real = len(ends)
    incident: dict = defaultdict(list)
    for k, (a, b) in enumerate(ends):
        incident[a].append(k)
        incident[b].append(k)
    odd = sorted(v for v, ks in incident.items() if len(ks) % 2)
    for a, b in zip(odd[0::2], odd[1::2]):
        incident[a].append(len(ends))
        incident[b].append(len(ends))
        ends.append((a, b))
    used = [False] * len(ends)
    enters: dict[int, tuple] = {}
    ptr: dict = defaultdict(int)
    for root in sorted(incident):
        stack = [root]
        while stack:
            v = stack[-1]
            ks = incident[v]
            while ptr[v] < len(ks) and used[ks[ptr[v]]]:
                ptr[v] += 1
            if ptr[v] == len(ks):
                stack.pop()
                continue
            k = ks[ptr[v]]
            used[k] = True
            a, b = ends[k]
            w = b if a == v else a
            enters[k] = w
            stack.append(w)
    for k in range(real):
        x, y = pairs[k]
        w = enters[k]
        # agree with the orientation of the face the dual edge enters
        occ = x if x[:2] == w else y
        t, f, i, j = occ
        cyc = orient[(t, f)]
        pos = {c: n for n, c in enumerate(cyc)}
        put((t, f, i, j) if (pos[i] + 1) % 3 == pos[j] else (t, f, j, i))
    return directed


def desingularize(tri: Triangulation, p: int, *, side: BoundaryLabel = S1) -> Triangulation:
    """Stretch the singular vertex class ``p`` into an edge.

    Every boundary triangle on ``side`` with a corner at ``p`` is replaced by
    the prism over it whose vertical edges at ``p`` corners meet a new vertex.
    A prism with k stretched corners contributes k tetrahedra; a prism whose
    three stretched edges are directed cyclically is coned from an interior
    point instead (8 tetrahedra).
    """
    sk = tri.skeleton
    if not (0 <= p < sk.num_vertices) or sk.vertex_link[p] != "Singular":
        raise NotSingular(f"vertex {p} is not singular")
    faces = sorted(bf for bf, lab in tri.labels.items() if lab == side
                   and any(sk.vertex_of[bf[0]][u] == p for u in FACE_VERTS[bf[1]]))
    if not faces:
        raise NotSingular(f"vertex {p} has no corners on {side.name}")
    fset = set(faces)
    stretched = {(t, f, u) for (t, f) in faces for u in FACE_VERTS[f] if sk.vertex_of[t][u] == p}
    partner = _edge_partners(tri, faces)
    directed = _edge_directions(faces, stretched, partner)

    def bottom(t, f, u):
        return ("B", t, f, u)

    def top(t, f, u):
        return ("T", t, f, u) if (t, f, u) in stretched else ("B", t, f, u)

    new_tets: list[list[tuple]] = []
    owner: list[tuple[int, int]] = []
    for (t, f) in faces:
        fv = FACE_VERTS[f]
        st = [u for u in fv if (t, f, u) in stretched]
        outdeg = {u: sum(1 for w in st if w != u and (t, f, u, w) in directed) for u in st}
        cyclic = len(st) == 3 and sorted(outdeg.values()) == [1, 1, 1]
        if cyclic:
            cen = ("C", t, f)
            tris = [[bottom(t, f, u) for u in fv], [top(t, f, u) for u in fv]]
            for a in range(3):
                u, w = fv[a], fv[(a + 1) % 3]
                if (t, f, w, u) in directed:
                    u, w = w, u
                tris.append([top(t, f, u), bottom(t, f, u), bottom(t, f, w)])
                tris.append([top(t, f, u), top(t, f, w), bottom(t, f, w)])
            for tr in tris:
                new_tets.append(tr + [cen])
                owner.append((t, f))
            continue
        order = sorted(st, key=lambda u: (-outdeg[u], u)) + [u for u in fv if u not in st]
        for j, u in enumerate(order):
            if u in st:
                new_tets.append([top(t, f, w) for w in order[: j + 1]] + [bottom(t, f, w) for w in order[j:]])
                owner.append((t, f))

    adj, labels = tri.copy_data()
    base = tri.n
    adj.extend([None] * 4 for _ in new_tets)
    slots: dict = defaultdict(list)
    for k, pts in enumerate(new_tets):
        t, f = owner[k]
        for fi in range(4):
            fp = [pts[v] for v in range(4) if v != fi]
            corners = {x[3] for x in fp if x[0] != "C"}
            if any(x[0] == "C" for x in fp) or len(corners) == 3:
                if all(x[0] == "B" for x in fp) and len(corners) == 3 and \
                        set(fp) == {bottom(t, f, u) for u in FACE_VERTS[f]} and not any(x[0] == "C" for x in fp):
                    perm = [0, 0, 0, 0]
                    for v in range(4):
                        perm[v] = f if v == fi else pts[v][3]
                    labels.pop((t, f), None)
                    glue(adj, base + k, fi, t, tuple(perm))
                    continue
                if set(fp) == {top(t, f, u) for u in FACE_VERTS[f]}:
                    labels[(base + k, fi)] = side
                    continue
                slots[("in", t, f, frozenset(fp))].append((k, fi, {x: x for x in fp}))
                continue
            i, j = sorted(corners)
            t2, f2, i2, j2 = partner[(t, f, i, j)]
            if (t2, f2) not in fset or (t2, f2, i2, j2) == (t, f, i, j):
                labels[(base + k, fi)] = side
                continue
            # key on the undirected edge pair so both walls find the same slot
            mine = {(t, f, i, j), (t, f, j, i)}
            rep = min(mine | {(t2, f2, i2, j2), (t2, f2, j2, i2)})
            if rep in mine:
                name = {x: (x[0], x[3]) for x in fp}
            else:
                cmap = {i: i2, j: j2}
                name = {x: (x[0], cmap[x[3]]) for x in fp}
            slots[("v", rep, frozenset(name.values()))].append((k, fi, name))
    for key, occ in slots.items():
        if len(occ) == 1:
            k, fi, _ = occ[0]
            labels[(base + k, fi)] = side
            continue
        if len(occ) != 2:
            raise RuntimeError(f"desingularization face {key} shared {len(occ)} times")
        (ka, fa, na), (kb, fb, nb) = occ
        where_b = {nb[x]: v for v, x in enumerate(new_tets[kb]) if v != fb}
        perm = [0, 0, 0, 0]
        for v, x in enumerate(new_tets[ka]):
            perm[v] = fb if v == fa else where_b[na[x]]
        glue(adj, base + ka, fa, base + kb, tuple(perm))
    return Triangulation(adj, labels)


# -- loop elimination and destabilization ------------------------------------------------


def _orientation(tri: Triangulation) -> list[int]:
    orient = [0] * tri.n
    for start in range(tri.n):
        if orient[start]:
            continue
        orient[start] = 1
        stack = [start]
        while stack:
            t = stack.pop()
            for f in range(4):
                g = tri.adj[t][f]
                if g is not None and not orient[g[0]]:
                    orient[g[0]] = -orient[t] * perm_sign(g[1])
                    stack.append(g[0])
    return orient


def _faces_on_edge(tri: Triangulation, edge: int, labels=None) -> list[tuple[int, int, int, int]]:
    """Boundary faces containing edge class ``edge`` as (t, f, i, j) with i->j
    following the class orientation."""
    sk = tri.skeleton
    out = []
    for (t, f), lab in sorted(tri.labels.items()):
        if labels is not None and lab not in labels:
            continue
        fv = FACE_VERTS[f]
        for a in range(3):
            i, j = sorted((fv[a], fv[(a + 1) % 3]))
            e = EDGE_INDEX[(i, j)]
            if sk.edge_of[t][e] == edge:
                out.append((t, f, i, j) if sk.edge_flip[t][e] == 0 else (t, f, j, i))
    return out


def _desingularize_all(tri: Triangulation, vertices_of_interest) -> Triangulation:
    """Desingularize the given vertex classes (tracked through the change by
    re-reading them from the singularity report)."""
    for _ in range(8):
        sk = tri.skeleton
        todo = [v for v in vertices_of_interest(tri) if sk.vertex_link[v] == "Singular"]
        if not todo:
            break
        p = todo[0]
        before = len(sk.singular_vertices())
        for side in (S1, S0):
            try:
                out = desingularize(tri, p, side=side)
            except NotSingular:
                continue
            # stretching on one side can leave the sheets pinched; then try the other
            if len(out.skeleton.singular_vertices()) < before:
                tri = out
                break
        else:
            break
    return tri


def eliminate_loop(tri: Triangulation, circle: Optional[tuple[int, ...]] = None) -> Triangulation:
    """Remove one circle of the intersection of the two surface copies.

    A circle made of one edge is capped: a tetrahedron with two faces folded
    together is a cone whose side is glued onto the lowest-index boundary
    triangle containing the circle.  A circle made of two edges is closed up
    by gluing the two edges through one added tetrahedron.  Either way the
    vertices of the circle are desingularized afterwards.
    """
    rep = singularity_report(tri)
    cycles = [edges for edges, cyc in rep.circles if cyc and len(edges) in (1, 2)]
    if circle is None:
        if not cycles:
            raise NotALoop("no one- or two-edge circle on both surface copies")
        circle = cycles[0]
    elif tuple(circle) not in cycles:
        raise NotALoop(f"{circle} is not a one- or two-edge circle")
    sk = tri.skeleton
    adj, labels = tri.copy_data()
    orient = _orientation(tri)
    X = tri.n
    adj.append([None] * 4)
    if len(circle) == 1:
        t, f, i, j = _faces_on_edge(tri, circle[0])[0]
        k = 6 - f - i - j
        # fold face 3 onto face 2 (swap 2 and 3): edge 23 closes into a loop
        adj[X][3] = (X, (0, 1, 3, 2))
        adj[X][2] = (X, (0, 1, 3, 2))
        perm = [0, 0, 0, 0]
        perm[0], perm[1], perm[2], perm[3] = k, f, i, j
        labels[(X, 0)] = tri.labels[(t, f)]
        del labels[(t, f)]
        glue(adj, X, 1, t, tuple(perm))
        ends = {sk.edge_ends[circle[0]][0]}
    else:
        e1, e2 = circle
        done = False
        for (t1, f1, i1, j1) in _faces_on_edge(tri, e1):
            for (t2, f2, i2, j2) in _faces_on_edge(tri, e2):
                if (t1, f1) == (t2, f2):
                    continue
                # endpoints must match: e1 runs a -> b; e2 must be read a -> b too
                a1, b1 = sk.vertex_of[t1][i1], sk.vertex_of[t1][j1]
                a2, b2 = sk.vertex_of[t2][i2], sk.vertex_of[t2][j2]
                if (a1, b1) != (a2, b2):
                    if (a1, b1) == (b2, a2):
                        i2, j2 = j2, i2
                    else:
                        continue
                p1 = (i1, j1, 6 - f1 - i1 - j1, f1)  # X face 3 -> (t1, f1)
                p2 = (i2, j2, f2, 6 - f2 - i2 - j2)  # X face 2 -> (t2, f2)
                # X gets orientation -orient[t1]*sign(p1); consistency on face 2
                if -orient[t1] * perm_sign(p1) != -orient[t2] * perm_sign(p2) and t1 != t2:
                    continue
                if t1 == t2 and perm_sign(p1) != perm_sign(p2):
                    continue
                lab = tri.labels[(t1, f1)]
                del labels[(t1, f1)]
                del labels[(t2, f2)]
                glue(adj, X, 3, t1, p1)
                glue(adj, X, 2, t2, p2)
                labels[(X, 0)] = lab
                labels[(X, 1)] = tri.labels[(t2, f2)]
                done = True
                break
            if done:
                break
        if not done:
            raise NotALoop("could not glue the two edges of the circle consistently")
        ends = set(sk.edge_ends[e1])
    out = Triangulation(adj, labels)
    # track the circle's vertices through to the new triangulation
    anchors = []
    for v in ends:
        for t in range(tri.n):
            hit = [u for u in range(4) if sk.vertex_of[t][u] == v]
            if hit:
                anchors.append((t, hit[0]))
                break

    def of_interest(tr: Triangulation):
        s = tr.skeleton
        return sorted({s.vertex_of[t][u] for t, u in anchors})

    return _desingularize_all(out, of_interest)


def destabilize(tri: Triangulation, v: Sequence[int], *, trace: Optional[list] = None) -> Triangulation:
    """Crush along a vertical annulus, remove the one-edge circles, then the
    two-edge circles, desingularize the remaining singular points and keep
    the components that carry the knot torus."""
    rep = classify_surface(tri, v)
    if rep.tag != "VerticalAnnulus":
        raise NotAVerticalAnnulus(f"vector classifies as {rep.tag}")
    outcome = crush(tri, v, check=False)
    cur = outcome.triangulation
    shape = outcome.singularities.shape
    for size in (1, 2):
        for _ in range(8):
            r = singularity_report(cur)
            todo = [edges for edges, cyc in r.circles if cyc and len(edges) == size]
            if not todo:
                break
            cur = eliminate_loop(cur, todo[0])
    cur = _desingularize_all(cur, lambda tr: singularity_report(tr).vertices)
    result = prune(cur)
    if trace is not None:
        trace.append({"op": "destabilize", "before": tri.n, "crushed": outcome.triangulation.n,
                      "after": result.n, "shape": shape})
    return result


# -- frontier of a subcomplex ---------------------------------------------------------


QUAD_OF_PAIR = {}
for _q, _pairs in enumerate([((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]):
    for _a, _b in _pairs:
        QUAD_OF_PAIR[(_a, _b)] = QUAD_OF_PAIR[(_b, _a)] = _q


class CellIndex:
    """Incidence maps between skeleton classes, built once per triangulation."""

    def __init__(self, tri: Triangulation):
        sk = tri.skeleton
        self.tri = tri
        self.sk = sk
        self.face_edges: dict[int, list[int]] = {}
        self.edge_faces: dict[int, set[int]] = defaultdict(set)
        self.face_tets: dict[int, set[int]] = defaultdict(set)
        self.vertex_tets: dict[int, set[int]] = defaultdict(set)
        for t in range(tri.n):
            for u in range(4):
                self.vertex_tets[sk.vertex_of[t][u]].add(t)
            for f in range(4):
                fc = sk.face_of[t][f]
                self.face_tets[fc].add(t)
                if fc in self.face_edges:
                    continue
                fv = FACE_VERTS[f]
                es = [sk.edge_of[t][EDGE_INDEX[(fv[a], fv[(a + 1) % 3])]] for a in range(3)]
                self.face_edges[fc] = es
                for e in es:
                    self.edge_faces[e].add(fc)


def grow_subcomplex(tri: Triangulation, edge: int, cells: Optional[CellIndex] = None):
    """Close {edge} under: a face with two or more edges in the set joins it
    (with all its edges); a tetrahedron with all faces in the set joins it.
    Returns (edge classes, face classes, tetrahedra)."""
    cells = cells or CellIndex(tri)
    sk = cells.sk
    edges = {edge}
    faces: set[int] = set()
    tets: set[int] = set()
    queue = [edge]
    while queue:
        e = queue.pop()
        for fc in cells.edge_faces[e]:
            if fc in faces:
                continue
            if sum(1 for x in cells.face_edges[fc] if x in edges) >= 2:
                faces.add(fc)
                for x in cells.face_edges[fc]:
                    if x not in edges:
                        edges.add(x)
                        queue.append(x)
                for t in cells.face_tets[fc]:
                    if t not in tets and all(sk.face_of[t][g] in faces for g in range(4)):
                        tets.add(t)
    return edges, faces, tets


def frontier_surface_sparse(tri: Triangulation, edge: int, cells: Optional[CellIndex] = None) -> Optional[dict[int, int]]:
    cells = cells or CellIndex(tri)
    sk = cells.sk
    edges, faces, tets = grow_subcomplex(tri, edge, cells)
    verts = set()
    for e in edges:
        verts.update(sk.edge_ends[e])
    near = set()
    for w in verts:
        near |= cells.vertex_tets[w]
    x: dict[int, int] = defaultdict(int)
    for t in sorted(near):
        if t in tets:
            continue
        loc_e = [k for k in range(6) if sk.edge_of[t][k] in edges]
        loc_f = [f for f in range(4) if sk.face_of[t][f] in faces]
        covered = set()
        if loc_f:
            if len(loc_f) > 1 or len(loc_e) != 3:
                return None
            f = loc_f[0]
            x[7 * t + f] += 1
            covered.update(FACE_VERTS[f])
        elif loc_e:
            pairs = [EDGES[k] for k in loc_e]
            if len(pairs) == 1:
                x[7 * t + 4 + QUAD_OF_PAIR[pairs[0]]] += 1
                covered.update(pairs[0])
            elif len(pairs) == 2 and not set(pairs[0]) & set(pairs[1]):
                x[7 * t + 4 + QUAD_OF_PAIR[pairs[0]]] += 2
                covered.update(range(4))
            else:
                return None
        for u in range(4):
            if u not in covered and sk.vertex_of[t][u] in verts:
                x[7 * t + u] += 1
    return dict(x)


def frontier_surface(tri: Triangulation, edge: int, cells: Optional[CellIndex] = None) -> Optional[tuple[int, ...]]:
    """Normal coordinates of the frontier of a small regular neighbourhood
    of the closed subcomplex grown from ``edge``; None when the placement
    rules do not apply (the subcomplex meets a tetrahedron irregularly)."""
    sparse = frontier_surface_sparse(tri, edge, cells)
    if sparse is None:
        return None
    x = [0] * (7 * tri.n)
    for c, a in sparse.items():
        x[c] = a
    return tuple(x)
