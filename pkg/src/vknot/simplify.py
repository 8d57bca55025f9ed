"""Size reduction of knot-exterior triangulations.

The double barycentric subdivision makes the exterior simplicial, which
allows plain edge contraction under the link condition.  Links are taken in
the complex extended by a cone from one extra vertex over the boundary, so
contraction also preserves the boundary surfaces and never merges boundary
components.  After that, vertices are removed by crushing along the frontier
of edge neighbourhoods, and every candidate step is checked against the
boundary census before it is accepted.
"""
from __future__ import annotations

import itertools
import random
import time
from collections import defaultdict
from typing import Optional

from .surgery import CellIndex, crush_by_quads, frontier_surface_sparse
from .tricomplex import (
    EDGE_INDEX,
    FACE_VERTS,
    BoundaryLabel,
    InvalidGluing,
    MixedBoundaryLabels,
    SingularBoundary,
    Triangulation,
    census_signature,
    compose,
    components,
    from_simplices,
    inverse,
    is_valid_triangulation,
    remove_tetrahedra,
)

OMEGA = -1


class SimplicialComplex3:
    """Mutable pure simplicial 3-complex with labelled boundary triangles."""

    def __init__(self, tets, boundary):
        self.tets: set[frozenset] = set()
        self.star: dict[int, set[frozenset]] = {}
        self.btris: dict[frozenset, BoundaryLabel] = {}
        self.bstar: dict[int, set[frozenset]] = {}
        for t in tets:
            self._add_tet(frozenset(t))
        for tr, lab in boundary.items():
            self._add_btri(frozenset(tr), lab)

    @classmethod
    def from_triangulation(cls, tri: Triangulation) -> "SimplicialComplex3":
        sk = tri.skeleton
        tets = [tuple(sk.vertex_of[t]) for t in range(tri.n)]
        if any(len(set(t)) != 4 for t in tets) or len({frozenset(t) for t in tets}) != len(tets):
            raise InvalidGluing("triangulation is not simplicial")
        boundary = {}
        for (t, f), lab in tri.labels.items():
            key = frozenset(sk.vertex_of[t][u] for u in FACE_VERTS[f])
            if key in boundary:
                raise InvalidGluing("triangulation is not simplicial")
            boundary[key] = lab
        return cls(tets, boundary)

    def to_triangulation(self) -> Triangulation:
        tets = sorted(tuple(sorted(t)) for t in self.tets)
        return from_simplices(tets, lambda key: self.btris.get(key, BoundaryLabel.Other))

    def _add_tet(self, t):
        self.tets.add(t)
        for v in t:
            self.star.setdefault(v, set()).add(t)

    def _del_tet(self, t):
        self.tets.discard(t)
        for v in t:
            s = self.star.get(v)
            if s is not None:
                s.discard(t)

    def _add_btri(self, tr, lab):
        self.btris[tr] = lab
        for v in tr:
            self.bstar.setdefault(v, set()).add(tr)

    def _del_btri(self, tr):
        self.btris.pop(tr, None)
        for v in tr:
            s = self.bstar.get(v)
            if s is not None:
                s.discard(tr)

    def link(self, a) -> set[frozenset]:
        out = set()
        for t in self.star.get(a, ()):
            rest = tuple(t - {a})
            for r in (1, 2, 3):
                for sub in itertools.combinations(rest, r):
                    out.add(frozenset(sub))
        for tr in self.bstar.get(a, ()):
            rest = tuple(tr - {a})
            for r in (0, 1, 2):
                for sub in itertools.combinations(rest, r):
                    out.add(frozenset(sub + (OMEGA,)))
        return out

    def edge_link(self, a, b) -> set[frozenset]:
        out = set()
        for t in self.star.get(a, ()):
            if b in t:
                rest = tuple(t - {a, b})
                for r in (1, 2):
                    for sub in itertools.combinations(rest, r):
                        out.add(frozenset(sub))
        for tr in self.bstar.get(a, ()):
            if b in tr:
                rest = tuple(tr - {a, b})
                for r in (0, 1):
                    for sub in itertools.combinations(rest, r):
                        out.add(frozenset(sub + (OMEGA,)))
        return out

    def has_edge(self, a, b) -> bool:
        return any(b in t for t in self.star.get(a, ()))

    def can_contract(self, a, b) -> bool:
        if not self.has_edge(a, b):
            return False
        return (self.link(a) & self.link(b)) == self.edge_link(a, b)

    def contract(self, a, b) -> None:
        """Identify b with a (the link condition must hold)."""
        for t in list(self.star.get(b, ())):
            self._del_tet(t)
            if a not in t:
                self._add_tet((t - {b}) | {a})
        for tr in list(self.bstar.get(b, ())):
            lab = self.btris[tr]
            self._del_btri(tr)
            if a not in tr:
                self._add_btri((tr - {b}) | {a}, lab)
        self.star.pop(b, None)
        self.bstar.pop(b, None)

    def neighbours(self, a) -> set:
        out = set()
        for t in self.star.get(a, ()):
            out |= t
        out.discard(a)
        return out


def _check(deadline: Optional[float]) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise TimeoutError("simplification exceeded its deadline")


def contract_edges(tri: Triangulation, *, seed: int = 0, deadline: Optional[float] = None) -> Triangulation:
    """Contract edges of a simplicial triangulation while the link condition
    holds; returns a (simplicial) triangulation of the same manifold with
    the same boundary labels."""
    cx = SimplicialComplex3.from_triangulation(tri)
    rng = random.Random(seed)
    changed = True
    while changed:
        changed = False
        verts = sorted(cx.star)
        rng.shuffle(verts)
        for b in verts:
            _check(deadline)
            if b not in cx.star or not cx.star[b]:
                continue
            nbrs = sorted(cx.neighbours(b))
            rng.shuffle(nbrs)
            for a in nbrs:
                if cx.can_contract(a, b):
                    cx.contract(a, b)
                    changed = True
                    break
    return cx.to_triangulation()


def _labelled_part(tri: Triangulation, wanted: set) -> Optional[Triangulation]:
    """The unique component carrying every wanted label, with the rest dropped."""
    for comp in components(tri):
        labs = {tri.labels[(t, f)] for t in comp for f in range(4) if (t, f) in tri.labels}
        if wanted <= labs:
            keep = set(comp)
            return remove_tetrahedra(tri, lambda t: t not in keep)
    return None


def _candidate_edges(tri: Triangulation) -> list[int]:
    sk = tri.skeleton
    out = []
    for e in range(sk.num_edges):
        a, b = sk.edge_ends[e]
        if a == b:
            continue
        ba, bb = sk.vertex_boundary[a], sk.vertex_boundary[b]
        if ba and bb and not sk.edge_boundary[e]:
            continue
        out.append(e)
    # interior vertices first: their neighbourhoods are balls and always go
    out.sort(key=lambda e: (sk.vertex_boundary[sk.edge_ends[e][0]] and sk.vertex_boundary[sk.edge_ends[e][1]], e))
    return out


def _try_crush(tri: Triangulation, quads: list[int], wanted: set, signature) -> Optional[Triangulation]:
    out, removed = crush_by_quads(tri, quads)
    if not removed:
        return None
    out = _labelled_part(out, wanted)
    if out is None or out.n >= tri.n:
        return None
    try:
        if not is_valid_triangulation(out) or census_signature(out) != signature:
            return None
    except (SingularBoundary, MixedBoundaryLabels):
        return None
    return out


def crush_frontiers(
    tri: Triangulation, *, max_rounds: int = 10_000, deadline: Optional[float] = None
) -> Triangulation:
    """Remove vertices by crushing along frontiers of edge neighbourhoods.

    Each round crushes a batch of frontiers with pairwise disjoint supports.
    A batch whose result changes the boundary census (or is invalid) is
    split in half and retried; single rejected edges are skipped for the
    round.
    """
    signature = census_signature(tri)
    wanted = {lab for (_t, _f), lab in tri.labels.items()}
    for _ in range(max_rounds):
        _check(deadline)
        cells = CellIndex(tri)
        sk = cells.sk
        used: set[int] = set()
        batch: list[dict[int, int]] = []
        for e in _candidate_edges(tri):
            x = frontier_surface_sparse(tri, e, cells)
            if not x:
                continue
            support = {c // 7 for c, a in x.items() if a and c % 7 >= 4}
            if not support:
                continue
            ends = sk.edge_ends[e]
            near = cells.vertex_tets[ends[0]] | cells.vertex_tets[ends[1]]
            if (support | near) & used:
                continue
            used |= support | near
            batch.append(x)
        if not batch:
            return tri
        progress = False
        stack = [batch]
        while stack:
            part = stack.pop()
            quads = [-1] * tri.n
            for x in part:
                for c, a in x.items():
                    if a and c % 7 >= 4:
                        quads[c // 7] = c % 7 - 4
            out = _try_crush(tri, quads, wanted, signature)
            if out is not None:
                tri = out
                progress = True
                break
            if len(part) > 1:
                stack.append(part[len(part) // 2:])
                stack.append(part[: len(part) // 2])
        if not progress:
            return tri
    return tri


# -- local moves ---------------------------------------------------------------------


def edge_ring(tri: Triangulation, t: int, a: int, b: int) -> tuple[list, bool]:
    """Walk around the edge (a, b) of tetrahedron t.

    Returns the embeddings (tet, (a, b, c, d)) in cyclic order, where the
    face opposite d leads to the next embedding, and whether the walk
    closed up (False for boundary or invalid edges).
    """
    c, d = [x for x in range(4) if x not in (a, b)]
    start = (t, (a, b, c, d))
    ring = [start]
    cur = start
    while True:
        t, (a, b, c, d) = cur
        g = tri.adj[t][d]
        if g is None:
            return ring, False
        t2, p = g
        cur = (t2, (p[a], p[b], p[d], p[c]))
        if cur == start:
            return ring, True
        if len(ring) > 6 * tri.n:
            return ring, False
        ring.append(cur)


def _ring_names(ring) -> list:
    k = len(ring)
    out = []
    for i, (t, (a, b, c, d)) in enumerate(ring):
        names = [None] * 4
        names[a], names[b], names[c], names[d] = "A", "B", i, (i - 1) % k
        out.append((t, tuple(names)))
    return out


def retriangulate(tri: Triangulation, old: list, new: list) -> Optional[Triangulation]:
    """Replace a ball by another triangulation of it rel boundary.

    ``old`` lists (tet, names) with names[v] the name of vertex v; ``new``
    lists name 4-tuples.  Returns None unless the old tetrahedra are
    distinct, glued to each other exactly as their names say, and both
    pieces have the same boundary triangles.
    """
    pos = {t: i for i, (t, _) in enumerate(old)}
    if len(pos) != len(old):
        return None
    if any(len(set(nm)) != 4 for _, nm in old) or any(len(set(nm)) != 4 for nm in new):
        return None

    def faces(namelist):
        out = defaultdict(list)
        for i, names in enumerate(namelist):
            for f in range(4):
                out[frozenset(names[v] for v in range(4) if v != f)].append((i, f))
        return out

    of = faces([nm for _, nm in old])
    nf = faces(new)
    if any(len(x) > 2 for x in of.values()) or any(len(x) > 2 for x in nf.values()):
        return None
    outer = {k for k, x in of.items() if len(x) == 1}
    if outer != {k for k, x in nf.items() if len(x) == 1}:
        return None
    for x in of.values():
        if len(x) == 2:
            (i, f), (j, g) = x
            (ti, ni), (tj, nj) = old[i], old[j]
            gl = tri.adj[ti][f]
            if gl is None or gl[0] != tj or gl[1][f] != g:
                return None
            if any(nj[gl[1][v]] != ni[v] for v in range(4) if v != f):
                return None

    keep = [t for t in range(tri.n) if t not in pos]
    index = {t: k for k, t in enumerate(keep)}
    base = len(keep)
    adj: list[list] = [[None] * 4 for _ in range(base + len(new))]
    labels = {}
    for t in keep:
        for f in range(4):
            g = tri.adj[t][f]
            if g is None:
                labels[(index[t], f)] = tri.labels[(t, f)]
            elif g[0] not in pos:
                adj[index[t]][f] = (index[g[0]], g[1])
    smap = {}
    for k in outer:
        ((i, f),), ((j, g),) = of[k], nf[k]
        ti, ni = old[i]
        inv = {ni[v]: v for v in range(4)}
        sigma = tuple(f if v == g else inv[new[j][v]] for v in range(4))
        smap[(ti, f)] = (base + j, g, sigma)
    for (ti, f), (nt, g, sigma) in smap.items():
        gl = tri.adj[ti][f]
        if gl is None:
            labels[(nt, g)] = tri.labels[(ti, f)]
            continue
        x, p = gl
        if x in pos:
            nt2, _g2, sigma2 = smap[(x, p[f])]
            adj[nt][g] = (nt2, compose(inverse(sigma2), compose(p, sigma)))
        else:
            perm = compose(p, sigma)
            adj[nt][g] = (index[x], perm)
            adj[index[x]][p[f]] = (nt, inverse(perm))
    for x in nf.values():
        if len(x) == 2:
            (i, f), (j, g) = x
            inv = {new[j][v]: v for v in range(4)}
            perm = tuple(g if v == f else inv[new[i][v]] for v in range(4))
            adj[base + i][f] = (base + j, perm)
            adj[base + j][g] = (base + i, inverse(perm))
    return Triangulation(adj, labels)


def three_two(tri: Triangulation, ring) -> Optional[Triangulation]:
    if len(ring) != 3:
        return None
    return retriangulate(tri, _ring_names(ring), [("A", 0, 1, 2), ("B", 0, 1, 2)])


def four_four(tri: Triangulation, ring, diagonal: int = 0) -> Optional[Triangulation]:
    if len(ring) != 4:
        return None
    p, q = (0, 2) if diagonal == 0 else (1, 3)
    r, s = (1, 3) if diagonal == 0 else (0, 2)
    new = [("A", p, q, r), ("A", p, q, s), ("B", p, q, r), ("B", p, q, s)]
    return retriangulate(tri, _ring_names(ring), new)


def two_three(tri: Triangulation, t: int, f: int) -> Optional[Triangulation]:
    g = tri.adj[t][f]
    if g is None or g[0] == t:
        return None
    u, p = g
    n0 = ["X", "Y", "Z", "W"]
    n0[f] = "P"
    n1 = [None] * 4
    for v in range(4):
        n1[p[v]] = "Q" if v == f else n0[v]
    rest = [x for x in n0 if x != "P"]
    new = [("P", "Q", rest[0], rest[1]), ("P", "Q", rest[1], rest[2]), ("P", "Q", rest[0], rest[2])]
    return retriangulate(tri, [(t, tuple(n0)), (u, tuple(n1))], new)


def _kill(adj: list[list], labels: dict, dead: set) -> Triangulation:
    tri = Triangulation(adj, labels)
    return remove_tetrahedra(tri, lambda t: t in dead)


def two_zero_edge(tri: Triangulation, ring) -> Optional[Triangulation]:
    """Flatten the pillow of two tetrahedra around a degree-two edge.

    The two outer faces of one tetrahedron are identified with those of
    the other.  Outer faces may be glued among themselves, so the new
    gluings come from following each external face through the pillow
    until it leaves again.
    """
    if len(ring) != 2:
        return None
    (t0, (a0, b0, c0, d0)), (t1, (a1, b1, c1, d1)) = ring
    if t0 == t1:
        return None
    sk = tri.skeleton
    e0 = sk.edge_of[t0][EDGE_INDEX[(min(c0, d0), max(c0, d0))]]
    e1 = sk.edge_of[t1][EDGE_INDEX[(min(c1, d1), max(c1, d1))]]
    if e0 == e1 or (sk.edge_boundary[e0] and sk.edge_boundary[e1]):
        return None
    sigma = [0] * 4
    sigma[a1], sigma[b1], sigma[c1], sigma[d1] = a0, b0, d0, c0
    sigma = tuple(sigma)
    sinv = inverse(sigma)
    # partner of each outer face, with the vertex map into the partner
    tau = {}
    for x0 in (a0, b0):
        tau[(t0, x0)] = (t1, sinv[x0], sinv)
        tau[(t1, sinv[x0])] = (t0, x0, sigma)
    for o, (t, x, _m) in tau.items():
        if tri.adj[o[0]][o[1]] is None and tri.adj[t][x] is None:
            return None
    pillow = (t0, t1)
    adj, labels = tri.copy_data()
    for (t, x) in tau:
        g = tri.adj[t][x]
        if g is None or g[0] in pillow:
            continue
        u, p = g
        y = p[x]
        m = inverse(p)  # u -> t
        cur = (t, x)
        for _ in range(5):
            t2, x2, step = tau[cur]
            m = compose(step, m)
            g2 = tri.adj[t2][x2]
            if g2 is None:
                adj[u][y] = None
                labels[(u, y)] = tri.labels[(t2, x2)]
                break
            v, q = g2
            m = compose(q, m)
            if v not in pillow:
                adj[u][y] = (v, m)
                labels.pop((u, y), None)
                break
            cur = (v, q[x2])
        else:
            return None
    for t in pillow:
        for f in range(4):
            adj[t][f] = None
            labels[(t, f)] = BoundaryLabel.Other
    return _kill(adj, labels, set(pillow))


def shell(tri: Triangulation, t: int) -> Optional[Triangulation]:
    """Remove a tetrahedron with one to three faces on the boundary."""
    bdry = [f for f in range(4) if tri.adj[t][f] is None]
    if not 1 <= len(bdry) <= 3:
        return None
    labs = {tri.labels[(t, f)] for f in bdry}
    if len(labs) != 1:
        return None
    sk = tri.skeleton
    if len(bdry) == 1:
        f = bdry[0]
        if sk.vertex_boundary[sk.vertex_of[t][f]]:
            return None
        es = [sk.edge_of[t][EDGE_INDEX[(min(f, u), max(f, u))]] for u in range(4) if u != f]
        if len(set(es)) != 3 or not all(sk.edge_valid[e] for e in es):
            return None
    elif len(bdry) == 2:
        e = sk.edge_of[t][EDGE_INDEX[tuple(sorted(bdry))]]
        if sk.edge_boundary[e]:
            return None
        f = next(x for x in range(4) if x not in bdry)
        g = tri.adj[t][f]
        if g[0] == t:
            return None
    for f in range(4):
        g = tri.adj[t][f]
        if g is not None and g[0] == t:
            return None
    lab = labs.pop()
    return remove_tetrahedra(tri, lambda x: x == t, lambda _x, _f: lab)


def two_one_edge(tri: Triangulation, ring, signature) -> Optional[Triangulation]:
    """Merge the folded tetrahedron around a degree-one edge with a
    neighbour, as a two-three move followed by a two-zero move."""
    t, (a, b, _c, _d) = ring[0]
    for x in (a, b):
        g = tri.adj[t][x]
        if g is None or g[0] == t:
            continue
        mid = two_three(tri, t, x)
        if mid is None:
            continue
        sk = mid.skeleton
        fresh = range(mid.n - 3, mid.n)
        for e, u, p, q in _edge_starts(mid):
            if sk.edge_degree[e] != 2 or sk.edge_boundary[e] or not sk.edge_valid[e]:
                continue
            ring2, closed = edge_ring(mid, u, p, q)
            if not closed or not any(y in fresh for y, _ in ring2):
                continue
            out = two_zero_edge(mid, ring2)
            if _safe(out, signature):
                return out
    return None


def close_book(tri: Triangulation, t: int, a: int, b: int) -> Optional[Triangulation]:
    """Fold together the two boundary faces meeting along a boundary edge."""
    sk = tri.skeleton
    e = sk.edge_of[t][EDGE_INDEX[(a, b)]]
    if not sk.edge_boundary[e] or not sk.edge_valid[e]:
        return None
    ring, closed = edge_ring(tri, t, a, b)
    if closed:
        return None
    t1, (a1, b1, c1, d1) = ring[-1]
    cur = (t1, (a1, b1, d1, c1))
    t2, (a2, b2, c2, d2) = _walk_end(tri, cur)
    if (t1, d1) == (t2, d2):
        return None
    if tri.labels[(t1, d1)] != tri.labels[(t2, d2)]:
        return None
    v1, v2 = sk.vertex_of[t1][c1], sk.vertex_of[t2][c2]
    if v1 == v2 or sk.vertex_link[v1] != "Disk" or sk.vertex_link[v2] != "Disk":
        return None

    def edge(tt, x, y):
        return sk.edge_of[tt][EDGE_INDEX[(min(x, y), max(x, y))]]

    e1, e2 = edge(t1, a1, c1), edge(t1, b1, c1)
    f1, f2 = edge(t2, a2, c2), edge(t2, b2, c2)
    if e1 == f1 or e2 == f2 or (e1 == e2 and f1 == f2) or (e1 == f2 and f1 == e2):
        return None
    perm = [0] * 4
    perm[a1], perm[b1], perm[c1], perm[d1] = a2, b2, c2, d2
    adj, labels = tri.copy_data()
    adj[t1][d1] = (t2, tuple(perm))
    adj[t2][d2] = (t1, inverse(tuple(perm)))
    del labels[(t1, d1)], labels[(t2, d2)]
    return Triangulation(adj, labels)


def _walk_end(tri: Triangulation, start):
    cur = start
    for _ in range(6 * tri.n + 1):
        t, (a, b, c, d) = cur
        g = tri.adj[t][d]
        if g is None:
            return cur
        t2, p = g
        cur = (t2, (p[a], p[b], p[d], p[c]))
    raise InvalidGluing("edge walk does not terminate")


def _vertex_labels(tri: Triangulation) -> dict[int, BoundaryLabel]:
    sk = tri.skeleton
    out = {}
    for (t, f), lab in tri.labels.items():
        for u in FACE_VERTS[f]:
            out[sk.vertex_of[t][u]] = lab
    return out


def open_book(tri: Triangulation, t: int, f: int) -> Optional[Triangulation]:
    """Unglue an internal face with one or two edges on the boundary."""
    g = tri.adj[t][f]
    if g is None:
        return None
    sk = tri.skeleton
    fv = FACE_VERTS[f]
    edges = {}
    for x, y in itertools.combinations(fv, 2):
        edges[(x, y)] = sk.edge_of[t][EDGE_INDEX[(x, y)]]
    if not all(sk.edge_valid[e] for e in edges.values()):
        return None
    on = [xy for xy, e in edges.items() if sk.edge_boundary[e]]
    if len(on) == 1:
        far = next(u for u in fv if u not in on[0])
        if sk.vertex_boundary[sk.vertex_of[t][far]]:
            return None
    elif len(on) == 2:
        rest = next(xy for xy in edges if xy not in on)
        if sk.edge_boundary[edges[rest]]:
            return None
    else:
        return None
    labs = _vertex_labels(tri)
    lab = labs[sk.vertex_of[t][on[0][0]]]
    u, p = g
    adj, labels = tri.copy_data()
    adj[t][f] = None
    adj[u][p[f]] = None
    labels[(t, f)] = labels[(u, p[f])] = lab
    return Triangulation(adj, labels)


def _edge_starts(tri: Triangulation) -> list[tuple[int, int, int, int]]:
    """One (edge class, tet, a, b) per edge class."""
    sk = tri.skeleton
    seen = set()
    out = []
    for t in range(tri.n):
        for k, (a, b) in enumerate(((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))):
            e = sk.edge_of[t][k]
            if e not in seen:
                seen.add(e)
                out.append((e, t, a, b))
    return out


def _safe(tri: Optional[Triangulation], signature) -> bool:
    if tri is None:
        return False
    try:
        return is_valid_triangulation(tri) and census_signature(tri) == signature
    except (SingularBoundary, MixedBoundaryLabels):
        return False


def _reducing_move(tri: Triangulation, signature) -> Optional[Triangulation]:
    sk = tri.skeleton
    for e, t, a, b in _edge_starts(tri):
        if sk.edge_boundary[e] or not sk.edge_valid[e] or sk.edge_degree[e] > 3:
            continue
        ring, closed = edge_ring(tri, t, a, b)
        if not closed:
            continue
        if len(ring) == 3:
            out = three_two(tri, ring)
            if out is not None:
                return out
        elif len(ring) == 2:
            out = two_zero_edge(tri, ring)
            if _safe(out, signature):
                return out
        elif len(ring) == 1:
            out = two_one_edge(tri, ring, signature)
            if out is not None:
                return out
    for t in range(tri.n):
        if any(g is None for g in tri.adj[t]):
            out = shell(tri, t)
            if _safe(out, signature):
                return out
    for e, t, a, b in _edge_starts(tri):
        if sk.edge_boundary[e]:
            out = close_book(tri, t, a, b)
            if _safe(out, signature):
                return out
    return None


def local_minimum(tri: Triangulation, *, deadline: Optional[float] = None) -> Triangulation:
    """Apply size-reducing moves until none applies."""
    signature = census_signature(tri)
    while True:
        _check(deadline)
        out = _reducing_move(tri, signature)
        if out is None:
            return tri
        tri = out


def _open_and_reduce(tri: Triangulation, deadline: Optional[float] = None) -> Optional[Triangulation]:
    signature = census_signature(tri)
    for t in range(tri.n):
        for f in range(4):
            g = tri.adj[t][f]
            if g is None or (g[0], g[1][f]) < (t, f):
                continue
            out = open_book(tri, t, f)
            if not _safe(out, signature):
                continue
            out = local_minimum(out, deadline=deadline)
            if out.n < tri.n:
                return out
    return None


def random_walk_simplify(
    tri: Triangulation, *, seed: int = 0, patience: int = 5, deadline: Optional[float] = None
) -> Triangulation:
    """Local minimum, then random four-four moves to escape plateaus.

    Gives up after ``patience`` times the number of available four-four
    moves without improvement.
    """
    rng = random.Random(seed)
    best = local_minimum(tri, deadline=deadline)
    while best.labels:
        opened = _open_and_reduce(best, deadline)
        if opened is None:
            break
        best = opened
    cur = best
    attempts = 0
    while True:
        sk = cur.skeleton
        options = []
        for e, t, a, b in _edge_starts(cur):
            if not sk.edge_boundary[e] and sk.edge_valid[e] and sk.edge_degree[e] == 4:
                ring, closed = edge_ring(cur, t, a, b)
                if closed and len({x for x, _ in ring}) == 4:
                    options.append(ring)
        if not options or attempts > patience * len(options):
            return best
        ring = rng.choice(options)
        moved = four_four(cur, ring, rng.randrange(2))
        attempts += 1
        if attempts > patience * len(options) and cur.labels:
            opened = _open_and_reduce(best, deadline)
            if opened is not None:
                best = cur = opened
                attempts = 0
                continue
        if moved is None:
            continue
        cur = local_minimum(moved, deadline=deadline)
        if cur.n < best.n:
            best = cur
            attempts = 0


def reduce_triangulation(
    tri: Triangulation, *, seed: int = 0, patience: int = 5, deadline: Optional[float] = None
) -> Triangulation:
    """Full size reduction: edge contraction when the input is simplicial,
    then frontier crushing, then local moves with random four-four walks.
    Deterministic for a fixed seed; boundary census is preserved."""
    try:
        tri = contract_edges(tri, seed=seed, deadline=deadline)
    except InvalidGluing:
        pass
    tri = crush_frontiers(tri, deadline=deadline)
    return random_walk_simplify(tri, seed=seed, patience=patience, deadline=deadline)
