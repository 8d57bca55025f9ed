"""Normal surfaces in standard triangle-quad coordinates.

Coordinates of tetrahedron ``t`` occupy positions ``7t .. 7t+6`` in the
order t0, t1, t2, t3, q01|23, q02|13, q03|12; triangle ``t_v`` cuts off
vertex ``v`` and quad ``q_ab|cd`` separates edge ab from edge cd.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .linalg import bareiss_rank, primitive
from .tricomplex import (
    EDGE_INDEX,
    EDGES,
    FACE_VERTS,
    BoundaryLabel,
    Triangulation,
    walk_to_boundary,
)

QUAD_OF = {}
for _q, ((_a, _b), (_c, _d)) in enumerate([((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]):
    for _x, _y in ((_a, _b), (_c, _d)):
        QUAD_OF[(_x, _y)] = QUAD_OF[(_y, _x)] = _q


def quad_col(t: int, a: int, b: int) -> int:
    """Column of the quad in tetrahedron t that pairs vertex a with b."""
    return 7 * t + 4 + QUAD_OF[(a, b)]


class InadmissibleVector(ValueError):
    pass


class NoPath(ValueError):
    pass


@dataclass
class MatchingSystem:
    """Rows of the matching equations A x = 0, stored sparsely."""

    ncols: int
    rows: list[list[tuple[int, int]]]

    @property
    def n(self) -> int:
        return self.ncols // 7

    def dense(self, upto: Optional[int] = None) -> list[list[int]]:
        out = []
        for row in self.rows[: len(self.rows) if upto is None else upto]:
            r = [0] * self.ncols
            for c, a in row:
                r[c] += a
            out.append(r)
        return out

    def apply(self, x: Sequence) -> list:
        return [sum(a * x[c] for c, a in row) for row in self.rows]

    def satisfied_by(self, x: Sequence) -> bool:
        return all(v == 0 for v in self.apply(x))


def matching_system(tri: Triangulation) -> MatchingSystem:
    """One equation per (internal face, normal arc type)."""
    rows = []
    for t in range(tri.n):
        for f in range(4):
            g = tri.adj[t][f]
            if g is None:
                continue
            t2, p = g
            if (t2, p[f]) < (t, f):
                continue
            for v in FACE_VERTS[f]:
                coeffs: dict[int, int] = {}
                for col, s in (
                    (7 * t + v, 1),
                    (quad_col(t, v, f), 1),
                    (7 * t2 + p[v], -1),
                    (quad_col(t2, p[v], p[f]), -1),
                ):
                    coeffs[col] = coeffs.get(col, 0) + s
                row = sorted((c, a) for c, a in coeffs.items() if a)
                rows.append(row)
    return MatchingSystem(7 * tri.n, rows)


# -- quad condition ------------------------------------------------------------


def _quad_masks(n: int) -> tuple[int, int, int]:
    q = [0, 0, 0]
    for t in range(n):
        for k in range(3):
            q[k] |= 1 << (7 * t + 4 + k)
    return q[0], q[1], q[2]


def support_mask(x: Sequence) -> int:
    m = 0
    for i, v in enumerate(x):
        if v:
            m |= 1 << i
    return m


def quad_compatible_mask(support: int, masks: tuple[int, int, int]) -> bool:
    q0, q1, q2 = masks
    a = support & q0
    b = (support & q1) >> 1
    c = (support & q2) >> 2
    return not ((a & b) | (a & c) | (b & c))


def satisfies_quad_condition(x: Sequence) -> bool:
    n = len(x) // 7
    for t in range(n):
        if sum(1 for k in range(3) if x[7 * t + 4 + k]) > 1:
            return False
    return True


# -- enumeration ---------------------------------------------------------------


def adjacency_test(u: Sequence, w: Sequence, system: MatchingSystem, upto: int) -> bool:
    """True iff dim ker [A_upto ; I_Z] = 2 where Z = Z(u) & Z(w)."""
    t = system.ncols
    zeros = [i for i in range(t) if u[i] == 0 and w[i] == 0]
    rows = system.dense(upto)
    for i in zeros:
        r = [0] * t
        r[i] = 1
        rows.append(r)
    return t - bareiss_rank(rows) == 2


def _normalize(vec: Sequence[int]) -> tuple[Fraction, ...]:
    s = sum(vec)
    return tuple(Fraction(x, s) for x in vec)


def enumerate_vertex_solutions(
    system: MatchingSystem,
    *,
    admissible_only: bool = False,
    adjacency: str = "combinatorial",
    method: str = "direct",
    max_vertices: Optional[int] = None,
    deadline: Optional[float] = None,
) -> list[tuple[Fraction, ...]]:
    """Vertices of {x >= 0, sum x = 1, A x = 0} by the double description
    method, rows processed in construction order.

    ``admissible_only`` discards, at every stage, combinations whose support
    breaks the quadrilateral condition; the result is then exactly the set
    of admissible vertices.  ``adjacency`` selects the exact-rank test
    (``"rank"``) or the equivalent zero-set test (``"combinatorial"``).
    ``method="lifted"`` runs the method over quads plus triangle shifts
    instead (compiled, much faster on larger inputs, same output).
    Output is sorted lexicographically.
    """
    import time

    if method == "lifted":
        verts = _lifted_vertices(system, admissible_only, deadline, max_vertices)
        return sorted({_normalize(v) for v in verts})
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")

    t = system.ncols
    full = (1 << t) - 1
    # vertices: (integer vector, zero mask)
    verts: list[tuple[tuple[int, ...], int]] = []
    for i in range(t):
        e = [0] * t
        e[i] = 1
        verts.append((tuple(e), full & ~(1 << i)))
    masks = _quad_masks(t // 7)
    dense = system.dense()
    for ri, row in enumerate(system.rows):
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("vertex enumeration exceeded its deadline")
        zero, pos, neg = [], [], []
        for v in verts:
            val = sum(a * v[0][c] for c, a in row)
            if val == 0:
                zero.append(v)
            elif val > 0:
                pos.append((v, val))
            else:
                neg.append((v, val))
        if not pos or not neg:
            verts = zero
            continue
        rank_prev = bareiss_rank(dense[:ri]) if ri else 0
        need = t - 2 - rank_prev
        new = []
        everyone = [v for v in verts]
        for (u, uval) in pos:
            for (w, wval) in neg:
                z = u[1] & w[1]
                if admissible_only and not quad_compatible_mask(full & ~z, masks):
                    continue
                if bin(z).count("1") < need:
                    continue
                if adjacency == "rank":
                    ok = adjacency_test(u[0], w[0], system, ri)
                else:
                    ok = True
                    for other in everyone:
                        om = other[1]
                        if om & z == z and other is not u and other is not w:
                            ok = False
                            break
                if not ok:
                    continue
                vec = [uval * wx - wval * ux for ux, wx in zip(u[0], w[0])]
                vec = primitive(vec)
                new.append((vec, full & ~support_mask(vec)))
        verts = zero + new
        if max_vertices is not None and len(verts) > max_vertices:
            raise MemoryError(f"more than {max_vertices} intermediate vertices")
    if admissible_only:
        verts = [v for v in verts if quad_compatible_mask(full & ~v[1], masks)]
    out = sorted({_normalize(v[0]) for v in verts})
    return out


def _triangle_forms(system: MatchingSystem):
    """Write every triangle column as (linear form in quads) + (free shift of
    its block), where blocks are the connected classes of triangle columns
    under the matching equations.  Returns (forms, block of each column,
    block count, block orders, quad-only equations)."""
    n = system.n
    links: dict[int, list[tuple[int, dict[int, int]]]] = {7 * t + u: [] for t in range(n) for u in range(4)}
    pure = []
    pairs = []
    for row in system.rows:
        tri = [(c, a) for c, a in row if c % 7 < 4]
        quad = {c: a for c, a in row if c % 7 >= 4}
        if not tri:
            pure.append(quad)
            continue
        if len(tri) != 2 or sorted(a for _, a in tri) != [-1, 1]:
            raise ValueError("matching row does not have the triangle shape t_a - t_b")
        a = next(c for c, x in tri if x == 1)
        b = next(c for c, x in tri if x == -1)
        # t_b = t_a + quad
        links[a].append((b, quad))
        links[b].append((a, {c: -x for c, x in quad.items()}))
        pairs.append((a, b, quad))
    form: dict[int, dict[int, int]] = {}
    block: dict[int, int] = {}
    orders: list[list[int]] = []
    for root in sorted(links):
        if root in block:
            continue
        k = len(orders)
        order = [root]
        block[root] = k
        form[root] = {}
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b, quad in links[a]:
                if b in block:
                    continue
                f = dict(form[a])
                for c, x in quad.items():
                    f[c] = f.get(c, 0) + x
                form[b] = {c: x for c, x in f.items() if x}
                block[b] = k
                order.append(b)
                queue.append(b)
        orders.append(order)
    eqs = [q for q in pure if any(q.values())]
    for a, b, quad in pairs:
        e = dict(form[a])
        for c, x in quad.items():
            e[c] = e.get(c, 0) + x
        for c, x in form[b].items():
            e[c] = e.get(c, 0) - x
        e = {c: x for c, x in e.items() if x}
        if e:
            eqs.append(e)
    return form, block, len(orders), orders, eqs


def _lifted_vertices(
    system: MatchingSystem,
    admissible_only: bool,
    deadline: Optional[float],
    max_vertices: Optional[int],
) -> list[tuple[int, ...]]:
    """Double description over quads plus one shift per triangle block.

    Starts from the quad orthant, cuts by the quad-only consequences of the
    matching equations, then by triangle >= 0 one column at a time.  The
    zero set of a ray is its zero set in standard coordinates, so the
    adjacency and admissibility filters are the usual ones.
    """
    import time

    import numpy as np

    from . import ddcore

    n = system.n
    form, block, nblocks, orders, eqs = _triangle_forms(system)
    nq = 3 * n
    dim = nq + nblocks

    def lift(c):
        return 3 * (c // 7) + (c % 7) - 4

    eq_forms = []
    seen = set()
    for e in eqs:
        f = tuple(sorted((lift(c), x) for c, x in e.items()))
        g = 0
        for _, x in f:
            g = gcd(g, x)
        f = tuple((c, x // g) for c, x in f)
        if f[0][1] < 0:
            f = tuple((c, -x) for c, x in f)
        if f not in seen:
            seen.add(f)
            eq_forms.append(f)
    steps = [("eq", f, None) for f in eq_forms]
    for k, order in enumerate(orders):
        for c in order:
            f = sorted((lift(q), x) for q, x in form[c].items()) + [(nq + k, 1)]
            steps.append(("ge", tuple(f), c))

    W = ddcore.words(7 * n)
    WQ = max(1, -(-n // ddcore.QUADS_PER_WORD))
    quad_bits = [7 * (i // 3) + 4 + i % 3 for i in range(nq)]
    all_quads = ddcore.pack_bits(quad_bits, W)
    rays: list[tuple[int, ...]] = []
    Z = np.zeros((nq, W), dtype=np.uint64)
    QB = np.zeros((nq, WQ), dtype=np.uint64)
    for i in range(nq):
        v = [0] * dim
        v[i] = 1
        rays.append(tuple(v))
        Z[i] = all_quads & ~ddcore.pack_bits([quad_bits[i]], W)
        wq, bq = ddcore.quad_word_bit(i // 3, i % 3)
        QB[i, wq] = np.uint64(1) << np.uint64(bq)
    lin = []
    for k in range(nblocks):
        v = [0] * dim
        v[nq + k] = 1
        lin.append(tuple(v))
    done = all_quads.copy()
    eq_dense: list[list[int]] = []
    eq_rank = 0

    def value(f, r):
        return sum(x * r[c] for c, x in f)

    for kind, f, bit in steps:
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("vertex enumeration exceeded its deadline")
        bitmask = ddcore.pack_bits([bit], W) if bit is not None else None
        lvals = [value(f, l) for l in lin]
        piv = next((i for i, x in enumerate(lvals) if x), None)
        if piv is not None:
            ell, s = lin[piv], lvals[piv]
            if s < 0:
                ell, s = tuple(-x for x in ell), -s
            lin = [
                primitive([s * a - lv * b for a, b in zip(l, ell)])
                for i, (l, lv) in enumerate(zip(lin, lvals))
                if i != piv
            ]
            rays = [primitive([s * a - value(f, r) * b for a, b in zip(r, ell)]) for r in rays]
            if kind == "ge":
                Z = Z | bitmask
                rays.append(ell)
                Z = np.vstack([Z, done.reshape(1, -1)])
                QB = np.vstack([QB, np.zeros((1, WQ), dtype=np.uint64)])
                done = done | bitmask
            else:
                row = [0] * dim
                for c, x in f:
                    row[c] = x
                eq_dense.append(row)
                eq_rank = bareiss_rank(eq_dense)
            continue
        vals = [value(f, r) for r in rays]
        zero = [i for i, x in enumerate(vals) if x == 0]
        pos = [i for i, x in enumerate(vals) if x > 0]
        neg = [i for i, x in enumerate(vals) if x < 0]
        if kind == "eq":
            row = [0] * dim
            for c, x in f:
                row[c] = x
            eq_dense.append(row)
        if pos and neg:
            need = dim - eq_rank - len(lin) - 2
            pc = ddcore.popcounts(Z)
            us, ws = ddcore.adjacent_pairs(
                Z, QB, pc, np.array(pos, dtype=np.int64), np.array(neg, dtype=np.int64),
                need, admissible_only, ddcore.AMASK, ddcore.BMASK,
            )
        else:
            us = ws = ()
        new_rays = []
        for u, w in zip(us, ws):
            a, b = vals[u], -vals[w]
            new_rays.append(primitive([a * y + b * x for x, y in zip(rays[u], rays[w])]))
        keep = zero if kind == "eq" else zero + pos
        nz = Z[keep]
        nqb = QB[keep]
        if kind == "ge":
            zmask = np.zeros(len(rays), dtype=bool)
            zmask[zero] = True
            nz = np.where(zmask[keep][:, None], nz | bitmask, nz)
        if len(us):
            us = np.asarray(us)
            ws = np.asarray(ws)
            addz = Z[us] & Z[ws]
            if kind == "ge":
                addz = addz | bitmask
            nz = np.vstack([nz, addz])
            nqb = np.vstack([nqb, QB[us] | QB[ws]])
        rays = [rays[i] for i in keep] + new_rays
        Z, QB = nz, nqb
        if kind == "ge":
            done = done | bitmask
        else:
            eq_rank = bareiss_rank(eq_dense)
        if max_vertices is not None and len(rays) > max_vertices:
            raise MemoryError(f"more than {max_vertices} intermediate vertices")
    if lin:
        raise ValueError("lineality left after all triangle constraints")
    out = []
    for r in rays:
        x = [0] * (7 * n)
        for i in range(nq):
            x[7 * (i // 3) + 4 + i % 3] = r[i]
        for c, f in form.items():
            x[c] = sum(a * r[lift(q)] for q, a in f.items()) + r[nq + block[c]]
        out.append(primitive(x))
    return out


def min_integer_multiple(x: Sequence[Fraction]) -> tuple[int, tuple[int, ...]]:
    """Smallest k > 0 with k x integral, and k x itself."""
    k = 1
    for v in x:
        v = Fraction(v)
        if v:
            d = v.denominator
            k = k * d // gcd(k, d)
    return k, tuple(int(Fraction(v) * k) for v in x)


# -- geometry of a vector -------------------------------------------------------


def vertex_link_vector(tri: Triangulation, vertex: int) -> tuple[int, ...]:
    sk = tri.skeleton
    x = [0] * (7 * tri.n)
    for t in range(tri.n):
        for v in range(4):
            if sk.vertex_of[t][v] == vertex:
                x[7 * t + v] += 1
    return tuple(x)


@dataclass
class ChiFunctional:
    coeffs: list[Fraction]

    def __call__(self, v: Sequence) -> Fraction:
        return sum((a * x for a, x in zip(self.coeffs, v) if x), Fraction(0))


def chi_functional(tri: Triangulation) -> ChiFunctional:
    """a_i = 1 + (edge terms) + (vertex terms) for each normal disk type."""
    sk = tri.skeleton
    coeffs = []
    half = Fraction(1, 2)
    for t in range(tri.n):
        def arc(f):
            return -1 if tri.adj[t][f] is None else -half

        def corner(a, b):
            return Fraction(1, sk.edge_degree[sk.edge_of[t][EDGE_INDEX[(a, b)]]])

        for v in range(4):
            a = Fraction(1)
            for f in range(4):
                if f != v:
                    a += arc(f)
                    a += corner(v, f)
            coeffs.append(a)
        for (a0, a1), (b0, b1) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]:
            a = Fraction(1)
            for f in range(4):
                a += arc(f)
            for x in (a0, a1):
                for y in (b0, b1):
                    a += corner(x, y)
            coeffs.append(a)
    return ChiFunctional(coeffs)


def euler_characteristic(chi: ChiFunctional, v: Sequence, system: Optional[MatchingSystem] = None) -> Fraction:
    if any(x < 0 for x in v) or not satisfies_quad_condition(v):
        raise InadmissibleVector("vector is negative or breaks the quadrilateral condition")
    if system is not None and not system.satisfied_by(v):
        raise InadmissibleVector("vector breaks the matching equations")
    return chi(v)


def arc_counts(tri: Triangulation, v: Sequence, t: int, f: int) -> dict[int, int]:
    """Normal arcs in face f of tetrahedron t, keyed by the corner they cut."""
    return {u: v[7 * t + u] + v[quad_col(t, u, f)] for u in FACE_VERTS[f]}


def boundary_arc_counts(tri: Triangulation, v: Sequence) -> dict[BoundaryLabel, int]:
    out = {lab: 0 for lab in BoundaryLabel}
    for (t, f), lab in tri.labels.items():
        out[lab] += sum(arc_counts(tri, v, t, f).values())
    return out


def boundary_curve_count(tri: Triangulation, v: Sequence) -> int:
    """Number of closed curves the surface cuts out on the boundary."""
    ids: dict[tuple[int, int, int, int], int] = {}
    parent: list[int] = []

    def node(key):
        if key not in ids:
            ids[key] = len(parent)
            parent.append(len(parent))
        return ids[key]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (t, f) in tri.labels:
        counts = arc_counts(tri, v, t, f)
        for u, cnt in counts.items():
            for j in range(cnt):
                node((t, f, u, j))
    for (t, f) in tri.labels:
        counts = arc_counts(tri, v, t, f)
        fv = FACE_VERTS[f]
        for a in range(3):
            i, j = fv[a], fv[(a + 1) % 3]
            total = counts[i] + counts[j]
            t2, f2, i2, j2 = walk_to_boundary(tri, t, f, i, j)
            other = arc_counts(tri, v, t2, f2)
            for pos in range(total):
                mine = (t, f, i, pos) if pos < counts[i] else (t, f, j, total - 1 - pos)
                theirs = (t2, f2, i2, pos) if pos < other[i2] else (t2, f2, j2, total - 1 - pos)
                a_, b_ = find(ids[mine]), find(ids[theirs])
                if a_ != b_:
                    parent[a_] = b_
    return len({find(x) for x in range(len(parent))})


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
    return g


def is_sum_of_vertex_links(tri: Triangulation, v: Sequence) -> bool:
    if any(v[7 * t + 4 + k] for t in range(tri.n) for k in range(3)):
        return False
    sk = tri.skeleton
    level: dict[int, int] = {}
    for t in range(tri.n):
        for u in range(4):
            k = sk.vertex_of[t][u]
            if level.setdefault(k, v[7 * t + u]) != v[7 * t + u]:
                return False
    return any(level.values())


def edge_weight(v: Sequence, t: int, a: int, b: int) -> int:
    """Points in which the surface meets edge ab of tetrahedron t."""
    q = QUAD_OF[(a, b)]
    return v[7 * t + a] + v[7 * t + b] + sum(v[7 * t + 4 + k] for k in range(3) if k != q)


def label_vertices(tri: Triangulation, label: BoundaryLabel) -> set[int]:
    sk = tri.skeleton
    out = set()
    for (t, f), lab in tri.labels.items():
        if lab == label:
            for u in FACE_VERTS[f]:
                out.add(sk.vertex_of[t][u])
    return out


def skeleton_path(tri: Triangulation, sources: set[int], targets: set[int]) -> list[tuple[int, int, int]]:
    """Edges (t, a, b) of a spanning-tree path from a source vertex to a
    target vertex, found by breadth-first search from the lowest sources."""
    sk = tri.skeleton
    nbrs: dict[int, list[tuple[int, int, int, int]]] = {}
    seen_edges = set()
    for t in range(tri.n):
        for e, (a, b) in enumerate(EDGES):
            k = sk.edge_of[t][e]
            if k in seen_edges:
                continue
            seen_edges.add(k)
            va, vb = sk.vertex_of[t][a], sk.vertex_of[t][b]
            nbrs.setdefault(va, []).append((vb, t, a, b))
            nbrs.setdefault(vb, []).append((va, t, b, a))
    start = sorted(sources)
    prev: dict[int, Optional[tuple[int, int, int, int]]] = {s: None for s in start}
    queue = deque(start)
    while queue:
        x = queue.popleft()
        if x in targets:
            path = []
            while prev[x] is not None:
                y, t, a, b = prev[x]
                path.append((t, a, b))
                x = y
            return path[::-1]
        for y, t, a, b in nbrs.get(x, []):
            if y not in prev:
                prev[y] = (x, t, a, b)
                queue.append(y)
    raise NoPath("no 1-skeleton path between the requested boundary parts")


def is_classicalization_parity(tri: Triangulation, v: Sequence, copy: Optional[BoundaryLabel] = None) -> bool:
    """Odd number of intersections between the surface and a path from the
    knot torus to the surface copy that the surface does not touch."""
    if copy is None:
        arcs = boundary_arc_counts(tri, v)
        if arcs[BoundaryLabel.SurfaceCopy0] and not arcs[BoundaryLabel.SurfaceCopy1]:
            copy = BoundaryLabel.SurfaceCopy0
        elif arcs[BoundaryLabel.SurfaceCopy1] and not arcs[BoundaryLabel.SurfaceCopy0]:
            copy = BoundaryLabel.SurfaceCopy1
        else:
            raise NoPath("surface boundary is not confined to one surface copy")
    far = BoundaryLabel.SurfaceCopy1 if copy == BoundaryLabel.SurfaceCopy0 else BoundaryLabel.SurfaceCopy0
    src = label_vertices(tri, BoundaryLabel.KnotTorus)
    dst = label_vertices(tri, far)
    if not src or not dst:
        raise NoPath("missing knot torus or surface copy")
    path = skeleton_path(tri, src, dst)
    return sum(edge_weight(v, t, a, b) for t, a, b in path) % 2 == 1


# -- classification ------------------------------------------------------------


@dataclass
class SurfaceReport:
    euler: Fraction
    closed: bool
    boundary_arcs: dict
    boundary_curves: int
    gcd: int
    tag: str
    half_tag: Optional[str] = None  # class of v/2 when gcd is 2 and v/2 is admissible
    notes: list[str] = field(default_factory=list)


def check_admissible(tri: Triangulation, v: Sequence, system: Optional[MatchingSystem] = None) -> None:
    if len(v) != 7 * tri.n:
        raise InadmissibleVector(f"expected {7 * tri.n} coordinates, got {len(v)}")
    if any(x < 0 for x in v):
        raise InadmissibleVector("negative coordinate")
    if not satisfies_quad_condition(v):
        raise InadmissibleVector("quadrilateral condition fails")
    system = system or matching_system(tri)
    if not system.satisfied_by(v):
        raise InadmissibleVector("matching equations fail")


def _parity_or_false(tri: Triangulation, v: Sequence) -> bool:
    # without a knot torus there is nothing to classicalize
    try:
        return is_classicalization_parity(tri, v)
    except NoPath:
        return False


def classify_surface(tri: Triangulation, v: Sequence[int], system: Optional[MatchingSystem] = None,
                     chi: Optional[ChiFunctional] = None, _half: bool = True) -> SurfaceReport:
    check_admissible(tri, v, system)
    if not any(v):
        raise InadmissibleVector("zero vector")
    chi = chi or chi_functional(tri)
    e = chi(v)
    arcs = boundary_arc_counts(tri, v)
    closed = not any(arcs.values())
    g = vector_gcd(v)
    curves = 0 if closed else boundary_curve_count(tri, v)
    s0 = arcs[BoundaryLabel.SurfaceCopy0] > 0
    s1 = arcs[BoundaryLabel.SurfaceCopy1] > 0
    others = arcs[BoundaryLabel.KnotTorus] + arcs[BoundaryLabel.Other]
    if is_sum_of_vertex_links(tri, v):
        tag = "VertexLink"
    elif closed and e == 2 and g == 1:
        tag = "Sphere2"
    elif e == 0 and g == 1 and curves == 2 and s0 and s1 and not others:
        tag = "VerticalAnnulus"
    elif e == 0 and g == 1 and curves == 2 and (s0 != s1) and not others and _parity_or_false(tri, v):
        tag = "ClassicalizationAnnulus"
    else:
        tag = "Other"
    report = SurfaceReport(e, closed, {k.name: a for k, a in arcs.items()}, curves, g, tag)
    if _half and g == 2:
        halfv = [x // 2 for x in v]
        try:
            report.half_tag = classify_surface(tri, halfv, system, chi, _half=False).tag
        except InadmissibleVector:
            report.half_tag = None
    return report


def hlp_bound(n: int) -> int:
    return 2 ** (7 * n - 1)


def verify_vertex_witness(system: MatchingSystem, v: Sequence[int]) -> bool:
    """Deterministic check that integer vector v spans an admissible
    extreme ray of the solution cone."""
    t = system.ncols
    if len(v) != t or not any(v):
        return False
    if any((not isinstance(x, int)) or x < 0 for x in v):
        return False
    bound = hlp_bound(system.n)
    if any(x > bound for x in v):
        return False
    if not satisfies_quad_condition(v):
        return False
    if not system.satisfied_by(v):
        return False
    rows = system.dense()
    for i in range(t):
        if v[i] == 0:
            r = [0] * t
            r[i] = 1
            rows.append(r)
    return bareiss_rank(rows) == t - 1


def surface_components(tri: Triangulation, v: Sequence[int]) -> list[tuple[tuple[int, ...], bool]]:
    """Split an admissible integer vector into its connected pieces.

    Returns (vector, has_boundary) per component, sorted by vector.  Normal
    disks of one type are stacked in a fixed order: triangles outward from
    their vertex, quadrilaterals starting from the side containing vertex 0.
    """
    ids: dict[tuple, int] = {}
    for t in range(tri.n):
        for k in range(7):
            for j in range(v[7 * t + k]):
                ids[(t, k, j)] = len(ids)
    parent = list(range(len(ids)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def arc_disk(t: int, f: int, u: int, pos: int) -> tuple:
        nt = v[7 * t + u]
        if pos < nt:
            return (t, u, pos)
        q = QUAD_OF[(u, f)]
        j = pos - nt
        nq = v[7 * t + 4 + q]
        return (t, 4 + q, j if 0 in (u, f) else nq - 1 - j)

    touches = set()
    for t in range(tri.n):
        for f in range(4):
            g = tri.adj[t][f]
            for u in FACE_VERTS[f]:
                total = v[7 * t + u] + v[quad_col(t, u, f)]
                if g is None:
                    for pos in range(total):
                        touches.add(ids[arc_disk(t, f, u, pos)])
                    continue
                t2, p = g
                if (t2, p[f]) < (t, f):
                    continue
                for pos in range(total):
                    a = find(ids[arc_disk(t, f, u, pos)])
                    b = find(ids[arc_disk(t2, p[f], p[u], pos)])
                    if a != b:
                        parent[a] = b
    groups: dict[int, list[tuple]] = {}
    for key, i in ids.items():
        groups.setdefault(find(i), []).append(key)
    out = []
    for root, keys in groups.items():
        vec = [0] * len(v)
        for (t, k, _) in keys:
            vec[7 * t + k] += 1
        bnd = any(ids[key] in touches for key in keys)
        out.append((tuple(vec), bnd))
    return sorted(out)
