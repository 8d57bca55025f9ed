"""Independent oracles used to freeze expected values.

Nothing here calls into the code paths the tests check: vertex solutions
come from support enumeration, planarity from networkx's embedding checker,
and the triangulation census from raw face pairings.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import networkx as nx

from vknot.tricomplex import PERMS, BoundaryLabel, Triangulation, inverse, is_valid_triangulation

# -- vertex solutions by support enumeration ---------------------------------------


def brute_force_vertices(rows, ncols: int) -> set[tuple[Fraction, ...]]:
    """Vertices of {x >= 0, sum x = 1, A x = 0}.

    A support S carries a vertex iff the columns of A on S have a
    one-dimensional kernel spanned by a vector positive on all of S.  Such
    an S is a circuit: every proper subset is independent and S is
    connected in the graph joining columns that share a row.  Connected
    sets are enumerated once each (extension-set method) and a branch stops
    at the first dependent set, which is the only candidate it can yield.
    """
    rows = [list(map(int, r)) for r in rows if any(r)]
    cols = [[r[j] for r in rows] for j in range(ncols)]
    touch = [{i for i, r in enumerate(rows) if r[j]} for j in range(ncols)]
    nbrs = [{k for k in range(ncols) if k != j and touch[j] & touch[k]} for j in range(ncols)]
    found: set[tuple[Fraction, ...]] = set()

    def reduce(v, combo, basis):
        # fraction-free: keep v integral, track v as a combination of columns
        for bv, piv, bc in basis:
            if v[piv]:
                a, b = bv[piv], v[piv]
                v = [a * x - b * y for x, y in zip(v, bv)]
                combo = {k: a * combo.get(k, 0) - b * bc.get(k, 0) for k in combo.keys() | bc.keys()}
        return v, combo

    def record(combo, members):
        combo = {k: c for k, c in combo.items() if c}
        if set(combo) != members or len({c > 0 for c in combo.values()}) != 1:
            return
        total = sum(combo.values())
        x = [Fraction(0)] * ncols
        for k, c in combo.items():
            x[k] = Fraction(c, total)
        found.add(tuple(x))

    def extend(members, basis, ext, root, near):
        ext = list(ext)
        while ext:
            w = ext.pop()
            v, combo = reduce(cols[w][:], {w: 1}, basis)
            grown = members | {w}
            if not any(v):
                record(combo, grown)
                continue
            piv = next(i for i, x in enumerate(v) if x)
            fresh = [u for u in nbrs[w] if u > root and u not in near and u not in grown]
            extend(grown, basis + [(v, piv, combo)], ext + fresh, root, near | nbrs[w] | {w})

    for root in range(ncols):
        v = cols[root][:]
        if not any(v):
            record({root: 1}, {root})
            continue
        piv = next(i for i, x in enumerate(v) if x)
        start = [u for u in nbrs[root] if u > root]
        extend({root}, [(v, piv, {root: 1})], start, root, nbrs[root] | {root})
    return found


def kernel_dimension(rows, ncols: int) -> int:
    """Nullity by plain Fraction elimination."""
    mat = [list(map(Fraction, r)) for r in rows]
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col] / mat[rank][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return ncols - rank


# -- triangulation census --------------------------------------------------------------


def _signature(adj, start: int, relabel) -> tuple:
    n = len(adj)
    order = {start: 0}
    pi = {start: relabel}
    queue = [start]
    out = []
    for t in queue:
        inv = inverse(pi[t])
        for F in range(4):
            f = inv[F]
            g = adj[t][f]
            if g is None:
                out.append((-1,))
                continue
            t2, p = g
            if t2 not in order:
                order[t2] = len(order)
                # keep vertex images consistent across the gluing
                pi[t2] = tuple(pi[t][inverse(p)[v]] for v in range(4))
                queue.append(t2)
            q = tuple(pi[t2][p[inv[v]]] for v in range(4))
            out.append((order[t2], q))
    return tuple(out) if len(order) == n else ()


def isomorphism_signature(adj) -> tuple:
    return min(_signature(adj, s, p) for s in range(len(adj)) for p in PERMS)


def _pairings(faces: list):
    if not faces:
        yield []
        return
    first, rest = faces[0], faces[1:]
    yield from _pairings(rest)
    for i, other in enumerate(rest):
        for tail in _pairings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + tail


def _assemble(n: int, pairs, perms) -> list:
    adj = [[None] * 4 for _ in range(n)]
    for ((t, f), (t2, f2)), p in zip(pairs, perms):
        if p[f] != f2:
            return None
        adj[t][f] = (t2, p)
        adj[t2][f2] = (t, inverse(p))
    return adj


def census(n: int) -> list[Triangulation]:
    """Every connected valid triangulation with ``n`` tetrahedra (n <= 2),
    one per isomorphism class, boundary labelled Other."""
    if n not in (1, 2):
        raise ValueError("the full census is only generated for one or two tetrahedra")
    # a connected pair can always be relabelled so that face 3 of each is
    # glued to the other by the identity
    fixed = [] if n == 1 else [((0, 3), (1, 3))]
    free = [(t, f) for t in range(n) for f in range(4) if not (n == 2 and f == 3)]
    seen = {}
    for pairs in _pairings(free):
        choices = [[p for p in PERMS if p[f] == f2 and (t != t2 or f != f2)] for (t, f), (t2, f2) in pairs]
        for perms in itertools.product(*choices):
            adj = _assemble(n, fixed + pairs, [(0, 1, 2, 3)] * len(fixed) + list(perms))
            if adj is None:
                continue
            sig = isomorphism_signature(adj)
            if sig in seen:
                continue
            tri = Triangulation(adj)
            if is_valid_triangulation(tri):
                seen[sig] = tri
    return [seen[k] for k in sorted(seen)]


def random_gluing(n: int, rng: random.Random, closed_bias: float = 0.7) -> Triangulation:
    """A random connected triangulation: a random spanning tree of gluings,
    then extra gluings among the remaining faces."""
    while True:
        adj = [[None] * 4 for _ in range(n)]
        for t in range(1, n):
            f = rng.choice([g for g in range(4) if adj[t][g] is None])
            u = rng.randrange(t)
            options = [g for g in range(4) if adj[u][g] is None]
            g = rng.choice(options)
            p = rng.choice([q for q in PERMS if q[f] == g])
            adj[t][f] = (u, p)
            adj[u][g] = (t, inverse(p))
        free = [(t, f) for t in range(n) for f in range(4) if adj[t][f] is None]
        rng.shuffle(free)
        while len(free) >= 2 and rng.random() < closed_bias:
            (t, f), (u, g) = free.pop(), free.pop()
            p = rng.choice([q for q in PERMS if q[f] == g])
            adj[t][f] = (u, p)
            adj[u][g] = (t, inverse(p))
        tri = Triangulation(adj)
        if is_valid_triangulation(tri):
            return tri


def vertex_solution_corpus(seed: int = 2024) -> list[Triangulation]:
    """Full census for n <= 2, a seeded sample at n = 3 and ten random
    gluings with n <= 4."""
    rng = random.Random(seed)
    out = census(1) + census(2)
    out += [random_gluing(3, rng) for _ in range(30)]
    out += [random_gluing(rng.randint(1, 4), rng) for _ in range(10)]
    return out


# -- Gauss codes -------------------------------------------------------------------------


def gauss_words(c: int) -> list[tuple[int, ...]]:
    """Double occurrence words on 1..c with letters in first-appearance order."""
    out = []

    def rec(seq, counts, nxt):
        if len(seq) == 2 * c:
            out.append(tuple(seq))
            return
        for k in range(1, nxt):
            if counts[k] == 1:
                counts[k] = 2
                rec(seq + [k], counts, nxt)
                counts[k] = 1
        if nxt <= c:
            counts[nxt] = 1
            rec(seq + [nxt], counts, nxt + 1)
            del counts[nxt]

    rec([], {}, 1)
    return out


def code_text(word, over_first, sides) -> str:
    """``over_first[k]``: the first pass of k goes over; ``sides[k]``: side
    symbol of the first pass.  The second pass gets the opposite symbols."""
    seen = set()
    toks = []
    flip = {">": "<", "<": ">"}
    for k in word:
        first = k not in seen
        seen.add(k)
        over = over_first[k] if first else not over_first[k]
        side = sides[k] if first else flip[sides[k]]
        toks.append(("+" if over else "-") + side + str(k))
    return "".join(toks)


def evenly_interlaced(word) -> bool:
    """Necessary for planarity: an even number of letters between the two
    occurrences of every letter."""
    first: dict[int, int] = {}
    for i, k in enumerate(word):
        if k in first and (i - first[k]) % 2 == 0:
            return False
        first.setdefault(k, i)
    return True


def is_planar_shadow(word, sides) -> bool:
    """Whether the curve with these crossing orientations embeds in the plane.

    Each crossing becomes a node with the four half-edges in counter-clockwise
    order; every arc between passes is subdivided twice so the graph stays
    simple.  networkx rejects embeddings that violate Euler's formula.
    """
    L = len(word)
    if L == 0:
        return True
    occ: dict[int, list[int]] = {}
    for i, k in enumerate(word):
        occ.setdefault(k, []).append(i)
    emb = nx.PlanarEmbedding()

    def arc_end(i, leaving):
        # arc j runs from pass j to pass j+1 through nodes (j, 0) and (j, 1)
        return ("a", i, 0) if leaving else ("a", (i - 1) % L, 1)

    for k, (a, b) in occ.items():
        if sides[k] == ">":
            east, west = arc_end(b, True), arc_end(b, False)
        else:
            east, west = arc_end(b, False), arc_end(b, True)
        ring = [east, arc_end(a, True), west, arc_end(a, False)]
        node = ("x", k)
        emb.add_half_edge_first(node, ring[0])
        for prev, cur in zip(ring, ring[1:]):
            emb.add_half_edge_ccw(node, cur, prev)
    for j in range(L):
        u, v = ("a", j, 0), ("a", j, 1)
        start, end = ("x", word[j]), ("x", word[(j + 1) % L])
        emb.add_half_edge_first(u, start)
        emb.add_half_edge_ccw(u, v, start)
        emb.add_half_edge_first(v, u)
        emb.add_half_edge_ccw(v, end, u)
    try:
        emb.check_structure()
    except nx.NetworkXException:
        return False
    return True


def classical_codes(max_c: int) -> list[str]:
    """Every Gauss code (up to crossing renumbering) with at most ``max_c``
    crossings whose shadow is planar, i.e. every diagram without virtual
    crossings.  Includes the empty code."""
    out = [""]
    for c in range(1, max_c + 1):
        for word in filter(evenly_interlaced, gauss_words(c)):
            for side_bits in itertools.product("<>", repeat=c):
                sides = dict(zip(range(1, c + 1), side_bits))
                if not is_planar_shadow(word, sides):
                    continue
                for over_bits in itertools.product((True, False), repeat=c):
                    out.append(code_text(word, dict(zip(range(1, c + 1), over_bits)), sides))
    return out


VIRTUAL_TREFOIL = "+>1+>2-<1-<2"
# alternating trefoil; side pattern picked by is_planar_shadow
PLANAR_TREFOIL = "+>1-<2+>3-<1+>2-<3"
# a genus-one diagram of the unknot: one virtual crossing away from a two-kink loop
GENUS_ONE_UNKNOT = "+>1+<2-<1->2"


def to_regina(tri: Triangulation):
    """The same gluings as a regina Triangulation3 (labels dropped)."""
    import regina

    out = regina.Triangulation3()
    tets = [out.newTetrahedron() for _ in range(tri.n)]
    for t in range(tri.n):
        for f in range(4):
            g = tri.adj[t][f]
            if g is not None and (g[0], g[1][f]) >= (t, f) and tets[t].adjacentTetrahedron(f) is None:
                tets[t].join(f, tets[g[0]], regina.Perm4(*g[1]))
    return out


def labelled(tri: Triangulation, label: BoundaryLabel) -> Triangulation:
    return Triangulation([list(r) for r in tri.adj], {k: label for k in tri.labels})
