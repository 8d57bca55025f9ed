import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import census, kernel_dimension, labelled, random_gluing
from vknot.normal import (
    InadmissibleVector,
    MatchingSystem,
    adjacency_test,
    chi_functional,
    classify_surface,
    edge_weight,
    enumerate_vertex_solutions,
    euler_characteristic,
    hlp_bound,
    is_classicalization_parity,
    label_vertices,
    matching_system,
    min_integer_multiple,
    satisfies_quad_condition,
    surface_components,
    vertex_link_vector,
    verify_vertex_witness,
)
from vknot.tricomplex import EDGES, BoundaryLabel, Triangulation

ONE_TET = census(1)
CLOSED = [t for t in ONE_TET + census(2) if t.is_closed()]
BOUNDED = [t for t in ONE_TET + census(2) if not t.is_closed()]

seeds = st.integers(0, 2**32 - 1)


def two_glued():
    adj = [[None] * 4 for _ in range(2)]
    adj[0][3] = (1, (0, 1, 2, 3))
    adj[1][3] = (0, (0, 1, 2, 3))
    return Triangulation(adj)


def unit(i, t):
    return tuple(F(int(j == i)) for j in range(t))


def test_free_tetrahedron():
    system = matching_system(Triangulation.free(1))
    assert system.rows == []
    assert enumerate_vertex_solutions(system) == sorted(unit(i, 7) for i in range(7))


def test_two_glued_rows():
    assert len(matching_system(two_glued()).rows) == 3


def test_plane_through_a_corner():
    system = MatchingSystem(3, [[(0, 1), (1, -1)]])
    assert enumerate_vertex_solutions(system) == [(0, 0, 1), (F(1, 2), F(1, 2), 0)]


@pytest.mark.parametrize("adjacency", ["rank", "combinatorial"])
def test_adjacency_modes_agree(adjacency):
    for tri in ONE_TET + census(2)[:10]:
        system = matching_system(tri)
        assert enumerate_vertex_solutions(system, adjacency=adjacency) == enumerate_vertex_solutions(system)


def test_adjacency_examples():
    empty = MatchingSystem(3, [])
    e1, e2 = (1, 0, 0), (0, 1, 0)
    assert adjacency_test(e1, e2, empty, 0)
    assert not adjacency_test(e1, e1, empty, 0)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_adjacency_matches_face_dimension(seed):
    # u, w adjacent iff the smallest face holding both is an edge: the
    # solutions vanishing on Z(u) & Z(w) form a 2-dimensional cone
    rng = random.Random(seed)
    tri = random_gluing(rng.randint(1, 2), rng)
    system = matching_system(tri)
    verts = enumerate_vertex_solutions(system)
    rows = system.dense()
    for u, w in rng.sample(list(combinations(verts, 2)), min(10, len(verts) * (len(verts) - 1) // 2)):
        zeros = [i for i in range(system.ncols) if u[i] == 0 and w[i] == 0]
        pins = [[int(j == i) for j in range(system.ncols)] for i in zeros]
        assert adjacency_test(u, w, system, len(rows)) == (kernel_dimension(rows + pins, system.ncols) == 2)


def test_min_integer_multiple_examples():
    assert min_integer_multiple((F(1, 3), F(2, 3), 0, 0, 0, 0, 0)) == (3, (1, 2, 0, 0, 0, 0, 0))
    assert min_integer_multiple((F(1, 2), F(1, 6), F(1, 3), 0, 0, 0, 0)) == (6, (3, 1, 2, 0, 0, 0, 0))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_vertex_links_satisfy_matching(seed):
    rng = random.Random(seed)
    tri = random_gluing(rng.randint(1, 5), rng)
    system = matching_system(tri)
    assert len(system.rows) <= 6 * tri.n
    for k in range(len(tri.skeleton.vertex_link)):
        assert system.satisfied_by(vertex_link_vector(tri, k))


def test_link_euler_characteristic():
    for tri in CLOSED:
        chi = chi_functional(tri)
        for k in range(len(tri.skeleton.vertex_link)):
            assert euler_characteristic(chi, vertex_link_vector(tri, k)) == 2
    for tri in BOUNDED:
        chi = chi_functional(tri)
        for k, link in enumerate(tri.skeleton.vertex_link):
            assert euler_characteristic(chi, vertex_link_vector(tri, k)) == (1 if link == "Disk" else 2)
    assert euler_characteristic(chi_functional(CLOSED[0]), (0,) * 7 * CLOSED[0].n) == 0


def test_inadmissible_vectors():
    tri = ONE_TET[0]
    chi = chi_functional(tri)
    with pytest.raises(InadmissibleVector):
        euler_characteristic(chi, (0, 0, 0, 0, 1, 1, 0))
    with pytest.raises(InadmissibleVector):
        euler_characteristic(chi, (-1, 0, 0, 0, 0, 0, 0))
    with pytest.raises(InadmissibleVector):
        classify_surface(tri, (0,) * 7)
    with pytest.raises(InadmissibleVector):
        classify_surface(tri, (1,) * 6)


def test_vertex_link_classification():
    for tri in CLOSED + BOUNDED:
        for k in range(len(tri.skeleton.vertex_link)):
            assert classify_surface(tri, vertex_link_vector(tri, k)).tag == "VertexLink"


def closed_spheres():
    """Primitive admissible vertex solutions that are 2-spheres, with their
    triangulations, from the closed two-tetrahedron census."""
    out = []
    for tri in CLOSED:
        system = matching_system(tri)
        for x in enumerate_vertex_solutions(system, admissible_only=True):
            v = min_integer_multiple(x)[1]
            if classify_surface(tri, v, system).tag == "Sphere2":
                out.append((tri, v))
    return out


def test_doubled_sphere_is_other():
    spheres = closed_spheres()
    assert spheres
    for tri, v in spheres:
        report = classify_surface(tri, [2 * x for x in v])
        assert report.gcd == 2 and report.tag == "Other" and report.half_tag == "Sphere2"


def test_hlp_filter():
    tri = ONE_TET[0]
    system = matching_system(tri)
    assert verify_vertex_witness(system, (1, 0, 0, 0, 0, 0, 0))
    assert not verify_vertex_witness(system, (2 ** 7, 0, 0, 0, 0, 0, 0))
    assert hlp_bound(1) == 2 ** 6


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_vertex_witness_check(seed):
    rng = random.Random(seed)
    tri = random_gluing(rng.randint(1, 3), rng)
    system = matching_system(tri)
    verts = [min_integer_multiple(x)[1] for x in enumerate_vertex_solutions(system, admissible_only=True)]
    for v in verts:
        assert verify_vertex_witness(system, v)
        assert max(v) <= hlp_bound(tri.n)
    for u, w in combinations(verts[:12], 2):
        s = tuple(a + b for a, b in zip(u, w))
        if satisfies_quad_condition(s):
            assert not verify_vertex_witness(system, s)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_lifted_matches_direct(seed):
    rng = random.Random(seed)
    tri = random_gluing(rng.randint(1, 3), rng)
    system = matching_system(tri)
    for adm in (False, True):
        assert enumerate_vertex_solutions(system, admissible_only=adm, method="lifted") == \
            enumerate_vertex_solutions(system, admissible_only=adm)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_admissible_filter_and_scaling(seed):
    rng = random.Random(seed)
    tri = random_gluing(rng.randint(1, 3), rng)
    system = matching_system(tri)
    every = enumerate_vertex_solutions(system)
    admissible = enumerate_vertex_solutions(system, admissible_only=True)
    assert admissible == [x for x in every if satisfies_quad_condition(x)]
    for x in every:
        assert satisfies_quad_condition(min_integer_multiple(x)[1]) == satisfies_quad_condition(x)
    assert enumerate_vertex_solutions(system) == every


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_euler_characteristic_is_additive(seed):
    rng = random.Random(seed)
    tri = random_gluing(rng.randint(1, 3), rng)
    system = matching_system(tri)
    chi = chi_functional(tri)
    verts = [min_integer_multiple(x)[1] for x in enumerate_vertex_solutions(system, admissible_only=True)]
    for u, w in combinations(verts[:12], 2):
        s = tuple(a + b for a, b in zip(u, w))
        if satisfies_quad_condition(s):
            assert euler_characteristic(chi, s) == euler_characteristic(chi, u) + euler_characteristic(chi, w)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_edge_weight_is_well_defined(seed):
    rng = random.Random(seed)
    tri = random_gluing(rng.randint(1, 3), rng)
    sk = tri.skeleton
    for x in enumerate_vertex_solutions(matching_system(tri), admissible_only=True):
        v = min_integer_multiple(x)[1]
        seen = {}
        for t in range(tri.n):
            for e, (a, b) in enumerate(EDGES):
                w = edge_weight(v, t, a, b)
                assert seen.setdefault(sk.edge_of[t][e], w) == w


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_components_sum_back(seed):
    rng = random.Random(seed)
    tri = random_gluing(rng.randint(1, 3), rng)
    system = matching_system(tri)
    chi = chi_functional(tri)
    for x in enumerate_vertex_solutions(system, admissible_only=True):
        v = min_integer_multiple(x)[1]
        doubled = [2 * a for a in v]
        parts = surface_components(tri, doubled)
        assert [sum(c) for c in zip(*(p for p, _ in parts))] == doubled
        assert sum(chi(p) for p, _ in parts) == chi(doubled)


def test_parity_zero_weight():
    tri = labelled(ONE_TET[0], BoundaryLabel.KnotTorus)
    adj, labels = tri.copy_data()
    labels[(0, 3)] = BoundaryLabel.SurfaceCopy1
    tri = Triangulation(adj, labels)
    # a triangle at vertex 3 misses every edge on the path into face 3
    assert not is_classicalization_parity(tri, (0, 0, 0, 0, 0, 0, 0), BoundaryLabel.SurfaceCopy0)


def random_path_parity(tri, v, far, rng):
    """Parity along a randomized depth-first path from the knot torus to
    ``far``."""
    sk = tri.skeleton
    nbrs = {}
    for t in range(tri.n):
        for e, (a, b) in enumerate(EDGES):
            va, vb = sk.vertex_of[t][a], sk.vertex_of[t][b]
            w = edge_weight(v, t, a, b)
            nbrs.setdefault(va, []).append((vb, w))
            nbrs.setdefault(vb, []).append((va, w))
    targets = label_vertices(tri, far)
    start = rng.choice(sorted(label_vertices(tri, BoundaryLabel.KnotTorus)))
    stack, seen = [(start, 0)], {start}
    while stack:
        x, parity = stack.pop()
        if x in targets:
            return parity
        nxt = nbrs[x][:]
        rng.shuffle(nxt)
        for y, w in nxt:
            if y not in seen:
                seen.add(y)
                stack.append((y, (parity + w) % 2))
    raise AssertionError("no path")


def test_parity_path_independence(unknot_scan):
    tri, found = unknot_scan
    annuli = [v for v, tag in found if tag == "ClassicalizationAnnulus"]
    assert annuli
    rng = random.Random(7)
    for v in annuli:
        expected = is_classicalization_parity(tri, v)
        arcs = classify_surface(tri, v).boundary_arcs
        far = BoundaryLabel.SurfaceCopy1 if arcs["SurfaceCopy0"] else BoundaryLabel.SurfaceCopy0
        for _ in range(20):
            assert random_path_parity(tri, v, far, rng) == expected


def test_trefoil_has_no_useful_surface(trefoil_scan):
    _, found = trefoil_scan
    tags = {tag for _, tag in found}
    assert found and not tags & {"Sphere2", "ClassicalizationAnnulus", "VerticalAnnulus"}
