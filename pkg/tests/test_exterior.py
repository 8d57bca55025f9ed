import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import PLANAR_TREFOIL, VIRTUAL_TREFOIL, code_text, gauss_words
from vknot.exterior import (
    BuildError,
    build_canonical_exterior,
    build_canonical_surface,
    build_thickened_surface,
    expected_census,
    one_vertex_reduction,
)
from vknot.gauss import parse_gauss_code, ribbon_genus
from vknot.normal import label_vertices
from vknot.tricomplex import (
    BoundaryLabel,
    barycentric_subdivide,
    boundary_census,
    census_signature,
    components,
    is_valid_triangulation,
)

S0, S1, K = BoundaryLabel.SurfaceCopy0, BoundaryLabel.SurfaceCopy1, BoundaryLabel.KnotTorus


@st.composite
def knot_codes(draw, max_c=7):
    c = draw(st.integers(1, max_c))
    word = draw(st.sampled_from(gauss_words(c)))
    over = {k: draw(st.booleans()) for k in range(1, c + 1)}
    sides = {k: draw(st.sampled_from("<>")) for k in range(1, c + 1)}
    return code_text(word, over, sides)


@given(knot_codes())
@settings(max_examples=150, deadline=None)
def test_surface_size_and_genus(text):
    code = parse_gauss_code(text)
    surf, g = build_canonical_surface(code)
    assert len(surf.triangles) == 8 * code.c
    assert g == surf.genus == ribbon_genus(code)
    assert g <= 1 + 3 * len(surf.triangles) // 2
    # closed surface: every edge in exactly two triangles
    uses = {}
    for edges in surf.triangle_edges:
        for e in edges:
            uses[e] = uses.get(e, 0) + 1
    assert set(uses.values()) == {2}
    assert surf.num_edges == len(uses)


def test_surface_genus_examples():
    assert build_canonical_surface(parse_gauss_code(PLANAR_TREFOIL))[1] == 0
    assert build_canonical_surface(parse_gauss_code(VIRTUAL_TREFOIL))[1] == 1


def test_zero_crossings_rejected():
    with pytest.raises(BuildError):
        build_canonical_surface(parse_gauss_code(""))


@pytest.fixture(scope="module")
def raw_exteriors():
    return {s: build_canonical_exterior(parse_gauss_code(s)) for s in (VIRTUAL_TREFOIL, PLANAR_TREFOIL)}


@pytest.mark.parametrize("text, genus", [(VIRTUAL_TREFOIL, 1), (PLANAR_TREFOIL, 0)])
def test_exterior_census(raw_exteriors, text, genus):
    tri = raw_exteriors[text]
    assert is_valid_triangulation(tri)
    census = boundary_census(tri)
    assert sorted((c.label.value, c.genus) for c in census) == sorted(
        [(S0.value, genus), (S1.value, genus), (K.value, 1)])
    assert census_signature(tri) == expected_census(parse_gauss_code(text))
    assert len(components(tri)) == 1
    assert set(tri.skeleton.vertex_link) <= {"Sphere", "Disk"}
    assert sum(c.euler for c in census) == 2 * tri.skeleton.euler


def test_exterior_size_is_linear(raw_exteriors):
    # 8 triangles per crossing, 3 prisms of 3 tetrahedra over each, 24^2
    # from two subdivisions
    for text, tri in raw_exteriors.items():
        c = parse_gauss_code(text).c
        assert tri.n <= 8 * 9 * 24 * 24 * c


def test_subdivision_keeps_thickened_census():
    surf, _ = build_canonical_surface(parse_gauss_code(VIRTUAL_TREFOIL))
    tri, _ = build_thickened_surface(surf)
    once = barycentric_subdivide(tri)
    assert census_signature(tri) == census_signature(once) == [("SurfaceCopy0", 1), ("SurfaceCopy1", 1)]


# -- one-vertex reduction -----------------------------------------------------------


@pytest.fixture(scope="module")
def thickened_torus():
    surf, _ = build_canonical_surface(parse_gauss_code(VIRTUAL_TREFOIL))
    return build_thickened_surface(surf)[0]


def test_one_vertex_reduction_thickened_torus(thickened_torus):
    tri = thickened_torus
    assert len(label_vertices(tri, S0)) == len(label_vertices(tri, S1)) == 8
    out0 = one_vertex_reduction(tri, S0)
    assert len(label_vertices(out0, S0)) == 1
    assert len(label_vertices(out0, S1)) == 8
    out1 = one_vertex_reduction(out0, S1)
    assert len(label_vertices(out1, S1)) == 1
    assert tri.n >= out0.n >= out1.n
    for out in (out0, out1):
        assert is_valid_triangulation(out)
        assert census_signature(out) == census_signature(tri)


def test_one_vertex_reduction_identity(thickened_torus):
    once = one_vertex_reduction(thickened_torus, S0)
    assert one_vertex_reduction(once, S0) is once
