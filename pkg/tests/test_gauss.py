import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import VIRTUAL_TREFOIL, code_text, gauss_words, is_planar_shadow
from vknot.gauss import (
    ConsistencyError,
    GaussCodeError,
    GaussSyntaxError,
    MultiComponentError,
    Side,
    parse_gauss_code,
    ribbon_genus,
    serialize_gauss_code,
)


def test_two_crossing_example():
    code = parse_gauss_code("+>1-<2+>2-<1")
    assert code.c == 2
    assert len(code.components) == 1
    assert len(code.components[0]) == 4


def test_empty_code_is_zero_crossing_knot():
    code = parse_gauss_code("")
    assert code.c == 0
    assert code.components == ((),)
    assert serialize_gauss_code(code) == ""


def test_virtual_trefoil_transcription():
    # O1+ O2+ U1+ U2+ in over/under-and-sign notation; the side of each
    # under pass is the opposite of its over pass
    code = parse_gauss_code(VIRTUAL_TREFOIL)
    assert code.c == 2
    assert [p.over for p in code.components[0]] == [True, True, False, False]
    assert serialize_gauss_code(code) == VIRTUAL_TREFOIL


@pytest.mark.parametrize("text, err", [
    ("+>1+>1", ConsistencyError),
    ("-<1-<1", ConsistencyError),
    ("+>1", ConsistencyError),
    ("+>1-<1+>1", ConsistencyError),
    ("+>0-<0", ConsistencyError),
    ("+>1-<x", GaussSyntaxError),
    ("*>1-<1", GaussSyntaxError),
    ("+1-<1", GaussSyntaxError),
])
def test_rejections(text, err):
    with pytest.raises(err):
        parse_gauss_code(text)


def test_multi_component():
    code = parse_gauss_code("+>1-<2;+<2->1")
    assert len(code.components) == 2
    with pytest.raises(MultiComponentError):
        parse_gauss_code("+>1-<2;+<2->1", require_knot=True)


def test_whitespace_and_renumbering():
    code = parse_gauss_code(" +>7 -<3\n+>3 -<7 ")
    assert code.c == 2
    assert code.renumbering == {7: 1, 3: 2}
    assert serialize_gauss_code(code) == "+>1-<2+>2-<1"


def test_non_string_rejected():
    with pytest.raises(GaussSyntaxError):
        parse_gauss_code(None)


@st.composite
def valid_codes(draw, max_c=8):
    c = draw(st.integers(0, max_c))
    seq = [k for k in range(1, c + 1) for _ in range(2)]
    seq = draw(st.permutations(seq))
    over_first = draw(st.lists(st.booleans(), min_size=c, max_size=c))
    sides = draw(st.lists(st.sampled_from("<>"), min_size=c, max_size=c))
    seen, toks = set(), []
    for k in seq:
        first = k not in seen
        seen.add(k)
        over = over_first[k - 1] == first
        side = draw(st.sampled_from("<>")) if draw(st.booleans()) else sides[k - 1]
        toks.append(("+" if over else "-") + side + str(k))
    cut = draw(st.integers(0, len(toks)))
    if draw(st.booleans()) and 0 < cut < len(toks):
        return "".join(toks[:cut]) + ";" + "".join(toks[cut:])
    return "".join(toks)


@given(valid_codes())
def test_round_trip(text):
    code = parse_gauss_code(text)
    assert parse_gauss_code(serialize_gauss_code(code)) == code


@given(valid_codes())
def test_encoding_length(text):
    code = parse_gauss_code(text)
    out = serialize_gauss_code(code)
    digits = len(str(max(code.c, 1)))
    assert 2 * code.c * 3 <= len(out) - out.count(";") <= 2 * code.c * (2 + digits)


@given(st.text(alphabet="+-<>;0123456789 x", max_size=30))
def test_rejection_is_total(text):
    try:
        parse_gauss_code(text)
    except GaussCodeError as exc:
        assert type(exc) in (GaussSyntaxError, ConsistencyError, MultiComponentError)


def test_sides_are_parsed():
    code = parse_gauss_code("+>1-<1")
    assert [p.side for p in code.components[0]] == [Side.LEFT_TO_RIGHT, Side.RIGHT_TO_LEFT]


# -- genus of the abstract diagram -------------------------------------------------


@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_ribbon_genus_zero_iff_planar_shadow(c):
    """Exhaustive over all words and side patterns with c crossings."""
    for word in gauss_words(c):
        for side_bits in itertools.product("<>", repeat=c):
            sides = dict(zip(range(1, c + 1), side_bits))
            text = code_text(word, {k: True for k in sides}, sides)
            planar = is_planar_shadow(word, sides)
            assert (ribbon_genus(parse_gauss_code(text)) == 0) == planar, text


def test_ribbon_genus_ignores_over_under():
    rng = random.Random(5)
    for _ in range(200):
        c = rng.randint(1, 6)
        word = rng.choice(gauss_words(c))
        sides = {k: rng.choice("<>") for k in range(1, c + 1)}
        a = code_text(word, {k: rng.random() < 0.5 for k in sides}, sides)
        b = code_text(word, {k: rng.random() < 0.5 for k in sides}, sides)
        assert ribbon_genus(parse_gauss_code(a)) == ribbon_genus(parse_gauss_code(b))


def test_virtual_trefoil_has_genus_one():
    assert ribbon_genus(parse_gauss_code(VIRTUAL_TREFOIL)) == 1
