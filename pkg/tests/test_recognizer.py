import json
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import GENUS_ONE_UNKNOT, PLANAR_TREFOIL, VIRTUAL_TREFOIL
from vknot.gauss import parse_gauss_code
from vknot.recognizer import (
    Budget,
    BudgetExceeded,
    MalformedWitness,
    Verdict,
    format_witness,
    parse_witness,
    recognize,
    replay_witness,
    supporting_genus,
    vector_digest,
    verify_witness,
)


@pytest.fixture(scope="module")
def unknot_run(unknot_exterior):
    return recognize(GENUS_ONE_UNKNOT)


@pytest.fixture(scope="module")
def trefoil_run(trefoil_exterior):
    return recognize(VIRTUAL_TREFOIL)


@pytest.mark.parametrize("code", ["", "+>1-<1", "-<1+>1", PLANAR_TREFOIL, "+<1->2+<3->1+<2->3"])
def test_genus_zero_is_classical(code):
    verdict, trace = recognize(code)
    assert verdict is Verdict.Classical
    assert [s.action for s in trace.steps] == ["GenusZero"]
    assert trace.witness == []
    assert verify_witness(code, [])


def test_supporting_genus():
    assert supporting_genus(parse_gauss_code("")) == 0
    assert supporting_genus(parse_gauss_code(VIRTUAL_TREFOIL)) == 1
    assert supporting_genus(parse_gauss_code(GENUS_ONE_UNKNOT)) == 1


def test_recognize_rejects_links():
    with pytest.raises(ValueError):
        recognize("+>1-<2,-<1+>2")


def test_genus_one_unknot(unknot_run):
    verdict, trace = unknot_run
    assert verdict is Verdict.Classical
    assert trace.steps[-1].action == "ClassicalizationFound"
    assert len(trace.witness) == len([s for s in trace.steps if s.digest])
    assert verify_witness(GENUS_ONE_UNKNOT, trace.witness)


def test_virtual_trefoil(trefoil_run):
    verdict, trace = trefoil_run
    assert verdict is Verdict.NotClassical
    assert trace.steps[-1].action == "NoSurfaceFound"
    assert trace.witness == []
    assert not verify_witness(VIRTUAL_TREFOIL, [])


def test_trace_invariants(unknot_run, trefoil_run):
    for _, trace in (unknot_run, trefoil_run):
        witnessed = iter(trace.witness)
        for step in trace.steps:
            assert step.genus_after <= step.genus_before
            if step.digest is not None:
                assert step.digest == vector_digest(next(witnessed))
        assert next(witnessed, None) is None
        data = json.loads(trace.to_json())
        assert data["verdict"] == trace.verdict
        assert len(data["steps"]) == len(trace.to_lines()) - 2


def test_recognize_is_deterministic(unknot_run):
    again = recognize(GENUS_ONE_UNKNOT)
    assert again[0] is unknot_run[0]
    assert again[1].to_dict() == unknot_run[1].to_dict()


def test_tet_budget(trefoil_exterior):
    with pytest.raises(BudgetExceeded) as info:
        recognize(VIRTUAL_TREFOIL, Budget(max_tets=1))
    assert info.value.trace.verdict == "unknown"
    assert "tetrahedron limit" in info.value.reason


def test_time_budget(trefoil_exterior):
    with pytest.raises(BudgetExceeded) as info:
        recognize(VIRTUAL_TREFOIL, Budget(timeout=0.0))
    assert info.value.trace.verdict == "unknown"


def test_budget_ignored_for_genus_zero():
    assert recognize(PLANAR_TREFOIL, Budget(max_tets=0, timeout=0.0))[0] is Verdict.Classical


# -- witness files -------------------------------------------------------------------------


def test_digest_shape():
    d = vector_digest([1, 0, 2])
    assert re.fullmatch(r"[0-9a-f]{16}", d)
    assert d == vector_digest((1, 0, 2)) != vector_digest([1, 0, 3])


vectors = st.lists(
    st.integers(0, 3).flatmap(lambda n: st.lists(st.integers(0, 10**6), min_size=7 * n, max_size=7 * n)),
    max_size=4,
)


@given(vectors)
def test_witness_round_trip(w):
    w = [tuple(v) for v in w]
    text = format_witness(w)
    assert parse_witness(text) == w
    assert text.splitlines()[0] == str(len(w))


def test_witness_format_example():
    assert format_witness([(1, 0, 0, 0, 0, 0, 2)]) == "1\nn=1\n1 0 0 0 0 0 2\n"
    assert format_witness([]) == "0\n"


@pytest.mark.parametrize("text", [
    "", "x", "-1", "1", "1\n7\n", "1\nn=1\n1 2 3", "1\nn=1\n1 2 3 4 5 6 z",
    "0\n5", "1\nn=-1\n", "1\nn=a\n", "2\nn=0\n",
])
def test_parse_witness_rejects(text):
    with pytest.raises(MalformedWitness):
        parse_witness(text)


def test_format_witness_rejects_ragged():
    with pytest.raises(MalformedWitness):
        format_witness([(1, 2, 3)])


def test_replay_length_mismatch(trefoil_exterior):
    with pytest.raises(MalformedWitness):
        replay_witness(VIRTUAL_TREFOIL, [(0,) * 7])
    assert not verify_witness(VIRTUAL_TREFOIL, [(0,) * 7])
    with pytest.raises(MalformedWitness):
        replay_witness("", [(1,) * 7])


def test_replay_rejects_tampered(unknot_run):
    _, trace = unknot_run
    v = list(trace.witness[-1])
    v[v.index(0)] += 1
    assert not verify_witness(GENUS_ONE_UNKNOT, [tuple(v)])
    doubled = tuple(2 * x for x in trace.witness[-1])
    assert not verify_witness(GENUS_ONE_UNKNOT, [doubled])


def test_trace_lines():
    _, trace = recognize("+>1-<1")
    lines = trace.to_lines()
    assert lines[0] == "code '+>1-<1'"
    assert lines[-1] == "verdict yes"
