import math

from hypothesis import given, strategies as st

from hmercer.report import dumps, fmt, loads, render_text

json_leaf = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(-(2**53), 2**53),
    st.floats(allow_nan=False),
    st.text(max_size=8),
)
json_doc = st.recursive(
    json_leaf,
    lambda c: st.one_of(st.lists(c, max_size=4), st.dictionaries(st.text(max_size=6), c, max_size=4)),
    max_leaves=20,
)


@given(json_doc)
def test_machine_round_trip_is_byte_identical(doc):
    text = dumps(doc)
    assert dumps(loads(text)) == text


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_floats_round_trip(x):
    assert float(fmt(x)) == x


def test_seventeen_digits():
    assert fmt(1 / 3) == "0.33333333333333331"
    assert fmt(4.0) == "4"
    assert fmt(-0.0) == "0"
    assert fmt(math.inf) == "inf"


def test_text_numbers_appear_in_machine_output():
    doc = {
        "tool": "hmercer",
        "version": "0",
        "command": "check",
        "status": "ok",
        "scenario": {"weights": [1 / 3, 2.0]},
        "reports": [
            {"name": "mercer_h", "sense": "convex", "lhs": 4.0, "rhs": 16 / 3, "gap": 4 / 3, "satisfied": True,
             "tolerance": 2e-9, "mercer_point": 2.0, "hypothesis_verdicts": []}
        ],
        "checks": [],
    }
    text, machine = render_text(doc), dumps(doc)
    for x in (16 / 3, 4 / 3, 1 / 3):
        assert fmt(x) in text and fmt(x) in machine
