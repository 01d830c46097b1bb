import pytest

import setrel

UNSAT = """
(declare-const x Int)
(declare-const s (Set Int))
(assert (set.member x s))
(assert (= s (as set.empty (Set Int))))
(check-sat)
"""

SAT = """
(declare-const x Int)
(declare-const s (Set Int))
(assert (set.member x (set.filter (lambda ((z Int)) (> z 2)) s)))
(check-sat)
"""


def test_unsat():
    assert setrel.solve(UNSAT).status == "unsat"


def test_sat_model():
    r = setrel.solve(SAT)
    assert r.status == "sat"
    assert r.in_fragment
    assert set(r.model) == {"x", "s"}
    assert int(r.model["x"].replace("(- ", "-").rstrip(")")) > 2
    assert r.steps > 0


def test_parse_error():
    with pytest.raises(setrel.ParseError):
        setrel.solve("(assert (set.member x")


def test_hilbert_is_outside_fragment():
    text = setrel.generate("hilbert", seed=1)
    assert "SetTermInFilterPredicate" in setrel.fragment_violations(text)
    r = setrel.solve(text, max_steps=200)
    assert r.status in ("sat", "unknown")
    assert not r.in_fragment


def test_roundtrip_is_stable():
    text = setrel.generate("random", seed=3)
    once = setrel.roundtrip(text)
    assert setrel.roundtrip(once) == once


def test_bad_oracle():
    with pytest.raises(ValueError):
        setrel.solve(SAT, oracle="nope")
