from fractions import Fraction

import numpy as np
import pytest

from nullflat.curves import Cos, CurveSpec, Exp, Polynomial, Sin
from nullflat.errors import ValidationError


def test_parse_all_term_kinds():
    s = CurveSpec.parse("poly:1,-1/2,0.25+sin:2,3+cos:1,1/3+exp:-1,0.5")
    kinds = [type(t) for t in s.terms]
    assert kinds == [Polynomial, Sin, Cos, Exp]
    assert s.terms[0].coeffs == (1, Fraction(-1, 2), Fraction(1, 4))
    assert s.terms[3].w == Fraction(1, 2)


def test_text_round_trip():
    text = "poly:0,0,1/3+sin:1,2+exp:1/2,-1"
    assert CurveSpec.parse(text).text() == text
    assert CurveSpec.parse(CurveSpec.parse(text).text()) == CurveSpec.parse(text)


@pytest.mark.parametrize("bad", ["", "poly:", "tan:1,2", "sin:1", "poly:1,,2", "poly:x", "sin:1,2,3", "poly:1/0"])
def test_parse_rejects(bad):
    with pytest.raises(ValidationError):
        CurveSpec.parse(bad)


def test_call_evaluates():
    s = CurveSpec.parse("poly:1,0,2+cos:1,1")
    assert np.isclose(s(0.5), 1 + 0.5 + np.cos(0.5))


@pytest.mark.parametrize(
    "text, const",
    [("poly:7", True), ("poly:7,0,0", True), ("sin:0,3", True), ("cos:2,0", True),
     ("exp:3,0", True), ("poly:1,1", False), ("sin:1,1", False)],
)
def test_is_constant(text, const):
    assert CurveSpec.parse(text).is_constant() is const
