import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chebqr.expr import (FUNCTIONS, BinOp, Call, Const, Neg, Num, ParseError, Var,
                         compile_expr, evaluate, parse_expr, to_string)

leaves = st.one_of(st.builds(Num, st.floats(0, 1e6, allow_nan=False, allow_infinity=False)),
                   st.just(Var()), st.sampled_from([Const("pi"), Const("e")]))
trees = st.recursive(leaves, lambda sub: st.one_of(
    st.builds(Neg, sub),
    st.builds(BinOp, st.sampled_from("+-*/^"), sub, sub),
    st.builds(Call, st.sampled_from(sorted(FUNCTIONS)), sub)), max_leaves=12)


class TestParse:
    @pytest.mark.parametrize("src, x, value", [
        ("2^3^2", 0.0, 512.0),
        ("-2^2", 0.0, -4.0),
        ("(-2)^2", 0.0, 4.0),
        ("2^-1", 0.0, 0.5),
        ("1 - 2 - 3", 0.0, -4.0),
        ("8 / 4 / 2", 0.0, 1.0),
        ("x^2 - 1/4", 0.5, 0.0),
        ("2*-x", 0.5, -1.0),
        ("+x", 3.0, 3.0),
        ("pi", 0.0, math.pi),
        ("e^1", 0.0, math.e),
        ("1.5e-3 * 2", 0.0, 3e-3),
        (".5", 0.0, 0.5),
        ("exp(x)*sin(800*x)", 0.0, 0.0),
        ("sin(1/(x^2 + 1/100))", 0.0, math.sin(100.0)),
        ("besselj0(0)", 0.0, 1.0),
        ("sqrt(abs(-4))", 0.0, 2.0),
    ])
    def test_values(self, src, x, value):
        assert evaluate(parse_expr(src), x) == pytest.approx(value, abs=1e-15)

    @pytest.mark.parametrize("src, offset", [
        ("sin(x", 5), ("foo(x)", 0), ("y + 1", 0), ("1 $ 2", 2), ("()", 1), ("1 2", 2),
        ("", 0), ("x +", 3), ("é + x", 0), ("éé", 0), ("x + é", 4),
    ])
    def test_errors_carry_byte_offset(self, src, offset):
        with pytest.raises(ParseError) as info:
            parse_expr(src)
        assert info.value.offset == offset

    def test_byte_offset_after_multibyte(self):
        # a two-byte character before the error shifts the byte offset by one extra
        with pytest.raises(ParseError) as info:
            parse_expr("x + 1 # é")
        assert info.value.offset == 6

    @given(trees)
    def test_print_parse_fixed_point(self, tree):
        text = to_string(tree)
        assert parse_expr(text) == tree
        assert to_string(parse_expr(text)) == text


class TestEvaluate:
    def test_vectorized(self):
        f = compile_expr("exp(x) * sin(800 * x)")
        x = np.linspace(-1, 1, 11)
        np.testing.assert_allclose(f(x), np.exp(x) * np.sin(800 * x), rtol=1e-15)

    def test_constant_broadcasts(self):
        f = compile_expr("3")
        assert f(np.zeros(4)).shape == (4,)

    def test_besselj0(self):
        from scipy.special import j0
        x = np.linspace(-100, 100, 301)
        np.testing.assert_array_equal(compile_expr("besselj0(x)")(x), j0(x))

    def test_invalid_values_propagate(self):
        assert np.isnan(compile_expr("log(x)")(-1.0))
