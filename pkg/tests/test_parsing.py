import pytest

from leafclass.errors import ParseError
from leafclass.parsing import BinOp, Call, Name, Neg, Num, integer_exponent, parse


def test_precedence_and_associativity():
    tree = parse("a - b - c")
    assert tree == BinOp("-", BinOp("-", Name("a"), Name("b")), Name("c"))
    tree = parse("a^b^c")
    assert tree == BinOp("^", Name("a"), BinOp("^", Name("b"), Name("c")))
    assert parse("-x^2") == Neg(BinOp("^", Name("x"), Num(2)))


def test_calls_and_numbers():
    tree = parse("exp(1/(1-t^2))")
    assert isinstance(tree, Call) and tree.func == "exp"
    assert parse("3/4") == BinOp("/", Num(3), Num(4))


@pytest.mark.parametrize("text", ["", "(x", "x)", "1 +* 2", "f(,)", "x $ y"])
def test_malformed(text):
    with pytest.raises(ParseError):
        parse(text)


def test_integer_exponent():
    assert integer_exponent(parse("-3")) == -3
    with pytest.raises(ParseError):
        integer_exponent(parse("x"))
