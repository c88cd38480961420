import pytest

from syzforge.exactalg import QQ, GF
from syzforge.kozrees import facet_ring
from syzforge.polyring import (
    INHOMOGENEOUS, MonomialOrder, RingSpec, coefficient_matrix, face_label, multidegree_of, render,
)
from syzforge.simplicial import cycle


@pytest.fixture
def R():
    return RingSpec.make(["x", "y", "z"], QQ)


def test_arithmetic(R):
    x, y = R.var("x"), R.var("y")
    assert (x + y) * (x - y) == x * x - y * y
    p = R.parse("x^2*y - 3/2*z^3 + x")
    assert not (p + (-1) * p)
    assert not x * R.zero()
    assert render(R.parse("z*x + 2*y^2")) in ("2*y^2 + x*z", "x*z + 2*y^2")


def test_parse_round_trip(R):
    for text in ["x^2*y - 3/2*z^3 + x", "x - y", "0", "7"]:
        p = R.parse(text)
        assert R.parse(render(p)) == p


def test_parse_errors(R):
    with pytest.raises(ValueError):
        R.parse("x + w")
    with pytest.raises(ValueError):
        R.parse("x +* y")


def test_coefficient_matrix():
    R = RingSpec.make(["x", "y"], QQ)
    m = coefficient_matrix([R.parse("x^2"), R.parse("x*y")], 2)
    assert m.nrows == 2 and m.ncols == 3
    assert all(sum(1 for v in row if v) == 1 for row in m.to_lists())
    row = coefficient_matrix([R.parse("x^2 - y^2")], 2).to_lists()[0]
    assert sorted(row) == [-1, 0, 1]
    assert coefficient_matrix([], 3, R).nrows == 0


def test_multidegree_weight_grading():
    Rc = facet_ring(cycle(3), GF(32003))
    md = multidegree_of(Rc.var("x1") * Rc.var("y12"))
    # e_1 + (e_0 - e_1 - e_2) = e_0 - e_2
    assert md == (1, 0, -1, 0)
    assert multidegree_of(Rc.var("x1") - Rc.var("x2")) == INHOMOGENEOUS
    assert (Rc.var("x1") - Rc.var("x2")).is_homogeneous()
    assert multidegree_of(Rc.one()) == (0, 0, 0, 0)


def test_orders(R):
    p = R.parse("x*z^2 + y^3")
    assert p.leading(MonomialOrder.lex())[0] == (1, 0, 2)
    assert p.leading(MonomialOrder.grevlex())[0] == (0, 3, 0)


def test_face_label():
    assert face_label((1, 2)) == "12"
    assert face_label((3, 10)) == "3_10"
