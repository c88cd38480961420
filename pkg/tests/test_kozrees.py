import itertools
import random

import pytest

from oracles import pfaffian_by_matchings
from syzforge.exactalg import QQ
from syzforge.groebner import PolyIdeal, ideal_equal
from syzforge.kozrees import (
    SkewLinearMatrix, cycle_skew_matrix, cycle_specialization, det, generic_skew, koszul_cycle_generators,
    pfaffian, pseudomanifold_ideal, skew_matrix_ideal, weight_configuration,
)
from syzforge.polyring import RingSpec, render
from syzforge.simplicial import coned_hexagon, cycle, octahedron
from syzforge.strand import quadric_rank


def test_koszul_cycles_small(gf):
    J = koszul_cycle_generators(3, 1, gf)
    R = J.ring
    assert set(J.generators) == {R.parse(s) for s in ["x1*y2 - x2*y1", "x1*y3 - x3*y1", "x2*y3 - x3*y2"]}
    J4 = koszul_cycle_generators(4, 2, gf)
    assert len(J4.generators) == 4 and all(len(g.terms) == 3 for g in J4.generators)
    J6 = koszul_cycle_generators(6, 4, gf)
    # one generator per 5-subset; the 15 counts the y variables
    assert len(J6.generators) == 6 and all(len(g.terms) == 5 for g in J6.generators)
    assert J6.ring.nvars == 6 + 15
    z = J6.ring.parse("x2*y3456 - x3*y2456 + x4*y2356 - x5*y2346 + x6*y2345")
    assert z in J6.generators
    with pytest.raises(ValueError):
        koszul_cycle_generators(3, 3)


def test_generic_five_by_five_equations(gf):
    Y, X = generic_skew(5, gf)
    R = Y.ring
    expected = [
        "-y12*x2 + y13*x3 - y14*x4 + y15*x5",
        "y12*x1 - y23*x3 + y24*x4 - y25*x5",
        "-y13*x1 + y23*x2 - y34*x4 + y35*x5",
        "y14*x1 - y24*x2 + y34*x3 - y45*x5",
        "-y15*x1 + y25*x2 - y35*x3 + y45*x4",
    ]
    got = Y.apply(X)
    assert [render(g) for g in got] == [render(R.parse(e)) for e in expected]


def test_zero_matrix_gives_zero_ideal(gf):
    R = RingSpec.make(["x1", "x2", "x3"], gf)
    I = skew_matrix_ideal(SkewLinearMatrix(3, R), [R.var(i) for i in range(3)])
    assert I.generators == ()


def test_skew_matrix_validation(gf):
    R = RingSpec.make(["a", "b"], gf)
    with pytest.raises(ValueError):
        SkewLinearMatrix(2, R, {(0, 0): R.var("a")})
    with pytest.raises(ValueError):
        SkewLinearMatrix(2, R, {(0, 1): R.var("a") * R.var("b")})
    M = SkewLinearMatrix(2, R, {(1, 0): R.var("a")})
    assert M.entry(0, 1) == -R.var("a") and pfaffian(M) == -R.var("a")
    with pytest.raises(ValueError):
        pfaffian(SkewLinearMatrix(3, R))


def _symbolic_skew(n, F=QQ):
    pairs = list(itertools.combinations(range(n), 2))
    R = RingSpec.make([f"a{i + 1}{j + 1}" for i, j in pairs], F)
    M = SkewLinearMatrix(n, R, {p: R.var(k) for k, p in enumerate(pairs)})
    return M, R


def test_generic_four_by_four_pfaffian():
    M, R = _symbolic_skew(4)
    assert pfaffian(M) == R.parse("a12*a34 - a13*a24 + a14*a23")


@pytest.mark.parametrize("n", [2, 4, 6])
def test_pfaffian_against_matchings_and_determinant(n):
    M, R = _symbolic_skew(n)
    p = pfaffian(M)
    ref = pfaffian_by_matchings({(i, j): M.entry(i, j) for i in range(n) for j in range(n) if i < j}, n)
    assert p == ref
    if n <= 4:
        assert p * p == det(M.to_rows())


def test_pfaffian_squared_is_determinant_numeric():
    rng = random.Random(5)
    R = RingSpec.make(["t"], QQ)
    for n in (4, 6):
        ent = {(i, j): R.constant(rng.randint(-5, 5)) for i in range(n) for j in range(i + 1, n)}
        M = SkewLinearMatrix(n, R, ent)
        assert pfaffian(M) ** 2 == det(M.to_rows())


def test_cycle_specializations(gf):
    I5 = cycle_specialization(5, gf)
    assert len(I5.generators) == 5 and all(g.degree() == 2 for g in I5.generators)
    assert all(quadric_rank(g) <= 4 for g in I5.generators)
    J6 = cycle_specialization(6, gf)
    degs = sorted(g.degree() for g in J6.generators)
    assert degs == [2] * 6 + [3]
    J4 = cycle_specialization(4, gf)
    assert sorted(g.degree() for g in J4.generators) == [2] * 5
    with pytest.raises(ValueError):
        cycle_specialization(3, gf)


def test_six_cycle_pfaffian_forms(gf):
    raw = pfaffian(cycle_skew_matrix(6, gf, normalize_sign=False))
    R = raw.ring
    plus = R.parse("y12*y34*y56 + y23*y45*y16")
    assert raw in (plus, -plus)
    norm = pfaffian(cycle_skew_matrix(6, gf))
    minus = R.parse("y12*y34*y56 - y23*y45*y16")
    assert norm in (minus, -minus)
    # normalization makes every quadric a binomial
    for g in cycle_specialization(6, gf).generators[:6]:
        assert len(g.terms) == 2


@pytest.mark.parametrize("d", [5, 6])
def test_pseudomanifold_ideal_matches_specialized_quadrics(gf, d):
    J = pseudomanifold_ideal(cycle(d), gf)
    assert len(J.generators) == d
    spec = cycle_specialization(d, gf)
    quads = PolyIdeal(spec.ring, [g for g in spec.generators if g.degree() == 2])
    assert ideal_equal(J, quads)


def test_pseudomanifold_ideal_contents(gf):
    J6 = pseudomanifold_ideal(cycle(6), gf)
    g = J6.ring.parse("x1*y12 - x3*y23")
    assert g in J6.generators or -g in J6.generators
    assert all(quadric_rank(g) == 4 for g in pseudomanifold_ideal(cycle(5), gf).generators)
    assert len(pseudomanifold_ideal(coned_hexagon(), gf).generators) == 15


def test_weight_configuration():
    cfg = weight_configuration(cycle(3))
    assert cfg.columns == (
        (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
        (1, -1, -1, 0), (1, -1, 0, -1), (1, 0, -1, -1),
    )
    c6 = weight_configuration(cycle(6))
    assert (1, -1, -1, 0, 0, 0, 0) in c6.columns
    oc = weight_configuration(octahedron())
    assert len(oc.columns) == 14 and oc.ambient == 7
