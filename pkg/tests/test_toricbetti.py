import json

import pytest
import sympy

from syzforge import simplicial
from syzforge.exactalg import QQ
from syzforge.groebner import ideal_equal, PolyIdeal
from syzforge.kozrees import cycle_specialization
from syzforge.simplicial import homology_dims
from syzforge.toricbetti import (
    PointConfiguration, Semigroup, UngradedConfiguration, betti_diagram, fiber_complex, hochster_betti,
    identify_vertices, integer_kernel, semigroup_levels, toric_ideal,
)

CUBIC = PointConfiguration([(1, t) for t in range(4)], names=["x", "y", "z", "w"])
SQUARE = PointConfiguration([(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)], names=["x00", "x10", "x01", "x11"])


def _elimination_oracle(A: PointConfiguration):
    """Toric ideal by eliminating the torus variables with sympy (columns nonnegative)."""
    xs = sympy.symbols(A.names)
    ts = sympy.symbols([f"t{k}" for k in range(A.ambient)])
    gens = [x - sympy.Mul(*[t**e for t, e in zip(ts, col)]) for x, col in zip(xs, A.columns)]
    G = sympy.groebner(gens, *ts, *xs, order="lex")
    return [g for g in G.exprs if not (g.free_symbols & set(ts))]


@pytest.mark.parametrize("A", [CUBIC, SQUARE, PointConfiguration([(2, 0), (1, 1), (0, 2)], names=["a", "b", "c"])])
def test_toric_ideal_matches_elimination(A):
    I = toric_ideal(A, QQ)
    R = I.ring
    ref = PolyIdeal(R, [R.parse(str(g).replace("**", "^")) for g in _elimination_oracle(A)])
    assert ideal_equal(I, ref)


def test_toric_ideal_examples(gf):
    I = toric_ideal(CUBIC, gf)
    assert len(I.generators) == 3 and all(g.degree() == 2 for g in I.generators)
    (g,) = toric_ideal(SQUARE, gf).generators
    R = g.ring
    assert g in (R.parse("x00*x11 - x10*x01"), R.parse("x10*x01 - x00*x11"))
    C5 = PointConfiguration.from_complex(simplicial.cycle(5))
    assert ideal_equal(toric_ideal(C5, gf), cycle_specialization(5, gf))


def test_integer_kernel():
    ker = integer_kernel(CUBIC.columns)
    assert len(ker) == 2
    for v in ker:
        assert all(sum(v[k] * CUBIC.columns[k][r] for k in range(4)) == 0 for r in range(2))
    assert sympy.Matrix(ker).rank() == 2


def test_semigroup_levels():
    assert [len(L) for L in semigroup_levels(CUBIC, 4)] == [1, 4, 7, 10, 13]
    sg = Semigroup(CUBIC)
    sg.extend(3)
    assert sg.contains((2, 3)) and not sg.contains((1, 5))


def test_fiber_complexes():
    assert fiber_complex(CUBIC, (1, 0)).all_faces() == {frozenset(), frozenset({1})}
    assert fiber_complex(CUBIC, (1, 5)).all_faces() == set()
    C5 = PointConfiguration.from_complex(simplicial.cycle(5))
    assert homology_dims(fiber_complex(C5, (1,) + (0,) * 5)) == [0, 1, 0]


def test_hochster_twisted_cubic(gf):
    t = hochster_betti(CUBIC, 3, gf)
    assert t.coarse() == {(0, 0): 1, (1, 2): 3, (2, 3): 2}
    assert t.linear_strand() == [3, 2] and t.totals() == [1, 3, 2]
    assert t.diagram().splitlines()[0].split() == ["total:", "1", "3", "2"]
    data = json.loads(t.to_json())
    assert data["coarse"] == {"0,0": 1, "1,2": 3, "2,3": 2}
    # each generator has its own multidegree
    assert sum(t.fine(1, m) for m in [(2, 2), (2, 3), (2, 4)]) == 3


def test_hochster_five_cycle(gf):
    t = hochster_betti(PointConfiguration.from_complex(simplicial.cycle(5)), 7, gf)
    assert t.totals() == [1, 5, 12, 10, 2]
    assert t.b(2, 3) == 1 and t.b(4, 7) == 1 and t.b(2, 4) == 11


def test_betti_diagram_layout():
    text = betti_diagram({(0, 0): 1, (1, 2): 5, (2, 3): 1, (2, 4): 11, (3, 5): 10, (4, 6): 1, (4, 7): 1})
    lines = text.splitlines()
    assert lines[0].split() == ["total:", "1", "5", "12", "10", "2"]
    assert lines[2].split() == ["1:", "--", "5", "1", "--", "--"]
    assert lines[3].split() == ["2:", "--", "--", "11", "10", "1"]


def test_ungraded_configuration():
    U = PointConfiguration([(1, 0), (2, 0)])
    assert not U.graded
    with pytest.raises(UngradedConfiguration):
        hochster_betti(U, 3)
    with pytest.raises(ValueError):
        PointConfiguration([(1, 0), (1, 0)])


def test_identify_vertices_configuration():
    A = PointConfiguration.from_complex(simplicial.coned_hexagon())
    B = identify_vertices(A, 1, 4)
    assert B.q == 16 and B.ambient == 7
    with pytest.raises(ValueError):
        identify_vertices(A, 2, 2)
    assert identify_vertices(SQUARE, 0, 1).q == 3
