import itertools
import random

import networkx as nx
import pytest

from syzforge import simplicial
from syzforge.exactalg import GF, QQ
from syzforge.groebner import saturate_by_variables
from syzforge.kozrees import cycle_specialization, koszul_cycle_generators, pfaffian
from syzforge.polyring import RingSpec
from syzforge.strand import QuadraticSystem, linear_first_syzygies, syzygy_rank
from syzforge.toricbetti import PointConfiguration, hochster_betti, toric_ideal
from syzforge.witness import (
    LinearFormMatrix, WitnessCertificate, WitnessError, bipartite_block_extract, bipartite_blocks,
    bipyramid_scan, bordered_matrix, is_one_generic, pattern_graph, pfaffian_extract, randomized_scroll_search,
    scroll_extract, variable_scroll_search,
)


def mat(R, rows):
    return LinearFormMatrix(R, [[R.parse(e) for e in row] for row in rows])


def pencil_oracle(R, rows):
    """[[a,b],[c,d]] is 1-generic iff u·M·v vanishes only trivially; for the
    symmetric 2x2 case this is the gcd of the pencil minors over Q."""
    import sympy
    a, b = sympy.symbols("a b")
    C = [[R.parse(e) for e in row] for row in rows]
    # coefficient of each variable in u·M for u = (a, b)
    forms = []
    for j in range(2):
        forms.append({k: a * int(C[0][j].terms.get(tuple(int(t == k) for t in range(R.nvars)), 0))
                      + b * int(C[1][j].terms.get(tuple(int(t == k) for t in range(R.nvars)), 0))
                      for k in range(R.nvars)})
    m = sympy.Matrix([[forms[j][k] for k in range(R.nvars)] for j in range(2)])
    minors = [m[:, [i, j]].det() for i, j in itertools.combinations(range(R.nvars), 2)]
    g = 0
    for x in minors:
        g = sympy.gcd(g, x)
    return sympy.Poly(g, a, b).total_degree() == 0 if g != 0 else False


@pytest.mark.parametrize("mode", ["exact2xq", "randomized"])
def test_one_generic_examples(mode):
    R = RingSpec.make(["x1", "x2", "x3", "y12", "y13", "y23"], GF(32003))
    assert is_one_generic(mat(R, [["x1", "x2", "x3"], ["y23", "y13", "y12"]]), mode)
    assert not is_one_generic(mat(R, [["x1", "0", "x3"], ["y23", "y13", "y12"]]), mode)
    S = RingSpec.make(["x", "y", "z"], GF(32003))
    assert is_one_generic(mat(S, [["x", "y"], ["y", "z"]]), mode)
    assert not is_one_generic(mat(S, [["x", "y"], ["y", "x"]]), mode)
    assert not is_one_generic(mat(S, [["x", "y"], ["2*x", "2*y"]]), mode)


def test_pencil_oracle_agrees():
    S = RingSpec.make(["x", "y", "z"], QQ)
    for rows in ([["x", "y"], ["y", "z"]], [["x", "y"], ["y", "x"]], [["x", "y"], ["z", "x"]],
                 [["x", "y"], ["x + y", "z"]], [["x", "x"], ["y", "y"]]):
        assert bool(is_one_generic(mat(S, rows))) == pencil_oracle(S, rows), rows


def test_randomized_never_contradicts_exact():
    rng = random.Random(11)
    F = GF(32003)
    R = RingSpec.make(["a", "b", "c", "d"], F)
    for trial in range(40):
        rows = [[R.zero() for _ in range(3)] for _ in range(2)]
        for i in range(2):
            for j in range(3):
                for k in range(4):
                    if rng.random() < 0.4:
                        rows[i][j] = rows[i][j] + R.constant(rng.randint(-2, 2)) * R.var(k)
        M = LinearFormMatrix(R, rows)
        exact = bool(is_one_generic(M, "exact2xq"))
        rand = bool(is_one_generic(M, "randomized", seed=trial))
        assert not (rand and not exact)
        assert rand == exact


def test_genericity_needs_p_at_most_q():
    R = RingSpec.make(["x", "y"], GF(32003))
    with pytest.raises(ValueError):
        is_one_generic(mat(R, [["x"], ["y"]]))


def test_three_row_randomized():
    R = RingSpec.make([f"z{i}" for i in range(9)], GF(32003))
    M = LinearFormMatrix(R, [[R.var(3 * i + j) for j in range(3)] for i in range(3)])
    assert is_one_generic(M, "randomized")


def test_twisted_cubic_scroll(gf):
    A = PointConfiguration([(1, t) for t in range(4)], names=["x", "y", "z", "w"])
    Q = QuadraticSystem.from_ideal(toric_ideal(A, gf))
    R = Q.ring
    x, y, z, w = (R.var(n) for n in "xyzw")
    cert = scroll_extract(Q, [x, y, z], [y, z, w])
    assert cert.kind == "scroll" and bool(cert.genericity)
    assert all(c is not None for c in cert.memberships.values()) and len(cert.memberships) == 3
    assert '"scroll"' in cert.to_json()
    with pytest.raises(WitnessError) as err:
        scroll_extract(Q, [x, y, z], [z, w, y])
    assert err.value.failures


@pytest.mark.parametrize("k", [2, 3])
def test_simplex_boundary_scroll(gf, k):
    c = simplicial.simplex_boundary(k)
    Q = QuadraticSystem.from_ideal(toric_ideal(PointConfiguration.from_complex(c), gf))
    R = Q.ring
    top = [R.var(i) for i in range(k + 1)]
    bot = [R.var("y" + "".join(str(v) for v in range(1, k + 2) if v != i)) for i in range(1, k + 2)]
    cert = scroll_extract(Q, top, bot)
    assert cert.matrix.q == k + 1 and bool(cert.genericity)


def test_five_cycle_has_no_variable_scroll(gf):
    I = cycle_specialization(5, gf)
    Q = QuadraticSystem.from_ideal(I)
    (s,) = linear_first_syzygies(Q)
    assert syzygy_rank(s) == 5 > 1 + 3
    assert variable_scroll_search(Q, 3) is None


def _generic_net(d, F):
    J = saturate_by_variables(koszul_cycle_generators(d, 2, F), list(range(d)))
    R = J.ring
    Q = QuadraticSystem(R, [g for g in J.gb() if g.degree() == 2])
    y = {(i, j): R.var(f"y{i}{j}") for i, j in itertools.combinations(range(1, d + 1), 2)}
    return Q, [R.var(i) for i in range(d)], y


@pytest.mark.parametrize("d", [4, 5])
def test_generic_pfaffian_net(gf, d):
    Q, W, y = _generic_net(d, gf)
    cert = pfaffian_extract(Q, W, y)
    assert cert.kind == "pfaffian-net" and cert.extra["n_plus_3"] == d
    assert all(v is not None for v in cert.memberships.values())
    # the generic pattern is complete, so block extraction must refuse
    with pytest.raises(WitnessError):
        bipartite_block_extract(cert)


def test_pfaffian_extract_reports_failures(gf):
    Q, W, y = _generic_net(4, gf)
    y[(1, 2)], y[(1, 3)] = y[(1, 3)], y[(1, 2)]
    with pytest.raises(WitnessError) as err:
        pfaffian_extract(Q, W, y)
    assert any(idx[0] == 0 for idx in err.value.failures)


def _binomial_net(F):
    R = RingSpec.make(["x1", "x2", "x3", "x4", "y12", "y14", "u", "y34"], F)
    y = {(1, 2): R.var("y12"), (1, 4): R.var("y14"), (2, 3): -R.var("u"), (3, 4): R.var("y34")}
    W = [R.var(i) for i in range(4)]
    N = bordered_matrix(R, W, y)
    pf = [pfaffian(N.delete([k])) for k in range(5)]
    return QuadraticSystem(R, [p for p in pf if p]), W, y


def test_binomial_net_block(gf):
    Q, W, y = _binomial_net(gf)
    cert = pfaffian_extract(Q, W, y)
    block = bipartite_block_extract(cert)
    R = Q.ring
    assert block.extra["rows"] == (1, 3) and block.extra["cols"] == (0, 2, 4)
    assert block.matrix.rows == [[-R.var("x1"), R.var("y12"), R.var("y14")], [-R.var("x3"), R.var("u"), R.var("y34")]]
    assert bool(block.genericity)
    assert set(block.extra["pfaffian_signs"].values()) <= {1, -1}
    with pytest.raises(ValueError):
        bipartite_block_extract(cert, is_semigroup=False)


def test_six_cycle_pattern_blocks(gf):
    R = cycle_specialization(6, gf).ring
    W = [R.var(i) for i in range(6)]
    y = {(i, i + 1): R.var(f"y{i}{i + 1}") for i in range(1, 6)}
    y[(1, 6)] = R.var("y16")
    N = bordered_matrix(R, W, y)
    adj = pattern_graph(N)
    G = nx.Graph([(a, b) for a in adj for b in adj[a]])
    assert nx.is_isomorphic(G, nx.cycle_graph(6)) and sum(nx.triangles(G).values()) == 0
    # oracle: nonadjacent pairs with a common neighbour, no larger independent set qualifies
    expected = {(a, b) for a, b in itertools.combinations(range(1, 7), 2)
                if not G.has_edge(a, b) and set(G[a]) & set(G[b])}
    blocks = bipartite_blocks(N, first_only=False)
    assert {A for A, *_ in blocks} == expected and len(expected) == 6
    cert = WitnessCertificate("pfaffian-net", N, {}, None)
    block = bipartite_block_extract(cert)
    assert block.extra["rows"] == (1, 3) and block.extra["cols"] == (0, 2)


def test_triangle_pattern_rejected(gf):
    R = RingSpec.make(["x1", "x2", "x3", "a", "b", "c"], gf)
    N = bordered_matrix(R, [R.var(i) for i in range(3)], {(1, 2): R.var("a"), (1, 3): R.var("b"), (2, 3): R.var("c")})
    with pytest.raises(WitnessError):
        bipartite_blocks(N)


def test_bipyramids(gf):
    got = {c.extra["apexes"]: c.extra["k"] for c in bipyramid_scan(simplicial.cycle(5))}
    assert got == {(1, 3): 1, (2, 4): 1, (3, 5): 1, (1, 4): 1, (2, 5): 1}
    o = simplicial.octahedron()
    Q = QuadraticSystem.from_ideal(toric_ideal(PointConfiguration.from_complex(o), gf))
    certs = bipyramid_scan(o, Q)
    assert sorted(c.extra["apexes"] for c in certs) == [(1, 3), (2, 4), (5, 6)]
    assert all(c.extra["k"] == 4 and c.matrix.q == 5 for c in certs)
    assert all(v is not None for c in certs for v in c.memberships.values())


def test_octahedron_tor_bound(gf):
    t = hochster_betti(PointConfiguration.from_complex(simplicial.octahedron()), 3, gf, max_index=2)
    assert t.b(2, 3) >= 2


def test_randomized_scroll_fallback(gf):
    A = PointConfiguration([(1, t) for t in range(4)], names=["x", "y", "z", "w"])
    Q = QuadraticSystem.from_ideal(toric_ideal(A, gf))
    assert variable_scroll_search(Q, 3) is not None
    cert = randomized_scroll_search(Q, 3, seed=1)
    assert cert is not None and bool(cert.genericity)
