"""Acceptance criteria, one test each.

Every test prints a PASS/FAIL line with its wall time; the lines are also
repeated in the pytest terminal summary.  Run alone with
``pytest tests/test_acceptance.py -v``.
"""
from __future__ import annotations

import itertools
import time
from contextlib import contextmanager
from functools import reduce

import pytest

from syzforge import census, simplicial, witness
from syzforge.cli import REGISTRY
from syzforge.exactalg import GF, QQ
from syzforge.groebner import codimension, hilbert_degree, ideal_equal, saturate, saturate_by_variables
from syzforge.kozrees import (
    cycle_skew_matrix, cycle_specialization, koszul_cycle_generators, pfaffian, pseudomanifold_ideal,
)
from syzforge.simplicial import homology_dims, validate_pseudomanifold
from syzforge.strand import (
    QuadraticSystem, koszul_strand_betti, linear_first_syzygies, quadric_rank, support_dimension, syzygy_rank,
    two_lp,
)
from syzforge.toricbetti import PointConfiguration, fiber_complex, hochster_betti, identify_vertices, toric_ideal

F = GF(32003)
RESULTS: list[str] = []


@contextmanager
def criterion(n: int, title: str, limit: float | None = None):
    t0 = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - t0
        if limit is not None and elapsed > limit:
            raise AssertionError(f"took {elapsed:.1f}s, limit {limit:.0f}s")
    except BaseException as e:
        line = f"criterion {n:2d} FAIL  {title}  ({time.perf_counter() - t0:.1f}s): {type(e).__name__}: {e}"
        RESULTS.append(line)
        print(line)
        raise
    line = f"criterion {n:2d} PASS  {title}  ({time.perf_counter() - t0:.1f}s)"
    RESULTS.append(line)
    print(line)


def coarse_totals(coarse):
    top = max(i for i, _ in coarse)
    return [sum(v for (i, _), v in coarse.items() if i == k) for k in range(top + 1)]


def cycle_quadrics(d):
    I = cycle_specialization(d, F)
    return I, QuadraticSystem(I.ring, [g for g in I.generators if g.degree() == 2])


def test_01_twisted_cubic():
    with criterion(1, "twisted cubic: strand (3,2), 2LP=2, Hochster agrees", 1):
        A = PointConfiguration([(1, t) for t in range(4)], names=["x", "y", "z", "w"])
        Q = QuadraticSystem.from_ideal(toric_ideal(A, F))
        assert koszul_strand_betti(Q) == [3, 2] and two_lp(Q) == 2
        coarse = hochster_betti(A, 4, F).coarse()
        assert coarse == {(0, 0): 1, (1, 2): 3, (2, 3): 2}


def test_02_five_cycle():
    with criterion(2, "d=5: one rank-5 syzygy, codim 4, full table", 60):
        I, Q = cycle_quadrics(5)
        assert Q.r == 5 and all(quadric_rank(q) <= 4 for q in I.generators)
        (s,) = linear_first_syzygies(Q)
        assert syzygy_rank(s) == 5 and support_dimension(s) == 5
        assert codimension(I) == 4
        coarse = hochster_betti(PointConfiguration.from_complex(simplicial.cycle(5)), 7, F).coarse()
        assert coarse_totals(coarse) == [1, 5, 12, 10, 2]
        assert coarse == {(0, 0): 1, (1, 2): 5, (2, 3): 1, (2, 4): 11, (3, 5): 10, (4, 6): 1, (4, 7): 1}


def test_03_six_cycle():
    with criterion(3, "d=6: Pfaffian cubic, one rank-6 syzygy, codim 5, degree 21, full table", 300):
        I, Q = cycle_quadrics(6)
        cubics = [g for g in I.generators if g.degree() == 3]
        assert Q.r == 6 and len(cubics) == 1 and len(I.generators) == 7
        raw = pfaffian(cycle_skew_matrix(6, F, normalize_sign=False))
        plus = raw.ring.parse("y12*y34*y56 + y23*y45*y16")
        assert raw in (plus, -plus)
        (s,) = linear_first_syzygies(Q)
        assert syzygy_rank(s) == 6 and support_dimension(s) == 6
        assert codimension(I) == 5 and hilbert_degree(I) == 21
        coarse = hochster_betti(PointConfiguration.from_complex(simplicial.cycle(6)), 9, F).coarse()
        assert coarse_totals(coarse) == [1, 7, 22, 22, 7, 1]
        assert coarse[(1, 3)] == 1 and coarse[(5, 9)] == 1


def test_04_seven_and_eight_cycles():
    with criterion(4, "d=7,8: one linear syzygy of rank d, codim d-1", 600):
        for d in (7, 8):
            I, Q = cycle_quadrics(d)
            syz = linear_first_syzygies(Q)
            assert len(syz) == 1 and syzygy_rank(syz[0]) == d
            assert codimension(I) == d - 1


def test_05_saturation_equals_toric():
    with criterion(5, "saturated pseudomanifold ideal equals the toric ideal", 600):
        for c in [simplicial.cycle(5), simplicial.cycle(6), simplicial.octahedron(), simplicial.coned_hexagon()]:
            J = pseudomanifold_ideal(c, F)
            prod = reduce(lambda a, b: a * b, [J.ring.var(i) for i in range(c.vertex_count)])
            assert ideal_equal(saturate(J, prod), toric_ideal(PointConfiguration.from_complex(c), F)), c.name


def _orientable_catalog():
    out = [simplicial.cycle(d) for d in range(4, 9)]
    out += [simplicial.simplex_boundary(k) for k in (2, 3)]
    out += [simplicial.octahedron(), simplicial.bipyramid(5), simplicial.coned_hexagon()]
    out += simplicial.sphere7_list()
    out += census.small_pseudomanifolds(6)
    return out


def test_06_fiber_complex_at_e0():
    with criterion(6, "fiber complex at e_0 has the homology of the complex; b_{n+1,e_0}=1"):
        for c in _orientable_catalog():
            assert validate_pseudomanifold(c).ok, c.name
            A = PointConfiguration.from_complex(c)
            n = c.dimension
            e0 = (1,) + (0,) * c.vertex_count
            fc = homology_dims(fiber_complex(A, e0))
            hc = homology_dims(c)
            padded = hc + [0] * (len(fc) - len(hc))
            assert fc == padded, c.name
            t = hochster_betti(A, n + 2, F, max_index=n + 1)
            assert t.fine(n + 1, e0) == 1, c.name
            assert A.level(e0) == n + 2


def test_07_sphere_fingerprint():
    with criterion(7, "7-vertex spheres: one type has degree 73, codim 9, strand (17,19,1); registry pins it", 900):
        hits = []
        for c in simplicial.sphere7_list():
            I = toric_ideal(PointConfiguration.from_complex(c), F)
            if hilbert_degree(I) != 73:
                continue
            if codimension(I) == 9 and koszul_strand_betti(QuadraticSystem.from_ideal(I)) == [17, 19, 1]:
                hits.append(c)
        assert hits
        pinned = simplicial.coned_hexagon()
        assert any(simplicial.canonical_form(pinned.facets, 7) == simplicial.canonical_form(c.facets, 7) for c in hits)
        got = REGISTRY["coned-hexagon"].compute(F, False)
        assert {k: got[k] for k in ("degree", "codim", "strand")} == {"degree": 73, "codim": 9, "strand": [17, 19, 1]}


def test_08_identified_vertices():
    with criterion(8, "identifying 1 and 4: degree 56, strand (19,30,1), ridge in four facets", 900):
        c = simplicial.coned_hexagon()
        A = identify_vertices(PointConfiguration.from_complex(c), 1, 4)
        assert A.q == 16
        I = toric_ideal(A, F)
        assert hilbert_degree(I) == 56
        assert koszul_strand_betti(QuadraticSystem.from_ideal(I)) == [19, 30, 1]
        rep = validate_pseudomanifold(simplicial.identify_vertices(c, 1, 4))
        assert not rep.ridge_condition and any("4 facets" in note for note in rep.notes)


def test_09_witness_suite():
    with criterion(9, "scrolls, generic Pfaffian net, and no 2x3 variable scroll for d=5"):
        A = PointConfiguration([(1, t) for t in range(4)], names=["x", "y", "z", "w"])
        Q = QuadraticSystem.from_ideal(toric_ideal(A, F))
        R = Q.ring
        x, y, z, w = (R.var(v) for v in "xyzw")
        assert witness.scroll_extract(Q, [x, y, z], [y, z, w]).genericity
        for k in (2, 3):
            Qk = QuadraticSystem.from_ideal(toric_ideal(PointConfiguration.from_complex(simplicial.simplex_boundary(k)), F))
            Rk = Qk.ring
            top = [Rk.var(i) for i in range(k + 1)]
            bot = [Rk.var("y" + "".join(str(v) for v in range(1, k + 2) if v != i)) for i in range(1, k + 2)]
            cert = witness.scroll_extract(Qk, top, bot)
            assert cert.matrix.q == k + 1 and cert.genericity
        for d in (4, 5):
            J = saturate_by_variables(koszul_cycle_generators(d, 2, F), list(range(d)))
            Rj = J.ring
            Qj = QuadraticSystem(Rj, [g for g in J.gb() if g.degree() == 2])
            ys = {(i, j): Rj.var(f"y{i}{j}") for i, j in itertools.combinations(range(1, d + 1), 2)}
            cert = witness.pfaffian_extract(Qj, [Rj.var(i) for i in range(d)], ys)
            assert all(v is not None for v in cert.memberships.values())
        _, Q5 = cycle_quadrics(5)
        assert witness.variable_scroll_search(Q5, 3) is None


def test_10_octahedron_bipyramids():
    with criterion(10, "octahedron: k=4 bipyramid certificates, Tor_2 in degree 3 at least 2"):
        o = simplicial.octahedron()
        A = PointConfiguration.from_complex(o)
        Q = QuadraticSystem.from_ideal(toric_ideal(A, F))
        certs = witness.bipyramid_scan(o, Q)
        assert certs and all(c.extra["k"] == 4 for c in certs)
        assert all(v is not None for c in certs for v in c.memberships.values())
        assert hochster_betti(A, 3, F, max_index=2).b(2, 3) >= 2


def test_11_curve_numerics():
    with criterion(11, "curve genus/degree table, genus-7 Betti table, empty integrality scan", 10):
        pairs = census.feasible_pairs(7)
        assert [p for p in pairs if p[0] <= 6] == [(0, 3), (1, 5), (2, 6), (3, 8), (4, 9), (5, 11), (6, 12)]
        assert [d for g, d in pairs if g == 7] == [13, 14]
        t = census.curve_betti_table(7, 13)
        assert coarse_totals(t) == [1, 8, 30, 46, 30, 7]
        assert [t[(1, 2)], t[(2, 3)]] == [8, 5]
        assert [t[(2, 4)], t[(3, 5)], t[(4, 6)], t[(5, 7)]] == [25, 46, 30, 7]
        assert census.prop51_scan(10**6) == []


def test_12_polygon_census():
    with criterion(12, "polygon census: box-stable, Pick identity, every 2LP=2 case verified", 1800):
        polys = census.enumerate_polygons(9)
        assert sorted(map(census.polygon_normal_form, polys)) == sorted(map(census.polygon_normal_form, census.enumerate_polygons(12)))
        reports = [census.polygon_report(P, F) for P in polys]
        for r in reports:
            s = r.stats
            assert s["area"] == s["interior"] + s["boundary"] / 2 - 1
        relevant = [r for r in reports if r.quadratic and r.two_lp == 2]
        assert relevant
        assert all(r.status == "conjecture-verified" for r in relevant)
        assert not any(r.status == "witness-not-found" for r in reports)


def _toric_registry():
    cfgs = {"twisted-cubic": PointConfiguration([(1, t) for t in range(4)], names=["x", "y", "z", "w"])}
    for d in (5, 6, 7, 8):
        cfgs[f"cycle-{d}"] = PointConfiguration.from_complex(simplicial.cycle(d))
    for k in (2, 3):
        cfgs[f"simplex-boundary-{k}"] = PointConfiguration.from_complex(simplicial.simplex_boundary(k))
    cfgs["octahedron"] = PointConfiguration.from_complex(simplicial.octahedron())
    hexagon = PointConfiguration.from_complex(simplicial.coned_hexagon())
    cfgs["coned-hexagon"] = hexagon
    cfgs["coned-hexagon-identified"] = identify_vertices(hexagon, 1, 4)
    return cfgs


def test_13_cross_engine():
    with criterion(13, "Hochster row 1 equals the Koszul strand over GF(32003) and Q"):
        for name, A in _toric_registry().items():
            fields = [F, QQ] if A.q <= 12 else [F]
            for K in fields:
                s = koszul_strand_betti(QuadraticSystem.from_ideal(toric_ideal(A, K)))
                top = len(s) + 1
                t = hochster_betti(A, top + 1, K, max_index=top)
                row = [t.b(i, i + 1) for i in range(1, top + 1)]
                assert row == s + [0], (name, K, row, s)
