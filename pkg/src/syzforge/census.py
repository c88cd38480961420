"""Curve Betti numerics, lattice-polygon census and the small
pseudomanifold scan."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd

from .exactalg import Field
from .simplicial import OrientedComplex, canonical_form, orient_facets, surface_triangulations, validate_pseudomanifold
from .strand import QuadraticSystem, koszul_strand_betti
from .toricbetti import PointConfiguration, betti_diagram, hochster_betti, toric_ideal
from .witness import bipyramid_scan, randomized_scroll_search, variable_scroll_search

# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurveNumerics:
    g: int
    d: int

    def __post_init__(self):
        if self.g < 0 or self.d <= self.g:
            raise ValueError(f"need d > g >= 0, got g={self.g}, d={self.d}")

    @property
    def r(self) -> int:
        return self.d - self.g


def betti_formulas(g: int, d: int) -> dict[int, int]:
    """``{i: b_i}`` for ``2 <= i <= r+1`` from the Hilbert function of a
    nonspecial, normally presented curve with a 2-linear strand of length 2.

    ``b_2`` counts quadrics, ``b_3`` linear first syzygies and ``b_i`` for
    ``i >= 4`` sits at homological index ``i-2`` in the quadratic row.
    """
    c = CurveNumerics(g, d)
    e = c.r - 1
    out = {2: comb(c.r, 2) - g, 3: e * (comb(e, 2) - g) - comb(e, 3)}
    for i in range(4, c.r + 2):
        out[i] = comb(e, i) - e * comb(e, i - 1) + g * comb(e, i - 2)
    return out


def curve_betti_table(g: int, d: int) -> dict[tuple[int, int], int]:
    """Coarse table ``{(i, j): b}`` arranged as a Betti diagram."""
    b = betti_formulas(g, d)
    table = {(0, 0): 1, (1, 2): b[2], (2, 3): b[3]}
    for i in range(4, max(b) + 1):
        table[(i - 2, i)] = b[i]
    return {k: v for k, v in table.items() if v}


def is_feasible(g: int, d: int) -> bool:
    """Quadrics and linear syzygies present, no negative entry."""
    b = betti_formulas(g, d)
    return b[2] > 0 and b[3] > 0 and all(v >= 0 for v in b.values())


def feasible_pairs(g_max: int) -> list[tuple[int, int]]:
    out = []
    for g in range(g_max + 1):
        # b_4 turns negative for d well below 2g + 10
        for d in range(g + 1, 2 * g + 12):
            if is_feasible(g, d):
                out.append((g, d))
    return out


def prop51_candidates(r: int) -> Fraction:
    return Fraction(r ** 3 - r - 3, 3 * (r - 1))


def prop51_scan(r_max: int, side_constraints: bool = True) -> list[tuple[int, int]]:
    """Integral ``d`` from one linear syzygy plus nonspeciality.

    With the side constraints ``d >= r`` and ``g = d - r >= 0``; without
    them ``r = 2, d = 1`` appears.
    """
    if r_max < 2:
        raise ValueError("r_max must be at least 2")
    out = []
    for r in range(2, r_max + 1):
        num, den = r ** 3 - r - 3, 3 * (r - 1)
        if num % den:
            continue
        d = num // den
        if side_constraints and d < r:
            continue
        out.append((r, d))
    return out


def clifford_excess(g: int, degree: int) -> int:
    """``a`` in ``deg L = g + ceil(g/2) + a``."""
    return degree - g - (g + 1) // 2


def strand_lower_bound(g: int, degree: int) -> int | None:
    """Lower bound ``a - 1`` on the 2-linear strand length of a very
    ample line bundle, or ``None`` when ``a < 1``."""
    a = clifford_excess(g, degree)
    return a - 1 if a >= 1 else None


# ---------------------------------------------------------------------------
# lattice polygons


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[tuple[int, int]]:
    """Counterclockwise extreme points (monotone chain)."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


@dataclass(frozen=True)
class LatticePolygon:
    vertices: tuple[tuple[int, int], ...]

    def __post_init__(self):
        hull = convex_hull(self.vertices)
        if len(hull) < 3:
            raise ValueError("degenerate polygon")
        if len(hull) != len(self.vertices) or set(hull) != set(self.vertices):
            raise ValueError("vertices must be the extreme points of a convex polygon")
        object.__setattr__(self, "vertices", tuple(hull))

    @classmethod
    def from_points(cls, points) -> "LatticePolygon":
        return cls(tuple(convex_hull(points)))

    @classmethod
    def from_json(cls, text: str) -> "LatticePolygon":
        data = json.loads(text)
        return cls.from_points([tuple(p) for p in data["vertices"]])

    def to_json(self) -> str:
        return json.dumps({"vertices": [list(v) for v in self.vertices]})

    @property
    def area(self) -> Fraction:
        v = self.vertices
        s = sum(v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1] for i in range(len(v)))
        return Fraction(abs(s), 2)

    @property
    def boundary_points(self) -> int:
        v = self.vertices
        return sum(gcd(v[(i + 1) % len(v)][0] - v[i][0], v[(i + 1) % len(v)][1] - v[i][1]) for i in range(len(v)))

    def lattice_points(self) -> list[tuple[int, int]]:
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        v = self.vertices
        out = []
        for x in range(min(xs), max(xs) + 1):
            for y in range(min(ys), max(ys) + 1):
                if all(_cross(v[i], v[(i + 1) % len(v)], (x, y)) >= 0 for i in range(len(v))):
                    out.append((x, y))
        return out

    @property
    def interior_points(self) -> int:
        return len(self.lattice_points()) - self.boundary_points


def pick_stats(P: LatticePolygon) -> dict:
    area, b = P.area, P.boundary_points
    i = P.interior_points
    if 2 * area != 2 * i + b - 2:
        raise AssertionError(f"Pick identity fails for {P.vertices}")
    return {"area": area, "boundary": b, "interior": i, "degree": int(2 * area)}


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, s, t = _ext_gcd(b, a % b)
    return g, t, s - (a // b) * t


def _normalize_from(points: list, verts: list, k: int, step: int) -> tuple:
    o = verts[k]
    nxt = verts[(k + step) % len(verts)]
    prv = verts[(k - step) % len(verts)]
    ux, uy = nxt[0] - o[0], nxt[1] - o[1]
    g = gcd(ux, uy)
    ux, uy = ux // g, uy // g
    _, s, t = _ext_gcd(ux, uy)
    assert s * ux + t * uy == 1

    def m(p):
        x, y = p[0] - o[0], p[1] - o[1]
        return (s * x + t * y, -uy * x + ux * y)

    pts = [m(p) for p in points]
    w = m(prv)
    if w[1] < 0:
        pts = [(x, -y) for x, y in pts]
        w = (w[0], -w[1])
    # shear (x, y) -> (x + k y, y) puts the other neighbour in 0 <= x < y
    k_sh = -(w[0] // w[1])
    return tuple(sorted((x + k_sh * y, y) for x, y in pts))


def polygon_normal_form(P: LatticePolygon) -> tuple:
    """Lexicographically least lattice-point set over all affine unimodular
    images that send a vertex to the origin and an incident edge to the
    positive x-axis."""
    pts = P.lattice_points()
    verts = list(P.vertices)
    return min(_normalize_from(pts, verts, k, st) for k in range(len(verts)) for st in (1, -1))


def enumerate_small_polygons(max_points: int, box: int) -> dict[tuple, LatticePolygon]:
    """All lattice polygons with at most ``max_points`` lattice points, up to
    unimodular equivalence.

    Polygons grow by one lattice point at a time: removing a suitable
    vertex of a polygon with ``n >= 4`` points leaves a 2-dimensional
    polygon with ``n - 1`` points, except for triangles whose points other
    than the apex are collinear, which are seeded directly.  New points are
    searched in a window of radius ``box`` around each representative.
    """
    seen: dict[tuple, LatticePolygon] = {}
    layer: dict[tuple, LatticePolygon] = {}
    for k in range(1, max_points - 1):
        P = LatticePolygon.from_points([(0, 0), (k, 0), (0, 1)])
        seen.setdefault(polygon_normal_form(P), P)
    for nf, P in list(seen.items()):
        if len(nf) == 3:
            layer[nf] = P
    for n in range(4, max_points + 1):
        nxt: dict[tuple, LatticePolygon] = {nf: P for nf, P in seen.items() if len(nf) == n}
        for nf in layer:
            xs = [p[0] for p in nf]
            ys = [p[1] for p in nf]
            for x in range(min(xs) - box, max(xs) + box + 1):
                for y in range(min(ys) - box, max(ys) + box + 1):
                    if (x, y) in nf:
                        continue
                    Q = LatticePolygon.from_points(list(nf) + [(x, y)])
                    pts = Q.lattice_points()
                    if len(pts) != n:
                        continue
                    key = polygon_normal_form(Q)
                    if key not in nxt:
                        nxt[key] = LatticePolygon.from_points(key)
        seen.update(nxt)
        layer = nxt
    return seen


def census_classes(P: LatticePolygon) -> tuple[int, int]:
    return P.boundary_points, P.interior_points


def enumerate_polygons(box: int = 9) -> list[LatticePolygon]:
    """Polygons with ``boundary in {4, 5}`` and ``floor(i/2) + boundary <= 5``,
    in a deterministic order."""
    allp = enumerate_small_polygons(7, box)
    out = []
    for nf, P in allp.items():
        b, i = census_classes(P)
        if b in (4, 5) and i // 2 + b <= 5:
            out.append((b, i, nf, P))
    out.sort(key=lambda t: (t[0], t[1], t[2]))
    return [t[3] for t in out]


def polygon_configuration(P: LatticePolygon) -> PointConfiguration:
    pts = sorted(P.lattice_points())
    return PointConfiguration([(x, y, 1) for x, y in pts], names=[f"t{k}" for k in range(len(pts))])


@dataclass
class PolygonReport:
    polygon: LatticePolygon
    stats: dict
    diagram: str
    quadratic: bool
    strand: list[int]
    status: str
    witness: object = None
    notes: list[str] = field(default_factory=list)

    @property
    def two_lp(self) -> int:
        return len(self.strand)

    def to_json(self) -> dict:
        return {
            "vertices": [list(v) for v in self.polygon.vertices],
            "area": str(self.stats["area"]),
            "boundary": self.stats["boundary"],
            "interior": self.stats["interior"],
            "quadratic": self.quadratic,
            "strand": self.strand,
            "status": self.status,
            "witness": self.witness.matrix.to_lists() if self.witness is not None else None,
        }


def polygon_report(P: LatticePolygon, field_: Field | None = None, seed: int = 0) -> PolygonReport:
    stats = pick_stats(P)
    A = polygon_configuration(P)
    table = hochster_betti(A, 4, field_)
    coarse = table.coarse()
    # three-regular: no generators beyond degree 3
    quadratic = coarse.get((1, 3), 0) == 0
    I = toric_ideal(A, field_)
    Q = QuadraticSystem.from_ideal(I)
    strand = koszul_strand_betti(Q) if Q.r else []
    notes = []
    if strand and strand[: min(len(strand), 3)] != [coarse.get((i, i + 1), 0) for i in range(1, min(len(strand), 3) + 1)]:
        raise AssertionError("strand and Hochster disagree")
    witness = None
    if not quadratic or len(strand) < 2:
        status = "not-applicable"
    elif len(strand) > 2:
        # outside the census, but report the 2 x (2LP+1) scroll when one exists
        status = "not-applicable"
        witness = variable_scroll_search(Q, len(strand) + 1)
        if witness is not None:
            notes.append(f"2 x {len(strand) + 1} variable-entry scroll found")
    else:
        witness = variable_scroll_search(Q, 3)
        if witness is None:
            notes.append("variable-entry search failed; randomized fallback used")
            witness = randomized_scroll_search(Q, 3, seed=seed)
        status = "conjecture-verified" if witness is not None else "witness-not-found"
    return PolygonReport(P, stats, betti_diagram(coarse), quadratic, strand, status, witness, notes)


# ---------------------------------------------------------------------------
# small pseudomanifolds


def small_pseudomanifolds(max_vertices: int = 6) -> list[OrientedComplex]:
    """Orientable closed 2-pseudomanifolds on 4..max_vertices vertices (all
    used), one per isomorphism type."""
    out = []
    for d in range(4, max_vertices + 1):
        forms = set()
        for tris in surface_triangulations(d, None, manifold_only=False):
            forms.add(canonical_form(tris, d))
        for k, form in enumerate(sorted(forms)):
            c = orient_facets(d, form, f"pm{d}-{k}")
            if c is None or not validate_pseudomanifold(c).ok:
                continue
            out.append(c)
    return out


@dataclass
class PseudomanifoldScanEntry:
    complex: OrientedComplex
    strand: list[int]
    bipyramids: list
    scroll: object

    @property
    def has_witness(self) -> bool:
        n = self.complex.dimension
        return self.scroll is not None or any(b.extra["k"] >= n for b in self.bipyramids)


def small_pseudomanifold_scan(max_vertices: int = 6, field_: Field | None = None) -> dict:
    """Linear strands of ``J_Δ`` and witnesses; counterexamples are the
    complexes with ``2LP = n`` and no witness."""
    entries = []
    for c in small_pseudomanifolds(max_vertices):
        n = c.dimension
        A = PointConfiguration.from_complex(c)
        Q = QuadraticSystem.from_ideal(toric_ideal(A, field_))
        strand = koszul_strand_betti(Q)
        bips = bipyramid_scan(c, Q)
        scroll = None
        if len(strand) == n and not any(b.extra["k"] >= n for b in bips):
            scroll = variable_scroll_search(Q, n + 1)
        entries.append(PseudomanifoldScanEntry(c, strand, bips, scroll))
    counter = [e.complex.name for e in entries if len(e.strand) == e.complex.dimension and not e.has_witness]
    return {"entries": entries, "counterexamples": counter}


def genus_seven_diagram() -> str:
    return betti_diagram(curve_betti_table(7, 13))

