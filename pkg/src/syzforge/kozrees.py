"""Constructors for Koszul-cycle ideals, skew-matrix ideals and their
pseudomanifold and cycle specializations."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .exactalg import Field
from .groebner import PolyIdeal
from .polyring import MultiPoly, RingSpec, face_label, multidegree_of, INHOMOGENEOUS
from .simplicial import OrientedComplex, validate_pseudomanifold


@dataclass(frozen=True)
class WeightedConfig:
    """Columns ``e_1..e_d`` and ``wt(σ) = e_0 - Σ_{v∈σ} e_v`` in Z^{d+1}.

    Coordinate 0 is ``e_0``.  ``names`` lists the matching ring variables.
    """

    ambient: int
    columns: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]
    facets: tuple[tuple[int, ...], ...]
    omega: tuple[int, ...]

    def weight(self, col: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.omega, col))


def weight_configuration(c: OrientedComplex) -> WeightedConfig:
    if not c.is_pure() or not c.facets:
        raise ValueError("weight configuration needs a pure nonvoid complex")
    d = c.vertex_count
    n = c.dimension
    cols = []
    names = []
    for v in range(1, d + 1):
        e = [0] * (d + 1)
        e[v] = 1
        cols.append(tuple(e))
        names.append(f"x{v}")
    facets = sorted(tuple(sorted(f)) for f in c.facets)
    for f in facets:
        e = [0] * (d + 1)
        e[0] = 1
        for v in f:
            e[v] -= 1
        cols.append(tuple(e))
        names.append("y" + face_label(f))
    omega = (n + 2,) + (1,) * d
    cfg = WeightedConfig(d + 1, tuple(cols), tuple(names), tuple(facets), omega)
    assert all(cfg.weight(col) == 1 for col in cols)
    return cfg


def facet_ring(c: OrientedComplex, field: Field | None = None) -> RingSpec:
    """Ring ``k[x_1..x_d, y_σ]`` (facets in sorted order) with the toric grading."""
    cfg = weight_configuration(c)
    roles = ["x"] * c.vertex_count + ["y"] * len(cfg.facets)
    labels = [(v,) for v in range(1, c.vertex_count + 1)] + list(cfg.facets)
    return RingSpec.make(cfg.names, field, grading=cfg.columns, roles=roles, labels=labels)


# ---------------------------------------------------------------------------
# Koszul cycles


def koszul_cycle_generators(d: int, i: int, field: Field | None = None) -> PolyIdeal:
    """``J_i``: one ``z_I = Σ_j (-1)^{j+1} x_{a_j} y_{I-a_j}`` per ``(i+1)``-set ``I``."""
    if not 1 <= i <= d - 1:
        raise ValueError(f"need 1 <= i <= d-1, got d={d}, i={i}")
    ysets = list(itertools.combinations(range(1, d + 1), i))
    names = [f"x{v}" for v in range(1, d + 1)] + ["y" + face_label(J) for J in ysets]
    grading = []
    for v in range(1, d + 1):
        e = [0] * (d + 1)
        e[v] = 1
        grading.append(e)
    for J in ysets:
        e = [0] * (d + 1)
        e[0] = 1
        for v in J:
            e[v] += 1
        grading.append(e)
    roles = ["x"] * d + ["y"] * len(ysets)
    labels = [(v,) for v in range(1, d + 1)] + ysets
    R = RingSpec.make(names, field, grading=grading, roles=roles, labels=labels)
    yidx = {J: d + k for k, J in enumerate(ysets)}
    gens = []
    for I in itertools.combinations(range(1, d + 1), i + 1):
        z = R.zero()
        for j, a in enumerate(I):
            rest = I[:j] + I[j + 1:]
            term = R.var(a - 1) * R.var(yidx[rest])
            z = z + term if j % 2 == 0 else z - term
        gens.append(z)
    return PolyIdeal(R, gens, name=f"J_{i}(d={d})")


def pseudomanifold_ideal(c: OrientedComplex, field: Field | None = None) -> PolyIdeal:
    """``J(Δ)``: ``x_i y_σ - x_j y_τ`` for every ridge ``σ - i = τ - j``."""
    rep = validate_pseudomanifold(c)
    if not rep.ok:
        raise ValueError(f"not an oriented pseudomanifold: {'; '.join(rep.notes)}")
    R = facet_ring(c, field)
    d = c.vertex_count
    facets = [tuple(sorted(f)) for f in R.labels[d:]]
    fidx = {f: d + k for k, f in enumerate(facets)}
    ridges: dict[tuple, list[tuple[int, tuple]]] = {}
    for f in facets:
        for k, v in enumerate(f):
            ridges.setdefault(f[:k] + f[k + 1:], []).append((v, f))
    gens = []
    for ridge in sorted(ridges):
        (i, s), (j, t) = sorted(ridges[ridge])
        gens.append(R.var(i - 1) * R.var(fidx[s]) - R.var(j - 1) * R.var(fidx[t]))
    for g in gens:
        assert multidegree_of(g) != INHOMOGENEOUS
    return PolyIdeal(R, gens, name=f"J({c.name or 'Δ'})")


# ---------------------------------------------------------------------------
# skew matrices


class SkewLinearMatrix:
    """Skew-symmetric ``d x d`` matrix stored by its upper triangle (0-based)."""

    def __init__(self, size: int, ring: RingSpec, entries: dict[tuple[int, int], MultiPoly] | None = None):
        self.size = size
        self.ring = ring
        self.upper: dict[tuple[int, int], MultiPoly] = {}
        for (i, j), p in (entries or {}).items():
            if i == j:
                if p:
                    raise ValueError("diagonal entries of a skew matrix vanish")
                continue
            if not (0 <= i < size and 0 <= j < size):
                raise IndexError((i, j))
            if i > j:
                i, j, p = j, i, -p
            if p and p.degree() > 1:
                raise ValueError("entries must be of degree at most one")
            if p:
                self.upper[(i, j)] = p

    def entry(self, i: int, j: int) -> MultiPoly:
        if i == j:
            return self.ring.zero()
        if i < j:
            return self.upper.get((i, j), self.ring.zero())
        return -self.upper.get((j, i), self.ring.zero())

    def to_rows(self) -> list[list[MultiPoly]]:
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    def apply(self, x: Sequence[MultiPoly]) -> list[MultiPoly]:
        if len(x) != self.size:
            raise ValueError("vector length does not match matrix size")
        out = []
        for i in range(self.size):
            acc = self.ring.zero()
            for j in range(self.size):
                e = self.entry(i, j)
                if e:
                    acc = acc + e * x[j]
            out.append(acc)
        return out

    def delete(self, rows: Sequence[int]) -> "SkewLinearMatrix":
        """Principal submatrix without the given indices."""
        keep = [k for k in range(self.size) if k not in set(rows)]
        ent = {}
        for a, i in enumerate(keep):
            for b, j in enumerate(keep):
                if a < b and (i, j) in self.upper:
                    ent[(a, b)] = self.upper[(i, j)]
        return SkewLinearMatrix(len(keep), self.ring, ent)


def generic_skew(d: int, field: Field | None = None) -> tuple[SkewLinearMatrix, list[MultiPoly]]:
    """Generic ``Y`` with ``Y[i][j] = (-1)^{i+j} y_ij`` (1-based, ``i<j``) and ``X``."""
    pairs = list(itertools.combinations(range(1, d + 1), 2))
    names = [f"x{v}" for v in range(1, d + 1)] + ["y" + face_label(p) for p in pairs]
    R = RingSpec.make(names, field)
    ent = {}
    for k, (i, j) in enumerate(pairs):
        y = R.var(d + k)
        ent[(i - 1, j - 1)] = y if (i + j) % 2 == 0 else -y
    return SkewLinearMatrix(d, R, ent), [R.var(v) for v in range(d)]


def pfaffian(M: SkewLinearMatrix) -> MultiPoly:
    """Pfaffian by expansion along the first row."""
    if M.size % 2:
        raise ValueError("Pfaffian of an odd-size matrix")

    @lru_cache(maxsize=None)
    def pf(idx: tuple[int, ...]) -> MultiPoly:
        if not idx:
            return M.ring.one()
        a = idx[0]
        acc = M.ring.zero()
        for k in range(1, len(idx)):
            e = M.entry(a, idx[k])
            if not e:
                continue
            rest = idx[1:k] + idx[k + 1:]
            term = e * pf(rest)
            acc = acc + term if k % 2 == 1 else acc - term
        return acc

    return pf(tuple(range(M.size)))


def det(rows: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by Laplace expansion over column subsets (small sizes)."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    ring = rows[0][0].ring

    @lru_cache(maxsize=None)
    def rec(r: int, cols: tuple[int, ...]) -> MultiPoly:
        if r == n:
            return ring.one()
        acc = ring.zero()
        for k, c in enumerate(cols):
            e = rows[r][c]
            if not e:
                continue
            term = e * rec(r + 1, cols[:k] + cols[k + 1:])
            acc = acc + term if k % 2 == 0 else acc - term
        return acc

    return rec(0, tuple(range(n)))


def skew_matrix_ideal(M: SkewLinearMatrix, x: Sequence[MultiPoly], with_pfaffian: bool = False) -> PolyIdeal:
    """Entries of ``M·x``, plus the Pfaffian of ``M`` when asked (even size only)."""
    if with_pfaffian and M.size % 2:
        raise ValueError("the Pfaffian generator needs an even-size matrix")
    gens = [g for g in M.apply(x) if g]
    if with_pfaffian:
        p = pfaffian(M)
        if p:
            gens.append(p)
    return PolyIdeal(M.ring, gens, name="I(Y)" if not with_pfaffian else "J(Y)")


def cycle_skew_matrix(d: int, field: Field | None = None, normalize_sign: bool = True) -> SkewLinearMatrix:
    """``Y`` specialized to the supradiagonal and the corner, in the cycle's ring.

    With ``normalize_sign`` the corner variable is replaced by its negative
    when ``d`` is even, which makes every entry of ``Y·X`` a binomial
    ``x_{i-1} y_{i-1,i} - x_{i+1} y_{i,i+1}`` up to sign.
    """
    from .simplicial import cycle

    if d < 4:
        raise ValueError("cycle specialization needs d >= 4")
    R = facet_ring(cycle(d), field)
    ent = {}
    for i in range(1, d):
        ent[(i - 1, i)] = -R.var("y" + face_label((i, i + 1)))
    corner = R.var("y" + face_label((1, d)))
    sign = 1 if (1 + d) % 2 == 0 else -1
    if normalize_sign and d % 2 == 0:
        sign = -sign
    ent[(0, d - 1)] = corner if sign > 0 else -corner
    return SkewLinearMatrix(d, R, ent)


def cycle_specialization(d: int, field: Field | None = None, normalize_sign: bool = True) -> PolyIdeal:
    """``ℐ_d`` (odd ``d``) or ``𝒥_d`` (even ``d``) in the cycle's facet ring."""
    M = cycle_skew_matrix(d, field, normalize_sign)
    x = [M.ring.var(v) for v in range(d)]
    gens = M.apply(x)
    if d % 2 == 0:
        gens.append(pfaffian(M))
    tag = "I" if d % 2 else "J"
    return PolyIdeal(M.ring, gens, name=f"{tag}_{d}(cycle)")
