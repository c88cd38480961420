"""Toric ideals and their multigraded Betti numbers via Hochster's formula."""
from __future__ import annotations

import itertools
import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .exactalg import QQ, ExactMatrix, Field, default_field, solve
from .groebner import PolyIdeal, saturate_by_variables
from .polyring import MultiPoly, RingSpec
from .simplicial import OrientedComplex, reduced_homology

Vec = tuple[int, ...]


class UngradedConfiguration(ValueError):
    pass


@dataclass
class PointConfiguration:
    """Columns ``a_1..a_q`` in Z^p with an optional attached ring.

    ``omega`` satisfies ``omega·a_i = 1`` for every column, or is ``None``
    when no such vector exists.
    """

    columns: tuple[Vec, ...]
    names: tuple[str, ...] | None = None
    ring_template: RingSpec | None = None
    omega: tuple | None = field(default=None)

    def __post_init__(self):
        self.columns = tuple(tuple(int(x) for x in c) for c in self.columns)
        if not self.columns:
            raise ValueError("empty configuration")
        if len({len(c) for c in self.columns}) != 1:
            raise ValueError("columns of unequal length")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("columns must be distinct")
        if self.names is None:
            self.names = tuple(f"t{i + 1}" for i in range(len(self.columns)))
        if self.omega is None:
            self.omega = grading_vector(self.columns)

    @property
    def ambient(self) -> int:
        return len(self.columns[0])

    @property
    def q(self) -> int:
        return len(self.columns)

    @property
    def graded(self) -> bool:
        return self.omega is not None

    def level(self, m: Sequence[int]) -> Fraction:
        return sum(Fraction(w) * x for w, x in zip(self.omega, m))

    def ring(self, field: Field | None = None) -> RingSpec:
        F = field or default_field()
        if self.ring_template is not None:
            return self.ring_template.with_field(F)
        return RingSpec.make(self.names, F, grading=self.columns)

    @classmethod
    def from_complex(cls, c: OrientedComplex) -> "PointConfiguration":
        from .kozrees import facet_ring, weight_configuration

        cfg = weight_configuration(c)
        return cls(cfg.columns, cfg.names, facet_ring(c), cfg.omega)


def grading_vector(columns: Sequence[Vec]):
    """Rational ``ω`` with ``ω·a = 1`` for all columns, or ``None``."""
    p = len(columns[0])
    m = ExactMatrix.from_rows([list(c) for c in columns], QQ, ncols=p)
    sol = solve(m, [1] * len(columns))
    if sol is None:
        return None
    return tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in sol)


def identify_vertices(A: PointConfiguration, i: int, j: int) -> PointConfiguration:
    """Merge coordinate ``j`` into ``i`` and drop it; duplicate columns collapse.

    For a configuration built from a complex, vertex ``v`` is coordinate ``v``.
    """
    p = A.ambient
    if i == j:
        raise ValueError("cannot identify a coordinate with itself")
    if not (0 <= i < p and 0 <= j < p):
        raise ValueError(f"coordinates must lie in 0..{p - 1}")
    cols = []
    names = []
    seen = set()
    for c, name in zip(A.columns, A.names):
        v = list(c)
        v[i] += v[j]
        del v[j]
        v = tuple(v)
        if v in seen:
            continue
        seen.add(v)
        cols.append(v)
        names.append(name)
    return PointConfiguration(tuple(cols), tuple(names))


# ---------------------------------------------------------------------------
# lattice kernel


def integer_kernel(columns: Sequence[Vec]) -> list[Vec]:
    """A Z-basis of ``{u in Z^q : Σ u_i a_i = 0}``, LLL-reduced."""
    q = len(columns)
    p = len(columns[0])
    # rows [a_i | e_i]; integer row operations on the first p entries
    rows = [list(columns[i]) + [1 if k == i else 0 for k in range(q)] for i in range(q)]
    r0 = 0
    for col in range(p):
        while True:
            nz = [k for k in range(r0, q) if rows[k][col]]
            if not nz:
                break
            piv = min(nz, key=lambda k: abs(rows[k][col]))
            rows[r0], rows[piv] = rows[piv], rows[r0]
            done = True
            for k in range(r0 + 1, q):
                if rows[k][col]:
                    f = rows[k][col] // rows[r0][col]
                    rows[k] = [a - f * b for a, b in zip(rows[k], rows[r0])]
                    if rows[k][col]:
                        done = False
            if done:
                r0 += 1
                break
    basis = [tuple(r[p:]) for r in rows[r0:]]
    assert all(not any(r[:p]) for r in rows[r0:])
    if basis:
        basis = _lll(basis)
    return basis


def _lll(basis: list[Vec]) -> list[Vec]:
    M = DomainMatrix([[ZZ(x) for x in b] for b in basis], (len(basis), len(basis[0])), ZZ)
    red = M.lll()
    return [tuple(int(x) for x in row) for row in red.to_list() if any(row)]


def _binomial(ring: RingSpec, u: Sequence[int]) -> MultiPoly:
    pos = tuple(x if x > 0 else 0 for x in u)
    neg = tuple(-x if x < 0 else 0 for x in u)
    return ring.monomial(pos) - ring.monomial(neg)


# ---------------------------------------------------------------------------
# semigroup levels


_BASE_BITS = 20
_BASE = 1 << _BASE_BITS
_HALF = _BASE >> 1


def encode(v: Sequence[int]) -> int:
    """Injective linear packing of a small integer vector into one int."""
    c = 0
    for x in reversed(v):
        c = c * _BASE + x
    return c


def decode(c: int, length: int) -> Vec:
    out = []
    for _ in range(length):
        r = c % _BASE
        if r >= _HALF:
            r -= _BASE
        out.append(r)
        c = (c - r) >> _BASE_BITS
    return tuple(out)


class Semigroup:
    """Level sets ``L_t`` of the affine semigroup generated by the columns.

    Elements are stored packed by :func:`encode`, so that subtracting a
    column is a single integer subtraction.
    """

    def __init__(self, A: PointConfiguration):
        if not A.graded:
            raise UngradedConfiguration("configuration has no grading vector")
        self.A = A
        self.col_codes = [encode(c) for c in A.columns]
        self._maxabs = max(abs(x) for c in A.columns for x in c)
        self.codes: list[set[int]] = [{0}]
        self._decoded: dict[int, set[Vec]] = {}

    def extend(self, tmax: int) -> None:
        if tmax * self._maxabs >= _HALF:
            raise ValueError("level too large for the packed representation")
        cols = self.col_codes
        while len(self.codes) <= tmax:
            prev = self.codes[-1]
            self.codes.append({m + a for m in prev for a in cols})

    def level_codes(self, t: int) -> set[int]:
        self.extend(t)
        return self.codes[t]

    def level(self, t: int) -> set[Vec]:
        if t not in self._decoded:
            n = self.A.ambient
            self._decoded[t] = {decode(c, n) for c in self.level_codes(t)}
        return self._decoded[t]

    def contains(self, m: Sequence[int]) -> bool:
        t = self.A.level(m)
        if t.denominator != 1 or t < 0:
            return False
        return encode(m) in self.level_codes(int(t))


def semigroup_levels(A: PointConfiguration, tmax: int) -> list[set[Vec]]:
    sg = Semigroup(A)
    return [sg.level(t) for t in range(tmax + 1)]


def fiber_monomials(A: PointConfiguration, t: int) -> dict[Vec, list[Vec]]:
    """Exponent vectors of degree ``t`` grouped by their A-degree."""
    out: dict[Vec, list[Vec]] = defaultdict(list)
    q = A.q
    for combo in itertools.combinations_with_replacement(range(q), t):
        e = [0] * q
        m = [0] * A.ambient
        for i in combo:
            e[i] += 1
            for k, x in enumerate(A.columns[i]):
                m[k] += x
        out[tuple(m)].append(tuple(e))
    return out


# ---------------------------------------------------------------------------
# toric ideal


def toric_ideal(A: PointConfiguration, field: Field | None = None, fiber_levels: int = 3) -> PolyIdeal:
    """``I_A`` from a lattice basis, low-degree fiber binomials and saturation.

    The binomials of every fiber up to degree ``fiber_levels`` lie in
    ``I_A`` and only speed up the final saturation by the product of all
    variables.
    """
    if not A.graded:
        raise UngradedConfiguration("toric_ideal needs a graded configuration")
    R = A.ring(field)
    gens = [_binomial(R, u) for u in integer_kernel(A.columns)]
    for t in range(2, fiber_levels + 1):
        for m, exps in sorted(fiber_monomials(A, t).items()):
            for e in exps[1:]:
                gens.append(R.monomial(exps[0]) - R.monomial(e))
    gens = [g for g in gens if g]
    seed = PolyIdeal(R, gens, name="lattice")
    sat = saturate_by_variables(seed, list(range(R.nvars)))
    return PolyIdeal(R, sat.generators, name="I_A")


# ---------------------------------------------------------------------------
# Hochster


def fiber_masks(sg: Semigroup, m: Vec | int, t: int | None = None, max_size: int | None = None) -> list[int]:
    """Faces of ``Δ_m`` as bitmasks over column indices (``[]`` if ``m`` is
    not in the semigroup).  ``m`` may be packed; ``t`` is its level if known."""
    A = sg.A
    if t is None:
        if isinstance(m, int):
            m = decode(m, A.ambient)
        lv = A.level(m)
        if lv.denominator != 1 or lv < 0:
            return []
        t = int(lv)
    mc = m if isinstance(m, int) else encode(m)
    levels = [sg.level_codes(k) for k in range(t + 1)]
    if mc not in levels[t]:
        return []
    cols = sg.col_codes
    cap = t if max_size is None else min(t, max_size)
    verts = []
    if t >= 1:
        below = levels[t - 1]
        verts = [i for i in range(A.q) if mc - cols[i] in below]
    vcols = [cols[i] for i in verts]
    vbits = [1 << i for i in verts]
    nv = len(verts)
    faces = [0]

    def rec(start: int, mask: int, rest: int, depth: int):
        if depth >= cap:
            return
        target = levels[t - depth - 1]
        for k in range(start, nv):
            nr = rest - vcols[k]
            if nr in target:
                nm = mask | vbits[k]
                faces.append(nm)
                rec(k + 1, nm, nr, depth + 1)

    rec(0, 0, mc, 0)
    return faces


def _mask_set(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


def fiber_faces(sg: Semigroup, m: Vec) -> list[frozenset]:
    """All faces ``I`` with ``m - Σ_{i∈I} a_i`` in the semigroup."""
    return [_mask_set(f) for f in fiber_masks(sg, tuple(m))]


def fiber_complex(A: PointConfiguration, m: Sequence[int], sg: Semigroup | None = None) -> OrientedComplex:
    """``Δ_m(A)`` on vertex set ``1..q``; void if ``m`` is not in the semigroup."""
    sg = sg or Semigroup(A)
    faces = fiber_faces(sg, tuple(m))
    if not faces:
        return OrientedComplex(A.q, ())
    return OrientedComplex.from_sets(A.q, [{i + 1 for i in f} for f in faces])


def _cone_apex(faces: list[int]) -> int | None:
    """A vertex ``v`` with ``F ∪ {v}`` a face for every face ``F``."""
    union = 0
    for f in faces:
        union |= f
    fs = set(faces)
    v = 0
    while union:
        if union & 1:
            bit = 1 << v
            if all((f | bit) in fs for f in faces):
                return v
        union >>= 1
        v += 1
    return None


@dataclass
class BettiTable:
    """Multigraded Betti numbers of ``S/I``; ``entries[(i, m)] = b_{i,m}``."""

    entries: dict[tuple[int, Vec], int]
    omega: tuple
    bound: int
    field: str = ""

    def coarse(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (i, m), v in self.entries.items():
            j = sum(Fraction(w) * x for w, x in zip(self.omega, m))
            out[(i, int(j))] += v
        return dict(out)

    def b(self, i: int, j: int) -> int:
        return self.coarse().get((i, j), 0)

    def fine(self, i: int, m: Sequence[int]) -> int:
        return self.entries.get((i, tuple(m)), 0)

    def totals(self) -> list[int]:
        c = self.coarse()
        top = max(i for i, _ in c)
        return [sum(v for (i, _), v in c.items() if i == k) for k in range(top + 1)]

    def linear_strand(self) -> list[int]:
        """``[b_{1,2}, b_{2,3}, ...]`` up to the first zero."""
        c = self.coarse()
        out = []
        i = 1
        while c.get((i, i + 1), 0):
            out.append(c[(i, i + 1)])
            i += 1
        return out

    def to_json(self) -> str:
        return json.dumps(
            {
                "field": self.field,
                "bound": self.bound,
                "coarse": {f"{i},{j}": v for (i, j), v in sorted(self.coarse().items())},
                "fine": {f"{i}|{','.join(map(str, m))}": v for (i, m), v in sorted(self.entries.items())},
            },
            indent=1,
        )

    def diagram(self) -> str:
        return betti_diagram(self.coarse())


def betti_diagram(coarse: dict[tuple[int, int], int]) -> str:
    """Text table: columns are ``i``, rows are ``j - i``, ``--`` for zero."""
    if not coarse:
        return "total:\n"
    cols = max(i for i, _ in coarse) + 1
    rows = max(j - i for i, j in coarse) + 1
    totals = [sum(v for (i, _), v in coarse.items() if i == k) for k in range(cols)]
    cells = [["total:"] + [str(t) for t in totals]]
    for r in range(rows):
        line = [f"{r}:"]
        for i in range(cols):
            v = coarse.get((i, i + r), 0)
            line.append(str(v) if v else "--")
        cells.append(line)
    widths = [max(len(row[k]) for row in cells) for k in range(cols + 1)]
    out = []
    for row in cells:
        out.append(" ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


def hochster_betti(
    A: PointConfiguration,
    max_coarse_degree: int,
    field: Field | None = None,
    max_index: int | None = None,
) -> BettiTable:
    """All ``b_{i,m}(S/I_A)`` with ``ω·m`` up to the bound.

    ``b_{1+j,m} = h̃_j(Δ_m)``; cones are skipped.  ``max_index`` limits the
    homological index (e.g. 3 for the first few linear-strand entries, which
    only need ``j <= 2``).
    """
    F = field or default_field()
    sg = Semigroup(A)
    sg.extend(max_coarse_degree)
    entries: dict[tuple[int, Vec], int] = {((0, (0,) * A.ambient)): 1}
    for t in range(2, max_coarse_degree + 1):
        cap = None if max_index is None else max_index + 1
        for mc in sorted(sg.level_codes(t)):
            faces = fiber_masks(sg, mc, t, cap)
            if len(faces) <= 1 or _cone_apex(faces) is not None:
                continue
            h = reduced_homology([_mask_set(f) for f in faces], F)
            for j, v in h.items():
                if j < 0:
                    continue
                if max_index is not None and j + 1 > max_index:
                    continue
                entries[(j + 1, decode(mc, A.ambient))] = v
    return BettiTable(entries, A.omega, max_coarse_degree, repr(F))
