"""The 2-linear strand from the quadrics alone: Koszul homology, explicit
linear first syzygies and their ranks."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

from .exactalg import ExactMatrix, Field, left_kernel, rank, row_reduce, solve
from .groebner import PolyIdeal
from .polyring import Exponent, MultiPoly, RingSpec

SIZE_LIMIT = 5_000_000


class StrandTooLarge(ValueError):
    pass


class QuadraticSystem:
    """A basis of the degree-2 part ``I_2`` in reduced echelon form.

    Columns of the echelon form are the degree-2 monomials in descending
    grevlex order, so pivots are the grevlex-largest monomials.
    """

    def __init__(self, ring: RingSpec, quadrics: Sequence[MultiPoly]):
        for q in quadrics:
            if q and (q.degree() != 2 or not q.is_homogeneous()):
                raise ValueError(f"{q} is not a quadric")
        self.ring = ring
        self.monomials: list[Exponent] = ring.monomials_of_degree(2)
        self._col = {e: j for j, e in enumerate(self.monomials)}
        rows = []
        for q in quadrics:
            rows.append({self._col[e]: c for e, c in q.terms.items()})
        m = ExactMatrix(len(rows), len(self.monomials), ring.field, rows)
        ech, rk, _ = row_reduce(m)
        self.echelon = [dict(ech.rows[i]) for i in range(rk)]
        self.pivots = [min(r) for r in self.echelon]
        self._pivot_row = {p: i for i, p in enumerate(self.pivots)}
        self.quadrics = [
            MultiPoly(ring, {self.monomials[j]: c for j, c in r.items()}) for r in self.echelon
        ]
        std = [j for j in range(len(self.monomials)) if j not in self._pivot_row]
        self.standard = std
        self._std_index = {j: k for k, j in enumerate(std)}

    @classmethod
    def from_ideal(cls, I: PolyIdeal) -> "QuadraticSystem":
        """``I_2`` from the generators (assumes none has degree below 2)."""
        if any(g.degree() < 2 for g in I.generators):
            raise ValueError("ideal contains a linear form or a constant")
        return cls(I.ring, [g for g in I.generators if g.degree() == 2])

    @property
    def r(self) -> int:
        return len(self.quadrics)

    @property
    def d(self) -> int:
        return self.ring.nvars

    def normal_form(self, e: Exponent) -> dict[int, object]:
        """Coordinates of the class of monomial ``e`` in ``(S/I)_2``
        over the standard monomials."""
        j = self._col[e]
        row = self._pivot_row.get(j)
        if row is None:
            return {self._std_index[j]: self.ring.field.one}
        F = self.ring.field
        return {self._std_index[k]: F.neg(c) for k, c in self.echelon[row].items() if k != j}

    def coordinates(self, q: MultiPoly) -> list | None:
        """Coefficients of ``q`` in the echelon basis, or ``None`` if ``q ∉ I_2``."""
        F = self.ring.field
        if not q:
            return [F.zero] * self.r
        if q.degree() != 2 or not q.is_homogeneous():
            raise ValueError("membership is tested for quadrics only")
        vec = {self._col[e]: c for e, c in q.terms.items()}
        coords = [F.zero] * self.r
        for i, p in enumerate(self.pivots):
            c = vec.get(p)
            if c:
                coords[i] = c
                for k, v in self.echelon[i].items():
                    nv = F.sub(vec.get(k, F.zero), F.mul(c, v))
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
        return None if vec else coords


def quadric_span_member(q: MultiPoly, Q: QuadraticSystem):
    """Coordinates of ``q`` in the basis of ``I_2``, or ``None`` if not a member.

    Anything other than a homogeneous quadric (or zero) is never a member.
    """
    if q and (q.degree() != 2 or not q.is_homogeneous()):
        return None
    return Q.coordinates(q)


# ---------------------------------------------------------------------------
# Koszul homology


def _wedge_degree(ring: RingSpec, J: Sequence[int]):
    if ring.grading is None:
        return ()
    acc = [0] * len(ring.grading[0])
    for j in J:
        for k, w in enumerate(ring.grading[j]):
            acc[k] += w
    return tuple(acc)


def strand_betti_at(Q: QuadraticSystem, m: int) -> int:
    """``b_{m,m+1}(S/I)`` for ``m >= 1``.

    Equals ``C(d,m)·d - C(d,m+1) - rank(∂)`` with
    ``∂: ∧^m V ⊗ V -> ∧^{m-1} V ⊗ (S/I)_2`` (the left map of the Koszul
    complex is injective).  The rank is taken block by block in the fine
    grading when the ring has one.
    """
    d = Q.d
    if m < 1:
        raise ValueError("m >= 1")
    if comb(d, m + 1) * d > SIZE_LIMIT:
        raise StrandTooLarge(f"C({d},{m + 1})·{d} exceeds the size limit {SIZE_LIMIT}")
    ring = Q.ring
    F = ring.field
    blocks: dict[tuple, list[tuple[tuple[int, ...], int]]] = defaultdict(list)
    for J in combinations(range(d), m):
        base = _wedge_degree(ring, J)
        for a in range(d):
            key = tuple(x + y for x, y in zip(base, ring.grading[a])) if ring.grading else ()
            blocks[key].append((J, a))
    total = 0
    for key, cols in blocks.items():
        row_index: dict[tuple, int] = {}
        data: list[dict] = []
        for ci, (J, a) in enumerate(cols):
            for k, j in enumerate(J):
                rest = J[:k] + J[k + 1:]
                e = [0] * d
                e[j] += 1
                e[a] += 1
                nf = Q.normal_form(tuple(e))
                sign = 1 if k % 2 == 0 else -1
                for s, c in nf.items():
                    rk = (rest, s)
                    ri = row_index.get(rk)
                    if ri is None:
                        ri = row_index[rk] = len(data)
                        data.append({})
                    v = F.add(data[ri].get(ci, F.zero), c if sign > 0 else F.neg(c))
                    if v:
                        data[ri][ci] = v
                    else:
                        data[ri].pop(ci, None)
        if data:
            total += rank(ExactMatrix(len(data), len(cols), F, data))
    return comb(d, m) * d - comb(d, m + 1) - total


def koszul_strand_betti(Q: QuadraticSystem, i_max: int | None = None) -> list[int]:
    """``[b_{1,2}, b_{2,3}, ...]`` up to ``i_max``, stopping at the first zero."""
    if i_max is None:
        i_max = Q.d - 1
    out = []
    for m in range(1, i_max + 1):
        b = strand_betti_at(Q, m) if m > 1 else Q.r
        if b == 0:
            break
        out.append(b)
    return out


def two_lp(Q: QuadraticSystem, i_max: int | None = None) -> int:
    return len(koszul_strand_betti(Q, i_max))


# ---------------------------------------------------------------------------
# linear first syzygies


@dataclass
class LinearSyzygy:
    """``Σ_i l_i q_i = 0`` with ``coefficients[i][k]`` the ``x_k``-coefficient of ``l_i``."""

    system: QuadraticSystem
    coefficients: list[list]

    def forms(self) -> list[MultiPoly]:
        R = self.system.ring
        out = []
        for row in self.coefficients:
            p = R.zero()
            for k, c in enumerate(row):
                if c:
                    p = p + R.var(k) * c
            out.append(p)
        return out

    def check(self) -> bool:
        R = self.system.ring
        acc = R.zero()
        for l, q in zip(self.forms(), self.system.quadrics):
            acc = acc + l * q
        return not acc


def linear_first_syzygies(Q: QuadraticSystem) -> list[LinearSyzygy]:
    """Basis of ``{(l_i) in (S_1)^r : Σ l_i q_i = 0}``."""
    d, r = Q.d, Q.r
    F = Q.ring.field
    col: dict[Exponent, int] = {}
    rows = []
    for i, q in enumerate(Q.quadrics):
        for k in range(d):
            row = {}
            for e, c in q.terms.items():
                t = list(e)
                t[k] += 1
                t = tuple(t)
                j = col.setdefault(t, len(col))
                row[j] = c
            rows.append(row)
    if not rows:
        return []
    m = ExactMatrix(len(rows), max(len(col), 1), F, rows)
    out = []
    for vec in left_kernel(m):
        coeffs = [[vec[i * d + k] for k in range(d)] for i in range(r)]
        s = LinearSyzygy(Q, coeffs)
        assert s.check()
        out.append(s)
    return out


def syzygy_rank(s: LinearSyzygy) -> int:
    """Rank of the ``r x d`` coefficient matrix."""
    F = s.system.ring.field
    return rank(ExactMatrix.from_rows(s.coefficients, F, ncols=s.system.d))


def _span_basis(vectors: Sequence[Sequence], F: Field) -> list[list]:
    m = ExactMatrix.from_rows([list(v) for v in vectors], F, ncols=len(vectors[0]))
    ech, rk, _ = row_reduce(m)
    return [[ech.rows[i].get(k, F.zero) for k in range(m.ncols)] for i in range(rk)]


def _koszul_target(s: LinearSyzygy) -> dict[tuple[int, Exponent], object]:
    """``Σ_b e_b ⊗ Q_b`` with ``Q_b = Σ_i c_{bi} q_i`` in ``V ⊗ S_2``."""
    Q = s.system
    F = Q.ring.field
    tgt: dict = {}
    for i, q in enumerate(Q.quadrics):
        for b, c in enumerate(s.coefficients[i]):
            if not c:
                continue
            for e, v in q.terms.items():
                key = (b, e)
                nv = F.add(tgt.get(key, F.zero), F.mul(c, v))
                if nv:
                    tgt[key] = nv
                else:
                    tgt.pop(key, None)
    return tgt


def cycle_on_subspace(s: LinearSyzygy, basis: Sequence[Sequence]) -> list | None:
    """A Koszul representative ``ω ∈ ∧²U ⊗ V`` of ``s`` for ``U = span(basis)``.

    Returns the coefficients of ``ω`` on ``u_k ∧ u_l ⊗ x_a`` or ``None``.
    ``∂(u ∧ w ⊗ x_a) = w ⊗ u·x_a - u ⊗ w·x_a``.
    """
    Q = s.system
    F = Q.ring.field
    d = Q.d
    tgt = _koszul_target(s)
    keys: dict = {}
    cols = []
    for k, l in combinations(range(len(basis)), 2):
        u, w = basis[k], basis[l]
        for a in range(d):
            col: dict = {}
            for left, right, sgn in ((w, u, 1), (u, w, -1)):
                for b, cb in enumerate(left):
                    if not cb:
                        continue
                    for t, ct in enumerate(right):
                        if not ct:
                            continue
                        e = [0] * d
                        e[t] += 1
                        e[a] += 1
                        key = (b, tuple(e))
                        v = F.mul(cb, ct)
                        if sgn < 0:
                            v = F.neg(v)
                        col[key] = F.add(col.get(key, F.zero), v)
            cols.append(col)
    for col in cols:
        for key in col:
            keys.setdefault(key, len(keys))
    for key in tgt:
        keys.setdefault(key, len(keys))
    if not cols:
        return None if tgt else []
    rows = [dict() for _ in range(len(keys))]
    for ci, col in enumerate(cols):
        for key, v in col.items():
            if v:
                rows[keys[key]][ci] = v
    b = [F.zero] * len(keys)
    for key, v in tgt.items():
        b[keys[key]] = v
    return solve(ExactMatrix(len(keys), len(cols), F, rows), b)


def support_dimension(s: LinearSyzygy) -> int:
    """Smallest ``dim W`` with a Koszul representative in ``∧²W ⊗ V``.

    ``W`` always contains the span ``U`` of the coefficient forms; the
    answer is ``dim U`` exactly when a representative lives on ``U``.
    Otherwise ``U`` is enlarged greedily by coordinate vectors, which gives
    an upper bound.
    """
    F = s.system.ring.field
    d = s.system.d
    rows = [r for r in s.coefficients if any(r)]
    if not rows:
        return 0
    U = _span_basis(rows, F)
    if cycle_on_subspace(s, U) is not None:
        return len(U)
    basis = list(U)
    for k in range(d):
        e = [F.zero] * d
        e[k] = F.one
        trial = _span_basis(basis + [e], F)
        if len(trial) == len(basis):
            continue
        basis = trial
        if cycle_on_subspace(s, basis) is not None:
            return len(basis)
    return d


def quadric_rank(q: MultiPoly) -> int:
    """Rank of the symmetric Gram matrix (computed as ``2G``; needs char != 2)."""
    if not q:
        return 0
    if q.degree() != 2 or not q.is_homogeneous():
        raise ValueError("quadric_rank needs a homogeneous quadric")
    F = q.ring.field
    if F.p == 2:
        raise ValueError("characteristic 2 is not supported")
    n = q.ring.nvars
    rows = [dict() for _ in range(n)]
    for e, c in q.terms.items():
        idx = [i for i, x in enumerate(e) if x]
        if len(idx) == 1:
            i = idx[0]
            rows[i][i] = F.mul(F(2), c)
        else:
            i, j = idx
            rows[i][j] = c
            rows[j][i] = c
    return rank(ExactMatrix(n, n, F, rows))
