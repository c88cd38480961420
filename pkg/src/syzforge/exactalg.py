"""Exact scalars and matrix reduction over Q and prime fields.

Scalars are plain Python values: ``fractions.Fraction`` over Q and ``int``
residues in ``[0, p)`` over GF(p).  The field travels with the matrix, not
with each entry.
"""
from __future__ import annotations

import os
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

import numpy as np

FieldScalar = Union[int, Fraction]

DEFAULT_PRIME = 32003


class FieldMismatch(ValueError):
    """Raised when objects over different fields are combined."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """Either Q (``p == 0``) or GF(p) for an odd prime ``p < 2**31``."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p != 0:
            if p == 2 or not _is_prime(p) or p >= 2**31:
                raise ValueError(f"characteristic must be 0 or an odd prime < 2^31, got {p}")
        self.p = p

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def zero(self) -> FieldScalar:
        return Fraction(0) if self.p == 0 else 0

    @property
    def one(self) -> FieldScalar:
        return Fraction(1) if self.p == 0 else 1

    def __call__(self, x) -> FieldScalar:
        p = self.p
        if p == 0:
            return x if isinstance(x, Fraction) else Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, p) % p
        if isinstance(x, str):
            return self(Fraction(x))
        return int(x) % p

    def add(self, a, b):
        return a + b if self.p == 0 else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p == 0 else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p == 0 else a * b % self.p

    def neg(self, a):
        return -a if self.p == 0 else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.p == 0 else pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random_element(self, rng) -> FieldScalar:
        if self.p:
            return rng.randrange(self.p)
        return Fraction(rng.randrange(-10**6, 10**6))

    @property
    def size(self) -> float:
        """Cardinality (infinite for Q) used in failure-probability bounds."""
        return float("inf") if self.p == 0 else float(self.p)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def field_from_spec(spec: str | int | None) -> Field:
    """Parse "Q"/"QQ" or a prime; ``None`` reads SYZFORGE_FIELD."""
    if spec is None:
        spec = os.environ.get("SYZFORGE_FIELD", str(DEFAULT_PRIME))
    if isinstance(spec, Field):
        return spec
    s = str(spec).strip().upper()
    if s in ("Q", "QQ", "0"):
        return QQ
    return Field(int(s))


def default_field() -> Field:
    return field_from_spec(None)


class ExactMatrix:
    """Sparse matrix over a :class:`Field`; rows are ``{col: nonzero}`` dicts.

    Treated as immutable: operations return new matrices.
    """

    __slots__ = ("nrows", "ncols", "field", "rows")

    def __init__(self, nrows: int, ncols: int, field: Field, rows: Sequence[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        if rows is None:
            rows = [dict() for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        self.rows = tuple(
            {c: v for c, v in r.items() if v} for r in rows
        )

    @classmethod
    def from_rows(cls, data: Sequence[Sequence], field: Field, ncols: int | None = None) -> "ExactMatrix":
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            rows.append({j: field(v) for j, v in enumerate(r) if v})
        return cls(len(data), ncols, field, rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field) -> "ExactMatrix":
        return cls(nrows, ncols, field)

    @classmethod
    def identity(cls, n: int, field: Field) -> "ExactMatrix":
        return cls(n, n, field, [{i: field.one} for i in range(n)])

    def entry(self, i: int, j: int) -> FieldScalar:
        return self.rows[i].get(j, self.field.zero)

    def to_lists(self) -> list[list]:
        z = self.field.zero
        return [[r.get(j, z) for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "ExactMatrix":
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return ExactMatrix(self.ncols, self.nrows, self.field, cols)

    def _check(self, other: "ExactMatrix"):
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        F = self.field
        out = []
        for r in self.rows:
            acc: dict = {}
            for k, a in r.items():
                for j, b in other.rows[k].items():
                    acc[j] = F.add(acc.get(j, F.zero), F.mul(a, b))
            out.append(acc)
        return ExactMatrix(self.nrows, other.ncols, F, out)

    def apply(self, vec: Sequence) -> list:
        F = self.field
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            s = F.zero
            for j, a in r.items():
                if vec[j]:
                    s = F.add(s, F.mul(a, F(vec[j])))
            out.append(s)
        return out

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and (self.nrows, self.ncols, self.field) == (other.nrows, other.ncols, other.field)
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols} over {self.field})"


def hstack(mats: Sequence[ExactMatrix]) -> ExactMatrix:
    field = mats[0].field
    nrows = mats[0].nrows
    rows = [dict() for _ in range(nrows)]
    off = 0
    for m in mats:
        if m.field != field:
            raise FieldMismatch("mixed field tags")
        if m.nrows != nrows:
            raise ValueError("row count mismatch")
        for i, r in enumerate(m.rows):
            for j, v in r.items():
                rows[i][j + off] = v
        off += m.ncols
    return ExactMatrix(nrows, off, field, rows)


# ---------------------------------------------------------------------------
# GF(p): dense numpy elimination


def _dense_mod_p(m: ExactMatrix) -> np.ndarray:
    a = np.zeros((m.nrows, m.ncols), dtype=np.int64)
    for i, r in enumerate(m.rows):
        for j, v in r.items():
            a[i, j] = v
    return a


def _rref_mod_p(a: np.ndarray, p: int, full: bool = True) -> tuple[np.ndarray, list[int]]:
    """In-place row reduction mod p; pivot = first nonzero row in column order."""
    nrows, ncols = a.shape
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r, c:] = a[r, c:] * inv % p
        if full:
            others = np.flatnonzero(a[:, c])
            others = others[others != r]
        else:
            others = r + 1 + np.flatnonzero(a[r + 1:, c])
        if others.size:
            a[others, c:] = (a[others, c:] - np.outer(a[others, c], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a, pivots


# ---------------------------------------------------------------------------
# Q: sparse fraction-free elimination on primitive integer rows


def _primitive_int_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    out = {j: int(v * den) for j, v in row.items()}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {j: v // g for j, v in out.items()}
    return out


def _eliminate_int(target: dict, pivot: dict, c: int) -> dict:
    a = pivot[c]
    b = target[c]
    g = gcd(a, b)
    a //= g
    b //= g
    out = {j: a * v for j, v in target.items()}
    for j, v in pivot.items():
        w = out.get(j, 0) - b * v
        if w:
            out[j] = w
        else:
            out.pop(j, None)
    cont = 0
    for v in out.values():
        cont = gcd(cont, v)
        if cont == 1:
            break
    if cont > 1:
        out = {j: v // cont for j, v in out.items()}
    return out


def _forward_q(m: ExactMatrix) -> tuple[list[dict], list[int]]:
    active = [_primitive_int_row(r) for r in m.rows if r]
    pivot_rows: list[dict] = []
    pivots: list[int] = []
    for c in range(m.ncols):
        if not active:
            break
        k = next((i for i, r in enumerate(active) if c in r), None)
        if k is None:
            continue
        prow = active.pop(k)
        nxt = []
        for r in active:
            if c in r:
                r = _eliminate_int(r, prow, c)
            if r:
                nxt.append(r)
        active = nxt
        pivot_rows.append(prow)
        pivots.append(c)
    return pivot_rows, pivots


def _rref_q(m: ExactMatrix) -> tuple[list[dict], list[int]]:
    prow, pivots = _forward_q(m)
    rows = []
    for r, c in zip(prow, pivots):
        lead = r[c]
        rows.append({j: Fraction(v, lead) for j, v in r.items()})
    for k in range(len(rows) - 1, -1, -1):
        c = pivots[k]
        for i in range(k):
            f = rows[i].get(c)
            if f:
                for j, v in rows[k].items():
                    w = rows[i].get(j, 0) - f * v
                    if w:
                        rows[i][j] = w
                    else:
                        rows[i].pop(j, None)
    return rows, pivots


# ---------------------------------------------------------------------------
# public API


def row_reduce(m: ExactMatrix) -> tuple[ExactMatrix, int, list[tuple]]:
    """Reduced row-echelon form, rank, and a basis of the right null space.

    Pivots are chosen deterministically: columns left to right, first
    available row with a nonzero entry.
    """
    F = m.field
    if F.p:
        a, pivots = _rref_mod_p(_dense_mod_p(m), F.p)
        rank = len(pivots)
        rows = [{int(j): int(a[i, j]) for j in np.flatnonzero(a[i])} for i in range(rank)]
    else:
        rows, pivots = _rref_q(m)
        rank = len(pivots)
    echelon = ExactMatrix(m.nrows, m.ncols, F, rows + [dict() for _ in range(m.nrows - rank)])
    pivset = set(pivots)
    kernel = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [F.zero] * m.ncols
        v[f] = F.one
        for r, c in zip(rows, pivots):
            x = r.get(f)
            if x:
                v[c] = F.neg(x)
        kernel.append(tuple(v))
    return echelon, rank, kernel


def pivot_columns(m: ExactMatrix) -> list[int]:
    F = m.field
    if F.p:
        _, pivots = _rref_mod_p(_dense_mod_p(m), F.p, full=False)
    else:
        _, pivots = _forward_q(m)
    return pivots


def rank(m: ExactMatrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    F = m.field
    if F.p:
        a = _dense_mod_p(m)
        if a.shape[0] > a.shape[1]:
            a = np.ascontiguousarray(a.T)
        _, pivots = _rref_mod_p(a, F.p, full=False)
        return len(pivots)
    return len(_forward_q(m)[1])


def kernel(m: ExactMatrix) -> list[tuple]:
    return row_reduce(m)[2]


def left_kernel(m: ExactMatrix) -> list[tuple]:
    return row_reduce(m.transpose())[2]


def solve(m: ExactMatrix, b: Sequence) -> list | None:
    """One solution of ``m x = b`` or ``None`` if inconsistent."""
    F = m.field
    if len(b) != m.nrows:
        raise ValueError("shape mismatch")
    aug = ExactMatrix(
        m.nrows,
        m.ncols + 1,
        F,
        [{**r, m.ncols: F(bi)} if F(bi) else dict(r) for r, bi in zip(m.rows, b)],
    )
    ech, rk, _ = row_reduce(aug)
    x = [F.zero] * m.ncols
    for i in range(rk):
        r = ech.rows[i]
        c = min(r)
        if c == m.ncols:
            return None
        x[c] = r.get(m.ncols, F.zero)
    return x


def rank_of_vectors(vectors: Iterable[Sequence], field: Field) -> int:
    vecs = [list(v) for v in vectors]
    if not vecs:
        return 0
    return rank(ExactMatrix.from_rows(vecs, field))
