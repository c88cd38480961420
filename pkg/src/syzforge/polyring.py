"""Multivariate polynomials with fine multidegrees and monomial orders."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Mapping, Sequence

from .exactalg import ExactMatrix, Field, FieldMismatch, default_field

Exponent = tuple[int, ...]

INHOMOGENEOUS = "inhomogeneous"


def face_label(face: Iterable[int]) -> str:
    """Compact label for a vertex set: ``(1, 2)`` -> ``"12"``; ``_``-joined past 9."""
    face = tuple(face)
    sep = "" if all(v < 10 for v in face) else "_"
    return sep.join(str(v) for v in face)


@dataclass(frozen=True)
class MonomialOrder:
    """Monomial order on exponent vectors.

    ``perm`` lists variable indices from most to least significant; ``None``
    means the ring's declared order.  For ``"elim"`` the first ``block``
    variables of ``perm`` form the eliminated block (compared first, grevlex),
    the remainder breaks ties (grevlex).
    """

    kind: str = "grevlex"
    perm: tuple[int, ...] | None = None
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex", "elim"):
            raise ValueError(f"unknown order {self.kind!r}")

    @classmethod
    def lex(cls, perm=None):
        return cls("lex", None if perm is None else tuple(perm))

    @classmethod
    def grevlex(cls, perm=None):
        return cls("grevlex", None if perm is None else tuple(perm))

    @classmethod
    def grevlex_last(cls, nvars: int, last: int) -> "MonomialOrder":
        """Grevlex with variable ``last`` moved to the least significant slot."""
        perm = tuple(i for i in range(nvars) if i != last) + (last,)
        return cls("grevlex", perm)

    @classmethod
    def elimination(cls, nvars: int, eliminate: Sequence[int]) -> "MonomialOrder":
        elim = tuple(eliminate)
        rest = tuple(i for i in range(nvars) if i not in elim)
        return cls("elim", elim + rest, len(elim))

    def key_function(self, nvars: int) -> Callable[[Exponent], tuple]:
        return _key_function(self.kind, self.perm or tuple(range(nvars)), self.block)


@lru_cache(maxsize=None)
def _key_function(kind: str, perm: tuple[int, ...], block: int):
    if kind == "lex":
        return lambda e: tuple([e[i] for i in perm])
    if kind == "grevlex":
        rev = perm[::-1]
        if perm == tuple(range(len(perm))):
            return lambda e: (sum(e), tuple([-x for x in e[::-1]]))
        return lambda e: (sum(e), tuple([-e[i] for i in rev]))
    a_rev = perm[:block][::-1]
    b_rev = perm[block:][::-1]

    def key(e):
        da = sum([e[i] for i in a_rev])
        return (da, tuple([-e[i] for i in a_rev]), sum(e) - da, tuple([-e[i] for i in b_rev]))

    return key


GREVLEX = MonomialOrder("grevlex")


@dataclass(frozen=True)
class RingSpec:
    """Polynomial ring over ``field`` with named variables.

    ``grading`` (optional) assigns each variable a vector in Z^k; ``roles``
    and ``labels`` record what each variable stands for (``"x"`` with a vertex
    index, ``"y"`` with a face, ``"aux"``).
    """

    names: tuple[str, ...]
    field: Field
    grading: tuple[tuple[int, ...], ...] | None = None
    roles: tuple[str, ...] | None = None
    labels: tuple | None = None

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be unique")
        if self.grading is not None:
            if len(self.grading) != len(self.names):
                raise ValueError("grading length mismatch")
            if len({len(g) for g in self.grading}) > 1:
                raise ValueError("grading vectors of unequal length")

    @classmethod
    def make(cls, names: Sequence[str], field: Field | None = None, grading=None, roles=None, labels=None):
        return cls(
            tuple(names),
            field if field is not None else default_field(),
            None if grading is None else tuple(tuple(int(c) for c in g) for g in grading),
            None if roles is None else tuple(roles),
            None if labels is None else tuple(labels),
        )

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in ring") from None

    def var(self, which: int | str) -> "MultiPoly":
        i = self.index(which) if isinstance(which, str) else which
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.field.one})

    def gens(self) -> list["MultiPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.constant(1)

    def constant(self, c) -> "MultiPoly":
        c = self.field(c)
        return MultiPoly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exp: Sequence[int], coeff=1) -> "MultiPoly":
        c = self.field(coeff)
        return MultiPoly(self, {tuple(exp): c} if c else {})

    def monomials_of_degree(self, degree: int) -> list[Exponent]:
        """All exponents of coarse degree ``degree``, descending in grevlex."""
        return _monomials(self.nvars, degree)

    def with_field(self, field: Field) -> "RingSpec":
        return RingSpec(self.names, field, self.grading, self.roles, self.labels)

    def with_grading(self, grading) -> "RingSpec":
        return RingSpec(self.names, self.field, tuple(tuple(g) for g in grading), self.roles, self.labels)

    def extended(self, name: str, role: str = "aux") -> "RingSpec":
        """Ring with one more variable appended (grading dropped)."""
        roles = (self.roles or ("",) * self.nvars) + (role,)
        labels = (self.labels or (None,) * self.nvars) + (None,)
        return RingSpec(self.names + (name,), self.field, None, roles, labels)

    def parse(self, text: str) -> "MultiPoly":
        return parse_poly(self, text)


@lru_cache(maxsize=None)
def _monomials(nvars: int, degree: int) -> list[Exponent]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    key = _key_function("grevlex", tuple(range(nvars)), 0)
    out.sort(key=key, reverse=True)
    return out


class MultiPoly:
    """Polynomial as ``{exponent tuple: nonzero coefficient}``."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingSpec, terms: Mapping[Exponent, object]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    # -- arithmetic ---------------------------------------------------------
    def _same(self, other: "MultiPoly"):
        if other.ring is not self.ring and other.ring != self.ring:
            if other.ring.field != self.ring.field:
                raise FieldMismatch("polynomials over different fields")
            raise ValueError("ring mismatch")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._same(other)
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        F = self.ring.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, F.zero), c)
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return MultiPoly(self.ring, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        F = self.ring.field
        if not isinstance(other, MultiPoly):
            c = F(other)
            return MultiPoly(self.ring, {e: F.mul(v, c) for e, v in self.terms.items()})
        self._same(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                out[e] = F.add(out.get(e, F.zero), F.mul(c1, c2))
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def support(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def leading(self, order: MonomialOrder = GREVLEX) -> tuple[Exponent, object]:
        key = order.key_function(self.ring.nvars)
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> list[tuple[Exponent, object]]:
        key = order.key_function(self.ring.nvars)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def monic(self, order: MonomialOrder = GREVLEX) -> "MultiPoly":
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self * self.ring.field.inv(c)

    def subs(self, mapping: Mapping[int, "MultiPoly"]) -> "MultiPoly":
        """Substitute polynomials for variables (by index); others stay put."""
        ring = self.ring
        out = ring.zero()
        for e, c in self.terms.items():
            term = ring.constant(c)
            rest = list(e)
            for i, k in enumerate(e):
                if k and i in mapping:
                    rest[i] = 0
                    term = term * (mapping[i] ** k)
            out = out + term * ring.monomial(rest)
        return out

    def to_ring(self, ring: RingSpec, index_map: Sequence[int]) -> "MultiPoly":
        """Re-embed into ``ring`` sending variable i to ``index_map[i]``."""
        out = {}
        for e, c in self.terms.items():
            f = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    f[index_map[i]] += k
            out[tuple(f)] = ring.field(c) if ring.field != self.ring.field else c
        return MultiPoly(ring, out)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"MultiPoly({render(self)!r})"


def _fmt_coeff(c, field: Field):
    if field.p:
        c = c - field.p if c > field.p // 2 else c
        return Fraction(c)
    return c


def _fmt_mono(ring: RingSpec, e: Exponent) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(ring.names[i])
        elif k:
            parts.append(f"{ring.names[i]}^{k}")
    return "*".join(parts)


def render(p: MultiPoly, order: MonomialOrder = GREVLEX) -> str:
    """Terms in descending ``order``, e.g. ``"x1*y12 - x3*y23"``."""
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms(order):
        c = _fmt_coeff(c, p.ring.field)
        neg = c < 0
        a = -c if neg else c
        mono = _fmt_mono(p.ring, e)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TERM_SPLIT = re.compile(r"(?<![\^*])([+-])")


def parse_poly(ring: RingSpec, text: str) -> MultiPoly:
    """Parse ``"x1*y12 - 3*x3^2 + 1/2*y23"`` (``^`` or ``**`` for powers)."""
    s = text.replace(" ", "").replace("**", "^")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    pieces = _TERM_SPLIT.split(s)[1:]
    F = ring.field
    out = ring.zero()
    for sign, body in zip(pieces[0::2], pieces[1::2]):
        if not body:
            raise ValueError(f"malformed polynomial {text!r}")
        coeff = Fraction(1) if sign == "+" else Fraction(-1)
        e = [0] * ring.nvars
        for factor in body.split("*"):
            if not factor:
                raise ValueError(f"malformed term {body!r}")
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coeff *= Fraction(factor)
                continue
            name, _, k = factor.partition("^")
            if name not in ring.names:
                raise ValueError(f"unknown variable {name!r}")
            e[ring.names.index(name)] += int(k) if k else 1
        out = out + ring.monomial(e, F(coeff))
    return out


def exponent_multidegree(ring: RingSpec, e: Exponent) -> tuple[int, ...]:
    g = ring.grading
    k = len(g[0]) if g else 0
    acc = [0] * k
    for i, x in enumerate(e):
        if x:
            for j, w in enumerate(g[i]):
                acc[j] += x * w
    return tuple(acc)


def multidegree_of(p: MultiPoly):
    """Common fine multidegree of all terms, or ``INHOMOGENEOUS``.

    The zero polynomial (and constants) get the zero vector.
    """
    ring = p.ring
    if ring.grading is None:
        raise ValueError("ring has no fine grading")
    degs = {exponent_multidegree(ring, e) for e in p.terms}
    if len(degs) > 1:
        return INHOMOGENEOUS
    if not degs:
        return (0,) * len(ring.grading[0])
    return degs.pop()


def coefficient_matrix(polys: Sequence[MultiPoly], degree: int, ring: RingSpec | None = None) -> ExactMatrix:
    """Rows = polys, columns = all monomials of ``degree`` (descending grevlex)."""
    if ring is None:
        if not polys:
            raise ValueError("ring required for an empty list")
        ring = polys[0].ring
    monos = ring.monomials_of_degree(degree)
    col = {e: j for j, e in enumerate(monos)}
    rows = []
    for p in polys:
        if p.ring != ring:
            raise ValueError("ring mismatch")
        row = {}
        for e, c in p.terms.items():
            if sum(e) != degree:
                raise ValueError(f"polynomial {p} is not homogeneous of degree {degree}")
            row[col[e]] = c
        rows.append(row)
    return ExactMatrix(len(rows), len(monos), ring.field, rows)
