"""Buchberger's algorithm, saturation, dimension and degree.

Polynomials are handled internally as ``{exponent: coeff}`` dicts with a
cached order key per exponent; :class:`PolyIdeal` wraps the public surface.
"""
from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .exactalg import Field
from .polyring import GREVLEX, MonomialOrder, MultiPoly, RingSpec

NEG_INF = float("-inf")


def _mask(e) -> int:
    m = 0
    for i, x in enumerate(e):
        if x:
            m |= 1 << i
    return m


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


class _Engine:
    """Mutable Buchberger state for one (field, order, nvars) triple."""

    def __init__(self, field: Field, order: MonomialOrder, nvars: int):
        self.p = field.p
        self.field = field
        self.nvars = nvars
        raw = order.key_function(nvars)
        cache: dict = {}

        def key(e):
            k = cache.get(e)
            if k is None:
                k = cache[e] = raw(e)
            return k

        self.key = key
        # master list of basis candidates
        self.polys: list[dict] = []
        self.lms: list[tuple] = []
        self.masks: list[int] = []
        self.sugar: list[int] = []
        # current reducers (indices)
        self.active: list[int] = []

    # -- coefficient helpers ------------------------------------------------
    def monic(self, f: dict) -> tuple[dict, tuple]:
        lm = max(f, key=self.key)
        c = f[lm]
        if c != 1:
            if self.p:
                inv = pow(c, -1, self.p)
                p = self.p
                f = {e: v * inv % p for e, v in f.items()}
            else:
                f = {e: v / c for e, v in f.items()}
        return f, lm

    def _find_reducer(self, e, emask):
        lms = self.lms
        masks = self.masks
        for i in self.active:
            if masks[i] & ~emask:
                continue
            if _divides(lms[i], e):
                return i
        return None

    def reduce(self, f: dict, full: bool = True) -> dict:
        """Normal form w.r.t. the active reducers (all reducers monic)."""
        if not f:
            return f
        f = dict(f)
        key = self.key
        p = self.p
        rem = {}
        polys = self.polys
        lms = self.lms
        while f:
            e = max(f, key=key)
            c = f[e]
            i = self._find_reducer(e, _mask(e))
            if i is None:
                if not full:
                    rem[e] = c
                    del f[e]
                    rem.update(f)
                    return rem
                rem[e] = c
                del f[e]
                continue
            g = polys[i]
            q = tuple([a - b for a, b in zip(e, lms[i])])
            for ge, gc in g.items():
                te = tuple([a + b for a, b in zip(ge, q)])
                v = f.get(te)
                if p:
                    v = ((v or 0) - c * gc) % p
                else:
                    v = (v or 0) - c * gc
                if v:
                    f[te] = v
                else:
                    f.pop(te, None)
        return rem

    def spoly(self, i: int, j: int, lcm) -> dict:
        p = self.p
        out: dict = {}
        for idx, sign in ((i, 1), (j, -1)):
            q = tuple([a - b for a, b in zip(lcm, self.lms[idx])])
            for e, c in self.polys[idx].items():
                te = tuple([a + b for a, b in zip(e, q)])
                v = out.get(te, 0) + sign * c
                if p:
                    v %= p
                if v:
                    out[te] = v
                else:
                    out.pop(te, None)
        return out

    def add(self, f: dict, sugar: int) -> int:
        f, lm = self.monic(f)
        self.polys.append(f)
        self.lms.append(lm)
        self.masks.append(_mask(lm))
        self.sugar.append(sugar)
        return len(self.polys) - 1


def buchberger(
    gens: Iterable[dict], field: Field, order: MonomialOrder, nvars: int
) -> list[dict]:
    """Reduced Groebner basis (as monic dicts, descending by lead monomial).

    Sugar-strategy pair selection with the Gebauer-Moeller installation of
    both Buchberger criteria; ties broken deterministically.
    """
    eng = _Engine(field, order, nvars)
    key = eng.key
    lms = eng.lms
    pairs: list = []  # heap of (sugar, lcm key, i, j, lcm)
    live: set[tuple[int, int]] = set()
    pair_lcm: dict[tuple[int, int], tuple] = {}

    def update(h: int):
        lh = lms[h]
        cand = []
        for g in eng.active:
            cand.append((g, _lcm(lms[g], lh)))
        # chain criterion among the new pairs (Gebauer-Moeller M and F)
        keep = []
        for idx, (g, l) in enumerate(cand):
            coprime = not (eng.masks[g] & eng.masks[h])
            if coprime:
                keep.append((g, l, True))
                continue
            dominated = False
            for jdx, (g2, l2) in enumerate(cand):
                if jdx == idx:
                    continue
                if _divides(l2, l) and (l2 != l or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                keep.append((g, l, False))
        # product criterion: drop coprime pairs (and pairs sharing their lcm)
        coprime_lcms = {l for g, l, cp in keep if cp}
        new_pairs = [(g, l) for g, l, cp in keep if not cp and l not in coprime_lcms]
        # prune old pairs that h makes redundant
        for pr in list(live):
            l = pair_lcm[pr]
            if _divides(lh, l):
                a, b = pr
                if _lcm(lms[a], lh) != l and _lcm(lms[b], lh) != l:
                    live.discard(pr)
        for g, l in new_pairs:
            pr = (g, h)
            live.add(pr)
            pair_lcm[pr] = l
            s = max(
                eng.sugar[g] + sum(l) - sum(lms[g]),
                eng.sugar[h] + sum(l) - sum(lh),
            )
            heapq.heappush(pairs, (s, key(l), g, h))
        eng.active = [g for g in eng.active if not _divides(lh, lms[g])]
        eng.active.append(h)

    gens = [dict(g) for g in gens if g]
    gens.sort(key=lambda f: (max(sum(e) for e in f), key(max(f, key=key))))
    for f in gens:
        r = eng.reduce(f)
        if r:
            update(eng.add(r, max(sum(e) for e in f)))
            if not any(lms[eng.active[-1]]):
                return [{(0,) * nvars: field.one}]

    # key(l) ascending picks the smaller lcm first among equal sugar
    while pairs:
        s, _, i, j = heapq.heappop(pairs)
        pr = (i, j)
        if pr not in live:
            continue
        live.discard(pr)
        sp = eng.spoly(i, j, pair_lcm[pr])
        r = eng.reduce(sp)
        if r:
            h = eng.add(r, s)
            if not any(lms[h]):
                return [{(0,) * nvars: field.one}]
            update(h)

    # inter-reduce the minimal basis
    basis = sorted(eng.active, key=lambda i: key(lms[i]), reverse=True)
    out = []
    for i in basis:
        others = [k for k in basis if k != i]
        saved = eng.active
        eng.active = others
        lm = lms[i]
        tail = {e: c for e, c in eng.polys[i].items() if e != lm}
        red = eng.reduce(tail)
        eng.active = saved
        red[lm] = eng.polys[i][lm]
        out.append(red)
    return out


def normal_form(f: dict, basis: Sequence[dict], field: Field, order: MonomialOrder, nvars: int) -> dict:
    eng = _Engine(field, order, nvars)
    for g in basis:
        eng.active.append(eng.add(g, 0))
    return eng.reduce(f)


# ---------------------------------------------------------------------------
# ideals


class PolyIdeal:
    """Ideal given by generators; reduced Groebner bases cached per order."""

    def __init__(self, ring: RingSpec, generators: Iterable[MultiPoly], name: str = ""):
        gens = []
        for g in generators:
            if g.ring is not ring and g.ring != ring:
                raise ValueError("generator from a different ring")
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self.name = name
        self._gb: dict[MonomialOrder, tuple[MultiPoly, ...]] = {}

    def __repr__(self):
        return f"PolyIdeal({self.name or '?'}, {len(self.generators)} generators in {self.ring.nvars} vars)"

    def gb(self, order: MonomialOrder = GREVLEX) -> tuple[MultiPoly, ...]:
        return tuple(reduced_gb(self, order))

    def seed_gb(self, order: MonomialOrder, basis: Sequence[MultiPoly]):
        """Install a basis known to be the reduced GB (e.g. from saturation)."""
        if order not in self._gb:
            self._gb[order] = tuple(basis)

    def contains(self, f: MultiPoly, order: MonomialOrder = GREVLEX) -> bool:
        return not self.reduce(f, order)

    def reduce(self, f: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
        basis = [g.terms for g in reduced_gb(self, order)]
        r = normal_form(f.terms, basis, self.ring.field, order, self.ring.nvars)
        return MultiPoly(self.ring, r)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def lead_monomials(self, order: MonomialOrder = GREVLEX) -> list[tuple]:
        return [g.leading(order)[0] for g in reduced_gb(self, order)]

    def degree_part(self, k: int) -> list[MultiPoly]:
        """Generators of degree ``k`` (spans I_k when I has nothing below degree k)."""
        return [g for g in self.generators if g.degree() == k]

    def is_unit(self) -> bool:
        gb = reduced_gb(self)
        return len(gb) == 1 and not any(gb[0].leading()[0])


def reduced_gb(I: PolyIdeal, order: MonomialOrder = GREVLEX) -> list[MultiPoly]:
    """The reduced Groebner basis of ``I`` for ``order``, sorted descending."""
    cached = I._gb.get(order)
    if cached is not None:
        return list(cached)
    ring = I.ring
    basis = buchberger([g.terms for g in I.generators], ring.field, order, ring.nvars)
    out = [MultiPoly(ring, b) for b in basis]
    raw = [b for b in basis]
    for g in I.generators:
        if normal_form(g.terms, raw, ring.field, order, ring.nvars):
            raise AssertionError("generator not reduced to zero by computed basis")
    I._gb[order] = tuple(out)
    return out


def ideal_equal(I: PolyIdeal, J: PolyIdeal, order: MonomialOrder = GREVLEX) -> bool:
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")
    a = {frozenset(g.terms.items()) for g in reduced_gb(I, order)}
    b = {frozenset(g.terms.items()) for g in reduced_gb(J, order)}
    return a == b


def ideal_contains(I: PolyIdeal, J: PolyIdeal, order: MonomialOrder = GREVLEX) -> bool:
    """``J ⊆ I``."""
    return all(I.contains(g, order) for g in J.generators)


# ---------------------------------------------------------------------------
# saturation


def _is_monomial(f: MultiPoly) -> bool:
    return len(f.terms) == 1


def saturate(I: PolyIdeal, f: MultiPoly, method: str = "auto") -> PolyIdeal:
    """``I : f^∞``.

    ``method="elimination"`` adjoins ``t``, adds ``t*f - 1`` and eliminates
    ``t`` (always valid).  ``method="bayer"`` saturates one variable at a time
    with grevlex and that variable last; it needs ``f`` a monomial and ``I``
    homogeneous.  ``"auto"`` picks Bayer when allowed.
    """
    if not f:
        raise ValueError("cannot saturate by zero")
    if method == "auto":
        method = "bayer" if _is_monomial(f) and I.is_homogeneous() else "elimination"
    if method == "bayer":
        if not (_is_monomial(f) and I.is_homogeneous()):
            raise ValueError("variable-by-variable saturation needs a monomial and a homogeneous ideal")
        (e,) = f.terms
        return saturate_by_variables(I, [i for i, x in enumerate(e) if x])
    if method != "elimination":
        raise ValueError(f"unknown saturation method {method!r}")
    return _saturate_elimination(I, f)


def _saturate_elimination(I: PolyIdeal, f: MultiPoly) -> PolyIdeal:
    ring = I.ring
    n = ring.nvars
    ext = ring.extended("_sat_t")
    index_map = list(range(n))
    gens = [g.to_ring(ext, index_map) for g in I.generators]
    t = ext.var(n)
    gens.append(t * f.to_ring(ext, index_map) - 1)
    order = MonomialOrder.elimination(n + 1, [n])
    basis = buchberger([g.terms for g in gens], ring.field, order, n + 1)
    kept = []
    for b in basis:
        if all(e[n] == 0 for e in b):
            kept.append(MultiPoly(ring, {e[:n]: c for e, c in b.items()}))
    out = PolyIdeal(ring, kept, name=f"({I.name}):f^inf")
    return out


def saturate_by_variables(I: PolyIdeal, variables: Sequence[int]) -> PolyIdeal:
    """``I : (prod of variables)^∞`` for homogeneous ``I`` via Bayer's trick."""
    ring = I.ring
    n = ring.nvars
    F = ring.field
    current = [g.terms for g in I.generators]
    for v in variables:
        order = MonomialOrder.grevlex_last(n, v)
        basis = buchberger(current, F, order, n)
        nxt = []
        for b in basis:
            k = min(e[v] for e in b)
            if k:
                b = {e[:v] + (e[v] - k,) + e[v + 1:]: c for e, c in b.items()}
            nxt.append(b)
        current = nxt
    return PolyIdeal(ring, [MultiPoly(ring, b) for b in current], name=f"({I.name}):sat")


# ---------------------------------------------------------------------------
# dimension and degree


def _minimal_masks(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=lambda m: bin(m).count("1"))
    out: list[int] = []
    for m in ms:
        if not any(o & m == o for o in out):
            out.append(m)
    return out


def _min_hitting_set(masks: list[int]) -> int:
    union = 0
    for m in masks:
        union |= m
    best = [bin(union).count("1")]

    def rec(chosen: int, size: int):
        if size >= best[0]:
            return
        pick = None
        for m in masks:
            if not m & chosen:
                if pick is None or bin(m).count("1") < bin(pick).count("1"):
                    pick = m
                    if bin(m).count("1") == 1:
                        break
        if pick is None:
            best[0] = size
            return
        for i in range(pick.bit_length()):
            if pick >> i & 1:
                rec(chosen | (1 << i), size + 1)

    rec(0, 0)
    return best[0]


def dimension_from_leads(leads: Sequence[tuple], nvars: int):
    if any(not any(e) for e in leads):
        return NEG_INF
    masks = _minimal_masks(_mask(e) for e in leads)
    if not masks:
        return nvars
    return nvars - _min_hitting_set(masks)


def krull_dimension(I: PolyIdeal, order: MonomialOrder = GREVLEX):
    """Dimension of ``S/I`` from the initial ideal; ``NEG_INF`` for the unit ideal."""
    return dimension_from_leads(I.lead_monomials(order), I.ring.nvars)


def codimension(I: PolyIdeal):
    d = krull_dimension(I)
    return NEG_INF if d == NEG_INF else I.ring.nvars - d


def _poly_sub(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def _shift(a: list[int], k: int) -> list[int]:
    return [0] * k + a


def _minimalize(gens: Iterable[tuple]) -> list[tuple]:
    gs = sorted(set(gens), key=sum)
    out: list[tuple] = []
    for g in gs:
        if not any(_divides(o, g) for o in out):
            out.append(g)
    return out


def hilbert_numerator(gens: Sequence[tuple], nvars: int) -> list[int]:
    """Numerator N(t) of the Hilbert series N(t)/(1-t)^nvars of S/(monomials)."""
    memo: dict = {}

    def rec(G: tuple) -> list[int]:
        if G in memo:
            return memo[G]
        if any(not any(g) for g in G):
            res = [0]
        else:
            masks = [_mask(g) for g in G]
            union = 0
            overlap = False
            for m in masks:
                if union & m:
                    overlap = True
                    break
                union |= m
            if not overlap:
                res = [1]
                for g in G:
                    res = _poly_sub(res, _shift(res, sum(g)))
            else:
                counts = [0] * nvars
                for g in G:
                    if sum(g) > 1:
                        for i, x in enumerate(g):
                            if x:
                                counts[i] += 1
                v = max(range(nvars), key=lambda i: counts[i])
                # pivot on the variable itself
                colon = _minimalize(
                    tuple(x - 1 if i == v and x else x for i, x in enumerate(g)) for g in G
                )
                xv = tuple(1 if i == v else 0 for i in range(nvars))
                plus = _minimalize([g for g in G if not g[v]] + [xv])
                a = rec(tuple(plus))
                b = rec(tuple(colon))
                # N(I) = N(I + x_v) + t * N(I : x_v)
                res = _poly_sub(a, [-c for c in _shift(b, 1)])
        while len(res) > 1 and res[-1] == 0:
            res.pop()
        memo[G] = res
        return res

    return rec(tuple(_minimalize(gens)))


def hilbert_series_data(I: PolyIdeal) -> tuple[list[int], int]:
    """(h-vector, Krull dimension): HS = h(t)/(1-t)^dim."""
    if not I.is_homogeneous():
        raise ValueError("Hilbert series needs a coarsely homogeneous ideal")
    n = I.ring.nvars
    N = hilbert_numerator(I.lead_monomials(), n)
    k = 0
    while any(N) and sum(N) == 0:
        # divide by (1 - t)
        q = []
        acc = 0
        for c in N[:-1]:
            acc += c
            q.append(acc)
        N = q
        k += 1
    return N, n - k


def hilbert_degree(I: PolyIdeal) -> int:
    """Degree of the projective scheme defined by a homogeneous ideal."""
    h, _ = hilbert_series_data(I)
    return sum(h)


def hilbert_function(I: PolyIdeal, t: int) -> int:
    """dim_k (S/I)_t from the Hilbert series."""
    from math import comb

    h, dim = hilbert_series_data(I)
    if dim <= 0:
        return h[t] if t < len(h) else 0
    return sum(c * comb(t - i + dim - 1, dim - 1) for i, c in enumerate(h) if t - i >= 0)
