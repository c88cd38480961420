"""1-genericity and witness matrices: scrolls, Pfaffian nets, bipartite
blocks and bipyramids."""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .exactalg import ExactMatrix, Field, rank
from .groebner import PolyIdeal, krull_dimension
from .kozrees import SkewLinearMatrix, det, pfaffian
from .polyring import MultiPoly, RingSpec, exponent_multidegree, render
from .simplicial import OrientedComplex
from .strand import QuadraticSystem


class WitnessError(ValueError):
    """Raised when a claimed witness fails a membership check."""

    def __init__(self, message: str, failures=None):
        super().__init__(message)
        self.failures = failures or []


# ---------------------------------------------------------------------------
# matrices of linear forms


class LinearFormMatrix:
    def __init__(self, ring: RingSpec, rows: Sequence[Sequence[MultiPoly]]):
        rows = [list(r) for r in rows]
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("rows must be nonempty and of equal length")
        for r in rows:
            for e in r:
                if e and (e.degree() != 1 or not e.is_homogeneous()):
                    raise ValueError(f"entry {e} is not a linear form")
        self.ring = ring
        self.rows = rows

    @property
    def p(self) -> int:
        return len(self.rows)

    @property
    def q(self) -> int:
        return len(self.rows[0])

    def transpose(self) -> "LinearFormMatrix":
        return LinearFormMatrix(self.ring, [list(c) for c in zip(*self.rows)])

    def has_zero_entry(self) -> bool:
        return any(not e for r in self.rows for e in r)

    def coefficient_rows(self, i: int) -> list[list]:
        """``q x d`` matrix: coefficient of each variable in row ``i``'s entries."""
        d = self.ring.nvars
        F = self.ring.field
        out = []
        for e in self.rows[i]:
            v = [F.zero] * d
            for exp, c in e.terms.items():
                v[exp.index(1)] = c
            out.append(v)
        return out

    def minors2(self) -> dict[tuple[int, int, int, int], MultiPoly]:
        out = {}
        for a, b in itertools.combinations(range(self.p), 2):
            for k, l in itertools.combinations(range(self.q), 2):
                r = self.rows
                out[(a, b, k, l)] = r[a][k] * r[b][l] - r[a][l] * r[b][k]
        return out

    def to_lists(self) -> list[list[str]]:
        return [[render(e) if e else "0" for e in r] for r in self.rows]


# ---------------------------------------------------------------------------
# univariate helpers over a field (coefficient lists, lowest degree first)


def _trim(a: list, F: Field) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _poly_mod(a: list, b: list, F: Field) -> list:
    a = list(a)
    inv = F.inv(b[-1])
    while len(a) >= len(b) and a:
        c = F.mul(a[-1], inv)
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, bc))
        _trim(a, F)
    return a


def _poly_gcd(a: list, b: list, F: Field) -> list:
    a, b = _trim(list(a), F), _trim(list(b), F)
    while b:
        a, b = b, _poly_mod(a, b, F)
    return a


def _interpolate(xs: Sequence, ys: Sequence, F: Field) -> list:
    """Coefficients of the polynomial through the points (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = F.div(F.sub(coef[i], coef[i - 1]), F.sub(xs[i], xs[i - j]))
    poly = [F.zero] * n
    poly_basis = [F.one]
    for k in range(n):
        for i, c in enumerate(poly_basis):
            poly[i] = F.add(poly[i], F.mul(coef[k], c))
        nxt = [F.zero] * (len(poly_basis) + 1)
        for i, c in enumerate(poly_basis):
            nxt[i + 1] = F.add(nxt[i + 1], c)
            nxt[i] = F.sub(nxt[i], F.mul(xs[k], c))
        poly_basis = nxt
    return _trim(poly, F)


def _det_field(m: list[list], F: Field):
    a = [list(r) for r in m]
    n = len(a)
    d = F.one
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return F.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = F.neg(d)
        d = F.mul(d, a[c][c])
        inv = F.inv(a[c][c])
        for r in range(c + 1, n):
            if a[r][c]:
                f = F.mul(a[r][c], inv)
                for k in range(c, n):
                    a[r][k] = F.sub(a[r][k], F.mul(f, a[c][k]))
    return d


def _pencil_poly(C1: list[list], C2: list[list], cols_or_mix, F: Field, mix: bool) -> list:
    """``det((a·C1 + C2)[:, S])`` (or ``det((a·C1 + C2)·R)``) as a polynomial in ``a``."""
    q = len(C1)
    xs = [F(i) for i in range(q + 1)]
    ys = []
    for x in xs:
        m = [[F.add(F.mul(x, u), v) for u, v in zip(r1, r2)] for r1, r2 in zip(C1, C2)]
        if mix:
            R = cols_or_mix
            sq = [[sum_f(F, (F.mul(row[k], R[k][j]) for k in range(len(row)))) for j in range(q)] for row in m]
        else:
            sq = [[row[k] for k in cols_or_mix] for row in m]
        ys.append(_det_field(sq, F))
    return _interpolate(xs, ys, F)


def sum_f(F: Field, it):
    acc = F.zero
    for v in it:
        acc = F.add(acc, v)
    return acc


@dataclass
class GenericityResult:
    is_generic: bool
    mode: str
    evidence: str
    seed: int | None = None
    failure_bound: float | None = None

    def __bool__(self):
        return self.is_generic


def is_one_generic(M: LinearFormMatrix, mode: str = "exact2xq", seed: int = 0, trials: int = 2) -> GenericityResult:
    """Whether no generalized entry ``u·M·v`` vanishes.

    ``exact2xq``: the pencil ``a·C1 + b·C2`` of ``q x dim V`` coefficient
    matrices must have full rank ``q`` at every point of the projective
    line, i.e. its ``q x q`` minors have a constant gcd and ``C1`` has full
    rank.

    ``randomized``: random combinations ``det(C(u)·R_j)`` of the minors.  A
    common zero of all minors is a common zero of these, so a ``False``
    from exact mode is never reported as generic.  For ``p = 2`` we need the
    gcd of two such forms to be constant; for ``p >= 3`` the ``p`` forms in
    ``u`` must cut out only the origin (Krull dimension 0).
    """
    if M.p > M.q:
        raise ValueError("more rows than columns: transpose first")
    F = M.ring.field
    d = M.ring.nvars
    if M.has_zero_entry():
        return GenericityResult(False, mode, "zero entry", seed)
    if mode == "exact2xq":
        if M.p != 2:
            raise ValueError("exact mode handles 2 x q matrices only")
        if M.q > d:
            return GenericityResult(False, mode, "more columns than variables")
        C1, C2 = M.coefficient_rows(0), M.coefficient_rows(1)
        if rank(ExactMatrix.from_rows(C1, F, ncols=d)) < M.q:
            return GenericityResult(False, mode, "first row has dependent entries (point at infinity)")
        g: list | None = None
        for S in itertools.combinations(range(d), M.q):
            m = _pencil_poly(C1, C2, S, F, mix=False)
            if not m:
                continue
            g = m if g is None else _poly_gcd(g, m, F)
            if len(g) == 1:
                return GenericityResult(True, mode, "pencil minors have constant gcd")
        if g is None:
            return GenericityResult(False, mode, "pencil never reaches full rank")
        return GenericityResult(False, mode, f"pencil minors share a factor of degree {len(g) - 1}")
    if mode != "randomized":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    q = M.q
    mats = [M.coefficient_rows(i) for i in range(M.p)]
    if M.q > d:
        return GenericityResult(False, mode, "more columns than variables", seed)
    bound = q / F.size
    if M.p == 2:
        for _ in range(trials):
            Rs = [[[F.random_element(rng) for _ in range(q)] for _ in range(d)] for _ in range(2)]
            at_inf = [[sum_f(F, (F.mul(row[k], Rs[0][k][j]) for k in range(d))) for j in range(q)] for row in mats[0]]
            if not _det_field(at_inf, F):
                continue
            g1 = _pencil_poly(mats[0], mats[1], Rs[0], F, mix=True)
            g2 = _pencil_poly(mats[0], mats[1], Rs[1], F, mix=True)
            if g1 and g2 and len(_poly_gcd(g1, g2, F)) == 1:
                return GenericityResult(True, mode, "random minor combinations are coprime", seed, bound)
        return GenericityResult(False, mode, "random minor combinations share a root", seed, bound)
    # p >= 3: forms in u_1..u_p
    U = RingSpec.make([f"u{i + 1}" for i in range(M.p)], F)
    us = U.gens()
    for _ in range(trials):
        gens = []
        for _j in range(M.p):
            R = [[F.random_element(rng) for _ in range(q)] for _ in range(d)]
            rows = []
            for a in range(q):
                row = []
                for b in range(q):
                    acc = U.zero()
                    for i in range(M.p):
                        c = sum_f(F, (F.mul(mats[i][a][k], R[k][b]) for k in range(d)))
                        if c:
                            acc = acc + us[i] * c
                    row.append(acc)
                rows.append(row)
            gens.append(det(rows))
        if all(gens) and krull_dimension(PolyIdeal(U, gens)) == 0:
            return GenericityResult(True, mode, "random minor combinations vanish only at 0", seed, bound)
    return GenericityResult(False, mode, "random minor combinations have a common projective zero", seed, bound)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class WitnessCertificate:
    kind: str
    matrix: object
    memberships: dict = field(default_factory=dict)
    genericity: GenericityResult | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        if isinstance(self.matrix, LinearFormMatrix):
            mat = self.matrix.to_lists()
        elif isinstance(self.matrix, SkewLinearMatrix):
            mat = [[render(e) if e else "0" for e in r] for r in self.matrix.to_rows()]
        else:
            mat = self.matrix
        data = {
            "kind": self.kind,
            "matrix": mat,
            "memberships": {str(k): ([str(c) for c in v] if v is not None else None) for k, v in self.memberships.items()},
            "extra": {k: str(v) for k, v in self.extra.items()},
        }
        if self.genericity is not None:
            g = self.genericity
            data["genericity"] = {"value": g.is_generic, "mode": g.mode, "evidence": g.evidence, "seed": g.seed}
        return json.dumps(data, indent=1)


def scroll_extract(Q: QuadraticSystem, W_basis: Sequence[MultiPoly], y_assign: Sequence[MultiPoly]) -> WitnessCertificate:
    """Certificate for ``φ = [W; y]`` whose 2x2 minors lie in ``I_2``."""
    if len(W_basis) != len(y_assign):
        raise ValueError("W and y must have the same length")
    phi = LinearFormMatrix(Q.ring, [list(W_basis), list(y_assign)])
    mem = {}
    bad = []
    for (_, _, k, l), m in phi.minors2().items():
        c = Q.coordinates(m)
        if c is None:
            bad.append((k + 1, l + 1))
        mem[(k + 1, l + 1)] = c
    if bad:
        raise WitnessError(f"minors {bad} are not in I_2", bad)
    gen = is_one_generic(phi, "exact2xq")
    return WitnessCertificate("scroll", phi, mem, gen)


def bordered_matrix(ring: RingSpec, W_basis: Sequence[MultiPoly], y_assign: dict) -> SkewLinearMatrix:
    """``N`` with ``N[0][i] = x_i`` and ``N[i][j] = y_ij`` (``1 <= i < j``)."""
    ent = {}
    for i, x in enumerate(W_basis, start=1):
        ent[(0, i)] = x
    for (i, j), y in y_assign.items():
        if y:
            ent[(i, j)] = y
    return SkewLinearMatrix(len(W_basis) + 1, ring, ent)


def _times_linear_in_ideal(Q: QuadraticSystem, x: MultiPoly, P: MultiPoly) -> bool:
    """``x·P ∈ S_1·I_2`` via a rank comparison in degree 3."""
    R = Q.ring
    F = R.field
    products = [R.var(k) * q for q in Q.quadrics for k in range(R.nvars)]
    target = x * P
    cols: dict = {}
    rows = []
    for f in products + [target]:
        rows.append({cols.setdefault(e, len(cols)): c for e, c in f.terms.items()})
    base = rank(ExactMatrix(len(rows) - 1, max(len(cols), 1), F, rows[:-1]))
    full = rank(ExactMatrix(len(rows), max(len(cols), 1), F, rows))
    return base == full


def pfaffian_extract(Q: QuadraticSystem, W_basis: Sequence[MultiPoly], y_assign: dict) -> WitnessCertificate:
    """Pfaffian-net certificate from the three-term elements
    ``y_ij x_k - y_ik x_j + y_jk x_i``.

    Every 4x4 Pfaffian of the bordered matrix is checked in ``I_2``; one
    avoiding the border is also accepted when ``x_i·P`` lies in ``S_1·I_2``
    for a border entry ``x_i`` (then ``P ∈ I`` for a prime ``I``), and this
    is recorded.
    """
    R = Q.ring
    n3 = len(W_basis)
    y = {}
    for i, j in itertools.combinations(range(1, n3 + 1), 2):
        y[(i, j)] = y_assign.get((i, j), R.zero()) or R.zero()
    N = bordered_matrix(R, W_basis, y)
    mem = {}
    bad = []
    closure = []
    for idx in itertools.combinations(range(n3 + 1), 4):
        P = pfaffian(N.delete([k for k in range(n3 + 1) if k not in idx]))
        c = Q.coordinates(P) if P else [R.field.zero] * Q.r
        if c is None:
            if idx[0] == 0:
                bad.append(idx)
            elif _times_linear_in_ideal(Q, W_basis[idx[0] - 1], P):
                closure.append(idx)
            else:
                bad.append(idx)
        mem[idx] = c
    if bad:
        raise WitnessError(f"Pfaffians {bad} are not in I_2", bad)
    cert = WitnessCertificate("pfaffian-net", N, mem, None, {"n_plus_3": n3})
    if closure:
        cert.extra["closure"] = closure
    return cert


def pattern_graph(N: SkewLinearMatrix) -> dict[int, set[int]]:
    """Adjacency of ``{1..n+3}`` with ``i ~ j`` iff ``y_ij != 0``."""
    adj = {i: set() for i in range(1, N.size)}
    for (i, j), e in N.upper.items():
        if i >= 1 and e:
            adj[i].add(j)
            adj[j].add(i)
    return adj


def _triangles(adj: dict[int, set[int]]) -> list[tuple[int, int, int]]:
    out = []
    for i in sorted(adj):
        for j in sorted(adj[i]):
            if j <= i:
                continue
            for k in sorted(adj[i] & adj[j]):
                if k > j:
                    out.append((i, j, k))
    return out


def bipartite_block_extract(cert: WitnessCertificate, is_semigroup: bool = True) -> WitnessCertificate:
    """A block ``[[0, M], [-M^t, *]]`` of the bordered matrix with ``M``
    1-generic and at least 2 x 2.

    Rows of ``M`` form an independent set ``A`` of the pattern graph; its
    columns are the border plus all common neighbours of ``A``.  The
    lexicographically smallest ``A`` (largest blocks first) is returned.
    """
    if cert.kind != "pfaffian-net":
        raise ValueError("needs a pfaffian-net certificate")
    if not is_semigroup:
        raise ValueError("block extraction applies to semigroup ideals")
    N: SkewLinearMatrix = cert.matrix
    blocks = bipartite_blocks(N)
    if not blocks:
        raise WitnessError("no qualifying bipartite block", [pattern_graph(N)])
    A, B, M, gen = blocks[0]
    contain = {}
    for i, j in itertools.combinations(range(M.p), 2):
        for k, l in itertools.combinations(range(M.q), 2):
            minor = M.rows[i][k] * M.rows[j][l] - M.rows[i][l] * M.rows[j][k]
            idx = tuple(sorted((A[i], A[j], B[k], B[l])))
            P = pfaffian(N.delete([t for t in range(N.size) if t not in idx]))
            if minor == P:
                contain[idx] = 1
            elif minor == -P:
                contain[idx] = -1
            else:
                raise WitnessError(f"minor ({i},{j};{k},{l}) is not a Pfaffian of N")
    return WitnessCertificate(
        "bipartite-block", M, cert.memberships, gen,
        {"rows": A, "cols": B, "pfaffian_signs": contain},
    )


def bipartite_blocks(N: SkewLinearMatrix, first_only: bool = True) -> list:
    """Blocks ``(A, B, M, evidence)`` of a bordered skew matrix.

    ``A`` runs over independent sets (size >= 2) of the triangle-free
    pattern graph and ``B`` is the border plus their common neighbours.
    Larger ``A`` come first, then lexicographic order.
    """
    adj = pattern_graph(N)
    tri = _triangles(adj)
    if tri:
        raise WitnessError(f"pattern graph has triangles {tri[:3]}", tri)
    nodes = sorted(adj)
    out = []
    for size in range(len(nodes), 1, -1):
        for A in itertools.combinations(nodes, size):
            if any(b in adj[a] for a in A for b in A):
                continue
            common = set.intersection(*(adj[a] for a in A)) - set(A)
            if not common:
                continue
            B = (0,) + tuple(sorted(common))
            M = LinearFormMatrix(N.ring, [[N.entry(a, b) for b in B] for a in A])
            if M.has_zero_entry():
                continue
            T = M.transpose() if M.p > M.q else M
            gen = is_one_generic(T, "exact2xq" if T.p == 2 else "randomized")
            if not gen:
                continue
            out.append((A, B, M, gen))
            if first_only:
                return out
    return out


# ---------------------------------------------------------------------------
# bipyramids


def bipyramid_scan(c: OrientedComplex, Q: QuadraticSystem | None = None) -> list[WitnessCertificate]:
    """For each vertex pair, the common link faces and the 2 x (k+1) matrix
    ``[[x_a, y_{σ∪b}...], [x_b, y_{σ∪a}...]]`` in the facet ring."""
    from .kozrees import facet_ring

    if not c.is_pure():
        raise ValueError("bipyramid scan needs a pure complex")
    R = Q.ring if Q is not None else facet_ring(c)
    facets = {frozenset(f) for f in c.facets}
    name_of = {frozenset(lbl): i for i, lbl in enumerate(R.labels) if R.roles[i] == "y"}
    out = []
    for a, b in itertools.combinations(range(1, c.vertex_count + 1), 2):
        link = sorted(
            tuple(sorted(f - {a}))
            for f in facets
            if a in f and b not in f and (f - {a}) | {b} in facets
        )
        if not link:
            continue
        top = [R.var(a - 1)] + [R.var(name_of[frozenset(s) | {b}]) for s in link]
        bot = [R.var(b - 1)] + [R.var(name_of[frozenset(s) | {a}]) for s in link]
        M = LinearFormMatrix(R, [top, bot])
        matched = True
        mem = {}
        for (_, _, k, l), m in M.minors2().items():
            degs = {exponent_multidegree(R, e) for e in m.terms}
            if len(degs) > 1:
                matched = False
            if Q is not None:
                cc = Q.coordinates(m)
                if cc is None:
                    raise WitnessError(f"minor {(k, l)} of the ({a},{b}) bipyramid is not in I_2")
                mem[(k, l)] = cc
        if not matched:
            raise WitnessError(f"minor degrees differ for the ({a},{b}) bipyramid")
        out.append(
            WitnessCertificate("bipyramid", M, mem, None, {"apexes": (a, b), "k": len(link), "link": link})
        )
    return out


# ---------------------------------------------------------------------------
# searching for variable-entry scrolls


def _in_span(Q: QuadraticSystem, m: MultiPoly) -> bool:
    return not m or Q.coordinates(m) is not None


def variable_scroll_candidates(Q: QuadraticSystem, q: int):
    """Yield 2 x q matrices with variable entries whose minors lie in ``I_2``.

    Columns are ordered pairs of variables; two columns are compatible
    when their minor is in ``I_2``, and matrices are ``q``-cliques.  Row
    swaps are removed by requiring the first column's top index to be the
    smaller one when they differ.
    """
    R = Q.ring
    d = R.nvars
    xs = R.gens()
    nodes = [(u, v) for u in range(d) for v in range(d)]
    compat: dict[int, set[int]] = {i: set() for i in range(len(nodes))}
    for i, j in itertools.combinations(range(len(nodes)), 2):
        (u, v), (s, t) = nodes[i], nodes[j]
        if _in_span(Q, xs[u] * xs[t] - xs[s] * xs[v]):
            compat[i].add(j)
            compat[j].add(i)

    def grow(clique: list[int], cands: list[int]):
        if len(clique) == q:
            yield clique
            return
        for k, j in enumerate(cands):
            nxt = [c for c in cands[k + 1:] if c in compat[j]]
            if len(nxt) + len(clique) + 1 < q:
                continue
            yield from grow(clique + [j], nxt)

    for i, (u, v) in enumerate(nodes):
        if u > v:
            continue
        for cl in grow([i], sorted(c for c in compat[i] if c > i)):
            cols = [nodes[k] for k in cl]
            yield LinearFormMatrix(R, [[xs[u] for u, _ in cols], [xs[v] for _, v in cols]])


def variable_scroll_search(Q: QuadraticSystem, q: int) -> WitnessCertificate | None:
    """First 1-generic variable-entry 2 x q scroll, or ``None``."""
    for M in variable_scroll_candidates(Q, q):
        gen = is_one_generic(M, "exact2xq")
        if gen:
            mem = {(k + 1, l + 1): Q.coordinates(m) for (_, _, k, l), m in M.minors2().items()}
            return WitnessCertificate("scroll", M, mem, gen, {"search": "variable-entry"})
    return None


def randomized_scroll_search(Q: QuadraticSystem, q: int, seed: int = 0, attempts: int = 200) -> WitnessCertificate | None:
    """Fallback search over 2 x q matrices of linear forms.

    Starts from variable-entry matrices whose minors lie in ``I_2`` but that
    fail 1-genericity and applies random invertible column operations
    followed by row operations, keeping any result whose minors stay in
    ``I_2`` and which is 1-generic.  Row and column operations preserve the
    minor ideal, so the search only changes the presentation; it succeeds
    exactly when some candidate's degeneracy was an artifact of the chosen
    entries.  The seed is recorded in the certificate.
    """
    rng = random.Random(seed)
    F = Q.ring.field
    tried = 0
    for M in variable_scroll_candidates(Q, q):
        if tried >= attempts:
            break
        tried += 1
        for _ in range(3):
            a, b, c, e = (F.random_element(rng) for _ in range(4))
            if not F.sub(F.mul(a, e), F.mul(b, c)):
                continue
            r0, r1 = M.rows
            rows = [
                [x * a + y * b for x, y in zip(r0, r1)],
                [x * c + y * e for x, y in zip(r0, r1)],
            ]
            try:
                N = LinearFormMatrix(Q.ring, rows)
            except ValueError:
                continue
            if N.has_zero_entry():
                continue
            gen = is_one_generic(N, "randomized", seed=seed)
            if gen:
                mem = {(k + 1, l + 1): Q.coordinates(m) for (_, _, k, l), m in N.minors2().items()}
                if all(v is not None for v in mem.values()):
                    return WitnessCertificate("scroll", N, mem, gen, {"search": "randomized", "seed": seed})
    return None
