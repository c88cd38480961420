"""Oriented simplicial complexes, pseudomanifold checks and homology."""
from __future__ import annotations

import itertools
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .exactalg import ExactMatrix, Field, default_field, rank


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (entries distinct)."""
    s = 1
    a = list(seq)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if a[i] > a[j]:
                s = -s
    return s


def _oriented(face: Sequence[int], sign: int) -> tuple[int, ...]:
    f = tuple(sorted(face))
    if sign < 0 and len(f) >= 2:
        f = (f[1], f[0]) + f[2:]
    return f


@dataclass(frozen=True)
class OrientedComplex:
    """A simplicial complex on vertices ``1..vertex_count`` given by facets.

    The listed order of each facet fixes its orientation.  ``facets == ()``
    is the void complex; ``facets == ((),)`` is the complex ``{∅}``.
    """

    vertex_count: int
    facets: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        seen = set()
        fs = []
        for f in self.facets:
            f = tuple(int(v) for v in f)
            if len(set(f)) != len(f):
                raise ValueError(f"repeated vertex in facet {f}")
            if any(v < 1 or v > self.vertex_count for v in f):
                raise ValueError(f"vertex out of range in facet {f}")
            key = frozenset(f)
            if key in seen:
                raise ValueError(f"duplicate facet {sorted(f)}")
            seen.add(key)
            fs.append(f)
        object.__setattr__(self, "facets", tuple(fs))

    @classmethod
    def from_sets(cls, vertex_count: int, faces: Iterable[Iterable[int]], name: str = "") -> "OrientedComplex":
        """Complex generated by ``faces`` (only inclusion-maximal ones kept)."""
        fs = {frozenset(f) for f in faces}
        maximal = [f for f in fs if not any(f < g for g in fs)]
        maximal.sort(key=lambda f: (-len(f), sorted(f)))
        return cls(vertex_count, tuple(tuple(sorted(f)) for f in maximal), name)

    @property
    def dimension(self) -> int:
        if not self.facets:
            return -2
        return max(len(f) for f in self.facets) - 1

    @property
    def is_void(self) -> bool:
        return not self.facets

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def facet_sets(self) -> list[frozenset]:
        return [frozenset(f) for f in self.facets]

    def orientation(self, facet: Sequence[int]) -> int:
        """+1/-1 for a listed facet relative to its sorted vertex order."""
        key = frozenset(facet)
        for f in self.facets:
            if frozenset(f) == key:
                return permutation_sign(f) * permutation_sign(facet)
        raise KeyError(f"{sorted(facet)} is not a facet")

    def faces(self, k: int) -> list[tuple[int, ...]]:
        """Sorted ``k``-dimensional faces (``k = -1`` gives the empty face)."""
        out = set()
        for f in self.facets:
            if len(f) >= k + 1:
                out.update(itertools.combinations(sorted(f), k + 1))
        return sorted(out)

    def f_vector(self) -> list[int]:
        return [len(self.faces(k)) for k in range(self.dimension + 1)]

    def all_faces(self) -> set[frozenset]:
        out: set[frozenset] = set()
        for f in self.facets:
            s = sorted(f)
            for k in range(len(s) + 1):
                out.update(frozenset(c) for c in itertools.combinations(s, k))
        return out

    def used_vertices(self) -> set[int]:
        return {v for f in self.facets for v in f}

    def relabel(self, perm: dict[int, int] | Sequence[int]) -> "OrientedComplex":
        """Apply a vertex map (dict or 1-based list ``perm[v-1]``)."""
        if not isinstance(perm, dict):
            perm = {i + 1: v for i, v in enumerate(perm)}
        return OrientedComplex(
            self.vertex_count, tuple(tuple(perm[v] for v in f) for f in self.facets), self.name
        )

    def to_json(self) -> str:
        return json.dumps(
            {"vertices": self.vertex_count, "dim": self.dimension, "facets": [list(f) for f in self.facets]}
        )

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "OrientedComplex":
        data = json.loads(text)
        c = cls(int(data["vertices"]), tuple(tuple(f) for f in data["facets"]), name)
        if "dim" in data and c.facets and c.dimension != int(data["dim"]):
            raise ValueError("declared dim does not match the facets")
        return c


@dataclass
class PseudomanifoldReport:
    is_pure: bool
    ridge_condition: bool
    orientations_cancel: bool
    strongly_connected: bool
    failing_witness: object = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.is_pure and self.ridge_condition and self.orientations_cancel and self.strongly_connected


def ridge_incidence(c: OrientedComplex) -> dict[tuple, list[tuple[int, int]]]:
    """Map each sorted ridge to ``[(facet index, induced sign)]``."""
    inc: dict[tuple, list[tuple[int, int]]] = defaultdict(list)
    for idx, f in enumerate(c.facets):
        s = permutation_sign(f)
        srt = sorted(f)
        for k in range(len(srt)):
            ridge = tuple(srt[:k] + srt[k + 1:])
            inc[ridge].append((idx, s * (-1) ** k))
    return inc


def validate_pseudomanifold(c: OrientedComplex) -> PseudomanifoldReport:
    pure = c.is_pure() and bool(c.facets)
    rep = PseudomanifoldReport(pure, True, True, True)
    if not pure:
        rep.failing_witness = sorted({len(f) - 1 for f in c.facets})
        rep.notes.append("facets of mixed dimension" if c.facets else "void complex")
        rep.ridge_condition = rep.orientations_cancel = rep.strongly_connected = False
        return rep
    inc = ridge_incidence(c)
    for ridge in sorted(inc):
        entries = inc[ridge]
        if len(entries) != 2:
            if rep.ridge_condition:
                rep.ridge_condition = False
                rep.failing_witness = ridge
                rep.notes.append(f"ridge {ridge} lies in {len(entries)} facets")
        elif entries[0][1] + entries[1][1] != 0 and rep.orientations_cancel:
            rep.orientations_cancel = False
            if rep.failing_witness is None:
                rep.failing_witness = ridge
            rep.notes.append(f"orientations do not cancel along {ridge}")
    # dual graph connectivity
    adj = defaultdict(set)
    for entries in inc.values():
        for a, _ in entries:
            for b, _ in entries:
                if a != b:
                    adj[a].add(b)
    seen = {0}
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b in adj[a]:
            if b not in seen:
                seen.add(b)
                queue.append(b)
    if len(seen) != len(c.facets):
        rep.strongly_connected = False
        comp = sorted(tuple(sorted(c.facets[i])) for i in seen)
        if rep.failing_witness is None:
            rep.failing_witness = comp
        rep.notes.append("dual graph is disconnected")
    return rep


def orient_facets(vertex_count: int, facets: Iterable[Iterable[int]], name: str = "") -> OrientedComplex | None:
    """Orient unordered facets coherently by BFS over the dual graph.

    Returns ``None`` when no coherent orientation exists (or a ridge lies in
    more than two facets).
    """
    fs = [tuple(sorted(f)) for f in facets]
    if not fs:
        return OrientedComplex(vertex_count, (), name)
    sign = [0] * len(fs)
    plain = OrientedComplex(vertex_count, tuple(fs))
    inc = ridge_incidence(plain)
    nbrs = defaultdict(list)
    for entries in inc.values():
        if len(entries) > 2:
            return None
        if len(entries) == 2:
            (a, sa), (b, sb) = entries
            # need sign[a]*sa + sign[b]*sb == 0
            rel = -sa * sb
            nbrs[a].append((b, rel))
            nbrs[b].append((a, rel))
    for start in range(len(fs)):
        if sign[start]:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b, rel in nbrs[a]:
                want = sign[a] * rel
                if not sign[b]:
                    sign[b] = want
                    queue.append(b)
                elif sign[b] != want:
                    return None
    return OrientedComplex(vertex_count, tuple(_oriented(f, s) for f, s in zip(fs, sign)), name)


# ---------------------------------------------------------------------------
# chains and homology


def boundary_matrix(c: OrientedComplex, j: int, field: Field | None = None) -> ExactMatrix:
    """Matrix of the boundary map from ``j``-chains to ``(j-1)``-chains.

    Bases are the sorted faces; a facet of dimension ``j`` carries its listed
    orientation, every other face the increasing vertex order.  ``j = 0``
    maps onto the augmentation (one row).
    """
    F = field or default_field()
    if j < 0 or j > c.dimension:
        raise ValueError(f"dimension {j} out of range 0..{c.dimension}")
    cols = c.faces(j)
    rows = c.faces(j - 1)
    rindex = {r: i for i, r in enumerate(rows)}
    signs = {}
    for f in c.facets:
        if len(f) == j + 1:
            signs[tuple(sorted(f))] = permutation_sign(f)
    data = [dict() for _ in rows]
    for ci, face in enumerate(cols):
        s = signs.get(face, 1)
        for k in range(len(face)):
            r = face[:k] + face[k + 1:]
            data[rindex[r]][ci] = F(s * (-1) ** k)
    return ExactMatrix(len(rows), len(cols), F, tuple(data))


def reduced_homology(faces: Iterable[frozenset], field: Field | None = None) -> dict[int, int]:
    """Reduced homology dimensions of a complex given by its full face set.

    ``faces`` must be closed under subsets.  Returns ``{j: dim}`` for
    ``j >= -1`` with only nonzero entries.  An empty iterable is the void
    complex (all zero); ``{∅}`` alone gives ``{-1: 1}``.
    """
    F = field or default_field()
    by_dim: dict[int, list[tuple]] = defaultdict(list)
    for f in faces:
        by_dim[len(f) - 1].append(tuple(sorted(f)))
    if not by_dim:
        return {}
    top = max(by_dim)
    index = {}
    for k in by_dim:
        by_dim[k].sort()
        index[k] = {f: i for i, f in enumerate(by_dim[k])}
    ranks = {}
    for k in range(0, top + 1):
        cols = by_dim.get(k, [])
        rows = index.get(k - 1, {})
        if not cols or not rows:
            ranks[k] = 0
            continue
        data = [dict() for _ in range(len(rows))]
        for ci, face in enumerate(cols):
            for t in range(len(face)):
                r = face[:t] + face[t + 1:]
                data[rows[r]][ci] = F((-1) ** t)
        ranks[k] = rank(ExactMatrix(len(rows), len(cols), F, tuple(data)))
    out = {}
    for k in range(-1, top + 1):
        n = len(by_dim.get(k, []))
        h = n - ranks.get(k, 0) - ranks.get(k + 1, 0)
        if h:
            out[k] = h
    return out


def homology_dims(c: OrientedComplex, field: Field | None = None) -> list[int]:
    """Reduced homology ``[h_0, ..., h_n]`` over ``field``.

    The degree ``-1`` group (nonzero only for ``{∅}``) is available through
    :func:`reduced_homology`.
    """
    h = reduced_homology(c.all_faces(), field)
    return [h.get(k, 0) for k in range(max(c.dimension, 0) + 1)]


def euler_characteristic(c: OrientedComplex) -> int:
    return sum((-1) ** k * n for k, n in enumerate(c.f_vector()))


def alexander_dual(c: OrientedComplex) -> OrientedComplex:
    """``{[d] - γ : γ not a face}`` by a scan over all vertex subsets."""
    d = c.vertex_count
    faces = c.all_faces()
    full = frozenset(range(1, d + 1))
    dual = []
    for k in range(d + 1):
        for g in itertools.combinations(range(1, d + 1), k):
            if frozenset(g) not in faces:
                dual.append(full - frozenset(g))
    if not dual:
        return OrientedComplex(d, (), f"dual({c.name})")
    return OrientedComplex.from_sets(d, dual, f"dual({c.name})")


def identify_vertices(c: OrientedComplex, keep: int, drop: int) -> OrientedComplex:
    """Glue vertex ``drop`` onto ``keep`` and renumber to ``1..d-1``.

    Facets that would collapse (containing both) are removed.
    """
    if keep == drop:
        raise ValueError("cannot identify a vertex with itself")
    d = c.vertex_count
    for v in (keep, drop):
        if not 1 <= v <= d:
            raise ValueError(f"vertex {v} out of range")

    def m(v):
        if v == drop:
            v = keep
        return v - 1 if v > drop else v

    out = []
    seen = set()
    for f in c.facets:
        if keep in f and drop in f:
            continue
        g = tuple(m(v) for v in f)
        if frozenset(g) in seen:
            continue
        seen.add(frozenset(g))
        out.append(g)
    return OrientedComplex(d - 1, tuple(out), f"{c.name}/{keep}~{drop}")


# ---------------------------------------------------------------------------
# catalog


def cycle(d: int) -> OrientedComplex:
    if d < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return OrientedComplex(d, tuple((i, i % d + 1) for i in range(1, d + 1)), f"C{d}")


def simplex_boundary(k: int) -> OrientedComplex:
    """Boundary of the ``k``-simplex on vertices ``1..k+1``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    verts = list(range(1, k + 2))
    fs = []
    for i in range(k + 1):
        fs.append(_oriented(verts[:i] + verts[i + 1:], (-1) ** i))
    return OrientedComplex(k + 1, tuple(fs), f"bd-simplex{k}")


def bipyramid(base: int) -> OrientedComplex:
    """Suspension of the ``base``-cycle; apexes are ``base+1`` and ``base+2``."""
    if base < 3:
        raise ValueError("base cycle needs at least 3 vertices")
    top, bot = base + 1, base + 2
    fs = []
    for i in range(1, base + 1):
        j = i % base + 1
        fs.append((i, j, top))
        fs.append((j, i, bot))
    return OrientedComplex(base + 2, tuple(fs), f"bipyramid{base}")


def octahedron() -> OrientedComplex:
    c = bipyramid(4)
    return OrientedComplex(6, c.facets, "octahedron")


def coned_hexagon() -> OrientedComplex:
    """7-vertex sphere: a triangulated hexagon ``1..6`` plus the cone from 7
    over its boundary."""
    disk = [(1, 2, 6), (2, 3, 6), (3, 4, 5), (3, 5, 6)]
    cone = [(i, i % 6 + 1, 7) for i in range(1, 7)]
    c = orient_facets(7, disk + cone, "coned-hexagon")
    assert c is not None
    return c


def _vertex_links_are_cycles(tris: list[frozenset], d: int) -> bool:
    for v in range(1, d + 1):
        edges = [tuple(t - {v}) for t in tris if v in t]
        if not edges:
            return False
        adj = defaultdict(list)
        for a, b in edges:
            adj[a].append(b)
            adj[b].append(a)
        if any(len(n) != 2 for n in adj.values()):
            return False
        start = edges[0][0]
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        if len(seen) != len(adj):
            return False
    return True


def canonical_form(facets: Iterable[Iterable[int]], d: int) -> tuple:
    """Lexicographically least relabelled sorted facet list.

    Only permutations preserving vertex degree (number of facets through a
    vertex) are tried.
    """
    fs = [frozenset(f) for f in facets]
    deg = {v: sum(v in f for f in fs) for v in range(1, d + 1)}
    classes = defaultdict(list)
    for v in range(1, d + 1):
        classes[deg[v]].append(v)
    keys = sorted(classes)
    # targets: class with smallest degree gets smallest labels
    slots = []
    nxt = 1
    for k in keys:
        slots.append(list(range(nxt, nxt + len(classes[k]))))
        nxt += len(classes[k])
    best = None
    for choice in itertools.product(*[itertools.permutations(classes[k]) for k in keys]):
        m = {}
        for srcs, tgts in zip(choice, slots):
            for s, t in zip(srcs, tgts):
                m[s] = t
        form = tuple(sorted(tuple(sorted(m[v] for v in f)) for f in fs))
        if best is None or form < best:
            best = form
    return best


def surface_triangulations(d: int, n_triangles: int | None = None, manifold_only: bool = True) -> list[list[frozenset]]:
    """All labelled closed connected 2-manifold triangulations on ``1..d``.

    Uses every vertex and contains the triangle {1,2,3}; built by repeatedly
    closing the smallest edge that lies in one triangle only.  With
    ``manifold_only=False`` vertex links may be unions of cycles (closed
    2-pseudomanifolds); ``n_triangles=None`` allows any count.
    """
    cap = n_triangles if n_triangles is not None else d * (d - 1) // 3
    results = []
    start = frozenset((1, 2, 3))

    def edges_of(t):
        a, b, c = sorted(t)
        return ((a, b), (a, c), (b, c))

    def rec(tris: list, count: dict):
        open_edges = [e for e, k in count.items() if k == 1]
        if not open_edges:
            if n_triangles in (None, len(tris)) and {v for t in tris for v in t} == set(range(1, d + 1)):
                if not manifold_only or _vertex_links_are_cycles(tris, d):
                    results.append(list(tris))
            return
        if len(tris) >= cap:
            return
        a, b = min(open_edges)
        tset = set(tris)
        for v in range(1, d + 1):
            if v in (a, b):
                continue
            t = frozenset((a, b, v))
            if t in tset:
                continue
            es = edges_of(t)
            if any(count.get(e, 0) >= 2 for e in es):
                continue
            for e in es:
                count[e] = count.get(e, 0) + 1
            tris.append(t)
            rec(tris, count)
            tris.pop()
            for e in es:
                count[e] -= 1
                if not count[e]:
                    del count[e]

    cnt = {e: 1 for e in edges_of(start)}
    rec([start], cnt)
    return results


def sphere7_list() -> list[OrientedComplex]:
    """The combinatorial types of 7-vertex triangulated 2-spheres."""
    forms = {}
    for tris in surface_triangulations(7, 10):
        edges = {e for t in tris for e in itertools.combinations(sorted(t), 2)}
        if len(edges) != 15:
            continue
        form = canonical_form(tris, 7)
        forms.setdefault(form, None)
    out = []
    for i, form in enumerate(sorted(forms)):
        c = orient_facets(7, form, f"sphere7-{i}")
        if c is None:
            raise AssertionError("non-orientable sphere candidate")
        out.append(c)
    return out


def catalog(name: str, *params: int) -> OrientedComplex | list[OrientedComplex]:
    builders = {
        "cycle": cycle,
        "simplex_boundary": simplex_boundary,
        "octahedron": octahedron,
        "bipyramid": bipyramid,
        "sphere7_list": sphere7_list,
        "coned_hexagon": coned_hexagon,
    }
    if name not in builders:
        raise KeyError(f"unknown complex {name!r}; known: {sorted(builders)}")
    return builders[name](*params)
