"""Command line: example registry, pipelines over JSON inputs, diagrams."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Callable

from . import census, simplicial, strand, toricbetti, witness
from .exactalg import Field, field_from_spec
from .groebner import PolyIdeal, codimension, hilbert_degree
from .kozrees import (
    cycle_skew_matrix,
    cycle_specialization,
    koszul_cycle_generators,
    pfaffian,
    pseudomanifold_ideal,
)
from .polyring import INHOMOGENEOUS, RingSpec, multidegree_of, render
from .simplicial import OrientedComplex, validate_pseudomanifold
from .toricbetti import PointConfiguration, betti_diagram, hochster_betti, toric_ideal


class ParseError(ValueError):
    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


# ---------------------------------------------------------------------------
# inputs


def parse_data(data, source: str = "<input>", F: Field | None = None):
    """Domain object from decoded JSON (format chosen by its keys)."""
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", source)
    if "facets" in data:
        facets = data["facets"]
        if not isinstance(facets, list):
            raise ParseError("facets must be a list", f"{source}:facets")
        for k, f in enumerate(facets):
            if not isinstance(f, list) or not all(isinstance(v, int) for v in f):
                raise ParseError("facet must be a list of integers", f"{source}:facets[{k}]")
            if len(set(f)) != len(f):
                raise ParseError(f"repeated vertex in {f}", f"{source}:facets[{k}]")
        try:
            return OrientedComplex.from_json(json.dumps(data), data.get("name", ""))
        except (ValueError, KeyError, TypeError) as e:
            raise ParseError(str(e), source) from e
    if "columns" in data:
        try:
            return PointConfiguration(tuple(tuple(c) for c in data["columns"]), data.get("names"))
        except (ValueError, TypeError) as e:
            raise ParseError(str(e), f"{source}:columns") from e
    if "vertices" in data and isinstance(data["vertices"], list):
        try:
            return census.LatticePolygon.from_points([tuple(p) for p in data["vertices"]])
        except (ValueError, TypeError) as e:
            raise ParseError(str(e), f"{source}:vertices") from e
    if "vars" in data and "gens" in data:
        return _parse_ideal(data, source, F)
    raise ParseError("unrecognised input: expected facets, columns, vertices or vars/gens", source)


def _parse_ideal(data: dict, source: str, F: Field | None = None) -> PolyIdeal:
    names = data["vars"]
    grading = data.get("grading")
    try:
        R = RingSpec.make(names, F, grading=grading)
    except (ValueError, TypeError) as e:
        raise ParseError(str(e), f"{source}:vars") from e
    gens = []
    for k, text in enumerate(data["gens"]):
        try:
            g = R.parse(text)
        except (ValueError, KeyError) as e:
            raise ParseError(str(e), f"{source}:gens[{k}]") from e
        if not g.is_homogeneous() or (grading is not None and multidegree_of(g) == INHOMOGENEOUS):
            raise ParseError(f"inhomogeneous generator {text!r}", f"{source}:gens[{k}]")
        gens.append(g)
    return PolyIdeal(R, gens, name=data.get("name", ""))


def parse_inputs(path: str, F: Field | None = None):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(str(e), path) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"{path}:{e.lineno}:{e.colno}") from e
    return parse_data(data, path, F)


def _configuration(obj) -> PointConfiguration:
    if isinstance(obj, OrientedComplex):
        return PointConfiguration.from_complex(obj)
    if isinstance(obj, PointConfiguration):
        return obj
    if isinstance(obj, census.LatticePolygon):
        return census.polygon_configuration(obj)
    raise ParseError("a complex, configuration or polygon is needed here")


def _quadratic_system(obj, F: Field) -> strand.QuadraticSystem:
    if isinstance(obj, PolyIdeal):
        return strand.QuadraticSystem.from_ideal(obj)
    return strand.QuadraticSystem.from_ideal(toric_ideal(_configuration(obj), F))


def emit_betti_diagram(t: toricbetti.BettiTable | dict) -> str:
    coarse = t.coarse() if isinstance(t, toricbetti.BettiTable) else t
    return betti_diagram(coarse)


# ---------------------------------------------------------------------------
# example registry


def _coarse_key(coarse: dict) -> dict[str, int]:
    return {f"{i},{j}": v for (i, j), v in sorted(coarse.items()) if v}


@dataclass
class ExampleRegistryEntry:
    name: str
    summary: str
    provenance: str  # "published" or "derived" per expected key, see `tags`
    compute: Callable[[Field, bool], dict]
    expected: dict
    tags: dict = field(default_factory=dict)
    bound: int | None = None
    slow_expected: dict = field(default_factory=dict)


def _twisted_cubic(F: Field, slow: bool) -> dict:
    A = PointConfiguration([(1, t) for t in range(4)], names=["x", "y", "z", "w"])
    t = hochster_betti(A, 4, F)
    Q = strand.QuadraticSystem.from_ideal(toric_ideal(A, F))
    return {"betti": _coarse_key(t.coarse()), "strand": strand.koszul_strand_betti(Q), "2lp": strand.two_lp(Q)}


def _syzygy_summary(Q: strand.QuadraticSystem) -> list[list[int]]:
    syz = strand.linear_first_syzygies(Q)
    return sorted([strand.syzygy_rank(s), strand.support_dimension(s)] for s in syz)


def _cycle(d: int, bound: int | None):
    def run(F: Field, slow: bool) -> dict:
        I = cycle_specialization(d, F)
        quads = [g for g in I.generators if g.degree() == 2]
        Q = strand.QuadraticSystem(I.ring, quads)
        out = {
            "quadrics": len(quads),
            "max_quadric_rank": max(strand.quadric_rank(q) for q in quads),
            "strand": strand.koszul_strand_betti(Q),
            "syzygies": _syzygy_summary(Q),
            "codim": codimension(I),
        }
        if d == 6:
            out["degree"] = hilbert_degree(I)
            raw = pfaffian(cycle_skew_matrix(6, F, normalize_sign=False))
            R = raw.ring
            plus = R.parse("y12*y34*y56 + y16*y23*y45")
            out["pfaffian_is_plus_form"] = raw in (plus, -plus)
        if bound is not None:
            A = PointConfiguration.from_complex(simplicial.cycle(d))
            out["betti"] = _coarse_key(hochster_betti(A, bound, F).coarse())
        return out

    return run


def _simplex_boundary(k: int):
    def run(F: Field, slow: bool) -> dict:
        c = simplicial.simplex_boundary(k)
        A = PointConfiguration.from_complex(c)
        Q = strand.QuadraticSystem.from_ideal(toric_ideal(A, F))
        R = Q.ring
        top = [R.var(i) for i in range(k + 1)]
        bot = [R.var("y" + "".join(str(v) for v in range(1, k + 2) if v != i)) for i in range(1, k + 2)]
        cert = witness.scroll_extract(Q, top, bot)
        return {"strand": strand.koszul_strand_betti(Q), "scroll_one_generic": bool(cert.genericity)}

    return run


def _koszul_class(F: Field, slow: bool) -> dict:
    J = koszul_cycle_generators(6, 4, F)
    R = J.ring
    target = R.parse("x2*y3456 - x3*y2456 + x4*y2356 - x5*y2346 + x6*y2345")
    return {"class_23456_is_generator": target in J.generators, "generators": len(J.generators)}


def _octahedron(F: Field, slow: bool) -> dict:
    c = simplicial.octahedron()
    A = PointConfiguration.from_complex(c)
    Q = strand.QuadraticSystem.from_ideal(toric_ideal(A, F))
    certs = witness.bipyramid_scan(c, Q)
    t = hochster_betti(A, 3, F, max_index=2)
    return {"bipyramid_k": sorted(ct.extra["k"] for ct in certs), "b_2_3_at_least_2": t.b(2, 3) >= 2}


def _sphere_fingerprint(c: OrientedComplex, F: Field, slow: bool, bound: int) -> dict:
    A = PointConfiguration.from_complex(c)
    I = toric_ideal(A, F)
    Q = strand.QuadraticSystem.from_ideal(I)
    out = {"degree": hilbert_degree(I), "codim": codimension(I), "strand": strand.koszul_strand_betti(Q)}
    if slow:
        out["betti"] = _coarse_key(hochster_betti(A, bound, F).coarse())
    return out


def _coned_hexagon(F: Field, slow: bool) -> dict:
    c = simplicial.coned_hexagon()
    out = _sphere_fingerprint(c, F, slow, 13)
    out["pseudomanifold_quadrics"] = len(pseudomanifold_ideal(c, F).generators)
    return out


def _identified(F: Field, slow: bool) -> dict:
    c = simplicial.coned_hexagon()
    A = toricbetti.identify_vertices(PointConfiguration.from_complex(c), 1, 4)
    I = toric_ideal(A, F)
    Q = strand.QuadraticSystem.from_ideal(I)
    rep = validate_pseudomanifold(simplicial.identify_vertices(c, 1, 4))
    out = {
        "columns": A.q,
        "degree": hilbert_degree(I),
        "strand": strand.koszul_strand_betti(Q),
        "ridge_in_four_facets": any("4 facets" in n for n in rep.notes),
    }
    if slow:
        out["betti"] = _coarse_key(hochster_betti(A, 13, F).coarse())
    return out


def _genus_seven(F: Field, slow: bool) -> dict:
    return {"betti": _coarse_key(census.curve_betti_table(7, 13))}


def _curve_table(F: Field, slow: bool) -> dict:
    return {"feasible": [list(p) for p in census.feasible_pairs(7)], "prop51": census.prop51_scan(10**6)}


def _b(d: dict) -> dict[str, int]:
    return {f"{i},{j}": v for (i, j), v in sorted(d.items())}


REGISTRY: dict[str, ExampleRegistryEntry] = {}


def _register(e: ExampleRegistryEntry) -> None:
    REGISTRY[e.name] = e


_register(ExampleRegistryEntry(
    "twisted-cubic", "rational normal cubic: 3 quadrics, 2 linear syzygies", "published", _twisted_cubic,
    {"betti": _b({(0, 0): 1, (1, 2): 3, (2, 3): 2}), "strand": [3, 2], "2lp": 2},
    {"betti": "published: twisted cubic diagram"}, bound=4,
))
_register(ExampleRegistryEntry(
    "five-cycle", "cycle specialization, d = 5", "published", _cycle(5, 7),
    {
        "quadrics": 5, "max_quadric_rank": 4, "strand": [5, 1], "syzygies": [[5, 5]], "codim": 4,
        "betti": _b({(0, 0): 1, (1, 2): 5, (2, 3): 1, (2, 4): 11, (3, 5): 10, (4, 6): 1, (4, 7): 1}),
    },
    {"betti": "published: five-cycle diagram", "syzygies": "derived: syzygy rank and support"}, bound=7,
))
_register(ExampleRegistryEntry(
    "six-cycle", "cycle specialization with Pfaffian, d = 6", "published", _cycle(6, 9),
    {
        "quadrics": 6, "max_quadric_rank": 4, "strand": [6, 1], "syzygies": [[6, 6]], "codim": 5, "degree": 21,
        "pfaffian_is_plus_form": True,
        "betti": _b({(0, 0): 1, (1, 2): 6, (1, 3): 1, (2, 3): 1, (2, 4): 21, (3, 5): 21, (3, 6): 1,
                     (4, 6): 1, (4, 7): 6, (5, 9): 1}),
    },
    {"betti": "published: six-cycle diagram", "pfaffian_is_plus_form": "published: cubic in original coordinates"}, bound=9,
))
_register(ExampleRegistryEntry(
    "seven-cycle", "cycle specialization, d = 7 (strand only)", "derived", _cycle(7, None),
    {"strand": [7, 1], "syzygies": [[7, 7]], "codim": 6, "quadrics": 7, "max_quadric_rank": 4},
))
_register(ExampleRegistryEntry(
    "eight-cycle", "cycle specialization with Pfaffian, d = 8 (strand only)", "derived", _cycle(8, None),
    {"strand": [8, 1], "syzygies": [[8, 8]], "codim": 7, "quadrics": 8, "max_quadric_rank": 4},
))
for _k, _s in ((2, [3, 2]), (3, [6, 8, 3])):
    _register(ExampleRegistryEntry(
        f"simplex-boundary-{_k}", f"boundary of the {_k}-simplex: 2 x {_k + 1} scroll", "published",
        _simplex_boundary(_k), {"strand": _s, "scroll_one_generic": True},
        {"strand": "derived: Eagon-Northcott strand"},
    ))
_register(ExampleRegistryEntry(
    "six-cycle-koszul-class", "Koszul class z_23456 for the six-cycle", "published", _koszul_class,
    {"class_23456_is_generator": True, "generators": 6},
))
_register(ExampleRegistryEntry(
    "octahedron-bipyramid", "bipyramids in the octahedron", "derived", _octahedron,
    {"bipyramid_k": [4, 4, 4], "b_2_3_at_least_2": True},
))
_register(ExampleRegistryEntry(
    "coned-hexagon", "pinned 7-vertex sphere: degree 73 toric 7-fold", "published", _coned_hexagon,
    {"degree": 73, "codim": 9, "strand": [17, 19, 1], "pseudomanifold_quadrics": 15},
    {"strand": "published: row 1 of the sphere diagram"}, bound=13,
    slow_expected={"betti": _b({
        (0, 0): 1, (1, 2): 17, (2, 3): 19, (3, 4): 1,
        (1, 3): 4, (2, 4): 144, (3, 5): 444, (4, 6): 500, (5, 7): 209, (6, 8): 8,
        (3, 6): 2, (4, 7): 131, (5, 8): 365, (6, 9): 333, (7, 10): 93, (8, 11): 2,
        (5, 9): 1, (6, 10): 36, (7, 11): 75, (8, 12): 45, (9, 13): 8,
    })},
))
_register(ExampleRegistryEntry(
    "coned-hexagon-identified", "vertices 1 and 4 of the pinned sphere identified", "published", _identified,
    {"columns": 16, "degree": 56, "strand": [19, 30, 1], "ridge_in_four_facets": True},
    bound=13,
    slow_expected={"betti": _b({
        (0, 0): 1, (1, 2): 19, (2, 3): 30, (3, 4): 1,
        (1, 3): 6, (2, 4): 147, (3, 5): 546, (4, 6): 788, (5, 7): 484, (6, 8): 45,
        (3, 6): 2, (4, 7): 28, (5, 8): 192, (6, 9): 404, (7, 10): 255, (8, 11): 64, (9, 12): 3,
        (8, 12): 3, (9, 13): 2,
    })},
))
_register(ExampleRegistryEntry(
    "genus-seven-curve", "Betti table of a degree 13 genus 7 curve from its Hilbert function", "published",
    _genus_seven,
    {"betti": _b({(0, 0): 1, (1, 2): 8, (2, 3): 5, (2, 4): 25, (3, 5): 46, (4, 6): 30, (5, 7): 7})},
))
_register(ExampleRegistryEntry(
    "curve-degree-table", "genus/degree pairs allowed by the curve Betti formulas", "published", _curve_table,
    {"feasible": [[0, 3], [1, 5], [2, 6], [3, 8], [4, 9], [5, 11], [6, 12], [7, 13], [7, 14]], "prop51": []},
))


def verify_example(name: str, F: Field, slow: bool = False, out=None) -> int:
    out = out or sys.stdout
    if name not in REGISTRY:
        print(f"unknown example {name!r}; try list-examples", file=sys.stderr)
        return 2
    e = REGISTRY[name]
    expected = dict(e.expected)
    if slow:
        expected.update(e.slow_expected)
    got = e.compute(F, slow)
    bad = 0
    for key, want in expected.items():
        have = got.get(key)
        if have == want:
            print(f"  ok        {key}", file=out)
        else:
            bad += 1
            print(f"  MISMATCH  {key}\n    expected: {want}\n    computed: {have}", file=out)
    print(f"{name}: {'verified' if not bad else f'{bad} mismatches'} over {F!r}", file=out)
    return 0 if not bad else 1


# ---------------------------------------------------------------------------
# commands


def _cmd_list(args, F) -> int:
    for name, e in REGISTRY.items():
        extra = " [slow table available]" if e.slow_expected else ""
        print(f"{name:28s} {e.provenance:8s} {e.summary}{extra}")
    return 0


def _cmd_verify(args, F) -> int:
    return verify_example(args.name, F, args.slow)


def _cmd_validate(args, F) -> int:
    obj = parse_inputs(args.input, F)
    if not isinstance(obj, OrientedComplex):
        raise ParseError("validate needs a complex", args.input)
    rep = validate_pseudomanifold(obj)
    print(json.dumps({
        "ok": rep.ok, "pure": rep.is_pure, "ridges_in_two_facets": rep.ridge_condition,
        "orientations_cancel": rep.orientations_cancel, "strongly_connected": rep.strongly_connected,
        "notes": rep.notes,
    }, indent=1))
    return 0 if rep.ok else 1


def _cmd_ideal(args, F) -> int:
    obj = parse_inputs(args.input, F)
    if isinstance(obj, PolyIdeal):
        gens = obj.gb()
    elif isinstance(obj, OrientedComplex) and args.kind == "pseudomanifold":
        gens = pseudomanifold_ideal(obj, F).generators
    else:
        gens = toric_ideal(_configuration(obj), F).generators
    for g in gens:
        print(render(g))
    return 0


def _cmd_betti(args, F) -> int:
    obj = parse_inputs(args.input, F)
    if args.strand:
        Q = _quadratic_system(obj, F)
        s = strand.koszul_strand_betti(Q)
        print(json.dumps({"strand": s, "2lp": len(s)}) if args.json else f"linear strand: {s}")
        return 0
    if args.bound is None:
        raise ParseError("--hochster needs --bound")
    t = hochster_betti(_configuration(obj), args.bound, F, args.max_index)
    print(t.to_json() if args.json else emit_betti_diagram(t))
    return 0


def _cmd_strand(args, F) -> int:
    Q = _quadratic_system(parse_inputs(args.input, F), F)
    s = strand.koszul_strand_betti(Q)
    data = {"quadrics": Q.r, "strand": s, "2lp": len(s)}
    if args.syzygies:
        data["syzygies"] = [{"rank": r, "support": sp} for r, sp in _syzygy_summary(Q)]
    print(json.dumps(data, indent=1))
    return 0


def _cmd_witness(args, F) -> int:
    obj = parse_inputs(args.input, F)
    if args.bipyramid:
        if not isinstance(obj, OrientedComplex):
            raise ParseError("bipyramid scan needs a complex", args.input)
        Q = _quadratic_system(obj, F)
        certs = witness.bipyramid_scan(obj, Q)
        print(json.dumps([json.loads(c.to_json()) | {"apexes": c.extra["apexes"], "k": c.extra["k"]} for c in certs], indent=1))
        return 0
    Q = _quadratic_system(obj, F)
    cert = witness.variable_scroll_search(Q, args.q)
    if cert is None:
        print(json.dumps({"found": False, "q": args.q}))
        return 1
    print(cert.to_json())
    return 0


def _cmd_census(args, F) -> int:
    what = args.what
    if what == "feasible":
        for g, d in census.feasible_pairs(args.g_max):
            print(g, d)
    elif what == "genus7":
        print(census.genus_seven_diagram())
    elif what == "prop51":
        print(json.dumps(census.prop51_scan(args.r_max)))
    elif what == "polygons":
        rows = []
        for P in census.enumerate_polygons(args.box):
            rep = census.polygon_report(P, F, seed=args.seed)
            rows.append(rep.to_json())
        print(json.dumps(rows, indent=1))
        return 0 if all(r["status"] != "witness-not-found" for r in rows) else 1
    elif what == "pseudomanifolds":
        res = census.small_pseudomanifold_scan(args.max_vertices, F)
        print(json.dumps({
            "complexes": [
                {"name": e.complex.name, "facets": len(e.complex.facets), "strand": e.strand,
                 "witness": e.has_witness} for e in res["entries"]
            ],
            "counterexamples": res["counterexamples"],
        }, indent=1))
        return 0 if not res["counterexamples"] else 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="syzforge", description=__doc__)
    p.add_argument("--field", help="Q or a prime (default: SYZFORGE_FIELD or 32003)")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list-examples")
    s.set_defaults(func=_cmd_list)
    s = sub.add_parser("verify-example")
    s.add_argument("name")
    s.add_argument("--slow", action="store_true", help="also check full Betti tables marked slow")
    s.set_defaults(func=_cmd_verify)
    s = sub.add_parser("validate")
    s.add_argument("--input", required=True)
    s.set_defaults(func=_cmd_validate)
    s = sub.add_parser("ideal")
    s.add_argument("--input", required=True)
    s.add_argument("--kind", choices=["toric", "pseudomanifold"], default="toric")
    s.set_defaults(func=_cmd_ideal)
    s = sub.add_parser("betti")
    s.add_argument("--input", required=True)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--hochster", action="store_true", help="fiber-complex Betti numbers (default)")
    mode.add_argument("--strand", action="store_true", help="Koszul 2-linear strand only")
    s.add_argument("--bound", type=int)
    s.add_argument("--max-index", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=_cmd_betti)
    s = sub.add_parser("strand")
    s.add_argument("--input", required=True)
    s.add_argument("--syzygies", action="store_true")
    s.set_defaults(func=_cmd_strand)
    s = sub.add_parser("witness")
    s.add_argument("--input", required=True)
    s.add_argument("--q", type=int, default=3)
    s.add_argument("--bipyramid", action="store_true")
    s.set_defaults(func=_cmd_witness)
    s = sub.add_parser("census")
    s.add_argument("what", choices=["feasible", "genus7", "prop51", "polygons", "pseudomanifolds"])
    s.add_argument("--g-max", type=int, default=7)
    s.add_argument("--r-max", type=int, default=10**6)
    s.add_argument("--box", type=int, default=9)
    s.add_argument("--max-vertices", type=int, default=6)
    s.set_defaults(func=_cmd_census)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        F = field_from_spec(args.field)
    except ValueError as e:
        print(f"bad field: {e}", file=sys.stderr)
        return 2
    try:
        return args.func(args, F)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
