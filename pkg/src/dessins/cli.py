"""Command-line interface.

Subcommands:

* ``info PATH`` — topology, passport and automorphism group of a dessin;
* ``metric`` — build one of the four sphere metrics for a symmetry group
  (given as a type tag, generator matrices, or a dessin plus generators)
  and emit a sampled grid with a JSON run report;
* ``verify [SCOPE]`` — run the property suites (groups, metrics, sc, all);
* ``sc-demo`` — triangle-map geometry and boundary correspondence as JSON.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 cyclic-group exclusion, 4 genus mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dessin as dd
from . import metrics as mt
from . import schwarz_christoffel as sc
from .errors import (CyclicGroupUnsupported, Disconnected, GenusMismatch,
                     MalformedInput, NotAPermutation)
from .finite_groups import (closure, conjugator_well_defined, is_in_SO3)
from .grouptypes import parse_group_tag
from .moebius import MoebiusTransform, standard_generators
from .verification import run_checks

_CONSTRUCTIONS = {
    "average": mt.averaged_metric,
    "conjugate": mt.conjugated_metric,
    "hermitian": mt.hermitian_metric,
    "orbit": mt.orbit_triple_metric,
}


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc


def cmd_info(args) -> int:
    d = dd.parse_dessin(_read_text(args.path))
    g = dd.genus(d)
    p = dd.passport(d)
    tri = dd.triangulate(d)
    aut = dd.automorphisms(d)

    def fmt(ms):
        return "[" + ",".join(str(x) for x in ms) + "]"

    print(f"darts: {d.dart_count}")
    print(f"genus: {g}")
    print(f"passport: degree {p.degree}; white {fmt(p.white_degrees)}; "
          f"black {fmt(p.black_degrees)}; faces {fmt(p.face_half_degrees)}")
    print(f"triangulation: {tri.triangle_count} triangles, "
          f"{tri.butterfly_count} butterflies")
    print(f"automorphisms: order {aut.order}, type {dd.classify_perm_group(aut)}")
    if g != 0:
        print(f"note: genus {g} surface; the genus-0 metric constructions "
              "(average/conjugate/hermitian/orbit) do not apply")
    return 0


def _load_group(args):
    """Group from --group tag or --generators file, with the dessin context."""
    summary = None
    if args.path is not None:
        d = dd.parse_dessin(_read_text(args.path))
        g = dd.genus(d)
        if g != 0:
            raise GenusMismatch(f"dessin has genus {g}; metrics need genus 0")
        p = dd.passport(d)
        aut = dd.automorphisms(d)
        summary = {
            "darts": d.dart_count,
            "genus": g,
            "passport": {"degree": p.degree,
                         "white": list(p.white_degrees),
                         "black": list(p.black_degrees),
                         "faces": list(p.face_half_degrees)},
            "automorphism_order": aut.order,
            "automorphism_type": str(dd.classify_perm_group(aut)),
        }
    if args.group:
        gens = standard_generators(parse_group_tag(args.group))
    elif args.generators:
        data = json.loads(_read_text(args.generators))
        entries = data["elements"] if isinstance(data, dict) else data
        gens = [MoebiusTransform.from_entries(e) for e in entries]
    else:
        raise MalformedInput(
            "a Moebius realization is required: pass --group TAG or --generators FILE")
    group = closure(gens)
    warnings = []
    if summary is not None and group.order != summary["automorphism_order"]:
        warnings.append(
            f"group order {group.order} differs from the dessin's automorphism "
            f"order {summary['automorphism_order']}")
    return group, summary, warnings


def cmd_metric(args) -> int:
    group, dessin_summary, warnings = _load_group(args)
    build = _CONSTRUCTIONS[args.construction]
    if group.type_tag.is_cyclic and args.construction == "orbit":
        warnings.append("cyclic symmetry: the orbit construction returns the round metric")
    if args.construction == "orbit":
        warnings.append("orbit triples are anchored at (0, 1, infinity), "
                        "ordered by decreasing orbit size")
    metric = build(group)

    rows = mt.metric_grid_rows(metric, n=args.grid, step=args.step,
                               workers=args.workers)
    out_path = args.out or f"metric_grid.{args.format}"
    if args.format == "csv":
        payload = mt.format_grid_csv(rows)
    else:
        payload = json.dumps(mt.grid_rows_as_json(rows), sort_keys=True, indent=1) + "\n"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(payload)

    curvatures = [row[4] for row in rows]
    diagnostics = {
        "invariance_defect": mt.invariance_defect(metric, group, 200),
        "curvature_min": min(curvatures),
        "curvature_max": max(curvatures),
        "curvature_spread": max(curvatures) - min(curvatures),
    }
    if args.construction == "conjugate":
        diagnostics["well_definedness_distance"] = conjugator_well_defined(
            group, trials=2, seed=args.seed)
        if mt.metric_distance(metric, mt.round_metric(), 200) < 1e-9:
            warnings.append("metric coincides with the round sphere metric")
    if is_in_SO3(group, 1e-8) and args.construction in ("average", "hermitian"):
        warnings.append("group already consists of rotations; metric is round")

    report = {
        "construction": args.construction,
        "group": {"order": group.order, "type": str(group.type_tag)},
        "dessin": dessin_summary,
        "grid": {"path": out_path, "format": args.format, "size": args.grid,
                 "step": args.step, "rows": len(rows)},
        "seed": args.seed,
        "diagnostics": diagnostics,
        "warnings": warnings,
    }
    print(json.dumps(report, sort_keys=True, indent=2))
    return 0


def cmd_verify(args) -> int:
    results = run_checks(args.scope, seed=args.seed, perturb=args.perturb)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def cmd_sc_demo(args) -> int:
    tm = sc.triangle_map()
    payload = {
        "triangle": {
            "prevertices": [0.0, -1.0, "inf"],
            "vertices": [[v.real, v.imag] for v in tm.vertices],
            "angles": list(tm.angles),
            "constant": [tm.constant.real, tm.constant.imag],
        },
        "boundary_correspondence": sc.boundary_correspondence(args.samples),
    }
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dessins",
        description="dessins, finite Moebius groups and canonical sphere metrics")
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="topology report for a dessin file")
    p_info.add_argument("path")
    p_info.set_defaults(func=cmd_info)

    p_metric = sub.add_parser("metric", help="build and sample a canonical metric")
    p_metric.add_argument("path", nargs="?", default=None,
                          help="optional dessin file (genus 0 required)")
    p_metric.add_argument("--group", default=None,
                          help="group type tag, e.g. C5, D3, A4, S4, A5")
    p_metric.add_argument("--generators", default=None,
                          help="JSON file with generator matrices")
    p_metric.add_argument("--construction", default="conjugate",
                          choices=sorted(_CONSTRUCTIONS))
    p_metric.add_argument("--grid", type=int, default=40, metavar="N")
    p_metric.add_argument("--step", type=float, default=1e-3, metavar="H")
    p_metric.add_argument("--seed", type=int, default=0)
    p_metric.add_argument("--out", default=None, metavar="PATH")
    p_metric.add_argument("--format", default="csv", choices=("csv", "json"))
    p_metric.add_argument("--workers", type=int, default=1)
    p_metric.set_defaults(func=cmd_metric)

    p_verify = sub.add_parser("verify", help="run the property suites")
    p_verify.add_argument("scope", nargs="?", default="all",
                          choices=("groups", "metrics", "sc", "all"))
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--perturb", type=float, default=None,
                          help="test hook: scale one generator entry to force failures")
    p_verify.set_defaults(func=cmd_verify)

    p_demo = sub.add_parser("sc-demo", help="triangle map geometry as JSON")
    p_demo.add_argument("--samples", type=int, default=30)
    p_demo.add_argument("--out", default=None)
    p_demo.set_defaults(func=cmd_sc_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MalformedInput, NotAPermutation, Disconnected) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2
    except CyclicGroupUnsupported as exc:
        print(f"error: CyclicGroupUnsupported: {exc}", file=sys.stderr)
        return 3
    except GenusMismatch as exc:
        print(f"error: GenusMismatch: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
