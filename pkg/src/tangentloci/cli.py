"""Command-line front end.

    tangentloci tangents INPUT.json      common tangents to four spheres
    tangentloci demo NAME                reye | double5 | basket-pair | quadrilateral
    tangentloci selfcheck                invariant suite

Exit codes: 0 success, 1 input error, 2 when the finite solver cannot account
for all twelve solutions.
"""

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import baskets, interchange, selfcheck, spheres
from .config import TOL, TOL_CLUSTER
from .errors import DefectiveCount, TangentLociError

EXIT_OK, EXIT_INPUT, EXIT_DEFECTIVE = 0, 1, 2
DEMOS = ("reye", "double5", "basket-pair", "quadrilateral")


@dataclass(frozen=True)
class RunConfig:
    tol: float = TOL
    tol_cluster: float = TOL_CLUSTER
    seed: int = 0
    format: str = "json"
    emit_obj: str = None
    seed_given: bool = False
    tol_given: bool = False

    def __post_init__(self):
        for name in ("tol", "tol_cluster"):
            x = getattr(self, name)
            if not 0.0 < x < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {x}")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.format not in ("json", "csv"):
            raise ValueError("format is json or csv")


def _seed_from(args) -> tuple:
    if args.seed is not None:
        return args.seed, True
    env = os.environ.get("TANGENTLOCI_SEED")
    if env not in (None, ""):
        return int(env), False
    return 0, False


def config_from_args(args) -> RunConfig:
    seed, given = _seed_from(args)
    return RunConfig(tol=args.tol if args.tol is not None else TOL,
                     tol_cluster=args.tol_cluster, seed=seed, format=args.format,
                     emit_obj=getattr(args, "emit_obj", None), seed_given=given,
                     tol_given=args.tol is not None)


def _err(msg: str) -> None:
    print(f"tangentloci: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# tangents


def _read(path: str):
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return json.loads(text)


def solve_instance(inst: dict, cfg: RunConfig):
    """(json record, result or None, exit code) for one parsed instance."""
    seed = cfg.seed if cfg.seed_given or "seed" not in inst else inst["seed"]
    tol = cfg.tol if cfg.tol_given or "tol" not in inst else inst["tol"]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            res = spheres.solve(inst["spheres"], seed, tol, cfg.tol_cluster)
        except DefectiveCount as exc:
            partial = spheres.SolveResult("defective", list(exc.result or []), None, seed,
                                          tol, cfg.tol_cluster)
            rec = interchange.result_to_json(partial)
            rec["error"] = str(exc)
            return rec, partial, EXIT_DEFECTIVE
        except TangentLociError as exc:
            return {"regime": "error", "error": f"{type(exc).__name__}: {exc}"}, None, EXIT_INPUT
    return interchange.result_to_json(res), res, EXIT_OK


def cmd_tangents(path: str, cfg: RunConfig) -> int:
    try:
        doc = _read(path)
        instances = interchange.parse_instances(doc)
    except (OSError, ValueError, TangentLociError) as exc:
        _err(f"cannot read {path}: {exc}")
        return EXIT_INPUT
    records, results, code = [], [], EXIT_OK
    for inst in instances:
        rec, res, c = solve_instance(inst, cfg)
        records.append(rec)
        results.append((inst, res))
        code = max(code, c)
        if "error" in rec:
            _err(rec["error"])
    if cfg.format == "csv":
        sys.stdout.write(interchange.results_to_csv(records))
    else:
        out = records if isinstance(doc, list) else records[0]
        sys.stdout.write(interchange.dumps(out) + "\n")
    if cfg.emit_obj:
        _emit_obj(cfg.emit_obj, results)
    return code


def _emit_obj(path: str, results) -> None:
    root, ext = os.path.splitext(path)
    for k, (inst, res) in enumerate(results):
        target = path if len(results) == 1 else f"{root}_{k}{ext or '.obj'}"
        lines = interchange.real_lines(res) if res is not None else []
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(interchange.to_obj(inst["spheres"], lines))


# ---------------------------------------------------------------------------
# demos


def _demo_reye(cfg: RunConfig) -> dict:
    r = baskets.standard_double_four()
    pdeg, ldeg, ok = baskets.reye_incidence(r)
    wit = [baskets.is_basket_pair(q, b, cfg.tol) for q in r.q for b in r.b]
    ranks = [int(x.rank_profile(cfg.tol).rank) for _, x in r.points]
    return {
        "demo": "reye",
        "points": len(r.points), "lines": len(r.lines), "ok": bool(ok),
        "point_degrees": pdeg, "line_degrees": ldeg, "point_ranks": ranks,
        "basket_witnesses": sum(w is not None for w in wit),
        "max_witness_residual": max(w.residual for w in wit if w is not None),
        "point_labels": [lab for lab, _ in r.points],
        "line_labels": [lab for lab, _ in r.lines],
        "configuration": {
            **interchange.configuration_to_json(
                {"q": r.q, "b": r.b, "d": r.d, "points": [x for _, x in r.points]}),
            "lines": [[interchange.quadric_to_json(x) for x in pair] for _, pair in r.lines],
            "incidence": r.incidence.astype(int).tolist(),
        },
    }


def _demo_double5(cfg: RunConfig) -> dict:
    q, b, rep = baskets.double_five(cfg.tol, cfg.seed)
    return {
        "demo": "double5",
        "pencils_with_rank_one": f"{rep.count}/{rep.found.size}",
        "found": rep.found.astype(int).tolist(),
        "max_residual": float(np.nanmax(rep.residuals)) if rep.count else None,
        "configuration": interchange.configuration_to_json({"q": q, "b": b}),
    }


def _demo_basket_pair(cfg: RunConfig) -> dict:
    b = np.diag([1.0, 1.0, -1.0, -1.0])
    q = np.diag([1.0, 1.0, 1.0, -1.0])
    w = baskets.is_basket_pair(b, q, cfg.tol, cfg.seed)
    return {
        "demo": "basket-pair",
        "basket": interchange.quadric_to_json(b),
        "quadric": interchange.quadric_to_json(q),
        "witness": None if w is None else {
            "location": interchange.complex_pairs(w.location.z),
            "d": interchange.quadric_to_json(w.d),
            "residual": w.residual,
        },
    }


def _demo_quadrilateral(cfg: RunConfig) -> dict:
    r = baskets.standard_double_four()
    plane = r.b[1:]
    cq = baskets.construct_typical_quadrilateral(r.d, plane, cfg.tol)
    rec = baskets.reconstruct_tetrahedron(cq)
    err = max(min(x.distance(y) for y in rec) for x in r.d)
    labels = {}
    for pair, v in cq.vertices.items():
        best = min(r.points, key=lambda p: p[1].distance(v))
        labels[f"{pair[0] + 1}{pair[1] + 1}"] = best[0]
    inc = cq.incidence()
    return {
        "demo": "quadrilateral",
        "classification": cq.classification,
        "vertex_ranks": {f"{i + 1}{j + 1}": int(p.rank) for (i, j), p in cq.ranks.items()},
        "vertices_as_reye_points": labels,
        "vertices_per_line": [int(x) for x in inc.sum(axis=1)],
        "lines_per_vertex": [int(x) for x in inc.sum(axis=0)],
        "reconstruction_error": float(err),
    }


_DEMO_FUNCS = {"reye": _demo_reye, "double5": _demo_double5,
               "basket-pair": _demo_basket_pair, "quadrilateral": _demo_quadrilateral}


def _flatten(prefix: str, obj, rows: list) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, rows)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append({"key": prefix, "value": obj})


def cmd_demo(name: str, cfg: RunConfig) -> int:
    fn = _DEMO_FUNCS.get(name)
    if fn is None:
        _err(f"unknown demo {name!r}; available: {', '.join(DEMOS)}")
        return EXIT_INPUT
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = fn(cfg)
    if cfg.format == "csv":
        rows = []
        _flatten("", out, rows)
        sys.stdout.write(interchange.rows_to_csv(["key", "value"], rows))
    else:
        sys.stdout.write(interchange.dumps(out) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# selfcheck


def cmd_selfcheck(cfg: RunConfig, names=None) -> int:
    checks = selfcheck.run(cfg.seed, cfg.tol, cfg.tol_cluster, names)
    failed = [c["name"] for c in checks if not c["ok"]]
    if cfg.format == "csv":
        cols = ["name", "ok", "value", "threshold", "error"]
        sys.stdout.write(interchange.rows_to_csv(cols, checks))
    else:
        summary = {"seed": cfg.seed, "tol": cfg.tol, "tol_cluster": cfg.tol_cluster,
                   "passed": len(checks) - len(failed), "failed": failed, "checks": checks}
        sys.stdout.write(interchange.dumps(summary) + "\n")
    return EXIT_OK if not failed else EXIT_INPUT


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help=f"rank and regime tolerance (default {TOL:g})")
    common.add_argument("--tol-cluster", type=float, default=TOL_CLUSTER,
                        help=f"root clustering radius (default {TOL_CLUSTER:g})")
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $TANGENTLOCI_SEED, else 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="tangentloci", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    t = sub.add_parser("tangents", parents=[common], help="common tangents to four spheres")
    t.add_argument("input", help="JSON file with one instance or a list of them; - for stdin")
    t.add_argument("--emit-obj", metavar="PATH", help="write spheres and real tangents as OBJ")
    d = sub.add_parser("demo", parents=[common], help="run a configuration demo")
    d.add_argument("name", help=", ".join(DEMOS))
    s = sub.add_parser("selfcheck", parents=[common], help="run the invariant suite")
    s.add_argument("--only", nargs="*", metavar="CHECK", help="run only the named checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
    if args.command == "tangents":
        return cmd_tangents(args.input, cfg)
    if args.command == "demo":
        return cmd_demo(args.name, cfg)
    return cmd_selfcheck(cfg, args.only)


if __name__ == "__main__":
    sys.exit(main())
