"""Command-line front end.

``tubehost run SCENE`` executes the queries of a scene file and writes a
JSON (or CSV) report; ``tubehost profile SCENE`` writes support-function
values over a direction grid as CSV plot data.

Exit codes: 0 when every verification passes, 1 when one fails, 2 on
malformed input (with a field or line diagnostic on stderr).
"""

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import algebra as alg
from .convex import (
    TOL,
    clip_radius,
    clipped_hausdorff_distance,
    is_subset,
    reconstruct_from_support,
    support_function,
    support_value,
)
from .errors import InvalidInputError, TubeHostError
from .sampling import generator, random_polyhedron
from .scene import SceneError, load_scene
from .suites import CHECKS, NEEDS_CONTEXT
from .tube import AbsoluteValueContext, TubePoint
from .tube import alpha as alpha_value

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


def _jsonable(value):
    """Turn numpy values into plain JSON types, infinities into the strings "inf"/"-inf"."""
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value + 0.0
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


# --- query runners -----------------------------------------------------------

class Runner:
    def __init__(self, scene, seed, tol_geom, tol_norm):
        self.scene = scene
        self.seed = seed
        self.tol_geom = tol_geom
        self.tol_norm = tol_norm
        self._C = None
        self._ctx = None

    @property
    def C(self):
        if self._C is None:
            self._C = self.scene.build_set(self.tol_geom)
        return self._C

    @property
    def ctx(self):
        if self._ctx is None:
            self._ctx = AbsoluteValueContext(self.C)
        return self._ctx

    def support(self, q, index):
        v = support_value(self.C, q["x"])
        return "exact", {"x": q["x"], "inf": v, "support_function": support_function(self.C, q["x"])}

    def alpha(self, q, index):
        s = TubePoint(q["re"], q["im"], self.ctx)
        return "exact", {"re": q["re"], "im": q["im"], "alpha": alpha_value(self.ctx, s)}

    def norm(self, q, index):
        terms = [(complex(*t["coef"]), TubePoint(t["re"], t["im"], self.ctx)) for t in q["terms"]]
        a = alg.AlgebraElement(self.ctx, terms)
        br = alg.norm(a, rel_tol=self.tol_norm, seed=self.seed)
        body = {"lower": br.lower, "upper": br.upper, "l1_bound": alg.l1_norm(a)}
        if br.exact:
            return "exact", {"value": br.lower, **body}
        return "bracketed", {**body, "converged": br.converged, "truncation": br.truncation}

    def momentum(self, q, index):
        states = [alg.SmoothState([(a["weight"], a["f"]) for a in atoms]) for atoms in q["states"]]
        ms = alg.momentum_set(self.ctx, states, q.get("directions", ()))
        return "exact", {"momenta": [alg.momentum(s) for s in states],
                         "hull": {"vertices": ms.hull.vertices, "rays": ms.hull.rays},
                         "recession_unwitnessed": ms.recession_unwitnessed}

    def reconstruct(self, q, index):
        D = reconstruct_from_support(self.C, q["epsilon"])
        R = clip_radius(self.C)
        return "exact", {"epsilon": q["epsilon"], "vertices": D.vertices, "rays": D.rays,
                         "contains_C": is_subset(self.C, D), "clip_radius": R,
                         "clipped_hausdorff": clipped_hausdorff_distance(self.C, D, R)}

    def spectrum1d(self, q, index):
        ctx = alg.half_plane_instance(q["m"])
        s = TubePoint([q["re"]], [q["im"]], ctx)
        return "exact", {"m": q["m"], "re": q["re"], "im": q["im"],
                         "alpha": alpha_value(ctx, s), "spectrum": [q["m"], float("inf")]}

    def verify(self, q, index):
        check = CHECKS[q["check"]]
        kwargs = {"tol_norm": self.tol_norm, "seed": self.seed}
        if "samples" in q:
            kwargs["samples"] = q["samples"]
        rng = generator(self.seed, index)
        if "random_dim" in q:
            sets = [random_polyhedron(rng, q["random_dim"], bounded=q.get("bounded"))
                    for _ in range(q["count"])]
        else:
            sets = [self.C]
        outcomes = []
        for C in sets:
            if q["check"] in NEEDS_CONTEXT:
                AbsoluteValueContext(C)  # fail early (input error) if B(C) has empty interior
            outcomes.append(check(C, rng, **kwargs))
        failed = [o for o in outcomes if not o.passed]
        provenance = "sampled" if any(o.provenance == "sampled" for o in outcomes) else "exact"
        body = {"check": q["check"], "passed": not failed,
                "violated": failed[0].violated if failed else None,
                "instances": len(outcomes), "failures": len(failed),
                "details": [o.details for o in outcomes]}
        return provenance, body


def run_scene(scene, seed=0, tol_geom=TOL, tol_norm=alg.TOL_NORM, timing=False):
    """Execute all queries; returns ``(report_dict, exit_code)``.

    Raises :class:`SceneError` for input problems found while running.
    """
    runner = Runner(scene, seed, tol_geom, tol_norm)
    if scene.has_set:
        runner.C  # validate the set even if no query uses it
    results = []
    failed = 0
    for i, q in enumerate(scene.queries):
        start = time.perf_counter()
        try:
            provenance, body = getattr(runner, q["type"])(q, i)
        except SceneError:
            raise
        except (TubeHostError, ValueError) as exc:
            raise SceneError(f"$.queries[{i}]", str(exc)) from exc
        entry = {"index": i, "type": q["type"], "provenance": provenance, **body}
        if timing:
            entry["wall_time_s"] = time.perf_counter() - start
        if q["type"] == "verify" and not body["passed"]:
            failed += 1
        results.append(entry)
    report = {
        "seed": seed,
        "tolerances": {"geom": tol_geom, "norm": tol_norm},
        "generator": "numpy Philox keyed by (seed, query index)",
        "results": results,
        "verifications_failed": failed,
    }
    return _jsonable(report), (EXIT_FAILED if failed else EXIT_OK)


def report_to_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "type", "provenance", "field", "value"])
    for r in report["results"]:
        for key, value in r.items():
            if key in ("index", "type", "provenance"):
                continue
            text = value if isinstance(value, str) else json.dumps(value)
            w.writerow([r["index"], r["type"], r["provenance"], key, text])
    return buf.getvalue()


# --- support profile -----------------------------------------------------------

def direction_grid(dim, points):
    """Unit directions: {-1, 1} in 1-D, ``points`` angles in 2-D, a Fibonacci sphere in 3-D."""
    if dim == 1:
        return np.array([[-1.0], [1.0]])
    if dim == 2:
        t = 2.0 * np.pi * np.arange(points) / points
        return np.column_stack([np.cos(t), np.sin(t)])
    if dim == 3:
        k = np.arange(points) + 0.5
        z = 1.0 - 2.0 * k / points
        phi = np.pi * (3.0 - np.sqrt(5.0)) * k
        r = np.sqrt(1.0 - z * z)
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise InvalidInputError(f"support profiles need dimension 1, 2 or 3, got {dim}")


def _fmt(x):
    return "inf" if math.isinf(x) else repr(float(x) + 0.0)


def emit_support_profile(C, points=64):
    """CSV text with columns ``d1..dn, s_C``; ``inf`` where the direction leaves B(C)."""
    grid = direction_grid(C.dim, points)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"d{i + 1}" for i in range(C.dim)] + ["s_C"])
    for d in grid:
        w.writerow([_fmt(v) for v in d] + [_fmt(support_function(C, d))])
    return buf.getvalue()


# --- entry point -----------------------------------------------------------------

def _nonneg_int(text):
    v = int(text)
    if v < 0 or v >= 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _pos_float(text):
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="tubehost", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute the queries of a scene file")
    r.add_argument("scene")
    r.add_argument("--seed", type=_nonneg_int, default=0)
    r.add_argument("--tol-geom", type=_pos_float, default=TOL)
    r.add_argument("--tol-norm", type=_pos_float, default=alg.TOL_NORM)
    r.add_argument("--out", default="-", help="output path (default: stdout)")
    r.add_argument("--format", choices=("json", "csv"), default="json")
    r.add_argument("--timing", action="store_true",
                   help="add wall times to the report (makes it nondeterministic)")

    pr = sub.add_parser("profile", help="support function over a direction grid, as CSV")
    pr.add_argument("scene")
    pr.add_argument("--points", type=int, default=64, help="grid size in 2-D and 3-D")
    pr.add_argument("--tol-geom", type=_pos_float, default=TOL)
    pr.add_argument("--out", default="-")
    return p


def _write(text, path):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        scene = load_scene(args.scene)
        if args.command == "profile":
            if args.points < 1:
                raise SceneError("--points", "must be positive")
            try:
                text = emit_support_profile(scene.build_set(args.tol_geom), args.points)
            except SceneError:
                raise
            except (TubeHostError, ValueError) as exc:
                raise SceneError("$.dim", str(exc)) from exc
            _write(text, args.out)
            return EXIT_OK
        report, code = run_scene(scene, args.seed, args.tol_geom, args.tol_norm, args.timing)
    except SceneError as exc:
        print(f"tubehost: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = report_to_csv(report) if args.format == "csv" else json.dumps(report, indent=2) + "\n"
    _write(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
