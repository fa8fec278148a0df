"""Scene files: a convex set C plus a list of queries, stored as JSON.

Layout::

    {"dim": 2,
     "set": {"vertices": [[0, 1]], "rays": [[1, 0], [0, 1]],
             "halfspaces": [{"normal": [1, 0], "offset": 0}]},
     "queries": [{"type": "support", "x": [1, 1]}, ...]}

``set`` may give vertices (with optional rays), halfspaces, or both; when
both are given they must describe the same set.  Every parse error is an
:class:`InvalidInputError` whose message starts with the offending field
path, for instance ``queries[2].x``.
"""

import json
import math
from dataclasses import dataclass, field

from .convex import PolyhedralSet, set_equal
from .errors import InvalidInputError, TubeHostError

VERIFY_CHECKS = (
    "bcdual",
    "boundedness",
    "absolute_value",
    "single_term_norm",
    "homomorphism",
    "cstar_identity",
    "momentum",
    "reconstruction",
    "minimizer",
)


class SceneError(InvalidInputError):
    """Malformed scene; ``path`` names the field, ``line`` the JSON line when known."""

    def __init__(self, path, message, line=None):
        self.path = path
        self.line = line
        where = path if line is None else f"line {line}: {path}"
        super().__init__(f"{where}: {message}")


# --- field readers ---------------------------------------------------------

def _num(value, path):
    if isinstance(value, bool):
        raise SceneError(path, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise SceneError(path, "must be finite")
        return float(value)
    raise SceneError(path, f"expected a number, got {type(value).__name__}")


def _int(value, path, lo=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SceneError(path, "expected an integer")
    if lo is not None and value < lo:
        raise SceneError(path, f"must be at least {lo}")
    return value


def _vec(value, path, dim):
    if not isinstance(value, list):
        raise SceneError(path, "expected a list of numbers")
    if dim is not None and len(value) != dim:
        raise SceneError(path, f"expected {dim} coordinates, got {len(value)}")
    return [_num(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _vecs(value, path, dim):
    if not isinstance(value, list):
        raise SceneError(path, "expected a list of vectors")
    return [_vec(v, f"{path}[{i}]", dim) for i, v in enumerate(value)]


def _complex(value, path):
    """A number, or a pair ``[re, im]``."""
    if isinstance(value, list):
        if len(value) != 2:
            raise SceneError(path, "a complex number is [re, im]")
        return [_num(value[0], f"{path}[0]"), _num(value[1], f"{path}[1]")]
    return [_num(value, path), 0.0]


def _obj(value, path):
    if not isinstance(value, dict):
        raise SceneError(path, "expected an object")
    return value


def _check_keys(obj, path, allowed):
    extra = sorted(set(obj) - set(allowed))
    if extra:
        raise SceneError(f"{path}.{extra[0]}", "unknown field")


def _required(obj, key, path):
    if key not in obj:
        raise SceneError(f"{path}.{key}", "missing")
    return obj[key]


# --- queries ---------------------------------------------------------------

def _q_support(q, path, dim):
    return {"x": _vec(_required(q, "x", path), f"{path}.x", dim)}


def _q_alpha(q, path, dim):
    return {"re": _vec(_required(q, "re", path), f"{path}.re", dim),
            "im": _vec(_required(q, "im", path), f"{path}.im", dim)}


def _q_norm(q, path, dim):
    terms = _required(q, "terms", path)
    if not isinstance(terms, list):
        raise SceneError(f"{path}.terms", "expected a list")
    out = []
    for i, t in enumerate(terms):
        tp = f"{path}.terms[{i}]"
        t = _obj(t, tp)
        _check_keys(t, tp, ("coef", "re", "im"))
        out.append({"coef": _complex(t.get("coef", 1.0), f"{tp}.coef"),
                    "re": _vec(_required(t, "re", tp), f"{tp}.re", dim),
                    "im": _vec(_required(t, "im", tp), f"{tp}.im", dim)})
    return {"terms": out}


def _q_momentum(q, path, dim):
    states = _required(q, "states", path)
    if not isinstance(states, list) or not states:
        raise SceneError(f"{path}.states", "expected a nonempty list of states")
    out = []
    for i, s in enumerate(states):
        sp = f"{path}.states[{i}]"
        if not isinstance(s, list) or not s:
            raise SceneError(sp, "a state is a nonempty list of atoms")
        atoms = []
        for j, a in enumerate(s):
            ap = f"{sp}[{j}]"
            a = _obj(a, ap)
            _check_keys(a, ap, ("weight", "f"))
            atoms.append({"weight": _num(_required(a, "weight", ap), f"{ap}.weight"),
                          "f": _vec(_required(a, "f", ap), f"{ap}.f", dim)})
        out.append(atoms)
    res = {"states": out}
    if "directions" in q:
        res["directions"] = _vecs(q["directions"], f"{path}.directions", dim)
    return res


def _q_reconstruct(q, path, dim):
    eps = _num(_required(q, "epsilon", path), f"{path}.epsilon")
    if not 0.0 < eps < 1.0:
        raise SceneError(f"{path}.epsilon", "must lie in (0, 1)")
    return {"epsilon": eps}


def _q_spectrum1d(q, path, dim):
    return {"m": _num(_required(q, "m", path), f"{path}.m"),
            "re": _num(q.get("re", 0.0), f"{path}.re"),
            "im": _num(q.get("im", 1.0), f"{path}.im")}


def _q_verify(q, path, dim):
    check = _required(q, "check", path)
    if check not in VERIFY_CHECKS:
        raise SceneError(f"{path}.check", f"unknown check {check!r}; expected one of {', '.join(VERIFY_CHECKS)}")
    res = {"check": check}
    if "random_dim" in q:
        res["random_dim"] = _int(q["random_dim"], f"{path}.random_dim", lo=1)
        if res["random_dim"] > 4:
            raise SceneError(f"{path}.random_dim", "random instances are drawn in dimensions 1 to 4")
        res["count"] = _int(q.get("count", 1), f"{path}.count", lo=1)
        if "bounded" in q:
            if not isinstance(q["bounded"], bool):
                raise SceneError(f"{path}.bounded", "expected true or false")
            res["bounded"] = q["bounded"]
    elif "count" in q or "bounded" in q:
        raise SceneError(path, "count and bounded need random_dim")
    if "samples" in q:
        res["samples"] = _int(q["samples"], f"{path}.samples", lo=1)
    return res


QUERY_TYPES = {
    "support": (_q_support, ("x",)),
    "alpha": (_q_alpha, ("re", "im")),
    "norm": (_q_norm, ("terms",)),
    "momentum": (_q_momentum, ("states", "directions")),
    "reconstruct": (_q_reconstruct, ("epsilon",)),
    "spectrum1d": (_q_spectrum1d, ("m", "re", "im")),
    "verify": (_q_verify, ("check", "random_dim", "count", "bounded", "samples")),
}

# query types that need the scene's set
_NEEDS_SET = {"support", "alpha", "norm", "momentum", "reconstruct"}


def _parse_query(q, path, dim, has_set):
    q = _obj(q, path)
    kind = _required(q, "type", path)
    if kind not in QUERY_TYPES:
        raise SceneError(f"{path}.type", f"unknown query type {kind!r}")
    reader, fields = QUERY_TYPES[kind]
    _check_keys(q, path, ("type",) + fields)
    body = reader(q, path, dim)
    if not has_set and (kind in _NEEDS_SET or (kind == "verify" and "random_dim" not in body)):
        raise SceneError(path, "this query needs the scene to define 'set'")
    return {"type": kind, **body}


# --- the scene -------------------------------------------------------------

@dataclass
class Scene:
    dim: int
    vertices: list | None = None
    rays: list | None = None
    # list of [normal, offset] pairs
    halfspaces: list | None = None
    queries: list = field(default_factory=list)

    @property
    def has_set(self):
        return self.vertices is not None or self.halfspaces is not None

    @classmethod
    def from_dict(cls, data):
        data = _obj(data, "$")
        _check_keys(data, "$", ("dim", "set", "queries"))
        dim = _int(_required(data, "dim", "$"), "$.dim", lo=1)
        vertices = rays = halfspaces = None
        if "set" in data:
            s = _obj(data["set"], "$.set")
            _check_keys(s, "$.set", ("vertices", "rays", "halfspaces"))
            if "vertices" in s:
                vertices = _vecs(s["vertices"], "$.set.vertices", dim)
                if not vertices:
                    raise SceneError("$.set.vertices", "must not be empty")
            if "rays" in s:
                if vertices is None:
                    raise SceneError("$.set.rays", "rays need vertices")
                rays = _vecs(s["rays"], "$.set.rays", dim)
            if "halfspaces" in s:
                hs = s["halfspaces"]
                if not isinstance(hs, list):
                    raise SceneError("$.set.halfspaces", "expected a list")
                halfspaces = []
                for i, h in enumerate(hs):
                    hp = f"$.set.halfspaces[{i}]"
                    h = _obj(h, hp)
                    _check_keys(h, hp, ("normal", "offset"))
                    halfspaces.append([_vec(_required(h, "normal", hp), f"{hp}.normal", dim),
                                       _num(_required(h, "offset", hp), f"{hp}.offset")])
            if vertices is None and halfspaces is None:
                raise SceneError("$.set", "give vertices or halfspaces")
        queries = data.get("queries", [])
        if not isinstance(queries, list):
            raise SceneError("$.queries", "expected a list")
        has_set = vertices is not None or halfspaces is not None
        parsed = [_parse_query(q, f"$.queries[{i}]", dim, has_set) for i, q in enumerate(queries)]
        return cls(dim, vertices, rays, halfspaces, parsed)

    def to_dict(self):
        out = {"dim": self.dim}
        if self.has_set:
            s = {}
            if self.vertices is not None:
                s["vertices"] = self.vertices
            if self.rays is not None:
                s["rays"] = self.rays
            if self.halfspaces is not None:
                s["halfspaces"] = [{"normal": n, "offset": b} for n, b in self.halfspaces]
            out["set"] = s
        out["queries"] = self.queries
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def build_set(self, tol):
        """The PolyhedralSet of the scene; raises SceneError if the two given forms disagree."""
        if not self.has_set:
            raise SceneError("$.set", "missing")
        try:
            H = None
            if self.halfspaces is not None:
                H = PolyhedralSet.from_halfspaces([n for n, _ in self.halfspaces],
                                                  [b for _, b in self.halfspaces], dim=self.dim, tol=tol)
            if self.vertices is None:
                return H
            C = PolyhedralSet(self.vertices, self.rays, dim=self.dim, tol=tol)
        except TubeHostError as exc:
            raise SceneError("$.set", str(exc)) from exc
        if H is not None and not set_equal(C, H):
            raise SceneError("$.set.halfspaces", "does not describe the same set as the vertices and rays")
        return C


def parse_scene(text):
    """Parse scene JSON text; syntax errors carry the line number."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError("$", exc.msg, line=exc.lineno) from exc
    return Scene.from_dict(data)


def load_scene(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SceneError("$", f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise SceneError("$", f"{path} is not UTF-8") from exc
    return parse_scene(text)
