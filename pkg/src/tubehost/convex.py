"""Polyhedral convex analysis in V = R^n and its dual.

Points of V and of V' are both plain 1-D numpy arrays; the pairing is the
dot product.  A :class:`PolyhedralSet` is a nonempty closed convex subset of
V' kept in generator form (vertices plus rays) and, when the dimension allows
conversion, in halfspace form ``{a : normals @ a >= offsets}``.
"""

import math
from functools import cached_property

import numpy as np
from scipy.optimize import linprog, minimize, nnls

from . import _dd
from ._dd import N_DD
from .errors import (
    DegenerateConeError,
    DimensionMismatchError,
    EmptySetError,
    InvalidInputError,
    UnboundedBelowError,
    UnsupportedDimensionError,
)

#: geometric tolerance for every membership / consistency test
TOL = 1e-9


def as_point(x, dim=None, name="point"):
    """Validate ``x`` as a finite 1-D float array, optionally of length ``dim``."""
    if type(x) is np.ndarray and not x.flags.writeable and x.dtype == np.float64 and x.ndim == 1:
        # already validated by an earlier call (validated arrays are frozen)
        if dim is not None and x.size != dim:
            raise DimensionMismatchError(f"{name} has dimension {x.size}, expected {dim}")
        return x
    arr = np.array(x, dtype=float).reshape(-1)
    if arr.size == 0:
        raise InvalidInputError(f"{name} has no coordinates")
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name} has non-finite entries")
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"{name} has dimension {arr.size}, expected {dim}")
    arr.setflags(write=False)
    return arr


def _as_rows(rows, dim):
    arr = np.array(rows if rows is not None else [], dtype=float)
    if arr.size == 0:
        return np.zeros((0, dim))
    arr = arr.reshape(-1, dim) if arr.ndim == 1 and dim == 1 else np.atleast_2d(arr)
    if arr.shape[1] != dim:
        raise DimensionMismatchError(f"rows have dimension {arr.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("non-finite coordinates")
    return arr


def _scale(x):
    return max(1.0, math.sqrt(float(x @ x)))


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=float) + 0.0
    arr.setflags(write=False)
    return arr


def _dedupe_points(P, tol):
    out = []
    for p in P:
        if not any(np.linalg.norm(p - q) <= tol * _scale(p) for q in out):
            out.append(p)
    return np.array(out).reshape(-1, P.shape[1])


def _unit_rows(R, tol):
    norms = np.linalg.norm(R, axis=1)
    if np.any(norms <= tol):
        raise InvalidInputError("rays must be nonzero")
    return R / norms[:, None]


def _hform_from_generators(V, R, tol):
    """Halfspace form of conv(V) + cone(R) through the homogenized cone."""
    n = V.shape[1]
    G = np.vstack([np.hstack([V, np.ones((len(V), 1))]),
                   np.hstack([R, np.zeros((len(R), 1))])])
    F = _dd.cone_facets(G, n + 1, tol)
    normals, offsets = [], []
    for row in F:
        a, c = row[:n], row[n]
        na = np.linalg.norm(a)
        if na <= tol:
            continue  # the facet t >= 0 of the homogenization
        normals.append(a / na)
        offsets.append(-c / na)
    return np.array(normals).reshape(-1, n), np.array(offsets, dtype=float)


def _vform_from_halfspaces(N, b, tol):
    """Generator form of {a : N a >= b}; returns (vertices, rays, lineality_dim)."""
    n = N.shape[1]
    A = np.vstack([np.hstack([N, -b[:, None]]), np.eye(n + 1)[-1:]])
    lin, rays = _dd.cone_generators(A, n + 1, tol)
    verts, dirs = [], []
    for r in rays:
        t = r[n]
        if t > tol:
            verts.append(r[:n] / t)
        else:
            dirs.append(r[:n] / np.linalg.norm(r[:n]))
    for l in lin:
        d = l[:n] / np.linalg.norm(l[:n])
        dirs.extend([d, -d])
    if not verts:
        raise EmptySetError("halfspace system is infeasible")
    return (np.array(verts).reshape(-1, n), np.array(dirs).reshape(-1, n), len(lin))


def _match_rows(given, computed, tol):
    """Keep the given rows that coincide with computed ones; add the unmatched computed rows."""
    keep = []
    for c in computed:
        hit = [g for g in given if np.linalg.norm(g - c) <= 1e3 * tol * _scale(c)]
        keep.append(hit[0] if hit else c)
    return np.array(keep).reshape(-1, computed.shape[1])


def _prune_redundant_lp(V, R):
    """Drop generators that are combinations of the others (any dimension, via LP)."""
    n = V.shape[1]
    keep_v = list(range(len(V)))
    for j in range(len(V)):
        others = [i for i in keep_v if i != j]
        if not others:
            continue
        Vo, k = V[others], len(others)
        A_eq = np.vstack([np.hstack([Vo.T, R.T]),
                          np.hstack([np.ones(k), np.zeros(len(R))])])
        b_eq = np.append(V[j], 1.0)
        res = linprog(np.zeros(k + len(R)), A_eq=A_eq, b_eq=b_eq, method="highs")
        if res.status == 0:
            keep_v.remove(j)
    keep_r = list(range(len(R)))
    for j in range(len(R)):
        others = [i for i in keep_r if i != j]
        if not others:
            continue
        res = linprog(np.zeros(len(others)), A_eq=R[others].T, b_eq=R[j], method="highs")
        if res.status == 0:
            keep_r.remove(j)
    return V[keep_v].reshape(-1, n), R[keep_r].reshape(-1, n)


class PolyhedralSet:
    """A nonempty polyhedron ``conv(vertices) + cone(rays)`` in V' = R^n.

    Duplicate generators are merged and redundant ones dropped on
    construction, so ``vertices`` holds extreme points only (modulo the
    lineality space, when there is one) and ``rays`` holds pairwise distinct
    unit directions.
    """

    def __init__(self, vertices, rays=None, *, dim=None, tol=TOL):
        V = np.array(vertices, dtype=float)
        if V.size == 0:
            raise InvalidInputError("a polyhedral set needs at least one vertex")
        if dim is None:
            dim = 1 if V.ndim <= 1 and V.size == 1 else np.atleast_2d(V).shape[1]
        V = _as_rows(V, dim)
        R = _unit_rows(_as_rows(rays, dim), tol)
        V = _dedupe_points(V, tol)
        R = _dedupe_points(R, 1e3 * tol)
        self.dim = dim
        self.tol = tol
        if dim <= N_DD:
            N, b = _hform_from_generators(V, R, tol)
            V2, R2, lin = _vform_from_halfspaces(N, b, tol)
            if lin == 0:
                V2, R2 = _match_rows(V, V2, tol), _match_rows(R, R2, tol)
            self._set(V2, R2, N, b, lin)
        else:
            V, R = _prune_redundant_lp(V, R)
            self._set(V, R, None, None, None)

    @classmethod
    def from_halfspaces(cls, normals, offsets, *, dim=None, tol=TOL):
        """The set ``{a : normals @ a >= offsets}``; raises :class:`EmptySetError` if empty."""
        N = np.array(normals, dtype=float)
        if dim is None:
            if N.size == 0:
                raise InvalidInputError("dimension required for an empty halfspace list")
            dim = np.atleast_2d(N).shape[1]
        N = _as_rows(N, dim)
        b = np.array(offsets, dtype=float).reshape(-1)
        if len(b) != len(N):
            raise InvalidInputError("normals and offsets differ in length")
        if dim > N_DD:
            raise UnsupportedDimensionError(f"halfspace conversion needs dim <= {N_DD}")
        norms = np.linalg.norm(N, axis=1)
        trivial = norms <= tol
        if np.any(b[trivial] > tol):
            raise EmptySetError("a zero normal has a positive offset")
        N, b = N[~trivial] / norms[~trivial, None], b[~trivial] / norms[~trivial]
        V, R, _ = _vform_from_halfspaces(N, b, tol)
        # normalize the H-form through the generators so both sides are irredundant
        self = cls.__new__(cls)
        self.dim, self.tol = dim, tol
        N2, b2 = _hform_from_generators(V, R, tol)
        V2, R2, lin = _vform_from_halfspaces(N2, b2, tol)
        self._set(V2, R2, N2, b2, lin)
        return self

    def _set(self, V, R, N, b, lin):
        self.vertices = _frozen(V)
        self.rays = _frozen(R)
        self._normals = None if N is None else _frozen(N)
        self._offsets = None if b is None else _frozen(b)
        self._lineality = lin

    @property
    def has_halfspaces(self):
        return self._normals is not None

    @property
    def halfspaces(self):
        """``(normals, offsets)`` with unit normals; equalities appear as opposite pairs."""
        if self._normals is None:
            raise UnsupportedDimensionError(
                f"halfspace form unavailable in dimension {self.dim} (limit {N_DD})")
        return self._normals, self._offsets

    @property
    def normals(self):
        return self.halfspaces[0]

    @property
    def offsets(self):
        return self.halfspaces[1]

    @property
    def lineality_dim(self):
        if self._lineality is None:
            return int(self.dim - np.linalg.matrix_rank(
                np.vstack([self.rays, -self.rays]) if len(self.rays) else np.zeros((1, self.dim))))
        return self._lineality

    def contains(self, a, tol=None):
        """Membership of a functional, through the halfspaces (or an LP above the conversion limit)."""
        tol = self.tol if tol is None else tol
        a = as_point(a, self.dim, "functional")
        if self.has_halfspaces:
            N, b = self.halfspaces
            return bool(np.all(N @ a >= b - tol * _scale(a)))
        k, r = len(self.vertices), len(self.rays)
        A_eq = np.vstack([np.hstack([self.vertices.T, self.rays.T]),
                          np.hstack([np.ones(k), np.zeros(r)])])
        res = linprog(np.zeros(k + r), A_eq=A_eq, b_eq=np.append(a, 1.0), method="highs")
        return res.status == 0

    @cached_property
    def _adjacency(self):
        N, b = self.halfspaces
        V = self.vertices
        n = self.dim
        tight = [set(np.flatnonzero(np.abs(N @ v - b) <= 1e3 * self.tol * _scale(v)))
                 for v in V]
        rank_all = np.linalg.matrix_rank(N, tol=1e-8) if len(N) else 0
        target = rank_all - 1
        adj = [[] for _ in V]
        for i in range(len(V)):
            for j in range(i + 1, len(V)):
                common = sorted(tight[i] & tight[j])
                if len(common) < target:
                    continue
                r = np.linalg.matrix_rank(N[common], tol=1e-8) if common else 0
                if r == target:
                    adj[i].append(j)
                    adj[j].append(i)
        return adj

    def __repr__(self):
        return (f"PolyhedralSet(dim={self.dim}, vertices={self.vertices.tolist()}, "
                f"rays={self.rays.tolist()})")


class PolyhedralCone:
    """A closed convex polyhedral cone held by generators and/or unit inward normals.

    Whichever form is missing is computed on first access by the double
    description method; that needs ``dim <= N_DD``.  Lines in the cone are
    stored as opposite generator pairs, equalities as opposite normal pairs.
    """

    def __init__(self, dim, generators=None, normals=None, tol=TOL):
        if generators is None and normals is None:
            raise InvalidInputError("a cone needs generators or normals")
        self.dim = dim
        self.tol = tol
        self._gens = None if generators is None else self._clean(generators)
        self._norms = None if normals is None else self._clean(normals)

    def _clean(self, rows):
        R = _as_rows(rows, self.dim)
        if len(R):
            norms = np.linalg.norm(R, axis=1)
            R = R[norms > self.tol] / norms[norms > self.tol, None]
        return _frozen(_dedupe_points(R, 1e3 * self.tol))

    def _need_dd(self):
        if self.dim > N_DD:
            raise UnsupportedDimensionError(f"cone conversion needs dim <= {N_DD}")

    @property
    def generators(self):
        if self._gens is None:
            self._need_dd()
            self._gens = self._clean(_dd.all_generators(self._norms, self.dim, self.tol))
        return self._gens

    @property
    def normals(self):
        if self._norms is None:
            self._need_dd()
            self._norms = self._clean(_dd.cone_facets(self._gens, self.dim, self.tol))
        return self._norms

    def contains(self, x, tol=None):
        tol = self.tol if tol is None else tol
        x = as_point(x, self.dim, "vector")
        if len(self.normals) == 0:
            return True
        return bool(np.all(self.normals @ x >= -tol * _scale(x)))

    def is_zero(self):
        return len(self.generators) == 0

    def is_full_space(self):
        return all(self.contains(s * e) for e in np.eye(self.dim) for s in (1.0, -1.0))

    def __repr__(self):
        parts = []
        if self._gens is not None:
            parts.append(f"generators={self._gens.tolist()}")
        if self._norms is not None:
            parts.append(f"normals={self._norms.tolist()}")
        return f"PolyhedralCone(dim={self.dim}, {', '.join(parts)})"


def zero_cone(dim):
    return PolyhedralCone(dim, generators=np.zeros((0, dim)))


def full_space(dim):
    return PolyhedralCone(dim, normals=np.zeros((0, dim)))


def _check_dim(C, x, what="vector"):
    return as_point(x, C.dim, what)


def _ray_slopes(C, x):
    return C.rays @ x if len(C.rays) else np.zeros(0)


def support_value(C, x):
    """``inf <C, x>``, which is ``-inf`` exactly when some ray decreases along x."""
    x = _check_dim(C, x)
    if len(C.rays) and (C.rays @ x).min() < -C.tol * _scale(x):
        return float("-inf")
    return float((C.vertices @ x).min())


def support_function(C, x):
    """``s_C(x) = -inf <C, x>``; ``+inf`` outside B(C)."""
    return -support_value(C, x) + 0.0


def recession_cone(C):
    """lim(C), given by the homogenized halfspaces (falls back to the rays above N_DD)."""
    if C.has_halfspaces:
        return PolyhedralCone(C.dim, normals=C.normals, tol=C.tol)
    return PolyhedralCone(C.dim, generators=C.rays, tol=C.tol)


def b_cone(C):
    """``B(C) = {x : inf <C, x> > -inf}``, in halfspace form with the rays of C as normals."""
    return PolyhedralCone(C.dim, normals=C.rays, tol=C.tol)


def dual_cone(K):
    """``K* = {x : <g, x> >= 0 for all g in K}``.

    The two representations trade places; a form K lacks is computed lazily.
    """
    dual = PolyhedralCone.__new__(PolyhedralCone)
    dual.dim, dual.tol = K.dim, K.tol
    dual._gens, dual._norms = K._norms, K._gens
    return dual


def interior_contains(K, x):
    x = as_point(x, K.dim, "vector")
    N = K.normals
    if len(N) == 0:
        return True
    return bool((N @ x).min() > K.tol * math.sqrt(float(x @ x)))


def interior_direction(C):
    """A unit vector in the interior of B(C) (zero when B(C) is all of V).

    The normalized sum of the rays is tried first; if it is not interior
    the most central direction is found by a small LP.  Raises
    :class:`DegenerateConeError` when B(C) has empty interior.
    """
    R = C.rays
    K = b_cone(C)
    if len(R) == 0:
        return _frozen(np.zeros(C.dim))
    s = R.sum(axis=0)
    if np.linalg.norm(s) > C.tol:
        x0 = s / np.linalg.norm(s)
        if interior_contains(K, x0):
            return _frozen(x0)
    n = C.dim
    # maximize t subject to R x >= t, |x_i| <= 1
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-R, np.ones((len(R), 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(len(R)),
                  bounds=[(-1, 1)] * n + [(None, 1)], method="highs")
    if res.status != 0 or -res.fun <= 1e3 * C.tol:
        raise DegenerateConeError("B(C) has empty interior")
    x0 = res.x[:n] / np.linalg.norm(res.x[:n])
    if not interior_contains(K, x0):
        raise DegenerateConeError("B(C) has empty interior")
    return _frozen(x0)


def level_set(C, x, m):
    """``C ∩ {a : <a, x> <= m}``, or None when that slice is empty."""
    x = _check_dim(C, x)
    N, b = C.halfspaces
    try:
        return PolyhedralSet.from_halfspaces(np.vstack([N, -x[None, :]]), np.append(b, -float(m)),
                                             dim=C.dim, tol=C.tol)
    except EmptySetError:
        return None


def _lex_key(v):
    return tuple(v.tolist())


def minimize_linear(C, x):
    """Minimum of ``<., x>`` over C and a minimizing vertex.

    The vertex is found by a simplex-style descent along the edge graph of C
    (an LP over generator weights above the conversion limit).  Among tied
    minimizers the lexicographically smallest vertex is returned.
    """
    x = _check_dim(C, x)
    slopes = _ray_slopes(C, x)
    tol = C.tol * _scale(x)
    if np.any(slopes < -tol):
        k = int(np.argmin(slopes))
        raise UnboundedBelowError(C.rays[k].copy(), float(slopes[k]))
    V = C.vertices
    vals = V @ x
    if C.has_halfspaces:
        best = _edge_descent(C, vals, tol)
    else:
        best = _lp_vertex(C, vals)
    plateau = _plateau(C, best, vals, tol)
    pick = min(plateau, key=lambda i: _lex_key(V[i]))
    return float(min(vals[i] for i in plateau)), V[pick].copy()


def _edge_descent(C, vals, tol):
    adj = C._adjacency
    cur = 0
    while True:
        nbrs = [j for j in adj[cur] if vals[j] < vals[cur] - tol]
        if not nbrs:
            return cur
        cur = min(nbrs, key=lambda j: vals[j])


def _plateau(C, start, vals, tol):
    if not C.has_halfspaces:
        return [i for i in range(len(vals)) if vals[i] <= vals[start] + tol]
    adj = C._adjacency
    seen, stack = {start}, [start]
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if j not in seen and abs(vals[j] - vals[start]) <= tol:
                seen.add(j)
                stack.append(j)
    return sorted(seen)


def _lp_vertex(C, vals):
    k = len(vals)
    res = linprog(vals, A_eq=np.ones((1, k)), b_eq=[1.0], bounds=[(0, None)] * k,
                  method="highs-ds")
    return int(np.argmax(res.x))


def reconstruct_from_support(C, epsilon):
    """Rebuild C from support values at facet normals tilted into the interior of B(C).

    Each unit facet normal u becomes ``(1 - epsilon) u + epsilon x0`` with x0
    from :func:`interior_direction`; the result is the intersection of the
    supporting halfspaces in those directions and always contains C.
    """
    if not 0.0 < epsilon < 1.0:
        raise InvalidInputError("epsilon must lie in (0, 1)")
    x0 = interior_direction(C)
    N, _ = C.halfspaces
    U = (1.0 - epsilon) * N + epsilon * x0[None, :]
    offsets = np.array([support_value(C, u) for u in U])
    return PolyhedralSet.from_halfspaces(U, offsets, dim=C.dim, tol=C.tol)


def is_bounded(C):
    return len(C.rays) == 0


def polar_contains(C, v):
    """Membership of ``v`` in the polar set ``{v : |<c, v>| <= 1 for all c in C}``.

    A ray r of C forces ``<r, v> = 0``; otherwise the pairing is unbounded.
    """
    v = _check_dim(C, v)
    tol = C.tol * _scale(v)
    if len(C.rays) and np.any(np.abs(C.rays @ v) > tol):
        return False
    return bool(np.all(np.abs(C.vertices @ v) <= 1.0 + tol))


def polar_inradius(C):
    """Radius of the largest origin-centred ball inside the polar set.

    Positive (the polar is absorbing) exactly when C is bounded; ``inf`` for C = {0}.
    """
    if not is_bounded(C):
        return 0.0
    m = float(np.max(np.linalg.norm(C.vertices, axis=1)))
    return float("inf") if m == 0.0 else 1.0 / m


def is_subset(C, D):
    """``C ⊆ D`` for PolyhedralSets (D needs its halfspace form)."""
    if C.dim != D.dim:
        raise DimensionMismatchError("dimensions differ")
    return _set_subset(C, D)


def _set_subset(C, D):
    N, b = D.halfspaces
    tol = max(C.tol, D.tol)
    for v in C.vertices:
        if np.any(N @ v < b - 1e3 * tol * _scale(v)):
            return False
    for r in C.rays:
        if np.any(N @ r < -1e3 * tol):
            return False
    return True


def _cone_subset(K, L):
    N = L.normals
    if len(N) == 0:
        return True
    G = K.generators
    return bool(np.all(G @ N.T >= -1e3 * max(K.tol, L.tol))) if len(G) else True


def set_equal(C, D):
    """Mutual containment, for two PolyhedralSets or two PolyhedralCones."""
    if C.dim != D.dim:
        raise DimensionMismatchError("dimensions differ")
    if isinstance(C, PolyhedralCone) and isinstance(D, PolyhedralCone):
        return _cone_subset(C, D) and _cone_subset(D, C)
    return _set_subset(C, D) and _set_subset(D, C)


def clip_radius(C):
    return 10.0 * (float(np.max(np.abs(C.vertices))) + 1.0)


def clip_to_box(C, radius):
    N, b = C.halfspaces
    n = C.dim
    box_n = np.vstack([np.eye(n), -np.eye(n)])
    box_b = np.full(2 * n, -float(radius))
    return PolyhedralSet.from_halfspaces(np.vstack([N, box_n]), np.concatenate([b, box_b]),
                                         dim=n, tol=C.tol)


def project_to_polytope(p, V):
    """Nearest point of conv(V) to ``p``."""
    p = np.asarray(p, dtype=float)
    if len(V) == 1:
        return V[0].copy()
    # warm start: NNLS with a mildly weighted sum-to-one row, then SLSQP with the exact simplex
    w = max(1.0, float(np.max(np.abs(V))))
    lam0, _ = nnls(np.vstack([V.T, w * np.ones((1, len(V)))]), np.append(p, w))
    lam0 = lam0 / lam0.sum() if lam0.sum() > 0 else np.full(len(V), 1.0 / len(V))

    def fun(lam):
        r = V.T @ lam - p
        return 0.5 * float(r @ r), V @ r

    res = minimize(fun, lam0, jac=True, method="SLSQP", bounds=[(0.0, None)] * len(V),
                   constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1.0,
                                 "jac": lambda lam: np.ones_like(lam)}],
                   options={"ftol": 1e-15, "maxiter": 500})
    lam = np.clip(res.x, 0.0, None)
    lam = lam / lam.sum()
    best = V.T @ lam
    start = V.T @ lam0
    return best if np.linalg.norm(best - p) <= np.linalg.norm(start - p) else start


def distance_to_polytope(p, V):
    """Euclidean distance from ``p`` to conv(V)."""
    return float(np.linalg.norm(project_to_polytope(p, V) - np.asarray(p, dtype=float)))


def hausdorff_distance(P, Q):
    """Hausdorff distance between two bounded polyhedral sets."""
    if not (is_bounded(P) and is_bounded(Q)):
        raise InvalidInputError("Hausdorff distance needs bounded sets; clip first")
    d1 = max(distance_to_polytope(p, Q.vertices) for p in P.vertices)
    d2 = max(distance_to_polytope(q, P.vertices) for q in Q.vertices)
    return max(d1, d2)


def clipped_hausdorff_distance(C, D, radius=None):
    """Hausdorff distance of C and D after both are cut to the box ``[-R, R]^n``.

    R defaults to :func:`clip_radius` of C.
    """
    R = clip_radius(C) if radius is None else radius
    return hausdorff_distance(clip_to_box(C, R), clip_to_box(D, R))
