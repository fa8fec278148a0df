"""Reference computations that share no code with the package.

They are slow and only meant for small instances.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial import ConvexHull


def brute_min(V, x):
    """Minimum of <v, x> over a vertex list, by a plain Python loop."""
    best = None
    for v in V:
        val = sum(float(a) * float(b) for a, b in zip(v, x))
        best = val if best is None else min(best, val)
    return best


def exact_vertex_scan(V, x):
    """Exact rational minimum of <v, x> over the rows of V and the indices attaining it.

    The float inputs are converted to Fractions, so no rounding happens at all.
    """
    xs = [Fraction(float(t)) for t in x]
    vals = [sum(Fraction(float(a)) * b for a, b in zip(v, xs)) for v in V]
    best = min(vals)
    return best, [i for i, v in enumerate(vals) if v == best], vals


def hull_vertices(P):
    """Extreme points of conv(P) via qhull; sorted lexicographically.

    Flat point sets are handled by running qhull in their affine hull.
    """
    P = np.asarray(P, dtype=float)
    center = P.mean(axis=0)
    _, sv, vt = np.linalg.svd(P - center)
    rank = int(np.sum(sv > 1e-9 * max(1.0, np.abs(P).max())))
    if rank == 0:
        return _sorted_unique(P[:1])
    Q = (P - center) @ vt[:rank].T
    if rank == 1:
        idx = [int(np.argmin(Q[:, 0])), int(np.argmax(Q[:, 0]))]
    else:
        idx = ConvexHull(Q).vertices
    return _sorted_unique(P[idx])


def halfspace_vertices(N, b, tol=1e-9):
    """Vertices of the bounded set {a : N a >= b} by solving every square subsystem."""
    N = np.asarray(N, dtype=float)
    b = np.asarray(b, dtype=float)
    n = N.shape[1]
    out = []
    for S in combinations(range(len(N)), n):
        M = N[list(S)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        p = np.linalg.solve(M, b[list(S)])
        if np.all(N @ p >= b - tol * max(1.0, np.abs(p).max())):
            out.append(p)
    return _sorted_unique(np.array(out))


def _sorted_unique(P, tol=1e-9):
    keep = []
    for p in sorted(P.tolist()):
        if not keep or np.linalg.norm(np.array(p) - np.array(keep[-1])) > tol:
            keep.append(p)
    return np.array(keep)


def dual_cone_2d(g1, g2):
    """Generators of the dual of the pointed planar cone cone{g1, g2} (counterclockwise g1 -> g2).

    Rotating each generator by a quarter turn towards the other one gives the
    inward normal of the boundary ray it spans.
    """
    g1, g2 = np.asarray(g1, float), np.asarray(g2, float)
    rot_ccw = np.array([-g1[1], g1[0]])    # normal to g1 pointing towards g2
    rot_cw = np.array([g2[1], -g2[0]])     # normal to g2 pointing towards g1
    return [rot_ccw / np.linalg.norm(rot_ccw), rot_cw / np.linalg.norm(rot_cw)]


def grid_sup(fun, lo, hi, n=200_001):
    """Max of a scalar function of one variable on a uniform grid; returns (max, argmax)."""
    t = np.linspace(lo, hi, n)
    v = fun(t)
    k = int(np.argmax(v))
    return float(v[k]), float(t[k])


def refined_sup(fun, lo, hi, n=20_001):
    """Grid max of a scalar function, polished by a bounded Brent search around the best cell."""
    t = np.linspace(lo, hi, n)
    k = int(np.argmax(fun(t)))
    a, b = t[max(k - 1, 0)], t[min(k + 1, n - 1)]
    res = minimize_scalar(lambda u: -float(fun(np.array([u]))[0]), bounds=(a, b),
                          method="bounded", options={"xatol": 1e-12})
    return max(float(fun(t[k:k + 1])[0]), -float(res.fun))


def clipped_corner_gap(eps, R):
    """Clipped Hausdorff distance for conv{(0,1)} + cone{(1,0),(0,1)} reconstructed at eps.

    Both tilted facet lines pass through the vertex (0, 1); the farther box
    corner of the tilted bottom facet sits at horizontal distance R from it,
    so the gap there is R * tan(tilt).
    """
    c = 1.0 / np.sqrt(2.0)
    return R * eps * c / (1.0 - eps + eps * c)
