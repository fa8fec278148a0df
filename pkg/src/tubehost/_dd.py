"""Representation conversion for polyhedral cones.

Everything polyhedral in the package funnels through one routine,
:func:`cone_generators`, which turns an inequality system ``A x >= 0`` into
a lineality basis plus the extreme rays of the pointed part.  The reverse
direction is the same computation applied to the dual cone.

In the small dimensions where conversion is offered, extreme rays are
enumerated directly: each is the null vector of k-1 independent constraints
(k the pointed dimension) that is feasible for all the others.  This is
insensitive to nearly coincident generators, which trip up the incremental
double description method.  That method is kept for systems with too many
constraint subsets to enumerate.
"""

from itertools import combinations
from math import comb

import numpy as np

#: largest ambient dimension for which representation conversion is offered
N_DD = 4


def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def _orthonormal_rows(rows, tol):
    if len(rows) == 0:
        return []
    q, r = np.linalg.qr(np.asarray(rows).T)
    keep = np.abs(np.diag(r)) > tol
    return [q[:, j].copy() for j in range(q.shape[1]) if keep[j]]


#: above this many constraint subsets the incremental method is used instead
ENUM_LIMIT = 200_000


def cone_generators(A, dim, tol=1e-9):
    """Generators of the cone ``{x : A @ x >= 0}``.

    Returns ``(lineality, rays)``: an orthonormal basis of the lineality space
    and unit extreme rays of the cone modulo that space.  Both are 2-D arrays
    with ``dim`` columns (possibly zero rows).
    """
    A = np.asarray(A, dtype=float).reshape(-1, dim)
    norms = np.linalg.norm(A, axis=1)
    A = A[norms > tol] / norms[norms > tol, None]
    if len(A) == 0:
        return np.eye(dim), np.zeros((0, dim))
    _, sv, vt = np.linalg.svd(A)
    rank = int(np.sum(sv > tol * max(1.0, sv[0])))
    lin = vt[rank:]
    Q = vt[:rank].T  # orthonormal basis of the complement of the lineality space
    k = rank
    if k == 0:
        return lin, np.zeros((0, dim))
    if comb(len(A), k - 1) > ENUM_LIMIT:
        return incremental_generators(A, dim, tol)
    Ap = A @ Q
    return lin, _enumerate_rays(Ap, k, tol) @ Q.T


def _enumerate_rays(A, k, tol, chunk=20_000):
    """Extreme rays of the pointed cone ``{x in R^k : A x >= 0}`` by subset enumeration."""
    if k == 1:
        cands = np.array([[1.0], [-1.0]])
        return cands[np.all(cands @ A.T >= -tol, axis=1)]
    found = []
    it = combinations(range(len(A)), k - 1)
    while True:
        S = np.array(list(_take(it, chunk)), dtype=int).reshape(-1, k - 1)
        if not len(S):
            break
        M = A[S]  # (K, k-1, k)
        # generalized cross product: cofactors along each column
        X = np.empty((len(S), k))
        for j in range(k):
            minor = np.delete(M, j, axis=2)
            X[:, j] = (-1) ** j * (np.linalg.det(minor) if k > 2 else minor[:, 0, 0])
        nx = np.linalg.norm(X, axis=1)
        ok = nx > 1e-12
        X = X[ok] / nx[ok, None]
        vals = X @ A.T
        found.append(X[np.all(vals >= -tol, axis=1)])
        found.append(-X[np.all(vals <= tol, axis=1)])
    R = np.vstack(found) if found else np.zeros((0, k))
    return _dedupe_directions(R, tol)


def _take(it, n):
    for _ in range(n):
        try:
            yield next(it)
        except StopIteration:
            return


def incremental_generators(A, dim, tol=1e-9):
    """Same contract as :func:`cone_generators`, by the incremental double description method.

    Constraints are added one at a time (Motzkin's incremental scheme).  Two
    rays straddling a new hyperplane are combined only if they are adjacent,
    which is decided combinatorially from their sets of tight constraints.
    """
    A = np.asarray(A, dtype=float).reshape(-1, dim)
    lin = [row for row in np.eye(dim)]
    rays = []
    tight = []
    processed = []

    for i, a in enumerate(A):
        na = np.linalg.norm(a)
        if na <= tol:
            continue
        a = a / na

        if lin:
            lv = np.array([a @ l for l in lin])
            j = int(np.argmax(np.abs(lv)))
        if lin and abs(lv[j]) > tol:
            # the new hyperplane cuts the lineality space: one direction
            # becomes a ray, the rest is projected into the hyperplane
            piv = lin.pop(j) * np.sign(lv[j])
            ap = a @ piv
            lin = _orthonormal_rows([l - (a @ l / ap) * piv for l in lin], tol)
            rays = [_unit(r - (a @ r / ap) * piv) for r in rays]
            tight = [t | {i} for t in tight]
            rays.append(_unit(piv))
            tight.append(set(processed))
            processed.append(i)
            continue

        vals = np.array([a @ r for r in rays])
        pos = [k for k in range(len(rays)) if vals[k] > tol]
        neg = [k for k in range(len(rays)) if vals[k] < -tol]
        zero = [k for k in range(len(rays)) if abs(vals[k]) <= tol]

        new_rays = [rays[k] for k in pos] + [rays[k] for k in zero]
        new_tight = [tight[k] for k in pos] + [tight[k] | {i} for k in zero]

        pointed_dim = dim - len(lin)
        for p in pos:
            for q in neg:
                common = tight[p] & tight[q]
                if len(common) < pointed_dim - 2:
                    continue
                if any(common <= tight[r] for r in range(len(rays)) if r != p and r != q):
                    continue
                w = vals[p] * rays[q] - vals[q] * rays[p]
                nw = np.linalg.norm(w)
                if nw <= tol:
                    continue
                new_rays.append(w / nw)
                new_tight.append(common | {i})

        rays, tight = new_rays, new_tight
        processed.append(i)

    lin_arr = np.array(lin).reshape(-1, dim)
    ray_arr = np.array(rays).reshape(-1, dim)
    return lin_arr, _dedupe_directions(ray_arr, tol)


def _dedupe_directions(R, tol):
    out = []
    for r in R:
        if not any(np.linalg.norm(r - s) <= 1e3 * tol for s in out):
            out.append(r)
    return np.array(out).reshape(-1, R.shape[1])


def cone_facets(G, dim, tol=1e-9):
    """Inequality description of ``cone(G)`` as unit normals ``N`` with ``N @ x >= 0``.

    Equalities come out as pairs ``+n`` and ``-n``.
    """
    lin, rays = cone_generators(G, dim, tol)
    return np.vstack([rays, lin, -lin]).reshape(-1, dim)


def all_generators(A, dim, tol=1e-9):
    """Like :func:`cone_generators` but with the lineality folded in as ``+l, -l`` rays."""
    lin, rays = cone_generators(A, dim, tol)
    return np.vstack([rays, lin, -lin]).reshape(-1, dim)
