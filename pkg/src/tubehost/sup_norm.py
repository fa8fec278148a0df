"""Bracketing ``sup_{f in C} |sum_k c_k exp(i <f, s_k>)|`` over a polyhedron C.

The function ``g(f) = sum_k c_k exp(i f(x_k) - f(y_k))`` is the Gelfand
transform of a finite combination of tube points ``s_k = x_k + i y_k``.
Its sup over C is bracketed in three steps:

1. If C is unbounded it is cut to ``C_M = {f in C : f(x0) <= M}`` with M
   grown until a rigorous bound on ``|g|`` outside ``C_M`` is negligible.
2. A lower bound comes from a batched multistart Nelder-Mead search on
   ``C_M`` (every reported value is attained at a point of ``C_M``).
3. An upper bound comes from branch and bound over boxes covering ``C_M``
   using a second-order Taylor bound.

Both ends are finally widened by a rounding allowance proportional to
``sum_k |c_k| sup_C |exp(i f(s_k))|``, the largest magnitude any term can
reach, so an exact value cannot fall outside the bracket by a few ulps.
"""

from dataclasses import dataclass

import numpy as np

from .convex import project_to_polytope, is_bounded, level_set, minimize_linear, support_function

N_STARTS = 32
# rounding allowance per term, in units of the l1 magnitude
ROUND_SLACK = 64.0 * np.finfo(float).eps


@dataclass(frozen=True)
class NormBracket:
    lower: float
    upper: float
    # True when lower == upper by a closed form rather than a search
    exact: bool = False
    # True when the bracket width meets the requested relative tolerance
    converged: bool = True
    truncation: float | None = None

    @property
    def mid(self):
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self):
        return self.upper - self.lower

    def __contains__(self, value):
        return self.lower <= value <= self.upper


class _Transform:
    def __init__(self, coefs, X, Y):
        self.c = np.asarray(coefs, dtype=complex)
        self.X = np.asarray(X, dtype=float)
        self.Y = np.asarray(Y, dtype=float)
        self.S = self.X + 1j * self.Y
        self.s2 = (self.X ** 2).sum(axis=1) + (self.Y ** 2).sum(axis=1)
        self.absc = np.abs(self.c)

    def terms(self, F):
        return np.exp(1j * (F @ self.X.T) - F @ self.Y.T)

    def values(self, F):
        return self.terms(np.atleast_2d(F)) @ self.c

    def box_bounds(self, lo, hi):
        """Upper bounds of |g| on each box ``[lo_i, hi_i]`` plus the center values."""
        c = 0.5 * (lo + hi)
        h = 0.5 * (hi - lo)
        E = self.terms(c)
        z = E @ self.c
        J = (E * self.c) @ (1j * self.S)
        emax = np.exp(-(c @ self.Y.T) + h @ np.abs(self.Y).T)
        triangle = emax @ self.absc
        curv = emax @ (self.absc * self.s2)
        lin = 2.0 * (np.abs((np.conj(z)[:, None] * J).real) * h).sum(axis=1)
        quad = ((np.abs(J) * h).sum(axis=1)) ** 2
        taylor = np.sqrt(np.abs(z) ** 2 + lin + quad) + 0.5 * curv * (h ** 2).sum(axis=1)
        return np.minimum(triangle, taylor), z, c


def _start_points(V, rng, count=N_STARTS):
    centroid = V.mean(axis=0)
    anchors = [0.9 * v + 0.1 * centroid for v in V]
    if len(anchors) > count - 1:
        idx = rng.choice(len(anchors), size=count - 1, replace=False)
        anchors = [anchors[i] for i in sorted(idx)]
    pts = anchors + [centroid]
    while len(pts) < count:
        pts.append(rng.dirichlet(np.ones(len(V))) @ V)
    return np.array(pts)


def nelder_mead_batch(fun, starts, step, iters):
    """Minimize ``fun`` from many starts at once.

    ``fun`` maps an ``(m, n)`` array of points to ``m`` values.  All simplices
    advance in lockstep with the standard reflection, expansion, contraction
    and shrink moves; returns the best vertex of each simplex and its value.
    """
    B, n = starts.shape
    simplex = np.repeat(starts[:, None, :], n + 1, axis=1)
    for j in range(n):
        simplex[:, j + 1, j] += step
    fvals = fun(simplex.reshape(-1, n)).reshape(B, n + 1)
    rows = np.arange(B)
    for _ in range(iters):
        order = np.argsort(fvals, axis=1)
        simplex = np.take_along_axis(simplex, order[:, :, None], axis=1)
        fvals = np.take_along_axis(fvals, order, axis=1)
        centroid = simplex[:, :-1].mean(axis=1)
        worst = simplex[:, -1]
        xr = centroid + (centroid - worst)
        fr = fun(xr)
        xe = centroid + 2.0 * (centroid - worst)
        fe = fun(xe)
        xoc = centroid + 0.5 * (xr - centroid)
        foc = fun(xoc)
        xic = centroid + 0.5 * (worst - centroid)
        fic = fun(xic)

        new_x = worst.copy()
        new_f = fvals[:, -1].copy()

        best, second_worst, worst_f = fvals[:, 0], fvals[:, -2], fvals[:, -1]
        expand = fr < best
        take_e = expand & (fe < fr)
        take_r = (expand & ~take_e) | ((fr >= best) & (fr < second_worst))
        outside = (fr >= second_worst) & (fr < worst_f)
        inside = fr >= worst_f
        ok_out = outside & (foc <= fr)
        ok_in = inside & (fic < worst_f)
        shrink = (outside & ~ok_out) | (inside & ~ok_in)

        for mask, x, f in ((take_e, xe, fe), (take_r, xr, fr), (ok_out, xoc, foc), (ok_in, xic, fic)):
            new_x[mask] = x[mask]
            new_f[mask] = f[mask]
        simplex[:, -1] = new_x
        fvals[:, -1] = new_f

        if shrink.any():
            s = simplex[shrink]
            s[:, 1:] = s[:, :1] + 0.5 * (s[:, 1:] - s[:, :1])
            simplex[shrink] = s
            fvals[shrink, 1:] = fun(s[:, 1:].reshape(-1, n)).reshape(-1, n)
        spread = np.abs(fvals - fvals[:, :1]).max(axis=1)
        if np.all(spread <= 1e-14 * np.maximum(1.0, np.abs(fvals[:, 0]))):
            break
    k = np.argmin(fvals, axis=1)
    return simplex[rows, k], fvals[rows, k]


def _multistart_lower(tr, K, rng):
    V = K.vertices
    N, b = K.halfspaces
    lo, hi = V.min(axis=0), V.max(axis=0)
    diam = float(np.linalg.norm(hi - lo))
    # Lipschitz bound of |g| on the bounding box; the penalty must dominate it
    c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
    emax = np.exp(-(tr.Y @ c) + np.abs(tr.Y) @ h)
    penalty = 10.0 * float(np.sum(tr.absc * np.sqrt(tr.s2) * emax)) + 1.0

    def objective(F):
        # evaluate at the box-clamped point so exp cannot overflow far outside C_M
        Fc = np.clip(F, lo, hi)
        viol = np.abs(F - Fc).sum(axis=1)
        if len(N):
            viol = viol + np.maximum(0.0, b[None, :] - F @ N.T).sum(axis=1)
        return -np.abs(tr.values(Fc)) + penalty * viol

    starts = _start_points(V, rng)
    step = max(0.05 * diam, 1e-6)
    if diam == 0.0:
        return float(np.abs(tr.values(V[:1]))[0]), V[0]
    xs, _ = nelder_mead_batch(objective, starts, step, iters=60 * K.dim + 100)
    proj = np.array([project_to_polytope(x, V) for x in xs])
    vals = np.abs(tr.values(proj))
    k = int(np.argmax(vals))
    return float(vals[k]), proj[k]


def _branch_and_bound(tr, K, lower, rel_tol, budget):
    V = K.vertices
    N, b = K.halfspaces
    lo = V.min(axis=0)[None, :]
    hi = V.max(axis=0)[None, :]
    absN = np.abs(N)
    pruned = 0.0
    tol = 1e-9 * max(1.0, float(np.abs(V).max()))
    evaluated = 0
    while len(lo):
        c = 0.5 * (lo + hi)
        h = 0.5 * (hi - lo)
        if len(N):
            reach = c @ N.T + h @ absN.T
            meets = np.all(reach >= b - tol, axis=1)
            lo, hi, c = lo[meets], hi[meets], c[meets]
            if not len(lo):
                break
        ub, z, c = tr.box_bounds(lo, hi)
        evaluated += len(lo)
        inside = np.all(c @ N.T >= b, axis=1) if len(N) else np.ones(len(c), bool)
        if inside.any():
            lower = max(lower, float(np.abs(z[inside]).max()))
        done = ub <= lower * (1.0 + rel_tol)
        if done.any():
            pruned = max(pruned, float(ub[done].max()))
        lo, hi = lo[~done], hi[~done]
        if not len(lo):
            break
        if evaluated + 2 * len(lo) > budget:
            return lower, max(pruned, float(ub[~done].max()), lower), False
        w = hi - lo
        axis = np.argmax(w, axis=1)
        rows = np.arange(len(lo))
        mid = 0.5 * (lo[rows, axis] + hi[rows, axis])
        hi_left = hi.copy()
        hi_left[rows, axis] = mid
        lo_right = lo.copy()
        lo_right[rows, axis] = mid
        lo = np.vstack([lo, lo_right])
        hi = np.vstack([hi_left, hi])
    return lower, max(pruned, lower), True


def _tail_data(tr, C, x0):
    """Per-term (eps_k, beta_k) with ``|term_k| <= exp(-eps_k f(x0) + beta_k)`` on C."""
    R = C.rays
    rx = R @ x0
    eps = np.array([float(np.min((R @ y) / rx)) for y in tr.Y])
    beta = np.array([support_function(C, y - e * x0) for y, e in zip(tr.Y, eps)])
    return eps, beta


def bracket_sup(coefs, X, Y, C, x0, rel_tol=1e-3, seed=0, budget=400_000):
    """Bracket ``sup_{f in C} |g(f)|`` for ``g = sum c_k exp(i f(X_k) - f(Y_k))``.

    ``x0`` must be interior to B(C) whenever C is unbounded.  Returns a
    :class:`NormBracket` whose ``upper`` is rigorous and whose ``lower`` is
    attained, both up to the rounding allowance.  ``converged`` is False
    when the box budget ran out before the width reached ``rel_tol * upper``.
    """
    tr = _Transform(coefs, X, Y)
    rng = np.random.default_rng(seed)
    lower = float(np.abs(tr.values(C.vertices)).max())
    tail = 0.0
    if is_bounded(C):
        K = C
    else:
        m0, _ = minimize_linear(C, x0)
        eps, beta = _tail_data(tr, C, x0)

        def tail_at(M):
            return float(np.sum(tr.absc * np.exp(-eps * M + beta)))

        gap = 1.0
        K = level_set(C, x0, m0 + gap)
        lower = max(lower, float(np.abs(tr.values(K.vertices)).max()))
        for _ in range(64):
            if tail_at(m0 + gap) < 0.25 * rel_tol * lower:
                break
            gap *= 2.0
            K = level_set(C, x0, m0 + gap)
            lower = max(lower, float(np.abs(tr.values(K.vertices)).max()))
        tail = tail_at(m0 + gap)
    ms, _ = _multistart_lower(tr, K, rng)
    lower = max(lower, ms)
    lower, upper_k, finished = _branch_and_bound(tr, K, lower, 0.5 * rel_tol, budget)
    upper = max(lower, upper_k, tail)
    converged = finished and upper - lower <= rel_tol * upper
    slack = ROUND_SLACK * len(tr.c) * _l1_magnitude(tr, C)
    return NormBracket(float(max(0.0, lower - slack)), float(upper + slack), exact=False,
                       converged=converged, truncation=tail)


def _l1_magnitude(tr, C):
    return float(sum(a * np.exp(support_function(C, y)) for a, y in zip(tr.absc, tr.Y)))
