"""Seeded random instances for property checks and the CLI verification suites.

All randomness flows from :func:`generator`, a Philox counter-based bit
generator keyed by the seed, so a given seed yields the same instances on
every platform.
"""

import numpy as np

from .algebra import AlgebraElement
from .convex import PolyhedralSet, interior_contains
from .tube import AbsoluteValueContext, TubePoint


def generator(seed=0, stream=0):
    """``numpy.random.Generator`` over Philox keyed by ``(seed, stream)``."""
    return np.random.Generator(np.random.Philox(key=[int(seed), int(stream)]))


def _unit(v):
    return v / np.linalg.norm(v)


def random_pointed_rays(rng, dim, count):
    """Unit rays inside an acute circular cone around a random axis."""
    if dim == 1:
        return np.array([[1.0 if rng.random() < 0.5 else -1.0]])
    axis = _unit(rng.normal(size=dim))
    rays = []
    for _ in range(count):
        u = rng.normal(size=dim)
        u -= (u @ axis) * axis
        u = _unit(u) * rng.uniform(0.0, 1.2)
        rays.append(_unit(axis + u))
    return np.array(rays)


def random_polyhedron(rng, dim, bounded=None, max_vertices=None, max_rays=None):
    """A random nonempty polyhedron whose recession cone is pointed.

    ``bounded=None`` flips a fair coin.  Unbounded instances have B(C) with
    nonempty interior, so they carry a tube semigroup.
    """
    if bounded is None:
        bounded = bool(rng.random() < 0.5)
    nv = int(rng.integers(1, (max_vertices or dim + 4) + 1))
    V = rng.uniform(-2.0, 2.0, size=(nv, dim))
    if bounded:
        return PolyhedralSet(V, dim=dim)
    nr = int(rng.integers(1, (max_rays or dim + 2) + 1))
    return PolyhedralSet(V, random_pointed_rays(rng, dim, nr), dim=dim)


def random_context(rng, dim, bounded=None):
    return AbsoluteValueContext(random_polyhedron(rng, dim, bounded))


def random_interior_direction(rng, ctx, scale=1.0):
    """A random vector interior to B(C)."""
    for _ in range(1000):
        y = rng.normal(size=ctx.dim) * scale
        if len(ctx.C.rays):
            y = y * 0.5 + ctx.x0 * scale * rng.uniform(0.2, 2.0)
        if interior_contains(ctx.cone, y) and np.linalg.norm(y) > 1e-6:
            return y
    raise RuntimeError("could not sample an interior direction")


def random_tube_point(rng, ctx, scale=1.0):
    return TubePoint(rng.normal(size=ctx.dim) * scale, random_interior_direction(rng, ctx, scale), ctx)


def random_functional_in(rng, C, spread=1.0):
    """A random point of C: a convex combination of vertices plus a nonnegative ray combination."""
    w = rng.dirichlet(np.ones(len(C.vertices)))
    f = w @ C.vertices
    if len(C.rays):
        f = f + rng.exponential(spread, size=len(C.rays)) @ C.rays
    return f


def random_element(rng, ctx, max_terms=5, scale=1.0):
    k = int(rng.integers(1, max_terms + 1))
    terms = [(complex(rng.normal(), rng.normal()), random_tube_point(rng, ctx, scale))
             for _ in range(k)]
    return AlgebraElement(ctx, terms)
