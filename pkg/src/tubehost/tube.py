"""The tube semigroup S = V + iW, W = B(C)^0, with the absolute value alpha_C."""

import math
from dataclasses import dataclass

import numpy as np

from .convex import (
    PolyhedralSet,
    as_point,
    b_cone,
    interior_contains,
    interior_direction,
    support_value,
)
from .errors import ContextMismatchError, InvalidInputError, OutsideSemigroupError


class AbsoluteValueContext:
    """A closed convex set C in V' together with the data of its tube semigroup.

    Construction fails with :class:`~tubehost.errors.DegenerateConeError`
    when B(C) has empty interior, since the semigroup would then be empty.
    """

    def __init__(self, C: PolyhedralSet):
        self.C = C
        self.dim = C.dim
        self.cone = b_cone(C)
        self.x0 = interior_direction(C)

    def contains_im(self, y) -> bool:
        return interior_contains(self.cone, y)

    def point(self, re, im) -> "TubePoint":
        return TubePoint(re, im, self)

    def __repr__(self):
        return f"AbsoluteValueContext({self.C!r})"


class TubePoint:
    """An element ``re + i*im`` of S; ``im`` must lie in the interior of B(C)."""

    __slots__ = ("re", "im", "ctx")

    def __init__(self, re, im, ctx: AbsoluteValueContext):
        re = as_point(re, ctx.dim, "real part")
        im = as_point(im, ctx.dim, "imaginary part")
        if not ctx.contains_im(im):
            raise OutsideSemigroupError(f"imaginary part {im.tolist()} is not interior to B(C)")
        self.re, self.im, self.ctx = re, im, ctx

    def __add__(self, other):
        return multiply(self, other)

    def star(self):
        return star(self)

    def __eq__(self, other):
        if not isinstance(other, TubePoint):
            return NotImplemented
        return (self.ctx is other.ctx and np.array_equal(self.re, other.re)
                and np.array_equal(self.im, other.im))

    def __hash__(self):
        return hash((id(self.ctx), self.re.tobytes(), self.im.tobytes()))

    def __repr__(self):
        return f"TubePoint(re={self.re.tolist()}, im={self.im.tolist()})"


def _same_context(s, t):
    if s.ctx is not t.ctx:
        raise ContextMismatchError("tube points belong to different contexts")


def multiply(s: TubePoint, t: TubePoint) -> TubePoint:
    """The semigroup product, which is addition in V_C."""
    _same_context(s, t)
    return TubePoint(s.re + t.re, s.im + t.im, s.ctx)


def star(s: TubePoint) -> TubePoint:
    """``(x + iy)* = -x + iy``."""
    return TubePoint(-s.re, s.im, s.ctx)


def alpha(ctx: AbsoluteValueContext, s: TubePoint) -> float:
    """``alpha_C(x + iy) = exp(-inf <C, y>)``."""
    if s.ctx is not ctx:
        raise ContextMismatchError("tube point belongs to another context")
    inf = support_value(ctx.C, s.im)
    if inf == float("-inf"):
        raise OutsideSemigroupError("imaginary part outside B(C)")
    return math.exp(-inf)


@dataclass(frozen=True)
class AxiomReport:
    pairs: int
    star_violations: int
    submult_violations: int
    worst_star_gap: float
    # largest alpha(st) / (alpha(s) alpha(t)) - 1; nonpositive when the inequality holds
    worst_submult_slack: float

    @property
    def ok(self):
        return self.star_violations == 0 and self.submult_violations == 0


def check_absolute_value_axioms(ctx, samples, rel_tol=1e-12) -> AxiomReport:
    """Check ``alpha(s) = alpha(s*)`` and ``alpha(st) <= alpha(s) alpha(t)`` on sample pairs.

    Violations are counted, never raised.
    """
    star_bad = sub_bad = 0
    worst_gap = 0.0
    worst_slack = float("-inf")
    n = 0
    for s, t in samples:
        n += 1
        a = []
        for u in (s, t):
            au = alpha(ctx, u)
            gap = abs(au - alpha(ctx, star(u)))
            worst_gap = max(worst_gap, gap)
            if gap != 0.0:
                star_bad += 1
            a.append(au)
        lhs = alpha(ctx, multiply(s, t))
        rhs = a[0] * a[1]
        slack = lhs / rhs - 1.0
        worst_slack = max(worst_slack, slack)
        if lhs > rhs * (1.0 + rel_tol):
            sub_bad += 1
    return AxiomReport(n, star_bad, sub_bad, worst_gap, worst_slack if n else 0.0)


def one_param_point(ctx: AbsoluteValueContext, x, z: complex) -> TubePoint:
    """``z * x`` for ``x`` in the interior of B(C) and ``Im z > 0``.

    ``z -> one_param_point(ctx, x, z)`` is the holomorphic extension of the
    one-parameter group ``t -> t x`` to the open upper half plane.
    """
    x = as_point(x, ctx.dim, "direction")
    z = complex(z)
    if not z.imag > 0:
        raise InvalidInputError("Im z must be positive")
    if not ctx.contains_im(x):
        raise InvalidInputError("direction is not interior to B(C)")
    return TubePoint(z.real * x, z.imag * x, ctx)
