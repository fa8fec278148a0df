"""The commutative C*-algebra C*(S, alpha_C), realized as functions on C.

An :class:`AlgebraElement` is a finite combination ``sum_k c_k delta_{s_k}``
of tube points.  It is never materialized as an abstract quotient; every
question about it is answered through its Gelfand transform

    f  ->  sum_k c_k exp(i f(x_k)) exp(-f(y_k)),      f in C,

which identifies the algebra with C_0(C).  The group V acts by the unitary
multipliers ``f -> exp(i f(v))`` and the momentum of a state is its
barycenter in C.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .convex import (
    TOL,
    PolyhedralSet,
    as_point,
    minimize_linear,
    support_value,
)
from .errors import ContextMismatchError, DomainError, InvalidInputError
from .sup_norm import NormBracket, bracket_sup
from .tube import AbsoluteValueContext, TubePoint, one_param_point
from .tube import star as star_point

#: relative width allowed for norm brackets
TOL_NORM = 1e-3

_DROP = 1e-15


class AlgebraElement:
    """A finite sum ``sum_k c_k delta_{s_k}`` over tube points of one context.

    Terms at coincident points (within the geometric tolerance) are merged
    and coefficients below 1e-15 in modulus dropped, so equal elements
    have equal term lists.
    """

    def __init__(self, ctx: AbsoluteValueContext, terms=()):
        self.ctx = ctx
        merged = []
        for c, s in terms:
            if s.ctx is not ctx:
                raise ContextMismatchError("term from another context")
            for k, (c2, s2) in enumerate(merged):
                if (np.allclose(s.re, s2.re, rtol=0, atol=TOL)
                        and np.allclose(s.im, s2.im, rtol=0, atol=TOL)):
                    merged[k] = (c2 + complex(c), s2)
                    break
            else:
                merged.append((complex(c), s))
        self.terms = tuple((c, s) for c, s in merged if abs(c) >= _DROP)

    @classmethod
    def delta(cls, s: TubePoint, coef=1.0):
        return cls(s.ctx, [(coef, s)])

    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    def is_zero(self):
        return not self.terms

    @property
    def coefficients(self):
        return np.array([c for c, _ in self.terms], dtype=complex)

    @property
    def real_parts(self):
        return np.array([s.re for _, s in self.terms]).reshape(-1, self.ctx.dim)

    @property
    def imag_parts(self):
        return np.array([s.im for _, s in self.terms]).reshape(-1, self.ctx.dim)

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if other.ctx is not self.ctx:
            raise ContextMismatchError("elements belong to different contexts")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return AlgebraElement(self.ctx, self.terms + other.terms)

    def __neg__(self):
        return AlgebraElement(self.ctx, [(-c, s) for c, s in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, float, complex)):
            return AlgebraElement(self.ctx, [(scalar * c, s) for c, s in self.terms])
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return other * self
        return mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement) or other.ctx is not self.ctx:
            return NotImplemented
        if len(self.terms) != len(other.terms):
            return False
        d = self - other
        return d.is_zero()

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c:.6g})·δ[{s.re.tolist()}+i{s.im.tolist()}]" for c, s in self.terms)
        return f"AlgebraElement({body or '0'})"


def _eval_unchecked(a, F):
    if a.is_zero():
        return np.zeros(len(F), dtype=complex)
    X, Y = a.real_parts, a.imag_parts
    return np.exp(1j * (F @ X.T) - F @ Y.T) @ a.coefficients


def _require_in_C(ctx, f):
    f = as_point(f, ctx.dim, "functional")
    if not ctx.C.contains(f):
        raise DomainError(f"functional {f.tolist()} is not in C")
    return f


def gelfand_eval(a: AlgebraElement, f) -> complex:
    """Value of the Gelfand transform of ``a`` at the character ``f`` of C."""
    f = _require_in_C(a.ctx, f)
    return complex(_eval_unchecked(a, f[None, :])[0])


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Convolution product: bilinear extension of ``delta_s * delta_t = delta_{s+t}``."""
    if a.ctx is not b.ctx:
        raise ContextMismatchError("elements belong to different contexts")
    return AlgebraElement(a.ctx, [(c * d, s + t) for c, s in a.terms for d, t in b.terms])


def star(a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.ctx, [(c.conjugate(), star_point(s)) for c, s in a.terms])


def norm(a: AlgebraElement, rel_tol=TOL_NORM, seed=0) -> NormBracket:
    """Bracket the C*-norm ``sup_{f in C} |gelfand_eval(a, f)|``.

    A single term ``c delta_s`` has the closed form ``|c| alpha_C(s)``, with
    the sup attained at a minimizing vertex of ``f -> f(y)``; that case
    returns a zero-width bracket.  Otherwise see
    :func:`tubehost.sup_norm.bracket_sup`.
    """
    if a.is_zero():
        return NormBracket(0.0, 0.0, exact=True)
    if len(a.terms) == 1:
        c, s = a.terms[0]
        value, _ = minimize_linear(a.ctx.C, s.im)
        v = abs(c) * math.exp(-value)
        return NormBracket(v, v, exact=True)
    return bracket_sup(a.coefficients, a.real_parts, a.imag_parts, a.ctx.C, a.ctx.x0,
                       rel_tol=rel_tol, seed=seed)


def l1_norm(a: AlgebraElement) -> float:
    """``sum |c_k| alpha_C(s_k)``, the norm of ``a`` in l^1(S, alpha_C)."""
    return float(sum(abs(c) * math.exp(-support_value(a.ctx.C, s.im)) for c, s in a.terms))


def is_bounded_character(ctx: AbsoluteValueContext, f) -> bool:
    """Whether ``exp(i f)`` is an alpha_C-bounded character, i.e. ``f`` lies in C."""
    f = as_point(f, ctx.dim, "functional")
    return ctx.C.contains(f)


def multiplier_eval(ctx: AbsoluteValueContext, v, f) -> complex:
    """The unitary multiplier of the group element ``v`` at ``f``: ``exp(i f(v))``."""
    v = as_point(v, ctx.dim, "group element")
    f = _require_in_C(ctx, f)
    return cmath.exp(1j * float(f @ v))


def act(v, a: AlgebraElement) -> AlgebraElement:
    """The multiplier action of ``v`` in V: translates every term, ``delta_s -> delta_{v+s}``."""
    v = as_point(v, a.ctx.dim, "group element")
    return AlgebraElement(a.ctx, [(c, TubePoint(s.re + v, s.im, a.ctx)) for c, s in a.terms])


def one_param_norm(ctx: AbsoluteValueContext, x, b: float) -> float:
    """Norm of the holomorphic extension of ``t -> t x`` at ``i b``; equals ``exp(-b inf <C, x>)``."""
    if not b > 0:
        raise InvalidInputError("b must be positive")
    return norm(AlgebraElement.delta(one_param_point(ctx, x, 1j * b))).lower


class SmoothState:
    """A finitely supported probability measure on C, i.e. a mixture of point evaluations."""

    def __init__(self, atoms):
        atoms = list(atoms)
        if not atoms:
            raise InvalidInputError("a state needs at least one atom")
        w = np.array([float(a[0]) for a in atoms])
        if np.any(w <= 0):
            raise InvalidInputError("state weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise InvalidInputError(f"state weights sum to {w.sum()!r}, not 1")
        pts = tuple(as_point(a[1], name="atom") for a in atoms)
        if len({p.size for p in pts}) != 1:
            raise InvalidInputError("atoms differ in dimension")
        self.weights = tuple(w.tolist())
        self.points = pts

    @classmethod
    def point(cls, f):
        return cls([(1.0, f)])

    def validate(self, ctx):
        for p in self.points:
            _require_in_C(ctx, p)
        return self

    def evaluate_multiplier(self, v):
        """``phi(eta(v)) = sum_j w_j exp(i f_j(v))``."""
        v = np.asarray(v, dtype=float)
        return complex(sum(w * cmath.exp(1j * float(p @ v)) for w, p in zip(self.weights, self.points)))


def momentum(state: SmoothState) -> np.ndarray:
    """``(1/i) d/dv phi(eta(v))`` at ``v = 0``, which is the barycenter ``sum_j w_j f_j``."""
    W = np.array(state.weights)
    P = np.array(state.points)
    return W @ P


@dataclass(frozen=True)
class MomentumSet:
    hull: PolyhedralSet
    # True when C has recession directions that no supplied direction witnesses
    recession_unwitnessed: bool


def momentum_set(ctx: AbsoluteValueContext, states, directions=()) -> MomentumSet:
    """Convex hull of the momenta of ``states``, optionally with recession ``directions`` appended.

    The flag ``recession_unwitnessed`` is raised when some ray of C is not in
    the cone spanned by ``directions``; only then can the hull fall short of
    C for reasons other than the choice of states.
    """
    states = list(states)
    if not states:
        raise InvalidInputError("momentum_set needs at least one state")
    pts = [momentum(s.validate(ctx)) for s in states]
    dirs = np.array(directions, dtype=float).reshape(-1, ctx.dim)
    hull = PolyhedralSet(np.array(pts), dirs if len(dirs) else None, dim=ctx.dim)
    rays = ctx.C.rays
    if len(rays) == 0:
        unwitnessed = False
    elif len(dirs) == 0:
        unwitnessed = True
    else:
        probe = PolyhedralSet(np.zeros((1, ctx.dim)), dirs, dim=ctx.dim)
        unwitnessed = not all(probe.contains(r) for r in rays)
    return MomentumSet(hull, unwitnessed)


def separation_witness(ctx: AbsoluteValueContext, f, g) -> np.ndarray:
    """A group element ``v`` whose multiplier tells ``f`` and ``g`` apart.

    Uses the coordinate where ``f - g`` is largest and scales so that
    ``<f - g, v> = pi/2``, giving ``|exp(i f(v)) - exp(i g(v))| = sqrt(2)``.
    """
    f = _require_in_C(ctx, f)
    g = _require_in_C(ctx, g)
    d = f - g
    j = int(np.argmax(np.abs(d)))
    if abs(d[j]) <= TOL * max(1.0, float(np.abs(f).max())):
        raise InvalidInputError("functionals coincide")
    v = np.zeros(ctx.dim)
    v[j] = (math.pi / 2) / d[j]
    return v


def half_plane_instance(m: float) -> AbsoluteValueContext:
    """The upper half plane with C = [m, oo), whose algebra is C_0([m, oo))."""
    m = float(m)
    if not math.isfinite(m):
        raise InvalidInputError("m must be finite")
    return AbsoluteValueContext(PolyhedralSet([[m]], [[1.0]], dim=1))

