"""Named verification checks, each run on one polyhedral set.

Every check returns a :class:`CheckResult`.  On failure ``violated`` names
the invariant that broke, so a report can say what went wrong and not only
that something did.  Checks that draw random samples take a numpy Generator
and report provenance ``"sampled"``; the others are ``"exact"``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from .convex import (
    b_cone,
    clip_radius,
    clipped_hausdorff_distance,
    dual_cone,
    is_bounded,
    is_subset,
    minimize_linear,
    recession_cone,
    reconstruct_from_support,
    set_equal,
)
from .sampling import random_element, random_functional_in, random_interior_direction, random_tube_point
from .tube import AbsoluteValueContext, alpha, check_absolute_value_axioms

RECON_EPSILONS = (1e-1, 1e-2, 1e-3)
RECON_RATE = 10.0
HOMOMORPHISM_RTOL = 1e-12


@dataclass
class CheckResult:
    passed: bool
    provenance: str
    violated: str | None = None
    details: dict = field(default_factory=dict)


def _result(failures, provenance, details):
    return CheckResult(not failures, provenance, failures[0] if failures else None, details)


def check_bcdual(C, rng=None, **_):
    """The dual of B(C) is the recession cone of C."""
    ok = set_equal(dual_cone(b_cone(C)), recession_cone(C))
    return _result([] if ok else ["dual_of_b_cone_is_recession_cone"], "exact", {})


def check_boundedness(C, rng=None, **_):
    """Three independent boundedness tests agree."""
    triad = {"no_rays": is_bounded(C),
             "recession_cone_zero": recession_cone(C).is_zero(),
             "b_cone_full": b_cone(C).is_full_space()}
    ok = len(set(triad.values())) == 1
    return _result([] if ok else ["boundedness_triad"], "exact", triad)


def check_absolute_value(C, rng, samples=1000, **_):
    ctx = AbsoluteValueContext(C)
    pairs = [(random_tube_point(rng, ctx), random_tube_point(rng, ctx)) for _ in range(samples)]
    rep = check_absolute_value_axioms(ctx, pairs)
    fails = []
    if rep.star_violations:
        fails.append("alpha_star_invariance")
    if rep.submult_violations:
        fails.append("submultiplicativity")
    return _result(fails, "sampled", {"pairs": rep.pairs, "worst_star_gap": rep.worst_star_gap,
                                      "worst_submult_slack": rep.worst_submult_slack})


def check_single_term_norm(C, rng, samples=20, **_):
    ctx = AbsoluteValueContext(C)
    worst = 0.0
    fails = []
    for _ in range(samples):
        s = random_tube_point(rng, ctx)
        c = complex(rng.normal(), rng.normal())
        br = alg.norm(alg.AlgebraElement.delta(s, c))
        expect = abs(c) * alpha(ctx, s)
        worst = max(worst, abs(br.lower - expect) / expect)
        if br.width != 0.0 or br.lower != expect:
            fails = ["single_term_norm_equals_alpha"]
    return _result(fails, "sampled", {"samples": samples, "worst_rel_error": worst})


def _magnitude(a, F):
    """``sum_k |c_k| |exp(i f(s_k))|``, a cancellation-free scale for values of ``a``."""
    return np.exp(-(F @ a.imag_parts.T)) @ np.abs(a.coefficients)


def check_homomorphism(C, rng, samples=10, points=100, **_):
    ctx = AbsoluteValueContext(C)
    worst_mul = worst_star = 0.0
    for _ in range(samples):
        a, b = random_element(rng, ctx), random_element(rng, ctx)
        F = np.array([random_functional_in(rng, C) for _ in range(points)])
        ga, gb = alg._eval_unchecked(a, F), alg._eval_unchecked(b, F)
        gab = alg._eval_unchecked(alg.mul(a, b), F)
        scale = _magnitude(a, F) * _magnitude(b, F)
        worst_mul = max(worst_mul, float(np.max(np.abs(gab - ga * gb) / scale)))
        gs = alg._eval_unchecked(alg.star(a), F)
        worst_star = max(worst_star, float(np.max(np.abs(gs - np.conj(ga)) / _magnitude(a, F))))
    fails = []
    if worst_mul > HOMOMORPHISM_RTOL:
        fails.append("gelfand_multiplicative")
    if worst_star > HOMOMORPHISM_RTOL:
        fails.append("gelfand_star")
    return _result(fails, "sampled", {"elements": samples, "points": points,
                                      "worst_mul_rel": worst_mul, "worst_star_rel": worst_star})


def check_cstar_identity(C, rng, samples=3, tol_norm=alg.TOL_NORM, seed=0, **_):
    ctx = AbsoluteValueContext(C)
    worst = 0.0
    brackets = []
    for _ in range(samples):
        a = random_element(rng, ctx, max_terms=3)
        na = alg.norm(a, rel_tol=tol_norm, seed=seed)
        naa = alg.norm(alg.mul(alg.star(a), a), rel_tol=tol_norm, seed=seed)
        gap = abs(naa.mid - na.mid ** 2) / (na.mid ** 2)
        worst = max(worst, gap)
        brackets.append({"norm_a": [na.lower, na.upper], "norm_star_a_a": [naa.lower, naa.upper]})
    fails = [] if worst <= 3.0 * tol_norm else ["cstar_identity"]
    return _result(fails, "sampled", {"worst_rel_gap": worst, "brackets": brackets})


def check_momentum(C, rng=None, **_):
    ctx = AbsoluteValueContext(C)
    states = [alg.SmoothState.point(v) for v in C.vertices]
    ms = alg.momentum_set(ctx, states)
    inside = all(C.contains(v) for v in ms.hull.vertices)
    fails = [] if inside else ["momentum_hull_inside_C"]
    if is_bounded(C):
        if not set_equal(ms.hull, C):
            fails.append("momentum_saturation")
    elif not ms.recession_unwitnessed:
        fails.append("recession_flag")
    return _result(fails, "exact", {"states": len(states), "bounded": is_bounded(C),
                                    "recession_unwitnessed": ms.recession_unwitnessed})


def check_reconstruction(C, rng=None, epsilons=RECON_EPSILONS, **_):
    R = clip_radius(C)
    dists = []
    fails = []
    for eps in epsilons:
        D = reconstruct_from_support(C, eps)
        if not is_subset(C, D) and "reconstruction_contains_C" not in fails:
            fails.append("reconstruction_contains_C")
        dists.append(clipped_hausdorff_distance(C, D, R))
    if any(d2 > d1 + 1e-9 * R for d1, d2 in zip(dists, dists[1:])):
        fails.append("reconstruction_monotone")
    if any(d > RECON_RATE * eps * R for d, eps in zip(dists, epsilons)):
        fails.append("reconstruction_rate")
    return _result(fails, "exact", {"radius": R, "epsilons": list(epsilons), "distances": dists})


def check_minimizer(C, rng, samples=20, **_):
    ctx_dirs = len(C.rays) > 0
    fails = []
    for _ in range(samples):
        if ctx_dirs:
            x = random_interior_direction(rng, AbsoluteValueContext(C))
        else:
            x = rng.normal(size=C.dim)
        val, arg = minimize_linear(C, x)
        brute = C.vertices @ x
        listed = any(np.array_equal(arg, v) for v in C.vertices)
        if val != float(brute.min()) or not listed:
            fails = ["minimizer_matches_vertex_scan"]
    return _result(fails, "sampled", {"samples": samples})


CHECKS = {
    "bcdual": check_bcdual,
    "boundedness": check_boundedness,
    "absolute_value": check_absolute_value,
    "single_term_norm": check_single_term_norm,
    "homomorphism": check_homomorphism,
    "cstar_identity": check_cstar_identity,
    "momentum": check_momentum,
    "reconstruction": check_reconstruction,
    "minimizer": check_minimizer,
}

# checks that need a tube semigroup, i.e. B(C) with nonempty interior
NEEDS_CONTEXT = {"absolute_value", "single_term_norm", "homomorphism", "cstar_identity", "momentum"}
