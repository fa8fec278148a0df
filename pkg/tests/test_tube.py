import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tubehost import (
    AbsoluteValueContext,
    ContextMismatchError,
    DegenerateConeError,
    InvalidInputError,
    OutsideSemigroupError,
    PolyhedralSet,
    TubePoint,
    alpha,
    check_absolute_value_axioms,
    multiply,
    one_param_point,
    star,
    support_value,
)
from tubehost.algebra import half_plane_instance
from tubehost.sampling import generator, random_context, random_tube_point


@pytest.fixture
def line():
    return half_plane_instance(0.5)


def test_multiply_adds_components(line):
    s = multiply(line.point([1.0], [1.0]), line.point([2.0], [3.0]))
    assert s.re.tolist() == [3.0] and s.im.tolist() == [4.0]
    assert (line.point([1.0], [1.0]) + line.point([2.0], [3.0])) == s


def test_point_plus_its_star_is_imaginary(line):
    s = line.point([1.7], [0.3])
    t = s + s.star()
    assert t.re.tolist() == [0.0] and t.im.tolist() == [0.6]


def test_star(line):
    s = line.point([1.0], [2.0])
    assert star(s) == line.point([-1.0], [2.0])
    assert star(star(s)) == s
    i = line.point([0.0], [2.0])
    assert star(i).im.tolist() == i.im.tolist()


def test_imaginary_part_must_be_interior(line):
    with pytest.raises(OutsideSemigroupError):
        line.point([0.0], [0.0])
    with pytest.raises(OutsideSemigroupError):
        line.point([0.0], [-1.0])


def test_contexts_do_not_mix():
    a, b = half_plane_instance(0.0), half_plane_instance(0.0)
    with pytest.raises(ContextMismatchError):
        multiply(a.point([0.0], [1.0]), b.point([0.0], [1.0]))


def test_degenerate_cone_has_no_semigroup():
    with pytest.raises(DegenerateConeError):
        AbsoluteValueContext(PolyhedralSet([[0.0, 0.0]], [[1.0, 0.0], [-1.0, 0.0]]))


@pytest.mark.parametrize("m", [-2.0, 0.0, 0.5, 3.0])
def test_alpha_on_half_line(m):
    ctx = half_plane_instance(m)
    for x, y in [(0.0, 1.0), (3.0, 0.25), (-1.0, 7.0)]:
        assert alpha(ctx, ctx.point([x], [y])) == pytest.approx(math.exp(-m * y), rel=1e-12)


def test_alpha_of_point_set_is_one():
    ctx = AbsoluteValueContext(PolyhedralSet([[0.0, 0.0]]))
    assert alpha(ctx, ctx.point([3.0, -1.0], [-2.0, 5.0])) == 1.0


def test_alpha_of_segment():
    ctx = AbsoluteValueContext(PolyhedralSet([[1, 0], [0, 1]]))
    assert alpha(ctx, ctx.point([0, 0], [1, 1])) == pytest.approx(math.exp(-1.0), rel=1e-15)


def test_axioms_on_nonnegative_half_line_hold_with_equality():
    ctx = half_plane_instance(0.0)
    pairs = [(ctx.point([1.0], [0.5]), ctx.point([-2.0], [3.0]))]
    rep = check_absolute_value_axioms(ctx, pairs)
    assert rep.ok and rep.worst_submult_slack == 0.0


def test_axioms_on_singleton_are_log_linear():
    ctx = AbsoluteValueContext(PolyhedralSet([[0.7, -1.3]]))
    rng = generator(2)
    pairs = [(random_tube_point(rng, ctx), random_tube_point(rng, ctx)) for _ in range(50)]
    rep = check_absolute_value_axioms(ctx, pairs)
    assert rep.ok and abs(rep.worst_submult_slack) < 1e-13


def test_axiom_report_counts_violations(monkeypatch):
    import tubehost.tube as tube

    # exp(+sum of parts) is neither star-invariant nor submultiplicative on these pairs
    monkeypatch.setattr(tube, "alpha", lambda ctx, s: math.exp(float(s.re.sum() + s.im.sum())))
    ctx = half_plane_instance(1.0)
    pairs = [(ctx.point([1.0], [1.0]), ctx.point([2.0], [1.0]))] * 3
    rep = tube.check_absolute_value_axioms(ctx, pairs)
    assert rep.pairs == 3 and rep.star_violations == 6
    assert rep.submult_violations == 0 and not rep.ok
    pairs = [(ctx.point([-1.0], [1.0]), ctx.point([-1.0], [1.0]))]
    monkeypatch.setattr(tube, "alpha", lambda ctx, s: float(s.im.sum()) ** 2)
    rep = tube.check_absolute_value_axioms(ctx, pairs)
    assert rep.submult_violations == 1 and rep.worst_submult_slack == pytest.approx(3.0)


def test_one_param_point(line):
    p = one_param_point(line, [1.0], 1j)
    assert p.re.tolist() == [0.0] and p.im.tolist() == [1.0]
    p = one_param_point(line, [1.0], 2.0 + 3.0j)
    assert alpha(line, p) == pytest.approx(math.exp(-0.5 * 3.0), rel=1e-14)


def test_one_param_point_is_additive():
    ctx = AbsoluteValueContext(PolyhedralSet([[0, 1]], [[1, 0], [0, 1]]))
    x = [1.0, 2.0]
    z1, z2 = 0.5 + 1j, -2.0 + 0.25j
    assert one_param_point(ctx, x, z1) + one_param_point(ctx, x, z2) == one_param_point(ctx, x, z1 + z2)


def test_one_param_point_rejects_bad_input(line):
    with pytest.raises(InvalidInputError):
        one_param_point(line, [1.0], 1.0 + 0j)
    with pytest.raises(InvalidInputError):
        one_param_point(line, [-1.0], 1j)


def test_hashable(line):
    s = line.point([1.0], [2.0])
    assert len({s, line.point([1.0], [2.0]), star(s)}) == 2


@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4))
def test_semigroup_closed_and_log_superadditive(seed, dim):
    rng = generator(seed)
    ctx = random_context(rng, dim)
    s, t = random_tube_point(rng, ctx), random_tube_point(rng, ctx)
    u = s + t
    assert ctx.contains_im(u.im)
    lhs = support_value(ctx.C, u.im)
    rhs = support_value(ctx.C, s.im) + support_value(ctx.C, t.im)
    assert lhs >= rhs - 1e-12 * max(1.0, abs(rhs))
    assert star(s + t) == star(s) + star(t)
