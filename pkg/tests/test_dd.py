import numpy as np
import pytest

from tubehost import _dd
from oracles import halfspace_vertices


def _sorted_rows(R):
    return np.array(sorted(np.round(R, 9).tolist()))


def test_quadrant_rays():
    lin, rays = _dd.cone_generators(np.eye(2), 2)
    assert lin.shape == (0, 2)
    assert np.allclose(_sorted_rows(rays), [[0, 1], [1, 0]])


def test_halfplane_has_lineality():
    lin, rays = _dd.cone_generators([[1.0, 0.0]], 2)
    assert lin.shape == (1, 2)
    assert abs(abs(lin[0, 1]) - 1.0) < 1e-12
    assert np.allclose(rays, [[1.0, 0.0]])


def test_no_constraints_is_everything():
    lin, rays = _dd.cone_generators(np.zeros((0, 3)), 3)
    assert lin.shape == (3, 3) and rays.shape == (0, 3)


def test_line_is_pure_lineality():
    # x >= 0 and -x >= 0 in R^2 leaves the y axis
    lin, rays = _dd.cone_generators([[1.0, 0.0], [-1.0, 0.0]], 2)
    assert lin.shape == (1, 2) and rays.shape == (0, 2)


def test_pointed_cone_over_square_matches_vertex_oracle():
    # cone over the square [-1,1]^2 at height 1: x3 >= |x1|, x3 >= |x2|
    A = np.array([[1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], dtype=float)
    _, rays = _dd.cone_generators(A, 3)
    tops = rays / rays[:, 2:3]
    expect = halfspace_vertices([[1, 0], [-1, 0], [0, 1], [0, -1]], [-1, -1, -1, -1])
    assert np.allclose(_sorted_rows(tops[:, :2]), expect)


@pytest.mark.parametrize("seed", range(8))
def test_enumeration_and_incremental_agree(seed):
    rng = np.random.default_rng(seed)
    G = np.hstack([rng.normal(size=(7, 3)), np.ones((7, 1))])
    F1 = _dd.cone_facets(G, 4)
    lin, rays = _dd.incremental_generators(G, 4)
    F2 = np.vstack([rays, lin, -lin])
    assert np.allclose(_sorted_rows(F1), _sorted_rows(F2), atol=1e-7)


def test_nearly_coincident_generators_keep_all_facets():
    # two pairs of points about 1e-4 apart used to lose facets in the incremental method
    V = np.array([[-0.63489, 0.69107, 1.12025], [-0.63484, 0.69104, 1.12031],
                  [0.40941, 1.85919, 0.37874], [0.40920, 1.85817, 0.38324],
                  [-1.97056, -0.06314, -1.99791], [0.17524, -1.64601, -0.19055],
                  [0.17468, -1.64598, -0.19144], [30.0, 10.0, -30.0], [30.0, 16.0, 5.0]])
    G = np.hstack([V, np.ones((len(V), 1))])
    F = _dd.cone_facets(G, 4)
    assert np.all(G @ F.T >= -1e-9)
    # every facet is tight on at least three affinely independent points
    for f in F:
        tight = V[np.abs(G @ f) <= 1e-9]
        assert np.linalg.matrix_rank(tight[1:] - tight[0]) == 2
    # and qhull agrees on the facet count
    from scipy.spatial import ConvexHull
    hull = ConvexHull(V)
    normals = {tuple(np.round(eq[:3] / np.linalg.norm(eq[:3]), 6)) for eq in hull.equations}
    assert len(F) == len(normals)
