from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukaidual import nilorbit as N
from mukaidual.linalg import RationalMatrix as M


def point(h, t, w_rows, psi_rows):
    return N.CotangentPoint(h, t, M(w_rows, h), M(psi_rows, h - t))


def std_point(psi=((1, 0), (0, 1))):
    return point(4, 2, [[1, 0, 0, 0], [0, 1, 0, 0]], psi)


def test_springer_block_example():
    n = N.springer(std_point())
    assert n == M([[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
    assert (n @ n).is_zero() and n.rank() == 2


def test_springer_zero_psi():
    assert N.springer(std_point(((0, 0), (0, 0)))).is_zero()


def test_rank_one_psi_h5():
    p = point(5, 2, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], [[1, 2, 0], [2, 4, 0]])
    assert N.springer(p).rank() == 1
    assert N.corank(p) == 1


def test_corank_examples():
    assert N.corank(std_point()) == 0
    p = point(6, 3, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]], [[0] * 3] * 3)
    assert N.corank(p) == 3


def test_dual_point_block_example():
    n = N.springer(std_point())
    d = N.dual_point(n, 2)
    assert d.W == M([[0, 0, 1, 0], [0, 0, 0, 1]])
    assert N.springer(d).T == n
    assert N.dual_point(N.springer(d), 2) == std_point()


def test_dual_point_off_orbit():
    n = N.springer(std_point(((1, 0), (0, 0))))
    with pytest.raises(N.OffDenseOrbitError):
        N.dual_point(n, 2)


def test_dual_point_rejects_non_square_zero():
    with pytest.raises(N.NotSquareZeroError):
        N.dual_point(M.identity(4), 2)


def test_fiber_examples():
    generic = N.springer(std_point())
    assert N.fiber_space(generic, 2).grassmann == (0, 0)
    zero = M.zeros(6, 6)
    assert N.fiber_space(zero, 2).grassmann == (2, 6)
    p = point(5, 2, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], [[1, 0, 0], [0, 0, 0]])
    f = N.fiber_space(N.springer(p), 2)
    assert f.k == 1 and f.grassmann == (1, 3) and f.dim == 2


def test_fiber_dimension_by_parameter_count():
    # W between im N (dim 1) and ker N (dim 4) in Q^5: lines in a 3-dim quotient
    p = point(5, 2, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]], [[1, 0, 0], [0, 0, 0]])
    n = N.springer(p)
    image = n.column_space()
    kernel = n.nullspace()
    assert image.nrows == 1 and kernel.nrows == 4
    # echelon charts of G(1, 3) have dimension 1 * (3 - 1)
    assert N.fiber_space(n, 2).dim == 1 * (kernel.nrows - image.nrows - 1)


def test_fiber_identity_exhaustive():
    for h in range(2, 13):
        for t in range(1, h // 2 + 1):
            for k in range(0, t + 1):
                assert h - 2 * k == (h - 2 * t + 1) + 2 * (t - k) - 1


def test_deform_examples():
    p = std_point()
    assert N.deform(p, 0) == N.springer(p)
    a = N.deform(p, 1)
    assert a @ a == a and a.rank() == 2
    a3 = N.deform(p, 3)
    assert a3 @ a3 == a3.scale(3)
    # eigenvalues {0, 3}: A (A - 3) = 0 and neither factor vanishes
    assert not a3.is_zero() and not (a3 - M.identity(4).scale(3)).is_zero()


@given(st.integers(0, 2**32), st.integers(2, 7))
def test_random_samples(seed, h):
    rng = N.sample_rng(seed, "t", h)
    t = rng.randint(1, h // 2)
    p = N.random_point(rng, h, t)
    gamma = N.random_gamma(rng)
    assert N.check_sample(p, gamma) == []


def test_campaign_is_deterministic():
    a = N.springer_campaign(5, 2, 50, 7).to_dict()
    b = N.springer_campaign(5, 2, 50, 7).to_dict()
    assert a == b
    assert a["failures"] == []
    assert sum(a["histogram"].values()) == 50


def test_campaign_rejects_bad_args():
    with pytest.raises(ValueError):
        N.springer_campaign(3, 2, 10, 0)
    with pytest.raises(ValueError):
        N.springer_campaign(4, 1, 0, 0)


def test_cotangent_dim_identity():
    for h in range(2, 65):
        for t in range(1, h // 2 + 1):
            assert N.cotangent_dim(h, t) == h * h - (h - t) ** 2 - t * t


def test_partition_examples():
    assert N.dual_partition([2, 2, 1]) == [3, 2]
    for h in range(2, 10):
        for t in range(1, h // 2 + 1):
            assert N.dual_partition([2] * t + [1] * (h - 2 * t)) == [h - t, t]
            assert N.orbit_dim([2] * t + [1] * (h - 2 * t)) == 2 * t * (h - t)
    assert N.flag_dims([2, 2, 1], (0, 1)) == (3,)
    assert N.orbit_dim([2, 2]) == 16 - 8 == N.cotangent_dim(4, 2)
    assert N.orbit_dim([1] * 5) == 0


def test_flag_resolutions_small():
    for h in range(1, 6):
        assert N.verify_flag_resolution_dims(h) == []


def test_partition_count():
    assert [len(list(N.partitions(h))) for h in range(1, 8)] == [1, 2, 3, 5, 7, 11, 15]


def test_alpha_corank_examples():
    e = lambda *idx: M([[int(j == i) for j in range(4)] for i in idx], 4)
    assert N.alpha_corank(e(0, 1), e(0, 1)) == 2
    assert N.alpha_corank(e(0, 1), e(2, 3)) == 0
    assert N.alpha_corank(e(0, 1), e(1, 2, 3)) == 1


def test_point_validation():
    with pytest.raises(ValueError):
        point(4, 2, [[1, 1, 0, 0], [0, 1, 0, 0]], [[0, 0], [0, 0]])  # not reduced
    with pytest.raises(ValueError):
        point(3, 2, [[1, 0, 0], [0, 1, 0]], [[0], [0]])  # t > h/2
    p = N.CotangentPoint.from_subspace([[2, 4, 0, 0], [0, 1, 1, 0]], [[1, 0], [0, 1]])
    assert p.W == M([[1, 0, -2, 0], [0, 1, 1, 0]])


def test_rational_gamma():
    p = std_point()
    g = Fraction(-2, 3)
    a = N.deform(p, g)
    assert a @ a == a.scale(g)


def test_deform_thousand_samples():
    rng = N.sample_rng(7, "deform")
    for _ in range(1000):
        h = rng.randint(2, 8)
        t = rng.randint(1, h // 2)
        p = N.random_point(rng, h, t)
        gamma = N.random_gamma(rng)
        a = N.deform(p, gamma)
        assert a @ a == a.scale(gamma)
        if gamma != 0:
            assert a.rank() == t
