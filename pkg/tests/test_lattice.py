import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukaidual import lattice as L
from mukaidual.lattice import MukaiVector as V

vectors = st.builds(V, st.integers(-20, 20), st.integers(-5, 5), st.integers(-20, 20))
genera = st.integers(2, 40)


def test_pairing_examples():
    assert L.pairing(V(1, 0, 0), V(0, 0, 1), 9) == -1
    assert L.pairing(V(1, 1, 0), V(1, 1, 0), 2) == 2
    assert L.pairing(V(1, 1, 0), V(1, 1, 0), 6) == L.dim_moduli(V(1, 1, 0), 6) - 2 == 10


def test_euler_examples():
    assert L.euler(V(1, 1, 0)) == 1
    assert all(L.euler(V(0, 1, n)) == n for n in range(-3, 4))
    assert L.euler(V(2, 1, -1)) == 1


@pytest.mark.parametrize("v,g,dim", [(V(1, 1, 0), 6, 12), (V(3, 1, 2), 6, 0)])
def test_dim_moduli(v, g, dim):
    assert L.dim_moduli(v, g) == dim


@pytest.mark.parametrize("g", range(2, 15))
def test_jacobian_dimension(g):
    assert L.dim_moduli(V(0, 1, 1 - g), g) == 2 * g


def test_region_examples():
    assert L.in_region(V(1, 1, 0), 2) == {"in_V": True, "in_H": True}
    assert L.in_region(V(3, 1, 3), 6) == {"in_V": False, "in_H": False}
    assert L.in_region(V(-1, 1, 0), 6) == {"in_V": False, "in_H": False}
    # zero-dimensional support is excluded
    assert L.in_region(V(0, 0, 1), 7)["in_V"] is False


def test_tensor_examples():
    for g in range(2, 10):
        for n in range(0, 6):
            assert L.tensor(V(1, 0, 1 - n), 1, g) == V(1, 1, g - n)
    assert L.tensor(V(0, 1, 0), 1, 2) == V(0, 1, 2)


@given(vectors, genera, st.integers(-4, 4))
def test_tensor_matches_matrix_and_preserves_pairing(v, g, k):
    assert L.tensor(v, k, g) == L.apply(L.tensor_matrix(k, g), v)
    assert L.pairing(L.tensor(v, k, g), L.tensor(v, k, g), g) == L.pairing(v, v, g)
    assert L.tensor(L.tensor(v, k, g), -k, g) == v


def test_reflection_examples():
    assert L.sigma(V(1, 1, 0)) == V(0, 1, 1)
    assert L.tau(V(1, 1, -2)) == V(2, 1, -1)
    for g in range(2, 12):
        for n in range(0, 2 * g - 1):
            assert L.sigma_tau(L.jacobian_vector(n, g)) == V(0, 1, g - 1 - n)
            assert L.sigma_tau(L.jacobian_vector(n, g)) == L.jacobian_vector(2 * g - 2 - n, g)


@given(vectors, genera)
def test_reflections_are_isometric_involutions(v, g):
    for f in (L.sigma, L.tau, L.neg):
        assert f(f(v)) == v
        assert L.pairing(f(v), f(v), g) == L.pairing(v, v, g)
    assert L.sigma_tau(v) == L.sigma(L.tau(v))


@pytest.mark.parametrize("g", [2, 3, 7, 19])
def test_generators_are_isometries(g):
    for name, f in L.GENERATORS.items():
        assert L.is_isometry(f(g), g), name
    assert L.is_isometry(L.IDENTITY, g)
    assert not L.is_isometry(((1, 0, 0), (0, 2, 0), (0, 0, 1)), g)


def test_g7_example():
    m = ((2, 12, 3), (1, 5, 1), (3, 12, 2))
    assert L.is_isometry(m, 7)
    assert L.gamma_criterion(m, 7) is False
    assert L.apply(m, V(0, 0, 1)) == V(3, 1, 2)
    assert L.gamma_criterion(L.IDENTITY, 7) is True
    assert L.gamma_criterion(L.SIGMA, 7) is True
    with pytest.raises(ValueError):
        L.LatticeIsometry(((1, 1, 0), (0, 1, 0), (0, 0, 1)), 7)


def test_criterion_rejects_non_isometry():
    with pytest.raises(ValueError):
        L.gamma_criterion(((2, 0, 0), (0, 1, 0), (0, 0, 1)), 5)


def test_o2_identity_small_cases():
    for g in (2, 7, 20):
        assert L.verify_o2_identity(g)
    # the hand computation at g=2: (r, d, s) -> (r, d + 2r, s + 4d + 4r)
    assert L.tensor(V(1, 2, 3), 2, 2) == V(1, 2 + 2, 3 + 4 * 2 + 4 * 1)


@pytest.mark.parametrize("g", [3, 5, 7, 10])
def test_bfs_images_satisfy_criterion(g):
    images = L.bfs_images(g, 4)
    assert V(0, 0, 1) in images and images[V(0, 0, 1)] == ()
    for w in images:
        assert L.vector_criterion(w, g)


def test_bfs_depth_zero():
    assert L.bfs_images(6, 0) == {V(0, 0, 1): ()}


def test_constructors():
    for g in range(2, 12):
        assert L.hilbert_vector(g, g) == V(1, 1, 0)
        assert L.jacobian_vector(g, g) == V(0, 1, 1)
        assert L.jacobian_vector(g - 1, g) == V(0, 1, 0)


@pytest.mark.parametrize("bad", [1, 0, -3, 2.0, True])
def test_genus_validation(bad):
    with pytest.raises(ValueError):
        L.check_genus(bad)


def test_isometry_composition_and_det():
    s = L.LatticeIsometry(L.SIGMA, 5)
    t = L.LatticeIsometry(L.TAU, 5)
    assert (s @ t).m == L.matmul3(L.SIGMA, L.TAU)
    assert s.det == -1


def test_criterion_property_preserved_by_generators():
    import random

    rng = random.Random(20261018)
    maps = {
        "sigma": L.sigma,
        "tau": L.tau,
        "-Id": L.neg,
        "O(1)": lambda v, g: L.tensor(v, 1, g),
        "O(-1)": lambda v, g: L.tensor(v, -1, g),
    }
    checked = 0
    while checked < 10_000:
        g = rng.randint(2, 40)
        v = V(rng.randint(-60, 60), rng.randint(-5, 5), rng.randint(-60, 60))
        if not L.vector_criterion(v, g):
            continue
        checked += 1
        for name, f in maps.items():
            w = f(v, g) if name.startswith("O(") else f(v)
            assert L.vector_criterion(w, g), (name, v, g)


def test_tensor_composition_exhaustive():
    v = V(3, -2, 7)
    for g in (2, 5, 11):
        for a in range(-10, 11):
            va = L.tensor(v, a, g)
            for b in range(-10, 11):
                assert L.tensor(va, b, g) == L.tensor(v, a + b, g)
