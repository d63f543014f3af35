from math import comb

import pytest
import sympy

from mukaidual import corresp as R
from mukaidual.lattice import MukaiVector as V
from mukaidual.strata import RegionError
from mukaidual.verify import h_grid


def test_delta_audit_examples():
    assert R.delta_dimension_audit(V(1, 1, 0), 6) == []
    assert R.delta_dimension_audit(V(3, 1, 2), 6) == []
    with pytest.raises(RegionError):
        R.delta_dimension_audit(V(3, 1, 3), 6)


def test_delta_audit_grid():
    for g, v in h_grid(30, 12):
        assert R.delta_dimension_audit(v, g) == []


def test_tau_selfdual_examples():
    assert R.tau_selfdual_check([[-2]])
    assert R.tau_selfdual_check([[-2, 1], [1, 0]])
    with pytest.raises(R.PreconditionError):
        R.tau_selfdual_check([[-4]])


def test_tau_selfdual_other_theta():
    assert R.tau_selfdual_check([[0, 1], [1, 0]], theta=[1, -1])


def test_sigma_g4():
    assert R.sigma_g4_check() == {"delta1_eigen": -4, "graph_eigen": 3, "relation": True}
    assert R.top_chern_cotangent_projective(3) == -4 == -R.euler_projective(3)
    assert R.graph_eigen_projective(3) == 3


def test_sigma_relation_candidates():
    # the relation (a - 4)^2 = 1 admits a = 3 and a = 5; the excess-bundle oracle picks 3
    assert R.relation_solutions(-4) == [3, 5]
    assert R.sigma_g4_check(5)["relation"] is True
    assert R.sigma_g4_check(4)["relation"] is False


def test_chern_classes_match_sympy():
    h = sympy.symbols("h")
    for n in range(1, 8):
        poly = sympy.Poly(sympy.expand((1 + h) ** (n + 1)), h)
        for k in range(n + 1):
            assert R.chern_class_projective(n, k) == poly.coeff_monomial(h**k)
        assert R.euler_projective(n) == n + 1


def test_sym_euler_examples():
    assert R.sym_euler(3, 3) == -4
    assert R.sym_euler(5, 0) == 1
    assert R.sym_euler(2, 1) == -2
    assert R.sym_euler(2, 9) == 0
    with pytest.raises(ValueError):
        R.sym_euler(3, -1)


def test_sym_euler_matches_sympy():
    t = sympy.symbols("t")
    for g in range(2, 12):
        poly = sympy.Poly(sympy.expand((1 - t) ** (2 * g - 2)), t)
        for n in range(2 * g):
            assert R.sym_euler(g, n) == poly.coeff_monomial(t**n)


def test_lagrangian_examples():
    assert R.lagrangian_self_intersection(3) == 4
    assert R.lagrangian_self_intersection(6) == 210
    for g in range(2, 41):
        assert R.lagrangian_self_intersection(g) == comb(2 * g - 2, g) == (-1) ** g * R.sym_euler(g, g)
        assert R.jacobian_self_intersection(g) == 0


def test_correspondence_degree_check():
    model = R.CohomologyModel(("a", "b"), (0, 2), {0: [[1]], 2: [[-2]]})
    with pytest.raises(ValueError):
        R.Correspondence(model, [[0, 1], [0, 0]])
    shifted = R.Correspondence(model, [[0, 0], [1, 0]], shift=2)
    assert (shifted @ R.Correspondence.identity(model)).shift == 2


def test_model_validation():
    with pytest.raises(ValueError):
        R.CohomologyModel(("a", "b"), (2, 2), {2: [[1, 2], [3, 1]]})
    with pytest.raises(ValueError):
        R.CohomologyModel(("a",), (-1,), {})
