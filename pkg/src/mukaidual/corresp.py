"""Correspondences on small explicit cohomology lattices.

Only finite-rank models are handled: a basis with degrees and a symmetric
pairing on each degree block.  A correspondence is a square rational matrix
acting on coordinate columns; composition is matrix multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .lattice import check_genus, dim_moduli, in_h
from .linalg import RationalMatrix, as_matrix
from .strata import RegionError, build_collection, grassmannian_dim


@dataclass(frozen=True)
class CohomologyModel:
    labels: tuple
    degrees: tuple
    pairings: dict

    def __post_init__(self):
        if len(self.labels) != len(self.degrees):
            raise ValueError("one degree per basis element")
        if any(d < 0 for d in self.degrees):
            raise ValueError("degrees must be non-negative")
        fixed = {}
        for deg, m in self.pairings.items():
            m = as_matrix(m)
            size = self.degrees.count(deg)
            if m.shape != (size, size):
                raise ValueError(f"pairing block in degree {deg} must be {size}x{size}")
            if m != m.T:
                raise ValueError(f"pairing block in degree {deg} is not symmetric")
            fixed[deg] = m
        object.__setattr__(self, "pairings", fixed)

    @property
    def rank(self):
        return len(self.labels)

    def block(self, deg):
        return [i for i, d in enumerate(self.degrees) if d == deg]

    def gram(self):
        """Full pairing matrix; classes of different degree pair to zero."""
        n = self.rank
        rows = [[0] * n for _ in range(n)]
        for deg, m in self.pairings.items():
            idx = self.block(deg)
            for a, i in enumerate(idx):
                for b, j in enumerate(idx):
                    rows[i][j] = m[a, b]
        return RationalMatrix(rows, n)

    def pair(self, x, y):
        g = self.gram()
        return sum(Fraction(x[i]) * g[i, j] * Fraction(y[j]) for i in range(self.rank) for j in range(self.rank))


@dataclass(frozen=True)
class Correspondence:
    model: CohomologyModel
    matrix: RationalMatrix
    shift: int = 0

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        n = self.model.rank
        if m.shape != (n, n):
            raise ValueError(f"correspondence must be {n}x{n}")
        deg = self.model.degrees
        for i in range(n):
            for j in range(n):
                if m[i, j] and deg[i] != deg[j] + self.shift:
                    raise ValueError(f"entry ({i},{j}) does not respect degrees")

    def __matmul__(self, other):
        if self.model != other.model:
            raise ValueError("model mismatch")
        return Correspondence(self.model, self.matrix @ other.matrix, self.shift + other.shift)

    def __add__(self, other):
        if self.model != other.model or self.shift != other.shift:
            raise ValueError("can only add correspondences of one model and shift")
        return Correspondence(self.model, self.matrix + other.matrix, self.shift)

    def scale(self, c):
        return Correspondence(self.model, self.matrix.scale(c), self.shift)

    @classmethod
    def identity(cls, model):
        return cls(model, RationalMatrix.identity(model.rank))


def rank_one_projector(model, theta):
    """``alpha -> (alpha . theta) theta`` as a correspondence."""
    theta = [Fraction(x) for x in theta]
    g = model.gram()
    col = RationalMatrix([[x] for x in theta], 1)
    return Correspondence(model, col @ (col.T @ g))


def delta_dimension_audit(v, g):
    """``dim M(v + t(1,0,1)) + 2 dim G(t, |chi| + 2t) = dim M(v)`` for ``1 <= t <= mu``.

    Returns the list of failing ``t``; empty means the audit closes.
    """
    check_genus(g)
    if not in_h(v, g):
        raise RegionError(f"{v} is not in H at g={g}")
    c = build_collection(v, g)
    top = dim_moduli(c.source, g)
    chi = abs(c.source.chi)
    bad = []
    for t in range(1, c.mu + 1):
        lhs = dim_moduli(c.diagonal(t).base, g) + 2 * grassmannian_dim(t, chi + 2 * t)
        if lhs != top:
            bad.append(t)
    return bad


class PreconditionError(ValueError):
    pass


def tau_selfdual_check(gram, theta=None):
    """``Delta_1 o Delta_1 = -2 Delta_1`` for ``Delta_1 = (. theta) theta``.

    ``theta`` defaults to the first basis vector; its square must be ``-2``.
    Also confirms that ``-Delta_1 / 2`` is idempotent.
    """
    gram = as_matrix(gram)
    n = gram.nrows
    theta = [1] + [0] * (n - 1) if theta is None else list(theta)
    model = CohomologyModel(tuple(f"e{i}" for i in range(n)), (0,) * n, {0: gram})
    if model.pair(theta, theta) != -2:
        raise PreconditionError(f"theta^2 = {model.pair(theta, theta)}, need -2")
    d1 = rank_one_projector(model, theta).matrix
    p = d1.scale(Fraction(-1, 2))
    return (d1 @ d1) == d1.scale(-2) and (p @ p) == p


# Chern / Euler oracles on projective spaces

def chern_class_projective(n, k):
    """``c_k(T P^n)`` in units of ``h^k``: ``binom(n + 1, k)``."""
    return comb(n + 1, k)


def euler_projective(n):
    # one Betti number equal to 1 in each even degree 0, 2, ..., 2n
    betti = [1 if k % 2 == 0 else 0 for k in range(2 * n + 1)]
    return sum((-1) ** k * b for k, b in enumerate(betti))


def top_chern_cotangent_projective(n):
    """``c_n(T* P^n) . [P^n] = (-1)^n chi(P^n)``."""
    c = (-1) ** n * chern_class_projective(n, n)
    if c != (-1) ** n * euler_projective(n):
        raise AssertionError("Chern and Euler oracles disagree")
    return c


def graph_eigen_projective(n):
    """Degree of ``Gamma(sigma)`` on ``[P^n]`` for a self-dual lagrangian ``P^n``.

    The blow-up of ``P^n`` has exceptional divisor the incidence variety in
    ``P^n x P^n*``.  The excess bundle there is ``T*P^n / O(-1)``, and the
    involution swaps the two factors.  On a fibre of the second projection,
    the hyperplane ``P^{n-1}``, the excess bundle restricts to its cotangent
    bundle.  So the eigenvalue is ``c_{n-1}(T* P^{n-1}) = (-1)^{n-1} chi(P^{n-1})``.
    """
    return top_chern_cotangent_projective(n - 1)


def sigma_relation(graph_eigen, delta1_eigen):
    """``Gamma(sigma)^2 + 2 Gamma(sigma) Delta_1 + Delta_1^2 == Gamma(id)`` on a line."""
    a, d = graph_eigen, delta1_eigen
    return a * a + 2 * a * d + d * d == 1


def sigma_g4_check(graph_eigen=None):
    """The g=4 Hilbert cube: ``Delta_1`` and ``Gamma(sigma)`` on ``span([P^3])``.

    ``graph_eigen`` may be overridden to test other candidate eigenvalues.
    """
    model = CohomologyModel(("[P3]",), (6,), {6: [[top_chern_cotangent_projective(3)]]})
    delta1 = rank_one_projector(model, [1]).matrix[0, 0]
    a = graph_eigen_projective(3) if graph_eigen is None else graph_eigen
    gs = Correspondence(model, [[a]])
    total = gs + Correspondence(model, [[delta1]])
    relation = (total @ total).matrix == Correspondence.identity(model).matrix
    if relation != sigma_relation(a, delta1):
        raise AssertionError("matrix and scalar forms of the relation disagree")
    return {"delta1_eigen": int(delta1), "graph_eigen": int(a), "relation": relation}


def relation_solutions(delta1_eigen=-4, lo=-10, hi=10):
    """Integers ``a`` in ``[lo, hi]`` with ``(a + delta1)^2 == 1``."""
    return [a for a in range(lo, hi + 1) if sigma_relation(a, delta1_eigen)]


def poly_pow_one_minus_t(m):
    """Coefficients of ``(1 - t)^m`` by repeated multiplication."""
    coeffs = [1]
    for _ in range(m):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c
            nxt[i + 1] -= c
        coeffs = nxt
    return coeffs


def sym_euler(g, n):
    """Euler characteristic of ``Sym^n`` of a genus-g curve."""
    if n < 0:
        raise ValueError("n must be non-negative")
    coeffs = poly_pow_one_minus_t(2 * g - 2)
    return coeffs[n] if n < len(coeffs) else 0


def lagrangian_self_intersection(g):
    """Self-intersection of ``C^[g]`` in ``S^[g]``, checked against the Euler oracle."""
    check_genus(g)
    value = comb(2 * g - 2, g)
    if value != (-1) ** g * sym_euler(g, g):
        raise AssertionError(f"binomial and Euler oracle disagree at g={g}")
    return value


def jacobian_self_intersection(g):
    """A lagrangian torus has Euler characteristic 0, hence self-intersection 0."""
    check_genus(g)
    # Euler characteristic of (S^1)^(2g) from its Poincare polynomial (1 + t)^(2g) at t = -1
    chi = sum((-1) ** k * comb(2 * g, k) for k in range(2 * g + 1))
    return (-1) ** g * chi
