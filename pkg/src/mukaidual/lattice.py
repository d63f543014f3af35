"""Arithmetic of the algebraic Mukai lattice of a K3 surface of genus ``g``.

A Mukai vector ``(r, d, s)`` stands for ``(r, d*L, s)`` where ``L`` is the
minimal polarization with ``L.L = 2g - 2``.  The pairing is

    <(r, d, s), (r', d', s')> = d*d'*(2g - 2) - r*s' - r'*s

and isometries act on coordinate columns ``(r, d, s)`` as 3x3 integer
matrices.  Everything here is plain integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


def check_genus(g):
    if not isinstance(g, int) or isinstance(g, bool) or g < 2:
        raise ValueError(f"genus must be an integer >= 2, got {g!r}")
    return g


@dataclass(frozen=True, order=True)
class MukaiVector:
    r: int
    d: int
    s: int

    def __iter__(self):
        return iter((self.r, self.d, self.s))

    def __add__(self, other):
        return MukaiVector(self.r + other.r, self.d + other.d, self.s + other.s)

    def __sub__(self, other):
        return MukaiVector(self.r - other.r, self.d - other.d, self.s - other.s)

    def __neg__(self):
        return MukaiVector(-self.r, -self.d, -self.s)

    def __str__(self):
        return f"({self.r},{self.d},{self.s})"

    @property
    def chi(self):
        return self.r + self.s

    def as_tuple(self):
        return (self.r, self.d, self.s)


def trivial(t):
    """Mukai vector of the trivial bundle of rank ``t``."""
    return MukaiVector(t, 0, t)


def pairing(v, w, g):
    check_genus(g)
    return v.d * w.d * (2 * g - 2) - v.r * w.s - w.r * v.s


def euler(v):
    return v.r + v.s


def dim_moduli(v, g):
    return pairing(v, v, g) + 2


def in_region(v, g):
    """Membership in the region of non-empty moduli and in its ``d = 1`` slice.

    Vectors with ``r = d = 0`` (zero-dimensional support) are excluded.
    """
    check_genus(g)
    in_v = (
        v.r >= 0
        and not (v.r == 0 and v.d == 0)
        and 1 + v.d * v.d * (g - 1) - v.r * v.s >= 0
    )
    return {"in_V": in_v, "in_H": in_v and v.d == 1}


def normalize(v):
    """Replace a negative-rank vector by its image under sigma o tau."""
    return sigma_tau(v) if v.r < 0 else v


def in_h(v, g):
    """Membership in H after the negative-rank convention."""
    return in_region(normalize(v), g)["in_H"]


def tensor(v, k, g):
    """Twist by ``O(k)``, i.e. by ``k*L``."""
    check_genus(g)
    r, d, s = v
    return MukaiVector(r, d + r * k, s + k * d * (2 * g - 2) + k * k * r * (g - 1))


def sigma(v):
    return MukaiVector(v.s, v.d, v.r)


def tau(v):
    return MukaiVector(-v.s, v.d, -v.r)


def neg(v):
    return -v


def sigma_tau(v):
    return MukaiVector(-v.r, v.d, -v.s)


def hilbert_vector(d, g):
    check_genus(g)
    return MukaiVector(1, 1, g - d)


def jacobian_vector(d, g):
    check_genus(g)
    return MukaiVector(0, 1, d + 1 - g)


# 3x3 integer matrices acting on columns (r, d, s)

def matmul3(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3)
    )


def transpose3(a):
    return tuple(zip(*a))


def apply(m, v):
    r, d, s = v
    return MukaiVector(*(row[0] * r + row[1] * d + row[2] * s for row in m))


IDENTITY = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
SIGMA = ((0, 0, 1), (0, 1, 0), (1, 0, 0))
TAU = ((0, 0, -1), (0, 1, 0), (-1, 0, 0))
NEG = ((-1, 0, 0), (0, -1, 0), (0, 0, -1))


def gram(g):
    check_genus(g)
    return ((0, 0, -1), (0, 2 * g - 2, 0), (-1, 0, 0))


def tensor_matrix(k, g):
    check_genus(g)
    return ((1, 0, 0), (k, 1, 0), (k * k * (g - 1), k * (2 * g - 2), 1))


def is_isometry(m, g):
    q = gram(g)
    return matmul3(matmul3(transpose3(m), q), m) == q


def det3(m):
    (a, b, c), (d, e, f), (x, y, z) = m
    return a * (e * z - f * y) - b * (d * z - f * x) + c * (d * y - e * x)


@dataclass(frozen=True)
class LatticeIsometry:
    m: tuple
    g: int

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.m)
        if len(m) != 3 or any(len(row) != 3 for row in m):
            raise ValueError("isometry must be a 3x3 matrix")
        object.__setattr__(self, "m", m)
        if not is_isometry(m, self.g):
            raise ValueError(f"matrix does not preserve the Mukai pairing at g={self.g}")

    def __matmul__(self, other):
        if self.g != other.g:
            raise ValueError("genus mismatch")
        return LatticeIsometry(matmul3(self.m, other.m), self.g)

    def __call__(self, v):
        return apply(self.m, v)

    @property
    def det(self):
        return det3(self.m)


def vector_criterion(v, g):
    """``g - 1`` divides exactly one of ``r, s`` and is coprime to the other.

    At ``g = 2`` every isometry lies in the group generated by ``-Id``,
    ``sigma``, ``tau`` and the twists, so the obstruction is void there.
    """
    check_genus(g)
    n = g - 1
    if n == 1:
        return True
    r, s = v.r, v.s
    if r % n == 0 and s % n != 0:
        return gcd(n, s) == 1
    if s % n == 0 and r % n != 0:
        return gcd(n, r) == 1
    return False


def gamma_criterion(m, g):
    """Necessary condition for ``m`` to lie in the subgroup Gamma.

    ``False`` certifies non-membership; ``True`` decides nothing.
    """
    if isinstance(m, LatticeIsometry):
        m = m.m
    if not is_isometry(m, g):
        raise ValueError("gamma_criterion expects a lattice isometry")
    return vector_criterion(apply(m, MukaiVector(0, 0, 1)), g)


def conjugated_reflections(g):
    """``sigma' = O(1) sigma O(-1)`` and ``tau' = O(1) tau O(-1)`` as matrices."""
    up, down = tensor_matrix(1, g), tensor_matrix(-1, g)
    return matmul3(matmul3(up, SIGMA), down), matmul3(matmul3(up, TAU), down)


def verify_o2_identity(g):
    """Check ``O(2) = sigma' tau' sigma tau`` as an exact matrix identity."""
    sp, tp = conjugated_reflections(g)
    word = matmul3(matmul3(sp, tp), matmul3(SIGMA, TAU))
    return word == tensor_matrix(2, g)


GENERATORS = {
    "sigma": lambda g: SIGMA,
    "tau": lambda g: TAU,
    "-Id": lambda g: NEG,
    "O(1)": lambda g: tensor_matrix(1, g),
    "O(-1)": lambda g: tensor_matrix(-1, g),
}


def bfs_images(g, depth, start=MukaiVector(0, 0, 1)):
    """Images of ``start`` under words of length <= ``depth`` in the generators.

    A search aid only: it says nothing about completeness of Gamma.
    Returns a dict mapping each reached vector to its shortest word.
    """
    check_genus(g)
    mats = {name: f(g) for name, f in GENERATORS.items()}
    seen = {start: ()}
    frontier = [start]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for name, m in mats.items():
                w = apply(m, v)
                if w not in seen:
                    seen[w] = (name,) + seen[v]
                    nxt.append(w)
        frontier = nxt
    return seen
