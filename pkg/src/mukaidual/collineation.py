"""Complete collineations, determinantal strata and Petri maps.

Conventions.  A map ``V0 -> V1`` is an ``dim V1 x dim V0`` matrix.  The kernel
is coordinatized by the null-space echelon basis (one vector per free column,
entry 1 there and 0 at the other free columns).  The cokernel is the quotient
by the column space, coordinatized by the rows that are not pivots of the
column echelon form.  With these choices the dual of the cokernel has exactly
the echelon basis of ``ker(e^T)``, so duality statements become equalities of
matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .linalg import RationalMatrix, as_matrix


class InvalidChainError(ValueError):
    pass


# kernel / cokernel coordinates

def kernel_basis(e):
    """Rows span ``ker e``; shape ``nullity x ncols``."""
    return e.nullspace()


def cokernel_dual_basis(e):
    """Rows are the coordinate functionals of ``coker e``; shape ``conullity x nrows``.

    Row ``j`` reads the coefficient of the unit vector at the ``j``-th
    non-pivot row of the column echelon form.  These rows annihilate the
    column space and coincide with the echelon basis of ``ker(e^T)``.
    """
    return e.T.nullspace()


def cokernel_coords(e):
    return e.coker_rows()


def nullity(e):
    return e.ncols - e.rank()


def conullity(e):
    return e.nrows - e.rank()


def is_full_rank(e):
    return e.rank() == min(e.nrows, e.ncols)


# chains

@dataclass(frozen=True)
class CollineationChain:
    dims: tuple
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "maps", tuple(as_matrix(m) for m in self.maps))

    @property
    def chi(self):
        return self.dims[0] - self.dims[1]

    def __len__(self):
        return len(self.maps)

    def to_dict(self):
        return {"dims": list(self.dims), "maps": [[[str(x) for x in r] for r in m.rows] for m in self.maps]}


@dataclass(frozen=True)
class ChainDiagnosis:
    valid: bool
    rule: str = ""
    index: int = -1

    def __bool__(self):
        return self.valid


def validate(c):
    """Check shapes, non-termination of intermediate maps and the final rank rule.

    Returns a :class:`ChainDiagnosis` that is truthy iff the chain is valid;
    otherwise ``rule`` names the first violated rule and ``index`` the map.
    """
    n0, n1 = c.dims
    if n0 < 0 or n1 < 0:
        return ChainDiagnosis(False, "negative dimension")
    if not c.maps:
        if n0 == 0 or n1 == 0:
            return ChainDiagnosis(True)
        return ChainDiagnosis(False, "empty chain on nonzero spaces")
    dom, cod = n0, n1
    last = len(c.maps) - 1
    for i, m in enumerate(c.maps):
        if m.shape != (cod, dom):
            return ChainDiagnosis(False, f"map {i + 1} has shape {m.shape}, expected {(cod, dom)}", i)
        rk = m.rank()
        if i < last:
            if rk == min(dom, cod):
                return ChainDiagnosis(False, f"map {i + 1} has full rank but the chain continues", i)
            if rk == 0:
                return ChainDiagnosis(False, f"map {i + 1} is zero", i)
        else:
            if c.chi >= 0 and rk != cod:
                return ChainDiagnosis(False, "last map not surjective", i)
            if c.chi <= 0 and rk != dom:
                return ChainDiagnosis(False, "last map not injective", i)
        dom, cod = dom - rk, cod - rk
    return ChainDiagnosis(True)


def transpose_chain(c):
    """The chain ``rho_1^T, rho_2^T, ...`` from ``V1*`` to ``V0*``.

    Under the echelon conventions ``ker(rho^T)`` carries the basis dual to the
    coordinates of ``coker(rho)`` and ``coker(rho^T)`` the coordinates dual to
    the kernel basis, so each later map transposes as a plain matrix.
    """
    diag = validate(c)
    if not diag:
        raise InvalidChainError(f"cannot transpose an invalid chain: {diag.rule}")
    return CollineationChain((c.dims[1], c.dims[0]), tuple(m.T for m in c.maps))


def random_int_matrix(rng, nrows, ncols, lo=-2, hi=2):
    return RationalMatrix.from_int_rows(
        [[rng.randint(lo, hi) for _ in range(ncols)] for _ in range(nrows)], ncols
    )


def greedy_complete(rho1, rng, lo=-2, hi=2, max_tries=10000):
    """Extend ``rho1`` to a valid chain by rejection sampling each next map."""
    rho1 = as_matrix(rho1)
    maps = [rho1]
    dims = (rho1.ncols, rho1.nrows)
    if rho1.rank() == 0 and min(dims) > 0:
        raise InvalidChainError("rho_1 is zero")
    current = rho1
    while not is_full_rank(current):
        dom, cod = nullity(current), conullity(current)
        for _ in range(max_tries):
            cand = random_int_matrix(rng, cod, dom, lo, hi)
            if not cand.is_zero():
                break
        else:
            raise RuntimeError("no nonzero sample")
        maps.append(cand)
        current = cand
    chain = CollineationChain(dims, tuple(maps))
    if not validate(chain):
        raise AssertionError("greedy completion produced an invalid chain")
    return chain


def random_degenerate(rng, nrows, ncols, lo=-2, hi=2):
    """A nonzero integer matrix, usually of deficient rank."""
    from .nilorbit import random_of_rank

    top = min(nrows, ncols)
    if top == 0:
        return RationalMatrix.zeros(nrows, ncols)
    r = rng.randint(1, top)
    return random_of_rank(rng, nrows, ncols, r, lo, hi)


# determinantal strata

def stratum_index(e):
    e = as_matrix(e)
    return min(nullity(e), nullity(e.T))


def ker_coker_duality(e):
    """Dimension swap under transposition and nondegeneracy of the coker/ker pairing."""
    e = as_matrix(e)
    if nullity(e.T) != conullity(e) or conullity(e.T) != nullity(e):
        return False
    g = cokernel_dual_basis(e)
    if g.nrows == 0:
        return True
    coords = cokernel_coords(e)
    if len(coords) != g.nrows:
        return False
    # pairing of coker(e) (unit vectors at coords) with ker(e^T) (rows of g)
    pairing = g.submatrix(cols=coords)
    if pairing.rank() != g.nrows:
        return False
    return (g @ e).is_zero()


# affine families and Petri maps

@dataclass(frozen=True)
class MatrixFamily:
    """``e(x) = e0 + sum_i x_i e_i`` for ``x`` in ``Q^p``."""

    e0: RationalMatrix
    terms: tuple

    def __post_init__(self):
        e0 = as_matrix(self.e0)
        terms = tuple(as_matrix(m) for m in self.terms)
        if any(m.shape != e0.shape for m in terms):
            raise ValueError("all terms of a family must share one shape")
        object.__setattr__(self, "e0", e0)
        object.__setattr__(self, "terms", terms)

    @property
    def p(self):
        return len(self.terms)

    @property
    def shape(self):
        return self.e0.shape

    def at(self, x):
        if len(x) != self.p:
            raise ValueError(f"point has {len(x)} coordinates, family has {self.p}")
        out = self.e0
        for xi, m in zip(x, self.terms):
            if xi:
                out = out + m.scale(xi)
        return out

    def derivative(self, xi):
        """``D_xi e``; exact since the family is affine."""
        if len(xi) != self.p:
            raise ValueError("direction has wrong length")
        out = RationalMatrix.zeros(*self.shape)
        for c, m in zip(xi, self.terms):
            if c:
                out = out + m.scale(c)
        return out

    def transposed(self):
        return MatrixFamily(self.e0.T, tuple(m.T for m in self.terms))

    @classmethod
    def universal(cls, nrows, ncols, e0=None):
        """All entries as coordinates, in row-major order."""
        terms = []
        for i in range(nrows):
            for j in range(ncols):
                rows = [[0] * ncols for _ in range(nrows)]
                rows[i][j] = 1
                terms.append(RationalMatrix.from_int_rows(rows, ncols))
        base = RationalMatrix.zeros(nrows, ncols) if e0 is None else as_matrix(e0)
        return cls(base, tuple(terms))


class CorankError(ValueError):
    pass


@dataclass(frozen=True)
class PetriForm:
    """``phi[i][a][b] = <g*_b, e_i f_a>``.

    ``i`` runs over tangent coordinates, ``a`` over the kernel basis and ``b``
    over the coordinate functionals of the cokernel.
    """

    values: tuple
    p: int
    k: int
    c: int

    def as_matrix(self):
        """The map ``tangent -> Hom(ker, coker)``, one row per pair ``(a, b)``."""
        if self.k * self.c == 0:
            return RationalMatrix._raw((), self.p)
        rows = [[self.values[i][a][b] for i in range(self.p)] for a in range(self.k) for b in range(self.c)]
        return RationalMatrix(rows, self.p)

    def rank(self):
        return self.as_matrix().rank()

    def is_zero(self):
        return not any(x for plane in self.values for row in plane for x in row)

    def evaluate(self, xi):
        """``Phi_xi`` as a ``coker x ker`` matrix."""
        rows = [[sum(Fraction(xi[i]) * self.values[i][a][b] for i in range(self.p)) for a in range(self.k)]
                for b in range(self.c)]
        return RationalMatrix(rows, self.k) if self.c else RationalMatrix._raw((), self.k)


def corank(e):
    """``dim coker e``."""
    return conullity(e)


def petri_form(f, x0, t):
    e = f.at(x0)
    if corank(e) != t:
        raise CorankError(f"e(x0) has corank {corank(e)}, expected {t}")
    ker = kernel_basis(e)
    gstar = cokernel_dual_basis(e)
    values = []
    for m in f.terms:
        img = gstar @ m @ ker.T  # c x k
        values.append(tuple(tuple(img[b, a] for b in range(gstar.nrows)) for a in range(ker.nrows)))
    return PetriForm(tuple(values), f.p, ker.nrows, gstar.nrows)


def petri_dual_agreement(f, x0):
    """Petri form of ``f`` equals that of the transposed family with ker/coker swapped."""
    e = f.at(x0)
    phi = petri_form(f, x0, corank(e))
    ft = f.transposed()
    psi = petri_form(ft, x0, corank(e.T))
    if (phi.k, phi.c) != (psi.c, psi.k):
        return False
    for i in range(f.p):
        for a in range(phi.k):
            for b in range(phi.c):
                if phi.values[i][a][b] != psi.values[i][b][a]:
                    return False
    return True


def expected_codim(dim_m, r0, r1, t):
    """Codimension ``t(r0 - r1 + t)`` of the t-th determinantal locus."""
    if r1 > r0:
        raise ValueError(f"need r0 >= r1, got r0={r0}, r1={r1}")
    if not 0 <= t <= r1:
        raise ValueError(f"need 0 <= t <= r1, got t={t}")
    return t * (r0 - r1 + t)


def expected_dim(dim_m, r0, r1, t):
    return dim_m - expected_codim(dim_m, r0, r1, t)


def normal_form(r1, r0, t):
    """``r1 x r0`` matrix ``diag(1, ..., 1, 0, ...)`` of corank ``t``."""
    rk = r1 - t
    if rk < 0 or rk > r0:
        raise ValueError(f"no {r1}x{r0} matrix of corank {t}")
    return RationalMatrix.from_int_rows([[int(i == j and i < rk) for j in range(r0)] for i in range(r1)], r0)


def finite_difference(f, x0, xi, h):
    """``(e(x0 + h xi) - e(x0)) / h`` for a nonzero rational step ``h``."""
    h = Fraction(h)
    if h == 0:
        raise ValueError("step must be nonzero")
    moved = [Fraction(a) + h * Fraction(b) for a, b in zip(x0, xi)]
    return (f.at(moved) - f.at(x0)).scale(1 / h)


# polynomials for tangent cones: dict exponent-tuple -> Fraction

def _poly_linear(coeffs):
    p = len(coeffs)
    out = {}
    for i, c in enumerate(coeffs):
        if c:
            exp = tuple(int(j == i) for j in range(p))
            out[exp] = Fraction(c)
    return out


def _poly_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _poly_add(a, b, sign=1):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _poly_det(entries):
    n = len(entries)
    total = {}
    for perm in permutations(range(n)):
        term = None
        for i, j in enumerate(perm):
            term = entries[i][j] if term is None else _poly_mul(term, entries[i][j])
            if not term:
                break
        if term:
            total = _poly_add(total, term, _perm_sign(perm))
    return total


def tangent_cone_equations(f, x0, t):
    """Equations of the tangent cone of the t-th locus at ``x0``.

    With ``k`` the corank at ``x0`` these are the ``(k + 1 - t)``-minors of
    the linear-form matrix ``Phi_xi``.  Returns nonzero polynomials only.
    """
    e = f.at(x0)
    k = corank(e)
    if k < t:
        raise CorankError(f"x0 lies off the locus: corank {k} < {t}")
    phi = petri_form(f, x0, k)
    size = k + 1 - t
    grid = [[_poly_linear([phi.values[i][a][b] for i in range(f.p)]) for a in range(phi.k)] for b in range(phi.c)]
    eqs = []
    for rows in combinations(range(phi.c), size):
        for cols in combinations(range(phi.k), size):
            d = _poly_det([[grid[r][c] for c in cols] for r in rows])
            if d:
                eqs.append(d)
    return eqs


def poly_str(poly, names=None):
    if not poly:
        return "0"
    p = len(next(iter(poly)))
    names = names or [f"x{i + 1}" for i in range(p)]
    parts = []
    for exp, c in sorted(poly.items(), reverse=True):
        mono = "*".join(
            names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(exp) if k
        )
        parts.append(f"{c}*{mono}" if mono else str(c))
    return " + ".join(parts)
