"""Brill-Noether stratified collections and their numerical bookkeeping.

A vector ``v`` in H (first Chern class ``L``) yields an upper-triangular array
of strata.  Row ``i`` is the stratification of the moduli space of
``v + i*direction*(1, 0, 1)``; the entry in row ``i``, column ``t`` is the
stratum of index ``t - i`` and fibres over the diagonal entry of column ``t``
with Grassmannian fibre ``G(t - i, |chi(v)| + 2t)``.

Rows and columns are 0-indexed.  The 1-based labelling ``X(1), ..., X(mu+1)``
is only a display convention (see :func:`display_rows`).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, isqrt, prod

from .lattice import (
    MukaiVector,
    check_genus,
    dim_moduli,
    hilbert_vector,
    in_h,
    normalize,
    sigma,
    tau,
    trivial,
)


class RegionError(ValueError):
    """A vector lies outside the region H of non-empty moduli."""


def grassmannian_dim(k, n):
    if not 0 <= k <= n:
        raise ValueError(f"G({k},{n}) is empty")
    return k * (n - k)


def stratum_codim(chi, t):
    """Codimension ``t(|chi| + t)`` of the t-th Brill-Noether stratum."""
    return t * (abs(chi) + t)


def _require_h(v, g):
    if not in_h(v, g):
        raise RegionError(f"{v} is not in H at g={g}")


def _scan(v, g, direction):
    """Largest ``t`` with ``g - rs >= 0`` at every step ``v + k*direction*(1,0,1)``, ``k <= t``.

    Along the ray, ``g - rs`` is a concave quadratic in ``k`` whose vertex lies
    at ``k <= 0`` (``direction`` has the sign of ``chi``), so the test is monotone
    and a galloping bisection finds the last admissible step.
    """

    def ok(k):
        w = v + trivial(direction * k)
        return g - w.r * w.s >= 0

    lo, hi = 0, 1
    while ok(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def mu(v, g):
    """Distance of ``v`` from the boundary of H along ``(1, 0, 1)``.

    Negative-rank vectors are first replaced by their sigma-tau image.  Shifted
    vectors ``v - t(1,0,1)`` may have negative rank; they count as members of H
    under the same convention, so only ``g - rs >= 0`` is tested along the scan.
    """
    check_genus(g)
    _require_h(v, g)
    v = normalize(v)
    if v.chi > 0:
        return _scan(v, g, 1)
    if v.chi < 0:
        return _scan(v, g, -1)
    up, down = _scan(v, g, 1), _scan(v, g, -1)
    if up != down:
        raise AssertionError(f"scan directions disagree at chi=0 for {v}: {up} != {down}")
    return up


def mu_jacobian_closed_form(n, g):
    """The printed closed form ``max(0, (-n + ceil(sqrt(n^2 + 4g))) / 2)``.

    Kept as a comparator only; :func:`mu` is authoritative and the two disagree
    for some ``(g, n)``, e.g. ``(6, 2)``.
    """
    check_genus(g)
    m = n * n + 4 * g
    root = isqrt(m)
    ceil_root = root if root * root == m else root + 1
    return max(Fraction(0), Fraction(-n + ceil_root, 2))


def mu_closed_form_exceptions(g_max=30, n_max=10):
    """All ``(g, n)`` where the closed form differs from the scan on ``(0,1,n)``."""
    out = []
    for g in range(2, g_max + 1):
        for n in range(0, n_max + 1):
            scan = mu(MukaiVector(0, 1, n), g)
            closed = mu_jacobian_closed_form(n, g)
            if closed != scan:
                out.append({"g": g, "n": n, "scan": scan, "closed_form": str(closed)})
    return out


@dataclass(frozen=True)
class StratumDescriptor:
    base: MukaiVector
    t: int
    dim: int
    codim: int
    fiber: tuple | None = None
    row: int = 0
    column: int = 0

    @property
    def fiber_dim(self):
        return 0 if self.fiber is None else grassmannian_dim(*self.fiber)

    def label(self):
        return f"M{self.base}^{self.t}" if self.t else f"M{self.base}"

    def to_dict(self):
        return {
            "row": self.row,
            "column": self.column,
            "base": list(self.base.as_tuple()),
            "t": self.t,
            "dim": self.dim,
            "codim": self.codim,
            "fiber": None if self.fiber is None else list(self.fiber),
        }


@dataclass(frozen=True)
class StratifiedCollection:
    g: int
    rows: tuple
    direction: int
    mu: int

    @property
    def source(self):
        return self.rows[0][0].base

    def diagonal(self, i):
        return self.rows[i][0]

    def entry(self, row, column):
        return self.rows[row][column - row]

    def n(self, row=0):
        """Codimension of the first stratum plus one, ``|chi| + 1``."""
        return abs(self.rows[row][0].base.chi) + 1

    def descriptors(self):
        return [d for row in self.rows for d in row]

    def matrix_key(self):
        return tuple(
            tuple((d.row, d.column, d.t, d.dim, d.codim, d.fiber) for d in row)
            for row in self.rows
        )

    def to_dict(self):
        return {
            "g": self.g,
            "source": list(self.source.as_tuple()),
            "mu": self.mu,
            "direction": self.direction,
            "n": self.n(0),
            "rows": [[d.to_dict() for d in row] for row in self.rows],
        }


def build_collection(v, g, direction=None):
    """The (mu+1) x (mu+1) stratified collection of ``v``.

    ``direction`` only matters when ``chi(v) == 0``; it defaults to ``+1``.
    """
    check_genus(g)
    _require_h(v, g)
    v = normalize(v)
    m = mu(v, g)
    chi = v.chi
    if chi > 0:
        sign = 1
    elif chi < 0:
        sign = -1
    else:
        sign = 1 if direction is None else direction
        if sign not in (1, -1):
            raise ValueError("direction must be +1 or -1")
    rows = []
    for i in range(m + 1):
        base = v + trivial(sign * i)
        top = dim_moduli(base, g)
        row = []
        for col in range(i, m + 1):
            k = col - i
            codim = stratum_codim(base.chi, k)
            fiber = (k, abs(chi) + 2 * col) if k else None
            row.append(StratumDescriptor(base, k, top - codim, codim, fiber, i, col))
        rows.append(tuple(row))
    return StratifiedCollection(g, tuple(rows), sign, m)


def display_rows(c):
    """1-based labels ``X(1), ..., X(mu+1)`` used when printing."""
    return [(i + 1, row[0].base) for i, row in enumerate(c.rows)]


REFLECTIONS = {"sigma": sigma, "tau": tau}


def dual_collection(c, reflection="sigma"):
    """Collection of the reflected vector; ``n`` and ``mu`` must agree."""
    w = REFLECTIONS[reflection](c.source)
    d = build_collection(w, c.g)
    if d.n(0) != c.n(0) or d.mu != c.mu:
        raise AssertionError(
            f"dual of {c.source} under {reflection} changes (n, mu): "
            f"({c.n(0)}, {c.mu}) -> ({d.n(0)}, {d.mu})"
        )
    return d


@dataclass(frozen=True)
class Violation:
    identity: str
    row: int
    column: int
    detail: str

    def to_dict(self):
        return {"identity": self.identity, "row": self.row, "column": self.column, "detail": self.detail}


def verify_conditions(c):
    """Audit the numerical identities a dualizable collection must satisfy.

    Checked per row ``M = X(i)`` with ``n(M) = |chi| + 1``:

    * stratum codimension ``t(n - 1 + t)`` and ``dim = dim M - codim``;
    * dimension drop ``dim M(r) = dim M - 2r(n(M) + r - 1)``;
    * ``n(X(i)) = n(X(0)) + 2i``;
    * codimension additivity along columns;
    * Grassmannian fibre ``G(t, n(M) + 2t - 1)`` whose dimension is the codimension;
    * bundle dimension ``dim M^t = dim M(t) + dim fibre``.
    """
    out = []
    mu_ = c.mu
    for i in range(mu_ + 1):
        top = c.diagonal(i)
        n_m = abs(top.base.chi) + 1
        if n_m != c.n(0) + 2 * i:
            out.append(Violation("n(X(r)) = n + 2r", i, i, f"n={n_m}, expected {c.n(0) + 2 * i}"))
        if top.t != 0:
            out.append(Violation("diagonal index", i, i, f"t={top.t}"))
        for col in range(i, mu_ + 1):
            d = c.entry(i, col)
            k = col - i
            if d.t != k:
                out.append(Violation("stratum index", i, col, f"t={d.t}, expected {k}"))
            expected_codim = k * (n_m - 1 + k)
            if d.codim != expected_codim:
                out.append(Violation("stratum codimension", i, col, f"{d.codim} != {expected_codim}"))
            if d.dim != top.dim - d.codim:
                out.append(Violation("stratum dimension", i, col, f"{d.dim} != {top.dim} - {d.codim}"))
            target = c.diagonal(col)
            drop = top.dim - 2 * k * (n_m + k - 1)
            if target.dim != drop:
                out.append(Violation("dimension drop", i, col, f"dim M({k})={target.dim}, expected {drop}"))
            if k == 0:
                continue
            if d.fiber is None:
                out.append(Violation("grassmannian fibre", i, col, "missing fibre"))
                continue
            if d.fiber != (k, n_m + 2 * k - 1):
                out.append(Violation("grassmannian fibre", i, col, f"{d.fiber} != {(k, n_m + 2 * k - 1)}"))
            if grassmannian_dim(*d.fiber) != d.codim:
                out.append(
                    Violation("fibre dimension = codimension", i, col, f"{d.fiber_dim} != {d.codim}")
                )
            if d.dim != target.dim + d.fiber_dim:
                out.append(
                    Violation("bundle dimension", i, col, f"{d.dim} != {target.dim} + {d.fiber_dim}")
                )
        for t in range(0, mu_ - i + 1):
            for k in range(t, mu_ - i + 1):
                lhs = c.entry(i, i + k).codim
                rhs = c.entry(i, i + t).codim + c.entry(i + t, i + k).codim
                if lhs != rhs:
                    out.append(
                        Violation("codimension additivity", i, i + k, f"t={t}: {lhs} != {rhs}")
                    )
    return out


@dataclass(frozen=True)
class DivisorExpr:
    """Formal integer combination of exceptional divisors ``E^t``."""

    terms: tuple = field(default_factory=tuple)

    @classmethod
    def of(cls, mapping):
        return cls(tuple(sorted((t, c) for t, c in mapping.items() if c)))

    def as_dict(self):
        return dict(self.terms)

    def __add__(self, other):
        acc = Counter(self.as_dict())
        acc.update(other.as_dict())
        return DivisorExpr.of(acc)

    def __sub__(self, other):
        acc = Counter(self.as_dict())
        acc.subtract(other.as_dict())
        return DivisorExpr.of(acc)

    def is_zero(self):
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*E^{t}" for t, c in self.terms)


def canonical_class_ledger(c, row):
    """Canonical class through the blow-down sequence of row ``row``.

    On the top blow-up the canonical class is ``sum_{t>=1} (codim_t - 1) E^t``;
    contracting the k-th exceptional divisor removes ``(codim_k - 1) E^k``.
    Codimensions are read from the Grassmannian fibres, so this also checks
    that the fibres account for the discrepancies.  ``final_trivial`` means
    the last blow-down carries a trivial canonical class.
    """
    if not 0 <= row <= c.mu:
        raise IndexError(f"row {row} outside 0..{c.mu}")
    depth = c.mu - row
    coeff = {}
    for t in range(1, depth + 1):
        d = c.entry(row, row + t)
        coeff[t] = d.fiber_dim - 1
    omega = DivisorExpr.of(coeff)
    steps = [omega]
    for k in range(1, depth + 1):
        codim_k = c.entry(row, row + k).codim
        omega = omega - DivisorExpr.of({k: codim_k - 1})
        steps.append(omega)
    return {"per_step": steps, "final_trivial": omega.is_zero()}


def castelnuovo(g):
    """Lagrangian Grassmannian data when ``4g + 1`` is a perfect square.

    Returns ``{"mu", "count"}`` with ``count = g! prod_{i=0}^{mu} i!/(mu+i)!``,
    or ``None``.
    """
    check_genus(g)
    m = 4 * g + 1
    root = isqrt(m)
    if root * root != m:
        return None
    mu_ = (root - 1) // 2
    if grassmannian_dim(mu_, 2 * mu_ + 1) != g:
        raise AssertionError(f"dim G({mu_},{2 * mu_ + 1}) != {g}")
    count = Fraction(factorial(g)) * prod(
        (Fraction(factorial(i), factorial(mu_ + i)) for i in range(mu_ + 1)), start=Fraction(1)
    )
    if count.denominator != 1:
        raise AssertionError(f"non-integral count {count} at g={g}")
    return {"mu": mu_, "count": int(count)}


def mu_of_hilbert_collection(g):
    """Length of the collection ``{X(r)}`` for ``X = S^[g]``, 1-based."""
    return mu(hilbert_vector(g, g), g) + 1


def contraction_target(v):
    """``v - (chi/2)(1,0,1)``; both neighbouring vectors when ``chi`` is odd."""
    chi = v.chi
    if chi % 2 == 0:
        return (v - trivial(chi // 2),)
    return (v - trivial((chi - 1) // 2), v - trivial((chi + 1) // 2))


def index_shift_check(v, t, k, g):
    """Dimension ledger of the index-shifting Grassmannian bundle isomorphism.

    The space of pairs ``(F, V)`` with ``F`` in the open part of stratum ``k``
    of M(v) and ``V`` a t-dimensional subspace of the k-dimensional ``H^1(F)*``
    is identified with a ``G(t, chi(v') + k - t)``-bundle over the open part
    of stratum ``k - t`` of M(v'), ``v' = v + t(1,0,1)``.  Both sides are
    computed from stratum codimensions.
    """
    check_genus(g)
    if t < 1:
        raise ValueError("t must be >= 1")
    if k < t:
        raise ValueError(f"need k >= t, got k={k}, t={t}")
    _require_h(v, g)
    v = normalize(v)
    if v.chi < 0:
        raise ValueError("index shift needs chi(v) >= 0")
    vp = v + trivial(t)
    _require_h(vp, g)
    if k > mu(v, g):
        raise ValueError(f"stratum {k} of {v} is empty")
    lhs = dim_moduli(v, g) - stratum_codim(v.chi, k) + grassmannian_dim(t, k)
    rhs = grassmannian_dim(t, vp.chi + k - t) + dim_moduli(vp, g) - stratum_codim(vp.chi, k - t)
    return lhs == rhs
