"""Finite-dimensional model of the dual Springer resolutions.

A point of ``T*G(t, H)`` is a t-dimensional subspace ``W`` of ``H = Q^h``
together with a map ``psi : H/W -> W``.  ``W`` is stored as its reduced
row-echelon basis (a ``t x h`` matrix); ``H/W`` is coordinatized by the
non-pivot columns of that basis.  The Springer map sends the point to the
square-zero endomorphism ``H -> H/W -> W -> H``.

Transposition identifies ``End(H)`` with ``End(H*)`` and gives the dual
resolution by ``T*G(t, H*)``; the two agree on the dense orbit of rank-t
square-zero matrices and nowhere else.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .linalg import RationalMatrix, subspace_contains


class OffDenseOrbitError(ValueError):
    """The dual point is undefined: the matrix has rank below t."""


class NotSquareZeroError(ValueError):
    pass


def _pivots(w):
    piv = []
    for row in w.int_form()[0]:
        for j, x in enumerate(row):
            if x:
                piv.append(j)
                break
    return tuple(piv)


@dataclass(frozen=True)
class CotangentPoint:
    h: int
    t: int
    W: RationalMatrix
    psi: RationalMatrix

    def __post_init__(self):
        if not 1 <= self.t or 2 * self.t > self.h:
            raise ValueError(f"need 1 <= t <= h/2, got h={self.h}, t={self.t}")
        if self.W.shape != (self.t, self.h):
            raise ValueError(f"W has shape {self.W.shape}, expected {(self.t, self.h)}")
        if self.psi.shape != (self.t, self.h - self.t):
            raise ValueError(f"psi has shape {self.psi.shape}, expected {(self.t, self.h - self.t)}")
        piv = _pivots(self.W)
        if not _is_rref(self.W, piv):
            raise ValueError("W must be given in reduced row-echelon form of full rank")
        object.__setattr__(self, "_piv", piv)

    @classmethod
    def from_subspace(cls, basis, psi):
        """Canonicalize an arbitrary basis of ``W`` before building the point."""
        basis = RationalMatrix(basis) if not isinstance(basis, RationalMatrix) else basis
        psi = RationalMatrix(psi) if not isinstance(psi, RationalMatrix) else psi
        echelon, _ = basis.rref()
        return cls(basis.ncols, echelon.nrows, echelon, psi)

    @property
    def pivots(self):
        return self._piv

    @property
    def quotient_coords(self):
        return _complement(self._piv, self.h)

    @property
    def n(self):
        return self.h - 2 * self.t + 1

    def inclusion(self):
        """``W -> H`` in the echelon basis (``h x t``)."""
        return self.W.T

    def projection(self):
        """``H -> H/W`` in non-pivot coordinates (``(h-t) x h``)."""
        return _projection(self.W, self._piv, self.h)

    def section(self):
        """Coefficients in the echelon basis: reads the pivot coordinates (``t x h``)."""
        return _section(self._piv, self.h)

    def lift(self):
        """``H/W -> H`` sending quotient coordinates to the non-pivot unit vectors."""
        return _lift(self._piv, self.h)


def _is_rref(w, piv):
    if len(piv) != w.nrows or any(a >= b for a, b in zip(piv, piv[1:])):
        return False
    num, den = w.int_form()
    for i, p in enumerate(piv):
        for k, row in enumerate(num):
            if row[p] != (den if k == i else 0):
                return False
    return True


def _complement(piv, h):
    s = set(piv)
    return tuple(j for j in range(h) if j not in s)


def _projection(w, piv, h):
    num, den = w.int_form()
    rows = []
    for q in _complement(piv, h):
        row = [0] * h
        row[q] = den
        for i, p in enumerate(piv):
            row[p] = -num[i][q]
        rows.append(row)
    return RationalMatrix._from_int(rows, den, h)


def _section(piv, h):
    rows = []
    for p in piv:
        row = [0] * h
        row[p] = 1
        rows.append(row)
    return RationalMatrix.from_int_rows(rows, h)


def _lift(piv, h):
    quo = _complement(piv, h)
    return RationalMatrix.from_int_rows([[int(j == q) for q in quo] for j in range(h)], len(quo))


def springer(p):
    """``N = incl o psi o proj``; square-zero with image inside ``W``."""
    return p.inclusion() @ (p.psi @ p.projection())


def corank(p):
    return p.t - p.psi.rank()


def check_square_zero(n):
    if n.nrows != n.ncols:
        raise NotSquareZeroError("endomorphism must be square")
    if not (n @ n).is_zero():
        raise NotSquareZeroError("matrix is not square-zero")


def dual_point(n, t):
    """The point of ``T*G(t, H*)`` lying over the transpose of ``n``.

    Defined only when ``rank(n) == t``; ``springer(dual_point(n, t)).T == n``.
    """
    check_square_zero(n)
    h = n.nrows
    if 2 * t > h or t < 1:
        raise ValueError(f"need 1 <= t <= h/2, got h={h}, t={t}")
    k = n.rank()
    if k != t:
        raise OffDenseOrbitError(f"off dense orbit: rank {k} < t={t}")
    nt = n.T
    w = n.row_space()
    piv = _pivots(w)
    psi = _section(piv, h) @ (nt @ _lift(piv, h))
    return CotangentPoint(h, t, w, psi)


@dataclass(frozen=True)
class FiberDescriptor:
    k: int
    grassmann: tuple

    @property
    def dim(self):
        a, b = self.grassmann
        return a * (b - a)


def fiber_space(n, t):
    """Fibre of the Springer map over ``n``: subspaces between ``im n`` and ``ker n``.

    It is ``G(t - k, h - 2k)`` with ``k = rank n``.
    """
    check_square_zero(n)
    h = n.nrows
    k = n.rank()
    if k > t or t > h - k:
        raise ValueError(f"no t-dimensional subspace between image and kernel (k={k}, t={t}, h={h})")
    big_n = h - 2 * t + 1
    if h - 2 * k != big_n + 2 * (t - k) - 1:
        raise AssertionError("fibre does not match the G(r, n+2r-1) bundle")
    return FiberDescriptor(k, (t - k, h - 2 * k))


def in_fiber(p, n):
    """``im n <= W <= ker n`` for the subspace of ``p``."""
    if not (n @ p.inclusion()).is_zero():
        return False
    return subspace_contains(p.W, n.T)


def deform(p, gamma):
    """``gamma * E + N`` where ``E`` is the idempotent onto ``W`` killing quotient lifts.

    Satisfies ``A @ A == gamma * A``; ``gamma = 0`` returns ``springer(p)``.
    """
    gamma = Fraction(gamma)
    n = springer(p)
    if gamma == 0:
        return n
    # E = incl @ section: column p_i of E is row i of W, other columns vanish
    num, den = p.W.int_form()
    cols = [(0,) * p.h] * p.h
    for i, q in enumerate(p.pivots):
        cols[q] = num[i]
    e = RationalMatrix._from_int(tuple(zip(*cols)), den, p.h)
    return e.scale(gamma) + n


def cotangent_dim(h, t):
    return 2 * t * (h - t)


# partitions and flags

def dual_partition(eta):
    """Conjugate partition: column lengths of the Young diagram."""
    eta = list(eta)
    if any(a < b for a, b in zip(eta, eta[1:])) or any(p <= 0 for p in eta):
        raise ValueError(f"not a partition: {eta}")
    if not eta:
        return []
    return [sum(1 for p in eta if p > i) for i in range(eta[0])]


def partitions(h, largest=None):
    """Partitions of ``h`` in reverse lexicographic order."""
    if largest is None:
        largest = h
    if h == 0:
        yield []
        return
    for first in range(min(h, largest), 0, -1):
        for rest in partitions(h - first, first):
            yield [first] + rest


def flag_dims(eta, theta):
    """Prefix sums ``n_j = sum_{i<=j} hat_p[theta(i)]`` for ``j < m``.

    ``theta`` is a permutation of ``0..m-1`` (0-based).
    """
    hat = dual_partition(eta)
    m = len(hat)
    if sorted(theta) != list(range(m)):
        raise ValueError(f"theta must permute 0..{m - 1}")
    out, acc = [], 0
    for j in range(m - 1):
        acc += hat[theta[j]]
        out.append(acc)
    return tuple(out)


def orbit_dim(eta):
    h = sum(eta)
    return h * h - sum(q * q for q in dual_partition(eta))


def cotangent_flag_dim(h, dims):
    """``dim T*Flag = h^2 - sum (block sizes)^2`` for the flag of given dimensions."""
    blocks = [b - a for a, b in zip((0,) + tuple(dims), tuple(dims) + (h,))]
    return h * h - sum(b * b for b in blocks)


def jordan_nilpotent(eta):
    """Nilpotent in Jordan form, one regular block per part, and its Jordan basis.

    Basis vector ``(block, level)`` is ``e_j`` with ``N e_j`` the vector one
    level lower in the same block (level 0 is killed).
    """
    h = sum(eta)
    rows = [[0] * h for _ in range(h)]
    labels = []
    start = 0
    for b, size in enumerate(eta):
        for lvl in range(size):
            labels.append((b, lvl))
            if lvl:
                rows[start + lvl - 1][start + lvl] = 1
        start += size
    return RationalMatrix(rows, h), labels


def step_assignment(eta, theta):
    """Assign Jordan basis vectors to flag steps.

    Block ``b`` (length ``eta[b]``) needs ``eta[b]`` distinct steps; step ``j``
    takes ``hat[theta[j]]`` vectors.  Each step is filled from the blocks with
    the most levels still unplaced, then every block's levels are laid on its
    steps in increasing order so ``N`` moves each vector to an earlier step.
    Returns ``{(block, level): step}`` or ``None`` when the greedy fill fails.
    """
    hat = dual_partition(eta)
    remaining = list(eta)
    steps = {b: [] for b in range(len(eta))}
    for j, col in enumerate(theta):
        cap = hat[col]
        order = sorted((b for b in range(len(eta)) if remaining[b] > 0), key=lambda b: (-remaining[b], b))
        if len(order) < cap:
            return None
        for b in order[:cap]:
            steps[b].append(j)
            remaining[b] -= 1
    if any(remaining):
        return None
    return {(b, lvl): s for b in steps for lvl, s in enumerate(steps[b])}


def invariant_flag(eta, theta):
    """``N_eta`` and a flag ``F_1 < ... < F_{m-1}`` with ``N F_j <= F_{j-1}``.

    ``dim F_j`` follows ``flag_dims(eta, theta)``.  Returns ``(N, None)`` when
    no assignment was found.
    """
    n, labels = jordan_nilpotent(eta)
    h = sum(eta)
    m = len(dual_partition(eta))
    where = step_assignment(eta, theta)
    if where is None:
        return n, None
    flag = []
    for j in range(m - 1):
        rows = [[int(c == idx) for c in range(h)] for idx, lab in enumerate(labels) if where[lab] <= j]
        flag.append(RationalMatrix(rows, h))
    return n, flag


def flag_is_invariant(n, flag):
    """``N F_1 = 0``, ``N F_j <= F_{j-1}`` and ``N H <= F_{m-1}``."""
    h = n.nrows
    prev = None
    for f in list(flag) + [RationalMatrix.identity(h)]:
        image = (n @ f.T).T
        if prev is None:
            if not image.is_zero():
                return False
        elif not subspace_contains(prev, image):
            return False
        prev = f
    return True


def jordan_type_ok(n, eta):
    """``rank N^j = h - (hat_1 + ... + hat_j)`` for every ``j``."""
    hat = dual_partition(eta)
    h = sum(eta)
    power = RationalMatrix.identity(h)
    acc = 0
    for j in range(len(hat) + 1):
        if power.rank() != h - acc:
            return False
        if j < len(hat):
            acc += hat[j]
            power = power @ n
    return True


def verify_flag_resolution_dims(h, bound=7):
    """Exhaustive check over partitions ``eta`` of ``h`` and orderings ``theta``.

    For each pair: ``dim T*Flag(n(theta), H)`` equals the orbit dimension
    ``h^2 - sum hat_i^2``, and an ``N_eta``-adapted flag with dimensions
    ``n(theta)`` is built from the Jordan basis and checked.  Also checks the
    Jordan type of ``N_eta`` and, for square-zero types ``2^t 1^(h-2t)``, that
    the orbit dimension is ``2t(h - t)``.  Returns a list of failure strings.
    """
    if h > bound:
        raise ValueError(f"h={h} exceeds the configured bound {bound}")
    failures = []
    for eta in partitions(h):
        hat = dual_partition(eta)
        m = len(hat)
        od = orbit_dim(eta)
        n, _ = jordan_nilpotent(eta)
        if not jordan_type_ok(n, eta):
            failures.append(f"eta={eta}: N_eta has the wrong Jordan type")
        if max(eta) <= 2:
            t = eta.count(2)
            if od != cotangent_dim(h, t):
                failures.append(f"eta={eta}: orbit dim {od} != 2t(h-t) = {cotangent_dim(h, t)}")
        for theta in permutations(range(m)):
            dims = flag_dims(eta, theta)
            if any(a >= b for a, b in zip(dims, dims[1:])):
                failures.append(f"eta={eta} theta={theta}: dims not increasing {dims}")
            fd = cotangent_flag_dim(h, dims)
            if fd != od:
                failures.append(f"eta={eta} theta={theta}: dim T*Flag {fd} != orbit dim {od}")
            _, flag = invariant_flag(eta, theta)
            if flag is None:
                failures.append(f"eta={eta} theta={theta}: no adapted flag constructed")
                continue
            if tuple(f.nrows for f in flag) != dims:
                failures.append(f"eta={eta} theta={theta}: flag dims {[f.nrows for f in flag]} != {dims}")
            if not flag_is_invariant(n, flag):
                failures.append(f"eta={eta} theta={theta}: flag not N-adapted")
    return failures


def alpha_corank(w, wt):
    """``t - rank(W -> H -> H/Wt)`` for subspaces given by basis rows.

    The rank of the composite is ``dim(W + Wt) - dim Wt``.
    """
    if w.ncols != wt.ncols:
        raise ValueError("ambient dimension mismatch")
    t = w.rank()
    return t - (w.vstack(wt).rank() - wt.rank())


# random sampling

def random_echelon(rng, t, h, lo=-3, hi=3):
    """Uniform pivot set, free entries uniform in ``[lo, hi]``."""
    piv = sorted(rng.sample(range(h), t))
    rows = []
    for i, p in enumerate(piv):
        row = [0] * h
        row[p] = 1
        for j in range(p + 1, h):
            if j not in piv:
                row[j] = rng.randint(lo, hi)
        rows.append(row)
    return RationalMatrix.from_int_rows(rows, h)


def random_of_rank(rng, nrows, ncols, r, lo=-3, hi=3, max_tries=1000):
    """Integer matrix of exact rank ``r`` by rejection from products of factors."""
    for _ in range(max_tries):
        if r == 0:
            return RationalMatrix.zeros(nrows, ncols)
        a = RationalMatrix.from_int_rows([[rng.randint(lo, hi) for _ in range(r)] for _ in range(nrows)], r)
        b = RationalMatrix.from_int_rows([[rng.randint(lo, hi) for _ in range(ncols)] for _ in range(r)], ncols)
        m = a @ b
        if m.rank() == r:
            return m
    raise RuntimeError(f"no rank-{r} sample in {max_tries} tries")


def random_point(rng, h, t, psi_rank=None):
    if psi_rank is None:
        psi_rank = rng.randint(0, t)
    w = random_echelon(rng, t, h)
    psi = random_of_rank(rng, t, h - t, psi_rank)
    return CotangentPoint(h, t, w, psi)


def random_gamma(rng):
    num = rng.randint(-3, 3)
    return Fraction(num, rng.randint(1, 3))


def sample_rng(seed, *key):
    return random.Random(f"{seed}:" + ":".join(str(k) for k in key))


# sampling campaign

def check_sample(p, gamma):
    """Run the sampling invariants on one point; returns a list of failed rule names."""
    bad = []
    n = springer(p)
    if not (n @ n).is_zero():
        bad.append("N^2 = 0")
    k = n.rank()
    c = corank(p)
    if k != p.t - c:
        bad.append("rank N = t - corank psi")
    if c == 0:
        d = dual_point(n, p.t)
        nd = springer(d)
        if nd.T != n:
            bad.append("transpose round trip")
        elif dual_point(nd, p.t) != p:
            bad.append("dual of dual")
    else:
        try:
            dual_point(n, p.t)
            bad.append("dual point defined off the dense orbit")
        except OffDenseOrbitError:
            pass
    try:
        f = fiber_space(n, p.t)
        if f.k != k or not in_fiber(p, n):
            bad.append("fibre membership")
    except AssertionError:
        bad.append("fibre descriptor h - 2k = n + 2(t - k) - 1")
    a = deform(p, gamma)
    if a @ a != a.scale(gamma):
        bad.append("A^2 = gamma A")
    elif gamma and a.rank() != p.t:
        bad.append("rank of deformation")
    return bad


@dataclass
class SpringerStats:
    h: int
    t: int
    samples: int
    failures: list
    histogram: dict
    round_trips: int

    def to_dict(self):
        return {
            "h": self.h,
            "t": self.t,
            "samples": self.samples,
            "failures": self.failures,
            "round_trips": self.round_trips,
            "histogram": {f"rank {k}": v for k, v in sorted(self.histogram.items())},
        }


def springer_campaign(h, t, samples, seed, keep=5):
    """Seeded random points of ``T*G(t, Q^h)`` run through :func:`check_sample`.

    The histogram counts samples by the rank of their Springer image.  At most
    ``keep`` failures are recorded in full.
    """
    if not 1 <= t or 2 * t > h:
        raise ValueError(f"need 1 <= t <= h/2, got h={h}, t={t}")
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = sample_rng(seed, "springer", h, t)
    hist = {k: 0 for k in range(t + 1)}
    failures = []
    trips = 0
    for i in range(samples):
        p = random_point(rng, h, t)
        gamma = random_gamma(rng)
        bad = check_sample(p, gamma)
        k = t - corank(p)
        hist[k] += 1
        if k == t and not bad:
            trips += 1
        if bad and len(failures) < keep:
            failures.append({"sample": i, "rules": bad, "W": p.W.tolist(), "psi": p.psi.tolist(), "gamma": str(gamma)})
        elif bad:
            failures.append({"sample": i, "rules": bad})
    return SpringerStats(h, t, samples, failures, hist, trips)
