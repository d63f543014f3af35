"""Exact rational matrices.

Entries are Python ints or :class:`fractions.Fraction`; a Fraction with unit
denominator is stored as an int so integral matrices stay on the fast integer
path.  Rank and echelon computations clear denominators row by row and call
the integer kernels in :mod:`mukaidual.kernels`.

Vectors are column vectors: an ``m x n`` matrix maps ``Q^n`` to ``Q^m``.
Subspaces are given by the rows of a matrix and canonicalized by reduced
row-echelon form.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from . import kernels


def _norm(x):
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return int(x)
    if isinstance(x, str):
        return _norm(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return _norm(Fraction(x))


def _frac(x, den):
    if den == 1 or not x:
        return x
    q, r = divmod(x, den)
    return q if not r else Fraction(x, den)


class RationalMatrix:
    """Immutable exact matrix over Q.

    Internally a matrix is ``num / den`` with integer ``num``, ``den > 0`` and
    the gcd of ``den`` with every entry of ``num`` equal to 1, so equal
    matrices have equal internal forms.  The rational rows are built on
    demand.
    """

    __slots__ = ("_rows", "nrows", "ncols", "_hash", "_num", "_den")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(_norm(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        self._rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None
        self._num = None
        self._den = None

    @classmethod
    def _raw(cls, rows, ncols):
        # rows already normalized tuples
        obj = cls.__new__(cls)
        obj._rows = rows
        obj.nrows = len(rows)
        obj.ncols = ncols
        obj._hash = None
        obj._num = None
        obj._den = None
        return obj

    @classmethod
    def _from_int(cls, num, den, ncols):
        """Build ``num / den`` from integer rows.

        A tuple ``num`` must already be a tuple of tuples; other sequences
        are copied.
        """
        if type(num) is not tuple:
            num = tuple(map(tuple, num))
        if den != 1:
            if den < 0:
                num = tuple(tuple(-x for x in r) for r in num)
                den = -den
            g = gcd(den, *(x for r in num for x in r))
            if g != 1:
                num = tuple(tuple(x // g for x in r) for r in num)
                den //= g
        obj = cls.__new__(cls)
        obj._rows = num if den == 1 else None
        obj.nrows = len(num)
        obj.ncols = ncols
        obj._hash = None
        obj._num = num
        obj._den = den
        return obj

    @property
    def rows(self):
        if self._rows is None:
            den = self._den
            self._rows = tuple(tuple(_frac(x, den) for x in r) for r in self._num)
        return self._rows

    def int_form(self):
        """``(num, den)`` with integer rows ``num`` and ``self == num / den``."""
        if self._num is None:
            den = 1
            for r in self._rows:
                for x in r:
                    if type(x) is not int:
                        den = lcm(den, x.denominator)
            if den == 1:
                self._num = self._rows
            else:
                self._num = tuple(tuple(int(x * den) for x in r) for r in self._rows)
            self._den = den
        return self._num, self._den

    @classmethod
    def from_int_rows(cls, rows, ncols):
        """Trusted constructor for sequences of Python ints."""
        return cls._from_int(tuple(map(tuple, rows)), 1, ncols)

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls._from_int(tuple((0,) * ncols for _ in range(nrows)), 1, ncols)

    @classmethod
    def identity(cls, n):
        return cls._from_int(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), 1, n)

    @classmethod
    def from_columns(cls, cols, nrows=None):
        cols = list(cols)
        if not cols:
            if nrows is None:
                raise ValueError("nrows is required without columns")
            return cls._raw(tuple(() for _ in range(nrows)), 0)
        return cls(zip(*cols), len(cols))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.ncols != other.ncols:
            return False
        a, da = self.int_form()
        b, db = other.int_form()
        return da == db and a == b

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ncols,) + self.int_form())
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"RationalMatrix([{body}], ncols={self.ncols})"

    def tolist(self):
        return [list(r) for r in self.rows]

    def is_integral(self):
        return self.int_form()[1] == 1

    def is_zero(self):
        return not any(any(r) for r in self.int_form()[0])

    # arithmetic

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def _combine(self, other, sign):
        self._check_same_shape(other)
        a, da = self.int_form()
        b, db = other.int_form()
        if da == db:
            rows = [[x + sign * y for x, y in zip(r, s)] for r, s in zip(a, b)]
            return RationalMatrix._from_int(rows, da, self.ncols)
        den = lcm(da, db)
        fa, fb = den // da, sign * (den // db)
        rows = [[fa * x + fb * y for x, y in zip(r, s)] for r, s in zip(a, b)]
        return RationalMatrix._from_int(rows, den, self.ncols)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        a, da = self.int_form()
        return RationalMatrix._from_int([[-x for x in r] for r in a], da, self.ncols)

    def scale(self, c):
        c = Fraction(c)
        a, da = self.int_form()
        p = c.numerator
        rows = [[p * x for x in r] for r in a]
        return RationalMatrix._from_int(rows, da * c.denominator, self.ncols)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        a, da = self.int_form()
        b, db = other.int_form()
        prod = kernels.matmul(a, b, self.ncols, other.ncols)
        return RationalMatrix._from_int(prod, da * db, other.ncols)

    def apply(self, vec):
        """Image of a column vector given as a sequence."""
        return tuple(_norm(sum(a * b for a, b in zip(r, vec))) for r in self.rows)

    @property
    def T(self):
        if self.nrows == 0:
            return RationalMatrix._raw(tuple(() for _ in range(self.ncols)), 0)
        if self.ncols == 0:
            return RationalMatrix._raw((), self.nrows)
        a, da = self.int_form()
        obj = RationalMatrix.__new__(RationalMatrix)
        obj.nrows = self.ncols
        obj.ncols = self.nrows
        obj._hash = None
        obj._num = tuple(zip(*a))
        obj._den = da
        obj._rows = obj._num if da == 1 else None
        return obj

    def submatrix(self, rows=None, cols=None):
        rows = range(self.nrows) if rows is None else list(rows)
        cols = range(self.ncols) if cols is None else list(cols)
        return RationalMatrix._raw(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ValueError("column mismatch in vstack")
        a, da = self.int_form()
        b, db = other.int_form()
        den = lcm(da, db)
        fa, fb = den // da, den // db
        if fa != 1:
            a = tuple(tuple(fa * x for x in r) for r in a)
        if fb != 1:
            b = tuple(tuple(fb * x for x in r) for r in b)
        return RationalMatrix._from_int(a + b, den, self.ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row mismatch in hstack")
        return RationalMatrix._raw(
            tuple(r + s for r, s in zip(self.rows, other.rows)), self.ncols + other.ncols
        )

    # elimination

    def _int_rows(self):
        # scaling by the common denominator leaves rank and row space unchanged
        return self.int_form()[0]

    def rank(self):
        if self.nrows == 0 or self.ncols == 0:
            return 0
        return kernels.rank(self._int_rows(), self.ncols)

    def rref(self):
        """Reduced row-echelon form (nonzero rows only) and pivot columns."""
        if self.nrows == 0 or self.ncols == 0:
            return RationalMatrix._raw((), self.ncols), ()
        num, pivots, den = kernels.rref(self._int_rows(), self.ncols)
        return RationalMatrix._from_int(num, den, self.ncols), tuple(pivots)

    def nullspace(self):
        """Echelon basis of the kernel, one basis vector per row.

        The vector attached to free column ``f`` has entry 1 at ``f`` and 0 at
        the other free columns.
        """
        r, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in set(pivots)]
        basis = []
        for f in free:
            v = [0] * self.ncols
            v[f] = 1
            for i, p in enumerate(pivots):
                v[p] = -r.rows[i][f]
            basis.append(tuple(v))
        return RationalMatrix._raw(tuple(basis), self.ncols)

    def left_nullspace(self):
        """Echelon basis of ``{y : y^T A = 0}``, one vector per row."""
        return self.T.nullspace()

    def nullity(self):
        return self.ncols - self.rank()

    def row_space(self):
        """Canonical basis (RREF rows) of the row space."""
        return self.rref()[0]

    def column_space(self):
        """Canonical basis of the column space, one vector per row."""
        return self.T.rref()[0]

    def coker_rows(self):
        """Coordinates of the cokernel: rows that are not pivots of the column echelon form."""
        pivots = set(self.T.rref()[1])
        return tuple(i for i in range(self.nrows) if i not in pivots)


def as_matrix(m):
    return m if isinstance(m, RationalMatrix) else RationalMatrix(m)


def subspace_contains(basis, vectors):
    """True when every row of ``vectors`` lies in the row span of ``basis``."""
    if vectors.nrows == 0:
        return True
    return basis.vstack(vectors).rank() == basis.rank()
