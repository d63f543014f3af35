# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer matrix kernels.

Same contracts as ``_pykernels``.  Arithmetic runs on int64 with overflow
detection; any input or intermediate value that does not fit raises
``KernelOverflow`` and the caller retries on the pure-Python path.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t


cdef extern from *:
    bint __builtin_mul_overflow(long long a, long long b, long long* r) nogil
    bint __builtin_sub_overflow(long long a, long long b, long long* r) nogil
    bint __builtin_add_overflow(long long a, long long b, long long* r) nogil


class KernelOverflow(ArithmeticError):
    pass


cdef long long* _load(rows, Py_ssize_t nrows, Py_ssize_t ncols) except NULL:
    cdef long long* buf = <long long*> malloc(max(nrows * ncols, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                buf[i * ncols + j] = row[j]
    except OverflowError:
        free(buf)
        raise KernelOverflow()
    return buf


cdef int _combine(long long p, long long x, long long a, long long y,
                  long long prev, long long* out) nogil:
    # out = (p*x - a*y) / prev, exact; returns 1 on overflow
    cdef long long u, v, w
    if __builtin_mul_overflow(p, x, &u):
        return 1
    if __builtin_mul_overflow(a, y, &v):
        return 1
    if __builtin_sub_overflow(u, v, &w):
        return 1
    out[0] = w // prev
    return 0


cdef inline void _swap_rows(long long* m, Py_ssize_t ncols, Py_ssize_t r1, Py_ssize_t r2) nogil:
    cdef Py_ssize_t j
    cdef long long tmp
    for j in range(ncols):
        tmp = m[r1 * ncols + j]
        m[r1 * ncols + j] = m[r2 * ncols + j]
        m[r2 * ncols + j] = tmp


def rank(rows, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return 0
    cdef long long* m = _load(rows, nrows, ncols)
    cdef Py_ssize_t piv_row = 0, c, i, j
    cdef long long prev = 1, p, a
    cdef int bad = 0
    with nogil:
        for c in range(ncols):
            if piv_row == nrows:
                break
            i = piv_row
            while i < nrows and m[i * ncols + c] == 0:
                i += 1
            if i == nrows:
                continue
            if i != piv_row:
                _swap_rows(m, ncols, i, piv_row)
            p = m[piv_row * ncols + c]
            for i in range(piv_row + 1, nrows):
                a = m[i * ncols + c]
                for j in range(c + 1, ncols):
                    if _combine(p, m[i * ncols + j], a, m[piv_row * ncols + j], prev,
                                &m[i * ncols + j]):
                        bad = 1
                        break
                if bad:
                    break
                m[i * ncols + c] = 0
            if bad:
                break
            prev = p
            piv_row += 1
    free(m)
    if bad:
        raise KernelOverflow()
    return piv_row


def rref(rows, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return (), [], 1
    cdef long long* m = _load(rows, nrows, ncols)
    cdef long long* piv = <long long*> malloc(max(min(nrows, ncols), 1) * sizeof(long long))
    if piv == NULL:
        free(m)
        raise MemoryError()
    cdef Py_ssize_t piv_row = 0, c, i, j
    cdef long long prev = 1, p, a
    cdef int bad = 0
    with nogil:
        for c in range(ncols):
            if piv_row == nrows:
                break
            i = piv_row
            while i < nrows and m[i * ncols + c] == 0:
                i += 1
            if i == nrows:
                continue
            if i != piv_row:
                _swap_rows(m, ncols, i, piv_row)
            p = m[piv_row * ncols + c]
            for i in range(nrows):
                if i == piv_row:
                    continue
                a = m[i * ncols + c]
                for j in range(ncols):
                    if _combine(p, m[i * ncols + j], a, m[piv_row * ncols + j], prev,
                                &m[i * ncols + j]):
                        bad = 1
                        break
                if bad:
                    break
            if bad:
                break
            prev = p
            piv[piv_row] = c
            piv_row += 1
    if bad:
        free(m)
        free(piv)
        raise KernelOverflow()
    cdef long long sign = -1 if prev < 0 else 1
    num = tuple([tuple([sign * m[i * ncols + j] for j in range(ncols)]) for i in range(piv_row)])
    pivots = [piv[i] for i in range(piv_row)]
    free(m)
    free(piv)
    return num, pivots, sign * prev


def matmul(a, b, Py_ssize_t inner, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(a)
    if nrows == 0 or ncols == 0:
        return ((0,) * ncols,) * nrows
    if inner == 0:
        return ((0,) * ncols,) * nrows
    cdef long long* x = _load(a, nrows, inner)
    cdef long long* y
    try:
        y = _load(b, inner, ncols)
    except KernelOverflow:
        free(x)
        raise
    cdef long long* z = <long long*> malloc(nrows * ncols * sizeof(long long))
    cdef Py_ssize_t i, j, k
    cdef long long acc, prod
    cdef int bad = 0
    with nogil:
        for i in range(nrows):
            for j in range(ncols):
                acc = 0
                for k in range(inner):
                    if __builtin_mul_overflow(x[i * inner + k], y[k * ncols + j], &prod):
                        bad = 1
                        break
                    if __builtin_add_overflow(acc, prod, &acc):
                        bad = 1
                        break
                if bad:
                    break
                z[i * ncols + j] = acc
            if bad:
                break
    free(x)
    free(y)
    if bad:
        free(z)
        raise KernelOverflow()
    out = tuple([tuple([z[i * ncols + j] for j in range(ncols)]) for i in range(nrows)])
    free(z)
    return out
