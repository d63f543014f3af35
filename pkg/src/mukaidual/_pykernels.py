"""Pure-Python integer matrix kernels.

Reference implementation of the routines in ``_kernels.pyx``.  Matrices are
lists of rows of Python ints; every routine copies its input.  Elimination is
fraction-free (Bareiss), so all intermediate values stay integral and every
division below is exact.
"""


def rank(rows, ncols):
    m = [list(r) for r in rows]
    nrows = len(m)
    piv_row = 0
    prev = 1
    for c in range(ncols):
        if piv_row == nrows:
            break
        for i in range(piv_row, nrows):
            if m[i][c]:
                break
        else:
            continue
        if i != piv_row:
            m[piv_row], m[i] = m[i], m[piv_row]
        prow = m[piv_row]
        p = prow[c]
        for i in range(piv_row + 1, nrows):
            row = m[i]
            a = row[c]
            if a:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j] - a * prow[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (p * row[j]) // prev
            row[c] = 0
        prev = p
        piv_row += 1
    return piv_row


def rref(rows, ncols):
    """Fraction-free Gauss-Jordan elimination.

    Returns ``(num, pivots, den)`` where ``num`` holds the nonzero rows only and
    the reduced row-echelon form equals ``num / den``.  Every pivot entry of
    ``num`` equals ``den``, and ``den > 0``.
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    piv_row = 0
    prev = 1
    pivots = []
    for c in range(ncols):
        if piv_row == nrows:
            break
        for i in range(piv_row, nrows):
            if m[i][c]:
                break
        else:
            continue
        if i != piv_row:
            m[piv_row], m[i] = m[i], m[piv_row]
        prow = m[piv_row]
        p = prow[c]
        for i in range(nrows):
            if i == piv_row:
                continue
            row = m[i]
            a = row[c]
            if a:
                for j in range(ncols):
                    row[j] = (p * row[j] - a * prow[j]) // prev
            else:
                for j in range(ncols):
                    row[j] = (p * row[j]) // prev
        prev = p
        pivots.append(c)
        piv_row += 1
    if prev < 0:
        num = tuple(tuple(-x for x in row) for row in m[:piv_row])
        prev = -prev
    else:
        num = tuple(map(tuple, m[:piv_row]))
    return num, pivots, prev


def matmul(a, b, inner, ncols):
    out = []
    for arow in a:
        acc = [0] * ncols
        for k in range(inner):
            x = arow[k]
            if x:
                brow = b[k]
                for j in range(ncols):
                    acc[j] += x * brow[j]
        out.append(tuple(acc))
    return tuple(out)
