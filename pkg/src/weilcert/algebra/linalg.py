"""Dense linear algebra over a FieldDesc (lists of lists of ints)."""
from __future__ import annotations


def rref(F, rows, ncols=None):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = F.inv(M[r][c])
        M[r] = [F.mul(x, inv) for x in M[r]]
        row_r = M[r]
        nz = [j for j in range(c, len(row_r)) if row_r[j]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                row_i = M[i]
                for j in nz:
                    row_i[j] = F.sub(row_i[j], F.mul(f, row_r[j]))
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(F, rows):
    return len(rref(F, rows)[1])


def kernel(F, rows, ncols):
    """Basis of {v : rows . v = 0}, one vector per free column, in RREF gauge."""
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(F, rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(piv):
            if R[i][f]:
                v[c] = F.neg(R[i][f])
        basis.append(v)
    return basis


def det(F, rows):
    M = [list(r) for r in rows]
    n = len(M)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.mul(M[i][c], inv)
                for j in range(c, n):
                    if M[c][j]:
                        M[i][j] = F.sub(M[i][j], F.mul(f, M[c][j]))
    return d


def matmul(F, A, B):
    out = []
    for row in A:
        out_row = []
        for j in range(len(B[0])):
            acc = 0
            for k, a in enumerate(row):
                if a and B[k][j]:
                    acc = F.add(acc, F.mul(a, B[k][j]))
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(F, A, v):
    return [_dot(F, row, v) for row in A]


def _dot(F, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = F.add(acc, F.mul(x, y))
    return acc


def inverse(F, A):
    n = len(A)
    aug = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    R, piv = rref(F, aug, n)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]
