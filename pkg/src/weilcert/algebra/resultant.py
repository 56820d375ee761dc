"""Sylvester and Macaulay resultants over a field, over K[t], and over Z."""
from __future__ import annotations

from weilcert.algebra import upoly
from weilcert.algebra.forms import Form, monomials
from weilcert.algebra.intpoly import IntPoly, resultant_z
from weilcert.algebra.linalg import det


def sylvester(a, b, zero=0):
    """Sylvester matrix of ascending coefficient lists whose entries may be any ring items."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    return rows


def resultant_field(F, a, b):
    """Res(a, b) for univariate polynomials over the field F."""
    a, b = upoly.trim(a), upoly.trim(b)
    if not a or not b:
        return 0
    if len(a) == 1 and len(b) == 1:
        return 1
    if len(a) == 1:
        return F.pow(a[0], len(b) - 1)
    if len(b) == 1:
        return F.pow(b[0], len(a) - 1)
    return det(F, sylvester(a, b))


def det_poly(F, M):
    """Determinant of a square matrix with entries in F[t] (fraction-free Bareiss)."""
    M = [[upoly.trim(x) for x in row] for row in M]
    n = len(M)
    if n == 0:
        return [1]
    sign = 1
    prev = [1]
    for k in range(n - 1):
        if not M[k][k]:
            # pick the pivot of least degree to keep the intermediate entries small
            cands = [i for i in range(k + 1, n) if M[i][k]]
            if not cands:
                return []
            i = min(cands, key=lambda r: len(M[r][k]))
            M[k], M[i] = M[i], M[k]
            sign = -sign
        pk = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n):
                num = upoly.sub(F, upoly.mul(F, row_i[j], pk), upoly.mul(F, mik, row_k[j]))
                if num:
                    q, r = upoly.divmod_(F, num, prev)
                    assert not r, "Bareiss division must be exact"
                    row_i[j] = q
                else:
                    row_i[j] = []
            row_i[k] = []
        prev = pk
    out = M[n - 1][n - 1]
    return upoly.neg(F, out) if sign < 0 else out


def resultant_poly(F, a, b):
    """Res_y(a, b) where a, b are lists (ascending in y) of polynomials in t.

    Returns a polynomial in t.
    """
    a = _trim_outer(a)
    b = _trim_outer(b)
    if not a or not b:
        return []
    if len(a) == 1 and len(b) == 1:
        return [1]
    return det_poly(F, sylvester(a, b, zero=[]))


def _trim_outer(a):
    a = [upoly.trim(x) for x in a]
    while a and not a[-1]:
        a.pop()
    return a


def resultant(a, b, F=None):
    """Resultant of two univariate polynomials.

    With F None the inputs are integer polynomials; with a field the inputs are
    coefficient lists over F, or lists of polynomials in a second variable (in
    which case the result is a polynomial in that variable).
    """
    if F is None:
        return resultant_z(a, b)
    if any(isinstance(c, list) for c in list(a) + list(b)):
        return resultant_poly(F, [c if isinstance(c, list) else [c] for c in a],
                              [c if isinstance(c, list) else [c] for c in b])
    return resultant_field(F, a, b)


# --- Macaulay resultant -------------------------------------------------------

def _macaulay_layout(degrees):
    """Column monomials, row recipes and the index set of the extraneous minor.

    Returns (cols, col_index, rows, extra): rows is a list of (form index,
    multiplier monomial), one per column monomial of degree D.
    """
    n = len(degrees)
    D = sum(d - 1 for d in degrees) + 1
    cols = monomials(n, D)
    col_index = {m: i for i, m in enumerate(cols)}
    rows = []
    extra = []
    for idx, m in enumerate(cols):
        # the first variable whose power reaches its degree "owns" the monomial
        owner = next(i for i in range(n) if m[i] >= degrees[i])
        mult = tuple(m[j] - (degrees[j] if j == owner else 0) for j in range(n))
        rows.append((owner, mult))
        # monomials divisible by two or more x_i^{d_i} index the extraneous minor
        if sum(1 for j in range(n) if m[j] >= degrees[j]) > 1:
            extra.append(idx)
    return cols, col_index, rows, extra


def macaulay_matrix(forms, coeff_of):
    """Matrix of the forms' multiples; coeff_of maps (form, exponent) to an entry."""
    degrees = [f.degree for f in forms]
    cols, col_index, rows, extra = _macaulay_layout(degrees)
    zero = coeff_of(None, None)
    M = []
    for owner, mult in rows:
        row = [zero] * len(cols)
        f = forms[owner]
        for e in f.terms:
            t = tuple(a + b for a, b in zip(e, mult))
            row[col_index[t]] = coeff_of(f, e)
        M.append(row)
    E = [[M[i][j] for j in extra] for i in extra]
    return M, E


def macaulay_resultant(F, forms):
    """Numeric resultant of n forms in n variables over F.

    Returns (value, ok); ok is False when the extraneous minor vanishes and the
    quotient is undefined (callers retry after a change of coordinates).
    """
    M, E = macaulay_matrix(forms, lambda f, e: 0 if f is None else f.terms[e])
    dE = det(F, E) if E else 1
    if not dE:
        return None, False
    return F.div(det(F, M), dE), True


def macaulay_resultant_poly(F, forms_t):
    """Resultant over F[t]: forms_t are Forms whose coefficients are polynomials in t.

    Coefficients are stored as tuples (hashable) inside Form terms; returns
    (polynomial, ok).
    """
    M, E = macaulay_matrix(forms_t, lambda f, e: [] if f is None else list(f.terms[e]))
    dE = det_poly(F, E) if E else [1]
    if not dE:
        return None, False
    q, r = upoly.divmod_(F, det_poly(F, M), dE)
    assert not r, "extraneous factor must divide the Macaulay determinant"
    return q, True


class PolyCoeffForm(Form):
    """A Form whose coefficients are tuples representing polynomials in t."""

    def __init__(self, field, nvars, degree, terms=None):
        self.field = field
        self.nvars = nvars
        self.degree = degree
        self.terms = {tuple(e): tuple(upoly.trim(c)) for e, c in (terms or {}).items()
                      if upoly.trim(c)}


def discriminant_int(P):
    """Res(P, P') over Z, used in tests as an independent squarefreeness check."""
    P = P if isinstance(P, IntPoly) else IntPoly(P)
    dP = IntPoly([i * P[i] for i in range(1, len(P))])
    return resultant_z(P, dP)
