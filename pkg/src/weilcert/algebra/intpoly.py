"""Integer polynomials: gcd over Q, resultants, power sums."""
from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd

from weilcert.errors import BadConstantTerm, BothZero


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


class IntPoly:
    """Polynomial with arbitrary-precision integer coefficients, ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = tuple(int(c) for c in _trim(coeffs))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == tuple(_trim(other))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' + mono if mono else ''}"
            terms.append(("-" if c < 0 else "+", body))
        s = "".join(f" {sg} {b}" for sg, b in terms).strip()
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        n = max(len(self), len(other))
        return IntPoly([self[i] + other[i] for i in range(n)])

    def __neg__(self):
        return IntPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return IntPoly()
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def content(self):
        g = 0
        for c in self.coeffs:
            g = igcd(g, c)
        return g

    def substitute_power(self, m):
        """P(T^m)."""
        out = [0] * (m * max(self.degree, 0) + 1)
        for i, c in enumerate(self.coeffs):
            out[i * m] = c
        return IntPoly(out)

    def to_json(self):
        return {"coeffs": [str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(obj):
        return IntPoly(int(c) for c in obj["coeffs"])


def _as_poly(a):
    return a if isinstance(a, IntPoly) else IntPoly(a)


def _qdivmod(a, b):
    """Division of Fraction coefficient lists."""
    a = list(a)
    db = len(b) - 1
    quo = [Fraction(0)] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / b[-1]
        if c:
            quo[i - db] = c
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    return quo, _trim(a[:db])


def normalize_primitive(cs):
    """Clear denominators, divide out content, make lowest nonzero coeff positive."""
    cs = _trim(cs)
    if not cs:
        return IntPoly()
    den = 1
    for c in cs:
        c = Fraction(c)
        den = den * c.denominator // igcd(den, c.denominator)
    ints = [int(Fraction(c) * den) for c in cs]
    g = 0
    for c in ints:
        g = igcd(g, c)
    ints = [c // g for c in ints]
    low = next(c for c in ints if c)
    if low < 0:
        ints = [-c for c in ints]
    return IntPoly(ints)


def poly_gcd_z(a, b):
    """Primitive gcd over Q, normalized with positive lowest nonzero coefficient."""
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero() and b.is_zero():
        raise BothZero("gcd of two zero polynomials")
    x = [Fraction(c) for c in a.coeffs]
    y = [Fraction(c) for c in b.coeffs]
    while y:
        _, r = _qdivmod(x, y)
        # keep the coefficients small between steps
        x, y = y, list(normalize_primitive(r).coeffs) if r else []
        x = [Fraction(c) for c in x]
        y = [Fraction(c) for c in y]
    return normalize_primitive(x)


def exact_divide(a, b):
    """a / b over Z; raises ArithmeticError when the division is not exact."""
    a, b = _as_poly(a), _as_poly(b)
    q, r = _qdivmod([Fraction(c) for c in a.coeffs], [Fraction(c) for c in b.coeffs])
    if r or any(c.denominator != 1 for c in q):
        raise ArithmeticError(f"{a} is not divisible by {b} over Z")
    return IntPoly(int(c) for c in q)


def divides_over_q(b, a):
    a, b = _as_poly(a), _as_poly(b)
    _, r = _qdivmod([Fraction(c) for c in a.coeffs], [Fraction(c) for c in b.coeffs])
    return not r


def sylvester_matrix(a, b):
    """Sylvester matrix of two coefficient lists (ascending, generic ring)."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [0] * size
        for j, c in enumerate(reversed(a)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [0] * size
        for j, c in enumerate(reversed(b)):
            row[i + j] = c
        rows.append(row)
    return rows


def det_bareiss(M):
    """Determinant of an integer matrix by fraction-free elimination."""
    M = [list(r) for r in M]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def resultant_z(a, b):
    """Resultant of two integer polynomials (Sylvester determinant)."""
    a, b = _as_poly(a), _as_poly(b)
    if a.is_zero() or b.is_zero():
        return 0
    if a.degree == 0 and b.degree == 0:
        return 1
    return det_bareiss(sylvester_matrix(list(a.coeffs), list(b.coeffs)))


def newton_power_sums(P, count):
    """Power sums s_j = sum alpha_i^j for P = prod(1 - alpha_i T), j = 1..count."""
    P = _as_poly(P)
    if P[0] != 1:
        raise BadConstantTerm(f"constant term {P[0]} != 1")
    # Newton: s_j = -j c_j - sum_{i=1}^{j-1} c_i s_{j-i}, with c the coefficients of P
    c = P.coeffs
    s = []
    for j in range(1, count + 1):
        acc = -j * (c[j] if j < len(c) else 0)
        for i in range(1, j):
            if i < len(c):
                acc -= c[i] * s[j - i - 1]
        s.append(acc)
    return s


def poly_from_power_sums(s, n):
    """Inverse of newton_power_sums: degree-n P with P(0) = 1 from s_1..s_n."""
    c = [Fraction(1)]
    for j in range(1, n + 1):
        acc = Fraction(-s[j - 1])
        for i in range(1, j):
            acc -= c[i] * s[j - i - 1]
        c.append(acc / j)
    if any(x.denominator != 1 for x in c):
        raise ArithmeticError("power sums do not come from an integer polynomial")
    return IntPoly(int(x) for x in c)
