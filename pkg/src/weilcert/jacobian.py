"""Divisor arithmetic on smooth plane curves by Riemann-Roch linear algebra.

Divisors live over one working field K (an extension of the curve's base
field).  L(D) is computed by the classical Brill-Noether recipe: choose a
product H of lines with div(H) >= D+, then L(D) = {G/H : div(G) >= div(H) - D}
where G runs over degree-n forms reduced modulo the curve equation.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import lcm

from sympy import factorint

from weilcert.algebra import upoly
from weilcert.algebra.forms import Form, dehomogenize, standard_monomials, taylor_shift
from weilcert.algebra.linalg import kernel
from weilcert.curve import PlaneCurve, canonical, genus, is_smooth, rational_points
from weilcert.errors import BudgetExceeded, NotSmooth, WeilcertError

GROUP_BUDGET = 20000
DEGREE_CAP = 24


class LeavesField(WeilcertError):
    """A divisor needed points outside the working field."""


# -- curve context on a fixed working field -------------------------------------

class CurveOverField:
    """A smooth plane curve together with a working field K and cached local data."""

    def __init__(self, curve: PlaneCurve, K=None, seed=0):
        if not is_smooth(curve):
            raise NotSmooth("Riemann-Roch arithmetic needs a smooth plane curve")
        self.curve = curve
        self.base = curve.field
        self.g = genus(curve)
        if K is None:
            K, emb = curve.field.extension(max(1, lcm(*range(1, self.g + 1))))
        else:
            emb = K.embedding_from(curve.field)
        self.K = K
        self.form = curve.form.map_coeffs(K, emb)
        self.grad = self.form.gradient()
        self.rng = random.Random(seed)
        self._params = {}
        self.line_pool = {}

    @property
    def d(self):
        return self.form.degree

    def on_curve(self, pt):
        return self.form(pt) == 0

    # local parametrization ------------------------------------------------
    def local(self, pt):
        lp = self._params.get(pt)
        if lp is None:
            lp = LocalParam(self, pt)
            self._params[pt] = lp
        return lp

    def order_at(self, form: Form, pt, cap=None):
        """ord_P of a form (not divisible by the curve equation) at a point of C(K)."""
        cap = cap if cap is not None else self.d * max(form.degree, 1) + 1
        lp = self.local(pt)
        M = min(8, cap + 1)
        while True:
            # most orders are tiny, so grow the precision only when needed
            s = lp.series_of(form, M)
            for i, c in enumerate(s):
                if c:
                    return i
            if M > cap:
                break
            M = min(2 * M, cap + 1)
        raise WeilcertError("form vanishes to order beyond the intersection bound")


class LocalParam:
    """Power-series parametrization of the curve at a smooth point."""

    def __init__(self, ctx: CurveOverField, pt):
        K = ctx.K
        self.K = K
        self.pt = pt
        self.chart = next(i for i, x in enumerate(pt) if x)
        self.others = [i for i in range(3) if i != self.chart]
        poly = dehomogenize(ctx.form, self.chart)
        u0, v0 = pt[self.others[0]], pt[self.others[1]]
        self.origin = (u0, v0)
        self.g = taylor_shift(K, poly, (u0, v0))
        gu = self.g.get((1, 0), 0)
        gv = self.g.get((0, 1), 0)
        if not gu and not gv:
            raise NotSmooth(f"point {pt} is singular")
        # parameter t is u if the curve is transverse to the v-direction, else v
        self.swap = not gv
        self.lin = gu if self.swap else gv
        self.order = 0
        self.phi = [0]
        self._pows = {}
        # derivative of g in the dependent variable (v, or u when swapped)
        self.dg = {}
        for (a, b), c in self.g.items():
            k, key = (a, (a - 1, b)) if self.swap else (b, (a, b - 1))
            if k:
                v = K.mul(c, K.from_int(k))
                if v:
                    self.dg[key] = K.add(self.dg.get(key, 0), v)

    def _ensure(self, M):
        """Compute phi(t) mod t^M with g(t, phi) = 0 (or g(phi, t) = 0).

        Newton's iteration: the number of correct coefficients doubles per pass.
        """
        if self.order >= M:
            return
        K = self.K
        phi = self.phi[:M] + [0] * (M - len(self.phi))
        for _ in range(M.bit_length() + 2):
            val = self._eval(self.g, phi, M)
            if not any(val):
                break
            deriv = self._eval(self.dg, phi, M)
            phi = [K.sub(a, b) for a, b in zip(phi, _smul(K, val, _sinv(K, deriv, M), M))]
        else:  # pragma: no cover
            raise WeilcertError("power-series solve did not converge")
        self.phi = phi
        self.order = M
        self._pows = {}

    def _eval(self, poly, phi, M):
        K = self.K
        t = [0, 1] + [0] * (M - 2) if M >= 2 else [0] * M
        U, V = (phi, t) if self.swap else (t, phi)
        out = [0] * M
        if not poly:
            return out
        upow = _series_powers(K, U, max(a for a, _ in poly), M)
        vpow = _series_powers(K, V, max(b for _, b in poly), M)
        for (a, b), c in poly.items():
            term = _smul(K, upow[a], vpow[b], M)
            for i, x in enumerate(term):
                if x:
                    out[i] = K.add(out[i], K.mul(c, x))
        return out

    def coordinate_series(self, M):
        """Series (U(t), V(t)) of the two affine coordinates of the chart, shifted back."""
        K = self.K
        self._ensure(M)
        t = ([0, 1] + [0] * (M - 2))[:M]
        phi = self.phi[:M]
        U, V = (phi, t) if self.swap else (t, phi)
        u0, v0 = self.origin
        U = [K.add(U[0], u0)] + U[1:]
        V = [K.add(V[0], v0)] + V[1:]
        return U, V

    def monomial_series(self, monos, M):
        """Series mod t^M of each monomial (chart variable set to 1)."""
        K = self.K
        top = max((sum(m) for m in monos), default=0)
        U, V = self.coordinate_series(M)
        cached = self._pows.get(M)
        if cached is None or len(cached[0]) <= top:
            cached = (_series_powers(K, U, top, M), _series_powers(K, V, top, M))
            self._pows[M] = cached
        upow, vpow = cached
        a, b = self.others
        return [_smul(K, upow[m[a]], vpow[m[b]], M) for m in monos]

    def series_of(self, form: Form, M):
        monos = list(form.terms)
        ser = self.monomial_series(monos, M)
        K = self.K
        out = [0] * M
        for m, s in zip(monos, ser):
            c = form.terms[m]
            for i, x in enumerate(s):
                if x:
                    out[i] = K.add(out[i], K.mul(c, x))
        return out


def _smul(K, a, b, M):
    out = [0] * M
    for i, x in enumerate(a[:M]):
        if x:
            for j in range(min(len(b), M - i)):
                y = b[j]
                if y:
                    out[i + j] = K.add(out[i + j], K.mul(x, y))
    return out


def _sinv(K, s, M):
    """1/s mod t^M for a series with nonzero constant term."""
    inv0 = K.inv(s[0])
    out = [inv0] + [0] * (M - 1)
    for i in range(1, M):
        acc = 0
        for j in range(1, min(i, len(s) - 1) + 1):
            if s[j] and out[i - j]:
                acc = K.add(acc, K.mul(s[j], out[i - j]))
        out[i] = K.neg(K.mul(acc, inv0))
    return out


def _series_powers(K, s, top, M):
    one = [1] + [0] * (M - 1)
    out = [one]
    for _ in range(top):
        out.append(_smul(K, out[-1], s, M))
    return out


# -- divisors -----------------------------------------------------------------

@dataclass(frozen=True)
class CurvePoint:
    """A point of C over the working field, with the degree of its Frobenius orbit."""

    coords: tuple
    ext: int

    def to_json(self, K):
        return {"ext": self.ext, "point": [K.coords(x) for x in self.coords]}


def orbit_degree(ctx: CurveOverField, pt):
    K, q = ctx.K, ctx.base.q
    e = K.k // ctx.base.k
    for s in range(1, e + 1):
        if e % s == 0 and all(K.pow(x, q ** s) == x for x in pt):
            return s
    return e


def frobenius_point(K, pt, Q):
    return canonical(K, tuple(K.pow(x, Q) for x in pt))


class Divisor:
    """A formal sum of points of C(K) with nonzero integer multiplicities."""

    __slots__ = ("ctx", "terms", "degree")

    def __init__(self, ctx: CurveOverField, terms=None):
        self.ctx = ctx
        clean = {}
        for pt, n in (terms or {}).items():
            pt = canonical(ctx.K, pt)
            clean[pt] = clean.get(pt, 0) + int(n)
        self.terms = {p: n for p, n in sorted(clean.items()) if n}
        self.degree = sum(self.terms.values())

    def __repr__(self):
        return f"Divisor(deg={self.degree}, {self.terms})"

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for p, n in other.terms.items():
            out[p] = out.get(p, 0) + n
        return Divisor(self.ctx, out)

    def __neg__(self):
        return Divisor(self.ctx, {p: -n for p, n in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k):
        return Divisor(self.ctx, {p: k * n for p, n in self.terms.items()})

    def positive(self):
        return Divisor(self.ctx, {p: n for p, n in self.terms.items() if n > 0})

    def negative(self):
        return Divisor(self.ctx, {p: -n for p, n in self.terms.items() if n < 0})

    def is_effective(self):
        return all(n > 0 for n in self.terms.values())

    def points(self):
        return [CurvePoint(p, orbit_degree(self.ctx, p)) for p in self.terms]

    def to_json(self):
        K = self.ctx.K
        return [{"ext": orbit_degree(self.ctx, p), "point": [K.coords(x) for x in p], "mult": n}
                for p, n in self.terms.items()]

    @classmethod
    def point(cls, ctx, pt, n=1):
        return cls(ctx, {pt: n})


@dataclass
class RRBasis:
    numerators: list
    denominator: Form
    dimension: int

    @property
    def functions(self):
        return [(G, self.denominator) for G in self.numerators]


@dataclass(frozen=True)
class ReducedDivisor:
    """The class E - m*inf with E effective of degree m <= g."""

    E: Divisor
    m: int
    base_point: tuple

    def key(self):
        return (self.m, tuple(self.E.terms.items()))

    def __eq__(self, other):
        return isinstance(other, ReducedDivisor) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def as_divisor(self):
        return self.E - Divisor.point(self.E.ctx, self.base_point, self.m)

    def is_zero(self):
        return self.m == 0

    def to_json(self):
        return {"m": self.m, "E": self.E.to_json()}

    def serialize(self, nbits=None):
        """Canonical bit string of the class.

        m comes first, then the support points with multiplicity, sorted by
        (orbit degree, coordinates); each point is its chart index followed by
        the two coordinates after the leading 1.  Zero-padded to a fixed width.
        """
        ctx = self.E.ctx
        width = _coord_width(ctx.K)
        bits = _int_bits(self.m, max(ctx.g, 1).bit_length())
        pts = sorted(((orbit_degree(ctx, p), p), n) for p, n in self.E.terms.items())
        for (_, p), n in pts:
            chart = next(i for i, x in enumerate(p) if x)
            rest = list(p[chart + 1:]) + [0] * chart
            for _ in range(n):
                bits += _int_bits(chart, 2)
                for x in rest:
                    bits += _int_bits(x, width)
        full = encoding_length(ctx)
        bits += [0] * (full - len(bits))
        if nbits is not None:
            if nbits < full:
                raise ValueError(f"encoding needs {full} bits > {nbits}")
            bits = bits + [0] * (nbits - full)
        return bits


def _coord_width(K):
    return max(1, (K.q - 1).bit_length())


def _int_bits(x, width):
    return [(x >> (width - 1 - i)) & 1 for i in range(width)]


def encoding_length(ctx):
    """Bits used by ReducedDivisor.serialize on this curve and field."""
    g = max(ctx.g, 1)
    return g.bit_length() + ctx.g * (2 + 2 * _coord_width(ctx.K))


# -- Riemann-Roch -------------------------------------------------------------

def _line_through(K, P, B):
    return (K.sub(K.mul(P[1], B[2]), K.mul(P[2], B[1])),
            K.sub(K.mul(P[2], B[0]), K.mul(P[0], B[2])),
            K.sub(K.mul(P[0], B[1]), K.mul(P[1], B[0])))


def _restrict(ctx, form, A, B):
    """form(s*A + B) as a polynomial in s."""
    K = ctx.K
    lin = [[B[i], A[i]] for i in range(3)]
    out = []
    pw = [[[1]] for _ in range(3)]
    for i in range(3):
        for _ in range(form.degree):
            pw[i].append(upoly.mul(K, pw[i][-1], lin[i]))
    for e, c in form.terms.items():
        t = [c]
        for i in range(3):
            if e[i]:
                t = upoly.mul(K, t, pw[i][e[i]])
        out = upoly.add(K, out, t)
    return out


@dataclass
class _Line:
    coeffs: tuple
    A: tuple       # the point of D+ it was drawn through
    B: tuple       # second point, the line is s*A + B
    exponent: int
    rational: list  # rational points of line . C (other than A)
    residual: list  # polynomial in s with no roots in K


def _make_line(ctx, P, used):
    """A line through P, distinct from the lines already used, split into
    its rational intersection points and the residual polynomial."""
    K = ctx.K
    pool = ctx.line_pool.setdefault(P, [])
    for ln in pool:
        if ln.coeffs not in used:
            used.add(ln.coeffs)
            return _Line(ln.coeffs, ln.A, ln.B, 1, ln.rational, ln.residual)
    for _ in range(50 + 4 * K.q):
        B = tuple(K.random(ctx.rng) for _ in range(3))
        L = _line_through(K, P, B)
        if not any(L):
            continue
        key = canonical(K, L)
        if key in used:
            continue
        b = _restrict(ctx, ctx.form, P, B)
        if not b:
            continue  # the line lies on the curve (impossible for irreducible C)
        rest = upoly.monic(K, b)
        rational = []
        for r in upoly.roots(K, rest):
            mult = upoly.root_multiplicity(K, rest, r)
            for _ in range(mult):
                rest = upoly.divmod_(K, rest, [K.neg(r), 1])[0]
            pt = canonical(K, tuple(K.add(K.mul(r, P[i]), B[i]) for i in range(3)))
            rational.append(pt)
        used.add(key)
        pool.append(_Line(key, P, B, 1, rational, rest))
        return _Line(key, P, B, 1, rational, rest)
    return None


def _lines_for(ctx, D):
    """Lines whose product H has div(H) >= D+.

    Each point of D+ of multiplicity n gets n distinct lines through it, so
    that non-rational residual points of different lines never coincide and a
    residual can be imposed by divisibility along its own line.  If a point
    runs out of lines, a line with no residual is reused with a higher exponent.
    """
    used = set()
    lines = []
    for P, n in D.positive().terms.items():
        mine = []
        for _ in range(n):
            ln = _make_line(ctx, P, used)
            if ln is None:
                ln = next((x for x in mine if len(x.residual) <= 1), None)
                if ln is None:
                    raise LeavesField(f"not enough auxiliary lines through {P} over F_{ctx.K.q}")
                ln.exponent += 1
                continue
            mine.append(ln)
            lines.append(ln)
    return lines


def _aux_form(ctx, lines):
    K = ctx.K
    H = Form.constant(K, 3, 1)
    for ln in lines:
        H = H * Form.linear(K, list(ln.coeffs)).power(ln.exponent)
    return H


def _rr_setup(ctx: CurveOverField, D: Divisor):
    """Auxiliary lines, the form H, the local demands and the unknown monomials."""
    K = ctx.K
    lines = _lines_for(ctx, D)
    n = sum(ln.exponent for ln in lines)
    H = _aux_form(ctx, lines)
    monos = standard_monomials(ctx.form, n)
    # points where a local condition may be needed
    pts = set(D.terms)
    for ln in lines:
        pts.add(ln.A)
        pts.update(ln.rational)
    demands = {}
    for P in sorted(pts):
        ordH = sum(ln.exponent * ctx.order_at(Form.linear(K, list(ln.coeffs)), P)
                   for ln in lines if Form.linear(K, list(ln.coeffs))(P) == 0)
        need = ordH - D.terms.get(P, 0)
        if need > 0:
            demands[P] = (need, ordH)
    return lines, H, n, monos, demands


def _condition_rows(ctx, lines, monos, demands):
    K = ctx.K
    rows = []
    for P, (need, _) in demands.items():
        ser = ctx.local(P).monomial_series(monos, need)
        for i in range(need):
            rows.append([s[i] for s in ser])
    for ln in lines:
        if len(ln.residual) <= 1:
            continue
        modulus = ln.residual
        deg = len(modulus) - 1
        top = max((sum(m) for m in monos), default=0)
        pw = []
        for i in range(3):
            lin = upoly.trim([ln.B[i], ln.A[i]])
            seq = [[1]]
            for _ in range(top):
                seq.append(upoly.rem(K, upoly.mul(K, seq[-1], lin), modulus))
            pw.append(seq)
        block = []
        for m in monos:
            r = upoly.mulmod(K, upoly.mulmod(K, pw[0][m[0]], pw[1][m[1]], modulus),
                             pw[2][m[2]], modulus)
            block.append(r + [0] * (deg - len(r)))
        for i in range(deg):
            rows.append([b[i] for b in block])
    return rows


def _normalize(K, v):
    lead = next(x for x in v if x)
    inv = K.inv(lead)
    return [K.mul(x, inv) for x in v]


def rr_space(ctx: CurveOverField, D: Divisor, degree_cap=DEGREE_CAP) -> RRBasis:
    """A basis of L(D) = {f : div(f) + D >= 0} as numerators over one denominator."""
    K = ctx.K
    if D.degree < 0:
        return RRBasis([], Form.constant(K, 3, 1), 0)
    if not D.terms:
        return RRBasis([Form.constant(K, 3, 1)], Form.constant(K, 3, 1), 1)
    n_pos = D.positive().degree
    if n_pos > degree_cap:
        raise BudgetExceeded("rr-degree", n_pos, degree_cap)
    lines, H, n, monos, demands = _rr_setup(ctx, D)
    rows = _condition_rows(ctx, lines, monos, demands)
    basis = kernel(K, rows, len(monos)) if rows else [
        [1 if i == j else 0 for i in range(len(monos))] for j in range(len(monos))]
    basis = [_normalize(K, v) for v in basis]
    nums = [Form.from_vector(K, 3, n, monos, v) for v in basis]
    return RRBasis(nums, H, len(nums))


def ell(ctx, D):
    """dim L(D)."""
    return rr_space(ctx, D).dimension


# -- zeros of forms on the curve ------------------------------------------------

def _bivariate(form, K):
    d = form.degree
    out = [[0] * (d + 1) for _ in range(d + 1)]
    for e, c in form.terms.items():
        out[e[1]][e[0]] = K.add(out[e[1]][e[0]], c)
    return [upoly.trim(r) for r in out]


def curve_zeros(ctx: CurveOverField, G: Form):
    """K-rational points of C where G vanishes."""
    from weilcert.algebra.resultant import resultant_poly
    K = ctx.K
    F = ctx.form
    if G.degree == 0:
        return []
    out = set()
    A, B = _bivariate(F, K), _bivariate(G, K)
    R = resultant_poly(K, A, B)
    if not R:
        raise WeilcertError("form shares a component with the curve")
    for x0 in upoly.roots(K, R):
        fa = upoly.trim([upoly.evaluate(K, r, x0) for r in A])
        fb = upoly.trim([upoly.evaluate(K, r, x0) for r in B])
        h = upoly.gcd(K, fa, fb) if fa and fb else (fa or fb)
        if len(h) <= 1:
            continue
        for y0 in upoly.roots(K, h):
            out.add(canonical(K, (x0, y0, 1)))
    # the line x2 = 0
    fa = upoly.trim([c for c in _line_coeffs(F, K)])
    fb = upoly.trim([c for c in _line_coeffs(G, K)])
    h = upoly.gcd(K, fa, fb) if fa and fb else (fa or fb)
    if len(h) > 1:
        for x0 in upoly.roots(K, h):
            out.add(canonical(K, (x0, 1, 0)))
    if F((1, 0, 0)) == 0 and G((1, 0, 0)) == 0:
        out.add((1, 0, 0))
    return sorted(out)


def _line_coeffs(form, K):
    coeffs = [0] * (form.degree + 1)
    for e, c in form.terms.items():
        if e[2] == 0:
            coeffs[e[0]] = K.add(coeffs[e[0]], c)
    return coeffs


def principal_divisor(ctx, G: Form, H: Form):
    """div(G/H), provided all zeros lie in K."""
    out = {}
    for form, sign in ((G, 1), (H, -1)):
        total = 0
        for P in curve_zeros(ctx, form):
            o = ctx.order_at(form, P)
            out[P] = out.get(P, 0) + sign * o
            total += o
        if total != ctx.d * form.degree:
            raise LeavesField("some zeros of the form are not K-rational")
    return Divisor(ctx, out)


# -- reduction and the group law ------------------------------------------------

def _effective_part(ctx, D, basis):
    """E = div(G) - div(H) + D for the unique (up to scalar) G of a 1-dim L(D)."""
    G = basis.numerators[0]
    H = basis.denominator
    Dplus = D.degree
    out = {}
    cands = set(curve_zeros(ctx, G)) if G.degree else set()
    for P in sorted(cands | set(D.terms)):
        oG = ctx.order_at(G, P) if G(P) == 0 else 0
        oH = ctx.order_at(H, P) if H.degree and H(P) == 0 else 0
        e = oG - oH + D.terms.get(P, 0)
        if e < 0:
            raise WeilcertError("negative multiplicity while extracting E")
        if e:
            out[P] = e
    E = Divisor(ctx, out)
    if E.degree != Dplus:
        raise LeavesField(f"E has degree {E.degree} over K, expected {Dplus}")
    return E


class Jacobian:
    """Reduced-divisor arithmetic with base point inf on a smooth plane curve."""

    def __init__(self, curve: PlaneCurve, base_point, K=None, seed=0):
        self.ctx = CurveOverField(curve, K, seed)
        K = self.ctx.K
        emb = K.embedding_from(curve.field)
        bp = canonical(K, tuple(emb(x) for x in base_point))
        if not self.ctx.on_curve(bp):
            raise ValueError("base point is not on the curve")
        self.inf = bp
        self.g = self.ctx.g
        self._reduce_cache = {}

    @property
    def K(self):
        return self.ctx.K

    def divisor(self, terms):
        return Divisor(self.ctx, terms)

    def zero(self):
        return ReducedDivisor(Divisor(self.ctx), 0, self.inf)

    def inf_div(self, m=1):
        return Divisor.point(self.ctx, self.inf, m)

    def reduce(self, D: Divisor) -> ReducedDivisor:
        if D.degree != 0:
            raise ValueError(f"reduce needs a degree-0 divisor, got degree {D.degree}")
        key = tuple(D.terms.items())
        hit = self._reduce_cache.get(key)
        if hit is not None:
            return hit
        if not D.terms:
            return self.zero()
        for m in range(0, self.g + 1):
            Dm = D + self.inf_div(m)
            basis = rr_space(self.ctx, Dm)
            if basis.dimension:
                if basis.dimension != 1:
                    raise WeilcertError("l(D + m inf) > 1 at the first nonzero m")
                E = _effective_part(self.ctx, Dm, basis)
                out = ReducedDivisor(E, m, self.inf)
                self._reduce_cache[key] = out
                return out
        raise WeilcertError("no m <= g with l(D + m inf) > 0; Riemann-Roch violated")

    def from_points(self, pts):
        """The class of sum(P) - len(pts)*inf."""
        D = Divisor(self.ctx, {})
        for P in pts:
            D = D + Divisor.point(self.ctx, P)
        return self.reduce(D - self.inf_div(len(pts)))

    def add(self, a: ReducedDivisor, b: ReducedDivisor) -> ReducedDivisor:
        if a.m == 0:
            return b
        if b.m == 0:
            return a
        return self.reduce(a.E + b.E - self.inf_div(a.m + b.m))

    def neg(self, a: ReducedDivisor) -> ReducedDivisor:
        if a.m == 0:
            return a
        return self.reduce(self.inf_div(a.m) - a.E)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scalar_mul(self, n: int, a: ReducedDivisor) -> ReducedDivisor:
        if n < 0:
            return self.scalar_mul(-n, self.neg(a))
        acc = self.zero()
        base = a
        while n:
            if n & 1:
                acc = self.add(acc, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return acc

    def is_zero(self, D: Divisor) -> bool:
        if D.degree != 0:
            raise ValueError("is_zero needs a degree-0 divisor")
        return ell(self.ctx, D) == 1

    def is_reduced(self, E: Divisor) -> bool:
        """Whether E - deg(E)*inf is its own reduced representative."""
        m = E.degree
        if m == 0:
            return True
        if not E.is_effective() or m > self.g:
            return False
        if self.g == 1:
            return self.inf not in E.terms
        return ell(self.ctx, E - self.inf_div(1)) == 0

    def order(self, a: ReducedDivisor, multiple: int):
        """Exact order of a, given any multiple of it (e.g. the group order)."""
        n = multiple
        for p, e in factorint(multiple).items():
            for _ in range(e):
                if self.scalar_mul(n // p, a).is_zero():
                    n //= p
                else:
                    break
        return n


def frobenius_invariant(D: Divisor, Q: int) -> bool:
    """Whether the Q-power Frobenius permutes the terms of D preserving multiplicities."""
    K = D.ctx.K
    for P, n in D.terms.items():
        if D.terms.get(frobenius_point(K, P, Q)) != n:
            return False
    return True


def is_rational(rd: ReducedDivisor, Q: int) -> bool:
    return frobenius_invariant(rd.E, Q) and all(rd.E.ctx.on_curve(P) for P in rd.E.terms)


# -- brute-force class group ------------------------------------------------------

def closed_points(jac: Jacobian, max_degree: int, budget=1 << 30):
    """Frobenius orbits of degree <= max_degree as lists of points in K."""
    ctx = jac.ctx
    K = ctx.K
    base = ctx.base
    out = []
    seen = set()
    for e in range(1, max_degree + 1):
        if (K.k // base.k) % e:
            continue
        Ke, pts = rational_points(ctx.curve, e, budget)
        emb = K.embedding_from(Ke)
        for pt in pts:
            P = canonical(K, tuple(emb(x) for x in pt))
            if P in seen:
                continue
            orbit = [P]
            cur = P
            while True:
                cur = frobenius_point(K, cur, base.q)
                if cur == P:
                    break
                orbit.append(cur)
            if len(orbit) != e:
                continue
            seen.update(orbit)
            out.append(sorted(orbit))
    return out


def rational_reduced_divisors(jac: Jacobian, budget=GROUP_BUDGET):
    """Every F_q-rational reduced divisor, by enumerating effective rational E of degree <= g."""
    ctx = jac.ctx
    g = jac.g
    orbits = closed_points(jac, g)
    orbits = [o for o in orbits if o != [jac.inf]]
    out = [jac.zero()]
    by_deg = {}
    for o in orbits:
        by_deg.setdefault(len(o), []).append(o)
    for m in range(1, g + 1):
        for combo in _orbit_multisets(orbits, m):
            terms = {}
            for o in combo:
                for P in o:
                    terms[P] = terms.get(P, 0) + 1
            E = Divisor(ctx, terms)
            if jac.is_reduced(E):
                out.append(ReducedDivisor(E, m, jac.inf))
                if len(out) > budget:
                    raise BudgetExceeded("group", len(out), budget)
    return out


def _orbit_multisets(orbits, m):
    """Multisets of orbits with total degree m."""
    sizes = [len(o) for o in orbits]

    def rec(start, left):
        if left == 0:
            yield []
            return
        for i in range(start, len(orbits)):
            if sizes[i] <= left:
                for rest in rec(i, left - sizes[i]):
                    yield [orbits[i]] + rest
    yield from rec(0, m)


@dataclass
class GroupStructure:
    orders: list
    generators: list
    size: int
    # (element, coefficients on the generators) for every element, when known
    table: list = None


def class_group_bruteforce(jac: Jacobian, budget=GROUP_BUDGET, structure=True, seed=0):
    """Invariant factors n_1 | n_2 | ... and generators of Jac(C)(F_q).

    Generators are picked greedily: each new one has maximal order in the
    quotient by the span of the previous ones, and is then corrected by an
    element of that span so that its order equals its coset order.
    """
    elems = rational_reduced_divisors(jac, budget)
    N = len(elems)
    if not structure or N == 1:
        return GroupStructure([] if N == 1 else [N], [], N)
    rng = random.Random(seed)
    for exhaustive in (False, True):
        out = _greedy_structure(jac, elems, rng, exhaustive)
        if out is not None:
            return out
    raise WeilcertError("class group structure search failed")  # pragma: no cover


def _greedy_structure(jac, elems, rng, exhaustive):
    N = len(elems)
    first = _max_order_element(jac, elems, N, rng, exhaustive)
    if first[1] == N:
        return GroupStructure([N], [first[0]], N)
    gens, invs = [first[0]], [first[1]]
    logs = _span_logs(jac, {jac.zero(): ()}, first[0], first[1])
    while len(logs) < N:
        bound = N // len(logs)
        best, best_m, best_mx = None, 0, None
        for e in elems:
            if e in logs:
                continue
            cur, m = e, 1
            while cur not in logs:
                cur = jac.add(cur, e)
                m += 1
            if m > best_m:
                best, best_m, best_mx = e, m, cur
                if m == bound:
                    break
        coeffs = logs[best_mx]
        if any(c % best_m for c in coeffs):
            return None
        y = jac.zero()
        for c, gen in zip(coeffs, gens):
            y = jac.add(y, jac.scalar_mul(c // best_m, gen))
        x = jac.sub(best, y)
        gens.append(x)
        invs.append(best_m)
        logs = _span_logs(jac, logs, x, best_m)
    perm = sorted(range(len(invs)), key=lambda i: invs[i])
    orders = [invs[i] for i in perm]
    if any(orders[i + 1] % orders[i] for i in range(len(orders) - 1)):
        return None
    assert len(orders) <= 2 * max(jac.g, 1), "more than 2g invariant factors"
    table = [(e, tuple(c[i] for i in perm)) for e, c in logs.items()]
    return GroupStructure(orders, [gens[i] for i in perm], N, table)


def _max_order_element(jac, elems, N, rng, exhaustive):
    """An element whose order is the group exponent (sampled unless exhaustive).

    The p-parts of the sampled orders are combined, so one element carrying
    the largest p-part for each p suffices.
    """
    pool = list(elems) if exhaustive else [rng.choice(elems) for _ in range(min(N, 24))]
    best = {}
    for e in pool:
        o = jac.order(e, N)
        for p, k in factorint(o).items():
            if k > best.get(p, (0, None))[0]:
                best[p] = (k, e, o)
        if o == N:
            best = {p: (k, e, o) for p, k in factorint(o).items()}
            break
    x = jac.zero()
    total = 1
    for p, (k, e, o) in best.items():
        x = jac.add(x, jac.scalar_mul(o // p ** k, e))
        total *= p ** k
    return x, total


def _span_logs(jac, logs, x, m):
    """Extend {element: coefficient tuple} by the multiples 0..m-1 of x."""
    out = {h: c + (0,) for h, c in logs.items()}
    layer = dict(out)
    for j in range(1, m):
        layer = {jac.add(h, x): c[:-1] + (j,) for h, c in layer.items()}
        out.update(layer)
    return out


def _divisors(n):
    out = [1]
    for p, k in factorint(n).items():
        out = [d * p ** i for d in out for i in range(k + 1)]
    return out


# -- the elliptic chord-tangent oracle ------------------------------------------------

def third_point(ctx: CurveOverField, P, R):
    """The third intersection of line PR (tangent at P when P = R) with a cubic."""
    K = ctx.K
    if ctx.d != 3:
        raise ValueError("chord-tangent needs a cubic")
    if P == R:
        L = tuple(g(P) for g in ctx.grad)
        # a second point on the tangent line
        for B in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            cand = _line_through(K, L, B)
            if any(cand) and canonical(K, cand) != P:
                R = canonical(K, cand)
                break
        b = _restrict(ctx, ctx.form, P, R)  # F(s P + R), roots at s = inf (double)
        # F(sP + R) = c1 s + c0 after the double root at infinity
        b = b + [0] * (4 - len(b))
        c0, c1 = b[0], b[1]
        if not c1:
            return P
        return canonical(K, tuple(K.sub(K.mul(c1, R[i]), K.mul(c0, P[i])) for i in range(3)))
    b = _restrict(ctx, ctx.form, P, R)  # c2 s^2 + c1 s, the root s = 0 is R
    b = b + [0] * (4 - len(b))
    c1, c2 = b[1], b[2]
    if not c2:
        return P
    # remaining root s = -c1/c2
    return canonical(K, tuple(K.sub(K.mul(c2, R[i]), K.mul(c1, P[i])) for i in range(3)))


def chord_tangent_add(ctx: CurveOverField, O, P, R):
    """P + R in the group law of a plane cubic with neutral element O."""
    return third_point(ctx, O, third_point(ctx, P, R))


__all__ = ["CurveOverField", "CurvePoint", "Divisor", "ReducedDivisor", "RRBasis", "Jacobian",
           "rr_space", "ell", "principal_divisor", "curve_zeros", "frobenius_invariant",
           "is_rational", "closed_points", "rational_reduced_divisors",
           "class_group_bruteforce", "GroupStructure", "chord_tangent_add", "third_point",
           "encoding_length", "LeavesField", "orbit_degree"]
