"""Plane projective curves over finite fields: counting, singularities, genus."""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from weilcert.algebra import upoly
from weilcert.algebra.field import FieldDesc, field_make
from weilcert.algebra.forms import Form, dehomogenize, random_invertible, taylor_shift
from weilcert.algebra.linalg import matvec
from weilcert.algebra.resultant import macaulay_resultant, resultant_poly
from weilcert.errors import BudgetExceeded, InfiniteSingularLocus, NotNodal, WeilcertError

POINT_BUDGET = 1 << 30
DEGREE_CAP = 6
# cells per numpy block when sweeping the affine grid
_CHUNK_CELLS = 1 << 22


class PlaneCurve:
    """The curve form(x0, x1, x2) = 0 in the projective plane over ``field``."""

    def __init__(self, field: FieldDesc, form: Form, genus_cache=None):
        if form.nvars != 3:
            raise ValueError("a plane curve needs a form in three variables")
        if form.degree < 1 or form.is_zero():
            raise ValueError("the defining form must be nonzero of degree >= 1")
        self.field = field
        self.form = form
        self.genus_cache = genus_cache
        self._smooth = None

    @property
    def degree(self):
        return self.form.degree

    @property
    def q(self):
        return self.field.q

    def __repr__(self):
        return f"PlaneCurve(q={self.q}, d={self.degree}, terms={len(self.form.terms)})"

    @classmethod
    def from_terms(cls, field, degree, terms):
        """Build from {(e0, e1, e2): coefficient}; integer coefficients are reduced mod p."""
        conv = {}
        for e, c in terms.items():
            conv[tuple(e)] = c if field.k > 1 else c % field.p
        return cls(field, Form(field, 3, degree, conv))

    def to_json(self):
        obj = {"p": self.field.p, "k": self.field.k}
        if self.field.k > 1:
            obj["modulus"] = list(self.field.modulus)
        obj.update(self.form.to_json())
        return obj

    @classmethod
    def from_json(cls, obj):
        p, k = int(obj["p"]), int(obj.get("k", 1))
        mod = obj.get("modulus")
        F = field_make(p, k, modulus=tuple(mod) if mod else None)
        return cls(F, Form.from_json(F, 3, obj))

    def base_change(self, e):
        """The same curve over the degree-e extension (returns (curve, embedding))."""
        K, emb = self.field.extension(e)
        return PlaneCurve(K, self.form.map_coeffs(K, emb)), emb

    def contains(self, point):
        return self.form(point) == 0


@dataclass
class SingularPoint:
    point: tuple
    field: FieldDesc
    multiplicity: int
    is_node: bool
    orbit_size: int = 1

    def to_json(self):
        return {"point": [self.field.coords(x) for x in self.point], "ext_field_k": self.field.k,
                "multiplicity": self.multiplicity, "is_node": self.is_node,
                "orbit_size": self.orbit_size}


def canonical(F, pt):
    """Scale a projective point so that its first nonzero coordinate is 1."""
    for x in pt:
        if x:
            inv = F.inv(x)
            return tuple(F.mul(y, inv) for y in pt)
    raise ValueError("the zero vector is not a projective point")


# -- vectorized helpers ----------------------------------------------------------

def _vhorner(K, coeffs, xs):
    """Evaluate sum coeffs[i] x^i on an array xs (coefficients are scalars in K)."""
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc = K.vadd(K.vmul(acc, xs), np.int64(c))
    return acc


def _split_by_var(form, var):
    """Group the terms by the exponent of ``var``; each group is a binary form dict."""
    others = [i for i in range(3) if i != var]
    groups = {}
    for e, c in form.terms.items():
        groups.setdefault(e[var], {})[(e[others[0]], e[others[1]])] = c
    return groups


def _binary_on_line(K, bform, ws):
    """Values of a binary form b(u, w) at (1, w) for an array ws."""
    top = max((a + b for (a, b) in bform), default=0)
    coeffs = [0] * (top + 1)
    for (a, b), c in bform.items():
        coeffs[b] = K.add(coeffs[b], c)
    return _vhorner(K, coeffs, ws)


def _binary_at(bform, u, w, K):
    acc = 0
    for (a, b), c in bform.items():
        acc = K.add(acc, K.mul(c, K.mul(K.pow(u, a), K.pow(w, b))))
    return acc


def _trace_mask(K):
    """Bit mask m such that Tr(x) = parity(x & m) in characteristic 2."""
    mask = 0
    for i in range(K.k):
        basis = 1 << i
        t, cur = 0, basis
        for _ in range(K.k):
            t ^= cur
            cur = K.mul(cur, cur)
        if t & 1:
            mask |= basis
    return mask


def _parity(arr):
    arr = arr.copy()
    out = np.zeros_like(arr)
    while arr.any():
        out ^= arr & 1
        arr >>= 1
    return out


def _quadratic_variable(form):
    for var in (2, 1, 0):
        if max(e[var] for e in form.terms) <= 2:
            return var
    return None


def _count_quadratic(K, form, var):
    """Projective count when ``form`` has degree <= 2 in ``var``.

    Every point other than the vertex e_var lies over a point (u:w) of the
    line of the other two coordinates; the fibre is a quadratic equation in
    the ``var`` coordinate whose solutions are counted in closed form.
    """
    groups = _split_by_var(form, var)
    A, B, C = groups.get(2, {}), groups.get(1, {}), groups.get(0, {})
    ws = np.arange(K.q, dtype=np.int64)
    a = _binary_on_line(K, A, ws)
    b = _binary_on_line(K, B, ws)
    c = _binary_on_line(K, C, ws)
    a = np.append(a, _binary_at(A, 0, 1, K))
    b = np.append(b, _binary_at(B, 0, 1, K))
    c = np.append(c, _binary_at(C, 0, 1, K))
    total = 0
    lin = (a == 0) & (b != 0)
    total += int(lin.sum())
    const = (a == 0) & (b == 0)
    total += int(((c == 0) & const).sum()) * K.q
    quad = a != 0
    if K.p == 2:
        # a v^2 + b v + c: one root when b = 0, else 2 or 0 by the trace of ac/b^2
        nb = quad & (b == 0)
        total += int(nb.sum())
        sel = quad & (b != 0)
        if sel.any():
            aa, bb, cc = a[sel], b[sel], c[sel]
            z = K.vmul(K.vmul(aa, cc), K.vpow_log(K.log_table[bb], K.q - 3))
            tr = _parity(z & _trace_mask(K))
            total += int(2 * (tr == 0).sum())
    else:
        four = np.int64(K.from_int(4))
        disc = K.vadd(K.vmul(b, b), K.vmul(K.vmul(np.int64(K.neg(four)), a), c))
        dq = disc[quad]
        nz = dq != 0
        total += int((dq == 0).sum())
        total += int(2 * K.vis_square(dq[nz]).sum())
    # the vertex where the other two coordinates vanish
    vertex = [0, 0, 0]
    vertex[var] = 1
    if form(vertex) == 0:
        total += 1
    return total


def _count_grid(K, form):
    """Projective count by evaluating on the whole affine grid plus the line at infinity."""
    Q = K.q
    xs = np.arange(Q, dtype=np.int64)
    # f(x, y, 1) = sum_b y^b f_b(x)
    d = form.degree
    fb = []
    for b in range(d + 1):
        coeffs = [0] * (d + 1)
        for e, c in form.terms.items():
            if e[1] == b:
                coeffs[e[0]] = K.add(coeffs[e[0]], c)
        fb.append(_vhorner(K, coeffs, xs))
    total = 0
    rows = max(1, _CHUNK_CELLS // Q)
    for y0 in range(0, Q, rows):
        ys = np.arange(y0, min(Q, y0 + rows), dtype=np.int64)[:, None]
        acc = np.broadcast_to(fb[d], (ys.shape[0], Q)).copy()
        for b in range(d - 1, -1, -1):
            acc = K.vadd(K.vmul(acc, ys), fb[b][None, :])
        total += int((acc == 0).sum())
    # line x2 = 0: points (x : 1 : 0) and (1 : 0 : 0)
    coeffs = [0] * (d + 1)
    for e, c in form.terms.items():
        if e[2] == 0:
            coeffs[e[0]] = K.add(coeffs[e[0]], c)
    total += int((_vhorner(K, coeffs, xs) == 0).sum())
    if form((1, 0, 0)) == 0:
        total += 1
    return total


def count_cost(c: PlaneCurve, j: int):
    """The number of ambient points the chosen counting method examines."""
    Q = c.q ** j
    if _quadratic_variable(c.form) is not None:
        return Q + 1
    return Q * Q + Q + 1


def count_points(c: PlaneCurve, j: int = 1, budget: int = POINT_BUDGET) -> int:
    """Number of points of c over F_{q^j}."""
    if j < 1:
        raise ValueError("extension degree must be >= 1")
    cost = count_cost(c, j)
    if cost > budget:
        raise BudgetExceeded("points", cost, budget)
    K, emb = c.field.extension(j)
    K.require_tables()
    form = c.form.map_coeffs(K, emb)
    var = _quadratic_variable(form)
    if var is not None:
        return _count_quadratic(K, form, var)
    return _count_grid(K, form)


def _points_quadratic(K, form, var):
    """Points of a form of degree <= 2 in ``var`` (odd characteristic), fibre by fibre."""
    others = [i for i in range(3) if i != var]
    groups = _split_by_var(form, var)
    A, B, C = groups.get(2, {}), groups.get(1, {}), groups.get(0, {})
    ws = np.arange(K.q, dtype=np.int64)
    a = np.append(_binary_on_line(K, A, ws), _binary_at(A, 0, 1, K))
    b = np.append(_binary_on_line(K, B, ws), _binary_at(B, 0, 1, K))
    c = np.append(_binary_on_line(K, C, ws), _binary_at(C, 0, 1, K))
    uw = [(1, int(w)) for w in ws] + [(0, 1)]
    n = K.q - 1
    roots = [[] for _ in uw]
    lin = np.nonzero((a == 0) & (b != 0))[0]
    if len(lin):
        v = K.vmul(K.vneg(c[lin]), K.vpow_log(K.log_table[b[lin]], n - 1))
        for i, x in zip(lin, v):
            roots[i].append(int(x))
    for i in np.nonzero((a == 0) & (b == 0) & (c == 0))[0]:
        roots[i].extend(range(K.q))
    quad = np.nonzero(a != 0)[0]
    if len(quad):
        aq, bq, cq = a[quad], b[quad], c[quad]
        four = np.int64(K.from_int(4))
        disc = K.vadd(K.vmul(bq, bq), K.vmul(K.vmul(np.int64(K.neg(four)), aq), cq))
        ld = K.log_table[disc]
        ok = (ld < 0) | (ld % 2 == 0)
        sq = np.where(ld < 0, 0, K.exp_table[np.where(ld < 0, 0, ld) // 2])
        inv2a = K.vpow_log(K.log_table[K.vadd(aq, aq)], n - 1)
        nb = K.vneg(bq)
        r1 = K.vmul(K.vadd(nb, sq), inv2a)
        r2 = K.vmul(K.vadd(nb, K.vneg(sq)), inv2a)
        for i, good, x1, x2 in zip(quad, ok, r1, r2):
            if good:
                roots[i].extend({int(x1), int(x2)})
    pts = []
    for (u, w), vs in zip(uw, roots):
        for v in vs:
            pt = [0, 0, 0]
            pt[var], pt[others[0]], pt[others[1]] = v, u, w
            pts.append(canonical(K, tuple(pt)))
    vertex = [0, 0, 0]
    vertex[var] = 1
    if form(vertex) == 0:
        pts.append(tuple(vertex))
    return sorted(pts)


def rational_points(c: PlaneCurve, e: int = 1, budget: int = POINT_BUDGET):
    """All points over F_{q^e}, canonical representatives, sorted; with the field."""
    K, emb = c.field.extension(e)
    Q = K.q
    form = c.form.map_coeffs(K, emb)
    var = _quadratic_variable(form)
    if var is not None and K.p != 2:
        if 2 * Q + 1 > budget:
            raise BudgetExceeded("points", 2 * Q + 1, budget)
        K.require_tables()
        return K, _points_quadratic(K, form, var)
    if Q * Q + Q + 1 > budget:
        raise BudgetExceeded("points", Q * Q + Q + 1, budget)
    K.require_tables()
    pts = []
    xs = np.arange(Q, dtype=np.int64)
    d = form.degree
    # canonical representatives: (1 : y : z), then (0 : 1 : z), then (0 : 0 : 1)
    fz = []
    for b in range(d + 1):
        coeffs = [0] * (d + 1)
        for ex, cf in form.terms.items():
            if ex[1] == b:
                coeffs[ex[2]] = K.add(coeffs[ex[2]], cf)
        fz.append(_vhorner(K, coeffs, xs))
    rows = max(1, _CHUNK_CELLS // Q)
    for y0 in range(0, Q, rows):
        ys = np.arange(y0, min(Q, y0 + rows), dtype=np.int64)[:, None]
        acc = np.broadcast_to(fz[d], (ys.shape[0], Q)).copy()
        for b in range(d - 1, -1, -1):
            acc = K.vadd(K.vmul(acc, ys), fz[b][None, :])
        yi, zi = np.nonzero(acc == 0)
        pts.extend((1, int(ys[a, 0]), int(z)) for a, z in zip(yi, zi))
    coeffs = [0] * (d + 1)
    for ex, cf in form.terms.items():
        if ex[0] == 0:
            coeffs[ex[2]] = K.add(coeffs[ex[2]], cf)
    for z in np.nonzero(_vhorner(K, coeffs, xs) == 0)[0]:
        pts.append((0, 1, int(z)))
    if form((0, 0, 1)) == 0:
        pts.append((0, 0, 1))
    return K, sorted(pts)


# -- singular points -----------------------------------------------------------

def _bivariate_in_y(form, K):
    """The form at x2 = 1 as a list over powers of x1 of polynomials in x0."""
    d = form.degree
    out = [[0] * (d + 1) for _ in range(d + 1)]
    for e, c in form.terms.items():
        out[e[1]][e[0]] = K.add(out[e[1]][e[0]], c)
    return [upoly.trim(r) for r in out]


def _eval_rows_at(K, rows, x0):
    return upoly.trim([upoly.evaluate(K, r, x0) for r in rows])


def _orbit_size(K, base_q, pt):
    """Size of the q-power Frobenius orbit of a point with coordinates in K."""
    e = K.k
    for s in range(1, e + 1):
        if e % s:
            continue
        qs = base_q ** s
        if all(K.pow(x, qs) == x for x in pt):
            return s
    return e


def _classify(K, form, pt):
    chart = next(i for i, x in enumerate(pt) if x)
    others = [i for i in range(3) if i != chart]
    poly = dehomogenize(form, chart)
    shifted = taylor_shift(K, poly, (pt[others[0]], pt[others[1]]))
    mult = min((a + b for a, b in shifted), default=form.degree + 1)
    if mult != 2:
        return mult, False
    a = shifted.get((2, 0), 0)
    b = shifted.get((1, 1), 0)
    c = shifted.get((0, 2), 0)
    disc = K.sub(K.mul(b, b), K.mul(K.from_int(4), K.mul(a, c)))
    return 2, disc != 0


def _common_roots(K0, polys, max_ext):
    """All roots over extensions of degree <= max_ext of the gcd of univariate polys.

    Returns a list of (field, root).
    """
    g = []
    for f in polys:
        g = upoly.gcd(K0, g, f) if g else upoly.monic(K0, f)
    g = upoly.trim(g)
    if not g:
        raise WeilcertError("the polynomials vanish identically")
    if len(g) == 1:
        return []
    out = []
    for e, fac in upoly.ddf(K0, upoly.squarefree_part(K0, g)):
        if e > max_ext:
            continue
        Ke, emb = K0.extension(e)
        for r in upoly.roots(Ke, upoly.map_coeffs(fac, emb)):
            out.append((Ke, r, emb))
    return out


def _eliminant(K0, a, b):
    """A polynomial in x0 vanishing on the x0-projection of a = b = 0.

    The resultant in x1 does this unless both inputs are free of x1; then it
    is 1 by convention and the gcd of the two constant terms is the answer.
    """
    a = [upoly.trim(r) for r in a]
    b = [upoly.trim(r) for r in b]
    if not any(a[1:]) and not any(b[1:]):
        return upoly.gcd(K0, a[0], b[0]) if a and b else []
    return resultant_poly(K0, a, b)


def _singular_affine(K0, form, rng, max_ext):
    """Singular points with x2 != 0, or None if the elimination degenerates."""
    grads = form.gradient()
    A = _bivariate_in_y(form, K0)
    B = _bivariate_in_y(grads[1], K0)
    lam = K0.random(rng)
    Cf = grads[0] + grads[2].scale(lam)
    C = _bivariate_in_y(Cf, K0)
    R1 = _eliminant(K0, A, B)
    R2 = _eliminant(K0, B, C)
    if not R1 or not R2:
        return None
    out = []
    all_rows = [A] + [_bivariate_in_y(g, K0) for g in grads]
    for Ke, x0, emb in _common_roots(K0, [R1, R2], max_ext):
        rows = [[upoly.map_coeffs(r, emb) for r in rr] for rr in all_rows]
        hs = [_eval_rows_at(Ke, rr, x0) for rr in rows]
        hs = [h for h in hs if h]
        if not hs:
            raise InfiniteSingularLocus("a whole vertical line is singular")
        for Kf, y0, emb2 in _common_roots(Ke, hs, max_ext):
            out.append((Kf, (emb2(x0), y0, 1)))
    return out


def _singular_at_infinity(K0, form, max_ext):
    out = []
    forms = [form] + form.gradient()
    polys = []
    for f in forms:
        coeffs = [0] * (f.degree + 1)
        for e, c in f.terms.items():
            if e[2] == 0:
                coeffs[e[0]] = K0.add(coeffs[e[0]], c)
        polys.append(upoly.trim(coeffs))
    polys = [p for p in polys if p]
    if polys:
        for Ke, x0, emb in _common_roots(K0, polys, max_ext):
            out.append((Ke, (x0, 1, 0)))
    if all(f((1, 0, 0)) == 0 for f in forms):
        out.append((K0, (1, 0, 0)))
    return out


def _restrict_to_line(K, form, A, B):
    """f(A + t B) as a univariate polynomial in t."""
    lines = [[a, b] for a, b in zip(A, B)]
    out = []
    for e, c in form.terms.items():
        term = [c]
        for ln, k in zip(lines, e):
            for _ in range(k):
                term = upoly.mul(K, term, ln)
        out = upoly.add(K, out, term)
    return upoly.trim(out)


def _line_meets_singular_locus(K0, form, rng):
    """Does a random line over a large extension contain a singular point of the form?

    A common root of the form and its partials on the line is a genuine
    singular point, so True proves the curve singular.
    """
    e = 1
    while K0.q ** e < 64:
        e += 1
    K, emb = K0.extension(e)
    big = form.map_coeffs(K, emb)
    forms = [big] + big.gradient()
    A = [K.random(rng) for _ in range(3)]
    B = [K.random(rng) for _ in range(3)]
    if all(f(B) == 0 for f in forms) and any(B):
        return True
    g = []
    for f in forms:
        r = _restrict_to_line(K, f, A, B)
        g = upoly.gcd(K, g, r) if g else r
    return len(upoly.trim(g)) > 1


def singular_points(c: PlaneCurve, degree_cap: int = DEGREE_CAP, seed: int = 0, max_ext=None):
    """Every singular point over the algebraic closure, classified node / non-node.

    max_ext limits the search to points defined over extensions of degree at
    most max_ext; the default (d - 1)^2 is enough to see every singular point.
    """
    d = c.degree
    if d > degree_cap:
        raise BudgetExceeded("degree", d, degree_cap)
    if d == 1:
        return []
    K0 = c.field
    max_ext = (d - 1) ** 2 if max_ext is None else max_ext
    rng = random.Random(seed)
    M = None
    form = c.form
    for _attempt in range(30):
        found = _singular_affine(K0, form, rng, max_ext)
        if found is not None:
            break
        # degenerate elimination: move to random coordinates and retry
        M = random_invertible(K0, 3, rng)
        form = c.form.linear_substitute(M)
    else:
        # every coordinate system degenerates: typical of a repeated component,
        # whose points are all singular
        if all(_line_meets_singular_locus(K0, c.form, rng) for _ in range(4)):
            raise InfiniteSingularLocus("the singular locus is not finite (repeated component?)")
        raise WeilcertError("could not find coordinates with a nondegenerate elimination")
    found = found + _singular_at_infinity(K0, form, max_ext)
    out = []
    for K, pt in found:
        if M is not None:
            emb = K.embedding_from(K0)
            Mk = [[emb(x) for x in row] for row in M]
            pt = tuple(matvec(K, Mk, list(pt)))
        pt = canonical(K, pt)
        big_form = c.form.map_coeffs(K, K.embedding_from(K0))
        if big_form(pt) != 0 or any(g(pt) for g in big_form.gradient()):
            continue  # spurious common root of the eliminants
        mult, node = _classify(K, big_form, pt)
        out.append(SingularPoint(pt, K, mult, node, _orbit_size(K, K0.q, pt)))
    out.sort(key=lambda s: (s.field.k, s.point))
    return out


def is_smooth(c: PlaneCurve, seed: int = 0) -> bool:
    """No singular point over the algebraic closure."""
    if c._smooth is not None:
        return c._smooth
    d = c.degree
    result = None
    if d == 1:
        result = True
    elif d % c.field.p:
        # by Euler's relation the partials alone cut out the singular locus
        rng = random.Random(seed)
        form = c.form
        for _attempt in range(20):
            val, ok = macaulay_resultant(c.field, form.gradient())
            if ok:
                result = val != 0
                break
            form = c.form.linear_substitute(random_invertible(c.field, 3, rng))
    if result is None:
        try:
            result = not singular_points(c, seed=seed)
        except InfiniteSingularLocus:
            result = False
    c._smooth = result
    return result


def genus(c: PlaneCurve) -> int:
    """Geometric genus of a smooth or nodal plane curve."""
    if c.genus_cache is not None:
        return c.genus_cache
    d = c.degree
    arith = (d - 1) * (d - 2) // 2
    if is_smooth(c):
        g = arith
    else:
        sps = singular_points(c)
        bad = [s for s in sps if not s.is_node]
        if bad:
            raise NotNodal(f"{len(bad)} singular point(s) are not nodes")
        g = arith - len(sps)
    c.genus_cache = g
    return g


def weil_ok(N, Q, g):
    """|N - (Q + 1)| <= 2 g sqrt(Q), decided by squaring."""
    dev = N - (Q + 1)
    return dev * dev <= 4 * g * g * Q


def check_weil(c: PlaneCurve, j: int = 1, count=None, budget: int = POINT_BUDGET) -> bool:
    Q = c.q ** j
    N = count_points(c, j, budget) if count is None else count
    return weil_ok(N, Q, genus(c))


def random_smooth_curve(F, d, rng, tries=200):
    """A random smooth plane curve of degree d over F (used for test corpora)."""
    from weilcert.algebra.forms import random_form
    for _ in range(tries):
        f = random_form(F, 3, d, rng)
        if f.is_zero():
            continue
        c = PlaneCurve(F, f)
        if is_smooth(c):
            return c
    raise WeilcertError(f"no smooth curve of degree {d} found over F_{F.q}")


__all__ = ["PlaneCurve", "SingularPoint", "canonical", "count_points", "count_cost",
           "rational_points", "singular_points", "is_smooth", "genus", "check_weil",
           "weil_ok", "random_smooth_curve", "POINT_BUDGET"]
