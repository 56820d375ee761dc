"""Surfaces in P^3: slicing from P^4, Lefschetz pencils, fibers and the gcd recovery of P1.

A pencil is stored through an invertible change of coordinates y = C x with
y0 = F(x) and y1 = G(x).  The member H_t is F = t G, i.e. y0 = t y1, and the
member at infinity is G = 0.  Fibers are plane curves in the coordinates
(y1, y2, y3) of H_t (or (y0, y2, y3) at infinity).
"""
from __future__ import annotations

import logging
import math
import random
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from weilcert.algebra import upoly
from weilcert.algebra.field import FIELD_LIMIT, FieldDesc, field_make
from weilcert.algebra.forms import Form, random_invertible
from weilcert.algebra.intpoly import IntPoly, poly_gcd_z
from weilcert.algebra.linalg import inverse, kernel, matmul, rank
from weilcert.algebra.resultant import PolyCoeffForm, macaulay_resultant, macaulay_resultant_poly
from weilcert.curve import POINT_BUDGET, PlaneCurve, count_points, genus, is_smooth, singular_points
from weilcert.errors import (InconsistentBetti, NoSmoothSection, PencilInvalid, WeilcertError)
from weilcert.symplectic import (COMMON_EIGENVALUE_BOUND, gsp_order, random_gsp)
from weilcert.zeta import ZetaNumerator, p1_from_counts, random_numerator

log = logging.getLogger(__name__)

SLICE_RETRIES = 20
PENCIL_RETRIES = 40
SMOOTH_SAMPLES = 20
SUCCESS_THRESHOLD = 2 / 3


class BelowThresholdWarning(UserWarning):
    """The sampling field is smaller than the size the gcd theorem asks for."""


class Hypersurface:
    """form(x0, ..., xN) = 0 in P^N over ``field``."""

    def __init__(self, field: FieldDesc, N: int, form: Form):
        if form.nvars != N + 1:
            raise ValueError(f"a hypersurface in P^{N} needs a form in {N + 1} variables")
        if form.is_zero() or form.degree < 1:
            raise ValueError("the defining form must be nonzero of positive degree")
        self.field = field
        self.N = N
        self.form = form
        self._smooth = None

    @property
    def degree(self):
        return self.form.degree

    @property
    def q(self):
        return self.field.q

    def __repr__(self):
        return (f"Hypersurface(q={self.q}, N={self.N}, D={self.degree}, "
                f"terms={len(self.form.terms)})")

    @classmethod
    def from_terms(cls, field, N, degree, terms):
        conv = {tuple(e): (c if field.k > 1 else c % field.p) for e, c in terms.items()}
        return cls(field, N, Form(field, N + 1, degree, conv))

    @classmethod
    def fermat(cls, field, N, D):
        terms = {tuple(D if i == j else 0 for i in range(N + 1)): 1 for j in range(N + 1)}
        return cls.from_terms(field, N, D, terms)

    def to_json(self):
        obj = {"p": self.field.p, "k": self.field.k, "N": self.N}
        if self.field.k > 1:
            obj["modulus"] = list(self.field.modulus)
        obj.update(self.form.to_json())
        return obj

    @classmethod
    def from_json(cls, obj):
        p, k = int(obj["p"]), int(obj.get("k", 1))
        mod = obj.get("modulus")
        F = field_make(p, k, modulus=tuple(mod) if mod else None)
        N = int(obj.get("N", 3))
        return cls(F, N, Form.from_json(F, N + 1, obj))

    def base_change(self, e):
        K, emb = self.field.extension(e)
        return Hypersurface(K, self.N, self.form.map_coeffs(K, emb))

    def is_smooth(self, seed=0):
        if self._smooth is None:
            self._smooth = hypersurface_is_smooth(self, seed)
        return self._smooth


def hypersurface_is_smooth(X: Hypersurface, seed=0, tries=20):
    """Jacobian criterion through the Macaulay resultant of the partial derivatives.

    With p not dividing D, Euler's relation makes the common zeros of the
    partials exactly the singular points, so the resultant decides smoothness
    over the algebraic closure.
    """
    F = X.field
    if X.degree % F.p == 0:
        raise WeilcertError(f"smoothness test needs p = {F.p} coprime to the degree {X.degree}")
    rng = random.Random(seed)
    form = X.form
    for _ in range(tries):
        val, ok = macaulay_resultant(F, form.gradient())
        if ok:
            return val != 0
        form = X.form.linear_substitute(random_invertible(F, X.N + 1, rng))
    raise WeilcertError("no coordinates with a nondegenerate Macaulay matrix")


def bertini_extension(q, D, n):
    """Least k with q^k > D (D - 1)^n."""
    bound = D * (D - 1) ** n
    k = 1
    while q ** k <= bound:
        k += 1
    return k


def slice(X: Hypersurface, H=None, rng=None, retries=SLICE_RETRIES, events=None):
    """The smooth surface X cap {H = 0} in P^3, for X a smooth hypersurface in P^4.

    H is a coefficient vector of length 5 (over X's field).  A singular
    section is logged and replaced by a fresh random H; the base field is
    extended first when it is below the Bertini size D (D - 1)^3.
    """
    if X.N != 4:
        raise ValueError("slicing is supported from P^4 only")
    rng = rng or random.Random(0)
    events = events if events is not None else []
    k = bertini_extension(X.q, X.degree, X.N - 1)
    if k > 1:
        events.append({"event": "extend-field", "k": k})
        K, emb = X.field.extension(k)
        H = [emb(c) for c in H] if H is not None else None
        X = X.base_change(k)
    K = X.field
    for attempt in range(retries):
        if H is None or attempt > 0:
            H = [K.random(rng) for _ in range(5)]
            if not any(H):
                continue
        basis = kernel(K, [list(H)], 5)
        M = [[basis[j][i] for j in range(4)] for i in range(5)]
        Y = Hypersurface(K, 3, X.form.linear_substitute(M))
        if not Y.form.is_zero() and Y.is_smooth():
            events.append({"event": "smooth-section", "attempt": attempt,
                           "H": [K.coords(c) for c in H]})
            return Y
        events.append({"event": "singular-section", "attempt": attempt,
                       "H": [K.coords(c) for c in H]})
        log.info("slice attempt %d gave a singular section, redrawing", attempt)
    raise NoSmoothSection(f"no smooth hyperplane section in {retries} draws")


# -- pencils ---------------------------------------------------------------------

def _fiber_form_t(K, Xy):
    """The fiber y0 = t y1 as a form in (y1, y2, y3) with coefficients in K[t]."""
    terms = {}
    for (a, b, c, d), coeff in Xy.terms.items():
        key = (a + b, c, d)
        terms[key] = upoly.add(K, list(terms.get(key, ())), [0] * a + [coeff])
    return PolyCoeffForm(K, 3, Xy.degree, terms)


def _partial_t(K, f, i):
    out = {}
    for e, c in f.terms.items():
        if e[i]:
            k = K.from_int(e[i])
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = upoly.add(K, list(out.get(tuple(ne), ())), upoly.scale(K, list(c), k))
    return PolyCoeffForm(K, 3, f.degree - 1, out)


def parameter_discriminant(K, Xy):
    """Delta(t): Macaulay resultant over K[t] of the three partials of the fiber form."""
    ft = _fiber_form_t(K, Xy)
    return macaulay_resultant_poly(K, [_partial_t(K, ft, i) for i in range(3)])


def _axis_binary(K, Xy):
    """X restricted to the axis y0 = y1 = 0, as ascending coefficients in y2/y3."""
    D = Xy.degree
    out = [0] * (D + 1)
    for (a, b, c, d), coeff in Xy.terms.items():
        if a == 0 and b == 0:
            out[c] = K.add(out[c], coeff)
    return out


def _binary_distinct_roots(K, coeffs):
    """Distinct roots over the closure of a binary form; None if it is not squarefree."""
    D = len(coeffs) - 1
    f = upoly.trim(coeffs)
    if not f:
        return None
    at_infinity = D - (len(f) - 1)
    if at_infinity > 1:
        return None
    if len(f) > 1:
        g = upoly.gcd(K, f, upoly.deriv(K, f))
        if len(upoly.trim(g)) > 1:
            return None
    return (len(f) - 1) + at_infinity


@dataclass
class CriticalFiber:
    factor: list            # irreducible factor of Delta over the pencil field
    degree: int             # its degree e: the critical values live in F_{Q^e}
    t: int                  # one root, an element of F_{Q^e}
    node: tuple = None      # the node of that fiber, in (y1 : y2 : y3) of H_t
    node_field_k: int = 0
    verification: str = ""  # "full", "rational" or "discriminant" (see lefschetz_pencil)

    def to_json(self, K):
        t = None
        if self.t is not None and K.q ** self.degree <= FIELD_LIMIT:
            t = field_make(K.p, K.k * self.degree).coords(self.t)
        return {"factor": [K.coords(c) for c in self.factor], "degree": self.degree,
                "t": t,
                "node": [field_make(K.p, self.node_field_k).coords(x) for x in self.node]
                if self.node else None,
                "verification": self.verification}


@dataclass
class Pencil:
    surface: Hypersurface
    F: list
    G: list
    C: list
    Cinv: list
    discriminant: list
    Z: list
    U_sample_log: list
    g_fiber: int
    base_points: int
    attempts: int = 1
    events: list = field(default_factory=list)

    @property
    def field(self):
        return self.surface.field

    @property
    def num_critical(self):
        return sum(z.degree for z in self.Z)

    def is_critical(self, t, L=None):
        """Delta(t) == 0 for t in the pencil field or an extension L of it."""
        K = self.field
        if t is None:
            return len(self.discriminant) - 1 < self.surface.degree * (self.surface.degree - 1) ** 2
        if L is None or L is K:
            return upoly.evaluate(K, self.discriminant, t) == 0
        emb = L.embedding_from(K)
        return upoly.evaluate(L, [emb(c) for c in self.discriminant], t) == 0

    def to_json(self):
        K = self.field
        return {"field": {"p": K.p, "k": K.k, "modulus": list(K.modulus)},
                "F": [K.coords(c) for c in self.F], "G": [K.coords(c) for c in self.G],
                "discriminant_degree": len(self.discriminant) - 1,
                "num_critical": self.num_critical,
                "Z": [z.to_json(K) for z in self.Z],
                "g_fiber": self.g_fiber, "base_points": self.base_points,
                "attempts": self.attempts,
                "U_sample_log": self.U_sample_log,
                "bounds": pencil_bounds(self.surface.degree, self.surface.N)}


def pencil_bounds(D, N=3):
    return {"num_critical_max": D ** (N + 1), "genus_max": D * D - 2 * D + 1,
            "expected_critical": D * (D - 1) ** 2}


def fiber_basis(pencil: Pencil, t, L=None, R=None):
    """A 4 x 3 matrix whose columns span H_t (t = None is the member G = 0).

    R optionally re-bases the plane with an invertible 3 x 3 matrix.
    """
    K = pencil.field
    L = L or K
    emb = L.embedding_from(K)
    if t is None:
        T = [[1, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 1]]
    else:
        T = [[t, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    Cinv = [[emb(x) for x in row] for row in pencil.Cinv]
    B = matmul(L, Cinv, T)
    if R is not None:
        B = matmul(L, B, R)
    return B


def fiber(pencil: Pencil, t, L=None, R=None) -> PlaneCurve:
    """The plane curve X cap H_t, for t in the pencil field or an extension L of it."""
    L = L or pencil.field
    form = pencil.surface.form.map_coeffs(L, L.embedding_from(pencil.field))
    return PlaneCurve(L, form.linear_substitute(fiber_basis(pencil, t, L, R)))


def _draw_axis(K, rng, F=None, G=None):
    F = list(F) if F is not None else [K.random(rng) for _ in range(4)]
    G = list(G) if G is not None else [K.random(rng) for _ in range(4)]
    return F, G


def _complete(K, F, G, rng):
    while True:
        C = [list(F), list(G)] + [[K.random(rng) for _ in range(4)] for _ in range(2)]
        if rank(K, C) == 4:
            return C


def _check_critical(K, Xy_pencil, fac, e):
    """Verify that the fibers over the roots of one irreducible factor of Delta have one node."""
    if K.q ** e > FIELD_LIMIT:
        # the critical values live beyond the largest field we construct; the
        # squarefree full-degree Delta is then the only certificate of the node
        return CriticalFiber(list(fac), e, None, verification="discriminant"), None
    L, emb = K.extension(e)
    t = min(upoly.roots(L, upoly.map_coeffs(fac, emb)))
    c = fiber(Xy_pencil, t, L)
    D = Xy_pencil.surface.degree
    full = K.q ** (e * (D - 1) ** 2) <= FIELD_LIMIT
    sps = singular_points(c, max_ext=None if full else 1)
    crit = CriticalFiber(list(fac), e, t, verification="full" if full else "rational")
    if len(sps) != 1 or not sps[0].is_node or sps[0].orbit_size != 1:
        return crit, [(s.multiplicity, s.is_node, s.orbit_size) for s in sps]
    crit.node = sps[0].point
    crit.node_field_k = sps[0].field.k
    return crit, None


def lefschetz_pencil(X: Hypersurface, rng=None, F=None, G=None, retries=PENCIL_RETRIES,
                     samples=SMOOTH_SAMPLES, verify_fibers=True):
    """A validated Lefschetz pencil on the smooth surface X in P^3.

    Validation: the axis meets X in D distinct points; Delta(t) has full
    degree D (D - 1)^2 and is squarefree, so every critical value is finite
    and its fiber has a single ordinary double point; one root per
    irreducible factor of Delta is checked with singular_points (restricted
    to points over the fiber's own field when the field budget forbids the
    full search, and skipped when even that field is out of budget);
    sampled non-critical fibers are smooth.  A failing draw is
    logged and redrawn.  The base field is extended first when its size is
    at most D (D - 1)^2.
    """
    if X.N != 3:
        raise ValueError("pencils are built on surfaces in P^3 (slice first)")
    rng = rng or random.Random(0)
    D = X.degree
    if D % X.field.p == 0 or X.field.p == 2:
        raise ValueError(f"need p = {X.field.p} odd and coprime to the degree {D}")
    events = []
    k = bertini_extension(X.q, D, 2)
    if k > 1:
        K0 = X.field
        X = X.base_change(k)
        _, emb = K0.extension(k)
        F = [emb(c) for c in F] if F is not None else None
        G = [emb(c) for c in G] if G is not None else None
        events.append({"event": "extend-field", "k": k, "q": X.q})
    K = X.field
    if not X.is_smooth():
        raise WeilcertError("the surface is singular")
    bounds = pencil_bounds(D, X.N)
    explicit = F is not None or G is not None
    reasons = []
    for attempt in range(1, retries + 1):
        Fv, Gv = _draw_axis(K, rng, F if attempt == 1 else None, G if attempt == 1 else None)
        if rank(K, [Fv, Gv]) < 2:
            reasons.append("dependent")
            events.append({"event": "redraw", "attempt": attempt, "reason": "dependent"})
            if explicit and attempt == 1:
                raise PencilInvalid("F and G are linearly dependent")
            continue
        C = _complete(K, Fv, Gv, rng)
        Cinv = inverse(K, C)
        Xy = X.form.linear_substitute(Cinv)
        reason = None
        base = _binary_distinct_roots(K, _axis_binary(K, Xy))
        if base != D:
            reason = "axis not transversal"
        delta = None
        if reason is None:
            delta, ok = parameter_discriminant(K, Xy)
            if not ok or not delta:
                reason = "degenerate elimination"
            elif len(delta) - 1 != bounds["expected_critical"]:
                reason = f"critical fiber at infinity (deg Delta = {len(delta) - 1})"
            elif len(upoly.squarefree_part(K, delta)) != len(delta):
                reason = "Delta not squarefree (a fiber worse than one node)"
        pencil = None
        if reason is None:
            delta = upoly.monic(K, delta)
            pencil = Pencil(X, Fv, Gv, C, Cinv, delta, [], [], 0, base, attempt, events)
            if verify_fibers:
                for e, part in upoly.ddf(K, delta):
                    for fac in _split_equal_degree(K, part, e):
                        crit, bad = _check_critical(K, pencil, fac, e)
                        if bad is not None:
                            reason = f"critical fiber of degree {e} has singularities {bad}"
                            break
                        pencil.Z.append(crit)
                    if reason:
                        break
            else:
                for e, part in upoly.ddf(K, delta):
                    for fac in _split_equal_degree(K, part, e):
                        pencil.Z.append(CriticalFiber(list(fac), e, 0, verification="none"))
        if reason is None:
            reason = _sample_smooth(K, pencil, rng, samples)
        if reason is None:
            g_fiber = pencil.U_sample_log[0]["genus"]
            assert pencil.num_critical <= bounds["num_critical_max"]
            assert g_fiber <= bounds["genus_max"]
            pencil.g_fiber = g_fiber
            pencil.Z.sort(key=lambda z: (z.degree, z.factor))
            events.append({"event": "validated", "attempt": attempt})
            return pencil
        reasons.append(reason)
        events.append({"event": "redraw", "attempt": attempt, "reason": reason})
        log.info("pencil attempt %d rejected: %s", attempt, reason)
    raise PencilInvalid(f"no valid pencil in {retries} draws; reasons: {Counter(reasons)}")


def _split_equal_degree(K, part, e):
    """The irreducible factors of a product of distinct degree-e irreducibles."""
    n = (len(part) - 1) // e
    if n == 1:
        return [upoly.monic(K, part)]
    L, emb = K.extension(e)
    roots = upoly.roots(L, upoly.map_coeffs(part, emb))
    qK = K.q
    out, seen = [], set()
    for r in roots:
        if r in seen:
            continue
        orbit = [r]
        x = r
        for _ in range(e - 1):
            x = L.pow(x, qK)
            orbit.append(x)
        seen.update(orbit)
        fac = upoly.from_roots(L, orbit)
        back = _descend_coeffs(K, L, emb, fac)
        out.append(back)
    out.sort()
    return out


def _descend_coeffs(K, L, emb, poly):
    inv = {emb(x): x for x in K.elements()}
    return [inv[c] for c in poly]


def _sample_smooth(K, pencil, rng, samples):
    """Check `samples` non-critical parameters; returns a failure reason or None."""
    candidates = [t for t in range(K.q) if not pencil.is_critical(t)]
    if len(candidates) < samples:
        return f"only {len(candidates)} non-critical parameters over F_{K.q}"
    picks = rng.sample(candidates, samples)
    genera = set()
    for t in sorted(picks):
        c = fiber(pencil, t)
        ok = is_smooth(c)
        g = genus(c) if ok else None
        pencil.U_sample_log.append({"t": K.coords(t), "smooth": ok, "genus": g})
        if not ok:
            return f"non-critical fiber at t = {K.coords(t)} is singular"
        genera.add(g)
    if len(genera) != 1:
        return f"sampled genera differ: {sorted(genera)}"
    return None


def euler_consistency(num_critical, g, beta1, base_points=None, D=None, N=3):
    """beta_2 of the blown-up surface, #Z + 2 beta_1 + 2 - 4g, with the Betti bounds checked.

    With D given: beta_2 <= 2 D^{N+1} and beta_1 <= 2g <= 2 D^2.  With
    base_points given, beta_2 of the original surface (one exceptional class
    fewer per base point) must be nonnegative.
    """
    for name, v in (("#Z", num_critical), ("g", g), ("beta1", beta1)):
        if v < 0:
            raise ValueError(f"{name} must be nonnegative")
    if beta1 > 2 * g:
        raise InconsistentBetti(f"beta1 = {beta1} > 2g = {2 * g}")
    b2 = num_critical + 2 * beta1 + 2 - 4 * g
    if b2 < 0:
        raise InconsistentBetti(f"beta2 = {b2} < 0")
    if D is not None:
        if b2 > 2 * D ** (N + 1):
            raise InconsistentBetti(f"beta2 = {b2} > 2 D^(N+1) = {2 * D ** (N + 1)}")
        if 2 * g > 2 * D * D:
            raise InconsistentBetti(f"2g = {2 * g} > 2 D^2 = {2 * D * D}")
    if base_points is not None and b2 - base_points < 0:
        raise InconsistentBetti(f"beta2 - base points = {b2 - base_points} < 0")
    return b2


def hypersurface_beta2(D):
    """beta_2 of a smooth surface of degree D in P^3 (topological Euler number minus 2)."""
    return D ** 3 - 4 * D ** 2 + 6 * D - 2


# -- gcd recovery ----------------------------------------------------------------

def theorem_threshold(D, N=3):
    return D ** (5 * N * N * D ** 4)


def fiber_p1(pencil: Pencil, t, L, budget=POINT_BUDGET) -> ZetaNumerator:
    c = fiber(pencil, t, L)
    g = pencil.g_fiber
    counts = [count_points(c, j, budget) for j in range(1, g + 1)]
    return p1_from_counts(counts, L.q, g)


@dataclass
class SurfaceGcdResult:
    Q: int
    pairs: list
    gcd: IntPoly
    agreement: float
    below_threshold: bool
    pencil: Pencil = None

    def to_json(self):
        return {"Q": self.Q, "pairs": self.pairs, "gcd": [str(c) for c in self.gcd.coeffs],
                "agreement": self.agreement,
                "warning": "below-theorem-threshold" if self.below_threshold else None}


def p1_surface_gcd(X: Hypersurface, rng=None, Q_override=None, pairs=10, pencil=None,
                   budget=POINT_BUDGET):
    """gcd of P1 of two random smooth fibers, repeated over independent pairs.

    The returned gcd is the most common pair gcd.  Q_override is the size of
    the field the parameters are drawn from; it must be a power of the pencil
    field's size.
    """
    rng = rng or random.Random(0)
    if X.N == 4:
        X = slice(X, rng=rng)
    pencil = pencil or lefschetz_pencil(X, rng)
    K = pencil.field
    m = 1
    if Q_override is not None:
        m = round(math.log(Q_override, K.q))
        if K.q ** m != Q_override:
            raise ValueError(f"Q = {Q_override} is not a power of the pencil field size {K.q}")
    L, _ = K.extension(m)
    Q = L.q
    below = Q < theorem_threshold(X.degree, X.N)
    if below:
        warnings.warn(f"Q = {Q} is below the gcd theorem's sampling threshold",
                      BelowThresholdWarning, stacklevel=2)
    good = [t for t in range(Q) if not pencil.is_critical(t, L)]
    if len(good) < 2:
        raise WeilcertError(f"fewer than two smooth fibers over F_{Q}")
    draws = [tuple(rng.sample(good, 2)) for _ in range(pairs)]
    cache = {}
    records = []
    for u1, u2 in draws:
        polys = []
        for u in (u1, u2):
            if u not in cache:
                cache[u] = fiber_p1(pencil, u, L, budget)
            polys.append(cache[u])
        g = poly_gcd_z(polys[0].poly, polys[1].poly)
        records.append({"u": [L.coords(u1), L.coords(u2)],
                        "fiber_p1": [[str(c) for c in P.poly.coeffs] for P in polys],
                        "gcd": [str(c) for c in g.coeffs]})
    tally = Counter(tuple(r["gcd"]) for r in records)
    best, count = max(tally.items(), key=lambda kv: (kv[1], -len(kv[0])))
    return SurfaceGcdResult(Q, records, IntPoly(int(c) for c in best), count / len(records),
                            below, pencil)


# -- synthetic simulator ---------------------------------------------------------

@dataclass(frozen=True)
class SyntheticPencilParams:
    beta1: int
    g: int
    ell: int
    Q: int
    chiU: int

    def __post_init__(self):
        if self.beta1 < 0 or self.beta1 % 2 or 2 * self.g < self.beta1:
            raise ValueError("need 0 <= beta1 <= 2g with beta1 even")
        from sympy import isprime
        if not isprime(self.ell):
            raise ValueError(f"ell = {self.ell} is not prime")
        if self.Q % self.ell == 0:
            raise ValueError("ell must not divide Q")

    @property
    def r(self):
        return (2 * self.g - self.beta1) // 2

    def error_term(self):
        """|chi(U)| #GSp(2r, F_l) sqrt(Q) / #U(F_Q), with #U(F_Q) >= Q + 1 - chiU."""
        if self.r == 0:
            return 0.0
        denom = self.Q + 1 - self.chiU
        if denom <= 0:
            return math.inf
        return float(self.chiU * gsp_order(self.r, self.ell) * math.isqrt(self.Q) / denom)

    def to_json(self):
        return {"beta1": self.beta1, "g": self.g, "r": self.r, "ell": self.ell,
                "Q": str(self.Q), "chiU": self.chiU}


def budget_params(beta1, g, ell, chiU, target=1 / 12):
    """Parameters whose error term is at most target, with Q the least square that works."""
    r = (2 * g - beta1) // 2
    root = max(math.isqrt(chiU), 1)
    if r:
        # error <= target forces chiU #GSp root <= target (root^2 + 1 - chiU) < target (root^2 + 1),
        # so root > chiU #GSp / target - 1; the error decreases from there on
        root = max(root, int(chiU * gsp_order(r, ell) / target) - 2)
    while True:
        params = SyntheticPencilParams(beta1, g, ell, root * root, chiU) if root % ell else None
        if params is not None and params.error_term() <= target:
            return params
        root += 1


@dataclass
class SyntheticResult:
    params: SyntheticPencilParams
    trials: int
    successes: int
    integer_recoveries: int
    error_term: float

    @property
    def success_rate(self):
        return self.successes / self.trials if self.trials else 1.0

    @property
    def predicted_lower_bound(self):
        return 1 - COMMON_EIGENVALUE_BOUND - self.error_term

    @property
    def budget_ok(self):
        return self.predicted_lower_bound >= SUCCESS_THRESHOLD

    def to_json(self):
        return {"params": self.params.to_json(), "trials": self.trials,
                "successes": self.successes, "success_rate": self.success_rate,
                "integer_recovery_rate": (self.integer_recoveries / self.trials
                                          if self.trials else 1.0),
                "error_term": self.error_term,
                "predicted_lower_bound": self.predicted_lower_bound,
                "error_budget_ok": self.budget_ok,
                "meets_two_thirds": self.success_rate >= SUCCESS_THRESHOLD}


def _lift(f, ell):
    half = ell // 2
    return IntPoly([c - ell if c > half else c for c in f])


def synthetic_pencil_trial(params: SyntheticPencilParams, trials, rng=None):
    """Gcd recovery of a planted P1 from two simulated fiber polynomials.

    Each fiber polynomial is P1 times the characteristic polynomial of an
    independent random element of GSp(2r, F_l) with multiplicator Q mod l.
    A trial succeeds when the gcd mod l of the two products is P1 mod l, that
    is when the companion factors have no common root mod l.  The integer
    gcd of the lifted products is reported alongside.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    py = random.Random(int(rng.integers(1 << 62)))
    ell, r = params.ell, params.r
    K = field_make(ell)
    gamma = params.Q % ell
    successes = integer_ok = 0
    for _ in range(trials):
        P = random_numerator(params.Q, params.beta1 // 2, py).poly
        if r == 0:
            successes += 1
            integer_ok += 1
            continue
        comps = [_lift(random_gsp(r, ell, gamma, rng).charpoly(), ell) for _ in range(2)]
        prods = [P * c for c in comps]
        Pm = upoly.monic(K, upoly.trim([c % ell for c in P.coeffs]))
        g = upoly.gcd(K, *[upoly.trim([c % ell for c in f.coeffs]) for f in prods])
        if upoly.monic(K, g) == Pm:
            successes += 1
        if poly_gcd_z(*prods) == P:
            integer_ok += 1
    return SyntheticResult(params, trials, successes, integer_ok, params.error_term())


__all__ = ["Hypersurface", "Pencil", "CriticalFiber", "SyntheticPencilParams", "SyntheticResult",
           "budget_params", "SurfaceGcdResult", "BelowThresholdWarning", "slice",
           "lefschetz_pencil", "fiber", "fiber_basis", "p1_surface_gcd", "euler_consistency",
           "synthetic_pencil_trial", "hypersurface_is_smooth", "parameter_discriminant",
           "bertini_extension", "pencil_bounds", "hypersurface_beta2", "theorem_threshold",
           "fiber_p1"]
