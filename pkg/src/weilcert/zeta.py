"""The numerator P1 of the zeta function of a curve: reconstruction, powering, descent."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from math import comb, isqrt

from sympy import factorint, isprime, nextprime

from weilcert.algebra.intpoly import (IntPoly, newton_power_sums, poly_from_power_sums,
                                      poly_gcd_z)
from weilcert.errors import Ambiguous, DescentFailed, Inconsistent, NoSolution

ROOT_TOLERANCE = 1e-9


class RootModulusWarning(UserWarning):
    pass


@dataclass(frozen=True)
class HasseWeilInterval:
    """[ceil((sqrt q - 1)^{2g}), floor((sqrt q + 1)^{2g})], computed without floats."""

    lo: int
    hi: int
    q: int
    g: int

    @classmethod
    def of(cls, q, g):
        # (1 + sqrt q)^{2g} = A + B sqrt q, and (sqrt q - 1)^{2g} = A - B sqrt q
        A = sum(comb(2 * g, i) * q ** (i // 2) for i in range(0, 2 * g + 1, 2))
        B = sum(comb(2 * g, i) * q ** (i // 2) for i in range(1, 2 * g + 1, 2))
        # ceil(A - B sqrt q) = A - floor(B sqrt q), exact or not
        floor_b = isqrt(B * B * q)
        return cls(A - floor_b, A + floor_b, q, g)

    def __contains__(self, n):
        return self.lo <= n <= self.hi

    def multiples(self, n):
        """Multiples of n lying in the interval."""
        first = -(-self.lo // n)
        return [m * n for m in range(first, self.hi // n + 1)]


class ZetaNumerator:
    """P(T) = prod(1 - alpha_i T) of degree 2g over F_q, with the integer coefficients."""

    __slots__ = ("q", "g", "poly")

    def __init__(self, q, g, poly, check=True):
        self.q = int(q)
        self.g = int(g)
        self.poly = poly if isinstance(poly, IntPoly) else IntPoly(poly)
        if check:
            problems = self.violations()
            if problems:
                raise Inconsistent("; ".join(problems))

    def __repr__(self):
        return f"ZetaNumerator(q={self.q}, g={self.g}, {self.poly})"

    def __eq__(self, other):
        return (isinstance(other, ZetaNumerator) and (self.q, self.g) == (other.q, other.g)
                and self.poly == other.poly)

    def __hash__(self):
        return hash((self.q, self.g, self.poly))

    @property
    def coeffs(self):
        return [self.poly[i] for i in range(2 * self.g + 1)]

    def symmetric(self):
        q, g, a = self.q, self.g, self.coeffs
        return all(a[2 * g - i] == q ** (g - i) * a[i] for i in range(g + 1))

    def violations(self):
        out = []
        if self.poly[0] != 1:
            out.append(f"constant term {self.poly[0]} != 1")
        if self.poly.degree != 2 * self.g:
            out.append(f"degree {self.poly.degree} != 2g = {2 * self.g}")
        elif not self.symmetric():
            out.append("functional-equation symmetry fails")
        if self.poly(1) not in HasseWeilInterval.of(self.q, self.g):
            out.append(f"P(1) = {self.poly(1)} outside the Hasse-Weil interval")
        return out

    def value_at_one(self):
        return self.poly(1)

    def to_json(self):
        return {"q": str(self.q), "g": self.g, "coeffs": [str(c) for c in self.poly.coeffs]}

    @classmethod
    def from_json(cls, obj, check=True):
        return cls(int(obj["q"]), int(obj["g"]), IntPoly(int(c) for c in obj["coeffs"]), check)


def _symmetric_fill(low, q, g):
    """Coefficients a_0..a_{2g} from a_0..a_g via a_{2g-i} = q^{g-i} a_i."""
    a = list(low) + [0] * g
    for i in range(g):
        a[2 * g - i] = q ** (g - i) * low[i]
    return a


def weil_box(q, g, i):
    """Largest |a_i| allowed by the Weil bound: floor(C(2g, i) q^{i/2})."""
    c = comb(2 * g, i)
    return isqrt(c * c * q ** i)


def p1_from_counts(counts, q, g):
    """P1 from N_1..N_g using Newton's identities and the functional equation."""
    counts = list(counts)
    if len(counts) != g:
        raise ValueError(f"need exactly g = {g} counts, got {len(counts)}")
    if g == 0:
        return ZetaNumerator(q, 0, IntPoly([1]))
    for j, N in enumerate(counts, start=1):
        dev = N - (q ** j + 1)
        if dev * dev > 4 * g * g * q ** j:
            raise Inconsistent(f"N_{j} = {N} violates the Weil bound")
    s = [q ** j + 1 - N for j, N in enumerate(counts, start=1)]
    c = [1]
    for j in range(1, g + 1):
        acc = -s[j - 1]
        for i in range(1, j):
            acc -= c[i] * s[j - i - 1]
        if acc % j:
            raise Inconsistent(f"coefficient a_{j} = {acc}/{j} is not an integer")
        c.append(acc // j)
    return ZetaNumerator(q, g, IntPoly(_symmetric_fill(c, q, g)))


def expected_counts(P: ZetaNumerator, j_max):
    s = newton_power_sums(P.poly, j_max)
    return [P.q ** j + 1 - s[j - 1] for j in range(1, j_max + 1)]


def extension_power(P: ZetaNumerator, r):
    """prod(1 - alpha_i^r T) over F_{q^r}."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if r == 1 or P.g == 0:
        return ZetaNumerator(P.q ** r, P.g, P.poly, check=False)
    n = 2 * P.g
    s = newton_power_sums(P.poly, n * r)
    sr = [s[r * j - 1] for j in range(1, n + 1)]
    return ZetaNumerator(P.q ** r, P.g, poly_from_power_sums(sr, n), check=False)


def jacobian_order(P: ZetaNumerator, r=1):
    return extension_power(P, r).poly(1)


def gap_ok(q, g):
    return q > (8 * g + 1) ** 2


def _has_big_factor(m, g):
    return any(r > 2 * g for r in factorint(m - 1))


def admissible_extensions(q, g):
    """The two smallest primes m with m - 1 divisible by a prime > 2g and q^{m1} > (8g+1)^2."""
    out = []
    m = 2
    while len(out) < 2:
        if _has_big_factor(m, g) and (out or gap_ok(q ** m, g)):
            out.append(m)
        m = nextprime(m)
    return tuple(out)


def check_descent_pair(q, g, m1, m2):
    problems = []
    if not (m1 < m2 and isprime(m1) and isprime(m2)):
        problems.append(f"need primes m1 < m2, got ({m1}, {m2})")
    for m in (m1, m2):
        if isprime(m) and not _has_big_factor(m, g):
            problems.append(f"{m} - 1 has no prime factor > {2 * g}")
    if not gap_ok(q ** m1, g):
        problems.append(f"q^m1 = {q ** m1} <= {(8 * g + 1) ** 2}")
    return problems


def descend(P1m: ZetaNumerator, m1, P2m: ZetaNumerator, m2, q, g):
    """P over F_q from its extension powers over F_{q^m1} and F_{q^m2}."""
    problems = check_descent_pair(q, g, m1, m2)
    if problems:
        raise ValueError("; ".join(problems))
    G = poly_gcd_z(P1m.poly.substitute_power(m1), P2m.poly.substitute_power(m2))
    if G.degree != 2 * g:
        raise DescentFailed(f"gcd has degree {G.degree}, expected {2 * g}")
    try:
        P = ZetaNumerator(q, g, G)
    except Inconsistent as exc:
        raise DescentFailed(f"gcd is not a zeta numerator: {exc}") from exc
    if extension_power(P, m1).poly != P1m.poly or extension_power(P, m2).poly != P2m.poly:
        raise DescentFailed("gcd does not power back to the inputs")
    return P


def _orders_match(low, q, g, orders):
    P = ZetaNumerator(q, g, IntPoly(_symmetric_fill(low, q, g)), check=False)
    n = 2 * g
    s = newton_power_sums(P.poly, n * len(orders))
    for j, N in enumerate(orders, start=1):
        if j == 1:
            val = P.poly(1)
        else:
            val = poly_from_power_sums([s[j * i - 1] for i in range(1, n + 1)], n)(1)
        if val != N:
            return None
    return P


def p1_from_jacobian_orders(orders, q, g):
    """The unique P with extension_power(P, j)(1) = orders[j-1] for every given j.

    Exhaustive search over a_1..a_{g-1} inside the Weil boxes; a_g is then
    forced by the first order.
    """
    orders = [int(x) for x in orders]
    if not orders:
        raise ValueError("need at least one order")
    if g == 0:
        if any(N != 1 for N in orders):
            raise NoSolution("genus 0 forces trivial orders")
        return ZetaNumerator(q, 0, IntPoly([1]))
    boxes = [range(-weil_box(q, g, i), weil_box(q, g, i) + 1) for i in range(1, g)]
    survivors = []
    for head in itertools.product(*boxes):
        low = [1] + list(head) + [0]
        base = IntPoly(_symmetric_fill(low, q, g))(1)
        ag = orders[0] - base
        if ag * ag > weil_box(q, g, g) ** 2:
            continue
        low[g] = ag
        P = _orders_match(low, q, g, orders)
        if P is not None and not P.violations():
            survivors.append(P)
    if not survivors:
        raise NoSolution("no numerator in the Weil boxes matches the orders")
    if len(survivors) > 1:
        raise Ambiguous(f"{len(survivors)} numerators match the orders")
    return survivors[0]


def root_modulus_check(P: ZetaNumerator, tol=ROOT_TOLERANCE, warn=True):
    """Diagnostic: every root of P has modulus q^{-1/2} (floating point, non-blocking).

    Returns (ok, worst relative error).
    """
    import mpmath

    if P.g == 0:
        return True, 0.0
    with mpmath.workdps(60):
        coeffs = [mpmath.mpf(c) for c in reversed(P.coeffs)]
        roots = mpmath.polyroots(coeffs, maxsteps=500, extraprec=200)
        target = mpmath.mpf(P.q) ** mpmath.mpf(-0.5)
        worst = max(abs(abs(r) - target) / target for r in roots)
    worst = float(worst)
    ok = worst <= tol
    if not ok and warn:
        warnings.warn(f"root modulus deviates by {worst:.3e} (tolerance {tol:g})",
                      RootModulusWarning, stacklevel=2)
    return ok, worst


def random_numerator(q, g, rng, tries=10000):
    """A random integer polynomial satisfying every ZetaNumerator invariant.

    Built as a product of Weil-type quadratic factors 1 - a T + q T^2 with
    a^2 <= 4q, so the roots really have modulus q^{-1/2}.
    """
    bound = isqrt(4 * q)
    for _ in range(tries):
        P = IntPoly([1])
        for _ in range(g):
            a = rng.randint(-bound, bound)
            P = P * IntPoly([1, -a, q])
        Z = ZetaNumerator(q, g, P, check=False)
        if not Z.violations():
            return Z
    raise Inconsistent("could not sample a numerator")  # pragma: no cover


__all__ = ["ZetaNumerator", "HasseWeilInterval", "p1_from_counts", "expected_counts",
           "extension_power", "jacobian_order", "gap_ok", "admissible_extensions", "descend",
           "p1_from_jacobian_orders", "root_modulus_check", "random_numerator", "weil_box",
           "RootModulusWarning", "check_descent_pair"]
