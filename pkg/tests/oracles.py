"""Slow, obviously-correct reference computations shared by the tests."""
from itertools import product


def projective_points(K):
    Q = K.q
    for y, z in product(range(Q), repeat=2):
        yield (1, y, z)
    for z in range(Q):
        yield (0, 1, z)
    yield (0, 0, 1)


def naive_points(curve, j=1):
    """Points over F_{q^j}, found by evaluating the form term by term everywhere."""
    K, emb = curve.field.extension(j)
    terms = [(e, emb(c)) for e, c in curve.form.terms.items()]
    out = []
    for P in projective_points(K):
        acc = 0
        for e, c in terms:
            v = c
            for x, k in zip(P, e):
                if k:
                    v = K.mul(v, K.pow(x, k))
            acc = K.add(acc, v)
        if acc == 0:
            out.append(P)
    return out


def naive_count(curve, j=1):
    """#C(F_{q^j}) by brute-force evaluation."""
    return len(naive_points(curve, j))


def naive_singular(curve, j=1):
    """Points over F_{q^j} where the form and its three partials all vanish."""
    K, emb = curve.field.extension(j)
    form = curve.form.map_coeffs(K, emb)
    grads = form.gradient()
    return [P for P in projective_points(K) if form(P) == 0 and not any(g(P) for g in grads)]


def weierstrass_add(F, a, P, R):
    """Affine chord-tangent addition on y^2 = x^3 + a x + b; None is the identity."""
    if P is None:
        return R
    if R is None:
        return P
    x1, y1 = P
    x2, y2 = R
    if x1 == x2 and F.add(y1, y2) == 0:
        return None
    if P == R:
        num = F.add(F.mul(F.from_int(3), F.mul(x1, x1)), a)
        lam = F.div(num, F.mul(F.from_int(2), y1))
    else:
        lam = F.div(F.sub(y2, y1), F.sub(x2, x1))
    x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
    y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
    return (x3, y3)


def weierstrass_points(F, a, b):
    out = [None]
    for x in F.elements():
        rhs = F.add(F.add(F.pow(x, 3), F.mul(a, x)), b)
        for y in F.elements():
            if F.mul(y, y) == rhs:
                out.append((x, y))
    return out


def group_order_by_points(F, a, b):
    return len(weierstrass_points(F, a, b))
