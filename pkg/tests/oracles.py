"""Independent reference computations, written without the engine's ring code.

Polynomials in p1, p2, ... are plain dicts {exponent tuple: Fraction}.
"""
from fractions import Fraction
from math import factorial


def series_div(num, den, n):
    """Coefficients of num/den to order n (den[0] != 0), by long division."""
    num = list(num) + [Fraction(0)] * (n + 1)
    out = []
    for k in range(n + 1):
        c = Fraction(num[k]) / den[0]
        out.append(c)
        for j in range(1, min(len(den), n + 1 - k)):
            num[k + j] -= c * den[j]
    return out


def bernoulli_oracle(n):
    """B_0..B_n from x/(e^x - 1) = sum B_k x^k / k!."""
    den = [Fraction(1, factorial(k + 1)) for k in range(n + 1)]  # (e^x - 1)/x
    inv = series_div([Fraction(1)], den, n)
    return [inv[k] * factorial(k) for k in range(n + 1)]


def l_series_oracle(order, half=False):
    """Coefficients in x = y^2 of y coth(y) (or y coth(y/2) with ``half``)."""
    n = 2 * order
    s = Fraction(1, 2) if half else Fraction(1)
    cosh = [s ** k / factorial(k) if k % 2 == 0 else Fraction(0) for k in range(n + 2)]
    sinh_over_y = [s ** (k + 1) / factorial(k + 1) if k % 2 == 0 else Fraction(0) for k in range(n + 2)]
    # y coth(s y) = cosh(s y) / (sinh(s y)/y)
    q = series_div(cosh, sinh_over_y, n)
    return [q[2 * k] for k in range(order + 1)]


def _pmul(a, b, nvars, kmax):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if sum((i + 1) * k for i, k in enumerate(e)) > kmax:
                continue
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _padd(a, b, s=1):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + s * c
    return {e: c for e, c in out.items() if c}


def _pscale(a, c):
    return {e: v * c for e, v in a.items() if v * c}


def newton_multiplicative_sequence(q, nvars, kmax):
    """prod_i Q(t_i) in e_1..e_nvars via log Q, power sums and Newton's identities.

    Returns {exponent tuple: coefficient}, exponent tuple indexed by p1..p_nvars,
    through weighted degree kmax (p_j has weight j).
    """
    # log Q
    inv = series_div([Fraction(1)], q, kmax)
    dq = [Fraction(k) * q[k] for k in range(1, kmax + 1)] + [Fraction(0)]
    quot = [sum(dq[i] * inv[k - i] for i in range(k + 1)) for k in range(kmax + 1)]
    a = [Fraction(0)] + [quot[k - 1] / k for k in range(1, kmax + 1)]
    zero = (0,) * nvars
    one = {zero: Fraction(1)}

    def e(j):
        if j == 0:
            return one
        if j > nvars:
            return {}
        t = [0] * nvars
        t[j - 1] = 1
        return {tuple(t): Fraction(1)}

    s = [{}]
    for k in range(1, kmax + 1):
        sk = _pscale(e(k), (-1) ** (k - 1) * k)
        for i in range(1, k):
            sk = _padd(sk, _pscale(_pmul(e(i), s[k - i], nvars, kmax), (-1) ** (i - 1)))
        s.append(sk)
    log_total = {}
    for k in range(1, kmax + 1):
        log_total = _padd(log_total, _pscale(s[k], a[k]))
    out, term = dict(one), dict(one)
    for n in range(1, kmax + 1):
        term = _pscale(_pmul(term, log_total, nvars, kmax), Fraction(1, n))
        out = _padd(out, term)
    return out


def brute_force_product(q, nvars_roots, kmax):
    """prod_{i<=N} Q(t_i) as a dict over root-exponent tuples (for tiny cases)."""
    cur = {(): Fraction(1)}
    for _ in range(nvars_roots):
        nxt = {}
        for e, c in cur.items():
            used = sum(e)
            for k in range(0, kmax - used + 1):
                if q[k]:
                    nxt[e + (k,)] = nxt.get(e + (k,), 0) + c * q[k]
        cur = nxt
    return {e: c for e, c in cur.items() if c}


def elementary_from_roots(e_roots, nroots):
    """Values of e_1..e_nroots at a numeric root vector."""
    es = [Fraction(1)] + [Fraction(0)] * nroots
    for t in e_roots:
        for j in range(nroots, 0, -1):
            es[j] += es[j - 1] * t
    return es[1:]
