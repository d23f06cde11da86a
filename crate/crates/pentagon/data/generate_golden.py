"""Regenerates golden.jsonl with mpmath at 30 digits.

Every record: function name, input object, expected value ([re, im] or a
real), relative tolerance, and where the expected value came from.
Run from this directory: python3 generate_golden.py > golden.jsonl
"""

import json

import mpmath as mp

mp.mp.dps = 30
I = mp.mpc(0, 1)


def c(z):
    z = mp.mpc(z)
    return [float(z.real), float(z.imag)]


def emit(function, inp, expected, tol, provenance="mpmath dps=30"):
    if isinstance(expected, (mp.mpc, complex)):
        expected = c(expected)
    else:
        expected = float(expected)
    print(json.dumps({"function": function, "input": inp, "expected": expected,
                      "tol": tol, "provenance": provenance}))


def qp(a, q):
    # direct product; mpmath's own routine gives up close to |q| = 1
    acc, t = mp.mpf(1), mp.mpc(a)
    while abs(t) > mp.mpf(10) ** (-mp.mp.dps - 5):
        acc *= 1 - t
        t *= q
    return acc


def b22(u, w1, w2):
    return u**2 / (w1 * w2) - u / w1 - u / w2 + w1 / (6 * w2) + w2 / (6 * w1) + mp.mpf(1) / 2


def hgam(u, w1, w2):
    if mp.im(w1 / w2) < 0:
        w1, w2 = w2, w1
    q = mp.exp(2j * mp.pi * w1 / w2)
    qt = mp.exp(-2j * mp.pi * w2 / w1)
    return (mp.exp(-1j * mp.pi * b22(u, w1, w2) / 2)
            * qp(mp.exp(2j * mp.pi * u / w1) * qt, qt) / qp(mp.exp(2j * mp.pi * u / w2), q))


def bhyp(x, y, w1, w2):
    return hgam(x, w1, w2) * hgam(y, w1, w2) / hgam(x + y, w1, w2)


def delta(x, n, q):
    h = mp.sqrt(q) ** n
    return qp(q * h / x, q) / qp(h * x, q)


def bidx(a, n, b, m, q):
    return (delta(a, n, q) * delta(b, m, q) / delta(a * b, n + m, q)
            * mp.exp(m / mp.mpf(2) * mp.log(a)) * mp.exp(n / mp.mpf(2) * mp.log(b)))


def beta(x, y):
    return mp.gamma(x) * mp.gamma(y) / mp.gamma(x + y)


def gdisc(x, n):
    return mp.gamma((n + x) / 2) / mp.gamma(1 + (n - x) / 2)


def bgdisc(a, n, b, m):
    return gdisc(2 * a, n) * gdisc(2 * b, m) / gdisc(2 * a + 2 * b, n + m)


def nine_factor(al, be, n, m):
    v = mp.mpf(1)
    for i in range(3):
        for j in range(3):
            s = al[i] + be[j]
            h = mp.mpf(n[i] + m[j]) / 2
            v *= mp.gamma(s + h) / mp.gamma(1 - s + h)
    return v


# --- scalar special functions -------------------------------------------------

for z in [mp.mpc(0.5), mp.mpc(3.7, 0), mp.mpc(0.3, 2.0), mp.mpc(-2.4, 0.7), mp.mpc(12.5, -30)]:
    emit("gamma", {"z": c(z)}, mp.gamma(z), 1e-13)

for x in [0.1, 0.5, 0.9, 0.999]:
    emit("dilog", {"x": x}, mp.polylog(2, x), 1e-14)
    L = mp.polylog(2, x) + mp.log(1 - x) * mp.log(x) / 2
    emit("rogers_l", {"x": x}, L, 1e-14)

for a, q in [(mp.mpc(0.5), mp.mpc(0.5)), (mp.mpc(0.3, 0.4), mp.mpc(0.2, 0.6)), (mp.mpc(-1.5, 2), mp.mpc(0.9))]:
    emit("qpoch_inf", {"a": c(a), "q": c(q)}, qp(a, q), 1e-12)

for al, be, q in [(0.5, 1.5, 0.9), (0.3, 0.7, 0.99), (mp.mpc(0.2, 0.1), 1.1, 0.95)]:
    al, be, q = mp.mpc(al), mp.mpc(be), mp.mpf(q)
    v = qp(q**al, q) / qp(q**be, q) * (1 - q) ** (al - be)
    emit("qpoch_ratio_regularized", {"alpha": c(al), "beta": c(be), "q": float(q)}, v, 1e-11)

w1, w2 = mp.mpc(1), mp.mpc(0.4, 0.9)
for u in [mp.mpc(0.3, 0.2), mp.mpc(0.7, 0.45), mp.mpc(0.1, -0.6), mp.mpc(1.2, 2.5)]:
    emit("hyperbolic_gamma", {"u": c(u), "omega1": c(w1), "omega2": c(w2)}, hgam(u, w1, w2), 1e-11)

for x, y in [(mp.mpc(0.3, 0.1), mp.mpc(0.4, -0.2)), (mp.mpc(0.5, 0.3), mp.mpc(0.2, 0.1))]:
    emit("b_hyp", {"x": c(x), "y": c(y), "omega1": c(w1), "omega2": c(w2)}, bhyp(x, y, w1, w2), 1e-11)

for x, n, q in [(mp.mpc(0.7, 0.2), 0, 0.3), (mp.mpc(0.6, -0.1), 3, 0.45), (mp.mpc(0.8, 0.05), -2, 0.2)]:
    emit("delta_idx", {"x": c(x), "n": n, "q": q}, delta(x, n, mp.mpf(q)), 1e-12)

q = mp.mpf(0.5)
a = b = q ** (mp.mpf(1) / 4)
emit("b_idx", {"a": c(a), "n": 0, "b": c(b), "m": 0, "q": 0.5}, bidx(a, 0, b, 0, q), 1e-12)
for a, n, b, m, qq in [(mp.mpc(0.7, 0.1), 1, mp.mpc(0.75, -0.05), -2, 0.3), (mp.mpc(0.8, 0.0), 2, mp.mpc(0.6, 0.2), 1, 0.4)]:
    emit("b_idx", {"a": c(a), "n": n, "b": c(b), "m": m, "q": qq}, bidx(a, n, b, m, mp.mpf(qq)), 1e-12)

for a, n, b, m in [(0.25, 0, 0.25, 0), (0.13, 1, 0.31, -2), (0.37, -1, 0.08, 2)]:
    emit("b_gamma_disc", {"a": a, "n": n, "b": b, "m": m}, bgdisc(mp.mpf(a), n, mp.mpf(b), m), 1e-13)

for x, y in [(0.5, 0.5), (mp.mpc(0.2, 0.3), mp.mpc(0.7, -0.1))]:
    emit("b_beta", {"x": c(x), "y": c(y)}, beta(mp.mpc(x), mp.mpc(y)), 1e-13)

# --- identity sides -------------------------------------------------------------

sixth = mp.mpf(1) / 6
sym = {"alpha": [1 / 6] * 3, "beta": [1 / 6] * 3, "n": [0, 0, 0], "m": [0, 0, 0]}
emit("gamma_rhs", sym, nine_factor([sixth] * 3, [sixth] * 3, [0] * 3, [0] * 3), 1e-13)
emit("gamma_lhs", sym, nine_factor([sixth] * 3, [sixth] * 3, [0] * 3, [0] * 3), 1e-6,
     "scalar gamma oracle: the sum-integral equals the nine-factor product")

al = [mp.mpf("0.12"), mp.mpf("0.2")]
al.append(mp.mpf(1) / 2 - al[0] - al[1])
be = [mp.mpf("0.17"), mp.mpf("0.09")]
be.append(mp.mpf(1) / 2 - be[0] - be[1])
spin = {"alpha": [float(x) for x in al], "beta": [float(x) for x in be], "n": [1, -2, 1], "m": [2, 0, -2]}
emit("gamma_rhs", spin, nine_factor(al, be, [1, -2, 1], [2, 0, -2]), 1e-13)
emit("gamma_lhs", spin, nine_factor(al, be, [1, -2, 1], [2, 0, -2]), 1e-6,
     "scalar gamma oracle: the sum-integral equals the nine-factor product")

# Hyperbolic right-hand sides at three balanced points with omega = (1, 0.4+0.9i).
W = w1 + w2
for k, (a, b12) in enumerate([
    ([W * 0.13 + 0.02j, W * 0.17 - 0.01j, W * 0.15], [W * 0.16, W * 0.18 + 0.015j]),
    ([W * 0.18, W * 0.12 + 0.03j, W * 0.16 - 0.02j], [W * 0.14 - 0.01j, W * 0.19]),
    ([W * 0.15 - 0.03j, W * 0.15 + 0.03j, W * 0.14], [W * 0.2, W * 0.13]),
]):
    bb = b12 + [W - sum(a) - sum(b12)]
    p = {"a": [c(x) for x in a], "b": [c(x) for x in bb], "omega": {"omega1": c(w1), "omega2": c(w2)}}
    rhs = bhyp(a[0] + bb[1], a[2] + bb[0], w1, w2) * bhyp(a[1] + bb[0], a[2] + bb[1], w1, w2)
    emit("hyperbolic_rhs", p, rhs, 1e-11)
    if k == 0:
        mp.mp.dps = 20
        f = lambda t: (bhyp(a[0] + I * t, bb[0] - I * t, w1, w2) * bhyp(a[1] + I * t, bb[1] - I * t, w1, w2)
                       * bhyp(a[2] + I * t, bb[2] - I * t, w1, w2))
        # The integrand falls off like e^{-9|t|}; beyond |t| = 8 it is below 1e-30.
        # Infinite endpoints would sample |t| huge, where the q-products never terminate.
        lhs = mp.quad(f, [-8, -3, -1, 0, 1, 3, 8]) / mp.sqrt(w1 * w2)
        emit("hyperbolic_lhs", p, lhs, 1e-8, "mpmath dps=20 quadrature")
        mp.mp.dps = 30


def index_lhs(a, b, n, m, q, M=20, N=256):
    """Sum over |k| <= M of trapezoid integrals of the delta-only integrand, times the kernel constant."""
    mp.mp.dps = 20
    zs = [mp.exp(2j * mp.pi * j / N) for j in range(N)]
    total = mp.mpc(0)
    for k in range(-M, M + 1):
        acc = mp.mpc(0)
        for z in zs:
            v = z ** (-3 * k)
            for i in range(3):
                v *= delta(a[i] * z, n[i] + k, q) * delta(b[i] / z, m[i] - k, q)
            acc += v
        total += (-1) ** k * acc / N
    const = mp.mpf(1)
    for i in range(3):
        const *= mp.exp(m[i] / mp.mpf(2) * mp.log(a[i]) + n[i] / mp.mpf(2) * mp.log(b[i])) / delta(a[i] * b[i], n[i] + m[i], q)
    mp.mp.dps = 30
    return total * const


q = mp.mpf("0.3")
s = q ** sixth
p = {"a": [c(s)] * 3, "b": [c(s)] * 3, "n": [0, 0, 0], "m": [0, 0, 0], "q": c(q)}
emit("index_lhs", p, index_lhs([s] * 3, [s] * 3, [0] * 3, [0] * 3, q), 1e-9, "mpmath dps=20 trapezoid N=256, |m| <= 20")
emit("index_rhs", p, bidx(s * s, 0, s * s, 0, q) ** 2, 1e-12)

a = [mp.mpc(0.78, 0.05), mp.mpc(0.84, -0.08)]
a.append(mp.exp(mp.log(q) / 2 - mp.log(a[0]) - mp.log(a[1])))
b = [mp.mpc(0.72, 0.02), mp.mpc(0.86, 0.1)]
b.append(mp.exp(mp.log(q) / 2 - mp.log(b[0]) - mp.log(b[1])))
n, m = [1, -2, 1], [0, 1, -1]
p = {"a": [c(x) for x in a], "b": [c(x) for x in b], "n": n, "m": m, "q": c(q)}
emit("index_lhs", p, index_lhs(a, b, n, m, q), 1e-9, "mpmath dps=20 trapezoid N=256, |m| <= 20")

for av, bv in [([1 / 12] * 3, [1 / 12] * 2), ([mp.mpc(0.1, 0.05), 0.13, 0.2], [0.11, mp.mpc(0.2, -0.1)])]:
    av = [mp.mpc(x) for x in av]
    bv = [mp.mpc(x) for x in bv]
    cc = av[0] + av[1] + bv[0] + bv[1]
    f = lambda t: beta(av[0] + I * t, bv[0] - I * t) * beta(av[1] + I * t, bv[1] - I * t) * beta(av[2] + I * t, cc)
    lhs = mp.quad(f, [-mp.inf, -5, -1, 0, 1, 5, mp.inf]) / (2 * mp.pi)
    p = {"a": [c(x) for x in av], "b": [c(x) for x in bv]}
    emit("beta_lhs", p, lhs, 1e-9, "mpmath dps=30 quadrature")
