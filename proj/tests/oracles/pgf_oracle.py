"""High-precision reference values for the frozen constants in
tests/oracle_values.hpp. Independent of the C++ code path: every quantity
is evaluated from its defining formula in 40-digit arithmetic, and the
total-variation tail integral is done both by mpmath quadrature and by the
complementary-error-function closed form for beta = 2.

Run: python3 tests/oracles/pgf_oracle.py
"""
from mpmath import mp, mpf, log, sqrt, cos, exp, erf, erfc, quad, inf, gamma, pi, ceil

mp.dps = 40


def comps(s, b):
    s, b = mpf(s), mpf(b)
    ls = log(s)
    c = sqrt(2 * ls)
    alpha = b - sqrt(b * b - 2 * ls)
    ratio = exp(alpha) / cos(c)
    return alpha, c, ratio


def big_b(y, s, b):
    alpha, c, ratio = comps(s, b)
    return exp((mpf(y) - 1) * alpha) / cos(c) / (2 - ratio)


def hitting(y, s, b, t):
    return mpf(s) ** (-mpf(t)) * big_b(max(1, abs(mpf(y))), s, b)


def tv_terms(beta, y, s, t):
    beta, y, s = mpf(beta), mpf(y), mpf(s)
    z = 2 * gamma(1 + 1 / beta)
    dens = lambda x: exp(-abs(x) ** beta) / z
    head = 2 * quad(dens, [0, y]) * big_b(y, s, beta)
    tail = 2 * quad(lambda x: dens(x) * big_b(x, s, beta), [y, y + 10, inf])
    return head * s ** -t, tail * s ** -t


def tv_tail_erfc(y, s, t):
    # beta = 2: int_y^inf e^{-z^2 + alpha z} dz = e^{alpha^2/4} sqrt(pi)/2 erfc(y - alpha/2)
    alpha, c, ratio = comps(s, 2)
    y = mpf(y)
    integral = exp(alpha ** 2 / 4) * sqrt(pi) / 2 * erfc(y - alpha / 2)
    b1 = 1 / cos(c) / (2 - ratio)
    return 2 * mpf(s) ** -t * b1 * exp(-alpha) * integral / sqrt(pi)


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


if __name__ == "__main__":
    a, c, r = comps("1.4", 2)
    show("alpha(1.4,2)", a); show("c(1.4,2)", c); show("ratio(1.4,2)", r)
    a2, c2, r2 = comps("1.3", "1.1")
    show("alpha(1.3,1.1)", a2); show("ratio(1.3,1.1)", r2)
    show("bm_exit0(1.4)", 1 / cos(c))
    show("geom(1.7492)", 1 / (2 - mpf("1.7492")))
    show("drift(1;1.4,2)", exp(a)); show("drift(2;1.4,2)", exp(2 * a))
    show("drift(9;1.3,1.1)", exp(9 * a2))
    show("B(2;1.4,2)", big_b(2, "1.4", 2)); show("B(10;1.3,1.1)", big_b(10, "1.3", "1.1"))
    show("hit(2,1.4,2,20)", hitting(2, "1.4", 2, 20))
    show("hit(2,1.4,2,19)", hitting(2, "1.4", 2, 19))
    show("hit(2,1.4,2,0)raw", hitting(2, "1.4", 2, 0))
    show("hit(10,1.3,1.1,34)", hitting(10, "1.3", "1.1", 34))
    show("hit(10,1.3,1.1,33)", hitting(10, "1.3", "1.1", 33))
    h, tl = tv_terms(2, 2, "1.4", 20)
    show("tv head(2,2,1.4,20)", h); show("tv tail(2,2,1.4,20)", tl); show("tv total", h + tl)
    show("tv tail erfc", tv_tail_erfc(2, "1.4", 20))
    h, tl = tv_terms(2, 2, "1.4", 19); show("tv total t=19", h + tl)
    h, tl = tv_terms("1.1", 10, "1.3", 34); show("tv total(1.1,10,1.3,34)", h + tl)
    h, tl = tv_terms("1.1", 10, "1.3", 33); show("tv total(1.1,10,1.3,33)", h + tl)
    show("half erf(2)", erf(2) / 2)
    show("z_const(beta=1.1)", 2 * gamma(1 + 1 / mpf("1.1")))
