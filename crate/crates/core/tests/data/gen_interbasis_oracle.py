"""Regenerates interbasis_oracle.json (mpmath, 30 digits).

U: the mu-integral representation by direct quadrature.
V: projection of the horocyclic function onto e^{im phi} at tau = 0.7.
"""
import json
from mpmath import mp, mpf, mpc, gamma, loggamma, quad, inf, cos, sin, cosh, sinh, atan, exp, pi, sqrt, besselk, legenp, log

mp.dps = 30
I = mpc(0, 1)
h = mpf(1) / 2


def u_integral(rho, nu, m, par):
    am = abs(m)
    sg = 1 if m > 0 else (-1 if m < 0 else 0)
    c = mpf(1) / 4 if par > 0 else mpf(3) / 4
    sq = exp(I * loggamma(h - am + I * rho).imag)
    G = exp(I * (loggamma(c - I * (rho - nu) / 2).imag + loggamma(c - I * (rho + nu) / 2).imag))
    pref = G / (pi * 2**(I * rho - h)) * sq
    th = lambda mu: am * 2 * atan(exp(-mu))
    env = lambda mu: cosh(mu)**(-I * rho - h)
    if par > 0 and am % 2 == 0:
        f = lambda mu: cos(th(mu)) * env(mu) * cos(nu * mu)
        unit = 1
    elif par > 0:
        f = lambda mu: cos(th(mu)) * env(mu) * sin(nu * mu)
        unit = I
    elif am % 2 == 0:
        f = lambda mu: sin(th(mu)) * env(mu) * sin(nu * mu)
        unit = sg
    else:
        f = lambda mu: sin(th(mu)) * env(mu) * cos(nu * mu)
        unit = -I * sg
    val = quad(f, [0, 2, 5, 10, 20, 40, 80, 140])
    return pref * unit * val


def v_proj(rho, s, m, tau=mpf('0.7'), n=160):
    acc = mpc(0)
    for k in range(n):
        phi = 2 * pi * k / n
        d = cosh(tau) - sinh(tau) * cos(phi)
        yt = 1 / d
        xt = sinh(tau) * sin(phi) / d
        acc += sqrt(yt) * besselk(I * rho, abs(s) * yt) * exp(I * s * xt) * exp(-I * m * phi)
    acc *= 2 * pi / n
    P = legenp(-h + I * rho, abs(m), cosh(tau), type=3).real
    return acc / (sqrt(2 * pi**3) * abs(gamma(h - abs(m) + I * rho))) / P


def cx(v):
    v = mpc(v)
    return [float(v.real), float(v.imag)]


out = {"u": [], "v": []}
for rho in [mpf(h), mpf(2)]:
    for nu in [mpf(0), mpf(1), mpf(-2.5)]:
        for m in [0, 1, -2, 3, 4]:
            for par in [1, -1]:
                out["u"].append([float(rho), float(nu), m, par, cx(u_integral(rho, nu, m, par))])
for rho in [mpf(1), mpf(2)]:
    for s in [mpf('0.9'), mpf('-1.5'), mpf(1)]:
        for m in [0, 1, -1, 2, -2, 3]:
            out["v"].append([float(rho), float(s), m, cx(v_proj(rho, s, m))])

with open(__file__.replace("gen_interbasis_oracle.py", "interbasis_oracle.json"), "w") as f:
    json.dump(out, f, indent=1)
