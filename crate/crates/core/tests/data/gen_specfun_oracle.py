"""Regenerates specfun_oracle.json with mpmath at 40 digits.

The JSON file is the frozen reference; rerun only to extend it.
"""
import json
from mpmath import mp, mpf, mpc, besselk, legenp, hyp2f1, hyper, rf, laguerre, cosh, sqrt, loggamma

mp.dps = 40
I = mpc(0, 1)
out = {}

out["macdonald"] = []
for rho, x in [(0, 0.01), (0, 1), (0, 5), (0, 30), (0.01, 0.5), (0.5, 0.1), (0.5, 2.5), (1, 1), (1, 12),
               (2, 5), (4, 4), (4, 30), (10, 3), (10, 10), (10, 25), (50, 35), (50, 60), (160, 113),
               (160, 1), (100, 150), (20, 0.01), (200, 199.5), (3, 100), (0.3, 7), (7, 0.2)]:
    v = besselk(I * mpf(rho), mpf(x)).real
    out["macdonald"].append([rho, x, float(v)])

out["conical"] = []
for m, rho, tau in [(0, 1, 0.5), (2, 1, 1.5), (1, 0.5, 3), (3, 2, 0.7), (4, 1, 2), (0, 2, 10), (1, 1, 40),
                    (2, 10, 1.0), (0, 50, 0.5), (2, 50, 3), (2, 160, 0.05), (0, 160, 0.0625), (1, 0.01, 0.8),
                    (0, 0, 1.2), (5, 3, 1.76)]:
    v = legenp(-mpf(1) / 2 + I * rho, m, cosh(mpf(tau)), type=3).real
    out["conical"].append([m, rho, tau, float(v)])

out["hyp2f1"] = []
cases = [
    ((0.25, -0.5), (0.25, 0.5), (0.5, 0), -1),
    ((0.25, -0.5), (0.25, 0.5), (0.5, 0), -50),
    ((0.75, 1.5), (0.75, -0.5), (1.5, 0), -1e6),
    ((0.3, 1.0), (1.2, -0.4), (2.1, 0.3), 0.3),
    ((0.3, 1.0), (1.2, -0.4), (2.1, 0.3), 0.8),
    ((0.5, 2.0), (0.5, -1.0), (1.0, 1.0), 0.97),
    ((1.5, 3.0), (0.5, -3.0), (2.0, 0.0), -0.4),
]
for a, b, c, z in cases:
    v = hyp2f1(mpc(*a), mpc(*b), mpc(*c), mpf(z))
    out["hyp2f1"].append([list(a), list(b), list(c), z, [float(v.real), float(v.imag)]])


def wilson(n, x2, a, b, c, d):
    x = sqrt(mpf(x2))
    return rf(a + b, n) * rf(a + c, n) * rf(a + d, n) * hyper([-n, a + b + c + d + n - 1, a - I * x, a + I * x], [a + b, a + c, a + d], 1)


out["wilson"] = []
for n, x2, a, b, c, d in [(1, 1, (0.25, 1), (0.25, -1), (0.5, 0), (0, 0)),
                          (2, 0.3, (0.75, 0.5), (0.75, -0.5), (0.5, 0), (1, 0)),
                          (3, 2.5, (0.25, 0.25), (0.25, -0.25), (0.5, 0), (1, 0)),
                          (2, 4.0, (0.3, 0.2), (0.7, -0.1), (0.4, 0.3), (0.9, 0))]:
    v = wilson(n, x2, mpc(*a), mpc(*b), mpc(*c), mpc(*d))
    out["wilson"].append([n, x2, list(a), list(b), list(c), list(d), [float(v.real), float(v.imag)]])

out["laguerre"] = []
for n, al, x in [(2, (0.5, 2.0), 1.0), (3, (-0.5, 1.5), -0.9), (4, (2.5, -1.0), 1.5), (1, (-0.5, 0.0), 0.9)]:
    v = laguerre(n, mpc(*al), mpf(x))
    out["laguerre"].append([n, list(al), x, [float(v.real), float(v.imag)]])

out["ferrers"] = []
for mu, nu, x in [((0, -1), (-0.5, 2), 0.3), ((0, -2), (-0.5, 1), -0.95), ((0, -1), (-0.5, 2), 0.0)]:
    v = legenp(mpc(*nu), mpc(*mu), mpf(x), type=2)
    out["ferrers"].append([list(mu), list(nu), x, [float(v.real), float(v.imag)]])

out["loggamma"] = []
for z in [(2.5, 3.0), (-3.7, 0.2), (0.25, -40.0), (30.0, 7.5), (-2.5, 0.0), (-49.5, 3.0), (0.5, 150.0), (1e-3, -1e-3)]:
    v = loggamma(mpc(*z))
    out["loggamma"].append([list(z), [float(v.real), float(v.imag)]])

with open(__file__.replace("gen_specfun_oracle.py", "specfun_oracle.json"), "w") as f:
    json.dump(out, f, indent=1)
