#!/usr/bin/env python3
"""Compute Laplace eigenvalue parameters t_j for the modular surface.

Hejhal-style two-height collocation: expand a putative cusp form in a
truncated Fourier series with K-Bessel weight, evaluate at sample points on
a low horocycle, pull the points back into the fundamental domain, and use
automorphy to close a linear system for the coefficients.  Coefficients
computed independently at two heights agree only at genuine eigenvalues, so
the mismatch in the first few coefficients is the root function.  Sign
changes are refined by secant iteration; a candidate is accepted when the
coefficient mismatch is tiny at both heights and the multiplicative
(Hecke) relation c_2 c_3 = c_6 holds.

Usage:  compute_eigenvalues.py {even|odd} T_LO T_HI [out.txt]

Output rows: t  max_mismatch  hecke_defect  c_2  c_3
"""
import math
import sys

import numpy as np


def k_bessel_scaled(t, u, eps_exp=34.0):
    """exp(pi t / 2) K_{it}(u) for an array of arguments u > 0.

    Contour form K_{it}(u) = (e^{-t th}/2) Int_R e^{-u cos(th) cosh w}
    e^{i(u sin(th) sinh w - t w)} dw with the tilt th chosen so the
    compensating factor exp(t(pi/2 - th)) stays below ~e^9.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    dth = min(0.5, 9.0 / max(t, 1e-9))  # pi/2 - theta
    th = math.pi / 2 - dth
    c, s = math.cos(th), math.sin(th)
    ucmin = np.min(u) * c
    wmax = math.acosh(max(2.0, (eps_exp + 5) / max(ucmin, 1e-12) + 1.0))
    fmax = np.max(u) * s * math.cosh(wmax) + t  # top oscillation frequency
    h = min(0.008, 5.0 / fmax)
    n = int(2 * wmax / h) + 1
    if n % 2 == 0:
        n += 1  # Simpson needs an odd count
    w = np.linspace(-wmax, wmax, n)
    phase = np.outer(u * s, np.sinh(w)) - t * w[None, :]
    damp = np.exp(-np.outer(u * c, np.cosh(w)))
    wt = np.ones(n)
    wt[1:-1:2] = 4
    wt[2:-1:2] = 2
    wt *= (w[1] - w[0]) / 3.0
    return 0.5 * math.exp(t * dth) * ((damp * np.cos(phase)) @ wt)


def pullback(x, y):
    """Translate/invert (x, y) into the standard fundamental domain."""
    for _ in range(100):
        x = x - round(x)
        r2 = x * x + y * y
        if r2 >= 1.0 - 1e-15:
            break
        x, y = -x / r2, y / r2
    return x, y


def prep(Y, Q):
    xj = (np.arange(1, Q + 1) - 0.5) / (2 * Q)
    stars = [pullback(x, Y) for x in xj]
    return (np.array([s[0] for s in stars]), np.array([s[1] for s in stars]))


def build_system(t, Y, pb, M, Q, parity):
    xs_star, ys_star = pb
    xj = (np.arange(1, Q + 1) - 0.5) / (2 * Q)
    cs = np.cos if parity == 'even' else np.sin
    ks = np.arange(1, M + 1)
    K = k_bessel_scaled(t, (2 * math.pi * np.outer(ks, ys_star)).ravel()).reshape(M, Q)
    B = np.sqrt(ys_star)[None, :] * K * cs(2 * math.pi * np.outer(ks, xs_star))
    Cn = cs(2 * math.pi * np.outer(ks, xj))  # inversion weights
    V = (2.0 / Q) * (Cn @ B.T)
    V[np.arange(M), np.arange(M)] -= math.sqrt(Y) * k_bessel_scaled(t, 2 * math.pi * ks * Y)
    return V


def coeffs(t, Y, pb, M, Q, parity):
    V = build_system(t, Y, pb, M, Q, parity)
    # normalize c_1 = 1, drop the first row, solve for c_2..c_M
    c = np.linalg.solve(V[1:, 1:], -V[1:, 0])
    return np.concatenate([[1.0], c])


def mismatch(t, Ya, Yb, pba, pbb, M, Q, parity, ncheck=3):
    ca = coeffs(t, Ya, pba, M, Q, parity)
    cb = coeffs(t, Yb, pbb, M, Q, parity)
    return ca[1:1 + ncheck] - cb[1:1 + ncheck], ca, cb


def modes_for(t):
    # truncation: K_{it}(2 pi M Y) must be deep in the exponential tail
    return int(math.ceil((t + 8 * t ** (1 / 3.0) + 22) / 5.44)) + 2


def scan(parity, lo, hi, out):
    results = []
    seg = lo
    while seg < hi:
        seglo, seghi = seg, min(seg + 2.0, hi)
        M = modes_for(seghi)
        Q = M + 12
        Ya, Yb = 0.52, 0.78
        pba, pbb = prep(Ya, Q), prep(Yb, Q)
        grid = np.arange(seglo, seghi + 0.008, 0.008)
        prev = tprev = None
        for t in grid:
            e, ca, cb = mismatch(t, Ya, Yb, pba, pbb, M, Q, parity)
            if prev is not None:
                for comp in range(3):
                    if prev[comp] * e[comp] >= 0:
                        continue
                    t0, e0, t1, e1 = tprev, prev[comp], t, e[comp]
                    for _ in range(60):
                        if e1 == e0:
                            break
                        tm = t1 - e1 * (t1 - t0) / (e1 - e0)
                        if not (min(t0, t1) - 0.01 <= tm <= max(t0, t1) + 0.01):
                            break  # secant left the bracket: spurious crossing
                        em, cam, cbm = mismatch(tm, Ya, Yb, pba, pbb, M, Q, parity)
                        t0, e0, t1, e1 = t1, e1, tm, em[comp]
                        if abs(t1 - t0) < 1e-10:
                            break
                    allerr = np.max(np.abs(cam - cbm)[1:6])
                    hecke = abs(cam[1] * cam[2] - cam[5])
                    if allerr < 1e-5 and hecke < 1e-6:
                        if not any(abs(tm - r[0]) < 1e-6 for r in results):
                            results.append((tm, allerr, hecke, cam[1], cam[2]))
                            sys.stderr.write("%s root %.8f err %.1e hecke %.1e\n"
                                             % (parity, tm, allerr, hecke))
                            sys.stderr.flush()
                    break
            prev, tprev = e, t
        seg = seghi
    results.sort()
    with open(out, 'w') as f:
        for r in results:
            f.write("%.8f %.2e %.2e %.8f %.8f\n" % r)
    return results


def main():
    if len(sys.argv) < 4 or sys.argv[1] not in ('even', 'odd'):
        sys.stderr.write(__doc__)
        return 2
    parity, lo, hi = sys.argv[1], float(sys.argv[2]), float(sys.argv[3])
    out = sys.argv[4] if len(sys.argv) > 4 else 'eigs_%s.txt' % parity
    scan(parity, lo, hi, out)
    return 0


if __name__ == '__main__':
    sys.exit(main())
