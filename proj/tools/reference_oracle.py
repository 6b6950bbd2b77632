#!/usr/bin/env python3
"""Regenerate the multiprecision reference values frozen in tests/.

Every numeric golden in test_quadratic, test_chain, test_certificate,
test_tuner and test_orbit was produced by this script (or its direct
ancestor): an independent plain-mpmath evaluation of the same closed
forms the library computes with outward-rounded intervals.  Values are
printed with the digit counts the tests freeze, so a change in the
library can be triaged by diffing this output against the test sources.

Usage:  python3 tools/reference_oracle.py        (needs mpmath; ~3 s)

The published-window orbit section iterates 8288 steps at 5120 decimal
digits; everything else is instant at 120 digits.
"""
import time

from mpmath import e as E
from mpmath import exp, floor, log, mp, mpf, sqrt

# Set the working precision BEFORE any function definitions: default-argument
# expressions like s_l0=mpf("0.8") are evaluated at def time, and at mpmath's
# startup dps of 15 they would silently freeze a 53-bit approximation of 0.8.
mp.dps = 120


def p(x, n):
    return mp.nstr(mpf(x), n, strip_zeros=False)


def quad(delta, iota, eps, s_l0=mpf("0.8")):
    """Window setup: expansivity constants, escape time, base rates."""
    C1 = sqrt((4 - delta ** (2 * iota)) / (4 - delta ** 2))
    s = delta ** 2 + eps
    lam = log(2 * delta * sqrt((4 - delta ** 2) / (4 * s - s * s)))
    N = int(floor(log(1 / (3 * eps - eps ** 2)) / log(4)))
    alpha0 = -log(delta) / N
    lambda0 = (1 - s_l0) * alpha0 + s_l0 * lam
    N1c = int(floor(min(log((1 - delta ** iota) / delta ** 2) / log(4), N - 1)))
    N1s = min(int(floor(log(1 / (2 * delta ** 2)) / log(4))), N - 1)
    return dict(C1=C1, lam=lam, N=N, alpha0=alpha0, lambda0=lambda0,
                N1c=N1c, N1s=N1s)


def chain(delta, iota, eps, s_a1, s_g1, s_g2, mode, s_l0=mpf("0.8")):
    """The full constant chain, compat or strict formulas."""
    q0 = quad(delta, iota, eps, s_l0)
    C1, lam, N = q0["C1"], q0["lam"], q0["N"]
    alpha0, lambda0 = q0["alpha0"], q0["lambda0"]
    N1 = q0["N1c"] if mode == "compat" else q0["N1s"]
    L1 = mpf("0.5")
    J = 4
    kappa = 1
    alpha1 = s_a1 * alpha0 + (1 - s_a1) * lambda0
    if mode == "compat":
        D1 = exp(kappa * ((1 - exp(-alpha1)) ** -1
                 + exp(-(N1 + 1) * (alpha1 - alpha0))
                 / (1 - exp(-(N1 + 1) * (alpha1 - alpha0)))
                 * (1 - exp(-(alpha1 - alpha0)))))
        gamma0 = (1 + log(2) + 5 * log(-log(delta))) / (-log(delta))
    else:
        D1 = exp(kappa * (exp(-alpha1) / (1 - exp(-alpha1))
                 + exp(-(alpha1 - alpha0) * (N1 + 1))
                 / ((1 - exp(-(alpha1 - alpha0) * (N1 + 1)))
                    * (1 - exp(-(alpha1 - alpha0))))))
        gamma0 = (2 + log(2) + 5 * log(log(1 / delta))) / log(1 / delta)
    D2 = mpf("1.5") + exp(-lambda0 * (N + 1)) / (1 - exp(-lambda0))
    D3 = 1 / (mpf("0.5") - exp(-lambda0 * (N + 1)) / (1 - exp(-lambda0)))
    q = log(delta ** -iota)
    gamma1max = min(1 - gamma0, 1 - (log(1 / C1) + 2 * log(q)) / q)
    gamma1 = s_g1 * gamma1max
    gamma2 = s_g2 * (1 - (gamma0 + gamma1))
    gamma = gamma0 + gamma1 + gamma2
    Dhat = 2 + (2 * D2 * D3 * exp(-lam) / C1) / (1 - exp(-lam)) \
             + (2 * D1 * D2 * D3 * L1 ** -2) / (1 - exp(-(alpha1 - alpha0)))
    Dhathat = (2 + E * (q ** 2 / (q - 1) ** 2)) \
        * (q ** 2 / (q ** 2 - delta ** (iota * (1 - gamma1)) / C1)) / (q - 1)
    Dist = D2 * D3 * exp(kappa * (Dhat * Dhathat
                                  + (D2 * D3 * exp(-lam) / C1)
                                  / (1 - exp(-lam))))
    Gamma1 = Dist * D1 * D2 * D3 * exp(1 + lambda0) / (L1 * C1)
    k0 = max((log(D1 / L1) + lambda0 + alpha1) / q, mpf(0))
    tau1 = 2 / (lambda0 + alpha1)
    tau0 = (2 + k0) / (lambda0 + alpha1)
    C3 = D1 ** (-(lambda0 + 2 * alpha1) / (lambda0 + alpha1)) \
        * L1 ** (2 + alpha1 / (lambda0 + alpha1))
    C3til = 2 ** (alpha1 * tau1 - 1) * L1 ** 2 * C3 \
        / (2 * D1 ** 2 * Dist * D2 * D3)
    gamma1min = max(
        iota + (log(Dist * D2 * D3 / C1) + 2 * log(q)) / log(1 / delta),
        alpha1 * tau1 + (log(Gamma1 * D2 * D3 / C3til
                             * exp(alpha1 * tau1 - 1))
                         + 2 * log(q)) / (iota * log(1 / delta)))
    if mode == "compat":
        tau = (tau0 / (1 - gamma1)) * (1 + (log(J) - log(Gamma1))
                                       / log(1 / delta)
                                       + 2 * log(q) / log(1 / delta))
    else:
        tau = (tau0 / (1 - gamma1)) * (1 + (log(J) + 2 * log(log(1 / delta))
                                            - log(Gamma1)) / log(1 / delta))
    alpha = min(alpha0,
                (lam - lambda0) / (tau * (lam - (1 - gamma1) / tau0) + 1))
    etatil = exp(-gamma2 * alpha) \
        * (1 + delta ** (1 - gamma) / (1 - exp(-(1 - gamma))))
    eta = etatil ** N / (1 - etatil)
    c1b = (log(1 / delta) if mode == "compat" else q) \
        - exp(-(1 + lambda0) / 2)
    return dict(alpha1=alpha1, D1=D1, gamma0=gamma0, gamma1max=gamma1max,
                gamma1=gamma1, gamma2=gamma2, gamma=gamma, Dhat=Dhat,
                Dhathat=Dhathat, Dist=Dist, Gamma1=Gamma1, k0=k0, tau1=tau1,
                tau0=tau0, C3=C3, C3til=C3til, gamma1min=gamma1min, tau=tau,
                alpha=alpha, etatil=etatil, eta=eta, c1b_margin=c1b,
                c2_margin=1 - tau0 * alpha0, c3_margin=gamma1 - gamma1min,
                c4_margin=1 - eta)


def orbit(eps_exp, nmax, dps, lambda0, alpha0):
    """Critical orbit at a = 2 - eps: escape step, range, margins.

    Tracks c_n, the derivative product and the parameter-derivative sum
    exactly as the orbit module does, at point precision (the windows the
    tests freeze are far narrower than the printed digits).
    """
    saved = mp.dps
    mp.dps = dps
    eps = mpf(10) ** -eps_exp
    a = 2 - eps
    c = -a
    dprod = mpf(1)
    csum = mpf(1)
    min_c = None
    min_a3 = None
    decay = exp(-alpha0)
    rpow = mpf(1)
    max_cs = abs(mpf(1) - 1 / (2 * a))
    min_cs = max_cs
    ntil = None
    facts = {}
    n = 0
    while ntil is None or n < nmax:
        n += 1
        dprod *= 2 * c
        c = c * c - a
        csum += 1 / dprod
        if n <= nmax:
            min_c = c if min_c is None else min(min_c, c)
            rpow *= decay
            m = abs(c) - rpow
            min_a3 = m if min_a3 is None else min(min_a3, m)
        if ntil is None:
            max_cs = max(max_cs, abs(csum))
            min_cs = min(min_cs, abs(csum))
            if abs(2 - c) >= mpf("0.25"):
                ntil = n
                tail = exp(-lambda0 * (n + 1)) / (1 - exp(-lambda0))
                facts["range_len"] = abs(2 - c)
                facts["a4_margin"] = 1 - abs(csum - 1) - tail
                facts["d2_direct"] = max(max_cs, abs(csum) + tail)
                facts["d3_direct"] = 1 / min(min_cs, facts["a4_margin"])
    facts.update(ntilde=ntil, min_c=min_c, a3_margin=min_a3)
    mp.dps = saved
    return facts


def show(title, rows):
    print("== " + title)
    for label, value, digits in rows:
        print("  %-22s %s" % (label, p(value, digits)))


def main():
    delta_p, iota_p, eps_p = mpf("1e-1000"), mpf("0.8"), mpf("1e-4990")

    e = quad(mpf("0.001"), mpf("0.5"), mpf("0.01"))
    show("test_quadratic: expansivity at (1e-3, 0.5, 1e-2)",
         [("C1", e["C1"], 17), ("lambda", e["lam"], 17)])

    q = quad(delta_p, iota_p, eps_p)
    print("== test_quadratic: published setup (N=%d, N1=%d)"
          % (q["N"], q["N1c"]))
    for label, value, digits in [("lambda", q["lam"], 17),
                                 ("alpha0", q["alpha0"], 15),
                                 ("lambda0", q["lambda0"], 15)]:
        print("  %-22s %s" % (label, p(value, digits)))

    qh = quad(mpf("1e-500"), mpf("0.8"), mpf("1e-2495"))
    print("== test_quadratic: half-scale setup (N=%d, N1=%d)"
          % (qh["N"], qh["N1c"]))
    for label, value, digits in [("lambda", qh["lam"], 17),
                                 ("alpha0", qh["alpha0"], 17),
                                 ("lambda0", qh["lambda0"], 17)]:
        print("  %-22s %s" % (label, p(value, digits)))

    l0, N = mpf("0.61"), 10
    tail = exp(-l0 * (N + 1)) / (1 - exp(-l0))
    show("test_quadratic: derivative bounds at (0.61, 10)",
         [("D2", mpf("1.5") + tail, 17), ("D3", 1 / (mpf("0.5") - tail), 17)])

    order = ["alpha1", "D1", "gamma0", "gamma1max", "gamma1", "gamma2",
             "gamma", "Dhat", "Dhathat", "Dist", "Gamma1", "k0", "tau1",
             "tau0", "C3", "C3til", "gamma1min", "tau", "alpha", "etatil",
             "eta", "c1b_margin", "c2_margin", "c3_margin", "c4_margin"]
    for mode in ("compat", "strict"):
        r = chain(delta_p, iota_p, eps_p, mpf("0.8"), mpf("0.85"), mpf("0.8"),
                  mode)
        show("test_chain: published configuration, %s mode" % mode,
             [(k, r[k], 15) for k in order])
        if mode == "compat":
            show("test_chain/test_certificate: extras",
                 [("alpha1*tau1", r["alpha1"] * r["tau1"], 15),
                  ("NR tail(lambda0,1)",
                   exp(-2 * q["lambda0"]) / (1 - exp(-q["lambda0"])), 15)])

    w = chain(delta_p, iota_p, eps_p, mpf("0.7"), mpf("0.85"), mpf("0.9"),
              "compat")
    show("test_tuner: 27-grid winner (0.7, 0.85, 0.9)", [("eta", w["eta"], 20)])

    qd = quad(mpf("1e-40"), mpf("0.8"), mpf("1e-100"))
    fd = orbit(100, qd["N"], 320, qd["lambda0"], qd["alpha0"])
    print("== test_orbit: desk window (delta 1e-40, eps 1e-100, N=%d, "
          "Ntilde=%d)" % (qd["N"], fd["ntilde"]))
    for label, digits in [("range_len", 20), ("min_c", 20), ("a3_margin", 25),
                          ("a4_margin", 49), ("d2_direct", 15),
                          ("d3_direct", 15)]:
        print("  %-22s %s" % (label, p(fd[label], digits)))

    t0 = time.time()
    fp = orbit(4990, q["N"], 5120, q["lambda0"], q["alpha0"])
    print("== test_orbit: published window (N=%d, Ntilde=%d, %.1fs)"
          % (q["N"], fp["ntilde"], time.time() - t0))
    for label, digits in [("range_len", 20), ("min_c", 20)]:
        print("  %-22s %s" % (label, p(fp[label], digits)))


if __name__ == "__main__":
    main()
