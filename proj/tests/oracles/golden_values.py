#!/usr/bin/env python3
"""Arbitrary-precision reference values frozen into the C++ unit tests.

Run with `python3 tests/oracles/golden_values.py`; the printed numbers are
pasted into tests/test_physchem.cpp and tests/test_sampling.cpp.  This script
is deliberately independent of the C++ implementation: it substitutes the
drug parameters straight into the closed-form expressions using mpmath.
"""
from mpmath import mp, mpf, sqrt, exp, log, cbrt, gamma

mp.dps = 40
G = mpf("9.81")

DRUGS = {
    "theophylline-25": dict(rho_s=1490, C_s0="11.6", C_sf="6.1", k_r="6e-3", k_rb="6.6e-3",
                            k_m_inf="3.7e-3", D="6.2e-10", rho_f=1000, eta_f="1e-3",
                            nu_f="1e-6", alpha="1e-15", d_T="1e-9"),
    "theophylline-37": dict(rho_s=1490, C_s0="12.495", C_sf="6.569", k_r="6e-3", k_rb="5.7e-3",
                            k_m_inf="2e-3", D="8.2e-10", rho_f=993, eta_f="6.91e-4",
                            nu_f="6.96e-7", alpha="1e-15", d_T="2.6e-10"),
    "griseofulvin-37": dict(rho_s=1495, C_s0="0.494", C_sf="0.025", k_r="8.8e-3", k_rb="8.36e-3",
                            k_m_inf="0.126", D="7.057e-10", rho_f=993, eta_f="6.91e-4",
                            nu_f="6.96e-7", alpha="1e-15", d_T="3.10e-10"),
    "nimesulide-37": dict(rho_s=1476, C_s0="4.108", C_sf="0.028", k_r="1.3e-2", k_rb="1.235e-2",
                          k_m_inf="1.8e-7", D="7.388e-10", rho_f=993, eta_f="6.91e-4",
                          nu_f="6.96e-7", alpha="1e-15", d_T="2.82e-10"),
}


def params(name):
    return {k: mpf(str(v)) for k, v in DRUGS[name].items()}


def solubility(t, p):
    return p["C_sf"] + (p["C_s0"] - p["C_sf"]) * exp(-p["k_r"] * t)


def delta_u(r_eq, p):
    return (p["rho_s"] - p["rho_f"]) * G * (2 * r_eq) ** 2 / (18 * p["eta_f"])


def k_d_curved(r, r_eq, p):
    return p["D"] / (2 * r) * (2 + mpf("0.6") * sqrt(2 * r * delta_u(r_eq, p) / p["nu_f"])
                               * cbrt(p["nu_f"] / p["D"]))


def k_d_flat(r_eq, p):
    return mpf("0.621") * p["D"] ** (mpf(2) / 3) * p["nu_f"] ** (-mpf(1) / 6) * sqrt(delta_u(r_eq, p) / r_eq)


def r_plane(r_eq, p):
    c = p["D"] ** (mpf(2) / 3) * p["nu_f"] ** (-mpf(1) / 6)
    g1 = mpf("0.1") * c * sqrt(4 * G * (p["rho_s"] - p["rho_f"]) / p["eta_f"]) * r_eq
    g2 = mpf("0.207") * c * sqrt(2 * G * (p["rho_s"] - p["rho_f"]) / p["eta_f"]) * sqrt(r_eq)
    return g1 / 2 * ((g1 + sqrt(g1 ** 2 + 4 * p["D"] * g2)) / g2 ** 2) + p["D"] / g2


def k_m(r, p):
    return p["k_m_inf"] * (p["alpha"] / r ** 3 + r / (r + 2 * p["d_T"]))


def overall_k(r, r_eq, p):
    if r <= r_plane(r_eq, p):
        kd = k_d_curved(r, r_eq, p)
    else:
        kd = k_d_flat(r_eq, p)
    sigma = 1 + p["D"] / (kd * r)
    return 1 / (sigma * (1 / kd + sigma / k_m(r, p)))


def main():
    t37 = params("theophylline-37")
    um = mpf("1e-6")
    print("solubility(ln2/k_r) theo37      ", mp.nstr(solubility(log(2) / t37["k_r"], t37), 17))
    print("delta_u(50um) theo37            ", mp.nstr(delta_u(50 * um, t37), 17))
    print("k_d_curved(50um,50um) theo37    ", mp.nstr(k_d_curved(50 * um, 50 * um, t37), 17))
    print("k_d_flat(50um) theo37           ", mp.nstr(k_d_flat(50 * um, t37), 17))
    print("r_plane(50um) theo37            ", mp.nstr(r_plane(50 * um, t37), 17))
    print("k_m(1um) theo37                 ", mp.nstr(k_m(1 * um, t37), 17))
    print("r_eq(9125.78um^2) [um]          ", mp.nstr(sqrt(mpf("9125.78") / mp.pi), 17))
    for name in DRUGS:
        p = params(name)
        for r in (5, 50, 250):
            print(f"r_plane({r}um) {name:16s}", mp.nstr(r_plane(r * um, p), 17),
                  " K(R=R_eq)", mp.nstr(overall_k(r * um, r * um, p), 17))
    lam, k = mpf("5.4"), mpf("1.9")
    print("weibull Q(0.5)                  ", mp.nstr(lam * (-log(1 - mpf("0.5"))) ** (1 / k), 17))
    print("weibull mean                    ", mp.nstr(lam * gamma(1 + 1 / k), 17))


if __name__ == "__main__":
    main()
