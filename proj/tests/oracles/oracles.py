"""Independent high-precision reference values for the C++ test suites.

Everything here uses exact integer polynomial expansion and mpmath at 50
digits; nothing imports or mirrors the C++ code paths. Run with
`python3 tests/oracles/oracles.py` to regenerate the numbers frozen into
tests/unit and tests/acceptance.
"""
from fractions import Fraction
import math
import sys

import mpmath as mp

mp.mp.dps = 50


def poly_pow(coeffs, V, cap):
    out = [1]
    for _ in range(V):
        nxt = [0] * min(len(out) + len(coeffs) - 1, cap + 1)
        for i, a in enumerate(out):
            if a == 0:
                continue
            for j, b in enumerate(coeffs):
                if i + j > cap:
                    break
                nxt[i + j] += a * b
        out = nxt
    return out


def dims(coeffs, V, cap):
    t = poly_pow(coeffs, V, cap)
    return t + [0] * (cap + 1 - len(t))


def phi(dA, dB, dN):
    big = max(dA, dB)
    m = min(mp.mpf(dA - 1) / (2 * dB), mp.mpf(dB - 1) / (2 * dA))
    return mp.digamma(dN + 1) - mp.digamma(big + 1) - m


def chi(dA, dB, dN):
    if dA <= dB:
        return ((dA + dB) * mp.psi(1, dB + 1) - (dN + 1) * mp.psi(1, dN + 1)
                - mp.mpf((dA - 1) * (dA + 2 * dB - 1)) / (4 * dB * dB))
    return ((dA + dB) * mp.psi(1, dA + 1) - (dN + 1) * mp.psi(1, dN + 1)
            - mp.mpf((dB - 1) * (dB + 2 * dA - 1)) / (4 * dA * dA))


def exact_mean_var(coeffs, V, N, VA):
    a = dims(coeffs, VA, N)
    b = dims(coeffs, V - VA, N)
    dN = dims(coeffs, V, N)[N]
    mean = mp.mpf(0)
    sq = mp.mpf(0)
    for NA in range(N + 1):
        dA, dB = a[NA], b[N - NA]
        if dA == 0 or dB == 0:
            continue
        rho = mp.mpf(Fraction(dA * dB, dN).numerator) / Fraction(dA * dB, dN).denominator
        p = phi(dA, dB, dN)
        mean += rho * p
        sq += rho * (p * p + chi(dA, dB, dN))
    var = (sq - mean * mean) / (dN + 1)
    return mean, var, dN


def beta_fermion(n):
    return -(n * mp.log(n) + (1 - n) * mp.log(1 - n))


def beta_spin1(n):
    s = mp.sqrt(1 - 3 * n * (n - 2))
    return ((n - 2) * mp.log(2 - n) + (n - 1) * mp.log(2)
            + mp.log(7 - 3 * n + s) - n * mp.log(n - 1 + s))


def section(title):
    print("\n== " + title)


if __name__ == "__main__":
    which = sys.argv[1:] or ["all"]
    if "all" in which or "numerics" in which:
        section("numerics")
        print("lnC(200,100)", mp.nstr(mp.log(math.comb(200, 100)), 20))
        print("psi(71)", mp.nstr(mp.digamma(71), 20))
        print("erfc(1)", mp.nstr(mp.erfc(1), 20))
        print("erfc(5)", mp.nstr(mp.erfc(5), 20), "erfc(-2.5)", mp.nstr(mp.erfc(-2.5), 20))
        for x in [0.5, 3, 7, 30, 200]:
            print("erfcx", x, mp.nstr(mp.exp(x * x) * mp.erfc(x), 20))
        d = 2 ** 70 + 12345
        print("psi(2^70+12346)", mp.nstr(mp.digamma(d + 1), 20),
              "trigamma", mp.nstr(mp.psi(1, d + 1), 20))
        print("psi1(17)", mp.nstr(mp.psi(1, 17), 20), "psi(17)", mp.nstr(mp.digamma(17), 20))
    if "all" in which or "dims" in which:
        section("dims")
        print("spin1 V4 N4", dims([1, 1, 1], 4, 4)[4])
        print("spin1 V3 N3", dims([1, 1, 1], 3, 3)[3])
        print("spin1 V8 N12", dims([1, 1, 1], 8, 12)[12])
        print("hcb2 V2", dims([1, 2], 2, 2))
        print("bosons V3 N2", dims([1] * 3, 3, 2)[2])
        print("spin1 V16 N24", dims([1, 1, 1], 16, 24)[24])
    if "all" in which or "entropy" in which:
        section("entropy")
        m, v, _ = exact_mean_var([1, 1], 2, 1, 1)
        print("fermions V2 N1 VA1", mp.nstr(m, 20), mp.nstr(v, 20))
        m, v, _ = exact_mean_var([1, 1], 8, 4, 4)
        print("fermions V8 N4 VA4", mp.nstr(m, 20), mp.nstr(v, 20))
        m, v, _ = exact_mean_var([1, 1], 10, 5, 5)
        print("fermions V10 N5 VA5", mp.nstr(m, 20), mp.nstr(v, 20))
        m, v, _ = exact_mean_var([1, 1], 6, 3, 3)
        print("fermions V6 N3 VA3", mp.nstr(m, 20), mp.nstr(v, 20))
        m, v, _ = exact_mean_var([1, 1, 1], 8, 12, 2)
        print("spin1 V8 N12 VA2", mp.nstr(m, 20))
        m, v, _ = exact_mean_var([1, 1, 1], 8, 12, 4)
        print("spin1 V8 N12 VA4", mp.nstr(m, 20))
        m, v, _ = exact_mean_var([1, 1, 1], 8, 4, 2)
        print("bh2 V8 N4 VA2", mp.nstr(m, 20))
        m, v, _ = exact_mean_var([1, 2, 1], 7, 5, 3)
        print("spinhalf-fermions V7 N5 VA3", mp.nstr(m, 20), mp.nstr(v, 20))
        b3 = mp.log(3) - mp.mpf(2) / 3 * mp.log(2)
        print("beta(1/3)", mp.nstr(b3, 20), "c(1/4)", mp.nstr((mp.mpf(1) / 4 + mp.log(mp.mpf(3) / 4)) / 2, 20))
        print("beta_spin1(1.5)", mp.nstr(beta_spin1(mp.mpf(1.5)), 20))
    if "all" in which or "accept" in which:
        section("acceptance probes")
        n = mp.mpf(3) / 2
        b = beta_spin1(n)
        b1 = mp.diff(beta_spin1, n)
        b2 = mp.diff(beta_spin1, n, 2)
        bs = beta_spin1(mp.mpf(1))
        b2s = mp.diff(beta_spin1, mp.mpf(1), 2)
        V = 16
        worst = 0
        for VA in range(0, V + 1):
            m, _, _ = exact_mean_var([1, 1, 1], V, 24, VA)
            f = mp.mpf(min(VA, V - VA)) / V
            if f == 0:
                res = 0
            else:
                F = f - mp.mpf(1) / 2
                x2 = V * abs(F) * b * mp.erfc(mp.sqrt(2 * V * abs(b2)) * abs(F) * b / abs(b1)) \
                    - abs(b1) * mp.sqrt(V / (2 * mp.pi * abs(b2))) * mp.exp(-2 * V * abs(b2) * F**2 * b**2 / b1**2)
                d = n - 1
                pre = mp.exp(d**2 / 2 * V * abs(b2s))
                arg = mp.sqrt(abs(b2s) * V / 2) / abs(d * b2s)
                x1 = pre / 2 * (mp.exp(2 * F * V * bs) * mp.erfc(arg * (d**2 * abs(b2s) + 2 * F * bs))
                                + mp.exp(-2 * F * V * bs) * mp.erfc(arg * (d**2 * abs(b2s) - 2 * F * bs)))
                res = b * f * V + (f + mp.log(1 - f)) / 2 + x2 - x1 / 2
            worst = max(worst, abs(res - m))
            print("spin1 V16 VA", VA, mp.nstr(m, 12), mp.nstr(res, 12), mp.nstr(res - m, 6))
        print("worst", mp.nstr(worst, 6))

    if "all" in which or "accept2" in which:
        section("acceptance probes 2")
        # Criterion 3: ln d_N vs saddle form, fermions n=1/3
        n = mp.mpf(1) / 3
        b = beta_fermion(n)
        b2 = -1 / (n * (1 - n))
        al = mp.sqrt(-b2 / (2 * mp.pi))
        for V in range(60, 601, 60):
            N = V // 3
            print("lnd gap V", V, mp.nstr(mp.log(math.comb(V, N)) - (V * b - mp.log(V) / 2 + mp.log(al)), 8))
        # Criterion 5
        b1 = mp.log(2)
        for V in [80, 160, 320, 640]:
            m, v, dN = exact_mean_var([1, 1], V, V // 3 if V % 3 == 0 else round(V / 3), V // 4)
            N = round(V / 3)
            nn = mp.mpf(N) / V
            asym = beta_fermion(nn) * V / 4 + (mp.mpf(1) / 4 + mp.log(mp.mpf(3) / 4)) / 2
            print("crit5 f=1/4 V", V, "N", N, mp.nstr(m - asym, 8))
        for V in [160, 320, 640]:
            N = round(V / 3)
            nn = mp.mpf(N) / V
            m, v, dN = exact_mean_var([1, 1], V, N, V // 2)
            bb = beta_fermion(nn); bb1 = mp.log((1 - nn) / nn); bb2 = -1 / (nn * (1 - nn))
            coef = (m - bb * V / 2 - (mp.mpf(1) / 2 + mp.log(mp.mpf(1) / 2)) / 2) / mp.sqrt(V)
            print("crit5 sqrtV coef V", V, mp.nstr(coef, 8), "target", mp.nstr(-abs(bb1) / mp.sqrt(2 * mp.pi * abs(bb2)), 8))
        # Criterion 8
        for V in [100, 200]:
            N = round(V / 3)
            nn = mp.mpf(N) / V
            m, v, dN = exact_mean_var([1, 1], V, N, V // 4)
            bb1 = mp.log((1 - nn) / nn); bb2 = -1 / (nn * (1 - nn))
            target = mp.mpf(3) / 16 * bb1**2 / abs(bb2)
            print("crit8 V", V, "N", N, mp.nstr(v * (dN + 1) / V, 8), "target", mp.nstr(target, 8))
        # Criterion 10
        import numpy as np
        Vs = list(range(50, 401, 50))
        vals = []
        for V in Vs:
            VA = V // 4; N = V
            dN = V ** N
            s = mp.mpf(0)
            for NA in range(N + 1):
                dA = VA ** NA; dB = (V - VA) ** (N - NA)
                rho = mp.mpf(math.comb(N, NA) * dA * dB) / dN
                if rho < mp.mpf(10) ** -40:
                    continue
                s += rho * phi(dA, dB, dN)
            vals.append(float(s))
            print("dist V", V, mp.nstr(s, 12))
        A = np.array([[V * math.log(V), V] for V in Vs])
        c = np.linalg.lstsq(A, np.array(vals), rcond=None)[0]
        print("fit c1 c2", c)
