"""Independent high-precision evaluation of the reference values frozen in the tests.

Uses mpmath only (no optocool imports) so the numbers are not produced by
the code they check. Run ``python scripts/oracle_values.py`` to reprint them.
"""
import mpmath as mp

mp.mp.dps = 50


def nbar(w, T):
    return 1 / (mp.exp(mp.mpf(w) / T) - 1)


def G(w, T, k, family="ohmic"):
    w = mp.mpf(w)
    strength = k * abs(w) if family == "ohmic" else k
    return strength * (1 + nbar(w, T)) if w > 0 else strength * nbar(-w, T)


FIG2 = dict(wa=mp.mpf(1), w1=mp.mpf("1e-7"), kh=mp.mpf("1e-8"), kc=mp.mpf("1e-8"),
            k1=mp.mpf("1e-12"), Tc=mp.mpf("1e-5"), g1=mp.mpf("1e-9"))


def cooling_point(Th, T1, Tc=FIG2["Tc"], p=FIG2):
    wa, w1 = p["wa"], p["w1"]
    z2 = (p["g1"] / w1) ** 2
    wm = wa - w1
    na = (G(-wa, Tc, p["kc"]) + G(-w1, T1, p["k1"])) / (
        G(wa, Tc, p["kc"]) - G(-wa, Tc, p["kc"]) + G(w1, T1, p["k1"]) - G(-w1, T1, p["k1"]))
    Am = z2 * G(-wm, Th, p["kh"]) * (na + 1)
    Ap = z2 * G(wm, Th, p["kh"]) * na
    Atm, Atp = G(w1, T1, p["k1"]), G(-w1, T1, p["k1"])
    n1 = (Ap + Atp) / (Am - Ap + Atm - Atp)
    return dict(na=na, A_minus=Am, A_plus=Ap, A_th_minus=Atm, A_th_plus=Atp, n1=n1)


def full_point(Th, T1, p=FIG2):
    wa, w1 = p["wa"], p["w1"]
    z2 = (p["g1"] / w1) ** 2
    wm, wp = wa - w1, wa + w1
    Tc = p["Tc"]
    na = mp.mpf(0)
    Am = z2 * sum(G(wp, T, k) * na + G(-wm, T, k) * (na + 1) for T, k in ((Th, p["kh"]), (Tc, p["kc"])))
    Ap = z2 * sum(G(wm, T, k) * na + G(-wp, T, k) * (na + 1) for T, k in ((Th, p["kh"]), (Tc, p["kc"])))
    return dict(A_minus=Am, A_plus=Ap)


def main():
    show = lambda label, v: print(f"{label:45s} {mp.nstr(v, 17)}")
    show("thermal dim70 nbar10 mean", sum(n * (mp.mpf(10) / 11) ** n for n in range(70))
         / sum((mp.mpf(10) / 11) ** n for n in range(70)))
    show("thermal dim40 nbar3 mean", sum(n * (mp.mpf(3) / 4) ** n for n in range(40))
         / sum((mp.mpf(3) / 4) ** n for n in range(40)))
    show("spectrum w=.5 T=.5 k=1 ohmic", G(mp.mpf("0.5"), mp.mpf("0.5"), 1))
    show("1/(e-1)", 1 / (mp.e - 1))
    for label, Th, T1 in (("fig2 solid Th=1e-3 T1=1e-4", "1e-3", "1e-4"),
                          ("fig2 dashed Th=1e-3 T1=2e-4", "1e-3", "2e-4"),
                          ("fig2 dashed Th=100 T1=2e-4", "100", "2e-4")):
        r = cooling_point(mp.mpf(Th), mp.mpf(T1))
        for k, v in r.items():
            show(f"{label} {k}", v)
    r = full_point(mp.mpf(100), mp.mpf("2e-4"))
    for k, v in r.items():
        show(f"full Th=100 T1=2e-4 na=0 {k}", v)
    # fig5 preset cavity occupation, nbar_c = 0.5, nbar_1 = 10
    Tc = 1 / mp.log(3)
    T1 = FIG2["w1"] / mp.log(mp.mpf("1.1"))
    num = G(-1, Tc, FIG2["kc"]) + G(-FIG2["w1"], T1, FIG2["k1"])
    show("fig5 na balance form", num / (G(1, Tc, FIG2["kc"]) - G(-1, Tc, FIG2["kc"])
                                        + G(FIG2["w1"], T1, FIG2["k1"]) - G(-FIG2["w1"], T1, FIG2["k1"])))
    show("fig5 na sum form", num / (G(1, Tc, FIG2["kc"]) + G(-1, Tc, FIG2["kc"])
                                    + G(FIG2["w1"], T1, FIG2["k1"]) + G(-FIG2["w1"], T1, FIG2["k1"])))


if __name__ == "__main__":
    main()
