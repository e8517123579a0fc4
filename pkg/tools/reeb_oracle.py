"""Independent oracle for the default Reeb profile.

Differentiates ``exp(1/(1-t^2)) - E`` symbolically with sympy and evaluates
at exact rational points ``t_k = 1 - 10^-k`` with ``evalf``.  Shares no code
with the package's Taylor arithmetic.  Writes the golden JSON consumed by
``leafclass.reeb`` and the tests.

    python3 tools/reeb_oracle.py > src/leafclass/data/reeb_golden.json
"""
import json

import sympy as sp

DIGITS = 60
N_MAX = 5
K_MAX = 4


def sig(x, digits=DIGITS):
    return sp.Float(x, digits).__format__(f".{digits - 1}e")


def round_away(x, up: bool, digits: int = 4) -> str:
    """Decimal string with ``digits`` significant digits, rounded up or down in magnitude."""
    x = sp.Float(x, DIGITS)
    mant, exp = f"{x:.{DIGITS - 1}e}".split("e")
    m = sp.Rational(mant)
    scale = sp.Integer(10) ** (digits - 1)
    m = (sp.ceiling(m * scale) if up else sp.floor(m * scale)) / scale
    return f"{sp.Float(m, digits + 2):.{digits - 1}e}".split("e")[0] + "e" + str(int(exp))


def main():
    t = sp.Symbol("t")
    f = sp.exp(1 / (1 - t**2)) - sp.E
    ders = [f]
    for _ in range(N_MAX + 1):
        ders.append(sp.diff(ders[-1], t))
    out = {"profile": "exp(1/(1-t^2)) - e", "digits": DIGITS, "points": {},
           "ratio": {}, "ratio_derivative": {}, "f2_over_f1": {},
           "thresholds": {"ratio": {}, "f2_over_f1": {}}}
    for k in range(1, K_MAX + 1):
        tk = 1 - sp.Rational(1, 10**k)
        out["points"][str(k)] = str(tk)
        d = [e.subs(t, tk).evalf(DIGITS + 20) for e in ders]
        for n in range(2, N_MAX + 1):
            r = d[n] / d[1] ** n
            rd = d[n + 1] / d[1] ** n - n * d[n] * d[2] / d[1] ** (n + 1)
            out["ratio"].setdefault(str(n), {})[str(k)] = sig(r)
            out["ratio_derivative"].setdefault(str(n), {})[str(k)] = sig(rd)
            out["thresholds"]["ratio"].setdefault(str(n), {})[str(k)] = round_away(abs(r), up=True)
        g = d[2] / d[1]
        out["f2_over_f1"][str(k)] = sig(g)
        out["thresholds"]["f2_over_f1"][str(k)] = round_away(g, up=False)
    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
