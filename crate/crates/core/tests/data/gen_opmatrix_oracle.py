"""Reference entries (2j+1) * int_0^1 D^a L_i(x) L_j(x) dx for i, j <= 12.

D^a L_i comes from the power rule applied to the exact monomial form of the
shifted Legendre polynomial; the integral is done by tanh-sinh quadrature at
50 digits. Output: alpha,i,j,value with 20 significant digits.
"""
import sys
import mpmath as mp

mp.mp.dps = 50
N = 12
ALPHAS = ["0.25", "0.5", "0.75", "1.5", "2.5"]


def mono(i):
    return [(-1) ** (i + k) * mp.binomial(i + k, k) * mp.binomial(i, k) for k in range(i + 1)]


def main():
    out = sys.stdout
    out.write("alpha,i,j,value\n")
    for a_txt in ALPHAS:
        a = mp.mpf(a_txt)
        m = int(mp.ceil(a))
        for i in range(N + 1):
            terms = [(c * mp.gamma(k + 1) / mp.gamma(k + 1 - a), k - a) for k, c in enumerate(mono(i)) if k >= m]
            for j in range(N + 1):
                if not terms:
                    v = mp.mpf(0)
                else:
                    f = lambda x: sum(q * x ** p for q, p in terms) * mp.legendre(j, 2 * x - 1)
                    v = (2 * j + 1) * mp.quad(f, [0, mp.mpf(1) / 4, mp.mpf(1) / 2, 1])
                out.write(f"{a_txt},{i},{j},{mp.nstr(v, 20, min_fixed=-mp.inf, max_fixed=mp.inf) if v != 0 else '0'}\n")


if __name__ == "__main__":
    main()
